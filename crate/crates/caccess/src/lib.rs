//! Spatial inequality analytics for health-service access.
//!
//! The model takes a region of local government areas (LGAs) served by a set
//! of facilities. Annual case incidence scales with population, expected
//! separations scale with incidence through a constant multiplier, and
//! realised separations shrink with round-trip distance to the nearest
//! facility through a non-increasing decay factor. The separation-to-
//! incidence ratio per LGA is the attribute whose spatial inequality is
//! measured: sorted ratios yield a Lorenz curve, and Gini and Atkinson
//! indices summarise it. A planner evaluates where adding facilities
//! reduces inequality the most.
//!
//! The numeric core is generic over the floating-point type through
//! [`Scalar`]; the aliases at the crate root fix it to `f64`, which is what
//! the CLI and the file formats use.
//!
//! ```
//! let scenario = caccess::sample::region::<f64>();
//! let report = caccess::planner::evaluate(&scenario).unwrap();
//! assert!(report.gini > 0.0 && report.gini < 1.0);
//! ```

pub mod distance;
pub mod inequality;
pub mod io;
pub mod model;
pub mod planner;
pub mod sample;
pub mod scalar;

pub use scalar::Scalar;

/// Double-precision region definition.
pub type Scenario = model::Scenario<f64>;
/// Double-precision LGA.
pub type Lga = model::Lga<f64>;
/// Double-precision facility.
pub type Facility = model::Facility<f64>;
/// Double-precision planar position.
pub type Location = model::Location<f64>;
/// Double-precision per-LGA result row.
pub type LgaResult = model::LgaResult<f64>;
/// Double-precision distance-decay factor.
pub type DistanceFactor = distance::DistanceFactor<f64>;
/// Double-precision decay family.
pub type Decay = distance::Decay<f64>;
/// Double-precision Lorenz coordinate.
pub type LorenzPoint = inequality::LorenzPoint<f64>;
/// Double-precision Lorenz curve.
pub type LorenzCurve = inequality::LorenzCurve<f64>;
/// Double-precision sorted ratio sequence.
pub type SortedRatios = inequality::SortedRatios<f64>;
/// Double-precision inequality report.
pub type InequalityReport = inequality::InequalityReport<f64>;
/// Double-precision scenario comparison.
pub type ScenarioComparison = planner::ScenarioComparison<f64>;
/// Double-precision ranked placement.
pub type PlanResult = planner::PlanResult<f64>;
/// Double-precision pipeline output bundle.
pub type RegionEvaluation = planner::RegionEvaluation<f64>;
/// Double-precision results table.
pub type ResultsTable = io::ResultsTable<f64>;
