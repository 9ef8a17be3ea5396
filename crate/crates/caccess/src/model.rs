//! Region data model and the utilisation pipeline.
//!
//! A [`Scenario`] describes a health-service region: local government areas
//! (LGAs), treatment facilities, an annual incidence rate, a separations
//! multiplier and a distance-decay factor. [`simulate_region`] turns it into
//! one [`LgaResult`] per LGA:
//!
//! - incidence `I = round(population * rate / 100_000)`
//! - target separations `T = round(C * I)`
//! - actual separations `S = round(C * I * g(D))` with `D` the round-trip
//!   distance to the nearest facility
//! - utilisation ratio `t = C * g(D)` (simulated) or `S / I` (observed)

use thiserror::Error;

use crate::distance::DistanceFactor;
use crate::scalar::{round_to_count, Scalar};

/// Planar position in kilometres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location<S: Scalar> {
    pub x_km: S,
    pub y_km: S,
}

impl<S: Scalar> Location<S> {
    pub fn new(x_km: S, y_km: S) -> Self {
        Self { x_km, y_km }
    }
}

/// One local government area.
#[derive(Debug, Clone, PartialEq)]
pub struct Lga<S: Scalar> {
    /// 1-based ordinal, unique and contiguous within a region.
    pub index: u32,
    pub name: String,
    /// Residents, in persons.
    pub population: u64,
    pub location: Location<S>,
    /// Recorded new cases, when available.
    pub observed_incidence: Option<u64>,
    /// Recorded same-day separations, when available.
    pub observed_separations: Option<u64>,
    /// Recorded distinct patients, when available. Carried through the data
    /// model but not used by the pipeline.
    pub observed_patients: Option<u64>,
}

/// A treatment facility.
#[derive(Debug, Clone, PartialEq)]
pub struct Facility<S: Scalar> {
    pub id: String,
    pub location: Location<S>,
}

/// Whether utilisation ratios come from the decay model or from records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Simulated,
    Observed,
}

/// A region definition: the full input to the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<S: Scalar> {
    pub name: String,
    /// New cases per 100,000 persons per year.
    pub incidence_rate_per_100k: S,
    /// Expected separations per new case under full access.
    pub multiplier_c: S,
    pub distance_factor: DistanceFactor<S>,
    pub lgas: Vec<Lga<S>>,
    pub facilities: Vec<Facility<S>>,
    pub mode: Mode,
}

/// Geometry of an LGA's assignment to its nearest facility.
#[derive(Debug, Clone, PartialEq)]
pub struct FacilityAssignment<S: Scalar> {
    pub facility_id: String,
    pub round_trip_km: S,
    /// Decay factor evaluated at `round_trip_km`.
    pub distance_factor: S,
}

/// Computed row for one LGA.
#[derive(Debug, Clone, PartialEq)]
pub struct LgaResult<S: Scalar> {
    pub lga_index: u32,
    /// `None` only in observed mode when the scenario lists no facilities.
    pub assignment: Option<FacilityAssignment<S>>,
    pub incidence: u64,
    pub target_separations: u64,
    pub actual_separations: u64,
    /// Separation-to-incidence ratio.
    pub ratio: S,
}

impl<S: Scalar> LgaResult<S> {
    pub fn round_trip_km(&self) -> Option<S> {
        self.assignment.as_ref().map(|a| a.round_trip_km)
    }

    pub fn distance_factor(&self) -> Option<S> {
        self.assignment.as_ref().map(|a| a.distance_factor)
    }
}

/// Errors raised while running the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("scenario lists no facilities")]
    EmptyFacilities,
    #[error("observed incidence is zero, ratio undefined")]
    ZeroIncidence,
    #[error("observed mode requires observed incidence and separations")]
    MissingObservedData,
}

/// A scenario invariant violation, with the path of the offending field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct InvariantViolation {
    pub path: String,
    pub message: String,
}

impl InvariantViolation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl<S: Scalar> Scenario<S> {
    /// Checks every scenario invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), InvariantViolation> {
        if !self.incidence_rate_per_100k.is_finite() || self.incidence_rate_per_100k <= S::zero() {
            return Err(InvariantViolation::new(
                "incidence_rate_per_100k",
                "must be finite and positive",
            ));
        }
        if !self.multiplier_c.is_finite() || self.multiplier_c <= S::zero() {
            return Err(InvariantViolation::new(
                "multiplier_c",
                "must be finite and positive",
            ));
        }
        if self.lgas.is_empty() {
            return Err(InvariantViolation::new("lgas", "region needs at least one LGA"));
        }
        // Indices must form exactly 1..=N; the listing order is free.
        let mut seen = vec![false; self.lgas.len()];
        for (pos, lga) in self.lgas.iter().enumerate() {
            let path = |field: &str| format!("lgas[{pos}].{field}");
            let index = lga.index as usize;
            if index == 0 || index > self.lgas.len() {
                return Err(InvariantViolation::new(
                    path("index"),
                    format!("index {} outside 1..={}", lga.index, self.lgas.len()),
                ));
            }
            if seen[index - 1] {
                return Err(InvariantViolation::new(
                    path("index"),
                    format!("duplicate index {}", lga.index),
                ));
            }
            seen[index - 1] = true;
            if !lga.location.x_km.is_finite() || !lga.location.y_km.is_finite() {
                return Err(InvariantViolation::new(
                    path("x_km"),
                    "coordinates must be finite",
                ));
            }
            if lga.observed_separations.is_some() {
                match lga.observed_incidence {
                    None => {
                        return Err(InvariantViolation::new(
                            path("observed_incidence"),
                            "required when observed_separations is present",
                        ))
                    }
                    Some(0) => {
                        return Err(InvariantViolation::new(
                            path("observed_incidence"),
                            "must be positive when observed_separations is present",
                        ))
                    }
                    Some(_) => {}
                }
            }
            if self.mode == Mode::Observed
                && (lga.observed_incidence.is_none() || lga.observed_separations.is_none())
            {
                return Err(InvariantViolation::new(
                    format!("lgas[{pos}]"),
                    "observed mode requires observed_incidence and observed_separations",
                ));
            }
        }
        if self.mode == Mode::Simulated && self.facilities.is_empty() {
            return Err(InvariantViolation::new(
                "facilities",
                "simulated mode requires at least one facility",
            ));
        }
        for (pos, facility) in self.facilities.iter().enumerate() {
            if !facility.location.x_km.is_finite() || !facility.location.y_km.is_finite() {
                return Err(InvariantViolation::new(
                    format!("facilities[{pos}].x_km"),
                    "coordinates must be finite",
                ));
            }
            if self.facilities[..pos].iter().any(|f| f.id == facility.id) {
                return Err(InvariantViolation::new(
                    format!("facilities[{pos}].id"),
                    format!("duplicate facility id {:?}", facility.id),
                ));
            }
        }
        Ok(())
    }
}

/// Expected new cases: `round(population * rate / 100_000)`.
pub fn incidence_count<S: Scalar>(population: u64, rate_per_100k: S) -> u64 {
    let cases = S::from_count(population) * rate_per_100k / S::from_config(100_000.0);
    round_to_count(cases)
}

/// Separations expected under full access: `round(c * incidence)`.
pub fn target_separations<S: Scalar>(incidence: u64, multiplier_c: S) -> u64 {
    round_to_count(multiplier_c * S::from_count(incidence))
}

/// Round-trip distance between two locations: twice the Euclidean distance.
pub fn round_trip_distance<S: Scalar>(a: Location<S>, b: Location<S>) -> S {
    let dx = a.x_km - b.x_km;
    let dy = a.y_km - b.y_km;
    let two = S::one() + S::one();
    two * (dx * dx + dy * dy).sqrt()
}

/// The facility closest to the LGA, with its round-trip distance.
///
/// Ties resolve to the facility listed first.
pub fn nearest_facility<'a, S: Scalar>(
    lga: &Lga<S>,
    facilities: &'a [Facility<S>],
) -> Result<(&'a Facility<S>, S), ModelError> {
    let mut best: Option<(&Facility<S>, S)> = None;
    for facility in facilities {
        let d = round_trip_distance(lga.location, facility.location);
        match best {
            Some((_, best_d)) if d >= best_d => {}
            _ => best = Some((facility, d)),
        }
    }
    best.ok_or(ModelError::EmptyFacilities)
}

/// Separation-to-incidence ratio for one LGA.
///
/// Simulated mode returns exactly `c * g_value` with no rounding; observed
/// mode divides the recorded counts.
pub fn utilisation_ratio<S: Scalar>(
    mode: Mode,
    c: S,
    g_value: S,
    observed_incidence: Option<u64>,
    observed_separations: Option<u64>,
) -> Result<S, ModelError> {
    match mode {
        Mode::Simulated => Ok(c * g_value),
        Mode::Observed => {
            let incidence = observed_incidence.ok_or(ModelError::MissingObservedData)?;
            let separations = observed_separations.ok_or(ModelError::MissingObservedData)?;
            if incidence == 0 {
                return Err(ModelError::ZeroIncidence);
            }
            Ok(S::from_count(separations) / S::from_count(incidence))
        }
    }
}

/// Runs the utilisation pipeline over every LGA, in index order.
pub fn simulate_region<S: Scalar>(scenario: &Scenario<S>) -> Result<Vec<LgaResult<S>>, ModelError> {
    let mut order: Vec<&Lga<S>> = scenario.lgas.iter().collect();
    order.sort_by_key(|lga| lga.index);

    let mut results = Vec::with_capacity(order.len());
    for lga in order {
        let assignment = if scenario.facilities.is_empty() {
            if scenario.mode == Mode::Simulated {
                return Err(ModelError::EmptyFacilities);
            }
            None
        } else {
            let (facility, d) = nearest_facility(lga, &scenario.facilities)?;
            Some(FacilityAssignment {
                facility_id: facility.id.clone(),
                round_trip_km: d,
                distance_factor: scenario.distance_factor.evaluate(d),
            })
        };

        let incidence = match scenario.mode {
            Mode::Simulated => incidence_count(lga.population, scenario.incidence_rate_per_100k),
            Mode::Observed => lga.observed_incidence.ok_or(ModelError::MissingObservedData)?,
        };
        let target = target_separations(incidence, scenario.multiplier_c);

        let (actual, ratio) = match scenario.mode {
            Mode::Simulated => {
                let g = assignment
                    .as_ref()
                    .map(|a| a.distance_factor)
                    .unwrap_or_else(S::one);
                let actual = round_to_count(
                    scenario.multiplier_c * S::from_count(incidence) * g,
                );
                let ratio =
                    utilisation_ratio(scenario.mode, scenario.multiplier_c, g, None, None)?;
                (actual, ratio)
            }
            Mode::Observed => {
                let separations = lga
                    .observed_separations
                    .ok_or(ModelError::MissingObservedData)?;
                let ratio = utilisation_ratio(
                    scenario.mode,
                    scenario.multiplier_c,
                    S::one(),
                    Some(incidence),
                    Some(separations),
                )?;
                (separations, ratio)
            }
        };

        results.push(LgaResult {
            lga_index: lga.index,
            assignment,
            incidence,
            target_separations: target,
            actual_separations: actual,
            ratio,
        });
    }
    Ok(results)
}
