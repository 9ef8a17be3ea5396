//! Bundled example region used by the fixtures, tests and documentation.
//!
//! Thirteen LGAs named A through M sit on an east-west line at 100 km
//! spacing, with a single facility in the middle LGA (G). Populations range
//! from a regional town to a large city. The decay table is calibrated so
//! that full access (factor 1) holds up to a 300 km round trip and falls to
//! about 0.05 at 1200 km.

use crate::distance::DistanceFactor;
use crate::model::{Facility, Lga, Location, Mode, Scenario};
use crate::scalar::Scalar;

const NAMES: [&str; 13] = [
    "A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M",
];

/// Persons per LGA, west to east.
const POPULATIONS: [u64; 13] = [
    10_000, 521_000, 5_631_000, 1_543_000, 2_054_000, 5_631_000, 3_076_000, 521_000, 4_098_000,
    4_609_000, 521_000, 5_631_000, 6_142_000,
];

/// Utilisation ratios the decay table is calibrated against, by round-trip
/// distance 0, 200, .., 1200 km, at multiplier 0.6.
const CALIBRATION_RATIOS: [f64; 7] = [0.6, 0.6, 0.4, 0.144, 0.0735, 0.0444, 0.0302];

/// Recorded separations per 10,000 recorded cases in the observed variant.
const OBSERVED_SEPARATIONS: [u64; 13] = [
    302, 444, 735, 1440, 4000, 6000, 6000, 6000, 4000, 1440, 735, 444, 298,
];

const INCIDENCE_RATE: f64 = 529.1;
const MULTIPLIER: f64 = 0.6;

fn lga_line<S: Scalar>() -> Vec<Lga<S>> {
    NAMES
        .iter()
        .zip(POPULATIONS)
        .enumerate()
        .map(|(i, (&name, population))| Lga {
            index: i as u32 + 1,
            name: name.to_string(),
            population,
            location: Location::new(S::from_config(-600.0 + 100.0 * i as f64), S::zero()),
            observed_incidence: None,
            observed_separations: None,
            observed_patients: None,
        })
        .collect()
}

fn calibrated_factor<S: Scalar>() -> DistanceFactor<S> {
    let points = CALIBRATION_RATIOS
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            (
                S::from_config(200.0 * i as f64),
                S::from_config(t) / S::from_config(MULTIPLIER),
            )
        })
        .collect();
    DistanceFactor::table(points).expect("calibrated table is valid")
}

/// The simulated example region.
pub fn region<S: Scalar>() -> Scenario<S> {
    Scenario {
        name: "linear-13-lga".to_string(),
        incidence_rate_per_100k: S::from_config(INCIDENCE_RATE),
        multiplier_c: S::from_config(MULTIPLIER),
        distance_factor: calibrated_factor(),
        lgas: lga_line(),
        facilities: vec![Facility {
            id: "G".to_string(),
            location: Location::new(S::zero(), S::zero()),
        }],
        mode: Mode::Simulated,
    }
}

/// The observed variant: same geometry, utilisation taken from recorded
/// counts (per 10,000 recorded cases) instead of the decay model.
pub fn observed_region<S: Scalar>() -> Scenario<S> {
    let mut scenario = region::<S>();
    scenario.name = "linear-13-lga-observed".to_string();
    scenario.mode = Mode::Observed;
    for (lga, separations) in scenario.lgas.iter_mut().zip(OBSERVED_SEPARATIONS) {
        lga.observed_incidence = Some(10_000);
        lga.observed_separations = Some(separations);
    }
    scenario
}

/// The thirteen LGA centres, usable as candidate facility sites.
pub fn candidate_sites<S: Scalar>() -> Vec<Location<S>> {
    lga_line::<S>().into_iter().map(|lga| lga.location).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_variants_validate() {
        assert!(region::<f64>().validate().is_ok());
        assert!(observed_region::<f64>().validate().is_ok());
        assert_eq!(candidate_sites::<f64>().len(), 13);
    }
}
