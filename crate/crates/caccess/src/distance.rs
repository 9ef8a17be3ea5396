//! Distance-decay modelling.
//!
//! A [`DistanceFactor`] maps a round-trip travel distance to an accessibility
//! multiplier in `[0, 1]`: 1 means full access, 0 means no access. The factor
//! is 1 at and below a full-access threshold and never increases with
//! distance. Two variants are supported: a table of sample points joined by
//! linear interpolation, and a parametric decay family beyond a threshold.

use thiserror::Error;

use crate::scalar::Scalar;

/// Violations of the distance-factor contract, reported at construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistanceFactorError {
    #[error("table needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("table point {index}: distance must be finite and non-negative")]
    InvalidDistance { index: usize },
    #[error("table distances must be strictly increasing (point {index})")]
    NonIncreasingDistance { index: usize },
    #[error("table point {index}: factor {value} out of [0,1]")]
    FactorOutOfRange { index: usize, value: f64 },
    #[error("table must start at full access (first factor is {0}, expected 1)")]
    NoFullAccessStart(f64),
    #[error("table factors must be non-increasing with distance (point {index})")]
    IncreasingFactor { index: usize },
    #[error("full-access distance must be finite and non-negative")]
    InvalidThreshold,
    #[error("decay parameter {name} must be {requirement}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
    },
}

/// Parametric decay families applied beyond the full-access distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay<S: Scalar> {
    /// `exp(-rate * excess)` where `excess` is the distance past the threshold.
    Exponential { rate_per_km: S },
    /// `(1 + excess / scale_km)^-exponent`.
    Power { exponent: S, scale_km: S },
    /// Linear ramp from 1 at the threshold to 0 at `zero_access_km`, 0 beyond.
    Linear { zero_access_km: S },
}

/// A validated, non-increasing accessibility multiplier over distance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceFactor<S: Scalar> {
    kind: Kind<S>,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind<S: Scalar> {
    Table { points: Vec<(S, S)> },
    Parametric { full_access_km: S, decay: Decay<S> },
}

impl<S: Scalar> DistanceFactor<S> {
    /// Builds a table factor from `(round_trip_km, factor)` samples.
    ///
    /// The table must hold at least two points with strictly increasing
    /// distances, factors in `[0, 1]` that never increase, and full access
    /// (factor 1) at the first point.
    pub fn table(points: Vec<(S, S)>) -> Result<Self, DistanceFactorError> {
        if points.len() < 2 {
            return Err(DistanceFactorError::TooFewPoints(points.len()));
        }
        let mut prev: Option<(S, S)> = None;
        for (index, &(d, g)) in points.iter().enumerate() {
            if !d.is_finite() || d < S::zero() {
                return Err(DistanceFactorError::InvalidDistance { index });
            }
            if !g.is_finite() || g < S::zero() || g > S::one() {
                return Err(DistanceFactorError::FactorOutOfRange {
                    index,
                    value: g.to_f64().unwrap_or(f64::NAN),
                });
            }
            if let Some((pd, pg)) = prev {
                if d <= pd {
                    return Err(DistanceFactorError::NonIncreasingDistance { index });
                }
                if g > pg {
                    return Err(DistanceFactorError::IncreasingFactor { index });
                }
            }
            prev = Some((d, g));
        }
        let first = points[0].1;
        if first != S::one() {
            return Err(DistanceFactorError::NoFullAccessStart(
                first.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self {
            kind: Kind::Table { points },
        })
    }

    /// Builds a parametric factor: full access up to `full_access_km`, then
    /// the given decay family.
    pub fn parametric(full_access_km: S, decay: Decay<S>) -> Result<Self, DistanceFactorError> {
        if !full_access_km.is_finite() || full_access_km < S::zero() {
            return Err(DistanceFactorError::InvalidThreshold);
        }
        match decay {
            Decay::Exponential { rate_per_km } => {
                if !rate_per_km.is_finite() || rate_per_km < S::zero() {
                    return Err(DistanceFactorError::InvalidParameter {
                        name: "rate_per_km",
                        requirement: "finite and non-negative",
                    });
                }
            }
            Decay::Power { exponent, scale_km } => {
                if !exponent.is_finite() || exponent < S::zero() {
                    return Err(DistanceFactorError::InvalidParameter {
                        name: "exponent",
                        requirement: "finite and non-negative",
                    });
                }
                if !scale_km.is_finite() || scale_km <= S::zero() {
                    return Err(DistanceFactorError::InvalidParameter {
                        name: "scale_km",
                        requirement: "finite and positive",
                    });
                }
            }
            Decay::Linear { zero_access_km } => {
                if !zero_access_km.is_finite() || zero_access_km <= full_access_km {
                    return Err(DistanceFactorError::InvalidParameter {
                        name: "zero_access_km",
                        requirement: "finite and greater than full_access_km",
                    });
                }
            }
        }
        Ok(Self {
            kind: Kind::Parametric {
                full_access_km,
                decay,
            },
        })
    }

    /// Evaluates the factor at a round-trip distance.
    ///
    /// Always in `[0, 1]`; 1 at zero distance. The table variant clamps to the
    /// first point below the table and to the last point beyond it.
    pub fn evaluate(&self, round_trip_km: S) -> S {
        let d = round_trip_km.max(S::zero());
        match &self.kind {
            Kind::Table { points } => {
                let (first_d, first_g) = points[0];
                if d <= first_d {
                    return first_g;
                }
                let (last_d, last_g) = points[points.len() - 1];
                if d >= last_d {
                    return last_g;
                }
                for pair in points.windows(2) {
                    let (d0, g0) = pair[0];
                    let (d1, g1) = pair[1];
                    if d <= d1 {
                        let fraction = (d - d0) / (d1 - d0);
                        return g0 + (g1 - g0) * fraction;
                    }
                }
                last_g
            }
            Kind::Parametric {
                full_access_km,
                decay,
            } => {
                if d <= *full_access_km {
                    return S::one();
                }
                let excess = d - *full_access_km;
                let g = match *decay {
                    Decay::Exponential { rate_per_km } => (-rate_per_km * excess).exp(),
                    Decay::Power { exponent, scale_km } => {
                        (S::one() + excess / scale_km).powf(-exponent)
                    }
                    Decay::Linear { zero_access_km } => {
                        S::one() - excess / (zero_access_km - *full_access_km)
                    }
                };
                g.max(S::zero()).min(S::one())
            }
        }
    }

    /// The table samples, when this is a table factor.
    pub fn as_table(&self) -> Option<&[(S, S)]> {
        match &self.kind {
            Kind::Table { points } => Some(points),
            Kind::Parametric { .. } => None,
        }
    }

    /// The threshold and decay family, when this is a parametric factor.
    pub fn as_parametric(&self) -> Option<(S, Decay<S>)> {
        match &self.kind {
            Kind::Table { .. } => None,
            Kind::Parametric {
                full_access_km,
                decay,
            } => Some((*full_access_km, *decay)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use proptest::prelude::*;

    fn calibrated() -> DistanceFactor<f64> {
        sample::region::<f64>().distance_factor
    }

    #[test]
    fn calibrated_table_hits_known_samples() {
        let f = calibrated();
        assert_eq!(f.evaluate(200.0), 1.0);
        assert!((f.evaluate(400.0) - 0.6667).abs() < 1e-4);
        assert!((f.evaluate(800.0) - 0.1225).abs() < 1e-4);
        assert_eq!(f.evaluate(0.0), 1.0);
    }

    #[test]
    fn zero_distance_is_full_access_for_any_valid_spec() {
        let specs: Vec<DistanceFactor<f64>> = vec![
            calibrated(),
            DistanceFactor::parametric(300.0, Decay::Exponential { rate_per_km: 0.01 }).unwrap(),
            DistanceFactor::parametric(
                0.0,
                Decay::Power {
                    exponent: 2.0,
                    scale_km: 100.0,
                },
            )
            .unwrap(),
            DistanceFactor::parametric(
                300.0,
                Decay::Linear {
                    zero_access_km: 1500.0,
                },
            )
            .unwrap(),
        ];
        for spec in specs {
            assert_eq!(spec.evaluate(0.0), 1.0);
        }
    }

    #[test]
    fn table_clamps_beyond_last_point() {
        let f = DistanceFactor::table(vec![(0.0, 1.0), (100.0, 0.5), (200.0, 0.2)]).unwrap();
        assert_eq!(f.evaluate(10_000.0), 0.2);
        assert_eq!(f.evaluate(150.0), 0.35);
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert_eq!(
            DistanceFactor::table(vec![(0.0, 1.0)]),
            Err(DistanceFactorError::TooFewPoints(1))
        );
        assert!(matches!(
            DistanceFactor::table(vec![(0.0, 1.0), (100.0, 1.2)]),
            Err(DistanceFactorError::FactorOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            DistanceFactor::table(vec![(0.0, 1.0), (0.0, 0.5)]),
            Err(DistanceFactorError::NonIncreasingDistance { index: 1 })
        ));
        assert!(matches!(
            DistanceFactor::table(vec![(0.0, 0.9), (100.0, 0.5)]),
            Err(DistanceFactorError::NoFullAccessStart(_))
        ));
        assert!(matches!(
            DistanceFactor::table(vec![(0.0, 1.0), (100.0, 0.5), (200.0, 0.7)]),
            Err(DistanceFactorError::IncreasingFactor { index: 2 })
        ));
    }

    #[test]
    fn invalid_parametric_specs_are_rejected() {
        assert!(DistanceFactor::parametric(
            -1.0,
            Decay::Exponential {
                rate_per_km: 0.01_f64
            }
        )
        .is_err());
        assert!(DistanceFactor::parametric(
            300.0,
            Decay::Linear {
                zero_access_km: 200.0_f64
            }
        )
        .is_err());
        assert!(DistanceFactor::parametric(
            300.0,
            Decay::Power {
                exponent: 1.0,
                scale_km: 0.0_f64
            }
        )
        .is_err());
    }

    #[test]
    fn evaluates_in_single_precision() {
        let f = DistanceFactor::<f32>::table(vec![(0.0, 1.0), (200.0, 1.0), (400.0, 0.5)]).unwrap();
        assert!((f.evaluate(300.0) - 0.75).abs() < 1e-6);
    }

    prop_compose! {
        fn arbitrary_table()(n in 2usize..8)(
            distances in proptest::collection::vec(0.0_f64..2_000.0, n),
            factors in proptest::collection::vec(0.0_f64..=1.0, n - 1),
        ) -> DistanceFactor<f64> {
            let mut ds = distances;
            ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ds.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            while ds.len() < 2 {
                ds.push(ds.last().copied().unwrap_or(0.0) + 1.0);
            }
            let mut gs = vec![1.0];
            let mut level = 1.0_f64;
            for f in factors {
                level = level.min(f);
                gs.push(level);
            }
            gs.truncate(ds.len());
            while gs.len() < ds.len() {
                gs.push(*gs.last().unwrap());
            }
            DistanceFactor::table(ds.into_iter().zip(gs).collect()).unwrap()
        }
    }

    proptest! {
        #[test]
        fn table_factor_is_monotone_non_increasing(
            spec in arbitrary_table(),
            d1 in 0.0_f64..3_000.0,
            d2 in 0.0_f64..3_000.0,
        ) {
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(spec.evaluate(lo) >= spec.evaluate(hi));
        }

        #[test]
        fn factor_stays_in_unit_interval(spec in arbitrary_table(), d in 0.0_f64..5_000.0) {
            let g = spec.evaluate(d);
            prop_assert!((0.0..=1.0).contains(&g));
        }
    }
}
