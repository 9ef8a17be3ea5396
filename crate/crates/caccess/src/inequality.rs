//! Discrete inequality measures over per-LGA utilisation ratios.
//!
//! Each LGA carries equal weight `1/N`. Sorting the ratios ascending and
//! accumulating gives the Lorenz curve
//!
//! - `F(t_i) = i / N`, the cumulative share of LGAs,
//! - `Phi(t_i) = (t_1 + ... + t_i) / (t_1 + ... + t_N)`, the cumulative share
//!   of utilisation,
//!
//! with the origin prepended so the curve starts at (0, 0) and ends at (1, 1).
//! The Gini coefficient is computed with the trapezoid rule, which is exact
//! for the piecewise-linear curve and agrees with the mean-absolute-difference
//! form. The Atkinson index compares the equally-distributed-equivalent ratio
//! (a power mean of order `1 - epsilon`) against the arithmetic mean.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InequalityError {
    #[error("total utilisation is zero, shares are undefined")]
    ZeroTotalUtilisation,
    #[error("ratios must be positive for inequality aversion >= 1")]
    NonPositiveRatio,
    #[error("inequality aversion must be finite and non-negative")]
    InvalidEpsilon,
}

/// One Lorenz coordinate: `0 <= phi <= f <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzPoint<S: Scalar> {
    /// Cumulative share of LGAs.
    pub f: S,
    /// Cumulative share of utilisation.
    pub phi: S,
}

/// Ratios sorted ascending, ties broken by ascending LGA index.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedRatios<S: Scalar> {
    entries: Vec<(u32, S)>,
}

impl<S: Scalar> SortedRatios<S> {
    /// `(lga_index, ratio)` pairs in sorted order.
    pub fn entries(&self) -> &[(u32, S)] {
        &self.entries
    }

    pub fn ratios(&self) -> impl Iterator<Item = S> + '_ {
        self.entries.iter().map(|&(_, t)| t)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Sorts `(lga_index, ratio)` pairs ascending by ratio, then by index.
pub fn sort_ratios<S: Scalar>(pairs: impl IntoIterator<Item = (u32, S)>) -> SortedRatios<S> {
    let mut entries: Vec<(u32, S)> = pairs.into_iter().collect();
    entries.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    SortedRatios { entries }
}

/// The Lorenz curve of a sorted ratio sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCurve<S: Scalar> {
    points: Vec<LorenzPoint<S>>,
    source_order: Vec<u32>,
}

impl<S: Scalar> LorenzCurve<S> {
    /// Curve vertices, starting at the prepended origin (0, 0).
    pub fn points(&self) -> &[LorenzPoint<S>] {
        &self.points
    }

    /// LGA indices in sorted position order (one per non-origin point).
    pub fn source_order(&self) -> &[u32] {
        &self.source_order
    }
}

/// Builds the Lorenz curve from ascending-sorted ratios.
pub fn lorenz_curve<S: Scalar>(
    sorted: &SortedRatios<S>,
) -> Result<LorenzCurve<S>, InequalityError> {
    let n = sorted.len();
    let total: S = sorted.ratios().sum();
    if n == 0 || total <= S::zero() {
        return Err(InequalityError::ZeroTotalUtilisation);
    }
    let count = S::from_config(n as f64);
    let mut points = Vec::with_capacity(n + 1);
    points.push(LorenzPoint {
        f: S::zero(),
        phi: S::zero(),
    });
    let mut cumulative = S::zero();
    for (position, t) in sorted.ratios().enumerate() {
        cumulative = cumulative + t;
        points.push(LorenzPoint {
            f: S::from_config((position + 1) as f64) / count,
            phi: cumulative / total,
        });
    }
    Ok(LorenzCurve {
        points,
        source_order: sorted.entries.iter().map(|&(i, _)| i).collect(),
    })
}

/// Gini coefficient of a Lorenz curve, in `[0, 1]`.
///
/// Trapezoid identity: `1 - sum (f_i - f_{i-1}) * (phi_i + phi_{i-1})`.
pub fn gini<S: Scalar>(curve: &LorenzCurve<S>) -> S {
    let mut area_twice = S::zero();
    for pair in curve.points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        area_twice = area_twice + (b.f - a.f) * (b.phi + a.phi);
    }
    (S::one() - area_twice).max(S::zero()).min(S::one())
}

/// Atkinson index with inequality aversion `epsilon >= 0`, in `[0, 1]`.
///
/// `epsilon = 1` uses the geometric mean as the equally-distributed
/// equivalent; other values use the power mean of order `1 - epsilon`.
pub fn atkinson<S: Scalar>(ratios: &[S], epsilon: S) -> Result<S, InequalityError> {
    if !epsilon.is_finite() || epsilon < S::zero() {
        return Err(InequalityError::InvalidEpsilon);
    }
    let n = ratios.len();
    if n == 0 {
        return Err(InequalityError::ZeroTotalUtilisation);
    }
    let count = S::from_config(n as f64);
    let mean = ratios.iter().copied().sum::<S>() / count;
    if mean <= S::zero() {
        return Err(InequalityError::ZeroTotalUtilisation);
    }
    if ratios.iter().any(|&t| t < S::zero()) {
        return Err(InequalityError::NonPositiveRatio);
    }
    if epsilon == S::zero() {
        return Ok(S::zero());
    }
    let ede = if epsilon == S::one() {
        if ratios.iter().any(|&t| t <= S::zero()) {
            return Err(InequalityError::NonPositiveRatio);
        }
        let log_mean = ratios.iter().map(|&t| t.ln()).sum::<S>() / count;
        log_mean.exp()
    } else {
        let order = S::one() - epsilon;
        if order < S::zero() && ratios.iter().any(|&t| t <= S::zero()) {
            return Err(InequalityError::NonPositiveRatio);
        }
        let moment = ratios.iter().map(|&t| t.powf(order)).sum::<S>() / count;
        moment.powf(S::one() / order)
    };
    Ok((S::one() - ede / mean).max(S::zero()).min(S::one()))
}

/// A Lorenz curve with its scalar indices.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport<S: Scalar> {
    pub curve: LorenzCurve<S>,
    pub gini: S,
    /// `(epsilon, index)` pairs, one per configured aversion value.
    pub atkinson: Vec<(S, S)>,
}
