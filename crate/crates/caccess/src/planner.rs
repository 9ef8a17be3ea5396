//! Scenario evaluation, comparison and facility placement.
//!
//! [`evaluate`] chains the full pipeline for one scenario. [`compare`] runs
//! two scenarios over the same LGA set and reports per-LGA ratio deltas plus
//! the Gini delta. [`plan_additional`] appends candidate facility sites to a
//! scenario and ranks placements by the resulting Gini coefficient, either
//! exhaustively over every k-subset or greedily one site at a time.

use thiserror::Error;

use crate::inequality::{
    atkinson, gini, lorenz_curve, sort_ratios, InequalityError, InequalityReport, SortedRatios,
};
use crate::model::{simulate_region, Facility, LgaResult, Location, ModelError, Scenario};
use crate::scalar::Scalar;

/// Exhaustive search refuses to enumerate more placements than this.
pub const MAX_EXHAUSTIVE_COMBINATIONS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Inequality(#[from] InequalityError),
    #[error("scenarios cover different LGA sets: {0}")]
    MismatchedRegions(String),
    #[error("{combinations} placements exceed the exhaustive limit of {limit}")]
    TooManyCombinations { combinations: u128, limit: u128 },
    #[error("no candidate sites given")]
    EmptyCandidates,
    #[error("requested {requested} additions but only {available} candidate sites")]
    NotEnoughCandidates { requested: usize, available: usize },
    #[error("must add at least one facility")]
    ZeroPlacementCount,
}

/// Everything the pipeline produces for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionEvaluation<S: Scalar> {
    pub results: Vec<LgaResult<S>>,
    pub sorted: SortedRatios<S>,
    pub report: InequalityReport<S>,
}

/// Side-by-side evaluation of two scenarios over one LGA set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioComparison<S: Scalar> {
    pub baseline_report: InequalityReport<S>,
    pub variant_report: InequalityReport<S>,
    /// `variant.gini - baseline.gini`.
    pub delta_gini: S,
    /// `(lga_index, variant_ratio - baseline_ratio)` in index order.
    pub delta_ratios: Vec<(u32, S)>,
}

/// One ranked facility placement.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult<S: Scalar> {
    /// Chosen sites, sorted by coordinates.
    pub placement: Vec<Location<S>>,
    pub gini: S,
    pub report: InequalityReport<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanStrategy {
    Exhaustive,
    Greedy,
}

/// Simulates, sorts, builds the Lorenz curve and computes the indices.
pub fn evaluate_with_epsilons<S: Scalar>(
    scenario: &Scenario<S>,
    epsilons: &[S],
) -> Result<RegionEvaluation<S>, PlanError> {
    let results = simulate_region(scenario)?;
    let sorted = sort_ratios(results.iter().map(|r| (r.lga_index, r.ratio)));
    let curve = lorenz_curve(&sorted)?;
    let gini_value = gini(&curve);
    let ratios: Vec<S> = sorted.ratios().collect();
    let mut atkinson_values = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        atkinson_values.push((epsilon, atkinson(&ratios, epsilon)?));
    }
    Ok(RegionEvaluation {
        results,
        sorted,
        report: InequalityReport {
            curve,
            gini: gini_value,
            atkinson: atkinson_values,
        },
    })
}

/// The inequality report for one scenario.
pub fn evaluate<S: Scalar>(scenario: &Scenario<S>) -> Result<InequalityReport<S>, PlanError> {
    Ok(evaluate_with_epsilons(scenario, &[])?.report)
}

/// Evaluates both scenarios and reports deltas per LGA index.
///
/// The scenarios must cover identical LGA sets (indices and locations);
/// facility sets may differ freely.
pub fn compare<S: Scalar>(
    baseline: &Scenario<S>,
    variant: &Scenario<S>,
) -> Result<ScenarioComparison<S>, PlanError> {
    if baseline.lgas.len() != variant.lgas.len() {
        return Err(PlanError::MismatchedRegions(format!(
            "{} vs {} LGAs",
            baseline.lgas.len(),
            variant.lgas.len()
        )));
    }
    let by_index = |scenario: &Scenario<S>| {
        let mut lgas: Vec<(u32, Location<S>, String)> = scenario
            .lgas
            .iter()
            .map(|l| (l.index, l.location, l.name.clone()))
            .collect();
        lgas.sort_by_key(|&(index, _, _)| index);
        lgas
    };
    for (b, v) in by_index(baseline).iter().zip(by_index(variant).iter()) {
        if b.0 != v.0 || b.1 != v.1 {
            return Err(PlanError::MismatchedRegions(format!(
                "LGA {} differs in index or location",
                b.2
            )));
        }
    }
    let base = evaluate_with_epsilons(baseline, &[])?;
    let vari = evaluate_with_epsilons(variant, &[])?;
    let delta_ratios = base
        .results
        .iter()
        .zip(&vari.results)
        .map(|(b, v)| (b.lga_index, v.ratio - b.ratio))
        .collect();
    let delta_gini = vari.report.gini - base.report.gini;
    Ok(ScenarioComparison {
        baseline_report: base.report,
        variant_report: vari.report,
        delta_gini,
        delta_ratios,
    })
}

/// Appends `k` candidate sites to the scenario's facilities and ranks the
/// placements by ascending Gini, ties by site coordinates.
///
/// Exhaustive evaluates every k-subset (bounded by
/// [`MAX_EXHAUSTIVE_COMBINATIONS`]); greedy picks one site per round and
/// returns the single final placement.
pub fn plan_additional<S: Scalar>(
    scenario: &Scenario<S>,
    candidates: &[Location<S>],
    k: usize,
    strategy: PlanStrategy,
) -> Result<Vec<PlanResult<S>>, PlanError> {
    if candidates.is_empty() {
        return Err(PlanError::EmptyCandidates);
    }
    if k == 0 {
        return Err(PlanError::ZeroPlacementCount);
    }
    if k > candidates.len() {
        return Err(PlanError::NotEnoughCandidates {
            requested: k,
            available: candidates.len(),
        });
    }
    match strategy {
        PlanStrategy::Exhaustive => plan_exhaustive(scenario, candidates, k),
        PlanStrategy::Greedy => plan_greedy(scenario, candidates, k),
    }
}

fn plan_exhaustive<S: Scalar>(
    scenario: &Scenario<S>,
    candidates: &[Location<S>],
    k: usize,
) -> Result<Vec<PlanResult<S>>, PlanError> {
    let combinations = binomial(candidates.len() as u128, k as u128);
    if combinations > MAX_EXHAUSTIVE_COMBINATIONS {
        return Err(PlanError::TooManyCombinations {
            combinations,
            limit: MAX_EXHAUSTIVE_COMBINATIONS,
        });
    }
    let mut ranked = Vec::with_capacity(combinations as usize);
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let sites: Vec<Location<S>> = subset.iter().map(|&i| candidates[i]).collect();
        ranked.push(evaluate_placement(scenario, sites)?);
        if !advance_combination(&mut subset, candidates.len()) {
            break;
        }
    }
    rank(&mut ranked);
    Ok(ranked)
}

fn plan_greedy<S: Scalar>(
    scenario: &Scenario<S>,
    candidates: &[Location<S>],
    k: usize,
) -> Result<Vec<PlanResult<S>>, PlanError> {
    let mut pool: Vec<Location<S>> = candidates.to_vec();
    let mut chosen: Vec<Location<S>> = Vec::with_capacity(k);
    let mut best_result: Option<PlanResult<S>> = None;
    for _ in 0..k {
        let mut round_best: Option<(usize, PlanResult<S>)> = None;
        for (i, &site) in pool.iter().enumerate() {
            let mut sites = chosen.clone();
            sites.push(site);
            let result = evaluate_placement(scenario, sites)?;
            let better = match &round_best {
                None => true,
                Some((_, current)) => placement_order(&result, current).is_lt(),
            };
            if better {
                round_best = Some((i, result));
            }
        }
        let (picked, result) = round_best.expect("pool is non-empty");
        chosen.push(pool.remove(picked));
        best_result = Some(result);
    }
    Ok(vec![best_result.expect("at least one round ran")])
}

/// Evaluates the scenario with the given sites added as facilities.
fn evaluate_placement<S: Scalar>(
    scenario: &Scenario<S>,
    mut sites: Vec<Location<S>>,
) -> Result<PlanResult<S>, PlanError> {
    sites.sort_by(compare_locations);
    let mut variant = scenario.clone();
    for (i, &site) in sites.iter().enumerate() {
        variant.facilities.push(Facility {
            id: added_facility_id(scenario, i),
            location: site,
        });
    }
    let report = evaluate(&variant)?;
    Ok(PlanResult {
        placement: sites,
        gini: report.gini,
        report,
    })
}

fn added_facility_id<S: Scalar>(scenario: &Scenario<S>, ordinal: usize) -> String {
    let mut n = ordinal + 1;
    loop {
        let id = format!("added-{n}");
        if scenario.facilities.iter().all(|f| f.id != id) {
            return id;
        }
        n += 1;
    }
}

fn rank<S: Scalar>(results: &mut [PlanResult<S>]) {
    results.sort_by(placement_order);
}

fn placement_order<S: Scalar>(a: &PlanResult<S>, b: &PlanResult<S>) -> std::cmp::Ordering {
    a.gini
        .partial_cmp(&b.gini)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then_with(|| {
            for (la, lb) in a.placement.iter().zip(&b.placement) {
                let ord = compare_locations(la, lb);
                if ord.is_ne() {
                    return ord;
                }
            }
            a.placement.len().cmp(&b.placement.len())
        })
}

fn compare_locations<S: Scalar>(a: &Location<S>, b: &Location<S>) -> std::cmp::Ordering {
    a.x_km
        .partial_cmp(&b.x_km)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(
            a.y_km
                .partial_cmp(&b.y_km)
                .unwrap_or(std::cmp::Ordering::Equal),
        )
}

/// Next k-combination of `0..n` in lexicographic order; false when done.
fn advance_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Binomial coefficient, saturating once it clears the exhaustive limit.
fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul(n - i) / (i + 1);
        if result > MAX_EXHAUSTIVE_COMBINATIONS.saturating_mul(2) {
            return result;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn observed_region_gini_matches_reference() {
        let report = evaluate(&sample::observed_region::<f64>()).unwrap();
        assert!((report.gini - 0.4969).abs() < 0.0015);
    }

    #[test]
    fn single_lga_region_has_zero_gini() {
        let mut scenario = sample::region::<f64>();
        scenario.lgas.truncate(1);
        let report = evaluate(&scenario).unwrap();
        assert_eq!(report.gini, 0.0);
    }

    #[test]
    fn compare_with_self_is_zero() {
        let scenario = sample::region::<f64>();
        let cmp = compare(&scenario, &scenario).unwrap();
        assert_eq!(cmp.delta_gini, 0.0);
        assert!(cmp.delta_ratios.iter().all(|&(_, d)| d == 0.0));
    }

    #[test]
    fn adding_an_eastern_facility_lowers_gini() {
        let baseline = sample::region::<f64>();
        let mut variant = baseline.clone();
        variant.facilities.push(Facility {
            id: "east".into(),
            location: Location::new(600.0, 0.0),
        });
        let cmp = compare(&baseline, &variant).unwrap();
        assert!(cmp.delta_gini < 0.0);
        // Every delta is non-negative: access never degrades.
        assert!(cmp.delta_ratios.iter().all(|&(_, d)| d >= 0.0));
    }

    #[test]
    fn compare_rejects_different_lga_sets() {
        let baseline = sample::region::<f64>();
        let mut variant = baseline.clone();
        variant.lgas.pop();
        assert!(matches!(
            compare(&baseline, &variant),
            Err(PlanError::MismatchedRegions(_))
        ));
    }

    #[test]
    fn exhaustive_single_addition_ranks_all_sites() {
        let scenario = sample::region::<f64>();
        let baseline = evaluate(&scenario).unwrap().gini;
        let candidates = sample::candidate_sites::<f64>();
        let ranked = plan_additional(&scenario, &candidates, 1, PlanStrategy::Exhaustive).unwrap();
        assert_eq!(ranked.len(), 13);

        let best = &ranked[0];
        assert_ne!(best.placement[0], Location::new(0.0, 0.0));
        assert!(best.gini < baseline);

        // The co-located duplicate changes nothing.
        let duplicate = ranked
            .iter()
            .find(|r| r.placement[0] == Location::new(0.0, 0.0))
            .unwrap();
        assert_eq!(duplicate.gini, baseline);
    }

    #[test]
    fn duplicate_site_alone_reproduces_baseline_exactly() {
        let scenario = sample::region::<f64>();
        let baseline = evaluate(&scenario).unwrap().gini;
        let ranked = plan_additional(
            &scenario,
            &[Location::new(0.0, 0.0)],
            1,
            PlanStrategy::Exhaustive,
        )
        .unwrap();
        assert_eq!(ranked.len(), 1);
        assert_eq!(ranked[0].gini, baseline);
    }

    #[test]
    fn single_candidate_yields_single_plan() {
        let scenario = sample::region::<f64>();
        let site = Location::new(450.0, 0.0);
        let ranked = plan_additional(&scenario, &[site], 1, PlanStrategy::Greedy).unwrap();
        assert_eq!(ranked.len(), 1);
        assert_eq!(ranked[0].placement, vec![site]);
    }

    #[test]
    fn greedy_matches_exhaustive_for_one_addition() {
        let scenario = sample::region::<f64>();
        let candidates = sample::candidate_sites::<f64>();
        let exhaustive =
            plan_additional(&scenario, &candidates, 1, PlanStrategy::Exhaustive).unwrap();
        let greedy = plan_additional(&scenario, &candidates, 1, PlanStrategy::Greedy).unwrap();
        assert_eq!(greedy.len(), 1);
        assert_eq!(greedy[0].placement, exhaustive[0].placement);
        assert_eq!(greedy[0].gini, exhaustive[0].gini);
    }

    #[test]
    fn greedy_placement_has_requested_size() {
        let scenario = sample::region::<f64>();
        let candidates = sample::candidate_sites::<f64>();
        let greedy = plan_additional(&scenario, &candidates, 3, PlanStrategy::Greedy).unwrap();
        assert_eq!(greedy.len(), 1);
        assert_eq!(greedy[0].placement.len(), 3);
    }

    #[test]
    fn equal_gini_placements_rank_lexicographically() {
        // These four additions produce identical ratio multisets by the
        // region's symmetry, hence identical gini.
        let scenario = sample::region::<f64>();
        let sites = [
            Location::new(500.0, 0.0),
            Location::new(-400.0, 0.0),
            Location::new(400.0, 0.0),
            Location::new(-500.0, 0.0),
        ];
        let ranked = plan_additional(&scenario, &sites, 1, PlanStrategy::Exhaustive).unwrap();
        let order: Vec<f64> = ranked.iter().map(|r| r.placement[0].x_km).collect();
        assert!(ranked.windows(2).all(|w| w[0].gini == w[1].gini));
        assert_eq!(order, vec![-500.0, -400.0, 400.0, 500.0]);
    }

    #[test]
    fn input_guards() {
        let scenario = sample::region::<f64>();
        assert_eq!(
            plan_additional(&scenario, &[], 1, PlanStrategy::Exhaustive),
            Err(PlanError::EmptyCandidates)
        );
        let site = Location::new(1.0, 2.0);
        assert_eq!(
            plan_additional(&scenario, &[site], 0, PlanStrategy::Exhaustive),
            Err(PlanError::ZeroPlacementCount)
        );
        assert_eq!(
            plan_additional(&scenario, &[site], 2, PlanStrategy::Greedy),
            Err(PlanError::NotEnoughCandidates {
                requested: 2,
                available: 1
            })
        );
    }

    #[test]
    fn exhaustive_bound_is_enforced() {
        // C(60, 5) = 5,461,512 > 1,000,000.
        let scenario = sample::region::<f64>();
        let candidates: Vec<Location<f64>> = (0..60)
            .map(|i| Location::new(i as f64 * 10.0, 0.0))
            .collect();
        assert!(matches!(
            plan_additional(&scenario, &candidates, 5, PlanStrategy::Exhaustive),
            Err(PlanError::TooManyCombinations { .. })
        ));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(13, 1), 13);
        assert_eq!(binomial(13, 2), 78);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn combination_enumeration_is_lexicographic() {
        let mut subset = vec![0usize, 1];
        let mut all = vec![subset.clone()];
        while advance_combination(&mut subset, 4) {
            all.push(subset.clone());
        }
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
