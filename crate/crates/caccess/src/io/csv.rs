//! CSV emission for computed results.
//!
//! [`write_results_csv`] renders two sections separated by a blank line:
//!
//! 1. per-LGA rows under
//!    `lga,population,x_km,y_km,d_km,incidence,target_separations,actual_separations,g,ratio`
//! 2. sorted Lorenz coordinates under `rank,lga,F,t,cum_t,Phi`
//!
//! Counts and distances print as integers, coordinates in their shortest
//! form, and unitless quantities to 4 decimal places, always with a `.`
//! decimal separator.

use crate::inequality::{LorenzCurve, SortedRatios};
use crate::model::{LgaResult, Scenario};
use crate::scalar::Scalar;

/// Prepared rows mirroring the two output tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsTable<S: Scalar> {
    rows: Vec<RegionRow<S>>,
    lorenz: Vec<LorenzRow<S>>,
}

#[derive(Debug, Clone, PartialEq)]
struct RegionRow<S: Scalar> {
    name: String,
    population: u64,
    x_km: S,
    y_km: S,
    round_trip_km: Option<S>,
    incidence: u64,
    target_separations: u64,
    actual_separations: u64,
    distance_factor: Option<S>,
    ratio: S,
}

#[derive(Debug, Clone, PartialEq)]
struct LorenzRow<S: Scalar> {
    rank: usize,
    name: String,
    f: S,
    ratio: S,
    cumulative_ratio: S,
    phi: S,
}

impl<S: Scalar> ResultsTable<S> {
    /// Assembles both sections from the pipeline's outputs.
    pub fn new(
        scenario: &Scenario<S>,
        results: &[LgaResult<S>],
        sorted: &SortedRatios<S>,
        curve: &LorenzCurve<S>,
    ) -> Self {
        let rows = results
            .iter()
            .map(|r| {
                let lga = lga_by_index(scenario, r.lga_index);
                RegionRow {
                    name: lga.map(|l| l.name.clone()).unwrap_or_default(),
                    population: lga.map(|l| l.population).unwrap_or_default(),
                    x_km: lga.map(|l| l.location.x_km).unwrap_or_else(S::zero),
                    y_km: lga.map(|l| l.location.y_km).unwrap_or_else(S::zero),
                    round_trip_km: r.round_trip_km(),
                    incidence: r.incidence,
                    target_separations: r.target_separations,
                    actual_separations: r.actual_separations,
                    distance_factor: r.distance_factor(),
                    ratio: r.ratio,
                }
            })
            .collect();
        ResultsTable {
            rows,
            lorenz: lorenz_rows(scenario, sorted, curve),
        }
    }
}

fn lga_by_index<S: Scalar>(scenario: &Scenario<S>, index: u32) -> Option<&crate::model::Lga<S>> {
    scenario.lgas.iter().find(|l| l.index == index)
}

fn lorenz_rows<S: Scalar>(
    scenario: &Scenario<S>,
    sorted: &SortedRatios<S>,
    curve: &LorenzCurve<S>,
) -> Vec<LorenzRow<S>> {
    let mut cumulative = S::zero();
    sorted
        .entries()
        .iter()
        .zip(curve.points().iter().skip(1))
        .enumerate()
        .map(|(i, (&(index, ratio), point))| {
            cumulative = cumulative + ratio;
            LorenzRow {
                rank: i + 1,
                name: lga_by_index(scenario, index)
                    .map(|l| l.name.clone())
                    .unwrap_or_default(),
                f: point.f,
                ratio,
                cumulative_ratio: cumulative,
                phi: point.phi,
            }
        })
        .collect()
}

/// Renders the full two-section results table.
pub fn write_results_csv<S: Scalar>(table: &ResultsTable<S>) -> String {
    let mut out = String::new();
    out.push_str(
        "lga,population,x_km,y_km,d_km,incidence,target_separations,actual_separations,g,ratio\n",
    );
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.name,
            row.population,
            coord(row.x_km),
            coord(row.y_km),
            row.round_trip_km.map(km).unwrap_or_default(),
            row.incidence,
            row.target_separations,
            row.actual_separations,
            row.distance_factor.map(unitless).unwrap_or_default(),
            unitless(row.ratio),
        ));
    }
    out.push('\n');
    out.push_str(&lorenz_section(&table.lorenz));
    out
}

/// Renders only the sorted Lorenz-coordinate section.
pub fn write_lorenz_csv<S: Scalar>(
    scenario: &Scenario<S>,
    sorted: &SortedRatios<S>,
    curve: &LorenzCurve<S>,
) -> String {
    lorenz_section(&lorenz_rows(scenario, sorted, curve))
}

fn lorenz_section<S: Scalar>(rows: &[LorenzRow<S>]) -> String {
    let mut out = String::new();
    out.push_str("rank,lga,F,t,cum_t,Phi\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.rank,
            row.name,
            unitless(row.f),
            unitless(row.ratio),
            unitless(row.cumulative_ratio),
            unitless(row.phi),
        ));
    }
    out
}

/// Shortest lossless decimal form, e.g. `-600` or `12.5`.
fn coord<S: Scalar>(value: S) -> String {
    format!("{}", value.to_f64().unwrap_or(f64::NAN))
}

/// Distances print as whole kilometres.
fn km<S: Scalar>(value: S) -> String {
    format!("{:.0}", value.to_f64().unwrap_or(f64::NAN))
}

/// Unitless quantities print to 4 decimal places.
fn unitless<S: Scalar>(value: S) -> String {
    format!("{:.4}", value.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{lorenz_curve, sort_ratios};
    use crate::model::simulate_region;
    use crate::sample;

    fn full_pipeline(scenario: &Scenario<f64>) -> String {
        let results = simulate_region(scenario).unwrap();
        let sorted = sort_ratios(results.iter().map(|r| (r.lga_index, r.ratio)));
        let curve = lorenz_curve(&sorted).unwrap();
        write_results_csv(&ResultsTable::new(scenario, &results, &sorted, &curve))
    }

    #[test]
    fn headers_are_exact() {
        let csv = full_pipeline(&sample::region::<f64>());
        let mut sections = csv.split("\n\n");
        let first = sections.next().unwrap();
        let second = sections.next().unwrap();
        assert_eq!(
            first.lines().next().unwrap(),
            "lga,population,x_km,y_km,d_km,incidence,target_separations,actual_separations,g,ratio"
        );
        assert_eq!(second.lines().next().unwrap(), "rank,lga,F,t,cum_t,Phi");
    }

    #[test]
    fn simulated_region_rows_match_reference_counts() {
        let csv = full_pipeline(&sample::region::<f64>());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "A,10000,-600,0,1200,53,32,2,0.0503,0.0302");
        assert_eq!(lines[7], "G,3076000,0,0,0,16275,9765,9765,1.0000,0.6000");
        assert_eq!(lines[13], "M,6142000,600,0,1200,32497,19498,981,0.0503,0.0302");
    }

    #[test]
    fn observed_region_lorenz_section_matches_reference() {
        let csv = full_pipeline(&sample::observed_region::<f64>());
        let section = csv.split("\n\n").nth(1).unwrap();
        let lines: Vec<&str> = section.lines().collect();
        // The Phi cell is 0.0298 / 3.1838 = 0.009360, which prints as 0.0094
        // at 4 decimal places, and the rank-2 cumulative is 0.0298 + 0.0302
        // = 0.0600 exactly.
        assert_eq!(lines[1], "1,M,0.0769,0.0298,0.0298,0.0094");
        assert_eq!(lines[2], "2,A,0.1538,0.0302,0.0600,0.0188");
        assert_eq!(lines[9], "9,E,0.6923,0.4000,0.9838,0.3090");
        assert_eq!(lines[13], "13,H,1.0000,0.6000,3.1838,1.0000");
    }

    #[test]
    fn zero_population_single_lga_emits_one_zero_row() {
        let mut scenario = sample::region::<f64>();
        scenario.lgas.truncate(1);
        scenario.lgas[0].population = 0;
        scenario.lgas[0].location = crate::model::Location::new(0.0, 0.0);
        let csv = full_pipeline(&scenario);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "A,0,0,0,0,0,0,0,1.0000,0.6000");
        assert_eq!(lines.len(), 2 + 1 + 2); // section 1, blank, section 2
    }

    #[test]
    fn output_is_deterministic() {
        let scenario = sample::region::<f64>();
        assert_eq!(full_pipeline(&scenario), full_pipeline(&scenario));
    }
}
