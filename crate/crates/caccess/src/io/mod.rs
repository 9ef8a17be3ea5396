//! Scenario ingestion and results persistence.
//!
//! Scenarios are JSON documents (see [`ScenarioDocument`] for the shape).
//! Parsing is strict: unknown fields are rejected, and every invariant
//! violation reports the path of the offending field. Results go out as
//! two-section CSV tables and standalone SVG charts.

mod csv;
mod svg;

pub use csv::{write_lorenz_csv, write_results_csv, ResultsTable};
pub use svg::render_lorenz_svg;

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::{Decay, DistanceFactor};
use crate::model::{Facility, Lga, Location, Mode, Scenario};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    /// The document is not well-formed or not the documented shape.
    #[error("syntax error at {path}: {message}")]
    Syntax { path: String, message: String },
    /// The document parsed but violates a scenario invariant.
    #[error("invalid scenario at {path}: {message}")]
    Validation { path: String, message: String },
}

impl ParseError {
    fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

// ---------------------------------------------------------------------------
// Document shape
// ---------------------------------------------------------------------------

/// Serialised form of a [`Scenario`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "S: serde::Deserialize<'de>"))]
pub struct ScenarioDocument<S> {
    pub name: String,
    pub incidence_rate_per_100k: S,
    pub multiplier_c: S,
    pub mode: ModeDocument,
    pub distance_factor: DistanceFactorDocument<S>,
    pub lgas: Vec<LgaDocument<S>>,
    #[serde(default)]
    pub facilities: Vec<FacilityDocument<S>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeDocument {
    Simulated,
    Observed,
}

/// `{"type": "table", "points": [[d, g], ..]}` or
/// `{"type": "parametric", "params": {..}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "S: serde::Deserialize<'de>"))]
pub struct DistanceFactorDocument<S> {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(S, S)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParametricDocument<S>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParametricDocument<S> {
    pub full_access_km: S,
    pub decay: DecayDocument<S>,
}

/// One decay family plus exactly the parameters that family needs:
/// `exponential` takes `rate_per_km`, `power` takes `exponent` and
/// `scale_km`, `linear` takes `zero_access_km`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "S: serde::Deserialize<'de>"))]
pub struct DecayDocument<S> {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_per_km: Option<S>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<S>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_km: Option<S>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_access_km: Option<S>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LgaDocument<S> {
    pub index: u32,
    pub name: String,
    pub population: u64,
    pub x_km: S,
    pub y_km: S,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed_incidence: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed_separations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed_patients: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacilityDocument<S> {
    pub id: String,
    pub x_km: S,
    pub y_km: S,
}

// ---------------------------------------------------------------------------
// Parse / write
// ---------------------------------------------------------------------------

/// Parses and validates a scenario document.
pub fn parse_scenario<S>(text: &str) -> Result<Scenario<S>, ParseError>
where
    S: Scalar + DeserializeOwned,
{
    let mut deserializer = serde_json::Deserializer::from_str(text);
    let doc: ScenarioDocument<S> =
        serde_path_to_error::deserialize(&mut deserializer).map_err(|e| ParseError::Syntax {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    deserializer.end().map_err(|e| ParseError::Syntax {
        path: ".".to_string(),
        message: e.to_string(),
    })?;
    scenario_from_document(doc)
}

/// Serialises a scenario to canonical pretty-printed JSON.
pub fn write_scenario<S>(scenario: &Scenario<S>) -> String
where
    S: Scalar + Serialize,
{
    let doc = document_from_scenario(scenario);
    let mut text = serde_json::to_string_pretty(&doc).expect("scenario serialises");
    text.push('\n');
    text
}

/// Converts a parsed document into a validated [`Scenario`].
pub fn scenario_from_document<S: Scalar>(
    doc: ScenarioDocument<S>,
) -> Result<Scenario<S>, ParseError> {
    let mode = match doc.mode {
        ModeDocument::Simulated => Mode::Simulated,
        ModeDocument::Observed => Mode::Observed,
    };
    let distance_factor = build_distance_factor(doc.distance_factor)?;
    let lgas = doc
        .lgas
        .into_iter()
        .map(|lga| Lga {
            index: lga.index,
            name: lga.name,
            population: lga.population,
            location: Location::new(lga.x_km, lga.y_km),
            observed_incidence: lga.observed_incidence,
            observed_separations: lga.observed_separations,
            observed_patients: lga.observed_patients,
        })
        .collect();
    let facilities = doc
        .facilities
        .into_iter()
        .map(|f| Facility {
            id: f.id,
            location: Location::new(f.x_km, f.y_km),
        })
        .collect();
    let scenario = Scenario {
        name: doc.name,
        incidence_rate_per_100k: doc.incidence_rate_per_100k,
        multiplier_c: doc.multiplier_c,
        distance_factor,
        lgas,
        facilities,
        mode,
    };
    scenario
        .validate()
        .map_err(|v| ParseError::validation(v.path, v.message))?;
    Ok(scenario)
}

/// Converts a scenario back to its document form.
pub fn document_from_scenario<S: Scalar>(scenario: &Scenario<S>) -> ScenarioDocument<S> {
    let distance_factor = if let Some(points) = scenario.distance_factor.as_table() {
        DistanceFactorDocument {
            kind: "table".to_string(),
            points: Some(points.to_vec()),
            params: None,
        }
    } else {
        let (full_access_km, decay) = scenario
            .distance_factor
            .as_parametric()
            .expect("factor is table or parametric");
        let mut doc = DecayDocument {
            family: String::new(),
            rate_per_km: None,
            exponent: None,
            scale_km: None,
            zero_access_km: None,
        };
        match decay {
            Decay::Exponential { rate_per_km } => {
                doc.family = "exponential".to_string();
                doc.rate_per_km = Some(rate_per_km);
            }
            Decay::Power { exponent, scale_km } => {
                doc.family = "power".to_string();
                doc.exponent = Some(exponent);
                doc.scale_km = Some(scale_km);
            }
            Decay::Linear { zero_access_km } => {
                doc.family = "linear".to_string();
                doc.zero_access_km = Some(zero_access_km);
            }
        }
        DistanceFactorDocument {
            kind: "parametric".to_string(),
            points: None,
            params: Some(ParametricDocument {
                full_access_km,
                decay: doc,
            }),
        }
    };
    ScenarioDocument {
        name: scenario.name.clone(),
        incidence_rate_per_100k: scenario.incidence_rate_per_100k,
        multiplier_c: scenario.multiplier_c,
        mode: match scenario.mode {
            Mode::Simulated => ModeDocument::Simulated,
            Mode::Observed => ModeDocument::Observed,
        },
        distance_factor,
        lgas: scenario
            .lgas
            .iter()
            .map(|lga| LgaDocument {
                index: lga.index,
                name: lga.name.clone(),
                population: lga.population,
                x_km: lga.location.x_km,
                y_km: lga.location.y_km,
                observed_incidence: lga.observed_incidence,
                observed_separations: lga.observed_separations,
                observed_patients: lga.observed_patients,
            })
            .collect(),
        facilities: scenario
            .facilities
            .iter()
            .map(|f| FacilityDocument {
                id: f.id.clone(),
                x_km: f.location.x_km,
                y_km: f.location.y_km,
            })
            .collect(),
    }
}

fn build_distance_factor<S: Scalar>(
    doc: DistanceFactorDocument<S>,
) -> Result<DistanceFactor<S>, ParseError> {
    match doc.kind.as_str() {
        "table" => {
            if doc.params.is_some() {
                return Err(ParseError::validation(
                    "distance_factor.params",
                    "not allowed when type is \"table\"",
                ));
            }
            let points = doc.points.ok_or_else(|| {
                ParseError::validation(
                    "distance_factor.points",
                    "required when type is \"table\"",
                )
            })?;
            DistanceFactor::table(points)
                .map_err(|e| ParseError::validation("distance_factor.points", e.to_string()))
        }
        "parametric" => {
            if doc.points.is_some() {
                return Err(ParseError::validation(
                    "distance_factor.points",
                    "not allowed when type is \"parametric\"",
                ));
            }
            let params = doc.params.ok_or_else(|| {
                ParseError::validation(
                    "distance_factor.params",
                    "required when type is \"parametric\"",
                )
            })?;
            let decay = build_decay(&params.decay)?;
            DistanceFactor::parametric(params.full_access_km, decay)
                .map_err(|e| ParseError::validation("distance_factor.params", e.to_string()))
        }
        other => Err(ParseError::validation(
            "distance_factor.type",
            format!("unknown type {other:?}, expected \"table\" or \"parametric\""),
        )),
    }
}

fn build_decay<S: Scalar>(doc: &DecayDocument<S>) -> Result<Decay<S>, ParseError> {
    let path = "distance_factor.params.decay";
    let require = |value: Option<S>, name: &str| {
        value.ok_or_else(|| {
            ParseError::validation(
                format!("{path}.{name}"),
                format!("required for family {:?}", doc.family),
            )
        })
    };
    let forbid = |value: Option<S>, name: &str| {
        if value.is_some() {
            Err(ParseError::validation(
                format!("{path}.{name}"),
                format!("not allowed for family {:?}", doc.family),
            ))
        } else {
            Ok(())
        }
    };
    match doc.family.as_str() {
        "exponential" => {
            forbid(doc.exponent, "exponent")?;
            forbid(doc.scale_km, "scale_km")?;
            forbid(doc.zero_access_km, "zero_access_km")?;
            Ok(Decay::Exponential {
                rate_per_km: require(doc.rate_per_km, "rate_per_km")?,
            })
        }
        "power" => {
            forbid(doc.rate_per_km, "rate_per_km")?;
            forbid(doc.zero_access_km, "zero_access_km")?;
            Ok(Decay::Power {
                exponent: require(doc.exponent, "exponent")?,
                scale_km: require(doc.scale_km, "scale_km")?,
            })
        }
        "linear" => {
            forbid(doc.rate_per_km, "rate_per_km")?;
            forbid(doc.exponent, "exponent")?;
            forbid(doc.scale_km, "scale_km")?;
            Ok(Decay::Linear {
                zero_access_km: require(doc.zero_access_km, "zero_access_km")?,
            })
        }
        other => Err(ParseError::validation(
            format!("{path}.family"),
            format!("unknown family {other:?}, expected \"exponential\", \"power\" or \"linear\""),
        )),
    }
}

// ---------------------------------------------------------------------------
// Auxiliary inputs: candidate sites and ratio overrides
// ---------------------------------------------------------------------------

/// Parses a candidate-sites file: a JSON array of `[x_km, y_km]` pairs.
pub fn parse_candidate_sites<S>(text: &str) -> Result<Vec<Location<S>>, ParseError>
where
    S: Scalar + DeserializeOwned,
{
    let pairs: Vec<(S, S)> = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        path: ".".to_string(),
        message: e.to_string(),
    })?;
    for (i, &(x, y)) in pairs.iter().enumerate() {
        if !x.is_finite() || !y.is_finite() {
            return Err(ParseError::validation(
                format!("[{i}]"),
                "coordinates must be finite",
            ));
        }
    }
    Ok(pairs.into_iter().map(|(x, y)| Location::new(x, y)).collect())
}

/// Parses a ratio-overrides file: a JSON object mapping LGA name to ratio.
pub fn parse_ratio_overrides<S>(text: &str) -> Result<BTreeMap<String, S>, ParseError>
where
    S: Scalar + DeserializeOwned,
{
    let map: BTreeMap<String, S> =
        serde_json::from_str(text).map_err(|e| ParseError::Syntax {
            path: ".".to_string(),
            message: e.to_string(),
        })?;
    for (name, &ratio) in &map {
        if !ratio.is_finite() || ratio < S::zero() {
            return Err(ParseError::validation(
                name.clone(),
                "ratio must be finite and non-negative",
            ));
        }
    }
    Ok(map)
}

/// Matches ratio overrides to a scenario's LGAs by name.
///
/// Every LGA must be covered exactly once and every override must name an
/// existing LGA. Returns `(lga_index, ratio)` pairs in LGA index order.
pub fn ratio_pairs<S: Scalar>(
    scenario: &Scenario<S>,
    overrides: &BTreeMap<String, S>,
) -> Result<Vec<(u32, S)>, ParseError> {
    let mut pairs = Vec::with_capacity(scenario.lgas.len());
    for (pos, lga) in scenario.lgas.iter().enumerate() {
        if scenario.lgas[..pos].iter().any(|l| l.name == lga.name) {
            return Err(ParseError::validation(
                format!("lgas[{pos}].name"),
                format!("duplicate LGA name {:?}; overrides match by name", lga.name),
            ));
        }
        let ratio = overrides.get(&lga.name).ok_or_else(|| {
            ParseError::validation(lga.name.clone(), "no ratio given for this LGA")
        })?;
        pairs.push((lga.index, *ratio));
    }
    for name in overrides.keys() {
        if !scenario.lgas.iter().any(|l| &l.name == name) {
            return Err(ParseError::validation(
                name.clone(),
                "does not name an LGA in the scenario",
            ));
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn round_trips_both_sample_scenarios() {
        for scenario in [sample::region::<f64>(), sample::observed_region::<f64>()] {
            let text = write_scenario(&scenario);
            let parsed: Scenario<f64> = parse_scenario(&text).unwrap();
            assert_eq!(parsed, scenario);
        }
    }

    #[test]
    fn round_trips_parametric_factors() {
        let mut scenario = sample::region::<f64>();
        for decay in [
            Decay::Exponential { rate_per_km: 0.004 },
            Decay::Power {
                exponent: 1.5,
                scale_km: 120.0,
            },
            Decay::Linear {
                zero_access_km: 1500.0,
            },
        ] {
            scenario.distance_factor = DistanceFactor::parametric(300.0, decay).unwrap();
            let text = write_scenario(&scenario);
            let parsed: Scenario<f64> = parse_scenario(&text).unwrap();
            assert_eq!(parsed, scenario);
        }
    }

    #[test]
    fn patient_counts_are_carried_through() {
        let mut scenario = sample::observed_region::<f64>();
        for (i, lga) in scenario.lgas.iter_mut().enumerate() {
            lga.observed_patients = Some(100 + i as u64);
        }
        let text = write_scenario(&scenario);
        assert!(text.contains("observed_patients"));
        let parsed: Scenario<f64> = parse_scenario(&text).unwrap();
        assert_eq!(parsed, scenario);
        // The carried field changes nothing downstream.
        let base = crate::model::simulate_region(&sample::observed_region::<f64>()).unwrap();
        let with_patients = crate::model::simulate_region(&parsed).unwrap();
        assert_eq!(base, with_patients);
    }

    #[test]
    fn missing_facilities_in_simulated_mode_names_the_field() {
        let mut scenario = sample::region::<f64>();
        scenario.facilities.clear();
        let mut doc = document_from_scenario(&scenario);
        doc.facilities.clear();
        let text = serde_json::to_string(&doc).unwrap();
        match parse_scenario::<f64>(&text).unwrap_err() {
            ParseError::Validation { path, .. } => assert_eq!(path, "facilities"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_factor_names_the_field() {
        let mut doc = document_from_scenario(&sample::region::<f64>());
        doc.distance_factor.points.as_mut().unwrap()[2].1 = 1.2;
        let text = serde_json::to_string(&doc).unwrap();
        match parse_scenario::<f64>(&text).unwrap_err() {
            ParseError::Validation { path, message } => {
                assert_eq!(path, "distance_factor.points");
                assert!(message.contains("out of [0,1]"), "message: {message}");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected_with_a_path() {
        let mut value: serde_json::Value =
            serde_json::from_str(&write_scenario(&sample::region::<f64>())).unwrap();
        value["lgas"][2]["extra_field"] = serde_json::json!(1);
        let text = value.to_string();
        match parse_scenario::<f64>(&text).unwrap_err() {
            ParseError::Syntax { path, message } => {
                assert!(path.contains("lgas[2]"), "path: {path}");
                assert!(message.contains("extra_field"), "message: {message}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_is_a_syntax_error() {
        assert!(matches!(
            parse_scenario::<f64>("{not json"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_scenario::<f64>("{} trailing"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn decay_families_reject_foreign_parameters() {
        let text = r#"{
            "name": "x", "incidence_rate_per_100k": 100.0, "multiplier_c": 0.5,
            "mode": "simulated",
            "distance_factor": {"type": "parametric", "params": {
                "full_access_km": 300.0,
                "decay": {"family": "exponential", "rate_per_km": 0.01, "exponent": 2.0}
            }},
            "lgas": [{"index": 1, "name": "A", "population": 1000, "x_km": 0.0, "y_km": 0.0}],
            "facilities": [{"id": "F", "x_km": 0.0, "y_km": 0.0}]
        }"#;
        match parse_scenario::<f64>(text).unwrap_err() {
            ParseError::Validation { path, .. } => {
                assert_eq!(path, "distance_factor.params.decay.exponent")
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn candidate_sites_parse_from_pair_array() {
        let sites: Vec<Location<f64>> =
            parse_candidate_sites("[[0.0, 0.0], [-600, 0], [12.5, -3]]").unwrap();
        assert_eq!(sites.len(), 3);
        assert_eq!(sites[1], Location::new(-600.0, 0.0));
        assert!(parse_candidate_sites::<f64>("[[1e999, 0]]").is_err());
        assert!(parse_candidate_sites::<f64>("{\"a\": 1}").is_err());
    }

    #[test]
    fn ratio_overrides_must_cover_the_region_exactly() {
        let scenario = sample::region::<f64>();
        let mut map = BTreeMap::new();
        for lga in &scenario.lgas {
            map.insert(lga.name.clone(), 0.1_f64);
        }
        assert_eq!(ratio_pairs(&scenario, &map).unwrap().len(), 13);

        map.remove("D");
        assert!(matches!(
            ratio_pairs(&scenario, &map),
            Err(ParseError::Validation { path, .. }) if path == "D"
        ));

        map.insert("D".to_string(), 0.1);
        map.insert("Z".to_string(), 0.2);
        assert!(matches!(
            ratio_pairs(&scenario, &map),
            Err(ParseError::Validation { path, .. }) if path == "Z"
        ));
    }

    #[test]
    fn ratio_overrides_reject_negative_values() {
        assert!(parse_ratio_overrides::<f64>(r#"{"A": -0.1}"#).is_err());
        assert!(parse_ratio_overrides::<f64>(r#"{"A": 0.1}"#).is_ok());
    }
}
