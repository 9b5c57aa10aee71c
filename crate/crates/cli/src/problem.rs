//! Problem files: TOML documents with a `version` and a `mode`.
//!
//! See `docs/problem-files.md` for the schema of each mode.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use tfu_core::ctp::ClassicalDistribution;
use tfu_core::inequality::{PopulationItem, TfuPopulation};
use tfu_core::logic::{CompleteStateTable, Formula, PropositionId, TfuValue};
use tfu_core::measure::TfuMeasureAssignment;
use tfu_core::quantum::{ComplexStateVector, ProjectorSpec};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Payload {
    TfuTable(TablePayload),
    Classical(ClassicalPayload),
    TfuMeasure(MeasurePayload),
    Quantum(QuantumPayload),
    Wde(Box<WdePayload>),
}

impl Payload {
    pub fn mode(&self) -> &'static str {
        match self {
            Payload::TfuTable(_) => "tfu-table",
            Payload::Classical(_) => "classical",
            Payload::TfuMeasure(_) => "tfu-measure",
            Payload::Quantum(_) => "quantum",
            Payload::Wde(_) => "wde",
        }
    }
}

/// TFU values of the complete states, in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablePayload {
    pub propositions: Vec<String>,
    pub values: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub formulas: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalPayload {
    pub propositions: Vec<String>,
    pub probabilities: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub formulas: Vec<String>,
    /// Ordered `[q, p]` pairs for which `|q|_p` is reported; all pairs when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[String; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurePayload {
    pub propositions: Vec<String>,
    /// Cell label (one `T`/`F`/`U` per proposition) to measure; unlisted cells are zero.
    pub cells: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[String; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    fn value(&self) -> Complex64 {
        match *self {
            Amplitude::Real(re) => Complex64::new(re, 0.0),
            Amplitude::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitDirection {
    pub factor: usize,
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
}

/// Exactly one of `qubit` or `basis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectorEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit: Option<QubitDirection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Amplitude>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumPayload {
    pub state: Vec<Amplitude>,
    pub projectors: Vec<ProjectorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[String; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WdePayload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<WdeClassical>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<Vec<PopulationEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<WdeQuantum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<WdeSearch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WdeClassical {
    /// Over the complete states of `A, B, C`.
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WdeQuantum {
    pub state: Vec<Amplitude>,
    pub a: ProjectorEntry,
    pub b: ProjectorEntry,
    pub c: ProjectorEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WdeSearch {
    pub state: Vec<Amplitude>,
    #[serde(default = "default_factors")]
    pub factors: [usize; 3],
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Azimuths scanned for every direction; `[0]` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phis: Option<Vec<f64>>,
}

fn default_factors() -> [usize; 3] {
    [0, 1, 1]
}

impl ProblemFile {
    pub fn from_toml(src: &str) -> Result<Self, CliError> {
        let mut table: toml::Table = toml::from_str(src).map_err(|e| CliError::Parse(e.to_string()))?;
        let version = match table.remove("version") {
            Some(toml::Value::Integer(v)) => v,
            Some(other) => return Err(CliError::Parse(format!("`version` must be an integer, got {other}"))),
            None => return Err(CliError::Parse("missing field `version`".into())),
        };
        if version != i64::from(FORMAT_VERSION) {
            return Err(CliError::validation(
                "version",
                format!("unsupported version {version}, expected {FORMAT_VERSION}"),
            ));
        }
        if !table.contains_key("mode") {
            return Err(CliError::Parse("missing field `mode`".into()));
        }
        let payload: Payload =
            toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
        Ok(ProblemFile { version: FORMAT_VERSION, payload })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files serialize to TOML")
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path)?;
        Self::from_toml(&src)
    }
}

fn proposition_count(field: &str, names: &[String], dim: usize) -> Result<usize, CliError> {
    if names.is_empty() {
        return Err(CliError::validation(field, "at least one proposition is required"));
    }
    let mut sorted = names.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != names.len() {
        return Err(CliError::validation(field, "proposition names must be distinct"));
    }
    if dim != 0 && names.len() > dim {
        return Err(CliError::validation(field, format!("at most {dim} propositions are supported")));
    }
    Ok(names.len())
}

fn resolve_pairs(
    field: &str,
    names: &[String],
    pairs: &Option<Vec<[String; 2]>>,
) -> Result<Vec<(usize, usize)>, CliError> {
    let lookup = |n: &String| {
        names
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| CliError::validation(field, format!("unknown proposition {n:?}")))
    };
    match pairs {
        None => {
            Ok((0..names.len()).flat_map(|q| (0..names.len()).filter(move |&p| p != q).map(move |p| (q, p))).collect())
        }
        Some(list) => list.iter().map(|[q, p]| Ok((lookup(q)?, lookup(p)?))).collect(),
    }
}

impl TablePayload {
    pub fn table(&self) -> Result<CompleteStateTable, CliError> {
        let n = proposition_count("propositions", &self.propositions, tfu_core::logic::MAX_PROPOSITIONS)?;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.parse::<TfuValue>().map_err(|e| CliError::validation(format!("values[{i}]"), e)))
            .collect::<Result<Vec<_>, _>>()?;
        CompleteStateTable::new(n, values).map_err(|e| CliError::validation("values", e))
    }

    pub fn formulas(&self) -> Result<Vec<Formula>, CliError> {
        parse_formulas(&self.formulas, &self.propositions)
    }
}

fn parse_formulas(sources: &[String], names: &[String]) -> Result<Vec<Formula>, CliError> {
    sources
        .iter()
        .enumerate()
        .map(|(i, src)| {
            let f = Formula::parse(src, names).map_err(|e| CliError::validation(format!("formulas[{i}]"), e))?;
            match f.max_proposition() {
                Some(PropositionId(k)) if k >= names.len() => {
                    Err(CliError::validation(format!("formulas[{i}]"), format!("proposition index {k} out of range")))
                }
                _ => Ok(f),
            }
        })
        .collect()
}

impl ClassicalPayload {
    pub fn distribution(&self) -> Result<ClassicalDistribution, CliError> {
        let n = proposition_count("propositions", &self.propositions, tfu_core::logic::MAX_PROPOSITIONS)?;
        ClassicalDistribution::new(n, self.probabilities.clone()).map_err(|e| CliError::validation("probabilities", e))
    }

    pub fn formulas(&self) -> Result<Vec<Formula>, CliError> {
        parse_formulas(&self.formulas, &self.propositions)
    }

    pub fn pairs(&self) -> Result<Vec<(usize, usize)>, CliError> {
        resolve_pairs("pairs", &self.propositions, &self.pairs)
    }
}

impl MeasurePayload {
    pub fn assignment(&self) -> Result<TfuMeasureAssignment, CliError> {
        let n = proposition_count("propositions", &self.propositions, tfu_core::measure::MAX_MEASURE_PROPOSITIONS)?;
        TfuMeasureAssignment::from_labels(n, self.cells.iter().map(|(k, v)| (k.as_str(), *v)))
            .map_err(|e| CliError::validation("cells", e))
    }

    pub fn pairs(&self) -> Result<Vec<(usize, usize)>, CliError> {
        resolve_pairs("pairs", &self.propositions, &self.pairs)
    }
}

impl QuantumPayload {
    /// Projector names, `P0, P1, ...` where none is given.
    pub fn names(&self) -> Result<Vec<String>, CliError> {
        let names: Vec<String> = self
            .projectors
            .iter()
            .enumerate()
            .map(|(i, p)| p.name.clone().unwrap_or_else(|| format!("P{i}")))
            .collect();
        proposition_count("projectors", &names, 0)?;
        Ok(names)
    }

    pub fn pairs(&self) -> Result<Vec<(usize, usize)>, CliError> {
        resolve_pairs("pairs", &self.names()?, &self.pairs)
    }
}

pub fn state(field: &str, amps: &[Amplitude]) -> Result<ComplexStateVector, CliError> {
    ComplexStateVector::new(amps.iter().map(Amplitude::value).collect()).map_err(|e| CliError::validation(field, e))
}

impl ProjectorEntry {
    pub fn spec(&self, field: &str) -> Result<ProjectorSpec, CliError> {
        match (&self.qubit, &self.basis) {
            (Some(q), None) => Ok(ProjectorSpec::qubit(q.factor, q.theta, q.phi)),
            (None, Some(basis)) => {
                Ok(ProjectorSpec::Subspace(basis.iter().map(|v| v.iter().map(Amplitude::value).collect()).collect()))
            }
            _ => Err(CliError::validation(field, "exactly one of `qubit` or `basis` is required")),
        }
    }
}

pub fn population(entries: &[PopulationEntry]) -> Result<TfuPopulation, CliError> {
    let value = |i: usize, attr: &str, s: &str| {
        s.parse::<TfuValue>().map_err(|e| CliError::validation(format!("population[{i}].{attr}"), e))
    };
    let items = entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            Ok(PopulationItem {
                a: value(i, "a", &e.a)?,
                b: value(i, "b", &e.b)?,
                c: value(i, "c", &e.c)?,
                weight: e.weight,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    TfuPopulation::new(items).map_err(|e| CliError::validation("population", e))
}
