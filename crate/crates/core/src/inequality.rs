//! Wigner–d'Espagnat inequality `(A,B) ∪ (¬B,C) ⊇ (A,C)`.
//!
//! In measure form: `ab + b̄c ≥ ac`, where `ab` is the weight of `A ∧ B`,
//! `b̄c` of `¬B ∧ C` and `ac` of `A ∧ C`. It holds for every classical
//! distribution. Read with manifest values it fails for items that are
//! manifestly `A` and `C` but undecidable on `B`, and with non-commuting
//! projectors it fails for suitable quantum configurations.

use std::cmp::Ordering as CmpOrdering;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::ctp::{self, ClassicalDistribution, CtpError};
use crate::logic::{Formula, PropositionId, TfuValue};
use crate::quantum::{
    born, projector_from_spec, sequential_joint, ComplexStateVector, HermitianProjector, ProjectorSpec, QuantumError,
};
use crate::TOLERANCE;

/// Magnitude above which a violation is reported.
pub const VIOLATION_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("the inequality needs exactly 3 propositions (A, B, C), got {0}")]
    PropositionCount(usize),
    #[error("population is empty")]
    EmptyPopulation,
    #[error("item {index} has weight {weight}, expected a finite nonnegative value")]
    BadWeight { index: usize, weight: f64 },
    #[error("angle grid is empty")]
    EmptyGrid,
    #[error("grid step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("grid bounds must be finite, got [{0}, {1}]")]
    BadBounds(f64, f64),
    #[error(transparent)]
    Classical(#[from] CtpError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// The three quantities of the inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WdeTriple {
    /// Weight of `A ∧ B`.
    pub ab: f64,
    /// Weight of `¬B ∧ C`.
    pub not_b_c: f64,
    /// Weight of `A ∧ C`.
    pub ac: f64,
}

impl WdeTriple {
    /// `ac − (ab + b̄c)`; positive means violated.
    pub fn violation(&self) -> f64 {
        self.ac - (self.ab + self.not_b_c)
    }

    pub fn holds(&self, tolerance: f64) -> bool {
        self.ab + self.not_b_c >= self.ac - tolerance
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WdeOutcome {
    pub triple: WdeTriple,
    pub holds: bool,
}

impl WdeOutcome {
    fn new(triple: WdeTriple, tolerance: f64) -> Self {
        WdeOutcome { triple, holds: triple.holds(tolerance) }
    }
}

const A: PropositionId = PropositionId(0);
const B: PropositionId = PropositionId(1);
const C: PropositionId = PropositionId(2);

/// Classical form over propositions `A = p0`, `B = p1`, `C = p2`.
pub fn wde_classical(d: &ClassicalDistribution) -> Result<WdeOutcome, LabError> {
    if d.propositions() != 3 {
        return Err(LabError::PropositionCount(d.propositions()));
    }
    let s = ctp::build_state_vector(d);
    let a = ctp::proposition_projector(A, 3)?;
    let b = ctp::proposition_projector(B, 3)?;
    let c = ctp::proposition_projector(C, 3)?;
    let triple = WdeTriple {
        ab: ctp::probability(&ctp::and_op(&a, &b)?, &s)?,
        not_b_c: ctp::probability(&ctp::and_op(&ctp::negation_op(&b), &c)?, &s)?,
        ac: ctp::probability(&ctp::and_op(&a, &c)?, &s)?,
    };
    Ok(WdeOutcome::new(triple, TOLERANCE))
}

/// An item with manifest values for the attributes `A`, `B`, `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationItem {
    pub a: TfuValue,
    pub b: TfuValue,
    pub c: TfuValue,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfuPopulation {
    items: Vec<PopulationItem>,
}

impl TfuPopulation {
    pub fn new(items: Vec<PopulationItem>) -> Result<Self, LabError> {
        if items.is_empty() {
            return Err(LabError::EmptyPopulation);
        }
        if let Some((index, item)) = items.iter().enumerate().find(|(_, it)| !it.weight.is_finite() || it.weight < 0.0)
        {
            return Err(LabError::BadWeight { index, weight: item.weight });
        }
        Ok(TfuPopulation { items })
    }

    pub fn items(&self) -> &[PopulationItem] {
        &self.items
    }

    pub fn total_weight(&self) -> f64 {
        self.items.iter().map(|i| i.weight).sum()
    }

    fn weight_where(&self, keep: impl Fn(&PopulationItem) -> bool) -> f64 {
        self.items.iter().filter(|i| keep(i)).map(|i| i.weight).sum()
    }
}

/// Set-level reading with manifest values: `ab` counts items that are
/// manifestly `A` and manifestly `B`, and so on.
pub fn wde_tfu_sets(pop: &TfuPopulation) -> WdeOutcome {
    use TfuValue::{ManifestlyFalse as F, ManifestlyTrue as T};
    let triple = WdeTriple {
        ab: pop.weight_where(|i| i.a == T && i.b == T),
        not_b_c: pop.weight_where(|i| i.b == F && i.c == T),
        ac: pop.weight_where(|i| i.a == T && i.c == T),
    };
    WdeOutcome::new(triple, TOLERANCE * pop.total_weight().max(1.0))
}

/// How a pairwise "joint" is read for possibly non-commuting projectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum JointOrdering {
    /// `‖P₂ P₁ s‖²`: first property found, then the second.
    Sequential,
    /// Mean of both sequential orders.
    #[default]
    Symmetrized,
}

impl fmt::Display for JointOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JointOrdering::Sequential => "sequential",
            JointOrdering::Symmetrized => "symmetrized",
        })
    }
}

impl std::str::FromStr for JointOrdering {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequential" | "first-then-second" => Ok(JointOrdering::Sequential),
            "symmetrized" => Ok(JointOrdering::Symmetrized),
            other => Err(format!("unknown ordering {other:?}")),
        }
    }
}

pub fn joint(
    first: &HermitianProjector,
    second: &HermitianProjector,
    s: &ComplexStateVector,
    ordering: JointOrdering,
) -> Result<f64, QuantumError> {
    let forward = sequential_joint(first, second, s)?;
    match ordering {
        JointOrdering::Sequential => Ok(forward),
        JointOrdering::Symmetrized => Ok(0.5 * (forward + sequential_joint(second, first, s)?)),
    }
}

/// Projector form: `ab = joint(A, B)`, `b̄c = joint(I − B, C)`,
/// `ac = joint(A, C)`.
pub fn wde_quantum(
    a: &HermitianProjector,
    b: &HermitianProjector,
    c: &HermitianProjector,
    s: &ComplexStateVector,
    ordering: JointOrdering,
) -> Result<WdeOutcome, LabError> {
    let triple = WdeTriple {
        ab: joint(a, b, s, ordering)?,
        not_b_c: joint(&b.complement(), c, s, ordering)?,
        ac: joint(a, c, s, ordering)?,
    };
    Ok(WdeOutcome::new(triple, TOLERANCE))
}

pub fn wde_quantum_from_specs(
    specs: &[ProjectorSpec; 3],
    s: &ComplexStateVector,
    ordering: JointOrdering,
) -> Result<WdeOutcome, LabError> {
    let [a, b, c] = build_projectors(specs, s.dim())?;
    wde_quantum(&a, &b, &c, s, ordering)
}

fn build_projectors(specs: &[ProjectorSpec; 3], dim: usize) -> Result<[HermitianProjector; 3], QuantumError> {
    Ok([
        projector_from_spec(&specs[0], dim)?,
        projector_from_spec(&specs[1], dim)?,
        projector_from_spec(&specs[2], dim)?,
    ])
}

/// Two-qubit singlet `(|01⟩ − |10⟩)/√2`.
pub fn singlet() -> ComplexStateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexStateVector::new(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
        Complex64::new(-h, 0.0),
        Complex64::new(0.0, 0.0),
    ])
    .expect("singlet is a unit vector")
}

/// Induced distribution of a state over the computational basis: the
/// classical distribution that diagonal projectors see.
pub fn induced_distribution(s: &ComplexStateVector) -> Result<ClassicalDistribution, CtpError> {
    let n = s.dim().trailing_zeros() as usize;
    ClassicalDistribution::from_weights(n, &s.probabilities())
}

/// Sorted angle values for a grid axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    values: Vec<f64>,
}

impl AngleGrid {
    pub fn new(mut values: Vec<f64>) -> Result<Self, LabError> {
        if values.is_empty() {
            return Err(LabError::EmptyGrid);
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(LabError::BadBounds(*v, *v));
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(AngleGrid { values })
    }

    /// `start, start + step, ...` up to `stop` inclusive (with a relative
    /// slack of `1e-9` steps on the endpoint).
    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self, LabError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(LabError::BadStep(step));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(LabError::BadBounds(start, stop));
        }
        if stop < start {
            return Err(LabError::EmptyGrid);
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Self::new((0..count).map(|k| start + k as f64 * step).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Configuration of the violation search.
///
/// `A`, `B`, `C` are single-qubit directions on the given factors; the polar
/// angles range over `thetas` and, when `phis` has more than one value, the
/// azimuths over `phis`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub thetas: AngleGrid,
    pub phis: AngleGrid,
    pub factors: [usize; 3],
    pub ordering: JointOrdering,
}

impl SearchConfig {
    /// Planar search (`φ = 0`) with `A` on the first qubit and `B`, `C` on
    /// the second, the layout under which the singlet exhibits the violation.
    pub fn planar(thetas: AngleGrid) -> Self {
        SearchConfig {
            thetas,
            phis: AngleGrid { values: vec![0.0] },
            factors: [0, 1, 1],
            ordering: JointOrdering::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationWitness {
    pub specs: [ProjectorSpec; 3],
    pub state: ComplexStateVector,
    /// `(θ_A, θ_B, θ_C, φ_A, φ_B, φ_C)`.
    pub angles: [f64; 6],
    pub triple: WdeTriple,
    pub magnitude: f64,
    pub ordering: JointOrdering,
}

fn cmp_angles(a: &[f64; 6], b: &[f64; 6]) -> CmpOrdering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(CmpOrdering::Equal)
}

/// Exhaustive scan of the grid. Returns the configuration with the largest
/// violation above [`VIOLATION_THRESHOLD`]; magnitudes within `1e-12` of the
/// maximum count as ties and go to the lexicographically smallest angle
/// tuple. Evaluation is parallel, selection is sequential over the grid
/// order, so the result does not depend on scheduling.
pub fn search_violation(
    config: &SearchConfig,
    state: &ComplexStateVector,
) -> Result<Option<ViolationWitness>, LabError> {
    let t = config.thetas.values();
    let p = config.phis.values();
    let (nt, np) = (t.len(), p.len());
    let total = nt.pow(3) * np.pow(3);
    let dim = state.dim();

    let tuple_at = |mut k: usize| {
        let mut idx = [0usize; 6];
        for slot in (0..6).rev() {
            let base = if slot < 3 { nt } else { np };
            idx[slot] = k % base;
            k /= base;
        }
        [t[idx[0]], t[idx[1]], t[idx[2]], p[idx[3]], p[idx[4]], p[idx[5]]]
    };
    let specs_for = |angles: &[f64; 6]| -> [ProjectorSpec; 3] {
        std::array::from_fn(|i| ProjectorSpec::qubit(config.factors[i], angles[i], angles[i + 3]))
    };

    let evaluated: Vec<(f64, [f64; 6], WdeTriple)> = (0..total)
        .into_par_iter()
        .map(|k| {
            let angles = tuple_at(k);
            let [a, b, c] = build_projectors(&specs_for(&angles), dim)?;
            let outcome = wde_quantum(&a, &b, &c, state, config.ordering)?;
            Ok((outcome.triple.violation(), angles, outcome.triple))
        })
        .collect::<Result<_, LabError>>()?;

    let best = evaluated.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    if best <= VIOLATION_THRESHOLD {
        return Ok(None);
    }
    let winner = evaluated
        .iter()
        .filter(|e| e.0 >= best - TOLERANCE)
        .min_by(|x, y| cmp_angles(&x.1, &y.1))
        .expect("the maximum is attained");
    Ok(Some(ViolationWitness {
        specs: specs_for(&winner.1),
        state: state.clone(),
        angles: winner.1,
        triple: winner.2,
        magnitude: winner.0,
        ordering: config.ordering,
    }))
}

/// Conjunction formulas of the three inequality terms over `A, B, C`.
pub fn term_formulas() -> [Formula; 3] {
    let (a, b, c) = (Formula::var(A), Formula::var(B), Formula::var(C));
    [Formula::and(a.clone(), b.clone()), Formula::and(Formula::not(b), c.clone()), Formula::and(a, c)]
}

/// Born probability of each of `A`, `B`, `C` on their own.
pub fn marginals(specs: &[ProjectorSpec; 3], s: &ComplexStateVector) -> Result<[f64; 3], LabError> {
    let [a, b, c] = build_projectors(specs, s.dim())?;
    Ok([born(&a, s)?, born(&b, s)?, born(&c, s)?])
}
