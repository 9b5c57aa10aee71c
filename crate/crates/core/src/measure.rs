//! TFU probability from measures over TFU cells.
//!
//! `[p] = ‖T‖ / (‖T‖ + ‖F‖)`: the measure of cells where `p` is manifestly
//! true relative to the cells where `p` is decided at all. Cells where `p` is
//! undecidable drop out of both numerator and denominator.

use thiserror::Error;

use crate::ctp::ClassicalDistribution;
use crate::logic::{PropositionId, TfuValue};

/// Largest proposition count for a measure assignment (`3^12` cells).
pub const MAX_MEASURE_PROPOSITIONS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("proposition count {0} is out of range (1..={MAX_MEASURE_PROPOSITIONS})")]
    PropositionCount(usize),
    #[error("measure assignment for {n} propositions needs {expected} cells, got {got}")]
    Size { n: usize, expected: usize, got: usize },
    #[error("cell {cell} has measure {value}, expected a finite nonnegative value")]
    BadMeasure { cell: String, value: f64 },
    #[error("total measure is zero")]
    ZeroTotal,
    #[error("proposition {index} is out of range for {n} propositions")]
    UnknownProposition { index: usize, n: usize },
    #[error("{0} is undecidable in every cell of positive measure")]
    EverywhereUndecidable(PropositionId),
    #[error("[{q}]_{p} is undefined: no measure where {p} is T and {q} is decided")]
    UndefinedConditional { q: PropositionId, p: PropositionId },
    #[error("cell label {0:?} is not a string of T/F/U of the right length")]
    BadCellLabel(String),
}

/// Nonnegative measures over the `3^n` cells of `(T, F, U)^n`.
///
/// Cells are indexed base 3, proposition 0 most significant, with digits
/// `T = 0`, `F = 1`, `U = 2`. For `n = 2` the order is
/// `TT, TF, TU, FT, FF, FU, UT, UF, UU`, the first letter belonging to `p0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfuMeasureAssignment {
    n: usize,
    cells: Vec<f64>,
}

fn digit(v: TfuValue) -> usize {
    match v {
        TfuValue::ManifestlyTrue => 0,
        TfuValue::ManifestlyFalse => 1,
        TfuValue::Undecidable => 2,
    }
}

fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

impl TfuMeasureAssignment {
    pub fn new(n: usize, cells: Vec<f64>) -> Result<Self, MeasureError> {
        if n == 0 || n > MAX_MEASURE_PROPOSITIONS {
            return Err(MeasureError::PropositionCount(n));
        }
        let expected = pow3(n);
        if cells.len() != expected {
            return Err(MeasureError::Size { n, expected, got: cells.len() });
        }
        if let Some((i, &value)) = cells.iter().enumerate().find(|(_, m)| !m.is_finite() || **m < 0.0) {
            return Err(MeasureError::BadMeasure { cell: cell_label(n, i), value });
        }
        if cells.iter().sum::<f64>() <= 0.0 {
            return Err(MeasureError::ZeroTotal);
        }
        Ok(TfuMeasureAssignment { n, cells })
    }

    /// Builds from `(label, measure)` pairs such as `("TU", 2.0)`; unlisted
    /// cells get measure zero and repeated labels accumulate.
    pub fn from_labels<'a, I>(n: usize, entries: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        if n == 0 || n > MAX_MEASURE_PROPOSITIONS {
            return Err(MeasureError::PropositionCount(n));
        }
        let mut cells = vec![0.0; pow3(n)];
        for (label, m) in entries {
            cells[parse_cell_label(n, label)?] += m;
        }
        Self::new(n, cells)
    }

    pub fn propositions(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// TFU value of proposition `p` in cell `index`.
    pub fn value_in(&self, index: usize, p: PropositionId) -> TfuValue {
        TfuValue::ALL[(index / pow3(self.n - 1 - p.0)) % 3]
    }

    pub fn cell_index(&self, values: &[TfuValue]) -> usize {
        values.iter().fold(0, |acc, v| acc * 3 + digit(*v))
    }

    fn check(&self, p: PropositionId) -> Result<(), MeasureError> {
        if p.0 >= self.n {
            Err(MeasureError::UnknownProposition { index: p.0, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Total measure of the cells where `p` takes `v`.
    pub fn marginal(&self, p: PropositionId, v: TfuValue) -> Result<f64, MeasureError> {
        self.check(p)?;
        Ok(self.sum_where(|i| self.value_in(i, p) == v))
    }

    fn sum_where(&self, keep: impl Fn(usize) -> bool) -> f64 {
        self.cells.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, m)| m).sum()
    }

    /// Same measures with `T` and `F` exchanged on `p`: the assignment of `¬p`.
    pub fn with_negated(&self, p: PropositionId) -> Result<Self, MeasureError> {
        self.check(p)?;
        let stride = pow3(self.n - 1 - p.0);
        let cells = (0..self.cells.len())
            .map(|i| match self.value_in(i, p) {
                TfuValue::ManifestlyTrue => self.cells[i + stride],
                TfuValue::ManifestlyFalse => self.cells[i - stride],
                TfuValue::Undecidable => self.cells[i],
            })
            .collect();
        Ok(TfuMeasureAssignment { n: self.n, cells })
    }

    pub fn scaled(&self, factor: f64) -> Result<Self, MeasureError> {
        Self::new(self.n, self.cells.iter().map(|m| m * factor).collect())
    }

    /// Whether every cell with an undecidable coordinate has zero measure.
    pub fn is_decided(&self) -> bool {
        self.cells
            .iter()
            .enumerate()
            .all(|(i, m)| *m == 0.0 || (0..self.n).all(|k| self.value_in(i, PropositionId(k)).is_decided()))
    }

    /// For a `U`-free assignment, the induced classical distribution over the
    /// complete states (`T` read as affirmative, `F` as negated).
    pub fn to_classical(&self) -> Option<ClassicalDistribution> {
        if !self.is_decided() {
            return None;
        }
        let total = self.total();
        let mut probs = vec![0.0; 1 << self.n];
        for (i, m) in self.cells.iter().enumerate() {
            if *m == 0.0 {
                continue;
            }
            let state = (0..self.n).fold(0usize, |acc, k| {
                (acc << 1) | usize::from(self.value_in(i, PropositionId(k)) == TfuValue::ManifestlyFalse)
            });
            probs[state] += m / total;
        }
        ClassicalDistribution::new(self.n, probs).ok()
    }
}

pub fn cell_label(n: usize, index: usize) -> String {
    (0..n).map(|k| TfuValue::ALL[(index / pow3(n - 1 - k)) % 3].symbol()).collect()
}

fn parse_cell_label(n: usize, label: &str) -> Result<usize, MeasureError> {
    let values: Option<Vec<TfuValue>> = label.chars().map(TfuValue::from_symbol).collect();
    match values {
        Some(v) if v.len() == n => Ok(v.iter().fold(0, |acc, v| acc * 3 + digit(*v))),
        _ => Err(MeasureError::BadCellLabel(label.to_string())),
    }
}

/// `[p]`.
pub fn tfu_probability(p: PropositionId, m: &TfuMeasureAssignment) -> Result<f64, MeasureError> {
    let t = m.marginal(p, TfuValue::ManifestlyTrue)?;
    let f = m.marginal(p, TfuValue::ManifestlyFalse)?;
    if t + f <= 0.0 {
        return Err(MeasureError::EverywhereUndecidable(p));
    }
    Ok(t / (t + f))
}

/// `[q]_p = ‖p=T, q=T‖ / (‖p=T, q=T‖ + ‖p=T, q=F‖)`, all other propositions
/// marginalized over every value.
pub fn tfu_conditional(q: PropositionId, p: PropositionId, m: &TfuMeasureAssignment) -> Result<f64, MeasureError> {
    m.check(q)?;
    m.check(p)?;
    let p_true = |i: usize| m.value_in(i, p) == TfuValue::ManifestlyTrue;
    let tt = m.sum_where(|i| p_true(i) && m.value_in(i, q) == TfuValue::ManifestlyTrue);
    let tf = m.sum_where(|i| p_true(i) && m.value_in(i, q) == TfuValue::ManifestlyFalse);
    if tt + tf <= 0.0 {
        return Err(MeasureError::UndefinedConditional { q, p });
    }
    Ok(tt / (tt + tf))
}

/// `[p][q]_p − [q][p]_q`; zero in classical probability, generically not here.
pub fn noncommutativity_gap(p: PropositionId, q: PropositionId, m: &TfuMeasureAssignment) -> Result<f64, MeasureError> {
    let forward = tfu_probability(p, m)? * tfu_conditional(q, p, m)?;
    let backward = tfu_probability(q, m)? * tfu_conditional(p, q, m)?;
    Ok(forward - backward)
}

/// `([p], [¬p])`, the second computed independently on the `T`/`F`-swapped
/// assignment.
pub fn complement_check(p: PropositionId, m: &TfuMeasureAssignment) -> Result<(f64, f64), MeasureError> {
    let direct = tfu_probability(p, m)?;
    let negated = tfu_probability(p, &m.with_negated(p)?)?;
    Ok((direct, negated))
}

/// Classical distribution over `p_0..p_{n-1}` followed by the decidability
/// propositions `p̄_0..p̄_{n-1}` (`p̄` reads "p is decidable").
#[derive(Debug, Clone, PartialEq)]
pub struct DecidabilityAugmentedSpace {
    n: usize,
    distribution: ClassicalDistribution,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AugmentedSpaceError {
    #[error("augmented space needs an even number of propositions, got {0}")]
    OddPropositionCount(usize),
    #[error("augmented space over {0} base propositions exceeds the measure limit")]
    TooLarge(usize),
}

impl DecidabilityAugmentedSpace {
    pub fn new(distribution: ClassicalDistribution) -> Result<Self, AugmentedSpaceError> {
        let total = distribution.propositions();
        if !total.is_multiple_of(2) {
            return Err(AugmentedSpaceError::OddPropositionCount(total));
        }
        if total / 2 > MAX_MEASURE_PROPOSITIONS {
            return Err(AugmentedSpaceError::TooLarge(total / 2));
        }
        Ok(DecidabilityAugmentedSpace { n: total / 2, distribution })
    }

    pub fn base_propositions(&self) -> usize {
        self.n
    }

    pub fn distribution(&self) -> &ClassicalDistribution {
        &self.distribution
    }

    /// Index of `p̄` among the `2n` augmented propositions.
    pub fn decidability_of(&self, p: PropositionId) -> PropositionId {
        PropositionId(self.n + p.0)
    }
}

/// Regroups the augmented classical distribution into TFU cells:
/// `p` is `T` on `p ∧ p̄`, `F` on `¬p ∧ p̄` and `U` on `¬p̄`.
pub fn tfu_from_augmented(space: &DecidabilityAugmentedSpace) -> TfuMeasureAssignment {
    let n = space.n;
    let total_props = 2 * n;
    let mut cells = vec![0.0; pow3(n)];
    for (index, prob) in space.distribution.probabilities().iter().enumerate() {
        let cell = (0..n).fold(0usize, |acc, k| {
            let truth = crate::logic::affirmative_in(total_props, index, k);
            let decided = crate::logic::affirmative_in(total_props, index, n + k);
            let v = match (decided, truth) {
                (true, true) => TfuValue::ManifestlyTrue,
                (true, false) => TfuValue::ManifestlyFalse,
                (false, _) => TfuValue::Undecidable,
            };
            acc * 3 + digit(v)
        });
        cells[cell] += prob;
    }
    TfuMeasureAssignment { n, cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;
    const P: PropositionId = PropositionId(0);
    const Q: PropositionId = PropositionId(1);

    fn one(t: f64, f: f64, u: f64) -> TfuMeasureAssignment {
        TfuMeasureAssignment::new(1, vec![t, f, u]).unwrap()
    }

    #[test]
    fn probability_examples() {
        assert!((tfu_probability(P, &one(3.0, 1.0, 100.0)).unwrap() - 0.75).abs() < EPS);
        assert_eq!(tfu_probability(P, &one(1.0, 0.0, 0.0)).unwrap(), 1.0);
        let six = TfuMeasureAssignment::from_labels(
            2,
            [("TT", 1.0), ("TF", 1.0), ("TU", 1.0), ("FT", 1.0), ("FF", 1.0), ("FU", 1.0)],
        )
        .unwrap();
        assert!((tfu_probability(P, &six).unwrap() - 0.5).abs() < EPS);
        assert!(matches!(tfu_probability(P, &one(0.0, 0.0, 4.0)), Err(MeasureError::EverywhereUndecidable(_))));
    }

    #[test]
    fn conditional_examples() {
        let m = TfuMeasureAssignment::from_labels(2, [("TT", 1.0), ("TF", 1.0), ("FU", 9.0), ("UU", 3.0)]).unwrap();
        assert!((tfu_conditional(Q, P, &m).unwrap() - 0.5).abs() < EPS);
        let m = TfuMeasureAssignment::from_labels(2, [("TT", 2.0), ("TU", 5.0)]).unwrap();
        assert_eq!(tfu_conditional(Q, P, &m).unwrap(), 1.0);
        let m = TfuMeasureAssignment::from_labels(2, [("TU", 5.0), ("FT", 1.0)]).unwrap();
        assert!(matches!(tfu_conditional(Q, P, &m), Err(MeasureError::UndefinedConditional { .. })));
    }

    #[test]
    fn gap_exhibit() {
        let m = TfuMeasureAssignment::from_labels(2, [("TT", 1.0), ("TF", 1.0), ("UT", 2.0)]).unwrap();
        // [p] = 2/2, [q]_p = 1/2, [q] = 3/4, [p]_q = 1/1
        assert_eq!(tfu_probability(P, &m).unwrap(), 1.0);
        assert_eq!(tfu_conditional(Q, P, &m).unwrap(), 0.5);
        assert_eq!(tfu_probability(Q, &m).unwrap(), 0.75);
        assert_eq!(tfu_conditional(P, Q, &m).unwrap(), 1.0);
        assert!((noncommutativity_gap(P, Q, &m).unwrap() + 0.25).abs() < EPS);
    }

    #[test]
    fn symmetric_assignment_has_no_gap() {
        let m = TfuMeasureAssignment::from_labels(2, [("TT", 1.0), ("TU", 2.0), ("UT", 2.0), ("TF", 0.5), ("FT", 0.5)])
            .unwrap();
        assert!(noncommutativity_gap(P, Q, &m).unwrap().abs() < EPS);
    }

    #[test]
    fn complement_examples() {
        let (p, not_p) = complement_check(P, &one(3.0, 1.0, 7.0)).unwrap();
        assert!((p - 0.75).abs() < EPS && (not_p - 0.25).abs() < EPS);
        assert_eq!(complement_check(P, &one(0.0, 5.0, 0.0)).unwrap(), (0.0, 1.0));
    }

    #[test]
    fn cell_labels() {
        assert_eq!(cell_label(2, 0), "TT");
        assert_eq!(cell_label(2, 6), "UT");
        assert_eq!(cell_label(2, 8), "UU");
        assert!(matches!(TfuMeasureAssignment::from_labels(2, [("TX", 1.0)]), Err(MeasureError::BadCellLabel(_))));
        assert!(matches!(TfuMeasureAssignment::from_labels(2, [("T", 1.0)]), Err(MeasureError::BadCellLabel(_))));
    }

    #[test]
    fn validation() {
        assert!(matches!(TfuMeasureAssignment::new(1, vec![0.0; 3]), Err(MeasureError::ZeroTotal)));
        assert!(matches!(TfuMeasureAssignment::new(1, vec![1.0, -1.0, 0.0]), Err(MeasureError::BadMeasure { .. })));
        assert!(matches!(TfuMeasureAssignment::new(2, vec![1.0; 3]), Err(MeasureError::Size { .. })));
    }

    #[test]
    fn augmented_regrouping() {
        // order over (p, p̄): p p̄, p ¬p̄, ¬p p̄, ¬p ¬p̄
        let d = ClassicalDistribution::new(2, vec![0.2, 0.25, 0.3, 0.25]).unwrap();
        let space = DecidabilityAugmentedSpace::new(d).unwrap();
        let m = tfu_from_augmented(&space);
        assert_eq!(m.cells(), [0.2, 0.3, 0.5]);
        assert!((tfu_probability(P, &m).unwrap() - 0.4).abs() < EPS);
    }

    #[test]
    fn fully_decidable_space_is_classical() {
        let d = ClassicalDistribution::new(2, vec![0.35, 0.0, 0.65, 0.0]).unwrap();
        let m = tfu_from_augmented(&DecidabilityAugmentedSpace::new(d).unwrap());
        assert!((tfu_probability(P, &m).unwrap() - 0.35).abs() < EPS);
        assert!(m.is_decided());
    }

    #[test]
    fn odd_augmented_space_rejected() {
        let d = ClassicalDistribution::uniform(3).unwrap();
        assert!(matches!(DecidabilityAugmentedSpace::new(d), Err(AugmentedSpaceError::OddPropositionCount(3))));
    }

    #[test]
    fn induced_classical_distribution() {
        let m = TfuMeasureAssignment::from_labels(2, [("TT", 1.0), ("TF", 1.0), ("FF", 2.0)]).unwrap();
        let d = m.to_classical().unwrap();
        assert_eq!(d.probabilities(), [0.25, 0.25, 0.0, 0.5]);
        let u = TfuMeasureAssignment::from_labels(2, [("TU", 1.0)]).unwrap();
        assert!(u.to_classical().is_none());
    }
}
