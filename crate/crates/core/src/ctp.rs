//! Classical probability as vectors and diagonal projectors.
//!
//! The `2^n` complete states span an orthonormal basis of `ℝ^{2^n}`. A
//! distribution becomes the unit vector `|s⟩ = Σ √|s_i| |s_i⟩`, a formula
//! becomes the 0/1 diagonal projector selecting the states where it holds,
//! and `|p| = ⟨s|P|s⟩ = ‖P s‖²`.

use thiserror::Error;

use crate::logic::{CompleteState, Formula, PropositionId, MAX_PROPOSITIONS};
use crate::TOLERANCE;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CtpError {
    #[error("proposition count {0} is out of range (1..={MAX_PROPOSITIONS})")]
    PropositionCount(usize),
    #[error("distribution for {n} propositions needs {expected} entries, got {got}")]
    Size { n: usize, expected: usize, got: usize },
    #[error("probability of complete state {state} is {value}, expected a finite value in [0, 1]")]
    BadProbability { state: usize, value: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("vector norm is {0}, expected 1")]
    NotUnit(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} is not a power of two")]
    BadDimension(usize),
    #[error("formula references {0} but only {1} propositions exist")]
    UnknownProposition(PropositionId, usize),
    #[error("cannot condition on a proposition of probability {0}")]
    NullCondition(f64),
    #[error("zero vector has no direction")]
    ZeroVector,
}

fn check_n(n: usize) -> Result<(), CtpError> {
    if n == 0 || n > MAX_PROPOSITIONS {
        Err(CtpError::PropositionCount(n))
    } else {
        Ok(())
    }
}

/// Probabilities of the complete states of `n` propositions.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self, CtpError> {
        check_n(n)?;
        let expected = 1usize << n;
        if probs.len() != expected {
            return Err(CtpError::Size { n, expected, got: probs.len() });
        }
        if let Some((state, &value)) =
            probs.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0 || **p > 1.0 + TOLERANCE)
        {
            return Err(CtpError::BadProbability { state, value });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(CtpError::NotNormalized(total));
        }
        Ok(ClassicalDistribution { n, probs })
    }

    /// Normalizes arbitrary nonnegative weights.
    pub fn from_weights(n: usize, weights: &[f64]) -> Result<Self, CtpError> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(CtpError::NotNormalized(total));
        }
        Self::new(n, weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self, CtpError> {
        check_n(n)?;
        let dim = 1usize << n;
        Self::new(n, vec![1.0 / dim as f64; dim])
    }

    pub fn propositions(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn state_probability(&self, state: CompleteState) -> f64 {
        self.probs[state.index()]
    }
}

/// A real vector over the complete-state basis with unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct RealStateVector {
    components: Vec<f64>,
}

impl RealStateVector {
    pub fn new(components: Vec<f64>) -> Result<Self, CtpError> {
        if !components.len().is_power_of_two() || components.len() < 2 {
            return Err(CtpError::BadDimension(components.len()));
        }
        let norm = norm_sq(&components).sqrt();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(CtpError::NotUnit(norm));
        }
        Ok(RealStateVector { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn as_direction(&self) -> Direction {
        Direction { unit: self.components.clone() }
    }
}

/// Component `i` is `√d_i`.
pub fn build_state_vector(d: &ClassicalDistribution) -> RealStateVector {
    RealStateVector { components: d.probs.iter().map(|p| p.sqrt()).collect() }
}

/// A 0/1 diagonal operator over the complete-state basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalProjector {
    mask: Vec<bool>,
}

impl DiagonalProjector {
    pub fn from_mask(mask: Vec<bool>) -> Result<Self, CtpError> {
        if !mask.len().is_power_of_two() || mask.len() < 2 {
            return Err(CtpError::BadDimension(mask.len()));
        }
        Ok(DiagonalProjector { mask })
    }

    pub fn identity(dim: usize) -> Result<Self, CtpError> {
        Self::from_mask(vec![true; dim])
    }

    pub fn zero(dim: usize) -> Result<Self, CtpError> {
        Self::from_mask(vec![false; dim])
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Diagonal as reals, `1.0` where the projector keeps the state.
    pub fn diagonal(&self) -> Vec<f64> {
        self.mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    pub fn is_zero(&self) -> bool {
        self.mask.iter().all(|&b| !b)
    }

    /// `P v`: zeroes the components of states where the proposition is false.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>, CtpError> {
        same_dim(self.dim(), v.len())?;
        Ok(v.iter().zip(&self.mask).map(|(x, &keep)| if keep { *x } else { 0.0 }).collect())
    }
}

fn same_dim(a: usize, b: usize) -> Result<(), CtpError> {
    if a == b {
        Ok(())
    } else {
        Err(CtpError::DimensionMismatch(a, b))
    }
}

pub fn projector_for(formula: &Formula, n: usize) -> Result<DiagonalProjector, CtpError> {
    check_n(n)?;
    if let Some(max) = formula.max_proposition() {
        if max.0 >= n {
            return Err(CtpError::UnknownProposition(max, n));
        }
    }
    DiagonalProjector::from_mask(CompleteState::all(n).map(|s| formula.holds_in(s)).collect())
}

pub fn proposition_projector(p: PropositionId, n: usize) -> Result<DiagonalProjector, CtpError> {
    projector_for(&Formula::var(p), n)
}

/// `⟨s|P|s⟩`.
pub fn probability(p: &DiagonalProjector, s: &RealStateVector) -> Result<f64, CtpError> {
    same_dim(p.dim(), s.dim())?;
    Ok(s.components.iter().zip(&p.mask).filter(|(_, &keep)| keep).map(|(x, _)| x * x).sum())
}

/// `I − P`.
pub fn negation_op(p: &DiagonalProjector) -> DiagonalProjector {
    DiagonalProjector { mask: p.mask.iter().map(|b| !b).collect() }
}

/// `PQ = QP`.
pub fn and_op(p: &DiagonalProjector, q: &DiagonalProjector) -> Result<DiagonalProjector, CtpError> {
    same_dim(p.dim(), q.dim())?;
    Ok(DiagonalProjector { mask: p.mask.iter().zip(&q.mask).map(|(a, b)| *a && *b).collect() })
}

/// `P + Q − PQ`.
pub fn or_op(p: &DiagonalProjector, q: &DiagonalProjector) -> Result<DiagonalProjector, CtpError> {
    same_dim(p.dim(), q.dim())?;
    let entry = |a: bool, b: bool| {
        let (a, b) = (f64::from(u8::from(a)), f64::from(u8::from(b)));
        a + b - a * b == 1.0
    };
    Ok(DiagonalProjector { mask: p.mask.iter().zip(&q.mask).map(|(a, b)| entry(*a, *b)).collect() })
}

/// `|q|_p = ⟨p̂|Q|p̂⟩` with `p̂ = P s / ‖P s‖`.
pub fn conditional(q: &DiagonalProjector, p: &DiagonalProjector, s: &RealStateVector) -> Result<f64, CtpError> {
    same_dim(q.dim(), p.dim())?;
    let prob_p = probability(p, s)?;
    if prob_p <= TOLERANCE {
        return Err(CtpError::NullCondition(prob_p));
    }
    let projected = p.apply(&s.components)?;
    let norm = prob_p.sqrt();
    let unit: Vec<f64> = projected.iter().map(|x| x / norm).collect();
    Ok(unit.iter().zip(&q.mask).filter(|(_, &keep)| keep).map(|(x, _)| x * x).sum())
}

/// A one-dimensional subspace, stored as its normalized vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    unit: Vec<f64>,
}

impl Direction {
    pub fn new(v: &[f64]) -> Result<Self, CtpError> {
        let norm = norm_sq(v).sqrt();
        if norm <= TOLERANCE || !norm.is_finite() {
            return Err(CtpError::ZeroVector);
        }
        Ok(Direction { unit: v.iter().map(|x| x / norm).collect() })
    }

    /// The direction `P|S⟩`.
    pub fn projected(p: &DiagonalProjector, s: &RealStateVector) -> Result<Self, CtpError> {
        Direction::new(&p.apply(&s.components)?)
    }

    pub fn unit(&self) -> &[f64] {
        &self.unit
    }
}

/// Squared cosine of the angle between two directions.
pub fn cos2(a: &Direction, b: &Direction) -> Result<f64, CtpError> {
    same_dim(a.unit.len(), b.unit.len())?;
    let dot: f64 = a.unit.iter().zip(&b.unit).map(|(x, y)| x * y).sum();
    Ok(dot * dot)
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn var(k: usize) -> Formula {
        Formula::var(PropositionId(k))
    }

    #[test]
    fn state_vector_examples() {
        let certain = ClassicalDistribution::new(1, vec![1.0, 0.0]).unwrap();
        assert_eq!(build_state_vector(&certain).components(), [1.0, 0.0]);
        let half = ClassicalDistribution::new(1, vec![0.5, 0.5]).unwrap();
        for c in build_state_vector(&half).components() {
            assert!((c - 0.5f64.sqrt()).abs() < EPS);
        }
        let uniform = ClassicalDistribution::uniform(2).unwrap();
        assert_eq!(build_state_vector(&uniform).components(), [0.5; 4]);
    }

    #[test]
    fn distribution_validation() {
        assert!(matches!(ClassicalDistribution::new(1, vec![0.5]), Err(CtpError::Size { .. })));
        assert!(matches!(
            ClassicalDistribution::new(1, vec![-0.1, 1.1]),
            Err(CtpError::BadProbability { state: 0, .. })
        ));
        assert!(matches!(ClassicalDistribution::new(1, vec![0.5, 0.6]), Err(CtpError::NotNormalized(_))));
        assert!(matches!(ClassicalDistribution::new(1, vec![f64::NAN, 1.0]), Err(CtpError::BadProbability { .. })));
        assert!(matches!(ClassicalDistribution::new(0, vec![1.0]), Err(CtpError::PropositionCount(0))));
    }

    #[test]
    fn projector_examples() {
        assert_eq!(proposition_projector(PropositionId(0), 1).unwrap().mask(), [true, false]);
        let pq = projector_for(&Formula::and(var(0), var(1)), 2).unwrap();
        assert_eq!(pq.mask(), [true, false, false, false]);
        let taut = projector_for(&Formula::or(var(0), Formula::not(var(0))), 2).unwrap();
        assert!(taut.is_identity());
        assert!(matches!(projector_for(&var(2), 2), Err(CtpError::UnknownProposition(..))));
    }

    #[test]
    fn probability_examples() {
        let p = DiagonalProjector::from_mask(vec![true, false]).unwrap();
        let s = RealStateVector::new(vec![0.3f64.sqrt(), 0.7f64.sqrt()]).unwrap();
        assert!((probability(&p, &s).unwrap() - 0.3).abs() < EPS);
        let id = DiagonalProjector::identity(2).unwrap();
        assert!((probability(&id, &s).unwrap() - 1.0).abs() < EPS);
        let uniform = build_state_vector(&ClassicalDistribution::uniform(2).unwrap());
        let first = DiagonalProjector::from_mask(vec![true, true, false, false]).unwrap();
        assert!((probability(&first, &uniform).unwrap() - 0.5).abs() < EPS);
        assert!(matches!(probability(&first, &s), Err(CtpError::DimensionMismatch(4, 2))));
    }

    #[test]
    fn operator_examples() {
        let p = DiagonalProjector::from_mask(vec![true, true, false, false]).unwrap();
        let q = DiagonalProjector::from_mask(vec![true, false, true, false]).unwrap();
        assert!(and_op(&p, &negation_op(&p)).unwrap().is_zero());
        assert!(or_op(&p, &negation_op(&p)).unwrap().is_identity());
        assert_eq!(or_op(&p, &q).unwrap().mask(), [true, true, true, false]);
        assert_eq!(and_op(&p, &q).unwrap().mask(), [true, false, false, false]);
        let small = DiagonalProjector::identity(2).unwrap();
        assert!(matches!(and_op(&p, &small), Err(CtpError::DimensionMismatch(4, 2))));
    }

    #[test]
    fn conditional_examples() {
        let s = build_state_vector(&ClassicalDistribution::uniform(2).unwrap());
        let p = proposition_projector(PropositionId(0), 2).unwrap();
        let q = proposition_projector(PropositionId(1), 2).unwrap();
        assert!((conditional(&p, &p, &s).unwrap() - 1.0).abs() < EPS);
        assert!((conditional(&q, &p, &s).unwrap() - 0.5).abs() < EPS);
        let certain = build_state_vector(&ClassicalDistribution::new(2, vec![0.0, 0.0, 1.0, 0.0]).unwrap());
        assert!(matches!(conditional(&q, &p, &certain), Err(CtpError::NullCondition(_))));
    }

    #[test]
    fn cosine_identities() {
        let d = ClassicalDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let s = build_state_vector(&d);
        let p = proposition_projector(PropositionId(0), 2).unwrap();
        let q = proposition_projector(PropositionId(1), 2).unwrap();
        let pq = and_op(&p, &q).unwrap();
        let dir_s = s.as_direction();
        let dir_p = Direction::projected(&p, &s).unwrap();
        let dir_q = Direction::projected(&q, &s).unwrap();
        let dir_pq = Direction::projected(&pq, &s).unwrap();
        // |p| = 0.3, |q| = 0.4, |p∧q| = 0.1
        assert!((cos2(&dir_s, &dir_p).unwrap() - 0.3).abs() < EPS);
        assert!((cos2(&dir_p, &dir_pq).unwrap() - 0.1 / 0.3).abs() < EPS);
        assert!((cos2(&dir_p, &dir_q).unwrap() - (0.1 / 0.4) * (0.1 / 0.3)).abs() < EPS);
    }

    #[test]
    fn cos2_ignores_sign_and_scale() {
        let a = Direction::new(&[1.0, 1.0]).unwrap();
        let b = Direction::new(&[-3.0, 0.0]).unwrap();
        assert!((cos2(&a, &b).unwrap() - 0.5).abs() < EPS);
        assert!(matches!(Direction::new(&[0.0, 0.0]), Err(CtpError::ZeroVector)));
    }
}
