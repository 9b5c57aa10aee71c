//! TFU probability realized in `ℂ^{2^n}`.
//!
//! States are unit complex vectors and propositions are orthogonal
//! projectors (Hermitian, idempotent). Unlike the diagonal projectors of
//! [`crate::ctp`], two projectors need not commute, and the ordered product
//! `[p][q]_p` then differs from `[q][p]_q`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::ctp::{DiagonalProjector, RealStateVector};
use crate::TOLERANCE;

/// Residual norm, relative to the input vector, below which a basis vector is
/// considered dependent on the ones before it.
pub const INDEPENDENCE_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("dimension {0} is not a power of two (at least 2)")]
    BadDimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("state norm is {0}, expected 1")]
    NotUnit(f64),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not idempotent (deviation {0:e})")]
    NotIdempotent(f64),
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("basis vector {0} is linearly dependent on the preceding ones")]
    DependentBasis(usize),
    #[error("qubit factor {factor} is out of range for dimension {dim}")]
    BadFactor { factor: usize, dim: usize },
    #[error("angles must be finite, got theta={theta}, phi={phi}")]
    BadAngle { theta: f64, phi: f64 },
    #[error("Born value {0} lies outside [0, 1]")]
    OutOfRange(f64),
    #[error("cannot condition on a projector of probability {0}")]
    NullCondition(f64),
}

fn check_dim(dim: usize) -> Result<(), QuantumError> {
    if dim >= 2 && dim.is_power_of_two() {
        Ok(())
    } else {
        Err(QuantumError::BadDimension(dim))
    }
}

fn same_dim(a: usize, b: usize) -> Result<(), QuantumError> {
    if a == b {
        Ok(())
    } else {
        Err(QuantumError::DimensionMismatch(a, b))
    }
}

/// Unit vector in `ℂ^{2^k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStateVector {
    amps: DVector<Complex64>,
}

impl ComplexStateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        check_dim(amps.len())?;
        let amps = DVector::from_vec(amps);
        let norm = amps.norm();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(QuantumError::NotUnit(norm));
        }
        Ok(ComplexStateVector { amps })
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        check_dim(amps.len())?;
        let amps = DVector::from_vec(amps);
        let norm = amps.norm();
        if norm <= TOLERANCE || !norm.is_finite() {
            return Err(QuantumError::ZeroVector);
        }
        Ok(ComplexStateVector { amps: amps.unscale(norm) })
    }

    pub fn from_real(s: &RealStateVector) -> Self {
        ComplexStateVector {
            amps: DVector::from_iterator(s.dim(), s.components().iter().map(|&x| Complex64::new(x, 0.0))),
        }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self, QuantumError> {
        check_dim(dim)?;
        if index >= dim {
            return Err(QuantumError::DimensionMismatch(index, dim));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(ComplexStateVector { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// `|s_i|²` per basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Orthogonal projector: Hermitian and idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianProjector {
    matrix: DMatrix<Complex64>,
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl HermitianProjector {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, QuantumError> {
        if !matrix.is_square() {
            return Err(QuantumError::NotSquare(matrix.nrows(), matrix.ncols()));
        }
        check_dim(matrix.nrows())?;
        let hermitian_dev = max_entry(&(&matrix - matrix.adjoint()));
        if hermitian_dev > TOLERANCE {
            return Err(QuantumError::NotHermitian(hermitian_dev));
        }
        let idempotent_dev = max_entry(&(&matrix * &matrix - &matrix));
        if idempotent_dev > TOLERANCE {
            return Err(QuantumError::NotIdempotent(idempotent_dev));
        }
        Ok(HermitianProjector { matrix })
    }

    pub fn identity(dim: usize) -> Result<Self, QuantumError> {
        check_dim(dim)?;
        Ok(HermitianProjector { matrix: DMatrix::identity(dim, dim) })
    }

    pub fn from_diagonal(p: &DiagonalProjector) -> Self {
        let diag = DVector::from_iterator(p.dim(), p.diagonal().into_iter().map(|x| Complex64::new(x, 0.0)));
        HermitianProjector { matrix: DMatrix::from_diagonal(&diag) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `I − P`.
    pub fn complement(&self) -> Self {
        let dim = self.dim();
        HermitianProjector { matrix: DMatrix::identity(dim, dim) - &self.matrix }
    }

    pub fn apply(&self, s: &DVector<Complex64>) -> Result<DVector<Complex64>, QuantumError> {
        same_dim(self.dim(), s.len())?;
        Ok(&self.matrix * s)
    }
}

/// How to build a projector.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectorSpec {
    /// Projector onto the span of linearly independent vectors.
    Subspace(Vec<Vec<Complex64>>),
    /// `|d⟩⟨d|` on one qubit factor (factor 0 most significant), identity
    /// elsewhere, with `|d⟩ = (cos(θ/2), e^{iφ} sin(θ/2))`.
    Qubit { factor: usize, theta: f64, phi: f64 },
}

impl ProjectorSpec {
    pub fn qubit(factor: usize, theta: f64, phi: f64) -> Self {
        ProjectorSpec::Qubit { factor, theta, phi }
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
pub fn orthonormalize(vectors: &[Vec<Complex64>]) -> Result<Vec<DVector<Complex64>>, QuantumError> {
    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        if let Some(first) = basis.first() {
            same_dim(first.len(), v.len())?;
        }
        let mut w = DVector::from_column_slice(v);
        let original = w.norm();
        if original <= 0.0 || !original.is_finite() {
            return Err(QuantumError::DependentBasis(k));
        }
        for _ in 0..2 {
            for e in &basis {
                let overlap = e.dotc(&w);
                w -= e * overlap;
            }
        }
        let residual = w.norm();
        if residual <= INDEPENDENCE_THRESHOLD * original {
            return Err(QuantumError::DependentBasis(k));
        }
        basis.push(w.unscale(residual));
    }
    Ok(basis)
}

pub fn projector_from_spec(spec: &ProjectorSpec, dim: usize) -> Result<HermitianProjector, QuantumError> {
    check_dim(dim)?;
    match spec {
        ProjectorSpec::Subspace(vectors) => {
            if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
                return Err(QuantumError::DimensionMismatch(v.len(), dim));
            }
            let basis = orthonormalize(vectors)?;
            let mut matrix = DMatrix::zeros(dim, dim);
            for e in &basis {
                matrix += e * e.adjoint();
            }
            Ok(HermitianProjector { matrix })
        }
        &ProjectorSpec::Qubit { factor, theta, phi } => {
            if !theta.is_finite() || !phi.is_finite() {
                return Err(QuantumError::BadAngle { theta, phi });
            }
            let qubits = dim.trailing_zeros() as usize;
            if factor >= qubits {
                return Err(QuantumError::BadFactor { factor, dim });
            }
            let d = DVector::from_vec(vec![
                Complex64::new((theta / 2.0).cos(), 0.0),
                Complex64::from_polar((theta / 2.0).sin(), phi),
            ]);
            let local = &d * d.adjoint();
            let before = 1usize << factor;
            let after = 1usize << (qubits - 1 - factor);
            let matrix = DMatrix::<Complex64>::identity(before, before)
                .kronecker(&local)
                .kronecker(&DMatrix::identity(after, after));
            Ok(HermitianProjector { matrix })
        }
    }
}

/// `⟨s|P|s⟩`; rounding just outside `[0, 1]` is clamped, anything further
/// out is an error.
pub fn born(p: &HermitianProjector, s: &ComplexStateVector) -> Result<f64, QuantumError> {
    let ps = p.apply(&s.amps)?;
    clamp_unit(s.amps.dotc(&ps).re)
}

fn clamp_unit(value: f64) -> Result<f64, QuantumError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else if (-TOLERANCE..0.0).contains(&value) {
        Ok(0.0)
    } else if value > 1.0 && value <= 1.0 + TOLERANCE {
        Ok(1.0)
    } else {
        Err(QuantumError::OutOfRange(value))
    }
}

/// `‖Q P s‖² / ‖P s‖²`: probability of `q` after `p` has been found.
pub fn sequential_conditional(
    q: &HermitianProjector,
    p: &HermitianProjector,
    s: &ComplexStateVector,
) -> Result<f64, QuantumError> {
    same_dim(q.dim(), p.dim())?;
    let ps = p.apply(&s.amps)?;
    let prob_p = ps.norm_squared();
    if prob_p <= TOLERANCE {
        return Err(QuantumError::NullCondition(prob_p));
    }
    let qps = q.apply(&ps)?;
    clamp_unit(qps.norm_squared() / prob_p)
}

/// `‖P₂ P₁ s‖²`, the probability of finding `first` and then `second`.
pub fn sequential_joint(
    first: &HermitianProjector,
    second: &HermitianProjector,
    s: &ComplexStateVector,
) -> Result<f64, QuantumError> {
    same_dim(first.dim(), second.dim())?;
    let ps = first.apply(&s.amps)?;
    clamp_unit(second.apply(&ps)?.norm_squared())
}

/// `born(P)·[q]_p − born(Q)·[p]_q`, which equals `‖QPs‖² − ‖PQs‖²`.
pub fn product_asymmetry(
    p: &HermitianProjector,
    q: &HermitianProjector,
    s: &ComplexStateVector,
) -> Result<f64, QuantumError> {
    let forward = born(p, s)? * sequential_conditional(q, p, s)?;
    let backward = born(q, s)? * sequential_conditional(p, q, s)?;
    Ok(forward - backward)
}

/// Largest entry magnitude of `PQ − QP`.
pub fn commutator_norm(p: &HermitianProjector, q: &HermitianProjector) -> Result<f64, QuantumError> {
    same_dim(p.dim(), q.dim())?;
    Ok(max_entry(&(&p.matrix * &q.matrix - &q.matrix * &p.matrix)))
}

/// Kronecker composition of subsystems.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for ComplexStateVector {
    fn tensor(&self, other: &Self) -> Self {
        let amps = DVector::from_iterator(
            self.dim() * other.dim(),
            self.amps.iter().flat_map(|a| other.amps.iter().map(move |b| a * b)),
        );
        ComplexStateVector { amps }
    }
}

impl Tensor for HermitianProjector {
    fn tensor(&self, other: &Self) -> Self {
        HermitianProjector { matrix: self.matrix.kronecker(&other.matrix) }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    use super::*;

    const EPS: f64 = 1e-12;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn up() -> ComplexStateVector {
        ComplexStateVector::basis(2, 0).unwrap()
    }

    fn diag(entries: &[bool]) -> HermitianProjector {
        HermitianProjector::from_diagonal(&DiagonalProjector::from_mask(entries.to_vec()).unwrap())
    }

    fn assert_matrix(m: &DMatrix<Complex64>, expected: &[f64]) {
        for (got, want) in m.transpose().iter().zip(expected) {
            assert!((got - c(*want)).norm() < EPS, "{m} vs {expected:?}");
        }
    }

    #[test]
    fn qubit_directions() {
        let north = projector_from_spec(&ProjectorSpec::qubit(0, 0.0, 0.0), 2).unwrap();
        assert_matrix(north.matrix(), &[1.0, 0.0, 0.0, 0.0]);
        let south = projector_from_spec(&ProjectorSpec::qubit(0, PI, 0.0), 2).unwrap();
        assert_matrix(south.matrix(), &[0.0, 0.0, 0.0, 1.0]);
        let equator = projector_from_spec(&ProjectorSpec::qubit(0, FRAC_PI_2, 0.0), 2).unwrap();
        assert_matrix(equator.matrix(), &[0.5; 4]);
    }

    #[test]
    fn qubit_factor_layout() {
        // factor 0 is the most significant qubit: diag(1,1,0,0)
        let p = projector_from_spec(&ProjectorSpec::qubit(0, 0.0, 0.0), 4).unwrap();
        assert_matrix(
            p.matrix(),
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        );
        let q = projector_from_spec(&ProjectorSpec::qubit(1, 0.0, 0.0), 4).unwrap();
        assert_matrix(
            q.matrix(),
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        );
        assert!(matches!(
            projector_from_spec(&ProjectorSpec::qubit(2, 0.0, 0.0), 4),
            Err(QuantumError::BadFactor { factor: 2, dim: 4 })
        ));
        assert!(matches!(
            projector_from_spec(&ProjectorSpec::qubit(0, f64::NAN, 0.0), 2),
            Err(QuantumError::BadAngle { .. })
        ));
    }

    #[test]
    fn subspace_specs() {
        let spec =
            ProjectorSpec::Subspace(vec![vec![c(1.0), c(1.0), c(0.0), c(0.0)], vec![c(1.0), c(0.0), c(0.0), c(0.0)]]);
        let p = projector_from_spec(&spec, 4).unwrap();
        assert_matrix(
            p.matrix(),
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        );
        let dependent = ProjectorSpec::Subspace(vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]]);
        assert_eq!(projector_from_spec(&dependent, 2), Err(QuantumError::DependentBasis(1)));
        let wrong = ProjectorSpec::Subspace(vec![vec![c(1.0), c(0.0)]]);
        assert_eq!(projector_from_spec(&wrong, 4), Err(QuantumError::DimensionMismatch(2, 4)));
    }

    #[test]
    fn constructor_rejects_non_projectors() {
        let not_hermitian = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(0.0)]);
        assert!(matches!(HermitianProjector::new(not_hermitian), Err(QuantumError::NotHermitian(_))));
        let not_idempotent = DMatrix::from_row_slice(2, 2, &[c(2.0), c(0.0), c(0.0), c(0.0)]);
        assert!(matches!(HermitianProjector::new(not_idempotent), Err(QuantumError::NotIdempotent(_))));
        assert!(matches!(HermitianProjector::new(DMatrix::zeros(2, 4)), Err(QuantumError::NotSquare(2, 4))));
        assert!(matches!(ComplexStateVector::new(vec![c(1.0), c(1.0)]), Err(QuantumError::NotUnit(_))));
        assert!(matches!(ComplexStateVector::new(vec![c(1.0); 3]), Err(QuantumError::BadDimension(3))));
    }

    #[test]
    fn born_examples() {
        let id = HermitianProjector::identity(2).unwrap();
        assert!((born(&id, &up()).unwrap() - 1.0).abs() < EPS);
        let equator = projector_from_spec(&ProjectorSpec::qubit(0, FRAC_PI_2, 0.0), 2).unwrap();
        assert!((born(&equator, &up()).unwrap() - 0.5).abs() < EPS);
        let real = RealStateVector::new(vec![0.6, 0.8]).unwrap();
        assert!((born(&diag(&[false, true]), &ComplexStateVector::from_real(&real)).unwrap() - 0.64).abs() < EPS);
        let big = HermitianProjector::identity(4).unwrap();
        assert!(matches!(born(&big, &up()), Err(QuantumError::DimensionMismatch(4, 2))));
    }

    #[test]
    fn clamping() {
        assert_eq!(clamp_unit(-1e-13).unwrap(), 0.0);
        assert_eq!(clamp_unit(1.0 + 1e-13).unwrap(), 1.0);
        assert!(matches!(clamp_unit(-1e-9), Err(QuantumError::OutOfRange(_))));
        assert!(matches!(clamp_unit(1.0 + 1e-9), Err(QuantumError::OutOfRange(_))));
    }

    #[test]
    fn sequential_examples() {
        let equator = projector_from_spec(&ProjectorSpec::qubit(0, FRAC_PI_2, 0.0), 2).unwrap();
        let z = diag(&[true, false]);
        assert!((sequential_conditional(&equator, &equator, &up()).unwrap() - 1.0).abs() < EPS);
        assert!((sequential_conditional(&z, &equator, &up()).unwrap() - 0.5).abs() < EPS);
        let down = diag(&[false, true]);
        assert!(matches!(sequential_conditional(&z, &down, &up()), Err(QuantumError::NullCondition(_))));
    }

    #[test]
    fn asymmetry_and_commutator_exhibit() {
        let p = projector_from_spec(&ProjectorSpec::qubit(0, FRAC_PI_2, 0.0), 2).unwrap();
        let q = diag(&[true, false]);
        assert!((product_asymmetry(&p, &q, &up()).unwrap() + 0.25).abs() < EPS);
        assert!((sequential_joint(&p, &q, &up()).unwrap() - 0.25).abs() < EPS);
        assert!((sequential_joint(&q, &p, &up()).unwrap() - 0.5).abs() < EPS);
        assert!((commutator_norm(&q, &p).unwrap() - 0.5).abs() < EPS);
        assert_eq!(commutator_norm(&q, &diag(&[false, true])).unwrap(), 0.0);
        assert!(commutator_norm(&p, &HermitianProjector::identity(2).unwrap()).unwrap() < EPS);
        // shared eigenvector
        assert_eq!(product_asymmetry(&q, &q, &up()).unwrap(), 0.0);
    }

    #[test]
    fn tensor_products() {
        assert_eq!(up().tensor(&up()), ComplexStateVector::basis(4, 0).unwrap());
        let id = HermitianProjector::identity(2).unwrap();
        assert_eq!(id.tensor(&id), HermitianProjector::identity(4).unwrap());
        let plus = ComplexStateVector::normalized(vec![c(1.0), c(1.0)]).unwrap();
        let minus = ComplexStateVector::normalized(vec![c(1.0), c(-1.0)]).unwrap();
        let prod = plus.tensor(&minus);
        assert!((prod.amplitudes().norm() - 1.0).abs() < EPS);
        let p = projector_from_spec(&ProjectorSpec::qubit(0, 1.0, 0.3), 2).unwrap();
        let pq = p.tensor(&diag(&[true, false]));
        assert!(HermitianProjector::new(pq.matrix().clone()).is_ok());
        assert!((born(&pq, &plus.tensor(&up())).unwrap() - born(&p, &plus).unwrap()).abs() < EPS);
    }

    #[test]
    fn complement_rule() {
        let s = ComplexStateVector::normalized(vec![c(FRAC_1_SQRT_2), Complex64::new(0.3, -0.4)]).unwrap();
        let p = projector_from_spec(&ProjectorSpec::qubit(0, 0.7, 1.9), 2).unwrap();
        let total = born(&p, &s).unwrap() + born(&p.complement(), &s).unwrap();
        assert!((total - 1.0).abs() < EPS);
    }
}
