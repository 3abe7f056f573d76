//! Dense complex linear algebra for small, finite-dimensional pure states.
//!
//! Composite systems use a row-major flattened layout: for `u` of dimension
//! `m` and `v` of dimension `n`, amplitude `u[p] * v[q]` of `u ⊗ v` lives at
//! index `p * n + q`. Operators are stored row-major and [`tensor_op`] uses
//! the same block layout, so `(A ⊗ B)(u ⊗ v) = (A u) ⊗ (B v)` holds
//! index-for-index.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex amplitude type.
pub type ComplexScalar = Complex64;

/// Tolerance for quantities fixed at construction (norms, Hermitian symmetry).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Tolerance for derived quantities (expectations, probabilities).
pub const DERIVED_TOL: f64 = 1e-10;

/// Default cap on the dimension of tensor-product results.
pub const DEFAULT_DIM_CAP: usize = 4096;

fn all_finite(values: &[Complex64]) -> bool {
    values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// A pure state given by its amplitudes in a fixed orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        Ok(Self { amps })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `e_index` of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::OutcomeOutOfRange { outcome: index, d: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// True when the squared norm is within [`CONSTRUCTION_TOL`] of one.
    pub fn is_normalized(&self) -> bool {
        libm::fabs(self.norm_sqr() - 1.0) <= CONSTRUCTION_TOL
    }

    /// Returns the state rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = libm::sqrt(self.norm_sqr());
        if n == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Self::new(self.amps.iter().map(|z| z / n).collect())
    }

    /// Linear combination `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Self::new(self.amps.iter().zip(&other.amps).map(|(x, y)| a * x + b * y).collect())
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Tensor product with the default dimension cap.
pub fn tensor(u: &StateVector, v: &StateVector) -> Result<StateVector> {
    tensor_with_cap(u, v, DEFAULT_DIM_CAP)
}

pub fn tensor_with_cap(u: &StateVector, v: &StateVector, cap: usize) -> Result<StateVector> {
    let dim = u
        .dim()
        .checked_mul(v.dim())
        .ok_or(Error::DimensionCap { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let mut amps = Vec::with_capacity(dim);
    for p in &u.amps {
        for q in &v.amps {
            amps.push(p * q);
        }
    }
    StateVector::new(amps)
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<Complex64> {
    check_dims(u.dim(), v.dim())?;
    Ok(u.amps.iter().zip(&v.amps).map(|(a, b)| a.conj() * b).sum())
}

/// A square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
    hermitian: bool,
}

impl Operator {
    /// Unflagged operator. `entries` is row-major with `dim * dim` elements.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        check_dims(entries.len(), dim * dim)?;
        if !all_finite(&entries) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            dim,
            entries,
            hermitian: false,
        })
    }

    /// Hermitian-flagged operator; rejects entries that are not Hermitian
    /// within [`CONSTRUCTION_TOL`].
    pub fn hermitian(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        let mut op = Self::new(dim, entries)?;
        let violation = op.hermitian_violation();
        if violation > CONSTRUCTION_TOL {
            return Err(Error::HermitianViolation(violation));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn from_real(dim: usize, entries: &[f64], hermitian: bool) -> Result<Self> {
        let entries = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        if hermitian {
            Self::hermitian(dim, entries)
        } else {
            Self::new(dim, entries)
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self {
            dim,
            entries,
            hermitian: true,
        }
    }

    /// Rank-one projector `|psi⟩⟨psi|`.
    pub fn projector(psi: &StateVector) -> Self {
        let n = psi.dim();
        let mut entries = Vec::with_capacity(n * n);
        for a in psi.amps() {
            for b in psi.amps() {
                entries.push(a * b.conj());
            }
        }
        Self {
            dim: n,
            entries,
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Largest `|a_ij - conj(a_ji)|` over all entries.
    pub fn hermitian_violation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        check_dims(self.dim, psi.dim())?;
        let n = self.dim;
        let amps = (0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(psi.amps())
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect();
        StateVector::new(amps)
    }

    /// Matrix product `self * rhs` (unflagged).
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    entries[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        Self::new(n, entries)
    }

    /// `a * self + b * rhs`; stays Hermitian-flagged when both inputs are
    /// flagged and the coefficients are real.
    pub fn linear_combination(&self, a: f64, rhs: &Self, b: f64) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(x, y)| x * a + y * b)
            .collect();
        let mut op = Self::new(self.dim, entries)?;
        op.hermitian = self.hermitian && rhs.hermitian;
        Ok(op)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }
}

/// Kronecker product with the default dimension cap.
pub fn tensor_op(a: &Operator, b: &Operator) -> Result<Operator> {
    tensor_op_with_cap(a, b, DEFAULT_DIM_CAP)
}

pub fn tensor_op_with_cap(a: &Operator, b: &Operator, cap: usize) -> Result<Operator> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .ok_or(Error::DimensionCap { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let (m, n) = (a.dim, b.dim);
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for p in 0..m {
        for q in 0..n {
            let row = p * n + q;
            for r in 0..m {
                let arp = a.get(p, r);
                for s in 0..n {
                    entries[row * dim + r * n + s] = arp * b.get(q, s);
                }
            }
        }
    }
    let mut op = Operator::new(dim, entries)?;
    op.hermitian = a.hermitian && b.hermitian;
    Ok(op)
}

/// `⟨psi| A |psi⟩` for a Hermitian-flagged operator and a normalized state.
///
/// The imaginary residue must stay below [`DERIVED_TOL`]; it is discarded.
pub fn expectation(op: &Operator, psi: &StateVector) -> Result<f64> {
    if !op.hermitian {
        return Err(Error::NotHermitian);
    }
    check_dims(op.dim, psi.dim())?;
    if !psi.is_normalized() {
        return Err(Error::NotNormalized(psi.norm_sqr()));
    }
    let value = inner(psi, &op.apply(psi)?)?;
    if libm::fabs(value.im) >= DERIVED_TOL {
        return Err(Error::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

/// Pauli matrices in units of ħ/2.
pub mod pauli {
    use super::*;

    pub fn sigma_x() -> Operator {
        Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0], true).expect("sigma_x is Hermitian")
    }

    pub fn sigma_y() -> Operator {
        let z = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        Operator::hermitian(2, vec![z, -i, i, z]).expect("sigma_y is Hermitian")
    }

    pub fn sigma_z() -> Operator {
        Operator::from_real(2, &[1.0, 0.0, 0.0, -1.0], true).expect("sigma_z is Hermitian")
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn e(dim: usize, i: usize) -> StateVector {
        StateVector::basis(dim, i).unwrap()
    }

    fn plus() -> StateVector {
        StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    fn minus() -> StateVector {
        StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap()
    }

    #[test]
    fn tensor_basis_bookkeeping() {
        assert_eq!(tensor(&e(2, 0), &e(2, 1)).unwrap(), e(4, 1));
        assert_eq!(tensor(&e(2, 1), &e(3, 2)).unwrap(), e(6, 5));
    }

    #[test]
    fn tensor_of_plus_with_e0() {
        let t = tensor(&plus(), &e(2, 0)).unwrap();
        let expected = [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0];
        for (a, b) in t.amps().iter().zip(expected) {
            assert!((a.re - b).abs() < 1e-15 && a.im == 0.0);
        }
        assert!(t.is_normalized());
    }

    #[test]
    fn tensor_respects_cap() {
        let u = StateVector::basis(100, 0).unwrap();
        let v = StateVector::basis(50, 0).unwrap();
        assert_eq!(
            tensor(&u, &v),
            Err(Error::DimensionCap {
                dim: 5000,
                cap: DEFAULT_DIM_CAP
            })
        );
        assert!(tensor_with_cap(&u, &v, 5000).is_ok());
    }

    #[test]
    fn inner_products() {
        assert_eq!(inner(&e(2, 0), &e(2, 0)).unwrap(), Complex64::new(1.0, 0.0));
        assert!(inner(&plus(), &minus()).unwrap().norm() < 1e-15);
        assert!(matches!(
            inner(&e(2, 0), &e(3, 0)),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let i = Complex64::new(0.0, 1.0);
        let u = StateVector::new(vec![i, Complex64::new(0.0, 0.0)]).unwrap();
        // ⟨i e0 | e0⟩ = -i
        assert_eq!(inner(&u, &e(2, 0)).unwrap(), -i);
    }

    #[test]
    fn kronecker_identities() {
        let i4 = tensor_op(&Operator::identity(2), &Operator::identity(2)).unwrap();
        assert_eq!(i4, Operator::identity(4));
        let zi = tensor_op(&sigma_z(), &Operator::identity(2)).unwrap();
        let diag = Operator::from_real(
            4,
            &[
                1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, -1.0,
            ],
            true,
        )
        .unwrap();
        assert_eq!(zi.max_abs_diff(&diag).unwrap(), 0.0);
    }

    #[test]
    fn zz_eigencheck_on_e0_e1() {
        let zz = tensor_op(&sigma_z(), &sigma_z()).unwrap();
        let psi = tensor(&e(2, 0), &e(2, 1)).unwrap();
        let out = zz.apply(&psi).unwrap();
        let expected = psi.combine(Complex64::new(-1.0, 0.0), &psi, Complex64::new(0.0, 0.0));
        assert_eq!(out, expected.unwrap());
    }

    #[test]
    fn kronecker_matches_state_tensor_layout() {
        let a = sigma_x();
        let b = sigma_y();
        let u = plus();
        let v = StateVector::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let lhs = tensor_op(&a, &b).unwrap().apply(&tensor(&u, &v).unwrap()).unwrap();
        let rhs = tensor(&a.apply(&u).unwrap(), &b.apply(&v).unwrap()).unwrap();
        for (x, y) in lhs.amps().iter().zip(rhs.amps()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn simple_expectations() {
        assert_eq!(expectation(&sigma_z(), &e(2, 0)).unwrap(), 1.0);
        assert_eq!(expectation(&sigma_x(), &e(2, 0)).unwrap(), 0.0);
    }

    #[test]
    fn expectation_error_paths() {
        let unflagged = Operator::from_real(2, &[1.0, 0.0, 0.0, 1.0], false).unwrap();
        assert_eq!(expectation(&unflagged, &e(2, 0)), Err(Error::NotHermitian));
        assert!(matches!(
            expectation(&sigma_z(), &e(3, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
        let unnormalized = StateVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            expectation(&sigma_z(), &unnormalized),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn hermitian_constructor_rejects_asymmetric() {
        assert!(matches!(
            Operator::from_real(2, &[0.0, 1.0, 0.0, 0.0], true),
            Err(Error::HermitianViolation(_))
        ));
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(StateVector::from_real(&[f64::NAN]), Err(Error::NonFinite));
    }

    #[test]
    fn projector_is_idempotent_and_hermitian() {
        let psi = StateVector::new(vec![
            Complex64::new(0.5, 0.1),
            Complex64::new(-0.3, 0.6),
            Complex64::new(0.2, -0.4),
        ])
        .unwrap()
        .normalized()
        .unwrap();
        let p = Operator::projector(&psi);
        assert!(p.hermitian_violation() < CONSTRUCTION_TOL);
        assert!(p.matmul(&p).unwrap().max_abs_diff(&p).unwrap() < CONSTRUCTION_TOL);
    }
}
