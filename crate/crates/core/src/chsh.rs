//! Two-qubit CHSH: singlet correlations along spin directions and the
//! deterministic ±1 bound.

use core::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::hilbert::{self, pauli, Operator, StateVector, CONSTRUCTION_TOL};

/// A unit direction for a spin measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSetting {
    x: f64,
    y: f64,
    z: f64,
}

impl SpinSetting {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = libm::sqrt(x * x + y * y + z * z);
        if libm::fabs(norm - 1.0) > CONSTRUCTION_TOL {
            return Err(Error::NotUnitVector(norm));
        }
        Ok(Self { x, y, z })
    }

    pub const X: Self = Self { x: 1.0, y: 0.0, z: 0.0 };
    pub const Z: Self = Self { x: 0.0, y: 0.0, z: 1.0 };

    /// `(cx·x̂ + cz·ẑ) / √2` for `cx, cz ∈ {±1}`.
    pub fn diagonal_xz(cx: i8, cz: i8) -> Result<Self> {
        let unit = |c: i8| match c {
            1 => Ok(FRAC_1_SQRT_2),
            -1 => Ok(-FRAC_1_SQRT_2),
            _ => Err(Error::NotPlusMinusOne(c.unsigned_abs().into())),
        };
        Self::new(unit(cx)?, 0.0, unit(cz)?)
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// Two settings per side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshConfig {
    pub a1: SpinSetting,
    pub a2: SpinSetting,
    pub b1: SpinSetting,
    pub b2: SpinSetting,
}

impl ChshConfig {
    /// `a1 = z`, `a2 = x`, `b1 = −(x+z)/√2`, `b2 = (x−z)/√2`, which gives 2√2.
    pub fn standard() -> Self {
        Self {
            a1: SpinSetting::Z,
            a2: SpinSetting::X,
            b1: SpinSetting::diagonal_xz(-1, -1).expect("unit"),
            b2: SpinSetting::diagonal_xz(1, -1).expect("unit"),
        }
    }
}

/// `(|01⟩ − |10⟩)/√2` in the z basis.
pub fn singlet() -> StateVector {
    StateVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).expect("dimension 4")
}

/// `n · σ`, in units of ħ/2.
pub fn pauli_along(n: &SpinSetting) -> Operator {
    pauli::sigma_x()
        .linear_combination(n.x, &pauli::sigma_y(), n.y)
        .and_then(|op| op.linear_combination(1.0, &pauli::sigma_z(), n.z))
        .expect("2x2 operators")
}

/// `⟨(a·σ) ⊗ (b·σ)⟩` in the singlet.
pub fn correlation(a: &SpinSetting, b: &SpinSetting) -> f64 {
    let op = hilbert::tensor_op(&pauli_along(a), &pauli_along(b)).expect("4x4 operator");
    hilbert::expectation(&op, &singlet()).expect("Hermitian operator, normalized state")
}

/// `E(a1,b1) + E(a1,b2) + E(a2,b1) − E(a2,b2)`.
pub fn chsh_s_quantum(cfg: &ChshConfig) -> f64 {
    correlation(&cfg.a1, &cfg.b1) + correlation(&cfg.a1, &cfg.b2) + correlation(&cfg.a2, &cfg.b1)
        - correlation(&cfg.a2, &cfg.b2)
}

/// `α1β1 + α1β2 + α2β1 − α2β2` for ±1 outcomes.
pub fn chsh_assignment_value(a1: i8, a2: i8, b1: i8, b2: i8) -> i32 {
    let (a1, a2, b1, b2) = (i32::from(a1), i32::from(a2), i32::from(b1), i32::from(b2));
    a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2
}

/// All sixteen `(α1, α2, β1, β2)` sign assignments, in binary order with
/// +1 first.
pub fn sign_assignments() -> impl Iterator<Item = [i8; 4]> {
    (0u8..16).map(|n| [3, 2, 1, 0].map(|bit| if n >> bit & 1 == 0 { 1 } else { -1 }))
}

/// Maximum `|S|` over deterministic sign assignments.
pub fn chsh_deterministic_bound() -> i32 {
    sign_assignments()
        .map(|[a1, a2, b1, b2]| chsh_assignment_value(a1, a2, b1, b2).abs())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hvt;
    use core::f64::consts::SQRT_2;

    #[test]
    fn singlet_expectations() {
        let psi = singlet();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
        let zz = hilbert::tensor_op(&pauli::sigma_z(), &pauli::sigma_z()).unwrap();
        let xx = hilbert::tensor_op(&pauli::sigma_x(), &pauli::sigma_x()).unwrap();
        assert!((hilbert::expectation(&zz, &psi).unwrap() + 1.0).abs() < 1e-12);
        assert!((hilbert::expectation(&xx, &psi).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_along_axes() {
        let z = pauli_along(&SpinSetting::Z);
        assert!(z.max_abs_diff(&pauli::sigma_z()).unwrap() == 0.0);
        let x = pauli_along(&SpinSetting::X);
        assert!(x.max_abs_diff(&pauli::sigma_x()).unwrap() == 0.0);
        assert!(x.is_hermitian() && x.trace().norm() == 0.0);
    }

    #[test]
    fn rejects_non_unit() {
        assert!(matches!(SpinSetting::new(1.0, 1.0, 0.0), Err(Error::NotUnitVector(_))));
        assert_eq!(SpinSetting::new(f64::NAN, 0.0, 1.0), Err(Error::NonFinite));
    }

    #[test]
    fn correlation_examples() {
        let z = SpinSetting::Z;
        assert!((correlation(&z, &z) + 1.0).abs() < 1e-12);
        assert!(correlation(&z, &SpinSetting::X).abs() < 1e-12);
        let b1 = SpinSetting::diagonal_xz(-1, -1).unwrap();
        assert!((correlation(&z, &b1) - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn chsh_quantum_values() {
        assert!((chsh_s_quantum(&ChshConfig::standard()) - 2.0 * SQRT_2).abs() < 1e-9);
        let z = SpinSetting::Z;
        let all_z = ChshConfig {
            a1: z,
            a2: z,
            b1: z,
            b2: z,
        };
        assert!((chsh_s_quantum(&all_z) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_bound() {
        assert_eq!(chsh_deterministic_bound(), 2);
        assert_eq!(chsh_assignment_value(1, 1, 1, 1), 2);
        assert_eq!(chsh_assignment_value(1, -1, 1, -1), -2);
        assert_eq!(sign_assignments().count(), 16);
        assert!(sign_assignments().all(|[a, b, c, d]| chsh_assignment_value(a, b, c, d).abs() == 2));
    }

    #[test]
    fn deterministic_boxes_agree_with_integer_values() {
        for [a1, a2, b1, b2] in sign_assignments() {
            let b = hvt::OneObservableBox::from_signs(a1, a2, b1, b2).unwrap();
            let v = hvt::chsh_value_box(&b).unwrap();
            assert_eq!(v, f64::from(chsh_assignment_value(a1, a2, b1, b2)));
        }
    }
}
