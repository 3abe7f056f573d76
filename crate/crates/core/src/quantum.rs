//! Quantum predictions for the CGLMP quantity on the maximally entangled
//! two-qudit state.
//!
//! The measurement eigenbases are
//!
//! ```text
//! |k⟩_{A,a} = d^{-1/2} Σ_j exp(+i 2π j (k + θ_a) / d) |j⟩_A
//! |l⟩_{B,b} = d^{-1/2} Σ_j exp(+i 2π j (−l + φ_b) / d) |j⟩_B
//! ```
//!
//! with rational offsets `θ = (0, 1/2)` and `φ = (1/4, −1/4)`. Every phase
//! and angle is reduced modulo one turn in exact rational arithmetic before
//! it is converted to radians, so results are exactly periodic in the
//! outcome labels and the shifts.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::hilbert::{self, StateVector, DEFAULT_DIM_CAP};
use crate::setting::{Setting, SettingPair, Side};
use crate::shift::{ArithmeticMode, ShiftVector, TERMS};

/// Exact rational phase offset.
pub type Offset = Ratio<i64>;

/// Smallest `sin²` accepted in a denominator.
pub const DEGENERATE_GUARD: f64 = 1e-15;

/// Largest outcome count accepted by [`CglmpContext`].
pub const MAX_D: usize = 1 << 20;

/// Outcome count plus the four phase offsets defining the measurement bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CglmpContext {
    d: usize,
    theta: [Offset; 2],
    phi: [Offset; 2],
}

impl CglmpContext {
    /// The standard offsets `θ = (0, 1/2)`, `φ = (1/4, −1/4)`.
    pub fn new(d: usize) -> Result<Self> {
        Self::with_offsets(
            d,
            [Ratio::new(0, 1), Ratio::new(1, 2)],
            [Ratio::new(1, 4), Ratio::new(-1, 4)],
        )
    }

    /// A generalized context. Offsets for which some `θ_a + φ_b` is an
    /// integer are accepted, but closed-form evaluation on them may fail
    /// with [`Error::DegenerateAngle`].
    pub fn with_offsets(d: usize, theta: [Offset; 2], phi: [Offset; 2]) -> Result<Self> {
        if !(2..=MAX_D).contains(&d) {
            return Err(Error::InvalidDimension { d, max: MAX_D });
        }
        Ok(Self { d, theta, phi })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn theta(&self) -> [Offset; 2] {
        self.theta
    }

    pub fn phi(&self) -> [Offset; 2] {
        self.phi
    }

    /// True for the standard offsets; anything else is a custom context.
    pub fn is_standard(&self) -> bool {
        let reference = [Ratio::new(0, 1), Ratio::new(1, 2)];
        let reference_phi = [Ratio::new(1, 4), Ratio::new(-1, 4)];
        self.theta == reference && self.phi == reference_phi
    }

    /// `θ_a + φ_b` for a setting pair.
    pub fn offset_sum(&self, pair: SettingPair) -> Offset {
        self.theta[pair.a.offset()] + self.phi[pair.b.offset()]
    }

    /// True when some `θ_a + φ_b` is an integer, so that `n + θ_a + φ_b`
    /// hits a multiple of d for some integer n.
    pub fn is_degenerate(&self) -> bool {
        SettingPair::ALL.iter().any(|&p| self.offset_sum(p).is_integer())
    }

    fn check_outcome(&self, outcome: usize) -> Result<()> {
        if outcome >= self.d {
            return Err(Error::OutcomeOutOfRange { outcome, d: self.d });
        }
        Ok(())
    }
}

/// `(n + q) / d` reduced into `[0, 1)`, as `(numerator, denominator)`.
fn reduced_turn(n: i64, q: Offset, d: usize) -> (i128, i128) {
    let s = i128::from(*q.denom());
    let den = d as i128 * s;
    let num = (i128::from(n) * s + i128::from(*q.numer())).rem_euclid(den);
    (num, den)
}

/// `sin²(π (n + q) / d)` with the argument reduced exactly.
fn sin_sq_turn(n: i64, q: Offset, d: usize) -> f64 {
    let (num, den) = reduced_turn(n, q, d);
    let s = libm::sin(PI * num as f64 / den as f64);
    s * s
}

/// `sin²(π q)` for the numerator of the closed form. It is exactly 1/2 when
/// `q` is an odd multiple of 1/4, which covers the standard offsets.
fn numerator_sin_sq(q: Offset) -> f64 {
    let frac = q - q.floor();
    if *frac.denom() == 4 {
        0.5
    } else {
        let s = libm::sin(PI * *frac.numer() as f64 / *frac.denom() as f64);
        s * s
    }
}

fn guarded(denominator: f64) -> Result<f64> {
    if denominator < DEGENERATE_GUARD {
        return Err(Error::DegenerateAngle { denominator });
    }
    Ok(denominator)
}

/// `(1/√d) Σ_j |j⟩_A ⊗ |j⟩_B`.
pub fn max_entangled_state(d: usize) -> Result<StateVector> {
    let max = libm::sqrt(DEFAULT_DIM_CAP as f64) as usize;
    if d < 2 || d > max {
        return Err(Error::InvalidDimension { d, max });
    }
    let amp = 1.0 / libm::sqrt(d as f64);
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        amps[j * d + j] = Complex64::new(amp, 0.0);
    }
    StateVector::new(amps)
}

/// Eigenvector of `Ω_{A,setting}` (outcome k) or `Ω_{B,setting}` (outcome l).
pub fn eigenvector(ctx: &CglmpContext, side: Side, setting: Setting, outcome: usize) -> Result<StateVector> {
    ctx.check_outcome(outcome)?;
    let d = ctx.d;
    let (sign, offset) = match side {
        Side::A => (1i64, ctx.theta[setting.offset()]),
        Side::B => (-1i64, ctx.phi[setting.offset()]),
    };
    // phase of component j: 2π j (sign·outcome + offset) / d
    let base = sign * outcome as i64;
    let norm = 1.0 / libm::sqrt(d as f64);
    let amps = (0..d as i64)
        .map(|j| {
            let (num, den) = reduced_turn(j * base, offset * j, d);
            let angle = 2.0 * PI * num as f64 / den as f64;
            Complex64::new(norm * libm::cos(angle), norm * libm::sin(angle))
        })
        .collect();
    StateVector::new(amps)
}

/// `|(⟨k|_{A,a} ⊗ ⟨l|_{B,b}) |Ψ⟩|²` by explicit vector algebra.
pub fn joint_prob_direct(ctx: &CglmpContext, pair: SettingPair, k: usize, l: usize) -> Result<f64> {
    ctx.check_outcome(k)?;
    ctx.check_outcome(l)?;
    let psi = max_entangled_state(ctx.d)?;
    let a = eigenvector(ctx, Side::A, pair.a, k)?;
    let b = eigenvector(ctx, Side::B, pair.b, l)?;
    let ab = hilbert::tensor(&a, &b)?;
    Ok(hilbert::inner(&ab, &psi)?.norm_sqr())
}

/// Closed form `sin²(π(θ_a+φ_b)) / (d³ sin²(π(k − l + θ_a + φ_b)/d))`,
/// which is `1 / (2 d³ sin²(…))` for the standard offsets.
pub fn joint_prob_closed(ctx: &CglmpContext, pair: SettingPair, k: usize, l: usize) -> Result<f64> {
    ctx.check_outcome(k)?;
    ctx.check_outcome(l)?;
    let q = ctx.offset_sum(pair);
    let d = ctx.d;
    let den = guarded(sin_sq_turn(k as i64 - l as i64, q, d))?;
    Ok(numerator_sin_sq(q) / ((d * d * d) as f64 * den))
}

/// Joint outcome table `p[k][l] = P(α_k, β_l | Ω_Aa, Ω_Bb)` for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    d: usize,
    setting: SettingPair,
    p: Vec<f64>,
}

impl ProbTable {
    /// Wraps a row-major `d × d` table; entries must lie in `[0, 1]` and sum
    /// to one within 1e-10.
    pub fn new(d: usize, setting: SettingPair, p: Vec<f64>) -> Result<Self> {
        if p.len() != d * d {
            return Err(Error::DimensionMismatch {
                left: p.len(),
                right: d * d,
            });
        }
        crate::hvt::check_probabilities(&p, "probability table")?;
        Ok(Self { d, setting, p })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn setting(&self) -> SettingPair {
        self.setting
    }

    /// Row-major entries, A outcome major.
    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.p[k * self.d + l]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Marginal distribution of the A outcome.
    pub fn row_sums(&self) -> Vec<f64> {
        self.p.chunks(self.d).map(|row| row.iter().sum()).collect()
    }

    /// Marginal distribution of the B outcome.
    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.d).map(|l| (0..self.d).map(|k| self.get(k, l)).sum()).collect()
    }
}

/// Table from the closed form.
pub fn prob_table(ctx: &CglmpContext, pair: SettingPair) -> Result<ProbTable> {
    let d = ctx.d;
    let mut p = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            p.push(joint_prob_closed(ctx, pair, k, l)?);
        }
    }
    ProbTable::new(d, pair, p)
}

/// Table from explicit state-vector overlaps.
pub fn prob_table_direct(ctx: &CglmpContext, pair: SettingPair) -> Result<ProbTable> {
    let d = ctx.d;
    let psi = max_entangled_state(d)?;
    let a: Vec<_> = (0..d)
        .map(|k| eigenvector(ctx, Side::A, pair.a, k))
        .collect::<Result<_>>()?;
    let b: Vec<_> = (0..d)
        .map(|l| eigenvector(ctx, Side::B, pair.b, l))
        .collect::<Result<_>>()?;
    let mut p = Vec::with_capacity(d * d);
    for ak in &a {
        for bl in &b {
            p.push(hilbert::inner(&hilbert::tensor(ak, bl)?, &psi)?.norm_sqr());
        }
    }
    ProbTable::new(d, pair, p)
}

/// The four closed-form terms of S, in shift-vector order.
///
/// Term arguments are `Δ11+θ1+φ1`, `−Δ12+θ2+φ1`, `Δ22+θ2+φ2`, `−Δ21+θ1+φ2`.
/// The quantum events always use mod-d arithmetic; the shift mode is ignored.
pub fn quantum_s_terms(ctx: &CglmpContext, shifts: &ShiftVector) -> Result<[f64; 4]> {
    let d = ctx.d;
    let mut terms = [0.0; 4];
    for (i, term) in TERMS.iter().enumerate() {
        let q = ctx.offset_sum(term.pair);
        let n = match term.orientation {
            crate::shift::Orientation::AIsShiftedB => shifts.shift(i),
            crate::shift::Orientation::BIsShiftedA => -shifts.shift(i),
        };
        // reduce n first so that huge shifts cannot overflow
        let n = n.rem_euclid(d as i64);
        let den = guarded(sin_sq_turn(n, q, d))?;
        terms[i] = numerator_sin_sq(q) / ((d * d) as f64 * den);
    }
    Ok(terms)
}

/// Quantum value of S from the closed form.
///
/// Debug builds also evaluate the table-diagonal sum and assert agreement
/// within 1e-9.
pub fn quantum_s(ctx: &CglmpContext, shifts: &ShiftVector) -> Result<f64> {
    let s: f64 = quantum_s_terms(ctx, shifts)?.iter().sum();
    #[cfg(debug_assertions)]
    if ctx.d <= 64 {
        let diag = quantum_s_diagonal(ctx, shifts)?;
        debug_assert!(
            libm::fabs(s - diag) < 1e-9,
            "closed form {s} disagrees with diagonal sum {diag}"
        );
    }
    Ok(s)
}

/// S by summing closed-form table entries along the mod-d shifted diagonals.
pub fn quantum_s_diagonal(ctx: &CglmpContext, shifts: &ShiftVector) -> Result<f64> {
    quantum_s_events(ctx, &shifts.with_mode(ArithmeticMode::ModD))
}

/// Quantum probability of the four coincidence events under the shift
/// vector's own arithmetic mode. In plain-integer mode this is generally
/// smaller than [`quantum_s`], because wrapped coincidences do not count.
pub fn quantum_s_events(ctx: &CglmpContext, shifts: &ShiftVector) -> Result<f64> {
    let d = ctx.d;
    let mut s = 0.0;
    for (i, term) in TERMS.iter().enumerate() {
        let table = prob_table(ctx, term.pair)?;
        for k in 0..d {
            for l in 0..d {
                if shifts.event(i, k, l, d) {
                    s += table.get(k, l);
                }
            }
        }
    }
    Ok(s)
}

/// S for shifts that are all multiples of d:
/// `(1/2d²)(3/sin²(π/4d) + 1/sin²(3π/4d))` for the standard offsets.
///
/// Non-standard contexts fall back to `quantum_s` at zero shift, which is
/// the same quantity by periodicity.
pub fn quantum_s_multiple_of_d(ctx: &CglmpContext) -> Result<f64> {
    if !ctx.is_standard() {
        return quantum_s(ctx, &ShiftVector::ZERO);
    }
    let d = ctx.d as f64;
    let s1 = libm::sin(PI / (4.0 * d));
    let s3 = libm::sin(3.0 * PI / (4.0 * d));
    Ok((3.0 / (s1 * s1) + 1.0 / (s3 * s3)) / (2.0 * d * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{expectation, inner, pauli, tensor_op};
    use core::f64::consts::FRAC_1_SQRT_2;

    fn ctx(d: usize) -> CglmpContext {
        CglmpContext::new(d).unwrap()
    }

    #[test]
    fn max_entangled_d2() {
        let psi = max_entangled_state(2).unwrap();
        let expected = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        for (a, e) in psi.amps().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
        let zz = tensor_op(&pauli::sigma_z(), &pauli::sigma_z()).unwrap();
        assert!((expectation(&zz, &psi).unwrap() - 1.0).abs() < 1e-12);
        assert!(max_entangled_state(3).unwrap().is_normalized());
    }

    #[test]
    fn max_entangled_range() {
        assert!(matches!(max_entangled_state(1), Err(Error::InvalidDimension { .. })));
        assert!(max_entangled_state(64).is_ok());
        assert!(matches!(max_entangled_state(65), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn eigenvector_examples() {
        let v = eigenvector(&ctx(2), Side::A, Setting::One, 0).unwrap();
        for a in v.amps() {
            assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-15 && a.im.abs() < 1e-15);
        }
        let c3 = ctx(3);
        let k0 = eigenvector(&c3, Side::A, Setting::One, 0).unwrap();
        let k1 = eigenvector(&c3, Side::A, Setting::One, 1).unwrap();
        assert!(inner(&k0, &k1).unwrap().norm() < 1e-12);
        let b = eigenvector(&ctx(2), Side::B, Setting::One, 0).unwrap();
        for a in b.amps() {
            assert!((a.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        // component 1 carries phase exp(iπ/4)
        let z = b.amps()[1] / FRAC_1_SQRT_2;
        assert!((z.arg() - PI / 4.0).abs() < 1e-15);
        assert!(matches!(
            eigenvector(&c3, Side::B, Setting::Two, 3),
            Err(Error::OutcomeOutOfRange { outcome: 3, d: 3 })
        ));
    }

    #[test]
    fn joint_prob_frozen_values() {
        // values from an independent direct complex summation
        let c = ctx(2);
        let p00 = joint_prob_direct(&c, SettingPair::A1B1, 0, 0).unwrap();
        let p01 = joint_prob_direct(&c, SettingPair::A1B1, 0, 1).unwrap();
        assert!((p00 - 0.426_776_695_296_636_9).abs() < 1e-12);
        assert!((p01 - 0.073_223_304_703_363_1).abs() < 1e-12);
        let closed = joint_prob_closed(&c, SettingPair::A1B1, 0, 0).unwrap();
        let s = libm::sin(PI / 8.0);
        assert!((closed - 1.0 / (16.0 * s * s)).abs() < 1e-15);
    }

    #[test]
    fn closed_form_depends_on_difference_only() {
        let c = ctx(7);
        for pair in SettingPair::ALL {
            for k in 0..7 {
                for l in 0..7 {
                    let p = joint_prob_closed(&c, pair, k, l).unwrap();
                    let q = joint_prob_closed(&c, pair, (k + 1) % 7, (l + 1) % 7).unwrap();
                    assert_eq!(p, q);
                }
            }
        }
    }

    #[test]
    fn offset_sums_are_quarters() {
        let c = ctx(10);
        let sums: Vec<Offset> = [
            SettingPair::A1B1,
            SettingPair::A2B1,
            SettingPair::A2B2,
            SettingPair::A1B2,
        ]
        .iter()
        .map(|&p| c.offset_sum(p))
        .collect();
        assert_eq!(
            sums,
            [Ratio::new(1, 4), Ratio::new(3, 4), Ratio::new(1, 4), Ratio::new(-1, 4)]
        );
        assert!(c.is_standard() && !c.is_degenerate());
    }

    #[test]
    fn quantum_s_examples() {
        let s = quantum_s(&ctx(2), &ShiftVector::new(0, 1, 0, 0)).unwrap();
        assert!((s - 3.414_213_562_373_095).abs() < 1e-12);
        let s = quantum_s(&ctx(2), &ShiftVector::ZERO).unwrap();
        assert!((s - 2.707_106_781_186_547_5).abs() < 1e-12);
        let s10 = quantum_s(&ctx(10), &ShiftVector::new(10, -20, 10, -20)).unwrap();
        assert!((s10 - 2.528_463_192_837_404).abs() < 1e-12);
        let m10 = quantum_s_multiple_of_d(&ctx(10)).unwrap();
        assert!((m10 - s10).abs() < 1e-12);
        let m2 = quantum_s_multiple_of_d(&ctx(2)).unwrap();
        assert!((m2 - 2.707_106_781_186_547_5).abs() < 1e-12);
        let plain = quantum_s(&ctx(10), &ShiftVector::new(1, -2, 1, -2)).unwrap();
        assert!((plain - 0.095_246_239_977_796_01).abs() < 1e-12);
    }

    #[test]
    fn quantum_s_periodic_exactly() {
        let c = ctx(5);
        let base = ShiftVector::new(1, 3, -2, 4);
        let s0 = quantum_s(&c, &base).unwrap();
        for i in 0..4 {
            let mut arr = base.as_array();
            arr[i] += 5 * 1_000_003;
            assert_eq!(quantum_s(&c, &ShiftVector::from_array(arr)).unwrap(), s0);
        }
        assert_eq!(quantum_s(&c, &base.reduced(5)).unwrap(), s0);
    }

    #[test]
    fn plain_integer_events_drop_wrapped_coincidences() {
        let c = ctx(3);
        let s = ShiftVector::new(1, 1, 1, 1);
        let modd = quantum_s_events(&c, &s).unwrap();
        let plain = quantum_s_events(&c, &s.with_mode(ArithmeticMode::PlainInteger)).unwrap();
        assert!((modd - quantum_s(&c, &s).unwrap()).abs() < 1e-12);
        assert!(plain < modd);
    }

    #[test]
    fn degenerate_context_is_guarded() {
        let c = CglmpContext::with_offsets(
            3,
            [Ratio::new(0, 1), Ratio::new(1, 2)],
            [Ratio::new(0, 1), Ratio::new(1, 4)],
        )
        .unwrap();
        assert!(!c.is_standard() && c.is_degenerate());
        assert!(matches!(
            joint_prob_closed(&c, SettingPair::A1B1, 0, 0),
            Err(Error::DegenerateAngle { .. })
        ));
        // off-diagonal entries stay well defined (and vanish)
        assert!(joint_prob_closed(&c, SettingPair::A1B1, 0, 1).unwrap().abs() < 1e-15);
        assert!(matches!(
            quantum_s(&c, &ShiftVector::ZERO),
            Err(Error::DegenerateAngle { .. })
        ));
        // the direct route has no singularity
        let p = joint_prob_direct(&c, SettingPair::A1B1, 0, 0).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn generalized_context_matches_direct() {
        let c = CglmpContext::with_offsets(
            4,
            [Ratio::new(1, 3), Ratio::new(1, 5)],
            [Ratio::new(1, 7), Ratio::new(-2, 9)],
        )
        .unwrap();
        for pair in SettingPair::ALL {
            let closed = prob_table(&c, pair).unwrap();
            let direct = prob_table_direct(&c, pair).unwrap();
            for (x, y) in closed.entries().iter().zip(direct.entries()) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn invalid_dimension() {
        assert!(matches!(CglmpContext::new(1), Err(Error::InvalidDimension { .. })));
    }
}
