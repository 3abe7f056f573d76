//! Hidden-variable behaviours and the exact bound oracle.
//!
//! A deterministic assignment `(j, k, l, m)` fixes the outcomes of
//! `Ω_A1, Ω_A2, Ω_B1, Ω_B2`. For a mixture over hidden variables, S is the
//! average number of satisfied coincidence conditions, so its maximum over
//! every model class here (joint distributions, product models, mixtures)
//! is attained at a deterministic assignment. [`brute_force_max_delta`]
//! finds that maximum by enumeration.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::setting::SettingPair;
use crate::shift::{ShiftVector, TERMS};

/// Tolerance for probability normalization.
pub const PROB_TOL: f64 = 1e-10;

/// Largest d the exhaustive oracle will enumerate.
pub const ORACLE_MAX_D: usize = 40;

/// Checks entries are finite, in `[0, 1]` (within tolerance) and sum to one.
pub fn check_probabilities(p: &[f64], what: &str) -> Result<()> {
    if let Some(x) = p
        .iter()
        .find(|x| !x.is_finite() || **x < -PROB_TOL || **x > 1.0 + PROB_TOL)
    {
        return Err(Error::InvalidDistribution(format!("{what}: entry {x} outside [0, 1]")));
    }
    let total: f64 = p.iter().sum();
    if libm::fabs(total - 1.0) > PROB_TOL {
        return Err(Error::InvalidDistribution(format!("{what}: entries sum to {total}")));
    }
    Ok(())
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension { d, max: usize::MAX });
    }
    Ok(())
}

/// Definite outcomes `(j, k, l, m)` for `(Ω_A1, Ω_A2, Ω_B1, Ω_B2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicAssignment {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub m: usize,
}

impl DeterministicAssignment {
    pub fn new(d: usize, j: usize, k: usize, l: usize, m: usize) -> Result<Self> {
        for outcome in [j, k, l, m] {
            if outcome >= d {
                return Err(Error::OutcomeOutOfRange { outcome, d });
            }
        }
        Ok(Self { j, k, l, m })
    }

    /// Assignment at lexicographic position `index` among all `d⁴`.
    pub fn from_index(d: usize, index: usize) -> Self {
        Self {
            j: index / (d * d * d),
            k: (index / (d * d)) % d,
            l: (index / d) % d,
            m: index % d,
        }
    }

    pub fn index(&self, d: usize) -> usize {
        ((self.j * d + self.k) * d + self.l) * d + self.m
    }

    /// `(A outcome, B outcome)` recorded for a setting pair.
    pub fn outcomes_for(&self, pair: SettingPair) -> (usize, usize) {
        let a = [self.j, self.k][pair.a.offset()];
        let b = [self.l, self.m][pair.b.offset()];
        (a, b)
    }

    /// Which of C1..C4 hold.
    pub fn conditions(&self, shifts: &ShiftVector, d: usize) -> [bool; 4] {
        let mut out = [false; 4];
        for (i, term) in TERMS.iter().enumerate() {
            let (a, b) = self.outcomes_for(term.pair);
            out[i] = shifts.event(i, a, b, d);
        }
        out
    }
}

/// Number of the four conditions C1..C4 satisfied by `assign`.
pub fn delta_count(assign: &DeterministicAssignment, shifts: &ShiftVector, d: usize) -> u8 {
    assign.conditions(shifts, d).iter().filter(|&&c| c).count() as u8
}

/// Full distribution over `(j, k, l, m)`, flattened lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution4 {
    d: usize,
    p: Vec<f64>,
}

impl JointDistribution4 {
    pub fn new(d: usize, p: Vec<f64>) -> Result<Self> {
        check_d(d)?;
        if p.len() != d * d * d * d {
            return Err(Error::DimensionMismatch {
                left: p.len(),
                right: d * d * d * d,
            });
        }
        check_probabilities(&p, "joint4")?;
        Ok(Self { d, p })
    }

    pub fn uniform(d: usize) -> Result<Self> {
        let n = d * d * d * d;
        Self::new(d, vec![1.0 / n as f64; n])
    }

    pub fn point(d: usize, assign: DeterministicAssignment) -> Result<Self> {
        let mut p = vec![0.0; d * d * d * d];
        p[assign.index(d)] = 1.0;
        Self::new(d, p)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, assign: &DeterministicAssignment) -> f64 {
        self.p[assign.index(self.d)]
    }
}

/// Factorized (local) model: independent outcome distributions for the
/// four observables.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductModelLHVT {
    d: usize,
    /// Order: A1, A2, B1, B2.
    marginals: [Vec<f64>; 4],
}

impl ProductModelLHVT {
    pub fn new(d: usize, a1: Vec<f64>, a2: Vec<f64>, b1: Vec<f64>, b2: Vec<f64>) -> Result<Self> {
        check_d(d)?;
        for (name, v) in [("pA1", &a1), ("pA2", &a2), ("pB1", &b1), ("pB2", &b2)] {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    left: v.len(),
                    right: d,
                });
            }
            check_probabilities(v, name)?;
        }
        Ok(Self {
            d,
            marginals: [a1, a2, b1, b2],
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `[pA1, pA2, pB1, pB2]`.
    pub fn marginals(&self) -> &[Vec<f64>; 4] {
        &self.marginals
    }

    /// Probability of a full assignment: the fourfold product.
    pub fn prob(&self, a: &DeterministicAssignment) -> f64 {
        let [a1, a2, b1, b2] = &self.marginals;
        a1[a.j] * a2[a.k] * b1[a.l] * b2[a.m]
    }

    /// The same behaviour written as a joint distribution over `(j, k, l, m)`.
    pub fn to_joint(&self) -> JointDistribution4 {
        let d = self.d;
        let p = (0..d * d * d * d)
            .map(|i| self.prob(&DeterministicAssignment::from_index(d, i)))
            .collect();
        JointDistribution4 { d, p }
    }
}

/// One hidden-variable value's behaviour.
#[derive(Debug, Clone, PartialEq)]
pub enum HvtComponent {
    Deterministic(DeterministicAssignment),
    Joint(JointDistribution4),
    Product(ProductModelLHVT),
}

/// Weighted mixture over hidden variables, `Σ_λ P(λ) · component_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenVariableMixture {
    d: usize,
    components: Vec<(f64, HvtComponent)>,
}

impl HiddenVariableMixture {
    pub fn new(d: usize, components: Vec<(f64, HvtComponent)>) -> Result<Self> {
        check_d(d)?;
        if components.is_empty() {
            return Err(Error::InvalidDistribution("mixture has no components".into()));
        }
        let weights: Vec<f64> = components.iter().map(|(w, _)| *w).collect();
        check_probabilities(&weights, "mixture weights")?;
        for (_, c) in &components {
            let cd = match c {
                HvtComponent::Deterministic(a) => {
                    DeterministicAssignment::new(d, a.j, a.k, a.l, a.m)?;
                    d
                }
                HvtComponent::Joint(j) => j.d,
                HvtComponent::Product(p) => p.d,
            };
            if cd != d {
                return Err(Error::DimensionMismatch { left: cd, right: d });
            }
        }
        Ok(Self { d, components })
    }

    pub fn single(d: usize, component: HvtComponent) -> Result<Self> {
        Self::new(d, vec![(1.0, component)])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn components(&self) -> &[(f64, HvtComponent)] {
        &self.components
    }
}

fn component_s(c: &HvtComponent, shifts: &ShiftVector, d: usize) -> f64 {
    match c {
        HvtComponent::Deterministic(a) => f64::from(delta_count(a, shifts, d)),
        HvtComponent::Joint(joint) => (0..d * d * d * d)
            .map(|i| {
                let a = DeterministicAssignment::from_index(d, i);
                joint.p[i] * f64::from(delta_count(&a, shifts, d))
            })
            .sum(),
        HvtComponent::Product(prod) => (0..d * d * d * d)
            .map(|i| {
                let a = DeterministicAssignment::from_index(d, i);
                prod.prob(&a) * f64::from(delta_count(&a, shifts, d))
            })
            .sum(),
    }
}

/// `Σ_λ P(λ) Σ_{jklm} P(jklm | λ) · δ(j, k, l, m)`.
pub fn hvt_s(model: &HiddenVariableMixture, shifts: &ShiftVector) -> f64 {
    model
        .components
        .iter()
        .map(|(w, c)| w * component_s(c, shifts, model.d))
        .sum()
}

/// Row-major `d × d` table (A outcome major) for one setting pair.
pub type PairTable = Vec<f64>;

fn component_marginal(c: &HvtComponent, pair: SettingPair, d: usize, out: &mut [f64], w: f64) {
    match c {
        HvtComponent::Deterministic(a) => {
            let (x, y) = a.outcomes_for(pair);
            out[x * d + y] += w;
        }
        HvtComponent::Joint(joint) => {
            for (i, p) in joint.p.iter().enumerate() {
                let (x, y) = DeterministicAssignment::from_index(d, i).outcomes_for(pair);
                out[x * d + y] += w * p;
            }
        }
        HvtComponent::Product(prod) => {
            let pa = &prod.marginals[pair.a.offset()];
            let pb = &prod.marginals[2 + pair.b.offset()];
            for x in 0..d {
                for y in 0..d {
                    out[x * d + y] += w * pa[x] * pb[y];
                }
            }
        }
    }
}

/// Marginal table for a setting pair: the joint summed over the two
/// unrecorded outcomes, averaged over hidden variables.
pub fn marginal_pair(model: &HiddenVariableMixture, pair: SettingPair) -> PairTable {
    let d = model.d;
    let mut out = vec![0.0; d * d];
    for (w, c) in &model.components {
        component_marginal(c, pair, d, &mut out, *w);
    }
    out
}

/// Result of the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleResult {
    pub max_delta: u8,
    pub witness: DeterministicAssignment,
}

impl OracleResult {
    /// Associative, commutative reduction: larger δ wins, ties go to the
    /// lexicographically smaller witness.
    pub fn merge(self, other: Self) -> Self {
        match self.max_delta.cmp(&other.max_delta) {
            core::cmp::Ordering::Greater => self,
            core::cmp::Ordering::Less => other,
            core::cmp::Ordering::Equal => {
                if self.witness <= other.witness {
                    self
                } else {
                    other
                }
            }
        }
    }
}

fn check_oracle_d(d: usize) -> Result<()> {
    check_d(d)?;
    if d > ORACLE_MAX_D {
        return Err(Error::OracleCap { d, cap: ORACLE_MAX_D });
    }
    Ok(())
}

/// Exhaustive search over the lexicographic index range `range` of `[0, d⁴)`.
/// Returns `None` for an empty range.
pub fn max_delta_in_range(d: usize, shifts: &ShiftVector, range: Range<usize>) -> Result<Option<OracleResult>> {
    check_oracle_d(d)?;
    let end = range.end.min(d * d * d * d);
    let mut best: Option<OracleResult> = None;
    for i in range.start..end {
        let witness = DeterministicAssignment::from_index(d, i);
        let delta = delta_count(&witness, shifts, d);
        if best.is_none_or(|b| delta > b.max_delta) {
            best = Some(OracleResult {
                max_delta: delta,
                witness,
            });
            if delta == 4 {
                break;
            }
        }
    }
    Ok(best)
}

/// Maximum of δ over all `d⁴` deterministic assignments, with the
/// lexicographically smallest witness.
pub fn brute_force_max_delta(d: usize, shifts: &ShiftVector) -> Result<OracleResult> {
    Ok(max_delta_in_range(d, shifts, 0..d * d * d * d)?.expect("d >= 2 gives a non-empty range"))
}

/// Best δ among `samples` uniformly drawn assignments; a lower bound on the
/// maximum, usable past [`ORACLE_MAX_D`].
pub fn random_search_max_delta<R: rand_core::RngCore>(
    rng: &mut R,
    d: usize,
    shifts: &ShiftVector,
    samples: u64,
) -> Result<OracleResult> {
    check_d(d)?;
    let mut draw = || (rng.next_u64() % d as u64) as usize;
    let mut best: Option<OracleResult> = None;
    for _ in 0..samples.max(1) {
        let witness = DeterministicAssignment {
            j: draw(),
            k: draw(),
            l: draw(),
            m: draw(),
        };
        let found = OracleResult {
            max_delta: delta_count(&witness, shifts, d),
            witness,
        };
        best = Some(best.map_or(found, |b| b.merge(found)));
    }
    Ok(best.expect("at least one sample"))
}

/// Bitmask of realizable truth patterns of (C1..C4): bit `p` is set when
/// some assignment satisfies exactly the conditions whose bits are set in
/// `p` (bit 0 = C1, ..., bit 3 = C4).
pub fn realized_patterns(d: usize, shifts: &ShiftVector) -> Result<u16> {
    check_oracle_d(d)?;
    let mut mask = 0u16;
    for i in 0..d * d * d * d {
        let c = DeterministicAssignment::from_index(d, i).conditions(shifts, d);
        let p = c
            .iter()
            .enumerate()
            .fold(0usize, |acc, (bit, &on)| acc | (usize::from(on) << bit));
        mask |= 1 << p;
    }
    Ok(mask)
}

/// A behaviour given only by its four pair tables `P(α, β | Ω_Aa, Ω_Bb)`.
///
/// For CHSH use `d = 2` and outcome index 0 means +1, index 1 means −1.
#[derive(Debug, Clone, PartialEq)]
pub struct OneObservableBox {
    d: usize,
    /// Indexed by [`SettingPair::lex_index`].
    tables: [PairTable; 4],
}

impl OneObservableBox {
    pub fn new(d: usize, tables: [PairTable; 4]) -> Result<Self> {
        check_d(d)?;
        for (pair, t) in SettingPair::ALL.iter().zip(&tables) {
            if t.len() != d * d {
                return Err(Error::DimensionMismatch {
                    left: t.len(),
                    right: d * d,
                });
            }
            check_probabilities(t, &format!("box table {pair}"))?;
        }
        Ok(Self { d, tables })
    }

    /// The box induced by a hidden-variable model's pair marginals.
    pub fn from_model(model: &HiddenVariableMixture) -> Self {
        Self {
            d: model.d,
            tables: SettingPair::ALL.map(|p| marginal_pair(model, p)),
        }
    }

    /// Local deterministic ±1 box with outcomes `α1, α2, β1, β2`.
    pub fn from_signs(a1: i8, a2: i8, b1: i8, b2: i8) -> Result<Self> {
        let idx = |s: i8| match s {
            1 => Ok(0usize),
            -1 => Ok(1usize),
            _ => Err(Error::NotPlusMinusOne(2)),
        };
        let assign = DeterministicAssignment::new(2, idx(a1)?, idx(a2)?, idx(b1)?, idx(b2)?)?;
        let model = HiddenVariableMixture::single(2, HvtComponent::Deterministic(assign))?;
        Ok(Self::from_model(&model))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn table(&self, pair: SettingPair) -> &[f64] {
        &self.tables[pair.lex_index()]
    }

    /// Sum of the four coincidence-event probabilities.
    pub fn s_value(&self, shifts: &ShiftVector) -> f64 {
        let d = self.d;
        TERMS
            .iter()
            .enumerate()
            .map(|(i, term)| {
                let t = self.table(term.pair);
                let mut p = 0.0;
                for x in 0..d {
                    for y in 0..d {
                        if shifts.event(i, x, y, d) {
                            p += t[x * d + y];
                        }
                    }
                }
                p
            })
            .sum()
    }

    /// `Σ_α P(α, β)` for each β, per pair: B-side marginal.
    pub fn b_marginal(&self, pair: SettingPair) -> Vec<f64> {
        let d = self.d;
        let t = self.table(pair);
        (0..d).map(|y| (0..d).map(|x| t[x * d + y]).sum()).collect()
    }

    /// A-side marginal per pair.
    pub fn a_marginal(&self, pair: SettingPair) -> Vec<f64> {
        self.table(pair).chunks(self.d).map(|r| r.iter().sum()).collect()
    }

    /// Largest difference between a party's marginal under the two settings
    /// of the other party.
    pub fn signaling_gap(&self) -> f64 {
        use crate::setting::Setting::{One, Two};
        let mut gap = 0.0f64;
        for s in [One, Two] {
            let pairs_a = (SettingPair::of(s, One), SettingPair::of(s, Two));
            for (x, y) in self.a_marginal(pairs_a.0).iter().zip(self.a_marginal(pairs_a.1)) {
                gap = gap.max(libm::fabs(x - y));
            }
            let pairs_b = (SettingPair::of(One, s), SettingPair::of(Two, s));
            for (x, y) in self.b_marginal(pairs_b.0).iter().zip(self.b_marginal(pairs_b.1)) {
                gap = gap.max(libm::fabs(x - y));
            }
        }
        gap
    }
}

/// The no-signaling box that is perfectly correlated for (A1,B1), (A1,B2),
/// (A2,B1) and anticorrelated for (A2,B2).
pub fn pr_box() -> OneObservableBox {
    let corr = vec![0.5, 0.0, 0.0, 0.5];
    let anti = vec![0.0, 0.5, 0.5, 0.0];
    OneObservableBox {
        d: 2,
        tables: [corr.clone(), corr.clone(), corr, anti],
    }
}

/// `E11 + E12 + E21 − E22` with `E_ab = Σ αβ P(α, β | a, b)`.
pub fn chsh_value_box(b: &OneObservableBox) -> Result<f64> {
    if b.d != 2 {
        return Err(Error::NotPlusMinusOne(b.d));
    }
    let sign = [1.0, -1.0];
    let corr = |pair: SettingPair| {
        let t = b.table(pair);
        let mut e = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                e += sign[x] * sign[y] * t[x * 2 + y];
            }
        }
        e
    };
    Ok(corr(SettingPair::A1B1) + corr(SettingPair::A1B2) + corr(SettingPair::A2B1) - corr(SettingPair::A2B2))
}

/// Random models for property tests and demonstrations.
pub mod random {
    use super::*;
    use rand_core::RngCore;

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Flat sample from the probability simplex of dimension `n`
    /// (normalized exponential spacings).
    pub fn simplex<R: RngCore>(rng: &mut R, n: usize) -> Vec<f64> {
        let mut v: Vec<f64> = (0..n).map(|_| -libm::log(1.0 - unit_f64(rng))).collect();
        let total: f64 = v.iter().sum();
        if total == 0.0 {
            v.iter_mut().for_each(|x| *x = 1.0 / n as f64);
        } else {
            v.iter_mut().for_each(|x| *x /= total);
        }
        v
    }

    pub fn deterministic<R: RngCore>(rng: &mut R, d: usize) -> DeterministicAssignment {
        let i = (rng.next_u64() % (d * d * d * d) as u64) as usize;
        DeterministicAssignment::from_index(d, i)
    }

    pub fn joint<R: RngCore>(rng: &mut R, d: usize) -> JointDistribution4 {
        JointDistribution4 {
            d,
            p: simplex(rng, d * d * d * d),
        }
    }

    pub fn product<R: RngCore>(rng: &mut R, d: usize) -> ProductModelLHVT {
        ProductModelLHVT {
            d,
            marginals: [simplex(rng, d), simplex(rng, d), simplex(rng, d), simplex(rng, d)],
        }
    }

    /// Mixture of 1..=4 components of randomly chosen kinds.
    pub fn mixture<R: RngCore>(rng: &mut R, d: usize) -> HiddenVariableMixture {
        let n = 1 + (rng.next_u64() % 4) as usize;
        let weights = simplex(rng, n);
        let components = weights
            .into_iter()
            .map(|w| {
                let c = match rng.next_u64() % 3 {
                    0 => HvtComponent::Deterministic(deterministic(rng, d)),
                    1 => HvtComponent::Joint(joint(rng, d)),
                    _ => HvtComponent::Product(product(rng, d)),
                };
                (w, c)
            })
            .collect();
        HiddenVariableMixture { d, components }
    }
}

/// Best product model found by coordinate ascent from random starts.
///
/// With three marginals fixed, S is linear in the fourth, so each step moves
/// that marginal to a point mass on its best outcome. The returned value
/// is a lower bound on the maximum over product models.
pub fn product_model_hill_climb<R: rand_core::RngCore>(
    rng: &mut R,
    d: usize,
    shifts: &ShiftVector,
    restarts: usize,
) -> Result<f64> {
    check_d(d)?;
    let mut best = f64::NEG_INFINITY;
    for _ in 0..restarts.max(1) {
        let mut model = random::product(rng, d);
        let mut current = hvt_s(
            &HiddenVariableMixture::single(d, HvtComponent::Product(model.clone()))?,
            shifts,
        );
        loop {
            for slot in 0..4 {
                let mut scores = vec![0.0; d];
                for (outcome, score) in scores.iter_mut().enumerate() {
                    let mut trial = model.clone();
                    trial.marginals[slot] = vec![0.0; d];
                    trial.marginals[slot][outcome] = 1.0;
                    *score = component_s(&HvtComponent::Product(trial), shifts, d);
                }
                let (arg, _) =
                    scores.iter().enumerate().fold(
                        (0, f64::NEG_INFINITY),
                        |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc },
                    );
                model.marginals[slot] = vec![0.0; d];
                model.marginals[slot][arg] = 1.0;
            }
            let next = component_s(&HvtComponent::Product(model.clone()), shifts, d);
            if next <= current + 1e-12 {
                current = current.max(next);
                break;
            }
            current = next;
        }
        best = best.max(current);
    }
    Ok(best)
}
