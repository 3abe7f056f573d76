//! Seeded Monte Carlo estimates of S from simulated trials.
//!
//! Each setting pair gets its own SplitMix64 stream (Steele, Lea and Flood,
//! increment `0x9E3779B97F4A7C15`), seeded with
//! `seed ^ (pair_lex_index + 1).wrapping_mul(0x9E3779B97F4A7C15)`. A uniform
//! draw is `(next_u64 >> 11) · 2⁻⁵³`. Outcomes are drawn by inverse CDF over
//! the lexicographic outcome order, so an estimate depends only on the `SampleSpec`.

use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::hvt::{DeterministicAssignment, HiddenVariableMixture, HvtComponent, OneObservableBox};
use crate::quantum::{self, CglmpContext};
use crate::setting::SettingPair;
use crate::shift::{ShiftVector, TERMS};

/// Golden-ratio increment used to separate per-pair seeds.
pub const PAIR_SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// 97.5% standard normal quantile.
const Z_975: f64 = 1.959_963_984_540_054;

/// What produces the outcomes.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Quantum(CglmpContext),
    Hvt(HiddenVariableMixture),
    Box(OneObservableBox),
}

/// How the 95% interval is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CiMethod {
    /// `s_hat ± 1.96 · stderr`.
    #[default]
    Normal,
    /// Sum of per-term Clopper–Pearson intervals (conservative).
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub source: Source,
    pub shifts: ShiftVector,
    pub trials_per_pair: u64,
    pub seed: u64,
    pub ci: CiMethod,
}

impl SampleSpec {
    pub fn new(source: Source, shifts: ShiftVector, trials_per_pair: u64, seed: u64) -> Self {
        Self {
            source,
            shifts,
            trials_per_pair,
            seed,
            ci: CiMethod::Normal,
        }
    }

    pub fn with_ci(mut self, ci: CiMethod) -> Self {
        self.ci = ci;
        self
    }

    pub fn d(&self) -> usize {
        match &self.source {
            Source::Quantum(ctx) => ctx.d(),
            Source::Hvt(m) => m.d(),
            Source::Box(b) => b.d(),
        }
    }

    /// The exact S the estimate converges to, under the shift mode.
    pub fn analytic_s(&self) -> Result<f64> {
        match &self.source {
            Source::Quantum(ctx) => quantum::quantum_s_events(ctx, &self.shifts),
            Source::Hvt(m) => Ok(crate::hvt::hvt_s(m, &self.shifts)),
            Source::Box(b) => Ok(b.s_value(&self.shifts)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub s_hat: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    /// Trials per setting pair.
    pub trials: u64,
    pub seed: u64,
    /// Event counts per term, in term order (A1B1, A2B1, A2B2, A1B2).
    pub counts: [u64; 4],
    pub term_hats: [f64; 4],
}

/// One simulated trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub pair: SettingPair,
    pub a_outcome: usize,
    pub b_outcome: usize,
    pub event: bool,
}

/// Stream for one setting pair.
pub fn pair_rng(seed: u64, pair: SettingPair) -> SplitMix64 {
    let stream = seed ^ (pair.lex_index() as u64 + 1).wrapping_mul(PAIR_SEED_STRIDE);
    SplitMix64::from_seed(stream.to_le_bytes())
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Cumulative table for inverse-CDF draws.
#[derive(Debug, Clone)]
struct Cdf {
    cum: Vec<f64>,
    last_positive: usize,
}

impl Cdf {
    fn new(p: &[f64]) -> Self {
        let mut acc = 0.0;
        let cum = p
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        let last_positive = p.iter().rposition(|&x| x > 0.0).unwrap_or(0);
        Self { cum, last_positive }
    }

    fn draw<R: RngCore>(&self, rng: &mut R) -> usize {
        let u = uniform(rng);
        let i = self.cum.partition_point(|&c| c <= u);
        i.min(self.last_positive)
    }
}

enum ComponentSampler {
    Fixed(DeterministicAssignment),
    Joint(Cdf),
    Product([Cdf; 4]),
}

enum PairSampler {
    Table(Cdf),
    Mixture { weights: Cdf, parts: Vec<ComponentSampler> },
}

impl PairSampler {
    fn draw<R: RngCore>(&self, rng: &mut R, pair: SettingPair, d: usize) -> (usize, usize) {
        match self {
            PairSampler::Table(cdf) => {
                let i = cdf.draw(rng);
                (i / d, i % d)
            }
            PairSampler::Mixture { weights, parts } => {
                let assign = match &parts[weights.draw(rng)] {
                    ComponentSampler::Fixed(a) => *a,
                    ComponentSampler::Joint(cdf) => DeterministicAssignment::from_index(d, cdf.draw(rng)),
                    ComponentSampler::Product(marg) => {
                        let [j, k, l, m] = [&marg[0], &marg[1], &marg[2], &marg[3]].map(|c| c.draw(rng));
                        DeterministicAssignment { j, k, l, m }
                    }
                };
                assign.outcomes_for(pair)
            }
        }
    }
}

fn mixture_sampler(model: &HiddenVariableMixture) -> PairSampler {
    let weights: Vec<f64> = model.components().iter().map(|(w, _)| *w).collect();
    let parts = model
        .components()
        .iter()
        .map(|(_, c)| match c {
            HvtComponent::Deterministic(a) => ComponentSampler::Fixed(*a),
            HvtComponent::Joint(j) => ComponentSampler::Joint(Cdf::new(j.probabilities())),
            HvtComponent::Product(p) => ComponentSampler::Product(p.marginals().each_ref().map(|m| Cdf::new(m))),
        })
        .collect();
    PairSampler::Mixture {
        weights: Cdf::new(&weights),
        parts,
    }
}

fn pair_sampler(source: &Source, pair: SettingPair) -> Result<PairSampler> {
    Ok(match source {
        Source::Quantum(ctx) => PairSampler::Table(Cdf::new(quantum::prob_table(ctx, pair)?.entries())),
        Source::Box(b) => PairSampler::Table(Cdf::new(b.table(pair))),
        Source::Hvt(m) => mixture_sampler(m),
    })
}

/// Estimate S from `trials_per_pair` trials for each setting pair.
pub fn sample_s(spec: &SampleSpec) -> Result<Estimate> {
    sample_s_with_log(spec, &mut |_| {})
}

/// As [`sample_s`], passing every trial to `log` in pair order
/// (A1B1, A2B1, A2B2, A1B2).
pub fn sample_s_with_log(spec: &SampleSpec, log: &mut dyn FnMut(&TrialRecord)) -> Result<Estimate> {
    if spec.trials_per_pair == 0 {
        return Err(Error::NoTrials);
    }
    let d = spec.d();
    let n = spec.trials_per_pair;
    let mut counts = [0u64; 4];
    for (t, term) in TERMS.iter().enumerate() {
        let sampler = pair_sampler(&spec.source, term.pair)?;
        let mut rng = pair_rng(spec.seed, term.pair);
        for _ in 0..n {
            let (a, b) = sampler.draw(&mut rng, term.pair, d);
            let event = spec.shifts.event(t, a, b, d);
            counts[t] += u64::from(event);
            log(&TrialRecord {
                pair: term.pair,
                a_outcome: a,
                b_outcome: b,
                event,
            });
        }
    }
    let nf = n as f64;
    let term_hats = counts.map(|c| c as f64 / nf);
    let s_hat: f64 = term_hats.iter().sum();
    let stderr = libm::sqrt(term_hats.iter().map(|p| p * (1.0 - p) / nf).sum());
    let ci95 = match spec.ci {
        CiMethod::Normal => (s_hat - Z_975 * stderr, s_hat + Z_975 * stderr),
        CiMethod::Exact => counts.iter().fold((0.0, 0.0), |(lo, hi), &c| {
            let (l, h) = clopper_pearson(c, n);
            (lo + l, hi + h)
        }),
    };
    Ok(Estimate {
        s_hat,
        stderr,
        ci95,
        trials: n,
        seed: spec.seed,
        counts,
        term_hats,
    })
}

/// Quantum source with the standard offsets.
pub fn sample_quantum_s(d: usize, shifts: ShiftVector, trials_per_pair: u64, seed: u64) -> Result<Estimate> {
    let spec = SampleSpec::new(Source::Quantum(CglmpContext::new(d)?), shifts, trials_per_pair, seed);
    sample_s(&spec)
}

pub fn sample_hvt_s(
    model: HiddenVariableMixture,
    shifts: ShiftVector,
    trials_per_pair: u64,
    seed: u64,
) -> Result<Estimate> {
    sample_s(&SampleSpec::new(Source::Hvt(model), shifts, trials_per_pair, seed))
}

fn ln_choose(n: u64, k: u64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// `P(X ≤ k)` for `X ~ Binomial(n, p)`.
fn binomial_cdf(k: u64, n: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return if k >= n { 1.0 } else { 0.0 };
    }
    let (lp, lq) = (libm::log(p), libm::log1p(-p));
    let total: f64 = (0..=k.min(n))
        .map(|i| libm::exp(ln_choose(n, i) + i as f64 * lp + (n - i) as f64 * lq))
        .sum();
    total.min(1.0)
}

/// Root of a decreasing function on `[0, 1]` by bisection.
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided 95% Clopper–Pearson interval for `c` successes in `n` trials.
pub fn clopper_pearson(c: u64, n: u64) -> (f64, f64) {
    let alpha = 0.05;
    let lo = if c == 0 {
        0.0
    } else {
        // P(X ≥ c | p) = alpha/2, increasing in p
        bisect(|p| alpha / 2.0 - (1.0 - binomial_cdf(c - 1, n, p)))
    };
    let hi = if c == n {
        1.0
    } else {
        // P(X ≤ c | p) = alpha/2, decreasing in p
        bisect(|p| binomial_cdf(c, n, p) - alpha / 2.0)
    };
    (lo, hi)
}
