use cglmp_core::hvt::{self, random};
use cglmp_core::sampler::{self, SampleSpec, Source};
use cglmp_core::{CglmpContext, ShiftVector};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

// degenerate terms have zero variance and must then match exactly
fn close(s_hat: f64, stderr: f64, target: f64) -> bool {
    (s_hat - target).abs() <= 5.0 * stderr + 1e-12
}

fn within(spec: &SampleSpec, target: f64) -> bool {
    let e = sampler::sample_s(spec).unwrap();
    close(e.s_hat, e.stderr, target)
}

#[test]
fn quantum_estimates_converge() {
    let shifts = ShiftVector::new(0, 1, 0, 0);
    let ctx = CglmpContext::new(2).unwrap();
    let target = cglmp_core::quantum::quantum_s(&ctx, &shifts).unwrap();
    let hits = (0..100)
        .filter(|&seed| within(&SampleSpec::new(Source::Quantum(ctx), shifts, 100_000, seed), target))
        .count();
    assert!(hits >= 99, "{hits}/100");
}

#[test]
fn hvt_estimates_converge() {
    let mut rng = SplitMix64::seed_from_u64(99);
    let mut hits = 0;
    for seed in 0..100 {
        let d = 2 + (seed % 3) as usize;
        let model = random::mixture(&mut rng, d);
        let shifts = ShiftVector::from_array([0; 4].map(|_| (rng.next_u64() % d as u64) as i64));
        let spec = SampleSpec::new(Source::Hvt(model), shifts, 100_000, seed);
        let target = spec.analytic_s().unwrap();
        let e = sampler::sample_s(&spec).unwrap();
        let bound = hvt::brute_force_max_delta(d, &shifts).unwrap().max_delta;
        assert!(e.s_hat <= f64::from(bound) + 5.0 * e.stderr);
        if close(e.s_hat, e.stderr, target) {
            hits += 1;
        }
    }
    assert!(hits >= 99, "{hits}/100");
}

#[test]
fn stderr_scales_with_inverse_root_n() {
    let shifts = ShiftVector::new(0, 1, 0, 0);
    let se: Vec<f64> = [1_000u64, 10_000, 100_000]
        .iter()
        .map(|&n| sampler::sample_quantum_s(2, shifts, n, 17).unwrap().stderr)
        .collect();
    for w in se.windows(2) {
        let ratio = w[0] / w[1];
        let expected = 10f64.sqrt();
        assert!(ratio > expected / 2.0 && ratio < expected * 2.0, "{ratio}");
    }
}

#[test]
fn identical_specs_identical_estimates() {
    let shifts = ShiftVector::new(1, -2, 1, -2);
    let a = sampler::sample_quantum_s(10, shifts, 20_000, 7).unwrap();
    let b = sampler::sample_quantum_s(10, shifts, 20_000, 7).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}

#[test]
fn box_source_matches_box_value() {
    let b = hvt::pr_box();
    let s = ShiftVector::ZERO;
    let spec = SampleSpec::new(Source::Box(b.clone()), s, 50_000, 3);
    assert!(within(&spec, b.s_value(&s)));
}
