use cglmp_core::requirements::{self, RequirementReport};
use cglmp_core::{ArithmeticMode, ShiftVector};
use proptest::prelude::*;

#[test]
fn every_matrix_is_singular() {
    for m in requirements::appendix_b_matrices() {
        assert_eq!(m.determinant(), 0, "{}", m.id);
    }
}

fn nonzero_flags(r: &RequirementReport) -> Vec<bool> {
    r.cases
        .iter()
        .flat_map(|c| c.subcases.iter().flat_map(|s| s.sums.iter().map(|e| e.nonzero)))
        .collect()
}

proptest! {
    #[test]
    fn case1_excludes_case2(d in 2usize..=12, raw in prop::array::uniform4(-30i64..30)) {
        for mode in [ArithmeticMode::ModD, ArithmeticMode::PlainInteger] {
            let s = ShiftVector::from_array(raw).with_mode(mode);
            if requirements::check_case1(&s, d) {
                prop_assert!(!requirements::check_case2(&s, d));
            }
        }
    }

    #[test]
    fn modes_agree_for_small_sums(d in 2usize..=12, raw in prop::array::uniform4(-3i64..=3)) {
        let md = RequirementReport::new(&ShiftVector::from_array(raw), d);
        let pi = RequirementReport::new(&ShiftVector::from_array(raw).with_mode(ArithmeticMode::PlainInteger), d);
        let small = md.cases.iter().all(|c| c.subcases.iter().all(|s| s.sums.iter().all(|e| e.value.abs() < d as i64)));
        if small {
            prop_assert_eq!(nonzero_flags(&md), nonzero_flags(&pi));
            prop_assert_eq!(md.passed(), pi.passed());
            prop_assert_eq!(md.bound(), pi.bound());
        }
    }

    #[test]
    fn mod_d_bound_periodic(d in 2usize..=12, raw in prop::array::uniform4(-30i64..30), k in prop::array::uniform4(-4i64..4)) {
        let s = ShiftVector::from_array(raw);
        let t = ShiftVector::from_array([0, 1, 2, 3].map(|i| raw[i] + k[i] * d as i64));
        prop_assert_eq!(requirements::paper_bound(&s, d), requirements::paper_bound(&t, d));
    }

    #[test]
    fn bound_is_one_of_the_case_bounds(d in 2usize..=12, raw in prop::array::uniform4(-30i64..30)) {
        let b = requirements::paper_bound(&ShiftVector::from_array(raw), d);
        prop_assert!((1..=4).contains(&b.bound));
        if b.trivial {
            prop_assert_eq!(b.passed, [false; 4]);
        }
    }
}

#[test]
fn audit_fields_match_components() {
    for d in 2usize..=4 {
        for n in 0..d.pow(4) {
            let raw = [3, 2, 1, 0].map(|p| ((n / d.pow(p)) % d) as i64);
            let s = ShiftVector::from_array(raw);
            let a = requirements::audit_vs_oracle(d, &s).unwrap();
            assert_eq!(a.paper_bound_mod_d, requirements::paper_bound(&s, d));
            assert_eq!(a.oracle_mod_d, cglmp_core::hvt::brute_force_max_delta(d, &s).unwrap());
            assert_eq!(
                a.violation_certified(),
                a.quantum_s > f64::from(a.oracle_mod_d.max_delta) + 1e-9
            );
        }
    }
}
