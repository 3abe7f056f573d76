//! Sufficiency requirements on the outcome shifts for the bounds S ≤ 4, 3,
//! 2 and 1, transcribed row for row from the published sub-case lists, with
//! the singular matrix equations they were derived from and an audit
//! against the exhaustive oracle.
//!
//! Case c (c = 1..4) collects the sub-cases where exactly 5 − c of the
//! conditions C1..C4 hold. Cases 2..4 pass when every sub-case row has at
//! least one nonzero shift sum; Case 1 passes when all four shifts vanish.
//! Arithmetic is exact: in mod-d mode a sum is "nonzero" when its residue is.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::hvt::{self, OracleResult};
use crate::quantum::{self, CglmpContext};
use crate::shift::{ArithmeticMode, ShiftVector};

/// One of the four outcome shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shift {
    D11,
    D12,
    D22,
    D21,
}

impl Shift {
    /// Position in `(Δ11, Δ12, Δ22, Δ21)`.
    pub fn position(self) -> usize {
        match self {
            Shift::D11 => 0,
            Shift::D12 => 1,
            Shift::D22 => 2,
            Shift::D21 => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Shift::D11 => "D11",
            Shift::D12 => "D12",
            Shift::D22 => "D22",
            Shift::D21 => "D21",
        }
    }
}

use Shift::{D11, D12, D21, D22};

/// A sum of shifts, in printed term order.
pub type ShiftSum = &'static [Shift];

fn sum_label(sum: ShiftSum) -> String {
    sum.iter().map(|s| s.label()).collect::<Vec<_>>().join("+")
}

fn coefficients(sum: ShiftSum) -> [i64; 4] {
    let mut c = [0; 4];
    for s in sum {
        c[s.position()] += 1;
    }
    c
}

/// `(case, sub-case letter)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubCaseId {
    pub case: u8,
    pub subcase: char,
}

impl fmt::Display for SubCaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.case, self.subcase)
    }
}

/// One printed requirement row.
#[derive(Debug, Clone, Copy)]
pub struct SubCaseRequirement {
    pub id: SubCaseId,
    pub sums: &'static [ShiftSum],
}

const fn row(case: u8, subcase: char, sums: &'static [ShiftSum]) -> SubCaseRequirement {
    SubCaseRequirement {
        id: SubCaseId { case, subcase },
        sums,
    }
}

/// Case 1: the four shifts, each required to vanish.
pub const CASE1_ROWS: [SubCaseRequirement; 1] = [row(1, 'a', &[&[D11], &[D12], &[D22], &[D21]])];

/// Case 2: the same total-shift requirement for all four sub-cases.
pub const CASE2_ROWS: [SubCaseRequirement; 4] = [
    row(2, 'a', &[&[D12, D11, D21, D22]]),
    row(2, 'b', &[&[D12, D11, D21, D22]]),
    row(2, 'c', &[&[D12, D11, D21, D22]]),
    row(2, 'd', &[&[D12, D11, D21, D22]]),
];

/// Case 3 (two conditions true, two false).
pub const CASE3_ROWS: [SubCaseRequirement; 6] = [
    row(3, 'a', &[&[D22], &[D12, D11, D21]]),
    row(3, 'b', &[&[D22, D12], &[D11, D21]]),
    row(3, 'c', &[&[D12], &[D11, D21, D22]]),
    row(3, 'd', &[&[D22, D12, D11], &[D21]]),
    row(3, 'e', &[&[D12, D11], &[D21, D22]]),
    row(3, 'f', &[&[D11], &[D21, D22, D12]]),
];

/// Case 4 (one condition true, three false).
pub const CASE4_ROWS: [SubCaseRequirement; 4] = [
    row(4, 'a', &[&[D12], &[D22], &[D11, D21]]),
    row(4, 'b', &[&[D11, D12], &[D22], &[D21]]),
    row(4, 'c', &[&[D11], &[D22, D12], &[D21]]),
    row(4, 'd', &[&[D11], &[D12], &[D22, D21]]),
];

/// Requirement rows for a case (1..=4).
pub fn case_rows(case: u8) -> &'static [SubCaseRequirement] {
    match case {
        1 => &CASE1_ROWS,
        2 => &CASE2_ROWS,
        3 => &CASE3_ROWS,
        4 => &CASE4_ROWS,
        _ => &[],
    }
}

/// A shift sum evaluated for concrete shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct SumEvaluation {
    pub label: String,
    /// Plain integer value of the sum.
    pub value: i64,
    /// Canonical residue in `[0, d)`, present in mod-d mode.
    pub residue: Option<i64>,
    pub nonzero: bool,
}

fn evaluate(sum: ShiftSum, shifts: &ShiftVector, d: usize) -> SumEvaluation {
    let arr = shifts.as_array();
    let value: i64 = sum.iter().map(|s| arr[s.position()]).sum();
    let residue = match shifts.mode {
        ArithmeticMode::ModD => Some(value.rem_euclid(d as i64)),
        ArithmeticMode::PlainInteger => None,
    };
    SumEvaluation {
        label: sum_label(sum),
        value,
        residue,
        nonzero: residue.unwrap_or(value) != 0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubCaseReport {
    pub id: SubCaseId,
    pub sums: Vec<SumEvaluation>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub case: u8,
    /// The bound S ≤ `bound` this case establishes when it passes.
    pub bound: u8,
    pub subcases: Vec<SubCaseReport>,
    pub passed: bool,
}

fn check_case(case: u8, shifts: &ShiftVector, d: usize) -> CaseReport {
    let subcases: Vec<SubCaseReport> = case_rows(case)
        .iter()
        .map(|r| {
            let sums: Vec<SumEvaluation> = r.sums.iter().map(|s| evaluate(s, shifts, d)).collect();
            let passed = if case == 1 {
                sums.iter().all(|s| !s.nonzero)
            } else {
                sums.iter().any(|s| s.nonzero)
            };
            SubCaseReport { id: r.id, sums, passed }
        })
        .collect();
    let passed = subcases.iter().all(|s| s.passed);
    CaseReport {
        case,
        bound: 5 - case,
        subcases,
        passed,
    }
}

/// All shifts vanish (mod d in mod-d mode).
pub fn check_case1(shifts: &ShiftVector, d: usize) -> bool {
    check_case(1, shifts, d).passed
}

/// `Δ12 + Δ11 + Δ21 + Δ22 ≠ 0`.
pub fn check_case2(shifts: &ShiftVector, d: usize) -> bool {
    check_case(2, shifts, d).passed
}

pub fn check_case3(shifts: &ShiftVector, d: usize) -> CaseReport {
    check_case(3, shifts, d)
}

pub fn check_case4(shifts: &ShiftVector, d: usize) -> CaseReport {
    check_case(4, shifts, d)
}

/// Every case evaluated under the shift vector's arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub struct RequirementReport {
    pub d: usize,
    pub shifts: ShiftVector,
    pub cases: [CaseReport; 4],
}

impl RequirementReport {
    pub fn new(shifts: &ShiftVector, d: usize) -> Self {
        Self {
            d,
            shifts: *shifts,
            cases: [1, 2, 3, 4].map(|c| check_case(c, shifts, d)),
        }
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.shifts.mode
    }

    /// Pass flags for cases 1..4.
    pub fn passed(&self) -> [bool; 4] {
        [0, 1, 2, 3].map(|i| self.cases[i].passed)
    }

    pub fn bound(&self) -> PaperBound {
        PaperBound::from_passes(self.passed())
    }
}

/// Aggregated bound S ≤ `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaperBound {
    pub bound: u8,
    /// Which of Cases 1..4 passed.
    pub passed: [bool; 4],
    /// No case passed; the bound is the trivial δ ≤ 4 and makes no claim.
    pub trivial: bool,
}

impl PaperBound {
    fn from_passes(passed: [bool; 4]) -> Self {
        if passed[0] {
            return Self {
                bound: 4,
                passed,
                trivial: false,
            };
        }
        match (1..4).rev().find(|&i| passed[i]) {
            Some(i) => Self {
                bound: 4 - i as u8,
                passed,
                trivial: false,
            },
            None => Self {
                bound: 4,
                passed,
                trivial: true,
            },
        }
    }
}

/// Smallest bound among the passing cases; Case 1 yields 4.
pub fn paper_bound(shifts: &ShiftVector, d: usize) -> PaperBound {
    RequirementReport::new(shifts, d).bound()
}

/// Unknown outcome label in a matrix equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    J,
    K,
    L,
    M,
}

/// A printed matrix equation `M v = Δ` with `|M| = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixMatrix {
    pub id: SubCaseId,
    pub unknowns: Vec<Unknown>,
    pub rows: Vec<Vec<i64>>,
    pub rhs: Vec<ShiftSum>,
}

impl AppendixMatrix {
    fn new(case: u8, subcase: char, unknowns: &[Unknown], rows: &[&[i64]], rhs: &[ShiftSum]) -> Self {
        Self {
            id: SubCaseId { case, subcase },
            unknowns: unknowns.to_vec(),
            rows: rows.iter().map(|r| r.to_vec()).collect(),
            rhs: rhs.to_vec(),
        }
    }

    pub fn determinant(&self) -> i64 {
        determinant(&self.rows)
    }

    pub fn rhs_labels(&self) -> Vec<String> {
        self.rhs.iter().map(|s| sum_label(s)).collect()
    }

    /// Shift coefficients of `y · Δ` for a left null vector `y` of `M`,
    /// scaled to coprime integers with a positive leading entry. The system
    /// has a solution over the integers only if this combination vanishes.
    pub fn consistency_condition(&self) -> [i64; 4] {
        let y = left_null_vector(&self.rows);
        let mut c = [0i64; 4];
        for (yi, sum) in y.iter().zip(&self.rhs) {
            for (ci, si) in c.iter_mut().zip(coefficients(sum)) {
                *ci += yi * si;
            }
        }
        normalize(c)
    }
}

fn normalize<const N: usize>(mut c: [i64; N]) -> [i64; N] {
    let g = c.iter().fold(0i64, |g, &x| gcd(g, x.abs()));
    if g > 1 {
        c.iter_mut().for_each(|x| *x /= g);
    }
    if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        c.iter_mut().for_each(|x| *x = -*x);
    }
    c
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn minor(m: &[Vec<i64>], skip_row: usize, skip_col: usize) -> Vec<Vec<i64>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Exact integer determinant by cofactor expansion (small matrices only).
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * determinant(&minor(m, 0, j))
            })
            .sum(),
    }
}

/// A nonzero row of the adjugate; for a rank `n − 1` matrix it spans the
/// left null space.
fn left_null_vector(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    // adj(M)[i][j] = (-1)^(i+j) det(minor(M, j, i)); row i of adj is a left null vector
    for i in 0..n {
        let rowv: Vec<i64> = (0..n)
            .map(|j| {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                sign * determinant(&minor(m, j, i))
            })
            .collect();
        if rowv.iter().any(|&x| x != 0) {
            return rowv;
        }
    }
    alloc::vec![0; n]
}

/// The eleven printed matrix equations: one 4×4 for Case 1, six 2×2 for
/// Case 3 and four 3×3 for Case 4.
pub fn appendix_b_matrices() -> Vec<AppendixMatrix> {
    use Unknown::{J, K, L, M};
    alloc::vec![
        AppendixMatrix::new(
            1,
            'a',
            &[J, K, L, M],
            &[&[1, 0, -1, 0], &[0, -1, 1, 0], &[0, 1, 0, -1], &[-1, 0, 0, 1]],
            &[&[D11], &[D12], &[D22], &[D21]],
        ),
        AppendixMatrix::new(3, 'a', &[K, M], &[&[1, -1], &[-1, 1]], &[&[D22], &[D12, D11, D21]]),
        AppendixMatrix::new(3, 'b', &[L, M], &[&[1, -1], &[-1, 1]], &[&[D22, D12], &[D11, D21]]),
        AppendixMatrix::new(3, 'c', &[K, L], &[&[-1, 1], &[1, -1]], &[&[D12], &[D11, D21, D22]]),
        AppendixMatrix::new(3, 'd', &[J, M], &[&[1, -1], &[-1, 1]], &[&[D22, D12, D11], &[D21]]),
        AppendixMatrix::new(3, 'e', &[J, K], &[&[1, -1], &[-1, 1]], &[&[D12, D11], &[D21, D22]]),
        AppendixMatrix::new(3, 'f', &[L, J], &[&[-1, 1], &[-1, 1]], &[&[D11], &[D21, D22, D12]]),
        AppendixMatrix::new(
            4,
            'a',
            &[K, L, M],
            &[&[-1, 1, 0], &[1, 0, -1], &[0, -1, 1]],
            &[&[D12], &[D22], &[D11, D21]],
        ),
        AppendixMatrix::new(
            4,
            'b',
            &[J, K, M],
            &[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]],
            &[&[D12, D11], &[D22], &[D21]],
        ),
        AppendixMatrix::new(
            4,
            'c',
            &[J, L, M],
            &[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]],
            &[&[D11], &[D22, D12], &[D21]],
        ),
        AppendixMatrix::new(
            4,
            'd',
            &[J, K, L],
            &[&[1, 0, -1], &[0, -1, 1], &[-1, 1, 0]],
            &[&[D11], &[D12], &[D21, D22]],
        ),
    ]
}

/// A requirement row whose sums differ from its matrix right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptionMismatch {
    pub id: SubCaseId,
    pub matrix_rhs: Vec<String>,
    pub requirement: Vec<String>,
}

/// Compares every matrix right-hand side with the transcribed requirement
/// row of the same sub-case, as shift coefficient vectors.
pub fn transcription_mismatches() -> Vec<TranscriptionMismatch> {
    appendix_b_matrices()
        .into_iter()
        .filter_map(|m| {
            let row = case_rows(m.id.case).iter().find(|r| r.id == m.id)?;
            let lhs: Vec<[i64; 4]> = m.rhs.iter().map(|s| coefficients(s)).collect();
            let rhs: Vec<[i64; 4]> = row.sums.iter().map(|s| coefficients(s)).collect();
            (lhs != rhs).then(|| TranscriptionMismatch {
                id: m.id,
                matrix_rhs: m.rhs_labels(),
                requirement: row.sums.iter().map(|s| sum_label(s)).collect(),
            })
        })
        .collect()
}

/// Audit outcome labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Quantum S exceeds the exact hidden-variable maximum.
    ViolationCertified,
    NoViolation,
    /// The aggregated requirement bound is below the exact maximum.
    PaperBoundDisagrees,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::ViolationCertified => "VIOLATION_CERTIFIED",
            Classification::NoViolation => "NO_VIOLATION",
            Classification::PaperBoundDisagrees => "PAPER_BOUND_DISAGREES",
        }
    }
}

/// Margin by which quantum S must exceed the oracle maximum.
pub const VIOLATION_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub d: usize,
    /// Shift values as given (mode ignored).
    pub shifts: [i64; 4],
    pub paper_bound_mod_d: PaperBound,
    pub paper_bound_plain: PaperBound,
    pub oracle_mod_d: OracleResult,
    pub oracle_plain: OracleResult,
    pub quantum_s: f64,
    /// Quantum probability of the four events under plain-integer shifts.
    pub quantum_s_plain: f64,
    /// Bitmask of realizable C1..C4 truth patterns (mod d), see
    /// [`hvt::realized_patterns`].
    pub realized_patterns: u16,
}

impl AuditReport {
    pub fn violation_certified(&self) -> bool {
        self.quantum_s > f64::from(self.oracle_mod_d.max_delta) + VIOLATION_MARGIN
    }

    pub fn violation_certified_plain(&self) -> bool {
        self.quantum_s_plain > f64::from(self.oracle_plain.max_delta) + VIOLATION_MARGIN
    }

    /// Mod-d aggregated bound below the mod-d oracle maximum.
    pub fn paper_bound_disagrees(&self) -> bool {
        self.paper_bound_mod_d.bound < self.oracle_mod_d.max_delta
    }

    pub fn paper_bound_disagrees_plain(&self) -> bool {
        self.paper_bound_plain.bound < self.oracle_plain.max_delta
    }

    /// VIOLATION_CERTIFIED or NO_VIOLATION, followed by PAPER_BOUND_DISAGREES
    /// when flagged.
    pub fn classifications(&self) -> Vec<Classification> {
        let mut out = alloc::vec![if self.violation_certified() {
            Classification::ViolationCertified
        } else {
            Classification::NoViolation
        }];
        if self.paper_bound_disagrees() {
            out.push(Classification::PaperBoundDisagrees);
        }
        out
    }
}

/// Audit with the standard measurement offsets.
pub fn audit_vs_oracle(d: usize, shifts: &ShiftVector) -> Result<AuditReport> {
    audit_with_context(&CglmpContext::new(d)?, shifts)
}

pub fn audit_with_context(ctx: &CglmpContext, shifts: &ShiftVector) -> Result<AuditReport> {
    let d = ctx.d();
    let modd = shifts.with_mode(ArithmeticMode::ModD);
    let plain = shifts.with_mode(ArithmeticMode::PlainInteger);
    Ok(AuditReport {
        d,
        shifts: shifts.as_array(),
        paper_bound_mod_d: paper_bound(&modd, d),
        paper_bound_plain: paper_bound(&plain, d),
        oracle_mod_d: hvt::brute_force_max_delta(d, &modd)?,
        oracle_plain: hvt::brute_force_max_delta(d, &plain)?,
        quantum_s: quantum::quantum_s(ctx, &modd)?,
        quantum_s_plain: quantum::quantum_s_events(ctx, &plain)?,
        realized_patterns: hvt::realized_patterns(d, &modd)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(a: [i64; 4]) -> ShiftVector {
        ShiftVector::from_array(a)
    }

    #[test]
    fn subcase_counts() {
        let counts: Vec<usize> = (1..=4).map(|c| case_rows(c).len()).collect();
        assert_eq!(counts, [1, 4, 6, 4]);
    }

    #[test]
    fn case1_examples() {
        assert!(check_case1(&sv([0, 0, 0, 0]), 10));
        assert!(!check_case1(&sv([1, -2, 1, -2]), 10));
        let m = sv([10, -20, 10, -20]);
        assert!(check_case1(&m, 10));
        assert!(!check_case1(&m.with_mode(ArithmeticMode::PlainInteger), 10));
    }

    #[test]
    fn case2_examples() {
        let r = check_case(2, &sv([1, -2, 1, -2]), 10);
        assert!(r.passed);
        assert_eq!(r.subcases[0].sums[0].value, -2);
        assert_eq!(r.subcases[0].sums[0].residue, Some(8));
        assert!(!check_case2(&sv([0, 0, 0, 0]), 10));
        let r = check_case(2, &sv([0, 1, 0, 0]), 2);
        assert!(r.passed && r.subcases[0].sums[0].value == 1);
    }

    #[test]
    fn case3_examples() {
        let r = check_case3(&sv([1, -2, 1, -2]), 10);
        assert!(r.passed && r.subcases.iter().all(|s| s.passed));
        let r = check_case3(&sv([1, 1, 1, -1]), 10);
        let b = &r.subcases[1];
        assert_eq!(b.sums[0].value, 2);
        assert_eq!(b.sums[1].value, 0);
        assert!(b.passed);
        let r = check_case3(&sv([0, 0, 0, 0]), 10);
        assert!(r.subcases.iter().all(|s| !s.passed) && !r.passed);
    }

    #[test]
    fn row_b_can_fail_with_all_shifts_nonzero() {
        let r = check_case3(&sv([1, 1, -1, -1]).with_mode(ArithmeticMode::PlainInteger), 10);
        let passes: Vec<bool> = r.subcases.iter().map(|s| s.passed).collect();
        assert_eq!(passes, [true, false, true, true, true, true]);
    }

    #[test]
    fn case4_examples() {
        assert!(check_case4(&sv([1, -2, 1, -2]), 10).passed);
        assert!(check_case4(&sv([0, 1, 0, 0]), 2).passed);
        let r = check_case4(&sv([0, 0, 0, 0]), 2);
        assert!(r.subcases.iter().all(|s| !s.passed));
    }

    #[test]
    fn bound_examples() {
        let b = paper_bound(&sv([0, 0, 0, 0]), 10);
        assert_eq!((b.bound, b.trivial), (4, false));
        assert_eq!(paper_bound(&sv([1, -2, 1, -2]), 10).bound, 1);
        assert_eq!(paper_bound(&sv([1, -3, 1, -3]), 10).bound, 1);
        let t = paper_bound(&sv([1, -1, 0, 0]).with_mode(ArithmeticMode::PlainInteger), 10);
        assert!(!t.passed[0] && !t.passed[1]);
    }

    #[test]
    fn trivial_bound_when_nothing_passes() {
        // zero total; row 3c and row 4d both vanish
        let s = sv([0, 0, 1, -1]).with_mode(ArithmeticMode::PlainInteger);
        let b = paper_bound(&s, 10);
        assert_eq!(b.passed, [false, false, false, false]);
        assert_eq!((b.bound, b.trivial), (4, true));
    }

    #[test]
    fn worked_example_sums() {
        let r = RequirementReport::new(&sv([1, -2, 1, -2]).with_mode(ArithmeticMode::PlainInteger), 10);
        let case3 = &r.cases[2];
        let values: Vec<Vec<i64>> = case3
            .subcases
            .iter()
            .map(|s| s.sums.iter().map(|e| e.value).collect())
            .collect();
        assert_eq!(
            values,
            [
                alloc::vec![1, -3],
                alloc::vec![-1, -1],
                alloc::vec![-2, 0],
                alloc::vec![0, -2],
                alloc::vec![-1, -1],
                alloc::vec![1, -3],
            ]
        );
        let case4: Vec<Vec<i64>> = r.cases[3]
            .subcases
            .iter()
            .map(|s| s.sums.iter().map(|e| e.value).collect())
            .collect();
        assert_eq!(
            case4,
            [
                alloc::vec![-2, 1, -1],
                alloc::vec![-1, 1, -2],
                alloc::vec![1, -1, -2],
                alloc::vec![1, -2, -1],
            ]
        );
        assert_eq!(case3.subcases[0].sums[1].label, "D12+D11+D21");
    }

    #[test]
    fn matrices_are_singular() {
        let ms = appendix_b_matrices();
        assert_eq!(ms.len(), 11);
        for m in &ms {
            assert_eq!(m.determinant(), 0, "{}", m.id);
        }
        assert_eq!(ms[0].rows[3], [-1, 0, 0, 1]);
        assert_eq!(ms[1].rows, [[1, -1], [-1, 1]]);
        assert_eq!(ms[8].rows, [[1, -1, 0], [0, 1, -1], [-1, 0, 1]]);
        assert_eq!(determinant(&[alloc::vec![2, 1], alloc::vec![1, 1]]), 1);
    }

    #[test]
    fn matrix_rhs_match_requirement_rows() {
        assert_eq!(transcription_mismatches(), []);
    }

    #[test]
    fn consistency_conditions() {
        let total = [1, 1, 1, 1];
        for m in appendix_b_matrices() {
            let c = m.consistency_condition();
            if m.id == (SubCaseId { case: 3, subcase: 'f' }) {
                // printed second row repeats the first, so the left null
                // vector is (1, -1): D11 - (D21 + D22 + D12)
                assert_eq!(c, [1, -1, -1, -1]);
            } else {
                assert_eq!(c, total, "{}", m.id);
            }
        }
    }

    #[test]
    fn audit_examples() {
        let a = audit_vs_oracle(2, &sv([0, 1, 0, 0])).unwrap();
        assert_eq!(a.oracle_mod_d.max_delta, 3);
        assert_eq!(a.paper_bound_mod_d.bound, 1);
        assert!((a.quantum_s - 3.414_213_562_373_095).abs() < 1e-12);
        assert_eq!(
            a.classifications(),
            [Classification::ViolationCertified, Classification::PaperBoundDisagrees]
        );

        let a = audit_vs_oracle(2, &sv([0, 0, 0, 0])).unwrap();
        assert_eq!(a.oracle_mod_d.max_delta, 4);
        assert_eq!(a.classifications(), [Classification::NoViolation]);

        let a = audit_vs_oracle(10, &sv([1, -2, 1, -2])).unwrap();
        assert_eq!(a.oracle_mod_d.max_delta, 3);
        assert!(!a.violation_certified());
        assert!(a.paper_bound_disagrees());

        let a = audit_vs_oracle(10, &sv([10, -20, 10, -20])).unwrap();
        assert_eq!(a.paper_bound_mod_d.bound, 4);
        assert_eq!(a.paper_bound_plain.bound, 1);
        assert_eq!(a.oracle_mod_d.max_delta, 4);
        assert!((a.quantum_s - 2.528_463_192_837_404).abs() < 1e-12);
        assert_eq!(a.classifications(), [Classification::NoViolation]);
    }
}
