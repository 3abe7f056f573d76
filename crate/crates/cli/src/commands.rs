use std::fs::File;
use std::io::{BufWriter, Write};

use cglmp_core::chsh::{self, ChshConfig};
use cglmp_core::hvt::{self, OracleResult, ORACLE_MAX_D};
use cglmp_core::quantum::{self, CglmpContext};
use cglmp_core::requirements::{self, AuditReport, PaperBound, RequirementReport, Shift};
use cglmp_core::sampler::{self, CiMethod, SampleSpec, Source, TrialRecord};
use cglmp_core::shift::TERMS;
use cglmp_core::{ArithmeticMode, Error, ShiftVector};
use rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    AuditArgs, BoundArgs, CiArg, FormatOnly, HvtSArgs, ProbTableArgs, QuantumSArgs, SampleArgs, ScanArgs,
};
use crate::model::{self, Model};
use crate::output::{format_f64, OutputDocument, Report, Table};
use crate::CliError;

/// Largest number of rows a single scan may produce.
pub const SCAN_ROW_CAP: u64 = 2_000_000;

fn offsets_json(ctx: &CglmpContext) -> Value {
    let [t1, t2] = ctx.theta();
    let [p1, p2] = ctx.phi();
    json!([t1, t2, p1, p2].map(|q| q.to_string()))
}

fn bound_json(b: &PaperBound) -> Value {
    json!({ "bound": b.bound, "trivial": b.trivial, "cases_passed": b.passed })
}

fn witness(r: &OracleResult) -> [usize; 4] {
    let w = r.witness;
    [w.j, w.k, w.l, w.m]
}

fn oracle_json(r: &OracleResult) -> Value {
    json!({ "max_delta": r.max_delta, "witness": witness(r) })
}

fn requirements_json(r: &RequirementReport) -> Value {
    let cases: Vec<Value> = r
        .cases
        .iter()
        .map(|c| {
            let subcases: Vec<Value> = c
                .subcases
                .iter()
                .map(|s| {
                    let sums: Vec<Value> = s
                        .sums
                        .iter()
                        .map(
                            |e| json!({ "sum": e.label, "value": e.value, "residue": e.residue, "nonzero": e.nonzero }),
                        )
                        .collect();
                    json!({ "subcase": s.id.to_string(), "passed": s.passed, "sums": sums })
                })
                .collect();
            json!({ "case": c.case, "bound": c.bound, "passed": c.passed, "subcases": subcases })
        })
        .collect();
    json!({ "mode": r.mode().name(), "cases": cases })
}

fn pattern_labels(mask: u16) -> Vec<String> {
    (0..16)
        .filter(|p| mask >> p & 1 == 1)
        .map(|p| (0..4).map(|bit| if p >> bit & 1 == 1 { 'T' } else { 'F' }).collect())
        .collect()
}

fn shift_cells(s: &ShiftVector) -> Vec<String> {
    s.as_array().iter().map(i64::to_string).collect()
}

const SHIFT_COLUMNS: [&str; 4] = ["d11", "d12", "d22", "d21"];

pub fn quantum_s(args: &QuantumSArgs) -> Result<Report, CliError> {
    let d = args.shift.d;
    let s = args.shift.shifts();
    let ctx = crate::args::context(d, args.offsets)?;
    let total = quantum::quantum_s(&ctx, &s)?;
    let events = quantum::quantum_s_events(&ctx, &s)?;
    let terms = quantum::quantum_s_terms(&ctx, &s)?;
    let all_multiples = s.residues(d) == [0; 4];
    let formula = if all_multiples {
        Some(quantum::quantum_s_multiple_of_d(&ctx)?)
    } else {
        None
    };
    let term_list: Vec<Value> = TERMS
        .iter()
        .zip(terms)
        .enumerate()
        .map(|(i, (t, v))| json!({ "term": i, "pair": t.pair.to_string(), "shift": s.shift(i), "value": v }))
        .collect();
    let results = json!({
        "s": total,
        "s_events": events,
        "events_mode": s.mode.name(),
        "terms": term_list,
        "shifts_all_multiples_of_d": all_multiples,
        "s_multiple_of_d_formula": formula,
    });
    let mut table = Table::new(["d"].into_iter().chain(SHIFT_COLUMNS).chain([
        "mode",
        "s",
        "s_events",
        "term_a1b1",
        "term_a2b1",
        "term_a2b2",
        "term_a1b2",
    ]));
    let mut row = vec![d.to_string()];
    row.extend(shift_cells(&s));
    row.extend([s.mode.name().to_string(), format_f64(total), format_f64(events)]);
    row.extend(terms.iter().map(|&v| format_f64(v)));
    table.push(row);
    Ok(Report {
        doc: OutputDocument::new(
            "quantum-s",
            json!({ "d": d, "shifts": s.as_array(), "mode": s.mode.name(), "offsets": offsets_json(&ctx) }),
            results,
        ),
        table: Some(table),
    })
}

pub fn bound(args: &BoundArgs) -> Result<Report, CliError> {
    let d = args.shift.d;
    let s = args.shift.shifts();
    let report = RequirementReport::new(&s, d);
    let bound_mod = requirements::paper_bound(&s.with_mode(ArithmeticMode::ModD), d);
    let bound_int = requirements::paper_bound(&s.with_mode(ArithmeticMode::PlainInteger), d);
    let (oracle, method) = if d <= ORACLE_MAX_D {
        (hvt::brute_force_max_delta(d, &s)?, "exhaustive".to_string())
    } else if let Some(samples) = args.random_search {
        let mut rng = SplitMix64::seed_from_u64(args.seed);
        let r = hvt::random_search_max_delta(&mut rng, d, &s, samples)?;
        (
            r,
            format!("random search, {samples} samples, seed {}; lower bound only", args.seed),
        )
    } else {
        return Err(Error::OracleCap { d, cap: ORACLE_MAX_D }.into());
    };
    let paper = report.bound();
    let disagrees = paper.bound < oracle.max_delta;
    let results = json!({
        "paper_bound": paper.bound,
        "paper_bound_trivial": paper.trivial,
        "paper_bound_by_mode": { "mod-d": bound_json(&bound_mod), "integer": bound_json(&bound_int) },
        "oracle": {
            "mode": s.mode.name(),
            "method": method,
            "max_delta": oracle.max_delta,
            "witness": witness(&oracle),
        },
        "paper_bound_disagrees": disagrees,
        "requirements": requirements_json(&report),
    });
    let mut table = Table::new(["d"].into_iter().chain(SHIFT_COLUMNS).chain([
        "mode",
        "paper_bound",
        "paper_bound_mod_d",
        "paper_bound_integer",
        "oracle_max",
        "oracle_method",
        "paper_bound_disagrees",
    ]));
    let mut row = vec![d.to_string()];
    row.extend(shift_cells(&s));
    row.extend([
        s.mode.name().to_string(),
        paper.bound.to_string(),
        bound_mod.bound.to_string(),
        bound_int.bound.to_string(),
        oracle.max_delta.to_string(),
        method,
        disagrees.to_string(),
    ]);
    table.push(row);
    Ok(Report {
        doc: OutputDocument::new(
            "bound",
            json!({ "d": d, "shifts": s.as_array(), "mode": s.mode.name(), "random_search": args.random_search, "seed": args.seed }),
            results,
        ),
        table: Some(table),
    })
}

fn classification_names(a: &AuditReport) -> Vec<&'static str> {
    a.classifications().iter().map(|c| c.name()).collect()
}

fn integer_classification(a: &AuditReport) -> Vec<&'static str> {
    let mut out = vec![if a.violation_certified_plain() {
        "VIOLATION_CERTIFIED"
    } else {
        "NO_VIOLATION"
    }];
    if a.paper_bound_disagrees_plain() {
        out.push("PAPER_BOUND_DISAGREES");
    }
    out
}

pub fn audit(args: &AuditArgs) -> Result<Report, CliError> {
    let d = args.d;
    let a = requirements::audit_vs_oracle(d, &args.shifts)?;
    let mod_d = classification_names(&a);
    let integer = integer_classification(&a);
    let results = json!({
        "classification": mod_d.join("|"),
        "flags": mod_d,
        "mod-d": {
            "quantum_s": a.quantum_s,
            "paper_bound": bound_json(&a.paper_bound_mod_d),
            "oracle": oracle_json(&a.oracle_mod_d),
            "violation_certified": a.violation_certified(),
            "paper_bound_disagrees": a.paper_bound_disagrees(),
            "realized_patterns": pattern_labels(a.realized_patterns),
        },
        "integer": {
            "quantum_s": a.quantum_s_plain,
            "paper_bound": bound_json(&a.paper_bound_plain),
            "oracle": oracle_json(&a.oracle_plain),
            "violation_certified": a.violation_certified_plain(),
            "paper_bound_disagrees": a.paper_bound_disagrees_plain(),
            "classification": integer.join("|"),
        },
        "violation_margin": requirements::VIOLATION_MARGIN,
    });
    let mut table = Table::new(["d"].into_iter().chain(SHIFT_COLUMNS).chain([
        "quantum_s",
        "paper_bound",
        "oracle_max",
        "classification",
        "quantum_s_integer",
        "paper_bound_integer",
        "oracle_max_integer",
        "classification_integer",
    ]));
    let mut row = vec![d.to_string()];
    row.extend(shift_cells(&args.shifts));
    row.extend([
        format_f64(a.quantum_s),
        a.paper_bound_mod_d.bound.to_string(),
        a.oracle_mod_d.max_delta.to_string(),
        mod_d.join("|"),
        format_f64(a.quantum_s_plain),
        a.paper_bound_plain.bound.to_string(),
        a.oracle_plain.max_delta.to_string(),
        integer.join("|"),
    ]);
    table.push(row);
    Ok(Report {
        doc: OutputDocument::new("audit", json!({ "d": d, "shifts": args.shifts.as_array() }), results),
        table: Some(table),
    })
}

/// One scan row, computed under a single arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub d: usize,
    pub shifts: [i64; 4],
    pub quantum_s: f64,
    pub paper_bound: u8,
    pub paper_bound_trivial: bool,
    pub oracle_max: u8,
    pub classification: String,
}

fn scan_row(d: usize, s: ShiftVector) -> Result<ScanRow, Error> {
    let ctx = CglmpContext::new(d)?;
    let q = quantum::quantum_s_events(&ctx, &s)?;
    let paper = requirements::paper_bound(&s, d);
    let oracle = hvt::brute_force_max_delta(d, &s)?.max_delta;
    let mut class = vec![if q > f64::from(oracle) + requirements::VIOLATION_MARGIN {
        "VIOLATION_CERTIFIED"
    } else {
        "NO_VIOLATION"
    }];
    if paper.bound < oracle {
        class.push("PAPER_BOUND_DISAGREES");
    }
    Ok(ScanRow {
        d,
        shifts: s.as_array(),
        quantum_s: q,
        paper_bound: paper.bound,
        paper_bound_trivial: paper.trivial,
        oracle_max: oracle,
        classification: class.join("|"),
    })
}

pub fn scan(args: &ScanArgs) -> Result<Report, CliError> {
    let d_max = args.d_max.unwrap_or(args.d);
    if d_max < args.d {
        return Err(CliError::Usage(format!("--d-max {d_max} is below --d {}", args.d)));
    }
    if d_max > ORACLE_MAX_D {
        return Err(Error::OracleCap {
            d: d_max,
            cap: ORACLE_MAX_D,
        }
        .into());
    }
    let mode: ArithmeticMode = args.mode.into();
    let mut jobs: Vec<(usize, ShiftVector)> = Vec::new();
    let mut planned: u64 = 0;
    for d in args.d..=d_max {
        let lo = args.shift_min.unwrap_or(0);
        let hi = args.shift_max.unwrap_or(d as i64 - 1);
        if hi < lo {
            return Err(CliError::Usage(format!("empty shift range {lo}..={hi}")));
        }
        let width = (hi - lo + 1) as u64;
        planned = planned.saturating_add(width.saturating_pow(4));
        if planned > SCAN_ROW_CAP {
            return Err(CliError::Cap(format!("scan would exceed {SCAN_ROW_CAP} rows")));
        }
        for n in 0..width.pow(4) {
            let digit = |p: u32| lo + ((n / width.pow(p)) % width) as i64;
            jobs.push((
                d,
                ShiftVector::new(digit(3), digit(2), digit(1), digit(0)).with_mode(mode),
            ));
        }
    }
    let rows: Vec<ScanRow> = jobs
        .par_iter()
        .map(|&(d, s)| scan_row(d, s))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(["d"].into_iter().chain(SHIFT_COLUMNS).chain([
        "mode",
        "quantum_s",
        "paper_bound",
        "paper_bound_trivial",
        "oracle_max",
        "classification",
    ]));
    for r in &rows {
        let mut row = vec![r.d.to_string()];
        row.extend(r.shifts.iter().map(i64::to_string));
        row.extend([
            mode.name().to_string(),
            format_f64(r.quantum_s),
            r.paper_bound.to_string(),
            r.paper_bound_trivial.to_string(),
            r.oracle_max.to_string(),
            r.classification.clone(),
        ]);
        table.push(row);
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "d": r.d, "shifts": r.shifts, "quantum_s": r.quantum_s, "paper_bound": r.paper_bound,
                "paper_bound_trivial": r.paper_bound_trivial, "oracle_max": r.oracle_max,
                "classification": r.classification,
            })
        })
        .collect();
    let inputs = json!({
        "d": args.d, "d_max": d_max, "shift_min": args.shift_min, "shift_max": args.shift_max, "mode": mode.name(),
    });
    Ok(Report {
        doc: OutputDocument::new("scan", inputs, json!({ "row_count": rows.len(), "rows": json_rows })),
        table: Some(table),
    })
}

pub fn chsh(_args: &FormatOnly) -> Result<Report, CliError> {
    let cfg = ChshConfig::standard();
    let s = chsh::chsh_s_quantum(&cfg);
    let bound = chsh::chsh_deterministic_bound();
    let pr = hvt::chsh_value_box(&hvt::pr_box())?;
    let correlators = json!({
        "A1B1": chsh::correlation(&cfg.a1, &cfg.b1),
        "A1B2": chsh::correlation(&cfg.a1, &cfg.b2),
        "A2B1": chsh::correlation(&cfg.a2, &cfg.b1),
        "A2B2": chsh::correlation(&cfg.a2, &cfg.b2),
    });
    let assignments: Vec<Value> = chsh::sign_assignments()
        .map(|[a1, a2, b1, b2]| json!({ "signs": [a1, a2, b1, b2], "value": chsh::chsh_assignment_value(a1, a2, b1, b2) }))
        .collect();
    let results = json!({
        "quantum_s": s,
        "deterministic_bound": bound,
        "pr_box_value": pr,
        "correlators": correlators,
        "settings": {
            "a1": cfg.a1.components(), "a2": cfg.a2.components(),
            "b1": cfg.b1.components(), "b2": cfg.b2.components(),
        },
        "assignments": assignments,
    });
    let mut table = Table::new(["quantity", "value"]);
    table.push(vec!["quantum_s".into(), format_f64(s)]);
    table.push(vec!["deterministic_bound".into(), bound.to_string()]);
    table.push(vec!["pr_box_value".into(), format_f64(pr)]);
    Ok(Report {
        doc: OutputDocument::new("chsh", json!({}), results),
        table: Some(table),
    })
}

fn write_trial_log(path: &std::path::Path, spec: &SampleSpec) -> Result<sampler::Estimate, CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "pair,k,l,event")?;
    let mut failure: Option<std::io::Error> = None;
    let estimate = sampler::sample_s_with_log(spec, &mut |r: &TrialRecord| {
        if failure.is_none() {
            if let Err(e) = writeln!(out, "{},{},{},{}", r.pair, r.a_outcome, r.b_outcome, u8::from(r.event)) {
                failure = Some(e);
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    out.flush()?;
    Ok(estimate)
}

pub fn sample(args: &SampleArgs) -> Result<Report, CliError> {
    let shifts = args.shifts.with_mode(args.mode.into());
    let (source, source_name) = match &args.model {
        Some(path) => {
            let (file, model) = model::load_model(path)?;
            if args.d.is_some_and(|d| d != file.d) {
                return Err(CliError::Usage(format!(
                    "--d disagrees with the model file (d = {})",
                    file.d
                )));
            }
            let source = match model {
                Model::Hvt(m) => Source::Hvt(m),
                Model::Box(b) => Source::Box(b),
            };
            (source, file.model.type_name())
        }
        None => {
            let d = args
                .d
                .ok_or_else(|| CliError::Usage("--d is required without --model".into()))?;
            (Source::Quantum(crate::args::context(d, args.offsets)?), "quantum")
        }
    };
    let ci = match args.ci {
        CiArg::Normal => CiMethod::Normal,
        CiArg::Exact => CiMethod::Exact,
    };
    let spec = SampleSpec::new(source, shifts, args.trials, args.seed).with_ci(ci);
    let d = spec.d();
    let e = match &args.trial_log {
        Some(path) => write_trial_log(path, &spec)?,
        None => sampler::sample_s(&spec)?,
    };
    let analytic = spec.analytic_s()?;
    let results = json!({
        "source": source_name,
        "s_hat": e.s_hat,
        "stderr": e.stderr,
        "ci95": [e.ci95.0, e.ci95.1],
        "ci_method": match ci { CiMethod::Normal => "normal", CiMethod::Exact => "exact" },
        "trials_per_pair": e.trials,
        "seed": e.seed,
        "counts": e.counts,
        "term_hats": e.term_hats,
        "analytic_s": analytic,
    });
    let mut table = Table::new(["d"].into_iter().chain(SHIFT_COLUMNS).chain([
        "mode",
        "source",
        "trials_per_pair",
        "seed",
        "s_hat",
        "stderr",
        "ci95_lo",
        "ci95_hi",
        "analytic_s",
    ]));
    let mut row = vec![d.to_string()];
    row.extend(shift_cells(&shifts));
    row.extend([
        shifts.mode.name().to_string(),
        source_name.to_string(),
        e.trials.to_string(),
        e.seed.to_string(),
        format_f64(e.s_hat),
        format_f64(e.stderr),
        format_f64(e.ci95.0),
        format_f64(e.ci95.1),
        format_f64(analytic),
    ]);
    table.push(row);
    let inputs = json!({
        "d": d, "shifts": shifts.as_array(), "mode": shifts.mode.name(), "trials": args.trials,
        "seed": args.seed, "model": args.model.as_ref().map(|p| p.display().to_string()),
    });
    Ok(Report {
        doc: OutputDocument::new("sample", inputs, results),
        table: Some(table),
    })
}

pub fn prob_table(args: &ProbTableArgs) -> Result<Report, CliError> {
    let ctx = crate::args::context(args.d, args.offsets)?;
    let t = if args.direct {
        quantum::prob_table_direct(&ctx, args.pair)?
    } else {
        quantum::prob_table(&ctx, args.pair)?
    };
    let d = args.d;
    let rows: Vec<Vec<f64>> = t.entries().chunks(d).map(<[f64]>::to_vec).collect();
    let results = json!({
        "pair": args.pair.to_string(),
        "route": if args.direct { "direct" } else { "closed-form" },
        "table": rows,
        "total": t.total(),
        "row_sums": t.row_sums(),
        "col_sums": t.col_sums(),
    });
    let mut table = Table::new(["pair", "k", "l", "p"]);
    for k in 0..d {
        for l in 0..d {
            table.push(vec![
                args.pair.to_string(),
                k.to_string(),
                l.to_string(),
                format_f64(t.get(k, l)),
            ]);
        }
    }
    Ok(Report {
        doc: OutputDocument::new(
            "prob-table",
            json!({
                "d": d, "pair": [args.pair.a.index(), args.pair.b.index()], "direct": args.direct,
                "offsets": offsets_json(&ctx),
            }),
            results,
        ),
        table: Some(table),
    })
}

pub fn hvt_s(args: &HvtSArgs) -> Result<Report, CliError> {
    let (file, model) = model::load_model(&args.model)?;
    let d = file.d;
    let s = args.shifts.with_mode(args.mode.into());
    let (value, gap) = match &model {
        Model::Hvt(m) => (hvt::hvt_s(m, &s), hvt::OneObservableBox::from_model(m).signaling_gap()),
        Model::Box(b) => (b.s_value(&s), b.signaling_gap()),
    };
    let oracle = if d <= ORACLE_MAX_D {
        Some(hvt::brute_force_max_delta(d, &s)?.max_delta)
    } else {
        None
    };
    let exceeds = oracle.map(|m| value > f64::from(m) + 1e-10);
    let results = json!({
        "model_type": file.model.type_name(),
        "s": value,
        "oracle_max": oracle,
        "exceeds_oracle": exceeds,
        "signaling_gap": gap,
    });
    let mut table = Table::new(["d"].into_iter().chain(SHIFT_COLUMNS).chain([
        "mode",
        "model_type",
        "s",
        "oracle_max",
        "signaling_gap",
    ]));
    let mut row = vec![d.to_string()];
    row.extend(shift_cells(&s));
    row.extend([
        s.mode.name().to_string(),
        file.model.type_name().to_string(),
        format_f64(value),
        oracle.map_or_else(String::new, |m| m.to_string()),
        format_f64(gap),
    ]);
    table.push(row);
    Ok(Report {
        doc: OutputDocument::new(
            "hvt-s",
            json!({ "model": args.model.display().to_string(), "d": d, "shifts": s.as_array(), "mode": s.mode.name() }),
            results,
        ),
        table: Some(table),
    })
}

fn condition_label(c: [i64; 4]) -> String {
    let names = [Shift::D11, Shift::D12, Shift::D22, Shift::D21];
    let mut out = String::new();
    for (coef, name) in c.iter().zip(names) {
        if *coef == 0 {
            continue;
        }
        let sign = if *coef < 0 {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        let mag = if coef.abs() == 1 {
            String::new()
        } else {
            coef.abs().to_string()
        };
        out.push_str(&format!("{sign}{mag}{}", name.label()));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn matrices(_args: &FormatOnly) -> Result<Report, CliError> {
    let ms = requirements::appendix_b_matrices();
    let mut table = Table::new(["subcase", "size", "determinant", "consistency_condition"]);
    let list: Vec<Value> = ms
        .iter()
        .map(|m| {
            let cond = condition_label(m.consistency_condition());
            table.push(vec![
                m.id.to_string(),
                m.rows.len().to_string(),
                m.determinant().to_string(),
                cond.clone(),
            ]);
            json!({
                "subcase": m.id.to_string(),
                "unknowns": m.unknowns.iter().map(|u| format!("{u:?}").to_lowercase()).collect::<Vec<_>>(),
                "rows": m.rows,
                "rhs": m.rhs_labels(),
                "determinant": m.determinant(),
                "consistency_condition": cond,
            })
        })
        .collect();
    let mismatches: Vec<Value> = requirements::transcription_mismatches()
        .iter()
        .map(|m| json!({ "subcase": m.id.to_string(), "matrix_rhs": m.matrix_rhs, "requirement": m.requirement }))
        .collect();
    Ok(Report {
        doc: OutputDocument::new(
            "matrices",
            json!({}),
            json!({ "matrices": list, "transcription_mismatches": mismatches }),
        ),
        table: Some(table),
    })
}
