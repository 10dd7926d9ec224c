//! The subcommands. Each returns a finished [`Report`] and whether every
//! claim it checks holds.

use jetinv_core::exprcore::{parse_expr, print_expr_in};
use jetinv_core::invcheck::{
    build_theta, classify_prolonged, eikonal_form, verify_basis, verify_covariance, InvariantVerdict, Mode,
};
use jetinv_core::jetspace::{SpaceSpec, MAX_INDEPENDENTS};
use jetinv_core::liealg::{build_classical_generating_set, build_eikonal_algebra, dilation, VectorField};
use jetinv_core::rankcalc::{
    find_generating_set, generic_rank, prolong_all, stabilization_scan, verify_generating_set, RankQuery, Sampling,
};

use crate::report::Report;
use crate::source::Source;
use crate::CliError;

/// Flags shared by the source-based commands.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub order: Option<usize>,
    pub truncation: Option<i64>,
    pub sampling: Sampling,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    /// `false` when a checked claim failed.
    pub ok: bool,
}

fn echo(report: &mut Report, command: &str, source: &Source, order: usize, truncation: Option<i64>, s: &Sampling) {
    let truncation = match (source, truncation.or(source.default_truncation())) {
        (Source::Classical(_), _) => "none".to_string(),
        (_, Some(k)) => k.to_string(),
        (_, None) => "declared".to_string(),
    };
    report.kv(&[
        ("command", command.to_string()),
        ("source", source.to_string()),
        ("order", order.to_string()),
        ("truncation", truncation),
        ("points", s.points.to_string()),
        ("seed", s.seed.to_string()),
        ("bound", s.bound.to_string()),
    ]);
}

fn labels(ops: &[VectorField]) -> String {
    ops.iter().map(VectorField::label).collect::<Vec<_>>().join(",")
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn cmd_rank(source: &Source, opts: &Options) -> Result<Outcome, CliError> {
    let order = opts.order.unwrap_or(1);
    let loaded = source.load(opts.truncation)?;
    let ops = loaded.operators();
    let q = RankQuery { operators: ops.clone(), order, space: loaded.space.clone(), sampling: opts.sampling };
    let rep = generic_rank(&q)?;
    let mut report = Report::new();
    echo(&mut report, "rank", source, order, opts.truncation, &opts.sampling);
    report.kv(&[
        ("rank", rep.rank.to_string()),
        ("jet_dim", rep.jet_dimension.to_string()),
        ("invariants", rep.invariant_count.to_string()),
    ]);
    report.kv(&[("operators", ops.len().to_string()), ("per_point_ranks", join(&rep.per_point_ranks))]);
    report.say(format!(
        "order-{order} prolongation of {} operators: generic rank {} on {} jet coordinates, {} independent invariants",
        ops.len(),
        rep.rank,
        rep.jet_dimension,
        rep.invariant_count
    ));
    if rep.per_point_ranks.iter().any(|&r| r != rep.rank) {
        report.say("warning: sample points disagree on the rank; some point is not generic, try another seed");
    }
    Ok(Outcome { report, ok: true })
}

pub fn cmd_genset(source: &Source, opts: &Options, verify_against: Option<&Source>) -> Result<Outcome, CliError> {
    let order = opts.order.unwrap_or(1);
    let loaded = source.load(opts.truncation)?;
    let ops = loaded.operators();
    let g = find_generating_set(&ops, order, &loaded.space, opts.sampling)?;
    let chosen: Vec<VectorField> = g.selected.iter().map(|&i| ops[i].clone()).collect();
    let mut report = Report::new();
    echo(&mut report, "genset", source, order, opts.truncation, &opts.sampling);
    report.kv(&[
        ("size", chosen.len().to_string()),
        ("rank", g.report.rank.to_string()),
        ("full_rank", g.full.rank.to_string()),
        ("operators", ops.len().to_string()),
    ]);
    report.kv(&[("generating_set", labels(&chosen))]);
    report.kv(&[("rank_trace", join(&g.rank_trace))]);
    report.say(format!(
        "greedy generating set: {} of {} operators reach the full order-{order} rank {}",
        chosen.len(),
        ops.len(),
        g.full.rank
    ));
    let mut ok = true;
    if let Some(reference) = verify_against {
        // `--truncation` applies to the candidate only
        let r = reference.load(reference.default_truncation())?;
        if r.space != loaded.space {
            return Err(CliError::Usage(format!("`{source}` and `{reference}` are defined on different spaces")));
        }
        let v = verify_generating_set(&ops, &r.operators(), order, &loaded.space, opts.sampling)?;
        report.kv(&[
            ("equal_rank", v.equal_rank.to_string()),
            ("candidate_rank", v.candidate.rank.to_string()),
            ("reference_rank", v.reference.rank.to_string()),
            ("reference", reference.to_string()),
        ]);
        report.say(format!(
            "all {} operators of `{source}` against `{reference}`: ranks {} and {}",
            ops.len(),
            v.candidate.rank,
            v.reference.rank
        ));
        ok = v.equal_rank;
    }
    Ok(Outcome { report, ok })
}

pub fn cmd_check(source: &Source, opts: &Options, expr: &str, mode: Mode) -> Result<Outcome, CliError> {
    let loaded = source.load(opts.truncation)?;
    let f = parse_expr(expr, &loaded.space).map_err(|e| CliError::Expr { text: expr.to_string(), source: e })?;
    let order = opts.order.unwrap_or(f.max_order().max(1));
    let fields = prolong_all(&loaded.operators(), order, &loaded.space);
    let verdict = classify_prolonged(&f, &fields, mode)?;
    let mut report = Report::new();
    echo(&mut report, "check", source, order, opts.truncation, &opts.sampling);
    let mode_name = match mode {
        Mode::Absolute => "absolute",
        Mode::Relative => "relative",
    };
    report.kv(&[("expr", print_expr_in(&f, &loaded.space)), ("mode", mode_name.to_string())]);
    match &verdict {
        InvariantVerdict::NotInvariant { witness } => {
            report.kv(&[("verdict", verdict.kind().to_string()), ("witness", witness.clone())]);
            report.say(format!("not invariant: `{witness}` maps F outside its multiples"));
        }
        InvariantVerdict::Absolute => {
            report.kv(&[("verdict", verdict.kind().to_string())]);
            report.say(format!("absolute invariant of all {} operators", fields.len()));
        }
        InvariantVerdict::Relative { multipliers } => {
            report.kv(&[("verdict", verdict.kind().to_string())]);
            report.say("relative invariant; nonzero multipliers:");
            for (label, m) in multipliers.iter().filter(|(_, m)| !m.is_zero()) {
                let value = print_expr_in(m, &loaded.space);
                report.kv(&[("multiplier", label.clone()), ("value", value.clone())]);
                report.say(format!("  {label}: {value}"));
            }
        }
    }
    Ok(Outcome { report, ok: verdict.is_invariant() })
}

pub fn cmd_scan(source: &Source, opts: &Options, k_max: u32) -> Result<Outcome, CliError> {
    let order = opts.order.unwrap_or(1);
    let loaded = source.load(Some(i64::from(k_max)))?;
    let members: Vec<(u32, VectorField)> =
        loaded.members.iter().map(|(k, f)| (u32::try_from(*k).unwrap_or(0), f.clone())).collect();
    let scan = stabilization_scan(&members, order, &loaded.space, k_max, opts.sampling)?;
    let mut report = Report::new();
    echo(&mut report, "scan", source, order, Some(i64::from(k_max)), &opts.sampling);
    for (k, rank) in &scan.rows {
        report.kv(&[("K", k.to_string()), ("rank", rank.to_string())]);
    }
    let last = scan.rows.last().expect("k_max ≥ 0").1;
    report.kv(&[
        ("stable_from", scan.stable_from.to_string()),
        ("final_rank", last.to_string()),
        ("jet_dim", scan.jet_dimension.to_string()),
    ]);
    report.say(format!(
        "order-{order} rank is {last} for every truncation K >= {} up to {k_max}",
        scan.stable_from
    ));
    Ok(Outcome { report, ok: true })
}

/// Settings of the end-to-end eikonal run.
#[derive(Clone, Copy, Debug)]
pub struct DemoOptions {
    pub n: usize,
    pub k_max: u32,
    pub order: usize,
    pub sampling: Sampling,
}

struct Checks<'a> {
    report: &'a mut Report,
    ok: bool,
}

impl Checks<'_> {
    fn record(&mut self, name: &str, pass: bool, expected: impl ToString, got: impl ToString) {
        self.ok &= pass;
        self.report.kv(&[
            ("check", name.to_string()),
            ("pass", pass.to_string()),
            ("expected", expected.to_string()),
            ("got", got.to_string()),
        ]);
        let mark = if pass { "ok  " } else { "FAIL" };
        self.report.say(format!("[{mark}] {name}: expected {}, got {}", expected.to_string(), got.to_string()));
    }
}

/// Builds the truncated eikonal family and checks its rank, invariant and
/// basis claims. With `K = 0` only the invariance claims are checked, since
/// the classical algebra alone does not reach the stated ranks.
pub fn cmd_demo(d: &DemoOptions) -> Result<Outcome, CliError> {
    let DemoOptions { n, k_max, order, sampling } = *d;
    if !(1..MAX_INDEPENDENTS).contains(&n) {
        return Err(CliError::Usage(format!("--n must lie in 1..={}", MAX_INDEPENDENTS - 1)));
    }
    if !(1..=2).contains(&order) {
        return Err(CliError::Usage("--order must be 1 or 2".into()));
    }
    let space = SpaceSpec::lorentz(n);
    let family = build_eikonal_algebra(n, k_max);
    let truncated = k_max >= 1;
    let mut report = Report::new();
    report.kv(&[
        ("command", "demo".to_string()),
        ("n", n.to_string()),
        ("K", k_max.to_string()),
        ("order", order.to_string()),
        ("points", sampling.points.to_string()),
        ("seed", sampling.seed.to_string()),
        ("bound", sampling.bound.to_string()),
    ]);
    report.say(format!("eikonal family, n = {n}, truncated at K = {k_max}: {} operators", family.len()));
    let mut checks = Checks { report: &mut report, ok: true };

    let q = RankQuery { operators: family.clone(), order: 1, space: space.clone(), sampling };
    let r1 = generic_rank(&q)?;
    checks.report.kv(&[
        ("first_order_rank", r1.rank.to_string()),
        ("jet_dim", r1.jet_dimension.to_string()),
        ("invariants_order1", r1.invariant_count.to_string()),
    ]);
    if truncated {
        checks.record("first_order_rank", r1.rank == 2 * n + 3, 2 * n + 3, r1.rank);
        checks.record("no_first_order_invariants", r1.invariant_count == 0, 0, r1.invariant_count);
    }

    let fields1 = prolong_all(&family, 1, &space);
    let w = eikonal_form(&space);
    let v = classify_prolonged(&w, &fields1, Mode::Relative)?;
    if truncated {
        checks.record("eikonal_form_relative", v.kind() == "relative", "relative", v.kind());
    } else {
        checks.record("eikonal_form_invariant", v.is_invariant(), "relative|absolute", v.kind());
    }

    if truncated {
        let mut with_d = family.clone();
        with_d.push(dilation(&space));
        let v = verify_generating_set(&with_d, &family, 1, &space, sampling)?;
        checks.record("dilation_in_span", v.equal_rank, v.reference.rank, v.candidate.rank);

        let classical = build_classical_generating_set(n);
        let v = verify_generating_set(&classical, &family, 1, &space, sampling)?;
        checks.record("classical_generating_set", v.equal_rank, v.reference.rank, v.candidate.rank);
        checks.report.kv(&[
            ("classical_count", classical.len().to_string()),
            ("classical_rank", v.candidate.rank.to_string()),
            ("count_equals_rank", (classical.len() == v.candidate.rank).to_string()),
        ]);
        checks.report.say(format!(
            "note: the classical set has {} operators for rank {} (equal only when n = 1); reported, not checked",
            classical.len(),
            v.candidate.rank
        ));
        let g = find_generating_set(&family, 1, &space, sampling)?;
        let chosen: Vec<VectorField> = g.selected.iter().map(|&i| family[i].clone()).collect();
        checks.report.kv(&[("greedy_size", chosen.len().to_string()), ("greedy_set", labels(&chosen))]);
    }

    if order >= 2 {
        let fields2 = prolong_all(&family, 2, &space);
        let theta = build_theta(&space)?;
        for (k, v) in verify_covariance(&theta, &fields2, &space)? {
            checks.record(&format!("S_{k}_covariant"), v.is_invariant(), "relative|absolute", v.kind());
        }
        let b = verify_basis(n, k_max, sampling)?;
        checks.report.kv(&[("invariants_order2", b.invariant_count.to_string())]);
        checks.record("basis_identities", b.identities_hold(), 0, b.failures.len());
        for f in b.failures.iter().take(5) {
            checks.report.say(format!("  S_{} fails under {}: residual has {} terms", f.k, f.operator, f.residual.num_terms()));
        }
        checks.record("basis_independent", b.independent, true, b.independent);
        if truncated {
            checks.record("second_order_invariants", b.invariant_count == n, n, b.invariant_count);
            checks.record("absolute_count_matches", b.absolute_count == b.invariant_count, b.invariant_count, b.absolute_count);
        }
    }
    if !truncated {
        checks.report.say("K = 0: rank and count claims skipped, only invariance is checked");
    }
    checks.report.say("ranks are those of the truncated family; `scan` shows where they stabilize");
    let ok = checks.ok;
    report.kv(&[("all_pass", ok.to_string())]);
    Ok(Outcome { report, ok })
}
