use std::f64::consts::PI;

use anyhow::{bail, Context, Result};
use hardy_bap::approx::SolveOptions;
use hardy_bap::corpus::{family_fixtures, random_polynomials, CorpusEntry};
use hardy_bap::inequalities::{
    check_inequality, check_inequality_given, corollary1_check, corollary3_check,
    corollary3_check_given, corollary3_witness_check, sharpness_sweep, sup_distance, CheckOptions,
    InequalityReport, InequalityVerdict,
};
use hardy_bap::{
    best_approx, certify_bap, certify_pair, certify_theorem3, elliptic_k, mixed_approx_l1,
    ClosedForm, FamilyKind, HardyExponent, PsiWeights, TestFunction,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{
    check_tol, ApproxArgs, CertifyArgs, Command, CorpusArgs, InequalityArgs, InequalityKind,
    MixedArgs, SweepArgs,
};
use crate::output::Table;
use crate::parse::{parse_function_spec, parse_weights};

/// What a command produced.
pub struct Outcome {
    pub result: Value,
    pub table: Table,
    /// An inequality failed although its parameters are admissible.
    pub admissible_violation: bool,
}

pub fn run(command: &Command) -> Result<Outcome> {
    command.common().validate()?;
    match command {
        Command::CertifyKernel(a) => certify(a),
        Command::Approx(a) => approx(a),
        Command::MixedApprox(a) => mixed(a),
        Command::CheckInequality(a) => inequality(a),
        Command::SharpnessSweep(a) => sweep(a),
        Command::CorpusSuite(a) => corpus(a),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn certify(args: &CertifyArgs) -> Result<Outcome> {
    let cfg = args.sweep()?;
    let kernel = args.kernel()?;
    let l = match &args.l {
        Some(text) => Some(match parse_function_spec(text).with_context(|| format!("L {text:?}"))? {
            TestFunction::Series(s) => s,
            other => bail!("L must be a polynomial, got {}", other.id()),
        }),
        None => None,
    };
    let (kind, n, cert) = match (&kernel, &l, args.n) {
        (Some(k), None, _) => ("bap", k.n, certify_bap(k, &cfg)?),
        (Some(k), Some(l), _) => ("pair", k.n, certify_pair(k, l, &cfg)?),
        (None, Some(l), Some(n)) => ("theorem3", n, certify_theorem3(l, n, &cfg)?),
        (None, Some(_), None) => bail!("--n is required when certifying L alone"),
        (None, None, _) => bail!("a kernel (--kernel or --kernel-file) or --l is required"),
    };
    let mut table = Table::new(&[
        "kind",
        "n",
        "verdict",
        "coefficient_gap_margin",
        "min_real_part",
        "boundary_estimate",
        "pair_margin",
        "max_ratio",
    ]);
    table.push(vec![
        kind.into(),
        n.to_string(),
        serde_json::to_value(cert.verdict)?.as_str().unwrap_or_default().into(),
        cert.coefficient_gap_margin.to_string(),
        cert.min_real_part.to_string(),
        cert.boundary_estimate.to_string(),
        fmt_opt(cert.pair_margin),
        fmt_opt(cert.max_ratio),
    ]);
    Ok(Outcome {
        result: json!({ "kind": kind, "n": n, "certificate": cert }),
        table,
        admissible_violation: false,
    })
}

/// Known closed-form values of `E_n(f)_q`.
fn reference_value(f: &TestFunction, n: usize, q: HardyExponent) -> Option<f64> {
    match f {
        TestFunction::Closed(ClosedForm::Family(fam)) if fam.kind == FamilyKind::CayleyRational => {
            let rho = fam.rho;
            let rn = rho.powi(n as i32);
            match q {
                HardyExponent::One => elliptic_k(rho * rn).ok().map(|k| 2.0 / PI * rn * k),
                HardyExponent::Two => Some(rn / (1.0 - rho * rho).sqrt()),
                HardyExponent::Infinity => None,
            }
        }
        TestFunction::Series(s) if s.is_exact() && s.degree().is_none_or(|d| d < n) => Some(0.0),
        _ => None,
    }
}

fn rho_or_param(f: &TestFunction) -> String {
    match f {
        TestFunction::Closed(ClosedForm::Family(fam)) => fam.rho.to_string(),
        TestFunction::Closed(ClosedForm::GeometricImage { rho, .. }) => rho.to_string(),
        other => other.id(),
    }
}

fn approx(args: &ApproxArgs) -> Result<Outcome> {
    let f = args.function.load()?;
    let opts = args.common.solve_options();
    let mut table = Table::new(&[
        "n",
        "q",
        "rho_or_param",
        "value",
        "lower_bound",
        "reference_value",
        "rel_err",
    ]);
    let mut results = Vec::new();
    for &n in &args.n {
        for &q in &args.q {
            let res = best_approx(&f, n, q, &opts)?;
            let reference = reference_value(&f, n, q);
            let rel_err = reference.map(|r| {
                if r == 0.0 {
                    res.value
                } else {
                    (res.value - r).abs() / r
                }
            });
            table.push(vec![
                n.to_string(),
                q.to_string(),
                rho_or_param(&f),
                res.value.to_string(),
                res.lower_bound.to_string(),
                fmt_opt(reference),
                fmt_opt(rel_err),
            ]);
            results.push(json!({
                "function": f.id(),
                "result": res,
                "reference_value": reference,
                "rel_err": rel_err,
            }));
        }
    }
    Ok(Outcome {
        result: Value::Array(results),
        table,
        admissible_violation: false,
    })
}

fn mixed(args: &MixedArgs) -> Result<Outcome> {
    let f = args.function.load()?;
    let opts = SolveOptions {
        neg_degree: args.neg_degree,
        ..args.common.solve_options()
    };
    let res = mixed_approx_l1(&f, args.big_n, &opts)?;
    let coefficient = f.coefficient(args.big_n).norm();
    let mut table = Table::new(&[
        "N",
        "neg_degree",
        "value",
        "lower_bound",
        "half_degree_value",
        "coefficient_modulus",
    ]);
    table.push(vec![
        args.big_n.to_string(),
        args.neg_degree.to_string(),
        res.value.to_string(),
        res.lower_bound.to_string(),
        fmt_opt(res.convergence),
        coefficient.to_string(),
    ]);
    Ok(Outcome {
        result: json!({ "function": f.id(), "result": res, "coefficient_modulus": coefficient }),
        table,
        admissible_violation: false,
    })
}

fn inequality_table() -> Table {
    Table::new(&[
        "name",
        "n",
        "N",
        "c_or_psi_digest",
        "function_id",
        "lhs",
        "rhs",
        "slack",
        "verdict",
    ])
}

fn push_report(table: &mut Table, r: &InequalityReport) -> Result<()> {
    table.push(vec![
        serde_json::to_value(r.name)?.as_str().unwrap_or_default().into(),
        r.n.to_string(),
        r.big_n.map(|v| v.to_string()).unwrap_or_default(),
        r.parameter.clone(),
        r.function_id.clone(),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.slack.to_string(),
        serde_json::to_value(r.verdict)?.as_str().unwrap_or_default().into(),
    ]);
    Ok(())
}

fn must_hold_but_violated(r: &InequalityReport) -> bool {
    r.admissible && r.verdict == InequalityVerdict::Violated
}

fn inequality(args: &InequalityArgs) -> Result<Outcome> {
    check_tol("--ineq-tol", args.ineq_tol)?;
    let opts = CheckOptions {
        solve: SolveOptions {
            neg_degree: args.neg_degree,
            ..args.common.solve_options()
        },
        tol: args.ineq_tol,
    };
    let big_n = || args.big_n.context("--big-n is required for this inequality");
    let report = match args.kind {
        InequalityKind::Landau => check_inequality(&args.function.load()?, args.n, big_n()?, args.c, &opts)?,
        InequalityKind::Corollary1 => corollary1_check(&args.function.load()?, args.n, big_n()?, &opts)?,
        InequalityKind::Corollary3 => {
            let text = args.weights.as_deref().context("--weights is required for corollary3")?;
            let psi = parse_weights(text).with_context(|| format!("weights {text:?}"))?;
            if args.witness {
                if args.function.is_given() {
                    bail!("--witness replaces the function; drop --function");
                }
                corollary3_witness_check(args.n, &psi, &opts)?
            } else {
                corollary3_check(&args.function.load()?, args.n, &psi, &opts)?
            }
        }
    };
    let mut table = inequality_table();
    push_report(&mut table, &report)?;
    Ok(Outcome {
        admissible_violation: must_hold_but_violated(&report),
        result: serde_json::to_value(&report)?,
        table,
    })
}

fn sweep(args: &SweepArgs) -> Result<Outcome> {
    check_tol("--ineq-tol", args.ineq_tol)?;
    let opts = CheckOptions {
        solve: args.common.solve_options(),
        tol: args.ineq_tol,
    };
    let s = sharpness_sweep(args.n, args.big_n, &args.rhos()?, &opts)?;
    let mut table = Table::new(&[
        "n",
        "N",
        "rho",
        "ratio",
        "analytic_floor",
        "sharp_column",
        "distance",
        "within_bounds",
    ]);
    for i in 0..s.rho_values.len() {
        table.push(vec![
            s.n.to_string(),
            s.big_n.to_string(),
            s.rho_values[i].to_string(),
            s.ratios[i].to_string(),
            s.analytic_floor[i].to_string(),
            s.sharp_column[i].to_string(),
            s.distances[i].to_string(),
            s.within_bounds[i].to_string(),
        ]);
    }
    Ok(Outcome {
        result: serde_json::to_value(&s)?,
        table,
        admissible_violation: false,
    })
}

fn corpus(args: &CorpusArgs) -> Result<Outcome> {
    check_tol("--ineq-tol", args.ineq_tol)?;
    let cases = args.parsed_cases()?;
    let bohr: Vec<PsiWeights> = args
        .bohr_rhos()?
        .into_iter()
        .map(|rho| PsiWeights::geometric(rho, 1, 200))
        .collect::<hardy_bap::Result<_>>()?;
    let opts = CheckOptions {
        solve: args.common.solve_options(),
        tol: args.ineq_tol,
    };
    let mut entries = random_polynomials(args.seed, args.count, args.max_degree);
    if args.families {
        let mut seen = Vec::new();
        for &(n, big_n, _) in &cases {
            if !seen.contains(&(n, big_n)) {
                seen.push((n, big_n));
                entries.extend(family_fixtures(n, big_n)?);
            }
        }
    }
    let mut orders: Vec<usize> = cases.iter().map(|c| c.0).collect();
    if !bohr.is_empty() {
        orders.push(0);
    }
    orders.sort_unstable();
    orders.dedup();

    let check = |entry: &CorpusEntry| -> Result<Vec<InequalityReport>> {
        let f = &entry.function;
        let distances = orders
            .iter()
            .map(|&n| Ok((n, sup_distance(f, n, &opts)?)))
            .collect::<Result<Vec<_>>>()?;
        let distance = |n: usize| &distances.iter().find(|d| d.0 == n).expect("order computed").1;
        let mut out = Vec::new();
        for &(n, big_n, c) in &cases {
            let mut r = check_inequality_given(f, n, big_n, c, distance(n), opts.tol);
            r.function_id = entry.id.clone();
            out.push(r);
        }
        for psi in &bohr {
            let mut r = corollary3_check_given(f, 0, psi, distance(0), opts.tol)?;
            r.function_id = entry.id.clone();
            out.push(r);
        }
        Ok(out)
    };
    let per_entry: Vec<Vec<InequalityReport>> =
        entries.par_iter().map(check).collect::<Result<_>>()?;
    let reports: Vec<InequalityReport> = per_entry.into_iter().flatten().collect();

    let mut table = inequality_table();
    for r in &reports {
        push_report(&mut table, r)?;
    }
    let violated = reports.iter().filter(|r| r.verdict == InequalityVerdict::Violated).count();
    let admissible_violations = reports.iter().filter(|r| must_hold_but_violated(r)).count();
    let min_slack = reports.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    Ok(Outcome {
        result: json!({
            "summary": {
                "functions": entries.len(),
                "checks": reports.len(),
                "violated": violated,
                "violated_admissible": admissible_violations,
                "min_slack": if min_slack.is_finite() { Some(min_slack) } else { None },
            },
            "reports": reports,
        }),
        table,
        admissible_violation: admissible_violations > 0,
    })
}
