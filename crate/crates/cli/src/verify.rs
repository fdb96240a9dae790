//! The identity battery behind `unmask verify`.

use anyhow::Result;
use serde::Serialize;
use unmask_core::combinatorics::compositions;
use unmask_core::info::{info_curve_stderr, HAN_TOL};
use unmask_core::{
    decoupling_check, dtc_direct, expected_kl_exact, kl_bits, licai_bound, mixture_output_dist,
    riemann_error, tc_direct, tc_dtc_from_curve, CurveMethod, JointPmf, Schedule, SubsetSchedule,
};

use crate::commands::{curve_of, entropy};
use crate::io::{self, csv, finite, json, num};
use crate::{Ctx, Format, Outcome, VerifyArgs};

const IDENTITY_TOL: f64 = 1e-8;
const DOMINANCE_TOL: f64 = 1e-10;
const CONVEXITY_TOL: f64 = 1e-10;
const DECOUPLING_TOL: f64 = 1e-9;
/// Exhaustive schedule sweep for the dominance check.
const MAX_DOMINANCE_N: usize = 10;
/// Exhaustive partition sweep for the KL checks.
const MAX_KL_N: usize = 6;
const MAX_KL_TABLE: usize = 1 << 16;

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    value: Option<f64>,
    tolerance: Option<f64>,
    detail: String,
}

impl Check {
    /// Passes when `value ≤ tolerance` (NaN fails).
    fn at_most(name: &'static str, value: f64, tolerance: f64, detail: String) -> Self {
        Self { name, passed: value <= tolerance, value: finite(value), tolerance: finite(tolerance), detail }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        Self { name, passed: true, value: None, tolerance: None, detail: format!("skipped: {why}") }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    q: usize,
    method: CurveMethod,
    passed: bool,
    checks: Vec<Check>,
}

fn kl_checks(p: &JointPmf, z: &unmask_core::InfoCurve, exact: bool) -> Result<Vec<Check>> {
    let n = p.n();
    let why = if !exact {
        Some("needs the exact curve".to_string())
    } else if n > MAX_KL_N || p.len() > MAX_KL_TABLE {
        Some(format!("needs n ≤ {MAX_KL_N} and q^n ≤ {MAX_KL_TABLE}"))
    } else {
        None
    };
    if let Some(why) = why {
        return Ok(vec![Check::skipped("kl_identity", &why), Check::skipped("convexity", &why)]);
    }
    let mut gap: f64 = 0.0;
    let mut excess = f64::NEG_INFINITY;
    let mut strict = 0;
    let all = compositions(n);
    for steps in &all {
        let s = Schedule::new(steps.clone())?;
        let avg = expected_kl_exact(p, &s)?;
        gap = gap.max((avg - riemann_error(z, &s)?).abs());
        let mix = kl_bits(p, &mixture_output_dist(p, &s)?)?;
        excess = excess.max(mix - avg);
        if mix < avg - CONVEXITY_TOL {
            strict += 1;
        }
    }
    Ok(vec![
        Check::at_most("kl_identity", gap, IDENTITY_TOL, format!("{} schedules", all.len())),
        Check::at_most(
            "convexity",
            excess,
            CONVEXITY_TOL,
            format!("{} schedules; strict on {strict}", all.len()),
        ),
    ])
}

pub fn run(ctx: &Ctx, args: &VerifyArgs) -> Result<Outcome> {
    let p = io::load(&args.curve.dist)?;
    let (n, q) = (p.n(), p.q());
    let h = entropy(ctx, &args.curve, &p)?;
    let exact = h.method == CurveMethod::Exact;
    let z = curve_of(&h)?;
    let zv = z.values();
    let s = tc_dtc_from_curve(&z);
    let mut checks = Vec::new();

    // estimated curves get room for their sampling error
    let (tc_tol, dtc_tol) = match info_curve_stderr(&h) {
        Some(se) => {
            let sum: f64 = se.iter().sum();
            (IDENTITY_TOL + 4.0 * sum, IDENTITY_TOL + 4.0 * (sum + n as f64 * se[n - 1]))
        }
        None => (IDENTITY_TOL, IDENTITY_TOL),
    };
    checks.push(Check::at_most(
        "tc_dtc_identity",
        (s.tc + s.dtc - n as f64 * s.z_n).abs(),
        IDENTITY_TOL,
        "|TC + DTC − n·Z_n|".into(),
    ));
    let tcd = tc_direct(&p)?;
    checks.push(Check::at_most("tc_direct", (s.tc - tcd).abs(), tc_tol, format!("direct TC = {tcd}")));
    let dtcd = dtc_direct(&p)?;
    checks.push(Check::at_most("dtc_direct", (s.dtc - dtcd).abs(), dtc_tol, format!("direct DTC = {dtcd}")));

    let worst = zv
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(zv[0].abs(), f64::max);
    checks.push(Check::at_most("han_monotonicity", worst, HAN_TOL, "worst drop of Z (and |Z_1|)".into()));

    if n <= MAX_DOMINANCE_N {
        let all = compositions(n);
        let mut slack = f64::INFINITY;
        for steps in &all {
            let sch = Schedule::new(steps.clone())?;
            slack = slack.min(licai_bound(&s, sch.s_max(), n) - riemann_error(&z, &sch)?);
        }
        checks.push(Check::at_most(
            "licai_dominance",
            -slack,
            DOMINANCE_TOL,
            format!("min slack {slack} over {} schedules", all.len()),
        ));
    } else {
        checks.push(Check::skipped("licai_dominance", &format!("n > {MAX_DOMINANCE_N}")));
    }

    checks.extend(kl_checks(&p, &z, exact)?);

    let half = n.div_ceil(2);
    let steps = if n == half { vec![n] } else { vec![half, n - half] };
    let order: Vec<usize> = (0..n).collect();
    let ss = SubsetSchedule::from_order(&order, &Schedule::new(steps)?)?;
    let d = decoupling_check(&p, &ss, args.eta)?;
    checks.push(Check::at_most("decoupling", d.gap, DECOUPLING_TOL, format!("eta = {}", args.eta)));

    let passed = checks.iter().all(|c| c.passed);
    let r = VerifyReport { n, q, method: h.method, passed, checks };
    let text = match ctx.format_or(Format::Json) {
        Format::Json => json(&r),
        Format::Csv => {
            let opt = |x: Option<f64>| x.map_or_else(String::new, num);
            csv(
                "name,passed,value,tolerance,detail",
                r.checks.iter().map(|c| {
                    vec![
                        c.name.to_string(),
                        c.passed.to_string(),
                        opt(c.value),
                        opt(c.tolerance),
                        c.detail.replace(',', ";"),
                    ]
                }),
            )
        }
    };
    for c in r.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAILED {}: value {:?} tolerance {:?} ({})", c.name, c.value, c.tolerance, c.detail);
    }
    Ok(Outcome { text, code: u8::from(!passed) })
}
