use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use unmask_core::info::{info_curve_from_entropy_unchecked, info_curve_stderr};
use unmask_core::schedule::{austin_round_bound, geometric_round_bound, sweep_levels};
use unmask_core::stepfit::LowerBoundRow;
use unmask_core::{
    austin_schedule, dtc_direct, dtc_schedule, entropy_bits, entropy_curve_exact,
    entropy_curve_mc, expected_kl_exact, expected_kl_mc, info_curve, info_curve_from_entropy,
    licai_bound, lower_bound_experiment, nodes_to_schedule, optimal_nodes_dp, riemann_error,
    tc_direct, tc_dtc_from_curve, tc_schedule, BoundSource, CurveMethod, EntropyCurve, EpsRule,
    GridBound, InfoCurve, JointPmf, McConfig, OracleModel, Schedule, SubsetSchedule,
};

use crate::io::{self, csv, finite, json, num, CurveFile};
use crate::{
    CurveArgs, Ctx, Format, Grid, HardcurveArgs, Method, Outcome, PlanArgs, SampleArgs,
    SimMethod, SimulateArgs, SweepArgs, Usage,
};

/// Slack for comparing a computed error against `ε`.
const EPS_SLACK: f64 = 1e-12;

pub fn entropy(ctx: &Ctx, args: &CurveArgs, p: &JointPmf) -> Result<EntropyCurve> {
    match args.method {
        Method::Exact => Ok(entropy_curve_exact(p).context("exact curve; try --method mc --samples M")?),
        Method::Mc => {
            let samples = args
                .samples
                .ok_or_else(|| Usage("--method mc needs --samples M".into()))?;
            Ok(entropy_curve_mc(p, &McConfig::new(samples, ctx.seed))?)
        }
    }
}

/// Exact curves are validated; Monte Carlo curves are reported as estimated.
pub fn curve_of(h: &EntropyCurve) -> Result<InfoCurve> {
    match h.method {
        CurveMethod::Exact => Ok(info_curve_from_entropy(h)?),
        CurveMethod::MonteCarlo => Ok(info_curve_from_entropy_unchecked(h)),
    }
}

pub fn curve(ctx: &Ctx, args: &CurveArgs) -> Result<Outcome> {
    let p = io::load(&args.dist)?;
    let h = entropy(ctx, args, &p)?;
    let z = curve_of(&h)?;
    let file = CurveFile {
        method: h.method,
        n: p.n(),
        z_bits: z.values().to_vec(),
        h_bits: h.values[1..].to_vec(),
        z_stderr: info_curve_stderr(&h).map(|se| se.into_iter().map(finite).collect()),
    };
    Ok(Outcome::ok(match ctx.format_or(Format::Csv) {
        Format::Csv => file.to_csv(),
        Format::Json => json(&file),
    }))
}

#[derive(Serialize)]
struct SummaryReport {
    n: usize,
    q: usize,
    method: CurveMethod,
    entropy_bits: f64,
    tc_bits: f64,
    dtc_bits: f64,
    z_n_bits: f64,
    tc_direct_bits: f64,
    dtc_direct_bits: f64,
}

pub fn summary(ctx: &Ctx, args: &CurveArgs) -> Result<Outcome> {
    let p = io::load(&args.dist)?;
    let h = entropy(ctx, args, &p)?;
    let s = tc_dtc_from_curve(&curve_of(&h)?);
    let r = SummaryReport {
        n: p.n(),
        q: p.q(),
        method: h.method,
        entropy_bits: entropy_bits(&p),
        tc_bits: s.tc,
        dtc_bits: s.dtc,
        z_n_bits: s.z_n,
        tc_direct_bits: tc_direct(&p)?,
        dtc_direct_bits: dtc_direct(&p)?,
    };
    Ok(Outcome::ok(match ctx.format_or(Format::Json) {
        Format::Json => json(&r),
        Format::Csv => csv(
            "n,q,entropy_bits,tc_bits,dtc_bits,z_n_bits,tc_direct_bits,dtc_direct_bits",
            [vec![
                r.n.to_string(),
                r.q.to_string(),
                num(r.entropy_bits),
                num(r.tc_bits),
                num(r.dtc_bits),
                num(r.z_n_bits),
                num(r.tc_direct_bits),
                num(r.dtc_direct_bits),
            ]],
        ),
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlanReport {
    pub source: BoundSource,
    pub n: usize,
    pub k: usize,
    pub schedule: Schedule,
    /// 1-based Riemann nodes.
    pub nodes: Vec<usize>,
    /// `null` when no curve was given.
    pub predicted_kl_bits: Option<f64>,
    pub bound_licai: Option<f64>,
    /// Proven round count for the hat-based planners.
    pub round_bound: Option<f64>,
}

fn plan_schedule(args: &PlanArgs, curve: Option<&InfoCurve>) -> Result<(Schedule, BoundSource, Option<f64>)> {
    if let Some(k) = args.k {
        if args.tc_hat.is_some() || args.dtc_hat.is_some() || args.austin || args.eps.is_some() {
            return Err(Usage("--k plans from a curve and takes no estimates or --eps".into()).into());
        }
        let z = curve.ok_or_else(|| Usage("--k needs --curve".into()))?;
        if let Some(n) = args.n {
            if n != z.n() {
                return Err(Usage(format!("--n {n} but the curve has n = {}", z.n())).into());
            }
        }
        let (nodes, _) = optimal_nodes_dp(z, k)?;
        return Ok((nodes_to_schedule(&nodes, z.n())?, BoundSource::Dp, None));
    }
    let eps = args.eps.ok_or_else(|| Usage("estimate-based plans need --eps".into()))?;
    let n = match (args.n, curve) {
        (Some(n), Some(z)) if n != z.n() => {
            return Err(Usage(format!("--n {n} but the curve has n = {}", z.n())).into())
        }
        (Some(n), _) => n,
        (None, Some(z)) => z.n(),
        (None, None) => return Err(Usage("give --n or --curve".into()).into()),
    };
    match (args.tc_hat, args.dtc_hat, args.austin) {
        (Some(t), None, false) => {
            Ok((tc_schedule(t, eps, n)?, BoundSource::Tc, Some(geometric_round_bound(t, eps, n))))
        }
        (None, Some(d), false) => {
            Ok((dtc_schedule(d, eps, n)?, BoundSource::Dtc, Some(geometric_round_bound(d, eps, n))))
        }
        (None, Some(d), true) => {
            Ok((austin_schedule(d, eps, n)?, BoundSource::Austin, Some(austin_round_bound(d, eps, n))))
        }
        (None, None, true) => Err(Usage("--austin needs --dtc-hat".into()).into()),
        (None, None, false) => Err(Usage("give --k, --tc-hat, --dtc-hat or --austin".into()).into()),
        _ => Err(Usage("--tc-hat conflicts with --dtc-hat and --austin".into()).into()),
    }
}

pub fn plan(ctx: &Ctx, args: &PlanArgs) -> Result<Outcome> {
    let curve = args.curve.as_deref().map(io::read_curve).transpose()?;
    let (schedule, source, round_bound) = plan_schedule(args, curve.as_ref())?;
    let n = schedule.n();
    let (predicted, bound) = match &curve {
        Some(z) => (
            Some(riemann_error(z, &schedule)?.max(0.0)),
            Some(licai_bound(&tc_dtc_from_curve(z), schedule.s_max(), n)),
        ),
        None => (None, None),
    };
    let r = PlanReport {
        source,
        n,
        k: schedule.k(),
        nodes: unmask_core::schedule_to_nodes(&schedule).nodes().to_vec(),
        schedule,
        predicted_kl_bits: predicted,
        bound_licai: bound,
        round_bound,
    };
    Ok(Outcome::ok(match ctx.format_or(Format::Json) {
        Format::Json => json(&r),
        Format::Csv => csv(
            "round,size,node",
            r.schedule
                .steps()
                .iter()
                .zip(&r.nodes)
                .enumerate()
                .map(|(i, (s, a))| vec![(i + 1).to_string(), s.to_string(), a.to_string()]),
        ),
    }))
}

#[derive(Serialize)]
struct SimulateReport {
    n: usize,
    k: usize,
    schedule: Schedule,
    method: &'static str,
    expected_kl_bits: f64,
    stderr: Option<f64>,
    trials: Option<usize>,
    formula_kl_bits: Option<f64>,
    identity_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<Vec<usize>>>,
}

pub fn simulate(ctx: &Ctx, args: &SimulateArgs) -> Result<Outcome> {
    let p = io::load(&args.dist)?;
    let s = io::schedule_arg(&args.schedule)?
        .ok_or_else(|| Usage("simulate needs --schedule or --steps".into()))?;
    if s.n() != p.n() {
        return Err(Usage(format!("schedule covers {} positions, distribution has n = {}", s.n(), p.n())).into());
    }
    let formula = match info_curve(&p) {
        Ok(z) => Some(riemann_error(&z, &s)?),
        Err(e) if e.is_infeasible() => None,
        Err(e) => return Err(e.into()),
    };
    let mc = |trials| -> Result<(f64, Option<f64>, Option<usize>, &'static str)> {
        let est = expected_kl_mc(&p, &s, trials, ctx.seed, true)?;
        Ok((est.estimate, finite(est.stderr), Some(est.trials), "mc"))
    };
    let (kl, stderr, trials, method) = match args.method {
        SimMethod::Exact => (expected_kl_exact(&p, &s)?, Some(0.0), None, "exact"),
        SimMethod::Mc => mc(args.trials)?,
        SimMethod::Auto => match expected_kl_exact(&p, &s) {
            Ok(v) => (v, Some(0.0), None, "exact"),
            Err(e) if e.is_infeasible() => mc(args.trials)?,
            Err(e) => return Err(e.into()),
        },
    };
    let mut samples = match args.samples {
        Some(m) => Some(unmask_core::sampler::sample_random_many(&p, &s, OracleModel::Exact, ctx.seed, m)?),
        None => None,
    };
    if samples.is_some() && args.samples_out.is_none() && ctx.format_or(Format::Json) == Format::Csv {
        return Err(Usage("CSV reports need --samples-out for the drawn sequences".into()).into());
    }
    if let (Some(path), Some(draws)) = (&args.samples_out, &samples) {
        io::emit(Some(path), &io::tuple_lines(draws))?;
        samples = None;
    }
    let r = SimulateReport {
        n: p.n(),
        k: s.k(),
        schedule: s,
        method,
        expected_kl_bits: kl,
        stderr,
        trials,
        formula_kl_bits: formula,
        identity_gap: formula.map(|f| (f - kl).abs()),
        samples,
    };
    Ok(Outcome::ok(match ctx.format_or(Format::Json) {
        Format::Json => json(&r),
        Format::Csv => {
            let opt = |x: Option<f64>| x.map_or_else(String::new, num);
            csv(
                "field,value",
                [
                    ("method", r.method.to_string()),
                    ("expected_kl_bits", num(r.expected_kl_bits)),
                    ("stderr", opt(r.stderr)),
                    ("formula_kl_bits", opt(r.formula_kl_bits)),
                    ("identity_gap", opt(r.identity_gap)),
                ]
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v]),
            )
        }
    }))
}

#[derive(Serialize)]
struct SampleReport {
    samples: Vec<Vec<usize>>,
}

pub fn sample(ctx: &Ctx, args: &SampleArgs) -> Result<Outcome> {
    let p = io::load(&args.dist)?;
    let oracle = match args.eta {
        Some(eta) => OracleModel::smoothed(eta)?,
        None => OracleModel::Exact,
    };
    let samples = match &args.blocks {
        Some(text) => {
            let ss = SubsetSchedule::new(io::parse_blocks(text)?, p.n())?;
            unmask_core::sampler::sample_fixed_many(&p, &ss, oracle, ctx.seed, args.draws)?
        }
        None => {
            let s = io::schedule_arg(&args.schedule)?
                .ok_or_else(|| Usage("sample needs --blocks, --schedule or --steps".into()))?;
            unmask_core::sampler::sample_random_many(&p, &s, oracle, ctx.seed, args.draws)?
        }
    };
    Ok(Outcome::ok(match ctx.format_or(Format::Csv) {
        Format::Csv => io::tuple_lines(&samples),
        Format::Json => json(&SampleReport { samples }),
    }))
}

#[derive(Debug, Clone, Serialize)]
struct Candidate {
    source: BoundSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    hat: Option<f64>,
    schedule: Schedule,
    k: usize,
    error_bits: f64,
    feasible: bool,
}

#[derive(Serialize)]
struct PairRow {
    tc_hat: f64,
    dtc_hat: f64,
    tc_k: usize,
    tc_error_bits: f64,
    dtc_k: usize,
    dtc_error_bits: f64,
}

#[derive(Serialize)]
struct Guarantee {
    /// Smallest grid levels at or above the true TC and DTC.
    tc_hat: f64,
    dtc_hat: f64,
    /// Each chosen level is at most twice the true value (or the lowest level).
    within_factor_two: bool,
    tc_k: usize,
    tc_error_bits: f64,
    dtc_k: usize,
    dtc_error_bits: f64,
    round_bound_tc: f64,
    round_bound_dtc: f64,
    holds: bool,
}

#[derive(Serialize)]
struct SweepReport {
    n: usize,
    q: usize,
    eps: f64,
    grid: GridBound,
    tc_bits: f64,
    dtc_bits: f64,
    levels: Vec<f64>,
    best: Candidate,
    guarantee: Guarantee,
    pairs: Vec<PairRow>,
}

fn candidate(z: &InfoCurve, eps: f64, source: BoundSource, hat: Option<f64>, schedule: Schedule) -> Result<Candidate> {
    let error_bits = riemann_error(z, &schedule)?.max(0.0);
    Ok(Candidate {
        source,
        hat,
        k: schedule.k(),
        schedule,
        error_bits,
        feasible: error_bits <= eps + EPS_SLACK,
    })
}

pub fn sweep(ctx: &Ctx, args: &SweepArgs) -> Result<Outcome> {
    let eps = args.eps;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(unmask_core::Error::InvalidTolerance(format!("eps = {eps} must be > 0")).into());
    }
    let p = io::load(&args.dist)?;
    let (n, q) = (p.n(), p.q());
    let z = info_curve(&p)?;
    let s = tc_dtc_from_curve(&z);
    let grid = match args.grid {
        Grid::Power => GridBound::PowerAtLeastEps,
        Grid::Exponent => GridBound::ExponentAtLeastEps,
    };
    let levels = sweep_levels(n, q, eps, grid);
    let tc: Vec<Candidate> = levels
        .iter()
        .map(|&t| candidate(&z, eps, BoundSource::Tc, Some(t), tc_schedule(t, eps, n)?))
        .collect::<Result<_>>()?;
    let dtc: Vec<Candidate> = levels
        .iter()
        .map(|&d| candidate(&z, eps, BoundSource::Dtc, Some(d), dtc_schedule(d, eps, n)?))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    let mut pool = vec![
        candidate(&z, eps, BoundSource::OneShot, None, Schedule::one_shot(n))?,
        candidate(&z, eps, BoundSource::Singles, None, Schedule::singles(n))?,
    ];
    for (t, ct) in levels.iter().zip(&tc) {
        for (d, cd) in levels.iter().zip(&dtc) {
            pairs.push(PairRow {
                tc_hat: *t,
                dtc_hat: *d,
                tc_k: ct.k,
                tc_error_bits: ct.error_bits,
                dtc_k: cd.k,
                dtc_error_bits: cd.error_bits,
            });
        }
        pool.push(ct.clone());
    }
    pool.extend(dtc.iter().cloned());
    // first of the fewest-round feasible plans, ties broken by smaller error
    let best = pool
        .iter()
        .filter(|c| c.feasible)
        .fold(None::<&Candidate>, |acc, c| match acc {
            Some(b) if (b.k, b.error_bits) <= (c.k, c.error_bits) => Some(b),
            _ => Some(c),
        })
        .expect("singles always reach error 0")
        .clone();

    let pick = |truth: f64| {
        let i = levels.iter().position(|&l| l >= truth - EPS_SLACK).unwrap_or(levels.len() - 1);
        (i, levels[i] <= (2.0 * truth).max(levels[0]) + EPS_SLACK)
    };
    let (ti, t_ok) = pick(s.tc);
    let (di, d_ok) = pick(s.dtc);
    let (ct, cd) = (&tc[ti], &dtc[di]);
    let (bt, bd) = (geometric_round_bound(levels[ti], eps, n), geometric_round_bound(levels[di], eps, n));
    let guarantee = Guarantee {
        tc_hat: levels[ti],
        dtc_hat: levels[di],
        within_factor_two: t_ok && d_ok,
        tc_k: ct.k,
        tc_error_bits: ct.error_bits,
        dtc_k: cd.k,
        dtc_error_bits: cd.error_bits,
        round_bound_tc: bt,
        round_bound_dtc: bd,
        holds: ct.feasible && cd.feasible && ct.k as f64 <= bt && cd.k as f64 <= bd,
    };
    let r = SweepReport { n, q, eps, grid, tc_bits: s.tc, dtc_bits: s.dtc, levels, best, guarantee, pairs };
    Ok(Outcome::ok(match ctx.format_or(Format::Json) {
        Format::Json => json(&r),
        Format::Csv => csv(
            "tc_hat,dtc_hat,tc_k,tc_error_bits,dtc_k,dtc_error_bits",
            r.pairs.iter().map(|p| {
                vec![
                    num(p.tc_hat),
                    num(p.dtc_hat),
                    p.tc_k.to_string(),
                    num(p.tc_error_bits),
                    p.dtc_k.to_string(),
                    num(p.dtc_error_bits),
                ]
            }),
        ),
    }))
}

fn eps_rule(text: &str) -> Result<EpsRule> {
    match text {
        "inverse-log" | "inv-log" => Ok(EpsRule::InverseLog),
        _ => text
            .parse::<f64>()
            .map(EpsRule::Fixed)
            .map_err(|_| Usage(format!("--eps {text:?} is neither a number nor inverse-log")).into()),
    }
}

pub fn hardcurve(ctx: &Ctx, args: &HardcurveArgs) -> Result<Outcome> {
    let rows: Vec<LowerBoundRow> = lower_bound_experiment(&args.n_grid, eps_rule(&args.eps)?, args.c)?;
    Ok(Outcome::ok(match ctx.format_or(Format::Csv) {
        Format::Csv => csv(
            "n,eps,k,best_error,ratio",
            rows.iter().map(|r| {
                vec![r.n.to_string(), num(r.eps), r.k.to_string(), num(r.best_error), num(r.ratio)]
            }),
        ),
        Format::Json => json(&rows),
    }))
}
