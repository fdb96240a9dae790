//! Optimal k-piecewise-constant L¹ fits, the hard block curve, and the
//! lower-bound experiment built from them.
//!
//! Fits are computed on the run-length compression of `f`: moving a breakpoint
//! inside a constant run changes the L¹ cost linearly, so some optimal fit
//! breaks only at run boundaries, in both level modes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::neumaier_sum;
use crate::error::{Error, Result};

/// `f(1)..f(n)`, all finite and ≥ 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCurve {
    values: Vec<f64>,
}

impl DiscreteCurve {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch("curve is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::DimensionMismatch(format!("curve value {v} is not finite and ≥ 0")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Maximal constant runs as `(start, len, value)`, 0-based starts.
    pub fn runs(&self) -> Vec<(usize, usize, f64)> {
        let mut runs: Vec<(usize, usize, f64)> = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            match runs.last_mut() {
                Some((_, len, value)) if *value == v => *len += 1,
                _ => runs.push((i, 1, v)),
            }
        }
        runs
    }
}

/// How the level of each piece is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelMode {
    /// Any level; the L¹-optimal one is a weighted median of the piece.
    #[default]
    Free,
    /// The value at the piece's first position (left Riemann steps).
    LeftEndpoint,
}

/// Piece `a` covers positions `breakpoints[a] ..= breakpoints[a+1] − 1`
/// (1-based) at height `levels[a]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseFit {
    pub breakpoints: Vec<usize>,
    pub levels: Vec<f64>,
    pub error: f64,
}

impl PiecewiseFit {
    pub fn pieces(&self) -> usize {
        self.levels.len()
    }

    /// `h(1)..h(n)`.
    pub fn evaluate(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        for (a, &level) in self.levels.iter().enumerate() {
            let end = self.breakpoints.get(a + 1).map_or(n + 1, |&b| b);
            out.extend(std::iter::repeat(level).take(end - self.breakpoints[a]));
        }
        out
    }

    /// `Σ_x |f(x) − h(x)|` recomputed from the fields.
    pub fn l1_error(&self, f: &DiscreteCurve) -> f64 {
        neumaier_sum(
            f.values
                .iter()
                .zip(self.evaluate(f.n()))
                .map(|(a, b)| (a - b).abs()),
        )
    }
}

/// Prefix weights and weighted sums over value ranks.
struct Fenwick {
    weight: Vec<f64>,
    mass: Vec<f64>,
}

impl Fenwick {
    fn new(len: usize) -> Self {
        Self { weight: vec![0.0; len + 1], mass: vec![0.0; len + 1] }
    }

    fn add(&mut self, rank: usize, w: f64, v: f64) {
        let mut i = rank + 1;
        while i < self.weight.len() {
            self.weight[i] += w;
            self.mass[i] += w * v;
            i += i & i.wrapping_neg();
        }
    }

    /// `(Σ w, Σ w·v)` over ranks `0..=rank`.
    fn prefix(&self, rank: usize) -> (f64, f64) {
        let (mut w, mut m) = (0.0, 0.0);
        let mut i = rank + 1;
        while i > 0 {
            w += self.weight[i];
            m += self.mass[i];
            i &= i - 1;
        }
        (w, m)
    }

    /// Smallest rank whose prefix weight reaches `target`.
    fn lower_bound(&self, target: f64) -> usize {
        let len = self.weight.len() - 1;
        let mut pos = 0;
        let mut acc = 0.0;
        let mut step = len.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= len && acc + self.weight[next] < target {
                pos = next;
                acc += self.weight[next];
            }
            step >>= 1;
        }
        pos.min(len - 1)
    }
}

/// `cost[a][b]` and `level[a][b]` for the piece made of runs `a..b`.
fn piece_tables(runs: &[(usize, usize, f64)], mode: LevelMode) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let r = runs.len();
    let mut cost = vec![vec![0.0; r + 1]; r];
    let mut level = vec![vec![0.0; r + 1]; r];
    match mode {
        LevelMode::LeftEndpoint => {
            for a in 0..r {
                let base = runs[a].2;
                let mut acc = 0.0;
                for b in a + 1..=r {
                    let (_, len, v) = runs[b - 1];
                    acc += len as f64 * (v - base).abs();
                    cost[a][b] = acc;
                    level[a][b] = base;
                }
            }
        }
        LevelMode::Free => {
            let mut sorted: Vec<f64> = runs.iter().map(|run| run.2).collect();
            sorted.sort_by(f64::total_cmp);
            sorted.dedup();
            let rank = |v: f64| sorted.partition_point(|&s| s < v);
            for a in 0..r {
                let mut tree = Fenwick::new(sorted.len());
                let (mut total_w, mut total_m) = (0.0, 0.0);
                for b in a + 1..=r {
                    let (_, len, v) = runs[b - 1];
                    let w = len as f64;
                    tree.add(rank(v), w, v);
                    total_w += w;
                    total_m += w * v;
                    // weighted lower median
                    let m = tree.lower_bound(total_w / 2.0);
                    let med = sorted[m];
                    let (w_le, m_le) = tree.prefix(m);
                    let c = med * w_le - m_le + (total_m - m_le) - med * (total_w - w_le);
                    cost[a][b] = c.max(0.0);
                    level[a][b] = med;
                }
            }
        }
    }
    (cost, level)
}

fn near_min(value: f64, best: f64) -> bool {
    value <= best + 1e-12 * best.abs().max(1.0)
}

/// Exact L¹-optimal fit with at most `k` pieces. Among optimal fits the one
/// with fewest pieces is returned, ties then going to the smallest breakpoint
/// vector.
pub fn best_k_piecewise(f: &DiscreteCurve, k: usize, mode: LevelMode) -> Result<PiecewiseFit> {
    if k == 0 {
        return Err(Error::InvalidSchedule("k must be ≥ 1".into()));
    }
    let runs = f.runs();
    let r = runs.len();
    let (cost, level) = piece_tables(&runs, mode);
    let kmax = k.min(r);
    // best[t][a]: runs a..r with exactly t pieces
    let mut best = vec![vec![f64::INFINITY; r + 1]; kmax + 1];
    for a in 0..r {
        best[1][a] = cost[a][r];
    }
    for t in 2..=kmax {
        for a in 0..=r - t {
            best[t][a] = (a + 1..=r + 1 - t)
                .map(|b| cost[a][b] + best[t - 1][b])
                .fold(f64::INFINITY, f64::min);
        }
    }
    let overall = (1..=kmax).map(|t| best[t][0]).fold(f64::INFINITY, f64::min);
    let pieces = (1..=kmax)
        .find(|&t| near_min(best[t][0], overall))
        .expect("some piece count attains the minimum");

    let mut breakpoints = Vec::with_capacity(pieces);
    let mut levels = Vec::with_capacity(pieces);
    let mut a = 0;
    for t in (1..=pieces).rev() {
        let b = if t == 1 {
            r
        } else {
            (a + 1..=r + 1 - t)
                .find(|&b| near_min(cost[a][b] + best[t - 1][b], best[t][a]))
                .expect("minimizer exists")
        };
        breakpoints.push(runs[a].0 + 1);
        levels.push(level[a][b]);
        a = b;
    }
    let mut fit = PiecewiseFit { breakpoints, levels, error: 0.0 };
    fit.error = fit.l1_error(f);
    Ok(fit)
}

/// One block `B_i = {lo..=hi}` (1-based) of the hard curve at height `level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardBlock {
    pub i: usize,
    pub lo: usize,
    pub hi: usize,
    pub level: f64,
}

impl HardBlock {
    /// With `ε < 1` the leading blocks hold no integer.
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardCurve {
    pub n: usize,
    pub eps: f64,
    pub curve: DiscreteCurve,
    /// Every block `i = 0..=m`, empty ones included.
    pub blocks: Vec<HardBlock>,
    /// Whether `(2/n)·ln(2/ε) ≤ ε ≤ 1/ln n` holds.
    pub in_hard_regime: bool,
}

/// Block-constant curve with `f(x) = ¼·(1+ε)^{−i}/ln n` on
/// `B_i = {⌊(1+ε)^i⌋, .., min(⌊(1+ε)^{i+1}⌋ − 1, n)}`, for
/// `i = 0..=⌈ln(n+1)/ln(1+ε) − 1⌉`. Logs are natural.
pub fn hard_curve(n: usize, eps: f64) -> Result<HardCurve> {
    if n < 2 {
        return Err(Error::InvalidTolerance(format!("n = {n} must be ≥ 2")));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidTolerance(format!("eps = {eps} must be > 0")));
    }
    let ln_n = (n as f64).ln();
    let growth = 1.0 + eps;
    let m = ((((n + 1) as f64).ln() / growth.ln()) - 1.0).ceil().max(0.0) as usize;
    let mut values = vec![0.0; n];
    let mut blocks = Vec::new();
    for i in 0..=m {
        let lo = (growth.powi(i as i32).floor() as usize).max(1);
        let hi = ((growth.powi(i as i32 + 1).floor() as usize).saturating_sub(1)).min(n);
        let level = 0.25 * growth.powi(-(i as i32)) / ln_n;
        if lo <= hi {
            values[lo - 1..hi].iter_mut().for_each(|v| *v = level);
        }
        blocks.push(HardBlock { i, lo, hi, level });
    }
    let in_hard_regime = 2.0 / n as f64 * (2.0 / eps).ln() <= eps && eps <= 1.0 / ln_n;
    Ok(HardCurve { n, eps, curve: DiscreteCurve::new(values)?, blocks, in_hard_regime })
}

/// How the experiment picks ε for each `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsRule {
    Fixed(f64),
    /// `ε = 1/ln n`.
    InverseLog,
}

impl EpsRule {
    pub fn eps(&self, n: usize) -> f64 {
        match *self {
            EpsRule::Fixed(e) => e,
            EpsRule::InverseLog => 1.0 / (n as f64).ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundRow {
    pub n: usize,
    pub eps: f64,
    pub k: usize,
    pub best_error: f64,
    pub ratio: f64,
    pub in_hard_regime: bool,
}

/// `k = max(1, ⌊c·ln n/ε⌋)`.
pub fn lower_bound_k(n: usize, eps: f64, c: f64) -> usize {
    ((c * (n as f64).ln() / eps).floor() as usize).max(1)
}

/// Best free-level `k`-piece fit of the hard curve for each `n`, with
/// `k = max(1, ⌊c·ln n/ε⌋)`; rows follow the order of `n_grid`.
pub fn lower_bound_experiment(n_grid: &[usize], eps: EpsRule, c: f64) -> Result<Vec<LowerBoundRow>> {
    if n_grid.is_empty() {
        return Err(Error::InvalidSpec("empty n grid".into()));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidTolerance(format!("c = {c} must be > 0")));
    }
    n_grid
        .par_iter()
        .map(|&n| {
            let e = eps.eps(n);
            let hard = hard_curve(n, e)?;
            let k = lower_bound_k(n, e, c);
            let fit = best_k_piecewise(&hard.curve, k, LevelMode::Free)?;
            Ok(LowerBoundRow {
                n,
                eps: e,
                k,
                best_error: fit.error,
                ratio: fit.error / e,
                in_hard_regime: hard.in_hard_regime,
            })
        })
        .collect()
}
