//! Unmasking schedules and the exact expected-KL functional.
//!
//! A schedule `s_1..s_k` reveals `s_t` positions in round `t`. Its Riemann
//! nodes are `N_a = 1 + Σ_{t<a} s_t` (1-based, `N_1 = 1`). The expected KL
//! error of the random unmasking sampler equals the L¹ gap between the
//! information curve and its left Riemann step approximation on those nodes:
//!
//! ```text
//! Σ_a Σ_{j=0}^{s_a−1} (Z_{N_a + j} − Z_{N_a})
//! ```
//!
//! The last node may equal `n` (a final block of size one).

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::dist::neumaier_sum;
use crate::error::{Error, Result};
use crate::info::{CorrelationSummary, InfoCurve};

/// Step sizes of an unmasking schedule; every step ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSchedule")]
pub struct Schedule {
    steps: Vec<usize>,
}

#[derive(Deserialize)]
struct RawSchedule {
    steps: Vec<usize>,
}

impl TryFrom<RawSchedule> for Schedule {
    type Error = Error;

    fn try_from(raw: RawSchedule) -> Result<Self> {
        Schedule::new(raw.steps)
    }
}

impl Schedule {
    pub fn new(steps: Vec<usize>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidSchedule("schedule has no steps".into()));
        }
        if steps.contains(&0) {
            return Err(Error::InvalidSchedule(format!("zero-size step in {steps:?}")));
        }
        Ok(Self { steps })
    }

    /// `n` rounds of one position each.
    pub fn singles(n: usize) -> Self {
        Self { steps: vec![1; n] }
    }

    /// Everything in a single round.
    pub fn one_shot(n: usize) -> Self {
        Self { steps: vec![n] }
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn n(&self) -> usize {
        self.steps.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.steps.len()
    }

    pub fn s_max(&self) -> usize {
        self.steps.iter().copied().max().unwrap_or(0)
    }

    /// Drops zero steps, as produced by the geometric recursions.
    fn from_raw_steps(steps: Vec<usize>) -> Self {
        Self {
            steps: steps.into_iter().filter(|&s| s > 0).collect(),
        }
    }
}

/// Riemann nodes `1 = N_1 < .. < N_k ≤ n` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeVector {
    nodes: Vec<usize>,
}

impl NodeVector {
    pub fn new(nodes: Vec<usize>, n: usize) -> Result<Self> {
        if nodes.first() != Some(&1) {
            return Err(Error::NonMonotoneNodes(format!("{nodes:?} must start at 1")));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonMonotoneNodes(format!("{nodes:?} is not strictly increasing")));
        }
        if *nodes.last().expect("non-empty") > n {
            return Err(Error::NonMonotoneNodes(format!("{nodes:?} exceeds n = {n}")));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn k(&self) -> usize {
        self.nodes.len()
    }
}

pub fn schedule_to_nodes(s: &Schedule) -> NodeVector {
    let mut nodes = Vec::with_capacity(s.k());
    let mut next = 1;
    for &step in s.steps() {
        nodes.push(next);
        next += step;
    }
    NodeVector { nodes }
}

/// Inverse of [`schedule_to_nodes`]; the last step is `n + 1 − N_k`.
pub fn nodes_to_schedule(nodes: &NodeVector, n: usize) -> Result<Schedule> {
    let nodes = NodeVector::new(nodes.nodes.clone(), n)?;
    let mut steps: Vec<usize> = nodes.nodes.windows(2).map(|w| w[1] - w[0]).collect();
    steps.push(n + 1 - nodes.nodes.last().expect("non-empty"));
    Schedule::new(steps)
}

fn check_len(z: &InfoCurve, n: usize) -> Result<()> {
    if z.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "curve has n = {}, schedule covers {n}",
            z.n()
        )));
    }
    Ok(())
}

/// Expected KL error of `s` on a distribution with information curve `z`.
pub fn riemann_error(z: &InfoCurve, s: &Schedule) -> Result<f64> {
    check_len(z, s.n())?;
    let values = z.values();
    let mut start = 0;
    let mut terms = Vec::with_capacity(values.len());
    for &step in s.steps() {
        let base = values[start];
        terms.extend(values[start..start + step].iter().map(|v| v - base));
        start += step;
    }
    Ok(neumaier_sum(terms))
}

/// The left Riemann step sequence `Z^N_1..Z^N_n`.
pub fn left_riemann_seq(z: &InfoCurve, nodes: &NodeVector) -> Result<Vec<f64>> {
    let n = z.n();
    let nodes = NodeVector::new(nodes.nodes.clone(), n)?;
    let mut out = Vec::with_capacity(n);
    let mut a = 0;
    for j in 1..=n {
        while a + 1 < nodes.k() && nodes.nodes[a + 1] <= j {
            a += 1;
        }
        out.push(z.z(nodes.nodes[a]));
    }
    Ok(out)
}

/// `Σ_j |a_j − b_j|`.
pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    neumaier_sum(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

fn near_min(value: f64, best: f64) -> bool {
    value <= best + 1e-12 * best.abs().max(1.0)
}

/// Best `k`-node left Riemann approximation of `z` in O(n²k). Ties go to the
/// lexicographically smallest node vector.
pub fn optimal_nodes_dp(z: &InfoCurve, k: usize) -> Result<(NodeVector, f64)> {
    let n = z.n();
    if k == 0 || k > n {
        return Err(Error::InvalidSchedule(format!("k = {k} is outside 1..={n}")));
    }
    let values = z.values();
    let mut prefix = vec![0.0; n + 1];
    for j in 0..n {
        prefix[j + 1] = prefix[j] + values[j];
    }
    // block [a, b) in 0-based positions
    let cost = |a: usize, b: usize| prefix[b] - prefix[a] - (b - a) as f64 * values[a];

    // best[t][a]: cover [a, n) with exactly t blocks, the first starting at a
    let mut best = vec![vec![f64::INFINITY; n + 1]; k + 1];
    for a in 0..n {
        best[1][a] = cost(a, n);
    }
    for t in 2..=k {
        for a in 0..=n - t {
            let mut m = f64::INFINITY;
            for b in a + 1..=n - t + 1 {
                let v = cost(a, b) + best[t - 1][b];
                if v < m {
                    m = v;
                }
            }
            best[t][a] = m;
        }
    }

    let mut nodes = Vec::with_capacity(k);
    let mut a = 0;
    for t in (1..=k).rev() {
        nodes.push(a + 1);
        if t == 1 {
            break;
        }
        let target = best[t][a];
        a = (a + 1..=n - t + 1)
            .find(|&b| near_min(cost(a, b) + best[t - 1][b], target))
            .expect("minimizer exists");
    }
    let nodes = NodeVector { nodes };
    // re-evaluate directly; the prefix-sum costs carry cancellation noise
    let error = riemann_error(z, &nodes_to_schedule(&nodes, n)?)?;
    Ok((nodes, error))
}

fn check_hat(hat: f64, eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidTolerance(format!("eps = {eps} must be > 0")));
    }
    if !(hat.is_finite() && hat >= 0.0) {
        return Err(Error::InvalidTolerance(format!("estimate {hat} must be finite and ≥ 0")));
    }
    Ok(())
}

/// `ζ = 1 + ⌈hat / eps⌉`, or `None` when `ζ ≥ n + 1`.
fn zeta(hat: f64, eps: f64, n: usize) -> Option<usize> {
    let z = 1.0 + (hat / eps).ceil();
    if z >= (n + 1) as f64 {
        None
    } else {
        Some(z as usize)
    }
}

/// Length of the geometric phase:
/// `λ = ⌊log(n − ζ + 1) / log(1 / (1 − 1/ζ))⌋ + 2`, computed exactly.
fn geometric_rounds(zeta: usize, n: usize) -> usize {
    if zeta <= 1 {
        return 2;
    }
    let a = (n + 1 - zeta) as u64;
    // largest m with (ζ/(ζ−1))^m ≤ a, i.e. ζ^m ≤ a·(ζ−1)^m
    let fits = |m: u32| {
        BigUint::from(zeta).pow(m) <= BigUint::from(a) * BigUint::from(zeta - 1).pow(m)
    };
    let ratio = (zeta as f64 / (zeta as f64 - 1.0)).ln();
    let mut m = ((a as f64).ln() / ratio).floor().max(0.0) as u32;
    while m > 0 && !fits(m) {
        m -= 1;
    }
    while fits(m + 1) {
        m += 1;
    }
    m as usize + 2
}

/// Geometrically shrinking steps followed by unit steps; error ≤ `eps`
/// whenever `TC ≤ tc_hat`.
pub fn tc_schedule(tc_hat: f64, eps: f64, n: usize) -> Result<Schedule> {
    check_hat(tc_hat, eps)?;
    let Some(zeta) = zeta(tc_hat, eps, n) else {
        return Ok(Schedule::singles(n));
    };
    let lambda = geometric_rounds(zeta, n);
    let mut nodes = vec![0usize];
    for _ in 0..lambda {
        let prev = *nodes.last().expect("seeded");
        // ⌊N + (n − N)/ζ⌋
        nodes.push(prev + (n - prev) / zeta);
    }
    let mut last = *nodes.last().expect("seeded");
    while last < n {
        last += 1;
        nodes.push(last);
    }
    Ok(Schedule::from_raw_steps(
        nodes.windows(2).map(|w| w[1] - w[0]).collect(),
    ))
}

/// Unit steps followed by geometrically growing steps; error ≤ `eps`
/// whenever `DTC ≤ dtc_hat`.
pub fn dtc_schedule(dtc_hat: f64, eps: f64, n: usize) -> Result<Schedule> {
    check_hat(dtc_hat, eps)?;
    let Some(zeta) = zeta(dtc_hat, eps, n) else {
        return Ok(Schedule::singles(n));
    };
    let lambda = geometric_rounds(zeta, n);
    // remaining-mask counts N'_0 = n, N'_i = ⌈N'_{i−1}(1 − 1/ζ)⌉
    let mut remaining = vec![n];
    for _ in 0..lambda {
        let prev = *remaining.last().expect("seeded");
        remaining.push((prev * (zeta - 1)).div_ceil(zeta));
    }
    let mut last = *remaining.last().expect("seeded");
    while last > 0 {
        last -= 1;
        remaining.push(last);
    }
    // s_i = N'_{L−i} − N'_{L−i+1}, i.e. the differences read back to front
    let steps: Vec<usize> = remaining.windows(2).rev().map(|w| w[0] - w[1]).collect();
    Ok(Schedule::from_raw_steps(steps))
}

/// Unit steps on a prefix of `⌊√(DTĈ·n/ε)⌋` positions, then `⌈√(DTĈ·n/ε)⌉`
/// near-equal blocks (sizes differ by at most one, larger blocks last).
/// `dtc_hat = 0` gives the one-shot schedule.
pub fn austin_schedule(dtc_hat: f64, eps: f64, n: usize) -> Result<Schedule> {
    check_hat(dtc_hat, eps)?;
    if dtc_hat == 0.0 {
        return Ok(Schedule::one_shot(n));
    }
    // δ² = √(DTĈ·ε/n); DTĈ/δ² and δ²·n/ε both equal √(DTĈ·n/ε)
    let x = (dtc_hat * n as f64 / eps).sqrt();
    let prefix = (x.floor() as usize).min(n);
    let rest = n - prefix;
    if rest == 0 {
        return Ok(Schedule::singles(n));
    }
    let blocks = (x.ceil() as usize).clamp(1, rest);
    let base = rest / blocks;
    let extra = rest % blocks;
    let mut steps = vec![1; prefix];
    steps.extend((0..blocks).map(|b| if b >= blocks - extra { base + 1 } else { base }));
    Schedule::new(steps)
}

/// Round-count guarantee of [`tc_schedule`] / [`dtc_schedule`]:
/// `2 + (1 + ln n)(1 + ⌈hat/ε⌉)`.
pub fn geometric_round_bound(hat: f64, eps: f64, n: usize) -> f64 {
    2.0 + (1.0 + (n as f64).ln()) * (1.0 + (hat / eps).ceil())
}

/// Constant `C` in the round bound of [`austin_schedule`]: with
/// `x = √(DTĈ·n/ε)` the schedule has `⌊x⌋ + ⌈x⌉ ≤ 2x + 1` rounds, which is at
/// most `3x` once `x ≥ 1`, and a single round otherwise.
pub const AUSTIN_ROUND_CONSTANT: f64 = 3.0;

/// `max(1, C·√(DTĈ·n/ε))`.
pub fn austin_round_bound(dtc_hat: f64, eps: f64, n: usize) -> f64 {
    (AUSTIN_ROUND_CONSTANT * (dtc_hat * n as f64 / eps).sqrt()).max(1.0)
}

/// `(2^⌈log₂ s_max⌉ − 1)/n · (TC + DTC)`.
pub fn licai_bound(summary: &CorrelationSummary, s_max: usize, n: usize) -> f64 {
    let pow = s_max.max(1).next_power_of_two();
    (pow - 1) as f64 / n as f64 * (summary.tc + summary.dtc)
}

/// How the lower end of the sweep grid is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridBound {
    /// `2^i ≥ ε`.
    #[default]
    PowerAtLeastEps,
    /// `i ≥ ε`, the literal reading of the grid's index bound.
    ExponentAtLeastEps,
}

/// Powers of two from the lower bound up to the first power ≥ `n·log₂ q`.
pub fn sweep_levels(n: usize, q: usize, eps: f64, bound: GridBound) -> Vec<f64> {
    let top = n as f64 * (q as f64).log2();
    let hi = top.log2().ceil() as i32;
    let lo = match bound {
        GridBound::PowerAtLeastEps => eps.log2().ceil() as i32,
        GridBound::ExponentAtLeastEps => eps.ceil() as i32,
    };
    if lo > hi {
        return vec![2f64.powi(hi)];
    }
    (lo..=hi).map(|i| 2f64.powi(i)).collect()
}

/// Cross product of [`sweep_levels`] as `(tc_hat, dtc_hat)` pairs.
pub fn sweep_grid(n: usize, q: usize, eps: f64, bound: GridBound) -> Vec<(f64, f64)> {
    let levels = sweep_levels(n, q, eps, bound);
    levels
        .iter()
        .flat_map(|&t| levels.iter().map(move |&d| (t, d)))
        .collect()
}

/// Where a schedule came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Dp,
    Tc,
    Dtc,
    Austin,
    Singles,
    OneShot,
    Custom,
}

/// A planned schedule with its predicted error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub schedule: Schedule,
    pub predicted_kl_bits: f64,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound_licai: Option<f64>,
    pub source: BoundSource,
}

impl ScheduleReport {
    pub fn evaluate(z: &InfoCurve, schedule: Schedule, source: BoundSource) -> Result<Self> {
        let predicted_kl_bits = riemann_error(z, &schedule)?.max(0.0);
        let summary = crate::info::tc_dtc_from_curve(z);
        Ok(Self {
            k: schedule.k(),
            bound_licai: Some(licai_bound(&summary, schedule.s_max(), z.n())),
            predicted_kl_bits,
            schedule,
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::compositions;

    fn figure_curve() -> InfoCurve {
        InfoCurve::new(vec![
            0.0, 0.9, 1.9, 2.8, 3.4, 3.8, 4.3, 4.7, 5.2, 5.7, 6.1, 6.4, 6.7,
        ])
        .unwrap()
    }

    fn steps(v: &[usize]) -> Schedule {
        Schedule::new(v.to_vec()).unwrap()
    }

    #[test]
    fn nodes_round_trip() {
        let s = steps(&[4, 5, 2, 2]);
        let nodes = schedule_to_nodes(&s);
        assert_eq!(nodes.nodes(), &[1, 5, 10, 12]);
        assert_eq!(nodes_to_schedule(&nodes, 13).unwrap(), s);
        assert_eq!(schedule_to_nodes(&Schedule::singles(5)).nodes(), &[1, 2, 3, 4, 5]);
        assert_eq!(schedule_to_nodes(&Schedule::one_shot(5)).nodes(), &[1]);
        assert!(matches!(NodeVector::new(vec![1, 3, 3], 5), Err(Error::NonMonotoneNodes(_))));
        assert!(matches!(NodeVector::new(vec![2, 3], 5), Err(Error::NonMonotoneNodes(_))));
        assert!(matches!(NodeVector::new(vec![1, 6], 5), Err(Error::NonMonotoneNodes(_))));
        assert!(Schedule::new(vec![2, 0, 1]).is_err());
    }

    #[test]
    fn figure_example_error() {
        let z = figure_curve();
        let s = steps(&[4, 5, 2, 2]);
        assert!((riemann_error(&z, &s).unwrap() - 10.7).abs() < 1e-9);
        let stepped = left_riemann_seq(&z, &schedule_to_nodes(&s)).unwrap();
        assert!((l1_distance(z.values(), &stepped) - 10.7).abs() < 1e-9);
        assert_eq!(stepped[4], 3.4);
        assert_eq!(stepped[12], 6.4);
    }

    #[test]
    fn extreme_schedules() {
        let z = figure_curve();
        assert_eq!(riemann_error(&z, &Schedule::singles(13)).unwrap(), 0.0);
        let tc: f64 = z.values().iter().sum();
        assert!((riemann_error(&z, &Schedule::one_shot(13)).unwrap() - tc).abs() < 1e-12);
        assert!(matches!(
            riemann_error(&z, &Schedule::one_shot(12)),
            Err(Error::DimensionMismatch(_))
        ));
        let flat = left_riemann_seq(&z, &NodeVector::new(vec![1], 13).unwrap()).unwrap();
        assert!(flat.iter().all(|&v| v == 0.0));
        let all = left_riemann_seq(&z, &schedule_to_nodes(&Schedule::singles(13))).unwrap();
        assert_eq!(all, z.values());
    }

    #[test]
    fn dp_extremes_and_step_curve() {
        let z = figure_curve();
        let (nodes, err) = optimal_nodes_dp(&z, 13).unwrap();
        assert_eq!(nodes.nodes(), (1..=13).collect::<Vec<_>>().as_slice());
        assert_eq!(err, 0.0);
        let (nodes, err) = optimal_nodes_dp(&z, 1).unwrap();
        assert_eq!(nodes.nodes(), &[1]);
        assert!((err - z.values().iter().sum::<f64>()).abs() < 1e-12);

        let step = InfoCurve::new(vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let (nodes, err) = optimal_nodes_dp(&step, 2).unwrap();
        assert_eq!(nodes.nodes(), &[1, 4]);
        assert_eq!(err, 0.0);
        assert!(optimal_nodes_dp(&step, 0).is_err());
        assert!(optimal_nodes_dp(&step, 7).is_err());
    }

    #[test]
    fn dp_breaks_ties_lexicographically() {
        // constant curve: every node vector has zero error
        let flat = InfoCurve::new(vec![0.0; 6]).unwrap();
        let (nodes, _) = optimal_nodes_dp(&flat, 3).unwrap();
        assert_eq!(nodes.nodes(), &[1, 2, 3]);
    }

    #[test]
    fn dp_beats_every_composition() {
        let z = figure_curve();
        for comp in compositions(13) {
            let s = Schedule::new(comp).unwrap();
            let (_, best) = optimal_nodes_dp(&z, s.k()).unwrap();
            assert!(best <= riemann_error(&z, &s).unwrap() + 1e-12);
        }
    }

    #[test]
    fn tc_recursion_unrolled() {
        assert_eq!(tc_schedule(1.0, 1.0, 8).unwrap().steps(), &[4, 2, 1, 1]);
        // ζ = 5 ≤ n: the geometric phase stalls at N = 4, then unit steps
        assert_eq!(tc_schedule(4.0, 1.0, 8).unwrap(), Schedule::singles(8));
        // ζ ≥ n + 1
        assert_eq!(tc_schedule(10.0, 1.0, 8).unwrap(), Schedule::singles(8));
        assert_eq!(tc_schedule(0.0, 1.0, 8).unwrap(), Schedule::one_shot(8));
        assert!(matches!(tc_schedule(1.0, 0.0, 8), Err(Error::InvalidTolerance(_))));
        assert!(matches!(dtc_schedule(1.0, -1.0, 8), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn dtc_recursion_unrolled() {
        assert_eq!(dtc_schedule(1.0, 1.0, 8).unwrap().steps(), &[1, 1, 2, 4]);
        assert_eq!(dtc_schedule(100.0, 1.0, 8).unwrap(), Schedule::singles(8));
        assert_eq!(dtc_schedule(0.0, 0.5, 8).unwrap(), Schedule::one_shot(8));
    }

    #[test]
    fn dtc_steps_reverse_tc_steps() {
        for n in 1..=64 {
            for hat in [0.0, 0.5, 1.0, 2.0, 3.0, 7.0, 20.0] {
                let mut tc = tc_schedule(hat, 1.0, n).unwrap().steps().to_vec();
                tc.reverse();
                assert_eq!(tc, dtc_schedule(hat, 1.0, n).unwrap().steps(), "n={n} hat={hat}");
            }
        }
    }

    #[test]
    fn geometric_rounds_matches_float_formula_off_boundaries() {
        // ζ = 2, n − ζ + 1 = 8: log 8 / log 2 = 3 exactly
        assert_eq!(geometric_rounds(2, 9), 5);
        assert_eq!(geometric_rounds(2, 8), 4);
        assert_eq!(geometric_rounds(5, 8), 8);
        assert_eq!(geometric_rounds(3, 3), 2);
    }

    #[test]
    fn austin_shapes() {
        assert_eq!(austin_schedule(0.0, 1.0, 10).unwrap(), Schedule::one_shot(10));
        // √(1·16/1) = 4: four unit steps then four blocks over 12 positions
        assert_eq!(austin_schedule(1.0, 1.0, 16).unwrap().steps(), &[1, 1, 1, 1, 3, 3, 3, 3]);
        // √(2·10/1) ≈ 4.47: prefix 4, five blocks over 6 positions
        assert_eq!(
            austin_schedule(2.0, 1.0, 10).unwrap().steps(),
            &[1, 1, 1, 1, 1, 1, 1, 1, 2]
        );
        for n in 1..40 {
            for hat in [0.0, 0.1, 1.0, 3.0, 50.0] {
                for eps in [0.1, 0.5, 1.0, 4.0] {
                    let s = austin_schedule(hat, eps, n).unwrap();
                    assert_eq!(s.n(), n);
                    assert!(s.k() as f64 <= austin_round_bound(hat, eps, n));
                }
            }
        }
    }

    #[test]
    fn licai_examples() {
        let summary = CorrelationSummary { tc: 3.0, dtc: 2.0, z_n: 1.0 };
        assert_eq!(licai_bound(&summary, 1, 5), 0.0);
        assert_eq!(licai_bound(&summary, 2, 5), 1.0);
        assert_eq!(licai_bound(&summary, 3, 5), 3.0);
        assert_eq!(licai_bound(&summary, 4, 5), 3.0);
    }

    #[test]
    fn sweep_grid_examples() {
        assert_eq!(sweep_levels(8, 2, 1.0, GridBound::PowerAtLeastEps), vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(sweep_levels(8, 2, 1.0, GridBound::ExponentAtLeastEps), vec![2.0, 4.0, 8.0]);
        assert_eq!(sweep_levels(8, 2, 20.0, GridBound::PowerAtLeastEps), vec![8.0]);
        assert_eq!(sweep_grid(8, 2, 1.0, GridBound::PowerAtLeastEps).len(), 16);
        // n·log₂ q = 14.04 → the top level is 16
        assert_eq!(*sweep_levels(5, 7, 0.5, GridBound::PowerAtLeastEps).last().unwrap(), 16.0);
    }

    #[test]
    fn schedule_json_shape() {
        let s = steps(&[4, 5, 2, 2]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"steps":[4,5,2,2]}"#);
        assert_eq!(serde_json::from_str::<Schedule>(&text).unwrap(), s);
        assert!(serde_json::from_str::<Schedule>(r#"{"steps":[1,0]}"#).is_err());
    }
}
