//! Fixed and random parallel unmasking, the exact law of their output, and
//! brute-force / Monte-Carlo expected-KL oracles.
//!
//! Round `i` reveals block `S_i`, drawing every coordinate of the block
//! independently from the oracle row for that coordinate given the values
//! revealed in earlier rounds. The output law is therefore
//!
//! ```text
//! ν(x) = Π_i Π_{j ∈ S_i} CO(x_j | x_{S_1 ∪ .. ∪ S_{i−1}})
//! ```
//!
//! Each factor depends only on the pair (revealed set, coordinate), so the
//! conditional tables are memoized on that key and shared across partitions.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{multinomial, ordered_partitions};
use crate::dist::{for_each_projected, kl_slices, neumaier_sum, JointPmf};
use crate::error::{Error, Result};
use crate::schedule::Schedule;

/// Largest number of ordered partitions any exact average enumerates.
pub const MAX_PARTITIONS: f64 = 1e6;

/// Ordered blocks `S_1..S_k` partitioning `0..n`; each block stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsetSchedule {
    blocks: Vec<Vec<usize>>,
}

impl SubsetSchedule {
    pub fn new(mut blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("blocks must be non-empty".into()));
        }
        let mut seen = vec![false; n];
        for &pos in blocks.iter().flatten() {
            if pos >= n {
                return Err(Error::PositionOutOfRange { position: pos, n });
            }
            if std::mem::replace(&mut seen[pos], true) {
                return Err(Error::InvalidPartition(format!("position {pos} appears twice")));
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition(format!("position {missing} is never revealed")));
        }
        blocks.iter_mut().for_each(|b| b.sort_unstable());
        Ok(Self { blocks })
    }

    /// One position per round in the order `0, 1, ..`.
    pub fn singles(n: usize) -> Self {
        Self { blocks: (0..n).map(|i| vec![i]).collect() }
    }

    /// All positions in one round.
    pub fn one_block(n: usize) -> Self {
        Self { blocks: vec![(0..n).collect()] }
    }

    /// Cuts `order` into consecutive blocks of the schedule's sizes.
    pub fn from_order(order: &[usize], s: &Schedule) -> Result<Self> {
        if order.len() != s.n() {
            return Err(Error::DimensionMismatch(format!(
                "order of length {} for a schedule over {}",
                order.len(),
                s.n()
            )));
        }
        let mut blocks = Vec::with_capacity(s.k());
        let mut start = 0;
        for &step in s.steps() {
            blocks.push(order[start..start + step].to_vec());
            start += step;
        }
        Self::new(blocks, order.len())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn schedule(&self) -> Schedule {
        Schedule::new(self.blocks.iter().map(Vec::len).collect()).expect("blocks are non-empty")
    }

    /// `(revealed-set mask, coordinate)` for every factor of the output law.
    fn factor_keys(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        let mut revealed = 0u64;
        self.blocks.iter().flat_map(move |block| {
            let mask = revealed;
            revealed |= block.iter().fold(0u64, |m, &j| m | 1 << j);
            block.iter().map(move |&j| (mask, j))
        })
    }
}

/// The conditional marginal oracle used by the sampler.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum OracleModel {
    #[default]
    Exact,
    /// Each exact row mixed with uniform: `(1 − η)·row + η/q`.
    Smoothed { eta: f64 },
}

impl OracleModel {
    pub fn smoothed(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidTolerance(format!("eta = {eta} is outside [0, 1]")));
        }
        Ok(Self::Smoothed { eta })
    }

    fn eta(&self) -> f64 {
        match *self {
            OracleModel::Exact => 0.0,
            OracleModel::Smoothed { eta } => eta,
        }
    }

    fn validate(&self) -> Result<()> {
        Self::smoothed(self.eta()).map(|_| ())
    }
}

fn positions_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Oracle rows for coordinate `j` given positions `mask`, laid out as
/// `table[idx_T · q + v]` with `idx_T` the big-endian code of `x_T`
/// (positions ascending).
fn conditional_table(p: &JointPmf, mask: u64, j: usize, eta: f64) -> Vec<f64> {
    let q = p.q();
    let mut cols = positions_of(mask);
    let joint_given = p.marginal_probs(&cols);
    cols.push(j);
    let joint = p.marginal_probs(&cols);
    let uniform = 1.0 / q as f64;
    joint
        .iter()
        .enumerate()
        .map(|(y, &b)| {
            let a = joint_given[y / q];
            let exact = if a > 0.0 { b / a } else { uniform };
            (1.0 - eta) * exact + eta * uniform
        })
        .collect()
}

/// Memoized conditional tables for one `(p, oracle)` pair.
struct TableCache<'a> {
    p: &'a JointPmf,
    eta: f64,
    tables: HashMap<(u64, usize), Vec<f64>>,
}

impl<'a> TableCache<'a> {
    fn new(p: &'a JointPmf, oracle: OracleModel) -> Result<Self> {
        oracle.validate()?;
        if p.n() > 64 {
            return Err(Error::DimensionMismatch(format!("n = {} exceeds 64 positions", p.n())));
        }
        Ok(Self { p, eta: oracle.eta(), tables: HashMap::new() })
    }

    /// Fills every missing key in parallel; order of `keys` does not matter.
    fn ensure(&mut self, keys: impl IntoIterator<Item = (u64, usize)>) {
        let missing: Vec<(u64, usize)> = keys
            .into_iter()
            .filter(|k| !self.tables.contains_key(k))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        let (p, eta) = (self.p, self.eta);
        let built: Vec<_> = missing
            .into_par_iter()
            .map(|(mask, j)| ((mask, j), conditional_table(p, mask, j, eta)))
            .collect();
        self.tables.extend(built);
    }

    fn table(&self, mask: u64, j: usize) -> &[f64] {
        &self.tables[&(mask, j)]
    }

    /// Exact output law for a partition whose keys are already cached.
    fn output_probs(&self, ss: &SubsetSchedule) -> Vec<f64> {
        let (n, q) = (self.p.n(), self.p.q());
        let mut nu = vec![1.0; self.p.len()];
        for (mask, j) in ss.factor_keys() {
            let table = self.table(mask, j);
            let mut cols = positions_of(mask);
            cols.push(j);
            for_each_projected(n, q, &cols, |x, y| nu[x] *= table[y]);
        }
        nu
    }

    /// One draw of the fixed process; keys must be cached.
    fn draw(&self, ss: &SubsetSchedule, rng: &mut ChaCha8Rng, out: &mut [usize]) {
        let q = self.p.q();
        let mut revealed = 0u64;
        for block in ss.blocks() {
            let mut idx = 0usize;
            for pos in positions_of(revealed) {
                idx = idx * q + out[pos];
            }
            for &j in block {
                let row = &self.table(revealed, j)[idx * q..idx * q + q];
                out[j] = draw_symbol(row, rng.gen());
            }
            revealed |= block.iter().fold(0u64, |m, &j| m | 1 << j);
        }
    }
}

/// Inverse-CDF draw; never returns a zero-probability symbol.
fn draw_symbol(row: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (v, &w) in row.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last = v;
            if u < acc {
                return v;
            }
        }
    }
    last
}

fn draw_rng(seed: u64, draw: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    rng
}

fn check_n(p: &JointPmf, n: usize) -> Result<()> {
    if p.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "distribution has n = {}, partition covers {n}",
            p.n()
        )));
    }
    Ok(())
}

/// Draw `t` uses its own stream of `seed`, so any draw is reproducible alone.
pub fn sample_fixed_many(
    p: &JointPmf,
    ss: &SubsetSchedule,
    oracle: OracleModel,
    seed: u64,
    draws: usize,
) -> Result<Vec<Vec<usize>>> {
    check_n(p, ss.n())?;
    let mut cache = TableCache::new(p, oracle)?;
    cache.ensure(ss.factor_keys());
    Ok((0..draws as u64)
        .into_par_iter()
        .map(|t| {
            let mut out = vec![0; p.n()];
            cache.draw(ss, &mut draw_rng(seed, t), &mut out);
            out
        })
        .collect())
}

pub fn sample_fixed(
    p: &JointPmf,
    ss: &SubsetSchedule,
    oracle: OracleModel,
    seed: u64,
) -> Result<Vec<usize>> {
    Ok(sample_fixed_many(p, ss, oracle, seed, 1)?.remove(0))
}

fn random_partition(s: &Schedule, rng: &mut ChaCha8Rng) -> SubsetSchedule {
    let mut order: Vec<usize> = (0..s.n()).collect();
    order.shuffle(rng);
    SubsetSchedule::from_order(&order, s).expect("permutation of 0..n")
}

/// Each draw picks a fresh uniform ordered partition, then runs the fixed
/// process on it.
pub fn sample_random_many(
    p: &JointPmf,
    s: &Schedule,
    oracle: OracleModel,
    seed: u64,
    draws: usize,
) -> Result<Vec<Vec<usize>>> {
    check_n(p, s.n())?;
    let mut cache = TableCache::new(p, oracle)?;
    let mut rngs = Vec::with_capacity(draws);
    let mut partitions = Vec::with_capacity(draws);
    for t in 0..draws as u64 {
        let mut rng = draw_rng(seed, t);
        partitions.push(random_partition(s, &mut rng));
        rngs.push(rng);
    }
    cache.ensure(partitions.iter().flat_map(|ss| ss.factor_keys()));
    Ok(rngs
        .into_par_iter()
        .zip(partitions.par_iter())
        .map(|(mut rng, ss)| {
            let mut out = vec![0; p.n()];
            cache.draw(ss, &mut rng, &mut out);
            out
        })
        .collect())
}

pub fn sample_random(
    p: &JointPmf,
    s: &Schedule,
    oracle: OracleModel,
    seed: u64,
) -> Result<Vec<usize>> {
    Ok(sample_random_many(p, s, oracle, seed, 1)?.remove(0))
}

/// Exact law of the fixed process.
pub fn output_dist_fixed(
    p: &JointPmf,
    ss: &SubsetSchedule,
    oracle: OracleModel,
) -> Result<JointPmf> {
    check_n(p, ss.n())?;
    let mut cache = TableCache::new(p, oracle)?;
    cache.ensure(ss.factor_keys());
    Ok(JointPmf::from_raw(p.n(), p.q(), cache.output_probs(ss)))
}

fn partition_guard(s: &Schedule) -> Result<f64> {
    let count = multinomial(s.steps());
    if count > MAX_PARTITIONS {
        return Err(Error::InfeasibleEnumeration {
            what: "ordered partitions",
            needed: count,
            limit: MAX_PARTITIONS,
        });
    }
    Ok(count)
}

fn all_partitions(s: &Schedule) -> Result<Vec<SubsetSchedule>> {
    partition_guard(s)?;
    Ok(ordered_partitions(s.steps())
        .into_iter()
        .map(|blocks| SubsetSchedule { blocks })
        .collect())
}

/// KL(p ‖ ν) for each partition, in input order.
fn partition_kls(p: &JointPmf, partitions: &[SubsetSchedule]) -> Result<Vec<f64>> {
    let mut cache = TableCache::new(p, OracleModel::Exact)?;
    cache.ensure(partitions.iter().flat_map(|ss| ss.factor_keys()));
    Ok(partitions
        .par_iter()
        .map(|ss| kl_slices(p.probs(), &cache.output_probs(ss)))
        .collect())
}

/// Average of `KL(p ‖ ν^{S_1..S_k})` over every ordered partition with the
/// block sizes of `s`.
pub fn expected_kl_exact(p: &JointPmf, s: &Schedule) -> Result<f64> {
    check_n(p, s.n())?;
    crate::dist::table_len(p.q(), p.n())?;
    let partitions = all_partitions(s)?;
    let kls = partition_kls(p, &partitions)?;
    Ok(neumaier_sum(kls) / partitions.len() as f64)
}

/// Monte-Carlo estimate of the expected KL.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KlEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// Distinct partitions used (equal to the trial count without dedup).
    pub trials: usize,
}

/// Samples `trials` uniform ordered partitions and averages their exact KLs.
/// With `dedup`, partitions are drawn without replacement (stopping once all
/// are seen) and the standard error carries the finite-population factor.
pub fn expected_kl_mc(
    p: &JointPmf,
    s: &Schedule,
    trials: usize,
    seed: u64,
    dedup: bool,
) -> Result<KlEstimate> {
    check_n(p, s.n())?;
    crate::dist::table_len(p.q(), p.n())?;
    if trials == 0 {
        return Err(Error::InvalidTolerance("trials must be ≥ 1".into()));
    }
    let population = multinomial(s.steps());
    let mut partitions = Vec::with_capacity(trials);
    if dedup && trials as f64 >= population {
        partitions = all_partitions(s)?;
    } else {
        let mut seen = HashSet::new();
        let mut t = 0u64;
        while partitions.len() < trials {
            let ss = random_partition(s, &mut draw_rng(seed, t));
            t += 1;
            if !dedup || seen.insert(ss.clone()) {
                partitions.push(ss);
            }
        }
    }
    let kls = partition_kls(p, &partitions)?;
    let m = kls.len() as f64;
    let mean = neumaier_sum(kls.iter().copied()) / m;
    let stderr = if kls.len() < 2 {
        f64::NAN
    } else {
        let var = neumaier_sum(kls.iter().map(|k| (k - mean).powi(2))) / (m - 1.0);
        let fpc = if dedup {
            ((population - m) / (population - 1.0)).max(0.0)
        } else {
            1.0
        };
        (var / m * fpc).sqrt()
    };
    Ok(KlEstimate { estimate: mean, stderr, trials: kls.len() })
}

/// Uniform mixture of the fixed-process laws over every ordered partition,
/// i.e. the exact law of the random process.
pub fn mixture_output_dist(p: &JointPmf, s: &Schedule) -> Result<JointPmf> {
    check_n(p, s.n())?;
    crate::dist::table_len(p.q(), p.n())?;
    let partitions = all_partitions(s)?;
    let mut cache = TableCache::new(p, OracleModel::Exact)?;
    cache.ensure(partitions.iter().flat_map(|ss| ss.factor_keys()));
    let mut total = vec![0.0; p.len()];
    // fixed-size chunks keep the reduction order independent of thread count
    for chunk in partitions.chunks(256) {
        let laws: Vec<Vec<f64>> = chunk.par_iter().map(|ss| cache.output_probs(ss)).collect();
        for law in laws {
            total.iter_mut().zip(law).for_each(|(t, v)| *t += v);
        }
    }
    let count = partitions.len() as f64;
    total.iter_mut().for_each(|t| *t /= count);
    Ok(JointPmf::from_raw(p.n(), p.q(), total))
}

/// Both sides of the learned-oracle decomposition for one fixed partition.
///
/// With ν the law under the exact oracle and ν̂ under the smoothed one,
/// `KL(μ‖ν̂) − KL(μ‖ν) = E_μ[Σ_i Σ_{j∈S_i} log₂ CO/ĈO]`. The left side comes
/// from two output laws, the right from the oracle rows alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecouplingReport {
    pub eta: f64,
    /// `KL(μ ‖ ν)`.
    pub kl_exact_oracle: f64,
    /// `KL(μ ‖ ν̂)`.
    pub kl_learned_oracle: f64,
    /// `KL(μ ‖ ν̂) − KL(μ ‖ ν)`.
    pub lhs: f64,
    /// `E_μ[Σ log₂ CO/ĈO]`, always ≥ 0.
    pub rhs: f64,
    /// `|lhs − rhs|`.
    pub gap: f64,
    /// `|KL(μ‖ν) − KL(μ‖ν̂) − rhs|`: the gap with the roles of ν and ν̂ swapped.
    pub swapped_gap: f64,
}

/// Learning error of the smoothed oracle along `ss`, by direct enumeration of
/// the revealed prefixes (independent of any output law).
fn oracle_error(p: &JointPmf, ss: &SubsetSchedule, eta: f64) -> f64 {
    let q = p.q();
    let uniform = 1.0 / q as f64;
    let mut terms = Vec::new();
    let mut revealed: Vec<usize> = Vec::new();
    for block in ss.blocks() {
        for &j in block {
            let mut cols = revealed.clone();
            cols.push(j);
            // law of (x_R, x_j); each q-run is one unnormalized conditional row
            let joint = p.marginal_probs(&cols);
            for row in joint.chunks(q) {
                let mass: f64 = row.iter().sum();
                if mass <= 0.0 {
                    continue;
                }
                for &b in row {
                    if b > 0.0 {
                        let exact = b / mass;
                        let learned = (1.0 - eta) * exact + eta * uniform;
                        terms.push(b * (exact / learned).log2());
                    }
                }
            }
        }
        revealed.extend(block);
        revealed.sort_unstable();
    }
    neumaier_sum(terms)
}

pub fn decoupling_check(p: &JointPmf, ss: &SubsetSchedule, eta: f64) -> Result<DecouplingReport> {
    let learned = OracleModel::smoothed(eta)?;
    let nu = output_dist_fixed(p, ss, OracleModel::Exact)?;
    let nu_hat = output_dist_fixed(p, ss, learned)?;
    let kl_exact_oracle = kl_slices(p.probs(), nu.probs());
    let kl_learned_oracle = kl_slices(p.probs(), nu_hat.probs());
    let lhs = kl_learned_oracle - kl_exact_oracle;
    let rhs = oracle_error(p, ss, eta);
    Ok(DecouplingReport {
        eta,
        kl_exact_oracle,
        kl_learned_oracle,
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        swapped_gap: (kl_exact_oracle - kl_learned_oracle - rhs).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{kl_bits, product_of_marginals, tv};
    use crate::info::info_curve;
    use crate::schedule::riemann_error;

    fn correlated_pair() -> JointPmf {
        JointPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    fn skewed() -> JointPmf {
        JointPmf::from_weights(3, 2, vec![5.0, 1.0, 0.5, 2.0, 3.0, 0.25, 1.0, 4.0]).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(SubsetSchedule::new(vec![vec![0], vec![0, 1]], 2).is_err());
        assert!(SubsetSchedule::new(vec![vec![0]], 2).is_err());
        assert!(SubsetSchedule::new(vec![vec![0], vec![]], 1).is_err());
        assert!(matches!(
            SubsetSchedule::new(vec![vec![0, 2]], 2),
            Err(Error::PositionOutOfRange { position: 2, n: 2 })
        ));
        let a = SubsetSchedule::new(vec![vec![2, 0], vec![1]], 3).unwrap();
        let b = SubsetSchedule::new(vec![vec![0, 2], vec![1]], 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.schedule().steps(), &[2, 1]);
        assert!(OracleModel::smoothed(1.5).is_err());
    }

    #[test]
    fn output_law_examples() {
        let p = skewed();
        let singles = output_dist_fixed(&p, &SubsetSchedule::singles(3), OracleModel::Exact).unwrap();
        assert!(tv(&p, &singles).unwrap() < 1e-12);
        let one = output_dist_fixed(&p, &SubsetSchedule::one_block(3), OracleModel::Exact).unwrap();
        assert!(tv(&product_of_marginals(&p), &one).unwrap() < 1e-12);
        let pair = output_dist_fixed(&correlated_pair(), &SubsetSchedule::one_block(2), OracleModel::Exact)
            .unwrap();
        assert!(pair.probs().iter().all(|&v| (v - 0.25).abs() < 1e-12));
        let other = SubsetSchedule::new(vec![vec![2], vec![0, 1]], 3).unwrap();
        let law = output_dist_fixed(&p, &other, OracleModel::Smoothed { eta: 0.3 }).unwrap();
        assert!((law.probs().iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn expected_kl_matches_curve() {
        let p = skewed();
        let z = info_curve(&p).unwrap();
        for steps in [vec![1, 1, 1], vec![3], vec![1, 2], vec![2, 1]] {
            let s = Schedule::new(steps).unwrap();
            let exact = expected_kl_exact(&p, &s).unwrap();
            assert!((exact - riemann_error(&z, &s).unwrap()).abs() < 1e-10);
        }
        let one = expected_kl_exact(&correlated_pair(), &Schedule::one_shot(2)).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        assert!(expected_kl_exact(&correlated_pair(), &Schedule::singles(2)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn mc_exhaustive_with_dedup() {
        let p = skewed();
        let s = Schedule::new(vec![1, 2]).unwrap();
        let exact = expected_kl_exact(&p, &s).unwrap();
        let mc = expected_kl_mc(&p, &s, 3, 9, true).unwrap();
        assert_eq!(mc.trials, 3);
        assert!((mc.estimate - exact).abs() < 1e-12);
        assert!(mc.stderr.abs() < 1e-12);
        let loose = expected_kl_mc(&p, &s, 50, 9, false).unwrap();
        assert!((loose.estimate - exact).abs() < 4.0 * loose.stderr + 1e-12);
    }

    #[test]
    fn mixture_examples() {
        let p = skewed();
        let singles = mixture_output_dist(&p, &Schedule::singles(3)).unwrap();
        assert!(tv(&p, &singles).unwrap() < 1e-12);
        let one = mixture_output_dist(&p, &Schedule::one_shot(3)).unwrap();
        assert!(tv(&product_of_marginals(&p), &one).unwrap() < 1e-12);
        let s = Schedule::new(vec![1, 2]).unwrap();
        let mix = mixture_output_dist(&p, &s).unwrap();
        assert!(kl_bits(&p, &mix).unwrap() < expected_kl_exact(&p, &s).unwrap());
    }

    #[test]
    fn sampling_is_deterministic_and_respects_support() {
        let p = JointPmf::point_mass(3, 3, &[2, 0, 1]).unwrap();
        let s = Schedule::new(vec![2, 1]).unwrap();
        for seed in 0..5 {
            assert_eq!(sample_random(&p, &s, OracleModel::Exact, seed).unwrap(), vec![2, 0, 1]);
            assert_eq!(
                sample_fixed(&p, &SubsetSchedule::one_block(3), OracleModel::Exact, seed).unwrap(),
                vec![2, 0, 1]
            );
        }
        let q = skewed();
        let a = sample_random_many(&q, &s, OracleModel::Exact, 7, 20).unwrap();
        let b = sample_random_many(&q, &s, OracleModel::Exact, 7, 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(sample_random(&q, &s, OracleModel::Exact, 7).unwrap(), a[0]);
    }

    #[test]
    fn decoupling_examples() {
        let pair = correlated_pair();
        let ss = SubsetSchedule::singles(2);
        let zero = decoupling_check(&pair, &ss, 0.0).unwrap();
        assert_eq!(zero.rhs, 0.0);
        assert!(zero.lhs.abs() < 1e-15);
        let half = decoupling_check(&pair, &ss, 0.5).unwrap();
        assert!(half.gap < 1e-9);
        assert!((half.rhs - (4.0f64 / 3.0).log2()).abs() < 1e-12);
        assert!(half.swapped_gap > 0.5);
        for eta in [0.05, 0.3, 0.9] {
            let r = decoupling_check(&skewed(), &SubsetSchedule::singles(3), eta).unwrap();
            assert!(r.kl_learned_oracle >= r.kl_exact_oracle);
            assert!(r.gap < 1e-9);
        }
    }
}
