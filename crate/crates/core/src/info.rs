//! Average entropy curve `H_0..H_n`, information curve `Z_1..Z_n`, and the
//! total / dual total correlation summaries derived from them (all in bits).
//!
//! `Z_j` is the average mutual information between a random coordinate and a
//! random disjoint set of `j − 1` others; it is recovered from the entropy
//! curve as `Z_j = H_1 + H_{j−1} − H_j`.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::combinatorics::{binomial, combinations};
use crate::dist::{entropy_bits, neumaier_sum, JointPmf};
use crate::error::{Error, Result};

/// Largest `n` for which exact subset enumeration is attempted.
pub const MAX_EXACT_N: usize = 20;

/// Upper limit on `2^n · q^n`, the work of the exact curve.
pub const MAX_EXACT_WORK: f64 = (1u64 << 34) as f64;

/// Negative `Z` values above this are rounding noise and clamp to zero.
pub const Z_CLAMP_TOL: f64 = 1e-9;

/// A drop in `Z` larger than this is reported as a Han violation.
pub const HAN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMethod {
    Exact,
    MonteCarlo,
}

/// `H_0..H_n` (so `values.len() == n + 1`), optionally with per-level
/// standard errors when estimated.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCurve {
    pub values: Vec<f64>,
    pub method: CurveMethod,
    pub stderr: Option<Vec<f64>>,
}

impl EntropyCurve {
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// Checks `H_0 = 0`, monotonicity and discrete concavity within `tol`.
    pub fn check_shape(&self, tol: f64) -> std::result::Result<(), String> {
        let h = &self.values;
        if h[0].abs() > tol {
            return Err(format!("H_0 = {} ≠ 0", h[0]));
        }
        for i in 1..h.len() {
            if h[i] < h[i - 1] - tol {
                return Err(format!("H_{i} = {} < H_{} = {}", h[i], i - 1, h[i - 1]));
            }
            if i >= 2 && (h[i] - h[i - 1]) > (h[i - 1] - h[i - 2]) + tol {
                return Err(format!("increment at {i} exceeds increment at {}", i - 1));
            }
        }
        Ok(())
    }
}

/// `Z_1..Z_n`; `values[j - 1]` holds `Z_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoCurve {
    values: Vec<f64>,
}

impl InfoCurve {
    /// Validates `Z_1 = 0` and Han monotonicity, clamping rounding noise.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch("information curve is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::DimensionMismatch(format!("non-finite curve value {v}")));
        }
        if values[0].abs() > HAN_TOL {
            return Err(Error::HanViolation {
                index: 1,
                value: values[0],
                prev_index: 0,
                prev_value: 0.0,
            });
        }
        for j in 0..values.len() {
            let v = values[j];
            if v < -Z_CLAMP_TOL {
                return Err(Error::HanViolation {
                    index: j + 1,
                    value: v,
                    prev_index: j,
                    prev_value: if j == 0 { 0.0 } else { values[j - 1] },
                });
            }
            if v < 0.0 {
                values[j] = 0.0;
            }
            if j > 0 && values[j] < values[j - 1] - HAN_TOL {
                return Err(Error::HanViolation {
                    index: j + 1,
                    value: values[j],
                    prev_index: j,
                    prev_value: values[j - 1],
                });
            }
        }
        values[0] = values[0].max(0.0);
        Ok(Self { values })
    }

    /// Wraps values without any checks (for noisy estimates).
    pub fn new_unchecked(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `Z_j` for 1-based `j`.
    pub fn z(&self, j: usize) -> f64 {
        self.values[j - 1]
    }
}

/// TC, DTC and `Z_n`, all in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSummary {
    pub tc: f64,
    pub dtc: f64,
    pub z_n: f64,
}

fn exact_guard(p: &JointPmf) -> Result<()> {
    let n = p.n();
    if n > MAX_EXACT_N {
        return Err(Error::InfeasibleEnumeration {
            what: "subset enumeration 2^n (n ≤ 20)",
            needed: 2f64.powi(n as i32),
            limit: 2f64.powi(MAX_EXACT_N as i32),
        });
    }
    let work = 2f64.powi(n as i32) * p.len() as f64;
    if work > MAX_EXACT_WORK {
        return Err(Error::InfeasibleEnumeration {
            what: "exact entropy curve 2^n·q^n",
            needed: work,
            limit: MAX_EXACT_WORK,
        });
    }
    Ok(())
}

/// Exact `H_i`: the mean entropy of `X_S` over all `|S| = i`.
pub fn entropy_curve_exact(p: &JointPmf) -> Result<EntropyCurve> {
    exact_guard(p)?;
    let n = p.n();
    let mut values = vec![0.0; n + 1];
    for (i, slot) in values.iter_mut().enumerate().skip(1) {
        let subsets: Vec<Vec<usize>> = combinations(n, i).collect();
        let entropies: Vec<f64> = subsets
            .par_iter()
            .map(|s| p.marginal_entropy(s))
            .collect();
        *slot = neumaier_sum(entropies) / subsets.len() as f64;
    }
    Ok(EntropyCurve {
        values,
        method: CurveMethod::Exact,
        stderr: None,
    })
}

/// Settings for [`entropy_curve_mc`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples_per_level: usize,
    pub seed: u64,
    /// Draw distinct subsets (without replacement). When the sample count
    /// reaches `C(n, i)` the level is enumerated exactly.
    pub distinct: bool,
}

impl McConfig {
    pub fn new(samples_per_level: usize, seed: u64) -> Self {
        Self {
            samples_per_level,
            seed,
            distinct: false,
        }
    }
}

/// Subset-sampling estimate of the entropy curve. Each level draws from its
/// own ChaCha stream, so the result depends only on the seed.
pub fn entropy_curve_mc(p: &JointPmf, cfg: &McConfig) -> Result<EntropyCurve> {
    if cfg.samples_per_level == 0 {
        return Err(Error::InvalidTolerance("samples_per_level must be ≥ 1".into()));
    }
    let n = p.n();
    let levels: Vec<(f64, f64)> = (1..=n)
        .into_par_iter()
        .map(|i| estimate_level(p, i, cfg))
        .collect();
    let mut values = vec![0.0];
    let mut stderr = vec![0.0];
    for (mean, se) in levels {
        values.push(mean);
        stderr.push(se);
    }
    Ok(EntropyCurve {
        values,
        method: CurveMethod::MonteCarlo,
        stderr: Some(stderr),
    })
}

fn estimate_level(p: &JointPmf, i: usize, cfg: &McConfig) -> (f64, f64) {
    let n = p.n();
    let population = binomial(n, i);
    if cfg.distinct && cfg.samples_per_level as f64 >= population {
        let h: Vec<f64> = combinations(n, i).map(|s| p.marginal_entropy(&s)).collect();
        return (neumaier_sum(h.iter().copied()) / h.len() as f64, 0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(i as u64);
    let mut seen = HashSet::new();
    let mut draws = Vec::with_capacity(cfg.samples_per_level);
    while draws.len() < cfg.samples_per_level {
        let mut subset = index::sample(&mut rng, n, i).into_vec();
        subset.sort_unstable();
        if cfg.distinct && !seen.insert(subset.clone()) {
            continue;
        }
        draws.push(p.marginal_entropy(&subset));
    }
    let m = draws.len() as f64;
    let mean = neumaier_sum(draws.iter().copied()) / m;
    if draws.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = neumaier_sum(draws.iter().map(|h| (h - mean).powi(2))) / (m - 1.0);
    let mut se = (var / m).sqrt();
    if cfg.distinct && population > 1.0 {
        se *= ((population - m) / (population - 1.0)).max(0.0).sqrt();
    }
    (mean, se)
}

fn raw_z(h: &EntropyCurve) -> Vec<f64> {
    let v = &h.values;
    (1..v.len()).map(|i| v[1] + v[i - 1] - v[i]).collect()
}

/// `Z_i = H_1 + H_{i−1} − H_i`, with Han checks.
pub fn info_curve_from_entropy(h: &EntropyCurve) -> Result<InfoCurve> {
    InfoCurve::new(raw_z(h))
}

/// The same formula without validation; used to report noisy estimates.
pub fn info_curve_from_entropy_unchecked(h: &EntropyCurve) -> InfoCurve {
    InfoCurve::new_unchecked(raw_z(h))
}

/// Standard errors of `Z_i`, assuming independent per-level estimates.
pub fn info_curve_stderr(h: &EntropyCurve) -> Option<Vec<f64>> {
    let se = h.stderr.as_ref()?;
    Some(
        (1..se.len())
            .map(|i| {
                if i == 1 {
                    0.0
                } else {
                    (se[1].powi(2) + se[i - 1].powi(2) + se[i].powi(2)).sqrt()
                }
            })
            .collect(),
    )
}

/// Exact information curve of `p`.
pub fn info_curve(p: &JointPmf) -> Result<InfoCurve> {
    info_curve_from_entropy(&entropy_curve_exact(p)?)
}

/// TC is the area under `Z`; DTC is `n·Z_n − TC`.
pub fn tc_dtc_from_curve(z: &InfoCurve) -> CorrelationSummary {
    let n = z.n();
    let tc = neumaier_sum(z.values().iter().copied());
    let z_n = z.z(n);
    CorrelationSummary {
        tc,
        dtc: n as f64 * z_n - tc,
        z_n,
    }
}

/// `Σ_i H(X_i) − H(X)`.
pub fn tc_direct(p: &JointPmf) -> Result<f64> {
    let singles: Vec<f64> = (0..p.n()).map(|i| p.marginal_entropy(&[i])).collect();
    Ok(neumaier_sum(singles) - entropy_bits(p))
}

/// `H(X) − Σ_i H(X_i | X_{−i})`, using `H(X_i | X_{−i}) = H(X) − H(X_{−i})`.
pub fn dtc_direct(p: &JointPmf) -> Result<f64> {
    let n = p.n();
    let joint = entropy_bits(p);
    let leave_one_out: Vec<f64> = (0..n)
        .map(|i| {
            let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            p.marginal_entropy(&rest)
        })
        .collect();
    Ok(neumaier_sum(leave_one_out) - (n as f64 - 1.0) * joint)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn correlated_pair() -> JointPmf {
        JointPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    fn copy_dist(n: usize) -> JointPmf {
        let mut probs = vec![0.0; 1 << n];
        probs[0] = 0.5;
        probs[(1 << n) - 1] = 0.5;
        JointPmf::new(n, 2, probs).unwrap()
    }

    #[test]
    fn uniform_curve_is_linear_and_z_vanishes() {
        let p = JointPmf::new(3, 3, vec![1.0 / 27.0; 27]).unwrap();
        let h = entropy_curve_exact(&p).unwrap();
        for (i, v) in h.values.iter().enumerate() {
            assert!((v - i as f64 * 3f64.log2()).abs() < 1e-12);
        }
        let z = info_curve_from_entropy(&h).unwrap();
        assert!(z.values().iter().all(|v| v.abs() < 1e-12));
        let s = tc_dtc_from_curve(&z);
        assert!(s.tc.abs() < 1e-12 && s.dtc.abs() < 1e-12);
    }

    #[test]
    fn point_mass_curve_is_zero() {
        let p = JointPmf::point_mass(4, 2, &[1, 0, 1, 1]).unwrap();
        let h = entropy_curve_exact(&p).unwrap();
        assert!(h.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn correlated_pair_curve() {
        let h = entropy_curve_exact(&correlated_pair()).unwrap();
        assert_eq!(h.values, vec![0.0, 1.0, 1.0]);
        let z = info_curve_from_entropy(&h).unwrap();
        assert_eq!(z.values(), &[0.0, 1.0]);
        let s = tc_dtc_from_curve(&z);
        assert_eq!((s.tc, s.dtc), (1.0, 1.0));
    }

    #[test]
    fn copy_distribution_direct_values() {
        for n in 2..6 {
            let p = copy_dist(n);
            assert!((tc_direct(&p).unwrap() - (n as f64 - 1.0)).abs() < 1e-12);
            assert!((dtc_direct(&p).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_has_zero_tc() {
        let a = [0.2, 0.8];
        let b = [0.6, 0.1, 0.3];
        // n = 2 over q = 3; pad the first factor with a zero symbol
        let probs: Vec<f64> = (0..9)
            .map(|x| {
                let (i, j) = (x / 3, x % 3);
                if i < 2 { a[i] * b[j] } else { 0.0 }
            })
            .collect();
        let p = JointPmf::new(2, 3, probs).unwrap();
        assert!(tc_direct(&p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn info_curve_rejects_han_violations() {
        assert!(matches!(
            InfoCurve::new(vec![0.0, 1.0, 0.5]),
            Err(Error::HanViolation { index: 3, .. })
        ));
        assert!(matches!(
            InfoCurve::new(vec![0.0, -1e-6]),
            Err(Error::HanViolation { index: 2, .. })
        ));
        let clamped = InfoCurve::new(vec![0.0, -1e-12, 0.3]).unwrap();
        assert_eq!(clamped.values(), &[0.0, 0.0, 0.3]);
        // sub-tolerance dip passes
        assert!(InfoCurve::new(vec![0.0, 0.5, 0.5 - 1e-8]).is_ok());
    }

    #[test]
    fn mc_on_uniform_has_zero_stderr() {
        let p = JointPmf::new(4, 2, vec![1.0 / 16.0; 16]).unwrap();
        let h = entropy_curve_mc(&p, &McConfig::new(10, 7)).unwrap();
        for (i, (v, se)) in h.values.iter().zip(h.stderr.as_ref().unwrap()).enumerate() {
            assert!((v - i as f64).abs() < 1e-12);
            assert!(se.abs() < 1e-12);
        }
    }

    #[test]
    fn mc_distinct_exhaustive_matches_exact() {
        let p = JointPmf::from_weights(4, 2, (1..=16).map(|v| (v * v) as f64).collect()).unwrap();
        let exact = entropy_curve_exact(&p).unwrap();
        let cfg = McConfig {
            samples_per_level: 6,
            seed: 3,
            distinct: true,
        };
        let mc = entropy_curve_mc(&p, &cfg).unwrap();
        for (a, b) in exact.values.iter().zip(&mc.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn mc_is_deterministic_per_seed() {
        let p = JointPmf::from_weights(5, 2, (0..32).map(|v| (v % 7 + 1) as f64).collect()).unwrap();
        let a = entropy_curve_mc(&p, &McConfig::new(5, 11)).unwrap();
        let b = entropy_curve_mc(&p, &McConfig::new(5, 11)).unwrap();
        assert_eq!(a, b);
        assert!(entropy_curve_mc(&p, &McConfig::new(0, 1)).is_err());
    }

    #[test]
    fn exact_guard_refuses_large_n() {
        let p = JointPmf::new(21, 2, vec![1.0 / (1u64 << 21) as f64; 1 << 21]).unwrap();
        assert!(matches!(
            entropy_curve_exact(&p),
            Err(Error::InfeasibleEnumeration { .. })
        ));
    }
}
