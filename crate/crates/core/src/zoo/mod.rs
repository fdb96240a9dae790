//! Benchmark families: uniform laws, affine and Reed–Solomon codes, mixtures
//! of products, code-elevated distributions and random tables.

pub mod code;
pub mod field;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use code::{code_dist, mds_check, random_balanced_rs, rs_code, AffineCode};
pub use field::is_prime;

use crate::dist::{decode, neumaier_sum, table_len, JointPmf, PROB_TOL};
use crate::error::{Error, Result};

pub fn uniform_dist(q: usize, n: usize) -> Result<JointPmf> {
    let len = table_len(q, n)?;
    JointPmf::new(n, q, vec![1.0 / len as f64; len])
}

/// All `n` coordinates equal to one uniform symbol.
pub fn copy_dist(q: usize, n: usize) -> Result<JointPmf> {
    let len = table_len(q, n)?;
    let mut probs = vec![0.0; len];
    for s in 0..q {
        probs[crate::dist::encode(q, &vec![s; n])] = 1.0 / q as f64;
    }
    JointPmf::new(n, q, probs)
}

/// Weights `w_m` and per-component coordinate laws `components[m][i][x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductMixtureSpec {
    pub weights: Vec<f64>,
    pub components: Vec<Vec<Vec<f64>>>,
}

impl ProductMixtureSpec {
    /// Returns `(n, q)`.
    pub fn validate(&self) -> Result<(usize, usize)> {
        let bad = |msg: String| Err(Error::NotADistribution(msg));
        if self.weights.is_empty() || self.weights.len() != self.components.len() {
            return bad(format!(
                "{} weights for {} components",
                self.weights.len(),
                self.components.len()
            ));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0))
            || (neumaier_sum(self.weights.iter().copied()) - 1.0).abs() > 1e-9
        {
            return bad("mixture weights must be a probability vector".into());
        }
        let n = self.components[0].len();
        let q = self.components[0].first().map_or(0, Vec::len);
        if n == 0 || q == 0 {
            return bad("components must have n ≥ 1 rows of q ≥ 1 entries".into());
        }
        for comp in &self.components {
            if comp.len() != n || comp.iter().any(|row| row.len() != q) {
                return Err(Error::DimensionMismatch("components differ in shape".into()));
            }
            for row in comp {
                if row.iter().any(|v| !(v.is_finite() && *v >= 0.0))
                    || (neumaier_sum(row.iter().copied()) - 1.0).abs() > 1e-9
                {
                    return bad(format!("component row {row:?} is not a distribution"));
                }
            }
        }
        Ok((n, q))
    }
}

/// `Σ_m w_m Π_i components[m][i][x_i]`.
pub fn product_mixture(spec: &ProductMixtureSpec) -> Result<JointPmf> {
    let (n, q) = spec.validate()?;
    let len = table_len(q, n)?;
    let probs: Vec<f64> = (0..len)
        .map(|x| {
            let tuple = decode(n, q, x);
            neumaier_sum(spec.weights.iter().zip(&spec.components).map(|(w, comp)| {
                w * tuple.iter().enumerate().map(|(i, &s)| comp[i][s]).product::<f64>()
            }))
        })
        .collect();
    JointPmf::from_weights(n, q, probs)
}

/// Law of `(X, Y)` with `X ~ base`, `Y` uniform on the code, independent,
/// read position-wise over the alphabet `Σ × F_q` with `(σ, v) ↦ σ·q + v`.
pub fn elevated_family(base: &JointPmf, code: &AffineCode) -> Result<JointPmf> {
    let n = base.n();
    if code.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "base has n = {n}, code has n = {}",
            code.n()
        )));
    }
    let qc = code.q() as usize;
    let sigma = base.q();
    let alphabet = sigma * qc;
    let len = table_len(alphabet, n)?;
    let words: Vec<Vec<u64>> = code.codewords().collect();
    let mass = 1.0 / words.len() as f64;
    let mut probs = vec![0.0; len];
    let mut tuple = vec![0usize; n];
    for (x, &px) in base.probs().iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        let bx = base.decode(x);
        for w in &words {
            for i in 0..n {
                tuple[i] = bx[i] * qc + w[i] as usize;
            }
            probs[crate::dist::encode(alphabet, &tuple)] += px * mass;
        }
    }
    JointPmf::new(n, alphabet, probs)
}

/// Random full-support table with i.i.d. exponential weights (a flat
/// Dirichlet draw).
pub fn random_pmf<R: Rng + ?Sized>(q: usize, n: usize, rng: &mut R) -> Result<JointPmf> {
    let len = table_len(q, n)?;
    let weights = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    JointPmf::from_weights(n, q, weights)
}

/// Random table supported on `support` distinct tuples.
pub fn random_sparse_pmf<R: Rng + ?Sized>(
    q: usize,
    n: usize,
    support: usize,
    rng: &mut R,
) -> Result<JointPmf> {
    let len = table_len(q, n)?;
    if support == 0 || support > len {
        return Err(Error::NotADistribution(format!("support {support} outside 1..={len}")));
    }
    let mut weights = vec![0.0; len];
    for idx in rand::seq::index::sample(rng, len, support) {
        weights[idx] = -(1.0 - rng.gen::<f64>()).ln() + PROB_TOL;
    }
    JointPmf::from_weights(n, q, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::entropy_bits;
    use crate::info::{dtc_direct, entropy_curve_exact, info_curve, tc_direct};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_examples() {
        assert_eq!(uniform_dist(2, 1).unwrap().probs(), &[0.5, 0.5]);
        let p = uniform_dist(3, 4).unwrap();
        assert!(info_curve(&p).unwrap().values().iter().all(|&z| z.abs() < 1e-12));
        assert!(tc_direct(&p).unwrap().abs() < 1e-12);
        assert!(dtc_direct(&p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn mixture_examples() {
        let single = ProductMixtureSpec {
            weights: vec![1.0],
            components: vec![vec![vec![0.2, 0.8], vec![0.5, 0.5], vec![0.9, 0.1]]],
        };
        assert!(tc_direct(&product_mixture(&single).unwrap()).unwrap().abs() < 1e-12);
        let copy = ProductMixtureSpec {
            weights: vec![0.5, 0.5],
            components: vec![
                vec![vec![1.0, 0.0], vec![1.0, 0.0]],
                vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            ],
        };
        let p = product_mixture(&copy).unwrap();
        assert_eq!(p, copy_dist(2, 2).unwrap());
        assert!((dtc_direct(&p).unwrap() - 1.0).abs() < 1e-12);
        let bad = ProductMixtureSpec { weights: vec![0.7], ..single };
        assert!(matches!(product_mixture(&bad), Err(Error::NotADistribution(_))));
    }

    #[test]
    fn random_four_component_mixture_has_small_dtc() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut row = |q: usize| {
            let w: Vec<f64> = (0..q).map(|_| rng.gen::<f64>() + 0.01).collect();
            let t: f64 = w.iter().sum();
            w.into_iter().map(|v| v / t).collect::<Vec<_>>()
        };
        let components = (0..4).map(|_| (0..5).map(|_| row(3)).collect()).collect();
        let spec = ProductMixtureSpec { weights: vec![0.25; 4], components };
        let p = product_mixture(&spec).unwrap();
        assert!(dtc_direct(&p).unwrap() <= 2.0 + 1e-12);
    }

    #[test]
    fn elevated_curve_shifts_by_code_step() {
        let pair = JointPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let line = rs_code(3, 1, &[0, 1], vec![0, 0]).unwrap();
        let z = info_curve(&elevated_family(&pair, &line).unwrap()).unwrap();
        assert!(z.values()[0].abs() < 1e-12);
        assert!((z.values()[1] - (1.0 + 3f64.log2())).abs() < 1e-9);

        let full = AffineCode::new(3, vec![vec![1, 0], vec![0, 1]], vec![0, 0]).unwrap();
        let u = elevated_family(&uniform_dist(2, 2).unwrap(), &full).unwrap();
        assert!((entropy_bits(&u) - 2.0 * 6f64.log2()).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = random_pmf(2, 3, &mut rng).unwrap();
        let zb = info_curve(&base).unwrap();
        for k in 1..=3 {
            let code = rs_code(5, k, &[0, 1, 2], vec![1, 2, 3]).unwrap();
            let ze = info_curve(&elevated_family(&base, &code).unwrap()).unwrap();
            for j in 1..=3 {
                let step = if j > k { 5f64.log2() } else { 0.0 };
                assert!((ze.z(j) - zb.z(j) - step).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn random_tables_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_pmf(3, 3, &mut rng).unwrap();
        assert!(p.probs().iter().all(|&v| v > 0.0));
        let s = random_sparse_pmf(2, 4, 5, &mut rng).unwrap();
        assert_eq!(s.probs().iter().filter(|&&v| v > 0.0).count(), 5);
        assert!(entropy_curve_exact(&s).is_ok());
    }
}
