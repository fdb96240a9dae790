//! Explicit joint distributions over `[q]^n` and the exact quantities built
//! from them: entropy, marginals, the conditional marginal oracle, KL and TV.
//!
//! All information quantities are in bits. `0 · log 0` is taken to be `0`.
//!
//! Tuples are index-encoded big-endian: `(x_0, .., x_{n-1})` maps to
//! `Σ_i x_i · q^(n-1-i)`, so position 0 is the most significant digit.
//! Positions are 0-based throughout the library.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Tolerance on `|Σ p − 1|` accepted at construction.
pub const PROB_TOL: f64 = 1e-12;

/// Largest table (`q^n`) any constructor will allocate.
pub const MAX_TABLE_LEN: usize = 1 << 24;

/// Returns `q^n` if it does not exceed [`MAX_TABLE_LEN`].
pub fn table_len(q: usize, n: usize) -> Result<usize> {
    let needed = (q as f64).powi(n as i32);
    if needed > MAX_TABLE_LEN as f64 {
        return Err(Error::InfeasibleEnumeration {
            what: "probability table q^n",
            needed,
            limit: MAX_TABLE_LEN as f64,
        });
    }
    Ok(q.pow(n as u32))
}

/// Compensated summation; keeps `Σ p` honest for tables with millions of entries.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `-Σ p log₂ p` over a probability vector, skipping zeros.
pub(crate) fn entropy_of(probs: &[f64]) -> f64 {
    let h = -neumaier_sum(
        probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.log2()),
    );
    // -0.0 and tiny negative noise on point masses
    h.max(0.0)
}

/// Walks every index of a `q^n` table in order, handing the callback the full
/// index and the index of its projection onto `positions` (first listed
/// position most significant). Amortized O(1) per entry.
pub(crate) fn for_each_projected(
    n: usize,
    q: usize,
    positions: &[usize],
    mut f: impl FnMut(usize, usize),
) {
    let len = q.pow(n as u32);
    let m = positions.len();
    let mut weight = vec![0usize; n];
    for (r, &pos) in positions.iter().enumerate() {
        weight[pos] = q.pow((m - 1 - r) as u32);
    }
    let mut digits = vec![0usize; n];
    let mut proj = 0usize;
    for x in 0..len {
        f(x, proj);
        let mut i = n;
        while i > 0 {
            i -= 1;
            if digits[i] + 1 < q {
                digits[i] += 1;
                proj += weight[i];
                break;
            }
            proj -= (q - 1) * weight[i];
            digits[i] = 0;
        }
    }
}

/// Exact probability table over `[q]^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    n: usize,
    q: usize,
    probs: Vec<f64>,
}

impl JointPmf {
    /// Validates and wraps an explicit table.
    pub fn new(n: usize, q: usize, probs: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotADistribution("sequence length n must be ≥ 1".into()));
        }
        if q < 2 {
            return Err(Error::NotADistribution(format!("alphabet size q = {q} must be ≥ 2")));
        }
        let len = table_len(q, n)?;
        if probs.len() != len {
            return Err(Error::NotADistribution(format!(
                "table has {} entries, q^n = {len}",
                probs.len()
            )));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::NotADistribution(format!("entry {i} is {p}")));
        }
        let total = neumaier_sum(probs.iter().copied());
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::NotADistribution(format!("entries sum to {total}")));
        }
        Ok(Self { n, q, probs })
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(n: usize, q: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::NotADistribution("weights must be finite and ≥ 0".into()));
        }
        let total = neumaier_sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::NotADistribution("weights sum to zero".into()));
        }
        Self::new(n, q, weights.into_iter().map(|w| w / total).collect())
    }

    /// Skips validation; for tables built as products of conditional rows.
    pub(crate) fn from_raw(n: usize, q: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), q.pow(n as u32));
        Self { n, q, probs }
    }

    /// All mass on a single tuple.
    pub fn point_mass(n: usize, q: usize, tuple: &[usize]) -> Result<Self> {
        let len = table_len(q, n)?;
        if tuple.len() != n || tuple.iter().any(|&s| s >= q) {
            return Err(Error::InvalidAssignment(format!(
                "tuple {tuple:?} is not in [{q}]^{n}"
            )));
        }
        let mut probs = vec![0.0; len];
        probs[encode(q, tuple)] = 1.0;
        Self::new(n, q, probs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probability of a full tuple.
    pub fn prob(&self, tuple: &[usize]) -> f64 {
        self.probs[encode(self.q, tuple)]
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        encode(self.q, tuple)
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        decode(self.n, self.q, index)
    }

    pub(crate) fn check_positions(&self, positions: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.n];
        for &pos in positions {
            if pos >= self.n {
                return Err(Error::PositionOutOfRange { position: pos, n: self.n });
            }
            if seen[pos] {
                return Err(Error::InvalidAssignment(format!("position {pos} repeats")));
            }
            seen[pos] = true;
        }
        Ok(())
    }

    /// Raw marginal table on `positions` (unchecked; may be empty → `[1.0]`).
    pub(crate) fn marginal_probs(&self, positions: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; self.q.pow(positions.len() as u32)];
        for_each_projected(self.n, self.q, positions, |x, y| out[y] += self.probs[x]);
        out
    }

    /// Entropy (bits) of the marginal on `positions`.
    pub(crate) fn marginal_entropy(&self, positions: &[usize]) -> f64 {
        if positions.is_empty() {
            return 0.0;
        }
        entropy_of(&self.marginal_probs(positions))
    }

    fn same_shape(&self, other: &JointPmf) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::DimensionMismatch(format!(
                "(n, q) = ({}, {}) vs ({}, {})",
                self.n, self.q, other.n, other.q
            )));
        }
        Ok(())
    }
}

pub fn encode(q: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &s| acc * q + s)
}

pub fn decode(n: usize, q: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = index % q;
        index /= q;
    }
    out
}

/// A set of pinned coordinates `X_S = x_S`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialAssignment {
    pairs: Vec<(usize, usize)>,
}

impl PartialAssignment {
    /// Positions must be pairwise distinct. Symbols are checked against the
    /// alphabet when the assignment is used.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut positions: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        positions.sort_unstable();
        if let Some(w) = positions.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidAssignment(format!("position {} repeats", w[0])));
        }
        Ok(Self { pairs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn validate(&self, n: usize, q: usize) -> Result<()> {
        for &(pos, sym) in &self.pairs {
            if pos >= n {
                return Err(Error::PositionOutOfRange { position: pos, n });
            }
            if sym >= q {
                return Err(Error::InvalidAssignment(format!(
                    "symbol {sym} at position {pos} is outside [{q}]"
                )));
            }
        }
        Ok(())
    }
}

/// Conditional laws of every unpinned coordinate, keyed by position.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalTable {
    pub rows: BTreeMap<usize, Vec<f64>>,
}

impl MarginalTable {
    pub fn row(&self, position: usize) -> Option<&[f64]> {
        self.rows.get(&position).map(Vec::as_slice)
    }
}

/// Shannon entropy of the full joint law, in bits.
pub fn entropy_bits(p: &JointPmf) -> f64 {
    entropy_of(&p.probs)
}

/// Law of `X_S` with positions encoded in the order given.
pub fn marginalize(p: &JointPmf, positions: &[usize]) -> Result<JointPmf> {
    if positions.is_empty() {
        return Err(Error::InvalidAssignment("cannot marginalize onto no positions".into()));
    }
    p.check_positions(positions)?;
    Ok(JointPmf {
        n: positions.len(),
        q: p.q,
        probs: p.marginal_probs(positions),
    })
}

/// The exact conditional marginal oracle. Pinnings of probability zero yield
/// uniform rows.
pub fn conditional_oracle(p: &JointPmf, a: &PartialAssignment) -> Result<MarginalTable> {
    a.validate(p.n, p.q)?;
    let pinned: Vec<Option<usize>> = {
        let mut v = vec![None; p.n];
        for &(pos, sym) in a.pairs() {
            v[pos] = Some(sym);
        }
        v
    };
    let free: Vec<usize> = (0..p.n).filter(|&i| pinned[i].is_none()).collect();
    let mut rows: BTreeMap<usize, Vec<f64>> =
        free.iter().map(|&i| (i, vec![0.0; p.q])).collect();
    let mut mass = 0.0;
    for (x, &px) in p.probs.iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        let digits = decode(p.n, p.q, x);
        if pinned
            .iter()
            .zip(&digits)
            .any(|(pin, d)| pin.is_some_and(|s| s != *d))
        {
            continue;
        }
        mass += px;
        for &i in &free {
            rows.get_mut(&i).expect("free row")[digits[i]] += px;
        }
    }
    let uniform = 1.0 / p.q as f64;
    for row in rows.values_mut() {
        if mass > 0.0 {
            row.iter_mut().for_each(|v| *v /= mass);
        } else {
            row.iter_mut().for_each(|v| *v = uniform);
        }
    }
    Ok(MarginalTable { rows })
}

/// `KL(p ‖ r)` in bits; `+∞` when `p` is not absolutely continuous w.r.t. `r`.
pub fn kl_bits(p: &JointPmf, r: &JointPmf) -> Result<f64> {
    p.same_shape(r)?;
    Ok(kl_slices(&p.probs, &r.probs))
}

pub(crate) fn kl_slices(p: &[f64], r: &[f64]) -> f64 {
    let mut terms = Vec::with_capacity(p.len());
    for (&a, &b) in p.iter().zip(r) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            terms.push(a * (a / b).log2());
        }
    }
    neumaier_sum(terms)
}

/// Total variation distance `½ Σ |p − r|`.
pub fn tv(p: &JointPmf, r: &JointPmf) -> Result<f64> {
    p.same_shape(r)?;
    let d = 0.5 * neumaier_sum(p.probs.iter().zip(&r.probs).map(|(a, b)| (a - b).abs()));
    Ok(d.clamp(0.0, 1.0))
}

/// The product of the one-dimensional marginals of `p`.
pub fn product_of_marginals(p: &JointPmf) -> JointPmf {
    let marginals: Vec<Vec<f64>> = (0..p.n).map(|i| p.marginal_probs(&[i])).collect();
    let probs = (0..p.len())
        .map(|x| {
            decode(p.n, p.q, x)
                .iter()
                .enumerate()
                .map(|(i, &s)| marginals[i][s])
                .product()
        })
        .collect();
    JointPmf { n: p.n, q: p.q, probs }
}
