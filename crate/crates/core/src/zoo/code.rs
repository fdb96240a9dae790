//! Affine linear codes over prime fields and Reed–Solomon codes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{self, check_prime};
use crate::combinatorics::{binomial, combinations};
use crate::dist::{encode, table_len, JointPmf};
use crate::error::{Error, Result};

/// Largest number of column subsets [`mds_check`] will test.
pub const MAX_MDS_SUBSETS: f64 = 1e6;

/// The coset `{uᵀG + shift : u ∈ F_q^k}` for a rank-`k` generator `G`
/// of shape `k × n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCode {
    q: u64,
    generator: Vec<Vec<u64>>,
    shift: Vec<u64>,
}

impl AffineCode {
    pub fn new(q: u64, generator: Vec<Vec<u64>>, shift: Vec<u64>) -> Result<Self> {
        check_prime(q)?;
        let k = generator.len();
        let n = shift.len();
        if k == 0 || n == 0 {
            return Err(Error::DimensionMismatch("generator needs k ≥ 1 rows and n ≥ 1 columns".into()));
        }
        if k > n {
            return Err(Error::RankDeficient { rank: n, expected: k });
        }
        if let Some(row) = generator.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "generator row of length {} for a shift of length {n}",
                row.len()
            )));
        }
        if let Some(&v) = generator.iter().flatten().chain(&shift).find(|&&v| v >= q) {
            return Err(Error::InvalidSpec(format!("entry {v} is not in F_{q}")));
        }
        let rank = field::rank(&generator, q);
        if rank != k {
            return Err(Error::RankDeficient { rank, expected: k });
        }
        Ok(Self { q, generator, shift })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.shift.len()
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<u64>] {
        &self.generator
    }

    pub fn shift(&self) -> &[u64] {
        &self.shift
    }

    fn column(&self, j: usize) -> Vec<u64> {
        self.generator.iter().map(|r| r[j]).collect()
    }

    /// Number of coordinates that are constant on the code (zero columns).
    pub fn zero_columns(&self) -> usize {
        (0..self.n()).filter(|&j| self.column(j).iter().all(|&v| v == 0)).count()
    }

    /// Number of columns outside the span of the remaining columns.
    pub fn free_columns(&self) -> usize {
        (0..self.n())
            .filter(|&j| {
                let others: Vec<Vec<u64>> =
                    (0..self.n()).filter(|&i| i != j).map(|i| self.column(i)).collect();
                let base = if others.is_empty() { 0 } else { field::rank(&others, self.q) };
                let mut all = others;
                all.push(self.column(j));
                field::rank(&all, self.q) > base
            })
            .count()
    }

    /// `(n − k − #zero columns)·log₂ q`.
    pub fn tc_formula(&self) -> f64 {
        (self.n() - self.k() - self.zero_columns()) as f64 * (self.q as f64).log2()
    }

    /// `(k − #free columns)·log₂ q`.
    pub fn dtc_formula(&self) -> f64 {
        (self.k() - self.free_columns()) as f64 * (self.q as f64).log2()
    }

    /// The codeword `uᵀG + shift`.
    pub fn encode_message(&self, u: &[u64]) -> Vec<u64> {
        let q = self.q;
        (0..self.n())
            .map(|j| {
                self.generator
                    .iter()
                    .zip(u)
                    .fold(self.shift[j], |acc, (row, &c)| field::add(acc, field::mul(c, row[j], q), q))
            })
            .collect()
    }

    /// All `q^k` codewords, messages in big-endian order.
    pub fn codewords(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let k = self.k();
        let q = self.q as usize;
        (0..q.pow(k as u32)).map(move |m| {
            let u: Vec<u64> = crate::dist::decode(k, q, m).into_iter().map(|v| v as u64).collect();
            self.encode_message(&u)
        })
    }

    /// Whether some codeword takes `values` on `positions`.
    pub fn contains_partial(&self, positions: &[usize], values: &[u64]) -> Result<bool> {
        if positions.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} positions, {} values",
                positions.len(),
                values.len()
            )));
        }
        let q = self.q;
        // rows of [G_Sᵀ | x_S − shift_S]; consistent iff no pivot in the last column
        let mut rows = Vec::with_capacity(positions.len());
        for (&pos, &v) in positions.iter().zip(values) {
            if pos >= self.n() {
                return Err(Error::PositionOutOfRange { position: pos, n: self.n() });
            }
            if v >= q {
                return Err(Error::InvalidAssignment(format!("{v} is not in F_{q}")));
            }
            let mut row = self.column(pos);
            row.push(field::sub(v, self.shift[pos], q));
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok(true);
        }
        let pivots = field::row_reduce(&mut rows, q);
        Ok(!pivots.contains(&self.k()))
    }
}

/// Uniform law on the codewords.
pub fn code_dist(c: &AffineCode) -> Result<JointPmf> {
    let q = c.q as usize;
    let len = table_len(q, c.n())?;
    let mut probs = vec![0.0; len];
    let mass = (c.q as f64).powi(-(c.k() as i32));
    for word in c.codewords() {
        let tuple: Vec<usize> = word.iter().map(|&v| v as usize).collect();
        probs[encode(q, &tuple)] += mass;
    }
    JointPmf::new(c.n(), q, probs)
}

/// Reed–Solomon code: polynomials of degree `< k` evaluated at `eval_points`,
/// generator rows `(a_j^i)_j` for `i = 0..k`.
pub fn rs_code(q: u64, k: usize, eval_points: &[u64], shift: Vec<u64>) -> Result<AffineCode> {
    check_prime(q)?;
    let n = eval_points.len();
    if (q as usize) < n {
        return Err(Error::FieldTooSmall(format!("q = {q} < n = {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidSpec(format!("k = {k} is outside 1..={n}")));
    }
    if shift.len() != n {
        return Err(Error::DimensionMismatch(format!("shift of length {} for n = {n}", shift.len())));
    }
    let mut seen = std::collections::HashSet::new();
    for &a in eval_points {
        if a >= q {
            return Err(Error::InvalidSpec(format!("evaluation point {a} is not in F_{q}")));
        }
        if !seen.insert(a) {
            return Err(Error::DuplicateEvalPoints(a));
        }
    }
    let generator = (0..k as u64)
        .map(|i| eval_points.iter().map(|&a| field::pow(a, i, q)).collect())
        .collect();
    AffineCode::new(q, generator, shift)
}

/// True iff every `k` columns of the generator are independent.
pub fn mds_check(c: &AffineCode) -> Result<bool> {
    let (n, k) = (c.n(), c.k());
    let needed = binomial(n, k);
    if needed > MAX_MDS_SUBSETS {
        return Err(Error::InfeasibleEnumeration {
            what: "column subsets",
            needed,
            limit: MAX_MDS_SUBSETS,
        });
    }
    Ok(combinations(n, k).all(|cols| {
        let sub: Vec<Vec<u64>> = cols.iter().map(|&j| c.column(j)).collect();
        field::rank(&sub, c.q) == k
    }))
}

/// RS code on points `0..n` shifted by a uniform random vector drawn from
/// `seed`. Any `|S| ≥ k` target is then hit with probability `q^{k − |S|}`.
pub fn random_balanced_rs(q: u64, k: usize, n: usize, seed: u64) -> Result<AffineCode> {
    let points: Vec<u64> = (0..n as u64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    check_prime(q)?;
    let shift = (0..n).map(|_| rng.gen_range(0..q)).collect();
    rs_code(q, k, &points, shift)
}
