//! Enumeration helpers shared by the curve, schedule and sampler modules.

/// `C(n, k)` as a float (exact below 2^53).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// `n! / Π s_i!` for block sizes summing to `n`.
pub fn multinomial(sizes: &[usize]) -> f64 {
    let mut remaining: usize = sizes.iter().sum();
    let mut total = 1.0;
    for &s in sizes {
        total *= binomial(remaining, s);
        remaining -= s;
    }
    total
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations {
        n,
        current: if k <= n { Some((0..k).collect()) } else { None },
    }
}

pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// All compositions of `n` (ordered tuples of positive parts summing to `n`).
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![];
    }
    // each of the n-1 gaps is either a cut or not
    (0u64..1 << (n - 1))
        .map(|mask| {
            let mut parts = Vec::new();
            let mut len = 1;
            for gap in 0..n - 1 {
                if mask >> gap & 1 == 1 {
                    parts.push(len);
                    len = 1;
                } else {
                    len += 1;
                }
            }
            parts.push(len);
            parts
        })
        .collect()
}

/// All ordered set partitions of `0..n` with the given block sizes; each block
/// sorted ascending.
pub fn ordered_partitions(sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let n: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut blocks = Vec::with_capacity(sizes.len());
    fill(&(0..n).collect::<Vec<_>>(), sizes, &mut blocks, &mut out);
    out
}

fn fill(
    remaining: &[usize],
    sizes: &[usize],
    blocks: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let Some((&size, rest)) = sizes.split_first() else {
        out.push(blocks.clone());
        return;
    };
    for pick in combinations(remaining.len(), size) {
        let block: Vec<usize> = pick.iter().map(|&i| remaining[i]).collect();
        let left: Vec<usize> = remaining
            .iter()
            .enumerate()
            .filter(|(i, _)| pick.binary_search(i).is_err())
            .map(|(_, &v)| v)
            .collect();
        blocks.push(block);
        fill(&left, rest, blocks, out);
        blocks.pop();
    }
}
