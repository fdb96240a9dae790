#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unmask_core::zoo::{self, copy_dist, product_mixture, random_pmf, random_sparse_pmf, uniform_dist, ProductMixtureSpec};
use unmask_core::{code_dist, load_dist, random_balanced_rs, rs_code, AffineCode, JointPmf};

pub const BUNDLED: [(&str, &str); 8] = [
    ("rs_q7_n5_k2", include_str!("../../../../data/rs_q7_n5_k2.json")),
    ("rs_balanced_q7_n5_k2", include_str!("../../../../data/rs_balanced_q7_n5_k2.json")),
    ("uniform_q2_n6", include_str!("../../../../data/uniform_q2_n6.json")),
    ("correlated_pair", include_str!("../../../../data/correlated_pair.json")),
    ("asymmetric_q2_n3", include_str!("../../../../data/asymmetric_q2_n3.json")),
    ("mixture_q2_n4", include_str!("../../../../data/mixture_q2_n4.json")),
    ("elevated_pair_rs3", include_str!("../../../../data/elevated_pair_rs3.json")),
    ("parity_q2_n5", include_str!("../../../../data/parity_q2_n5.json")),
];

pub fn bundled() -> Vec<(String, JointPmf)> {
    BUNDLED
        .iter()
        .map(|(name, text)| (name.to_string(), load_dist(text).expect("bundled spec")))
        .collect()
}

pub fn random_mixture(m: usize, n: usize, q: usize, rng: &mut ChaCha8Rng) -> JointPmf {
    let mut row = || {
        let w: Vec<f64> = (0..q).map(|_| rng.gen::<f64>() + 0.02).collect();
        let t: f64 = w.iter().sum();
        w.into_iter().map(|v| v / t).collect::<Vec<_>>()
    };
    let components = (0..m).map(|_| (0..n).map(|_| row()).collect()).collect();
    product_mixture(&ProductMixtureSpec { weights: vec![1.0 / m as f64; m], components }).unwrap()
}

fn code(q: u64, generator: Vec<Vec<u64>>) -> JointPmf {
    let n = generator[0].len();
    code_dist(&AffineCode::new(q, generator, vec![0; n]).unwrap()).unwrap()
}

/// Named small distributions covering every family (n ≤ 7).
pub fn zoo_battery() -> Vec<(String, JointPmf)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out: Vec<(String, JointPmf)> = vec![
        ("uniform q2 n4".into(), uniform_dist(2, 4).unwrap()),
        ("uniform q3 n3".into(), uniform_dist(3, 3).unwrap()),
        ("copy q2 n5".into(), copy_dist(2, 5).unwrap()),
        ("copy q3 n3".into(), copy_dist(3, 3).unwrap()),
    ];
    for k in 1..=4 {
        let c = rs_code(7, k, &[0, 1, 2, 3, 4], vec![0; 5]).unwrap();
        out.push((format!("rs q7 n5 k{k}"), code_dist(&c).unwrap()));
    }
    out.push((
        "balanced rs q5 n4 k2".into(),
        code_dist(&random_balanced_rs(5, 2, 4, 3).unwrap()).unwrap(),
    ));
    out.push(("code with zero column".into(), code(3, vec![vec![1, 0, 2, 1], vec![0, 0, 1, 1]])));
    out.push(("code with free column".into(), code(2, vec![vec![1, 1, 0, 0, 0], vec![0, 0, 1, 1, 1]])));
    out.push(("mixture m2 q2 n5".into(), random_mixture(2, 5, 2, &mut rng)));
    out.push(("mixture m4 q3 n4".into(), random_mixture(4, 4, 3, &mut rng)));
    out.push(("random q2 n5".into(), random_pmf(2, 5, &mut rng).unwrap()));
    out.push(("random q3 n3".into(), random_pmf(3, 3, &mut rng).unwrap()));
    out.push(("sparse q2 n6".into(), random_sparse_pmf(2, 6, 10, &mut rng).unwrap()));
    out.push(("sparse q3 n4".into(), random_sparse_pmf(3, 4, 7, &mut rng).unwrap()));
    out.extend(bundled());
    out
}

/// Larger binary members for the round-count checks (n ≤ 12).
pub fn wide_battery() -> Vec<(String, JointPmf)> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    vec![
        ("uniform q2 n10".into(), uniform_dist(2, 10).unwrap()),
        ("copy q2 n12".into(), copy_dist(2, 12).unwrap()),
        ("mixture m2 q2 n10".into(), random_mixture(2, 10, 2, &mut rng)),
        ("mixture m3 q2 n9".into(), random_mixture(3, 9, 2, &mut rng)),
        (
            "code q2 n10 k3".into(),
            code(
                2,
                vec![
                    vec![1, 0, 0, 1, 1, 0, 1, 0, 1, 1],
                    vec![0, 1, 0, 1, 0, 1, 1, 1, 0, 1],
                    vec![0, 0, 1, 0, 1, 1, 1, 1, 1, 0],
                ],
            ),
        ),
        ("random q2 n8".into(), random_pmf(2, 8, &mut rng).unwrap()),
        ("sparse q2 n10".into(), random_sparse_pmf(2, 10, 30, &mut rng).unwrap()),
        (
            "parity q2 n11".into(),
            code(2, (0..10).map(|i| (0..11).map(|j| u64::from(j == i || j == 10)).collect()).collect()),
        ),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn zoo_uniform(q: usize, n: usize) -> JointPmf {
    zoo::uniform_dist(q, n).unwrap()
}
