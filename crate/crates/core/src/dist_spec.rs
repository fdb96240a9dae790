//! JSON descriptions of distributions, tagged by `kind`:
//!
//! ```json
//! {"kind":"explicit","q":2,"n":2,"pmf":[0.5,0,0,0.5]}
//! {"kind":"uniform","q":2,"n":6}
//! {"kind":"affine_code","q":2,"generator":[[1,1,1]],"shift":[0,0,0]}
//! {"kind":"rs","q":7,"n":5,"k":2,"eval_points":[0,1,2,3,4],"seed":3}
//! {"kind":"mixture","weights":[0.5,0.5],"components":[[[1,0],[1,0]],[[0,1],[0,1]]]}
//! {"kind":"elevated","base":{..},"code":{"kind":"rs",..}}
//! ```
//!
//! `generator` may also be a flat row-major list of `k·n` entries. For `rs`,
//! `eval_points` defaults to `0..n`; the shift is either given, drawn from
//! `seed`, or zero.

use serde::{Deserialize, Serialize};

use crate::dist::JointPmf;
use crate::error::{Error, Result};
use crate::zoo::{self, AffineCode, ProductMixtureSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Rows(Vec<Vec<u64>>),
    Flat(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistSpec {
    Explicit {
        q: usize,
        n: usize,
        pmf: Vec<f64>,
    },
    Uniform {
        q: usize,
        n: usize,
    },
    AffineCode {
        q: u64,
        generator: GeneratorSpec,
        shift: Vec<u64>,
    },
    Rs {
        q: u64,
        n: usize,
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eval_points: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shift: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<Vec<Vec<f64>>>,
    },
    Elevated {
        base: Box<DistSpec>,
        code: Box<DistSpec>,
    },
}

impl DistSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs serialize")
    }

    /// The explicit spec of a table.
    pub fn explicit(p: &JointPmf) -> Self {
        DistSpec::Explicit { q: p.q(), n: p.n(), pmf: p.probs().to_vec() }
    }

    /// The code behind an `affine_code` or `rs` spec.
    pub fn code(&self) -> Result<AffineCode> {
        match self {
            DistSpec::AffineCode { q, generator, shift } => {
                let rows = match generator {
                    GeneratorSpec::Rows(rows) => rows.clone(),
                    GeneratorSpec::Flat(flat) => {
                        let n = shift.len();
                        if n == 0 || flat.len() % n != 0 {
                            return Err(Error::DimensionMismatch(format!(
                                "flat generator of length {} is not a multiple of n = {n}",
                                flat.len()
                            )));
                        }
                        flat.chunks(n).map(<[u64]>::to_vec).collect()
                    }
                };
                AffineCode::new(*q, rows, shift.clone())
            }
            DistSpec::Rs { q, n, k, eval_points, shift, seed } => {
                let points = eval_points.clone().unwrap_or_else(|| (0..*n as u64).collect());
                if points.len() != *n {
                    return Err(Error::DimensionMismatch(format!(
                        "{} evaluation points for n = {n}",
                        points.len()
                    )));
                }
                match (shift, seed) {
                    (Some(_), Some(_)) => {
                        Err(Error::InvalidSpec("give either shift or seed, not both".into()))
                    }
                    (Some(shift), None) => zoo::rs_code(*q, *k, &points, shift.clone()),
                    (None, Some(seed)) => {
                        let random = zoo::random_balanced_rs(*q, *k, *n, *seed)?;
                        zoo::rs_code(*q, *k, &points, random.shift().to_vec())
                    }
                    (None, None) => zoo::rs_code(*q, *k, &points, vec![0; *n]),
                }
            }
            _ => Err(Error::InvalidSpec("spec does not describe a code".into())),
        }
    }

    pub fn build(&self) -> Result<JointPmf> {
        match self {
            DistSpec::Explicit { q, n, pmf } => JointPmf::new(*n, *q, pmf.clone()),
            DistSpec::Uniform { q, n } => zoo::uniform_dist(*q, *n),
            DistSpec::AffineCode { .. } | DistSpec::Rs { .. } => zoo::code_dist(&self.code()?),
            DistSpec::Mixture { weights, components } => zoo::product_mixture(&ProductMixtureSpec {
                weights: weights.clone(),
                components: components.clone(),
            }),
            DistSpec::Elevated { base, code } => zoo::elevated_family(&base.build()?, &code.code()?),
        }
    }
}

/// Parses and builds in one step.
pub fn load_dist(text: &str) -> Result<JointPmf> {
    DistSpec::parse(text)?.build()
}
