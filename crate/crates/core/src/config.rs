use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::params::{validate_params, ModelParams};
use crate::rng::task_rng;

/// Point `slot` of cell `cell`. Serialized as `[cell, slot]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Point {
    pub cell: usize,
    pub slot: usize,
}

impl From<(usize, usize)> for Point {
    fn from((cell, slot): (usize, usize)) -> Self {
        Point { cell, slot }
    }
}

impl From<Point> for (usize, usize) {
    fn from(p: Point) -> Self {
        (p.cell, p.slot)
    }
}

/// A partition of the `rn` points into parts of size `s`, in canonical form:
/// points sorted within each part and parts sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfiguration", into = "RawConfiguration")]
pub struct Configuration {
    params: ModelParams,
    parts: Vec<Vec<Point>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawConfiguration {
    r: usize,
    s: usize,
    n: usize,
    parts: Vec<Vec<Point>>,
}

impl TryFrom<RawConfiguration> for Configuration {
    type Error = Error;

    fn try_from(raw: RawConfiguration) -> Result<Self> {
        let params = validate_params(raw.r, raw.s, raw.n)?;
        Configuration::new(params, raw.parts)
    }
}

impl From<Configuration> for RawConfiguration {
    fn from(c: Configuration) -> Self {
        let ModelParams { r, s, n } = c.params;
        RawConfiguration {
            r,
            s,
            n,
            parts: c.parts,
        }
    }
}

impl Configuration {
    /// Checks that `parts` is a partition of all points into `s`-sets and
    /// canonicalizes it.
    pub fn new(params: ModelParams, mut parts: Vec<Vec<Point>>) -> Result<Self> {
        params.require_d1()?;
        let ModelParams { r, s, n } = params;
        if parts.len() != r * n / s {
            return Err(Error::Invalid(format!(
                "expected {} parts, found {}",
                r * n / s,
                parts.len()
            )));
        }
        let mut seen = vec![false; r * n];
        for part in &mut parts {
            if part.len() != s {
                return Err(Error::Invalid(format!(
                    "part of size {} (expected {s})",
                    part.len()
                )));
            }
            for p in part.iter() {
                if p.cell >= n || p.slot >= r {
                    return Err(Error::Invalid(format!(
                        "point {:?} out of range",
                        (p.cell, p.slot)
                    )));
                }
                let k = p.cell * r + p.slot;
                if std::mem::replace(&mut seen[k], true) {
                    return Err(Error::Invalid(format!(
                        "point {:?} repeated",
                        (p.cell, p.slot)
                    )));
                }
            }
            part.sort_unstable();
        }
        parts.sort_unstable();
        Ok(Configuration { params, parts })
    }

    /// Builds a configuration from a list of point indices `cell * r + slot`
    /// read off in consecutive blocks of `s`.
    pub(crate) fn from_point_order(params: ModelParams, order: &[usize]) -> Self {
        let r = params.r;
        let mut parts: Vec<Vec<Point>> = order
            .chunks(params.s)
            .map(|chunk| {
                let mut part: Vec<Point> = chunk
                    .iter()
                    .map(|&k| Point {
                        cell: k / r,
                        slot: k % r,
                    })
                    .collect();
                part.sort_unstable();
                part
            })
            .collect();
        parts.sort_unstable();
        Configuration { params, parts }
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn parts(&self) -> &[Vec<Point>] {
        &self.parts
    }

    /// Edge `i` is the cell multiset of part `i`.
    pub fn project(&self) -> Hypergraph {
        Hypergraph {
            n: self.params.n,
            edges: self.part_cells(),
        }
    }

    /// Sorted cell lists of the parts, in part order.
    pub fn part_cells(&self) -> Vec<Vec<usize>> {
        self.parts
            .iter()
            .map(|p| p.iter().map(|q| q.cell).collect())
            .collect()
    }
}

pub fn project(config: &Configuration) -> Hypergraph {
    config.project()
}

/// Uniform element of the configuration space, determined by `seed`.
pub fn sample_configuration(params: ModelParams, seed: u64) -> Result<Configuration> {
    sample_configuration_with(params, &mut task_rng(seed, 0))
}

/// Uniform random configuration: shuffle all points and cut into blocks of `s`.
pub fn sample_configuration_with<R: Rng + ?Sized>(
    params: ModelParams,
    rng: &mut R,
) -> Result<Configuration> {
    params.require_d1()?;
    let mut order: Vec<usize> = (0..params.points()).collect();
    order.shuffle(rng);
    Ok(Configuration::from_point_order(params, &order))
}

/// Rejection sampler for a uniform simple hypergraph.
pub fn sample_simple_hypergraph(
    params: ModelParams,
    seed: u64,
    max_rejects: u64,
) -> Result<Hypergraph> {
    sample_simple_counted(params, seed, max_rejects).map(|(h, _)| h)
}

/// As [`sample_simple_hypergraph`], also returning how many samples were rejected.
pub fn sample_simple_counted(
    params: ModelParams,
    seed: u64,
    max_rejects: u64,
) -> Result<(Hypergraph, u64)> {
    let mut rng = task_rng(seed, 0);
    let mut rejects = 0;
    loop {
        let h = sample_configuration_with(params, &mut rng)?.project();
        if h.is_simple() {
            return Ok((h, rejects));
        }
        rejects += 1;
        if rejects >= max_rejects {
            return Err(Error::RejectionLimit(rejects));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: usize, s: usize, n: usize) -> ModelParams {
        validate_params(r, s, n).unwrap()
    }

    #[test]
    fn shapes() {
        let c = sample_configuration(p(2, 3, 3), 1).unwrap();
        assert_eq!(c.parts().len(), 2);
        assert!(c.parts().iter().all(|q| q.len() == 3));
        let c = sample_configuration(p(3, 2, 4), 1).unwrap();
        assert_eq!(c.parts().len(), 6);
        assert!(sample_configuration(p(3, 4, 7), 1).is_err());
    }

    #[test]
    fn every_point_once() {
        for seed in 0..20 {
            let c = sample_configuration(p(3, 3, 7), seed).unwrap();
            let mut all: Vec<Point> = c.parts().iter().flatten().copied().collect();
            all.sort();
            all.dedup();
            assert_eq!(all.len(), 21);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            sample_configuration(p(3, 2, 10), 42).unwrap(),
            sample_configuration(p(3, 2, 10), 42).unwrap()
        );
    }

    #[test]
    fn projection() {
        let pts = |v: &[(usize, usize)]| v.iter().map(|&x| Point::from(x)).collect::<Vec<_>>();
        let c = Configuration::new(
            p(2, 3, 3),
            vec![
                pts(&[(0, 0), (0, 1), (2, 0)]),
                pts(&[(1, 0), (1, 1), (2, 1)]),
            ],
        )
        .unwrap();
        let h = c.project();
        assert_eq!(h.edges, vec![vec![0, 0, 2], vec![1, 1, 2]]);
        assert!(!h.is_simple());
    }

    #[test]
    fn simple_samples() {
        let h = sample_simple_hypergraph(p(3, 2, 4), 3, 10_000).unwrap();
        let mut edges = h.edges.clone();
        edges.sort();
        assert_eq!(
            edges,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(
            sample_simple_hypergraph(p(2, 3, 3), 3, 200),
            Err(Error::RejectionLimit(200))
        );
    }

    #[test]
    fn json_round_trip() {
        let c = sample_configuration(p(2, 3, 3), 5).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with(r#"{"r":2,"s":3,"n":3,"parts":[[["#));
        assert_eq!(serde_json::from_str::<Configuration>(&text).unwrap(), c);
        let bad = r#"{"r":2,"s":3,"n":3,"parts":[[[0,0],[0,0],[1,0]],[[1,1],[2,0],[2,1]]]}"#;
        assert!(serde_json::from_str::<Configuration>(bad).is_err());
    }
}
