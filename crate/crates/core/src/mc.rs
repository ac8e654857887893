//! Seeded Monte Carlo over the configuration model. Trial `i` draws from
//! stream `i` of the run seed, and per-trial results are reduced in index
//! order, so summaries are identical for any thread count.

use serde::{Deserialize, Serialize};

use crate::config::sample_configuration_with;
use crate::cycles::census_cycles;
use crate::error::Result;
use crate::par::{map_indexed, Execution};
use crate::params::ModelParams;
use crate::rng::task_rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McOptions {
    pub trials: usize,
    pub seed: u64,
    /// Longest cycle length counted.
    pub j_max: usize,
    /// Search for a spanning tree in each simple sample.
    pub trees: bool,
    /// Step budget for each spanning-tree search.
    pub budget: u64,
}

impl McOptions {
    pub fn new(trials: usize, seed: u64, j_max: usize) -> Self {
        McOptions {
            trials,
            seed,
            j_max,
            trees: true,
            budget: crate::DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub counts: Vec<u64>,
    pub simple: bool,
    /// Only for simple samples.
    pub connected: Option<bool>,
    /// Only for simple samples with a tree search; `None` inside when censored.
    pub has_tree: Option<Option<bool>>,
}

pub fn run_trial(params: ModelParams, opts: &McOptions, index: u64) -> Result<Trial> {
    let mut rng = task_rng(opts.seed, index);
    let config = sample_configuration_with(params, &mut rng)?;
    let census = census_cycles(&config, opts.j_max);
    let counts = (1..=opts.j_max).map(|j| census.get(j)).collect();
    let h = config.project();
    let simple = h.is_simple();
    let (connected, has_tree) = if simple {
        let tree = if opts.trees {
            match h.find_spanning_tree(opts.budget) {
                Ok(t) => Some(Some(t.is_some())),
                Err(e) if e.is_budget() => Some(None),
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        (Some(h.is_connected()), tree)
    } else {
        (None, None)
    };
    Ok(Trial {
        counts,
        simple,
        connected,
        has_tree,
    })
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut n, mut mean, mut m2) = (0usize, 0.0f64, 0.0f64);
        for x in values {
            n += 1;
            let d = x - mean;
            mean += d / n as f64;
            m2 += d * (x - mean);
        }
        let se = if n > 1 {
            (m2 / (n - 1) as f64 / n as f64).sqrt()
        } else {
            f64::NAN
        };
        Estimate {
            mean,
            se,
            samples: n,
        }
    }

    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.se
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub params: ModelParams,
    pub options: McOptions,
    /// `cycle_means[j-1]` estimates `E X_j`.
    pub cycle_means: Vec<Estimate>,
    pub simple_rate: Estimate,
    /// Among simple samples.
    pub connected_rate: Option<Estimate>,
    /// Among simple samples whose tree search finished.
    pub tree_rate: Option<Estimate>,
    pub censored: usize,
}

pub fn run_mc(params: ModelParams, opts: McOptions, exec: Execution) -> Result<McSummary> {
    params.require_d1()?;
    let trials = map_indexed(exec, opts.trials, |i| run_trial(params, &opts, i as u64))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(params, opts, &trials))
}

pub fn summarize(params: ModelParams, opts: McOptions, trials: &[Trial]) -> McSummary {
    let cycle_means = (0..opts.j_max)
        .map(|j| Estimate::from_values(trials.iter().map(|t| t.counts[j] as f64)))
        .collect();
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let simple_rate = Estimate::from_values(trials.iter().map(|t| flag(t.simple)));
    let connected: Vec<f64> = trials
        .iter()
        .filter_map(|t| t.connected)
        .map(flag)
        .collect();
    let trees: Vec<Option<bool>> = trials.iter().filter_map(|t| t.has_tree).collect();
    let censored = trees.iter().filter(|t| t.is_none()).count();
    let finished: Vec<f64> = trees.iter().flatten().map(|&b| flag(b)).collect();
    McSummary {
        params,
        options: opts,
        cycle_means,
        simple_rate,
        connected_rate: (!connected.is_empty()).then(|| Estimate::from_values(connected)),
        tree_rate: (!finished.is_empty()).then(|| Estimate::from_values(finished)),
        censored,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    #[test]
    fn reproducible_across_modes() {
        let p = validate_params(3, 2, 10).unwrap();
        let opts = McOptions::new(200, 11, 4);
        let a = run_mc(p, opts, Execution::Sequential).unwrap();
        let b = run_mc(p, opts, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn estimates() {
        let e = Estimate::from_values([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        assert!((e.se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(e.within(2.0, 1.0));
    }

    #[test]
    fn k4_always_connected() {
        let p = validate_params(3, 2, 4).unwrap();
        let s = run_mc(p, McOptions::new(500, 1, 3), Execution::default()).unwrap();
        let c = s.connected_rate.unwrap();
        assert_eq!(c.mean, 1.0);
        assert_eq!(s.tree_rate.unwrap().mean, 1.0);
    }
}
