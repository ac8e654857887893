use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::moments::{decay_ratio, lambda_zeta_sq, tail_bound};
use super::spectral::spectral_pair;
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::rng::task_rng;

/// Truncation point for the product defining `W`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JmaxChoice {
    pub j_max: usize,
    /// Upper bound on `Σ_{j > j_max} λ_j ζ_j²`.
    pub tail_bound: f64,
}

/// Smallest `j >= j_start` with `λ_j ζ_j² < 1e-14` and tail bound `< 1e-12`.
pub fn select_jmax(r: usize, s: usize, j_start: usize) -> Result<JmaxChoice> {
    let theta = decay_ratio(r, s)?;
    let mut j = j_start.max(1);
    while !(lambda_zeta_sq(r, s, j) < 1e-14 && tail_bound(theta, j) < 1e-12) {
        j += 1;
        if j > 100_000 {
            return Err(Error::Precondition(format!(
                "no truncation point found for ({r}, {s})"
            )));
        }
    }
    Ok(JmaxChoice {
        j_max: j,
        tail_bound: tail_bound(theta, j),
    })
}

/// Precomputed factors for sampling `W = Π_{j=j_start}^{j_max} (1+ζ_j)^{Z_j} e^{-λ_j ζ_j}`
/// with independent `Z_j ~ Poisson(λ_j)`.
#[derive(Clone, Debug)]
pub struct WSampler {
    factors: Vec<Factor>,
}

#[derive(Clone, Debug)]
struct Factor {
    lambda: f64,
    poisson: Poisson<f64>,
    /// `ln(1+ζ)`, or `None` when `ζ = -1`.
    log1p_zeta: Option<f64>,
    /// `ln(1+ζ) - ζ`.
    excess: f64,
}

/// `ln(1+z) - z`, accurate for small `|z|`.
pub fn log1p_minus(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        let z2 = z * z;
        z2 * (-0.5 + z * (1.0 / 3.0 + z * (-0.25 + z * (0.2 - z / 6.0))))
    } else {
        z.ln_1p() - z
    }
}

impl WSampler {
    pub fn new(r: usize, s: usize, j_start: usize, j_max: usize) -> Result<Self> {
        if r < 2 || s < 2 || j_start < 1 || j_max < j_start {
            return Err(Error::Precondition(format!(
                "need r, s >= 2 and 1 <= j_start <= j_max; got ({r}, {s}, {j_start}, {j_max})"
            )));
        }
        let factors = (j_start..=j_max)
            .map(|j| {
                let p = spectral_pair(r, s, j);
                let lambda = p.lambda_f64();
                let zeta = p.zeta_f64();
                let poisson = Poisson::new(lambda)
                    .map_err(|e| Error::Domain(format!("Poisson mean {lambda}: {e}")))?;
                let minus_one = p.zeta == crate::exact::ExactQ::int(-1);
                Ok(Factor {
                    lambda,
                    poisson,
                    log1p_zeta: (!minus_one).then(|| zeta.ln_1p()),
                    excess: if minus_one {
                        f64::NAN
                    } else {
                        log1p_minus(zeta)
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WSampler { factors })
    }

    /// One draw, accumulated as `Σ (Z_j - λ_j) ln(1+ζ_j) + λ_j (ln(1+ζ_j) - ζ_j)`.
    /// A factor with `ζ_j = -1` and `Z_j > 0` makes the draw exactly zero.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        let mut zero = false;
        for f in &self.factors {
            let z = f.poisson.sample(rng);
            let term = match f.log1p_zeta {
                Some(l) => (z - f.lambda) * l + f.lambda * f.excess,
                None if z > 0.0 => {
                    zero = true;
                    continue;
                }
                // (1+ζ)^0 e^{-λζ} = e^{λ}
                None => f.lambda,
            };
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        if zero {
            0.0
        } else {
            sum.exp()
        }
    }
}

/// A single draw of `W` determined by `seed`.
pub fn sample_w(r: usize, s: usize, j_start: usize, j_max: usize, seed: u64) -> Result<f64> {
    let sampler = WSampler::new(r, s, j_start, j_max)?;
    Ok(sampler.sample(&mut task_rng(seed, 0)))
}

/// `count` draws; draw `i` uses stream `i` of `seed`.
pub fn sample_w_batch(
    r: usize,
    s: usize,
    j_start: usize,
    j_max: usize,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<Vec<f64>> {
    let sampler = WSampler::new(r, s, j_start, j_max)?;
    Ok(map_indexed(exec, count, |i| {
        sampler.sample(&mut task_rng(seed, i as u64))
    }))
}

/// One output row of a `W` study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WSampleRecord {
    pub seed: u64,
    pub index: u64,
    pub j_start: usize,
    pub j_max: usize,
    pub sample: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let j = select_jmax(3, 2, 1).unwrap().j_max;
        assert_eq!(
            sample_w(3, 2, 1, j, 9).unwrap(),
            sample_w(3, 2, 1, j, 9).unwrap()
        );
    }

    #[test]
    fn two_two_zero_when_any_cycle() {
        let sampler = WSampler::new(2, 2, 1, 6).unwrap();
        let mut rng = task_rng(1, 0);
        let mut saw_zero = false;
        for _ in 0..200 {
            let w = sampler.sample(&mut rng);
            if w == 0.0 {
                saw_zero = true;
            } else {
                // all Z_j = 0: W = exp(Σ λ_j)
                let total: f64 = (1..=6).map(|j| spectral_pair(2, 2, j).lambda_f64()).sum();
                assert!((w - total.exp()).abs() < 1e-9 * w);
            }
        }
        assert!(saw_zero);
    }

    #[test]
    fn small_log_excess() {
        for z in [1e-5_f64, -3e-6, 2e-3, -0.5] {
            let naive = z.ln_1p() - z;
            assert!((log1p_minus(z) - naive).abs() <= 1e-9 * naive.abs());
        }
    }

    #[test]
    fn jmax_rule() {
        let c = select_jmax(3, 2, 1).unwrap();
        assert!(lambda_zeta_sq(3, 2, c.j_max) < 1e-14);
        assert!(c.tail_bound < 1e-12);
        let theta = decay_ratio(3, 2).unwrap();
        let prev = c.j_max - 1;
        assert!(!(lambda_zeta_sq(3, 2, prev) < 1e-14 && tail_bound(theta, prev) < 1e-12));
    }
}
