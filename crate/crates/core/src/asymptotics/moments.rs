use serde::{Deserialize, Serialize};

use super::spectral::spectral_pair;
use crate::error::{Error, Result};
use crate::params::ModelParams;

fn ln(x: f64) -> f64 {
    x.ln()
}

fn reject_two_two(r: usize, s: usize) -> Result<()> {
    if r == 2 && s == 2 {
        Err(Error::Domain(
            "(r, s) = (2, 2) is degenerate (rs - r - s = 0)".into(),
        ))
    } else {
        Ok(())
    }
}

/// Log of the leading-order `E Y`:
///
/// `(s-1)√(r-1) / (n m^{(s+1)/(2(s-1))}) * ((s-1)^r (r-1)^{(r-1)s} / (r^m m^{m/(s-1)}))^{n/s}`,
/// with `m = rs - r - s`.
pub fn ln_asymptotic_ey(params: ModelParams) -> Result<f64> {
    params.require_admissible()?;
    let ModelParams { r, s, n } = params;
    reject_two_two(r, s)?;
    let (rf, sf, nf) = (r as f64, s as f64, n as f64);
    let m = rf * sf - rf - sf;
    let prefactor =
        ln(sf - 1.0) + 0.5 * ln(rf - 1.0) - ln(nf) - (sf + 1.0) / (2.0 * (sf - 1.0)) * ln(m);
    let base =
        rf * ln(sf - 1.0) + (rf - 1.0) * sf * ln(rf - 1.0) - m * ln(rf) - m / (sf - 1.0) * ln(m);
    Ok(prefactor + nf / sf * base)
}

pub fn asymptotic_ey(params: ModelParams) -> Result<f64> {
    ln_asymptotic_ey(params).map(f64::exp)
}

/// Leading-order `E Y_G` for the simple hypergraph, with both candidate
/// correction factors.
///
/// The operative relation is `E Y_G ~ exp(-λ₁ζ₁) E Y`, where
/// `-λ₁ζ₁ = (rs-s-1)/(2(r-1))`. A second published form of the prefactor reads
/// `exp((rs-r-1)/(2(r-1)))`; the two agree only when `r = s`, so both are
/// reported and `agree` says whether they coincide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleFirstMoment {
    /// `ln E Y_G` using `exp(-λ₁ζ₁)`.
    pub ln_value: f64,
    /// `-λ₁ζ₁`.
    pub ln_prefactor: f64,
    /// `(rs-r-1)/(2(r-1))`.
    pub ln_prefactor_alternative: f64,
    pub agree: bool,
}

pub fn asymptotic_ey_simple(params: ModelParams) -> Result<SimpleFirstMoment> {
    let base = ln_asymptotic_ey(params)?;
    let ModelParams { r, s, .. } = params;
    let p = spectral_pair(r, s, 1);
    let ln_prefactor = -(p.lambda * p.zeta).to_f64();
    let alt = (r * s - r - 1) as f64 / (2.0 * (r as f64 - 1.0));
    Ok(SimpleFirstMoment {
        ln_value: base + ln_prefactor,
        ln_prefactor,
        ln_prefactor_alternative: alt,
        agree: r == s,
    })
}

/// Limiting probability that the configuration is simple.
pub fn prob_simple(r: usize, s: usize) -> f64 {
    let (rf, sf) = (r as f64, s as f64);
    if s == 2 {
        (-(rf * rf - 1.0) / 4.0).exp()
    } else {
        (-(rf - 1.0) * (sf - 1.0) / 2.0).exp()
    }
}

/// Leading-order probability that a uniform simple 2-regular graph on `n`
/// vertices is a Hamilton cycle: `(1/2) e^{3/4} √(π/n)`.
pub fn hamilton_probability(n: usize) -> f64 {
    0.5 * 0.75f64.exp() * (std::f64::consts::PI / n as f64).sqrt()
}

/// `r² - rs + r + s - 1`.
fn spread(r: f64, s: f64) -> f64 {
    r * r - r * s + r + s - 1.0
}

/// `r²√(s-1) / √((r²-rs+r+s-1)(rs-r-s)(r-1))`.
pub fn second_moment_ratio(r: usize, s: usize) -> Result<f64> {
    reject_two_two(r, s)?;
    let (rf, sf) = (r as f64, s as f64);
    let d = spread(rf, sf) * (rf * sf - rf - sf) * (rf - 1.0);
    if d <= 0.0 {
        return Err(Error::Precondition(format!(
            "r² - rs + r + s - 1 must be positive for ({r}, {s})"
        )));
    }
    Ok(rf * rf * (sf - 1.0).sqrt() / d.sqrt())
}

/// `exp(Σ λ_j ζ_j²)` in closed form, with the numeric partial sum for comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceSum {
    pub closed_form: f64,
    /// `exp` of the partial sum through `terms` terms.
    pub numeric: f64,
    pub log_partial_sum: f64,
    pub terms: usize,
    /// Upper bound on the omitted tail of `Σ λ_j ζ_j²`.
    pub tail_bound: f64,
}

/// Ratios governing the geometric decay of `λ_j ζ_j²`: with
/// `θ = max(a²/q, |a|/q, 1/q)`, `λ_j ζ_j² <= 9θ^j/(2j)`.
pub fn decay_ratio(r: usize, s: usize) -> Result<f64> {
    reject_two_two(r, s)?;
    let (rf, sf) = (r as f64, s as f64);
    let q = (rf - 1.0) * (sf - 1.0);
    let a = rf / (rf - 1.0) - sf + 1.0;
    let theta = (a * a / q).max(a.abs() / q).max(1.0 / q);
    if theta >= 1.0 || spread(rf, sf) <= 0.0 {
        return Err(Error::Precondition(format!(
            "Σ λ_j ζ_j² diverges for ({r}, {s}): θ = {theta}"
        )));
    }
    Ok(theta)
}

/// Upper bound on `Σ_{i>j} λ_i ζ_i²`.
pub fn tail_bound(theta: f64, j: usize) -> f64 {
    let j1 = (j + 1) as f64;
    9.0 * theta.powf(j1) / (2.0 * j1 * (1.0 - theta))
}

/// `λ_j ζ_j² = (x^j - 2y^j)² / (2j)` with `x = a/√q`, `y = 1/√q`.
pub fn lambda_zeta_sq(r: usize, s: usize, j: usize) -> f64 {
    let (rf, sf) = (r as f64, s as f64);
    let q = (rf - 1.0) * (sf - 1.0);
    let a = rf / (rf - 1.0) - sf + 1.0;
    let (x, y) = (a / q.sqrt(), 1.0 / q.sqrt());
    let d = x.powi(j as i32) - 2.0 * y.powi(j as i32);
    d * d / (2.0 * j as f64)
}

pub fn variance_sum(r: usize, s: usize) -> Result<VarianceSum> {
    let theta = decay_ratio(r, s)?;
    let (rf, sf) = (r as f64, s as f64);
    let m = rf * sf - rf - sf;
    let closed = rf * rf * (sf - 1.0).sqrt() / (spread(rf, sf) * m * (rf - 1.0)).sqrt();

    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut j = 0;
    loop {
        j += 1;
        let y = lambda_zeta_sq(r, s, j) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if tail_bound(theta, j) < 1e-17 || j >= 100_000 {
            break;
        }
    }
    Ok(VarianceSum {
        closed_form: closed,
        numeric: sum.exp(),
        log_partial_sum: sum,
        terms: j,
        tail_bound: tail_bound(theta, j),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    #[test]
    fn ratio_values() {
        assert!((second_moment_ratio(3, 2).unwrap() - 9.0 / 14f64.sqrt()).abs() < 1e-14);
        assert!((second_moment_ratio(2, 3).unwrap() - 4.0).abs() < 1e-14);
        assert!(second_moment_ratio(2, 2).is_err());
    }

    #[test]
    fn variance_closed_vs_numeric() {
        for (r, s) in [(3, 2), (2, 3), (4, 5), (3, 5)] {
            let v = variance_sum(r, s).unwrap();
            assert!((v.closed_form - v.numeric).abs() < 1e-10, "{r},{s}: {v:?}");
        }
        assert!((variance_sum(3, 2).unwrap().closed_form - 2.405351177211819).abs() < 1e-12);
    }

    #[test]
    fn simple_prefactors() {
        let p = validate_params(2, 3, 9).unwrap();
        let v = asymptotic_ey_simple(p).unwrap();
        assert!((v.ln_prefactor - 1.0).abs() < 1e-15);
        assert!((v.ln_prefactor_alternative - 1.5).abs() < 1e-15);
        assert!(!v.agree);
        assert!((v.ln_value - ln_asymptotic_ey(p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn growth_direction() {
        let up = |n| ln_asymptotic_ey(validate_params(3, 2, n).unwrap()).unwrap();
        assert!(up(200) > up(100));
        // 5 | 2n and 4 | n-1
        let down = |n| ln_asymptotic_ey(validate_params(2, 5, n).unwrap()).unwrap();
        assert!(down(45) < down(25));
    }

    #[test]
    fn simple_probabilities() {
        assert!((prob_simple(3, 2) - (-2f64).exp()).abs() < 1e-15);
        assert!((prob_simple(2, 3) - (-1f64).exp()).abs() < 1e-15);
    }
}
