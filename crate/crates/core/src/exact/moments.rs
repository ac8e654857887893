use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::combin::{falling, num_partitions, Factorials, LnFactorials};
use super::enumerate::fold_configurations;
use super::ExactQ;
use crate::cycles::census_cycles;
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::params::ModelParams;

/// `E Y`: the mean number of spanning trees over the configuration space,
///
/// `r^n s^t ((r-1)n)! (n-1)! (rn/s)! / ((rn)! t! (((rs-r-s)n+s)/(s(s-1)))!)`.
pub fn exact_expected_y(params: ModelParams) -> Result<ExactQ> {
    let f = FirstMoment::new(params)?;
    let facts = Factorials::up_to(params.points());
    let ModelParams { r, s, n } = params;
    let num = BigUint::from(r).pow(n as u32)
        * BigUint::from(s).pow(f.t as u32)
        * facts.get((r - 1) * n)
        * facts.get(n - 1)
        * facts.get(r * n / s);
    let den = facts.get(r * n) * facts.get(f.t) * facts.get(f.last);
    Ok(ExactQ::new(num, den))
}

/// `ln E Y`, evaluated with log-factorials.
pub fn ln_expected_y(params: ModelParams) -> Result<f64> {
    let f = FirstMoment::new(params)?;
    let lf = LnFactorials::up_to(params.points());
    Ok(f.ln_value(&lf))
}

struct FirstMoment {
    params: ModelParams,
    t: usize,
    last: usize,
}

impl FirstMoment {
    fn new(params: ModelParams) -> Result<Self> {
        params.require_admissible()?;
        let ModelParams { r, s, n } = params;
        let t = (n - 1) / (s - 1);
        let top = (r * s - r - s) * n + s;
        if top % (s * (s - 1)) != 0 {
            return Err(Error::NonIntegralFactorial(format!(
                "((rs-r-s)n+s)/(s(s-1)) = {top}/{}",
                s * (s - 1)
            )));
        }
        Ok(FirstMoment {
            params,
            t,
            last: top / (s * (s - 1)),
        })
    }

    fn ln_value(&self, lf: &LnFactorials) -> f64 {
        let ModelParams { r, s, n } = self.params;
        n as f64 * (r as f64).ln()
            + self.t as f64 * (s as f64).ln()
            + lf.get((r - 1) * n)
            + lf.get(n - 1)
            + lf.get(r * n / s)
            - lf.get(r * n)
            - lf.get(self.t)
            - lf.get(self.last)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMode {
    Exact,
    LogFloat,
}

/// A moment either as an exact rational or through its natural log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentValue {
    Exact(ExactQ),
    Log(f64),
}

impl MomentValue {
    pub fn ln(&self) -> f64 {
        match self {
            MomentValue::Exact(q) => q.ln(),
            MomentValue::Log(l) => *l,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            MomentValue::Exact(q) => q.to_f64(),
            MomentValue::Log(l) => l.exp(),
        }
    }

    pub fn exact(&self) -> Option<&ExactQ> {
        match self {
            MomentValue::Exact(q) => Some(q),
            MomentValue::Log(_) => None,
        }
    }
}

/// Factorial arguments and powers making up one term `a_n(k, b)` of the
/// second moment:
///
/// ```text
///            r^n (b-1) (r-1)^{k+b} (s-1)^k s^{(n+b-2)/(s-1)} (k+b-2)! ((r-1)n-k-b)! (rn/s)! n!
/// a_n(k,b) = ----------------------------------------------------------------------------------------
///            b k! (((b-1)/(s-1))!)^2 (mn/(s(s-1)) - (b-2)/(s-1))! ((n-(s-1)k-b)/(s-1))! (rn)!
/// ```
///
/// with `m = rs - r - s`. The `(s-1)^k` factor comes from the closed form of the
/// sum over shared-component sizes (see [`super::identities::jensen_tree_sides`]);
/// without it the sum disagrees with exhaustive enumeration once `s >= 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermShape {
    pub k: usize,
    pub b: usize,
    s_power: usize,
    num: [usize; 4],
    den: [usize; 5],
}

impl TermShape {
    /// `Ok(None)` when a factorial argument is negative (the term vanishes).
    pub fn new(params: ModelParams, k: usize, b: usize) -> Result<Option<Self>> {
        let ModelParams { r, s, n } = params;
        let (ri, si, ni, ki, bi) = (r as i64, s as i64, n as i64, k as i64, b as i64);
        let m = ri * si - ri - si;
        let frac = |num: i64, den: i64, what: &str| -> Result<Option<usize>> {
            if num.rem_euclid(den) != 0 {
                return Err(Error::NonIntegralFactorial(format!("{what} = {num}/{den}")));
            }
            let v = num.div_euclid(den);
            Ok((v >= 0).then_some(v as usize))
        };
        if b < 2 {
            return Ok(None);
        }
        let s_power = frac(ni + bi - 2, si - 1, "(n+b-2)/(s-1)")?;
        let shared = frac(bi - 1, si - 1, "(b-1)/(s-1)")?;
        let middle = frac(
            m * ni - si * (bi - 2),
            si * (si - 1),
            "mn/(s(s-1)) - (b-2)/(s-1)",
        )?;
        let rest = frac(ni - (si - 1) * ki - bi, si - 1, "(n-(s-1)k-b)/(s-1)")?;
        let free = (ri - 1) * ni - ki - bi;
        let (Some(s_power), Some(shared), Some(middle), Some(rest)) =
            (s_power, shared, middle, rest)
        else {
            return Ok(None);
        };
        if free < 0 {
            return Ok(None);
        }
        Ok(Some(TermShape {
            k,
            b,
            s_power,
            num: [k + b - 2, free as usize, r * n / s, n],
            den: [k, shared, shared, middle, rest],
        }))
    }

    fn exact(&self, params: ModelParams, facts: &Factorials) -> ExactQ {
        let ModelParams { r, s, n } = params;
        let (k, b) = (self.k, self.b);
        let mut num = BigUint::from(r).pow(n as u32)
            * BigUint::from(b - 1)
            * BigUint::from(r - 1).pow((k + b) as u32)
            * BigUint::from(s - 1).pow(k as u32)
            * BigUint::from(s).pow(self.s_power as u32);
        for &a in &self.num {
            num *= facts.get(a);
        }
        let mut den = BigUint::from(b) * facts.get(r * n);
        for &a in &self.den {
            den *= facts.get(a);
        }
        ExactQ::new(num, den)
    }

    fn ln(&self, params: ModelParams, lf: &LnFactorials) -> f64 {
        let ModelParams { r, s, n } = params;
        let (k, b) = (self.k as f64, self.b as f64);
        let ln = |x: usize| (x as f64).ln();
        let mut v = n as f64 * ln(r)
            + (b - 1.0).ln()
            + (k + b) * ln(r - 1)
            + k * ln(s - 1)
            + self.s_power as f64 * ln(s)
            - b.ln()
            - lf.get(r * n);
        v += self.num.iter().map(|&a| lf.get(a)).sum::<f64>();
        v -= self.den.iter().map(|&a| lf.get(a)).sum::<f64>();
        v
    }
}

/// The nonvanishing lattice points `(k, b)`: `b ≡ 1 (mod s-1)`, `2 <= b <= n`,
/// `0 <= k <= (n-b)/(s-1)`, all factorial arguments nonnegative.
pub fn second_moment_terms(params: ModelParams) -> Result<Vec<TermShape>> {
    params.require_admissible()?;
    let ModelParams { s, n, .. } = params;
    let mut out = Vec::new();
    for b in (2..=n).filter(|b| (b - 1) % (s - 1) == 0) {
        for k in 0..=(n - b) / (s - 1) {
            if let Some(term) = TermShape::new(params, k, b)? {
                out.push(term);
            }
        }
    }
    Ok(out)
}

/// A single term `a_n(k, b)`, zero outside the summation range.
pub fn second_moment_term(params: ModelParams, k: usize, b: usize) -> Result<ExactQ> {
    params.require_admissible()?;
    Ok(match TermShape::new(params, k, b)? {
        Some(t) => t.exact(params, &Factorials::up_to(params.points())),
        None => ExactQ::zero(),
    })
}

/// `E Y^2 = E Y + sum_{k,b} a_n(k, b)`.
pub fn exact_second_moment(params: ModelParams, mode: MomentMode) -> Result<MomentValue> {
    exact_second_moment_with(params, mode, Execution::default())
}

pub fn exact_second_moment_with(
    params: ModelParams,
    mode: MomentMode,
    exec: Execution,
) -> Result<MomentValue> {
    let terms = second_moment_terms(params)?;
    match mode {
        MomentMode::Exact => {
            let facts = Factorials::up_to(params.points());
            let parts = map_indexed(exec, terms.len(), |i| terms[i].exact(params, &facts));
            let total = parts
                .into_iter()
                .fold(exact_expected_y(params)?, |a, b| a + b);
            Ok(MomentValue::Exact(total))
        }
        MomentMode::LogFloat => {
            let lf = LnFactorials::up_to(params.points());
            let mut logs = map_indexed(exec, terms.len(), |i| terms[i].ln(params, &lf));
            logs.push(FirstMoment::new(params)?.ln_value(&lf));
            Ok(MomentValue::Log(log_sum_exp(&logs)))
        }
    }
}

/// `ln sum exp(x_i)`, with a compensated inner sum.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return top;
    }
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &x in xs {
        let y = (x - top).exp() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    top + sum.ln()
}

/// Which per-configuration statistic [`brute_moments`] averages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BruteStatistic {
    Y,
    YSquared,
}

/// Exact mean over the whole configuration space of `Y * prod_j (X_j)_{x_j}`
/// (or `Y^2 * ...`), where `Y` counts part subsets forming spanning trees and
/// `(X)_k` is the falling factorial.
pub fn brute_moments(
    params: ModelParams,
    x: &[usize],
    stat: BruteStatistic,
    budget: u64,
    exec: Execution,
) -> Result<ExactQ> {
    let j_max = x.len();
    let total = fold_configurations(
        params,
        budget,
        exec,
        BigUint::zero(),
        |c| {
            let y = c.project().count_spanning_trees(budget)?;
            if y == 0 {
                return Ok(BigUint::zero());
            }
            let mut v = BigUint::from(y);
            if stat == BruteStatistic::YSquared {
                v *= y;
            }
            if x.iter().any(|&e| e > 0) {
                let census = census_cycles(c, j_max);
                for (i, &e) in x.iter().enumerate() {
                    v *= falling(census.get(i + 1), e);
                }
            }
            Ok(v)
        },
        |a, b| a + b,
    )?;
    let size = num_partitions(params.points(), params.s)?;
    Ok(ExactQ::new(total, size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    fn p(r: usize, s: usize, n: usize) -> ModelParams {
        validate_params(r, s, n).unwrap()
    }

    #[test]
    fn first_moment_small() {
        assert_eq!(exact_expected_y(p(2, 3, 3)).unwrap(), ExactQ::new(4, 5));
        assert!(exact_expected_y(p(3, 4, 7)).is_err());
        let l = ln_expected_y(p(3, 2, 40)).unwrap();
        assert!((l - exact_expected_y(p(3, 2, 40)).unwrap().ln()).abs() < 1e-12 * l.abs());
    }

    #[test]
    fn second_moment_small() {
        let q = p(2, 3, 3);
        assert_eq!(second_moment_term(q, 0, 3).unwrap(), ExactQ::new(4, 5));
        assert_eq!(second_moment_term(q, 0, 1).unwrap(), ExactQ::zero());
        let v = exact_second_moment(q, MomentMode::Exact).unwrap();
        assert_eq!(v.exact().unwrap(), &ExactQ::new(8, 5));
    }

    #[test]
    fn logfloat_agrees() {
        for (r, s, n) in [(3, 2, 30), (2, 3, 21), (4, 5, 25), (3, 3, 15)] {
            let q = p(r, s, n);
            let e = exact_second_moment(q, MomentMode::Exact).unwrap();
            let l = exact_second_moment(q, MomentMode::LogFloat).unwrap();
            let rel = (l.ln() - e.ln()).exp_m1().abs();
            assert!(rel < 1e-10, "{q:?}: {rel}");
        }
    }

    #[test]
    fn modes_identical() {
        let q = p(3, 2, 20);
        let a = exact_second_moment_with(q, MomentMode::Exact, Execution::Sequential).unwrap();
        let b = exact_second_moment_with(q, MomentMode::Exact, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn log_sum_exp_basic() {
        let v = log_sum_exp(&[0.0, 0.0]);
        assert!((v - 2f64.ln()).abs() < 1e-15);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - 1000.0 - 2f64.ln()).abs() < 1e-12);
    }
}
