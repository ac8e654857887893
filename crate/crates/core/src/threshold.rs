//! The growth rate `L(r, s) = lim (1/n) ln E Y` and its root `ρ(s)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};

fn check_domain(r: f64, s: usize) -> Result<()> {
    let sf = s as f64;
    if s < 2 || !(r > 1.0) || !(r > sf / (sf - 1.0)) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "L(r, s) needs r > s/(s-1); got r = {r}, s = {s}"
        )));
    }
    Ok(())
}

/// `L(r, s) = (r/s) ln(s-1) + (r-1) ln(r-1) - (m/s) ln r - (m/(s(s-1))) ln m`,
/// `m = rs - r - s`, evaluated in the rearranged form
/// `[ln(s-1) + ln(r-1)]/(s-1) + (m/s) ln(1 - 1/r) - (m/(s(s-1))) ln(1 - 1/((s-1)(r-1)))`,
/// which avoids the cancellation between the large logarithms.
pub fn l(r: f64, s: usize) -> Result<f64> {
    check_domain(r, s)?;
    let sf = s as f64;
    let m = r * sf - r - sf;
    Ok(
        ((sf - 1.0).ln() + (r - 1.0).ln()) / (sf - 1.0) + m / sf * (-1.0 / r).ln_1p()
            - m / (sf * (sf - 1.0)) * (-1.0 / ((sf - 1.0) * (r - 1.0))).ln_1p(),
    )
}

/// `L'(r) = 1/r + ((s-1)/s) ln(1 - 1/r) - (1/s) ln(1 - 1/((s-1)(r-1)))`.
pub fn l_prime(r: f64, s: usize) -> Result<f64> {
    check_domain(r, s)?;
    let sf = s as f64;
    Ok(1.0 / r + (sf - 1.0) / sf * (-1.0 / r).ln_1p()
        - (-1.0 / ((sf - 1.0) * (r - 1.0))).ln_1p() / sf)
}

/// `L''(r) = (1/r²)(1/(r-1) - r/(rs-r-s))`.
pub fn l_double_prime(r: f64, s: usize) -> Result<f64> {
    check_domain(r, s)?;
    let sf = s as f64;
    Ok((1.0 / (r - 1.0) - r / (r * sf - r - sf)) / (r * r))
}

/// Inflection point `(s + √(s(s-4)))/2` of `L(·, s)`, for `s >= 4`.
pub fn inflection(s: usize) -> f64 {
    let sf = s as f64;
    (sf + (sf * (sf - 4.0)).sqrt()) / 2.0
}

/// `(e^{s-2}/(s-1) - (s-1)/2, e^{s-2}/(s-1) - (s-3)/2)`.
pub fn rho_bounds(s: usize) -> (f64, f64) {
    let sf = s as f64;
    let lead = (sf - 2.0).exp() / (sf - 1.0);
    (lead - (sf - 1.0) / 2.0, lead - (sf - 3.0) / 2.0)
}

/// `e^{s-2}/(s-1) - (s² - 3s + 1)/(2(s-1))`.
pub fn rho_expansion(s: usize) -> f64 {
    let sf = s as f64;
    (sf - 2.0).exp() / (sf - 1.0) - (sf * sf - 3.0 * sf + 1.0) / (2.0 * (sf - 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub s: usize,
    pub rho: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub expansion: f64,
    pub bracket: (f64, f64),
    /// `|L(ρ, s)|`.
    pub residual: f64,
    /// Mismatch of `ρ ln(s-1) + s(ρ-1) ln(ρ-1) = m ln ρ + (m/(s-1)) ln m`,
    /// relative to its largest term.
    pub rho_def_mismatch: f64,
    pub iterations: usize,
}

/// Relative mismatch of the defining equation of `ρ`
/// `(s-1)^ρ (ρ-1)^{s(ρ-1)} = ρ^m m^{m/(s-1)}`, `m = ρs - ρ - s`, in log form.
pub fn rho_def_mismatch(rho: f64, s: usize) -> f64 {
    let sf = s as f64;
    let m = rho * sf - rho - sf;
    let terms = [
        rho * (sf - 1.0).ln(),
        sf * (rho - 1.0) * (rho - 1.0).ln(),
        -m * rho.ln(),
        -m / (sf - 1.0) * m.ln(),
    ];
    let scale = terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    terms.iter().sum::<f64>().abs() / scale
}

/// Bracketing interval searched for `ρ(s)`.
pub fn rho_bracket(s: usize) -> (f64, f64) {
    let (_, plus) = rho_bounds(s);
    // For s = 5 the root lies below s, so the search starts just above 2.
    let lo = if s == 5 { 2.0 } else { 2f64.max(s as f64) };
    (lo + 1e-9, plus + 1.0)
}

/// The unique root of `L(·, s)` in `(2, ∞)`, for `s >= 5`: bisection down to a
/// narrow bracket, then Newton steps kept inside the bracket.
pub fn rho(s: usize) -> Result<ThresholdReport> {
    if s < 5 {
        return Err(Error::Domain(format!("L(·, {s}) has no root for s < 5")));
    }
    let (mut lo, mut hi) = rho_bracket(s);
    let bracket = (lo, hi);
    if l(lo, s)? >= 0.0 || l(hi, s)? <= 0.0 {
        return Err(Error::Precondition(format!(
            "L(·, {s}) does not change sign on {bracket:?}"
        )));
    }
    let mut iterations = 0;
    while hi - lo > 1e-3 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if l(mid, s)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        iterations += 1;
        let fx = l(x, s)?;
        if fx == 0.0 {
            break;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - fx / l_prime(x, s)?;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - x).abs() <= 4.0 * f64::EPSILON * x;
        x = next;
        if done {
            break;
        }
    }
    let residual = l(x, s)?.abs();
    if residual >= 1e-12 {
        return Err(Error::Precondition(format!(
            "root residual {residual} for s = {s}"
        )));
    }
    let (rho_minus, rho_plus) = rho_bounds(s);
    Ok(ThresholdReport {
        s,
        rho: x,
        rho_minus,
        rho_plus,
        expansion: rho_expansion(s),
        bracket,
        residual,
        rho_def_mismatch: rho_def_mismatch(x, s),
        iterations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// A spanning tree exists asymptotically almost surely.
    Supercritical,
    /// A spanning tree is absent asymptotically almost surely.
    Subcritical,
}

pub fn classify(r: usize, s: usize) -> Result<Phase> {
    if r < 2 || s < 2 {
        return Err(Error::InvalidParams(format!(
            "need r, s >= 2; got ({r}, {s})"
        )));
    }
    if s < 5 {
        return Ok(classify_with_rho(r, s, f64::NAN));
    }
    Ok(classify_with_rho(r, s, rho(s)?.rho))
}

/// Classification against a given threshold value (ignored for `s < 5`).
pub fn classify_with_rho(r: usize, s: usize, rho: f64) -> Phase {
    if r == 2 && s == 2 {
        // A 2-regular graph has a spanning tree only when it is a Hamilton cycle.
        Phase::Subcritical
    } else if s < 5 || r as f64 > rho {
        Phase::Supercritical
    } else {
        Phase::Subcritical
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub s: usize,
    pub rho_minus: f64,
    pub rho: f64,
    pub rho_plus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub s: usize,
    pub l_at_rho_minus: f64,
    pub l_at_rho_plus: f64,
}

pub fn table1(s_lo: usize, s_hi: usize, exec: Execution) -> Result<Vec<Table1Row>> {
    check_range(s_lo, s_hi)?;
    map_indexed(exec, s_hi - s_lo + 1, |i| {
        let rep = rho(s_lo + i)?;
        Ok(Table1Row {
            s: rep.s,
            rho_minus: rep.rho_minus,
            rho: rep.rho,
            rho_plus: rep.rho_plus,
        })
    })
    .into_iter()
    .collect()
}

pub fn table2(s_lo: usize, s_hi: usize) -> Result<Vec<Table2Row>> {
    check_range(s_lo, s_hi)?;
    (s_lo..=s_hi)
        .map(|s| {
            let (lo, hi) = rho_bounds(s);
            Ok(Table2Row {
                s,
                l_at_rho_minus: l(lo, s)?,
                l_at_rho_plus: l(hi, s)?,
            })
        })
        .collect()
}

fn check_range(s_lo: usize, s_hi: usize) -> Result<()> {
    if s_lo < 5 || s_hi < s_lo {
        return Err(Error::Domain(format!(
            "need 5 <= s_lo <= s_hi; got {s_lo}..{s_hi}"
        )));
    }
    Ok(())
}

/// `x` rounded half-up (away from zero at ties) to `places` decimals. Values
/// within `1e-9` of a tie, such as `2.0005` stored as `2.000499...`, round up.
pub fn round_half_up(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    let y = x.abs() * scale;
    let floor = y.floor();
    let up = if y - floor >= 0.5 - 1e-9 {
        floor + 1.0
    } else {
        floor
    };
    (up / scale).copysign(x)
}
