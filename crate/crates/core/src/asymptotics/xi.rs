//! The joint-moment limits `ξ_j = λ_j (1 + ζ_j)`, computed three ways.
//!
//! With `m = rs - r - s`, `μ = m²/(r-1)` and `β = (r-2)/m`:
//!
//! * a double recurrence `c_{j,1} = μ(j-1+β)`,
//!   `c_{j,l} = μ Σ_{k=0}^{j-2} (k+β) c_{j-k-1,l-1}`, `ξ_j = ½ Σ_l c_{j,l}/l`;
//! * the series `ξ_j = -½ [x^j] log(1 - f(x))` with
//!   `f(x) = μ(x²/(1-x)² + βx/(1-x))`;
//! * the closed form `(a^j + q^j - 2)/(2j)`.

use super::series::SeriesQ;
use super::spectral::{cycle_base, cycle_shift};
use crate::error::{Error, Result};
use crate::exact::ExactQ;

struct Constants {
    mu: ExactQ,
    beta: ExactQ,
}

fn constants(r: usize, s: usize) -> Result<Constants> {
    if r < 2 || s < 2 {
        return Err(Error::InvalidParams(format!(
            "need r, s >= 2; got ({r}, {s})"
        )));
    }
    let m = (r * s - r - s) as i64;
    if m == 0 {
        return Err(Error::Domain(
            "(r, s) = (2, 2) has μ = 0 and is excluded".into(),
        ));
    }
    Ok(Constants {
        mu: ExactQ::new(m * m, r as i64 - 1),
        beta: ExactQ::new(r as i64 - 2, m),
    })
}

pub fn xi_by_recurrence(r: usize, s: usize, j_max: usize) -> Result<Vec<ExactQ>> {
    let Constants { mu, beta } = constants(r, s)?;
    // c[j][l] for 1 <= l <= j <= j_max; zero elsewhere.
    let mut c = vec![vec![ExactQ::zero(); j_max + 1]; j_max + 1];
    for j in 1..=j_max {
        c[j][1] = &mu * &(ExactQ::int(j as i64 - 1) + &beta);
        for l in 2..=j {
            let mut acc = ExactQ::zero();
            for k in 0..=j.saturating_sub(2) {
                let prev = &c[j - k - 1][l - 1];
                if !prev.is_zero() {
                    acc += &(ExactQ::int(k as i64) + &beta) * prev;
                }
            }
            c[j][l] = &mu * &acc;
        }
    }
    Ok((1..=j_max)
        .map(|j| {
            let sum: ExactQ = (1..=j).map(|l| &c[j][l] / &ExactQ::int(l as i64)).sum();
            sum / ExactQ::int(2)
        })
        .collect())
}

/// `f(x) = μ(y² + βy)` at `y = x/(1-x)`, to order `order`.
pub fn cycle_series(r: usize, s: usize, order: usize) -> Result<SeriesQ> {
    let Constants { mu, beta } = constants(r, s)?;
    let outer = SeriesQ::new(vec![ExactQ::zero(), &mu * &beta, mu], order);
    let y = SeriesQ::x(order).mul(&SeriesQ::geometric(&ExactQ::one(), order));
    outer.compose(&y)
}

pub fn xi_by_series(r: usize, s: usize, j_max: usize) -> Result<Vec<ExactQ>> {
    let f = cycle_series(r, s, j_max)?;
    let one = SeriesQ::constant(ExactQ::one(), j_max);
    let l = one.sub(&f).log()?;
    let half = ExactQ::new(-1, 2);
    Ok((1..=j_max).map(|j| l.coeff(j) * &half).collect())
}

pub fn xi_closed_form(r: usize, s: usize, j_max: usize) -> Vec<ExactQ> {
    let (a, q) = (cycle_shift(r, s), cycle_base(r, s));
    (1..=j_max)
        .map(|j| (a.pow(j as i32) + q.pow(j as i32) - ExactQ::int(2)) / ExactQ::int(2 * j as i64))
        .collect()
}

/// `(1 - f(x))(1 - x)²` and `(1 - a x)(1 - q x)` as series of order `order`.
pub fn factorization_sides(r: usize, s: usize, order: usize) -> Result<(SeriesQ, SeriesQ)> {
    let f = cycle_series(r, s, order)?;
    let one = SeriesQ::constant(ExactQ::one(), order);
    let x = SeriesQ::x(order);
    let one_minus_x = one.sub(&x);
    let lhs = one.sub(&f).mul(&one_minus_x).mul(&one_minus_x);
    let a = cycle_shift(r, s);
    let q = cycle_base(r, s);
    let rhs = one.sub(&x.scale(&a)).mul(&one.sub(&x.scale(&q)));
    Ok((lhs, rhs))
}
