use super::combin::{binomial, gen_binomial};
use super::ExactQ;
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Both sides of
///
/// `sum_{k_1+...+k_b=m} prod_i C(x_i + k_i z, k_i)
///     = sum_{k=0}^m C(k+b-2, k) C(sum x_i + m z - k, m - k) z^k`.
pub fn chu_sides(m: usize, xs: &[ExactQ], z: &ExactQ) -> (ExactQ, ExactQ) {
    let b = xs.len();
    let mut lhs = ExactQ::zero();
    let mut ks = vec![0usize; b];
    compositions(m, b, &mut ks, 0, &mut |ks| {
        lhs += ks
            .iter()
            .zip(xs)
            .map(|(&k, x)| gen_binomial(&(x + &(z * &ExactQ::int(k as i64))), k))
            .product::<ExactQ>();
    });
    let sx: ExactQ = xs.iter().sum();
    let rhs = (0..=m)
        .map(|k| {
            let top = ExactQ::int(k as i64 + b as i64 - 2);
            gen_binomial(&top, k)
                * gen_binomial(
                    &(&sx + &(z * &ExactQ::int(m as i64)) - ExactQ::int(k as i64)),
                    m - k,
                )
                * z.pow(k as i32)
        })
        .sum();
    (lhs, rhs)
}

pub fn chu_identity_check(m: usize, xs: &[ExactQ], z: &ExactQ) -> Result<bool> {
    if m < 1 || xs.is_empty() {
        return Err(Error::Precondition("need m >= 1 and b >= 1".into()));
    }
    let (l, r) = chu_sides(m, xs, z);
    Ok(l == r)
}

/// Weak compositions of `total` into `slots.len()` parts.
fn compositions(
    total: usize,
    b: usize,
    slots: &mut [usize],
    i: usize,
    f: &mut dyn FnMut(&[usize]),
) {
    if i + 1 == b {
        slots[i] = total;
        f(slots);
        return;
    }
    for k in 0..=total {
        slots[i] = k;
        compositions(total - k, b, slots, i + 1, f);
    }
}

/// Sum over the shared-component sizes of a pair of trees.
///
/// Left: the direct sum over compositions `nu` of `n` into `b` parts with every
/// `nu_i ≡ 1 (mod s-1)` of `prod_i C((r-1) nu_i - 1, (nu_i - 1)/(s-1))`.
/// Right: the closed form
/// `sum_k C(k+b-2, k) C((r-1)n-b-k, (n-b)/(s-1) - k) z^k` with `z = (r-1)(s-1)`.
pub fn jensen_tree_sides(params: ModelParams, b: usize, budget: u64) -> Result<(ExactQ, ExactQ)> {
    let ModelParams { r, s, n } = params;
    let z = ExactQ::int(((r - 1) * (s - 1)) as i64);
    let rhs = jensen_closed_sum(params, b, &z)?;
    let mut lhs = ExactQ::zero();
    let mut steps = 0u64;
    let mut ks = vec![0usize; b];
    let m = (n - b) / (s - 1);
    let mut over = false;
    compositions(m, b, &mut ks, 0, &mut |ks| {
        steps += 1;
        if steps > budget {
            over = true;
            return;
        }
        // nu_i = 1 + (s-1) k_i
        lhs += ks
            .iter()
            .map(|&k| {
                let nu = 1 + (s - 1) * k;
                ExactQ::from(binomial((r - 1) * nu - 1, k))
            })
            .product::<ExactQ>();
    });
    if over {
        return Err(Error::BudgetExceeded {
            what: "composition enumeration",
            budget,
        });
    }
    Ok((lhs, rhs))
}

/// The closed form with an arbitrary ratio `z` per unit of `k`.
pub fn jensen_closed_sum(params: ModelParams, b: usize, z: &ExactQ) -> Result<ExactQ> {
    let ModelParams { r, s, n } = params;
    if b < 2 || b > n || !(b - 1).is_multiple_of(s - 1) || !(n - b).is_multiple_of(s - 1) {
        return Err(Error::Precondition(format!(
            "need 2 <= b <= n with b ≡ n ≡ 1 (mod s-1); got b = {b}, n = {n}"
        )));
    }
    let m = (n - b) / (s - 1);
    Ok((0..=m)
        .map(|k| {
            let top = ((r - 1) * n) as i64 - b as i64 - k as i64;
            ExactQ::from(binomial(k + b - 2, k))
                * gen_binomial(&ExactQ::int(top), m - k)
                * z.pow(k as i32)
        })
        .sum())
}

pub fn jensen_tree_sum_check(params: ModelParams, b: usize, budget: u64) -> Result<bool> {
    let (l, r) = jensen_tree_sides(params, b, budget)?;
    Ok(l == r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    fn q(v: i64) -> ExactQ {
        ExactQ::int(v)
    }

    #[test]
    fn chu_small() {
        let (l, r) = chu_sides(1, &[q(1), q(1)], &q(0));
        assert_eq!((l.clone(), r), (q(2), q(2)));
        assert!(chu_identity_check(2, &[q(1), q(2)], &q(1)).unwrap());
        let xs = [ExactQ::new(1, 3), ExactQ::new(-5, 2), ExactQ::new(7, 4)];
        assert!(chu_identity_check(3, &xs, &ExactQ::new(2, 5)).unwrap());
    }

    #[test]
    fn tree_sums() {
        let p = |r, s, n| validate_params(r, s, n).unwrap();
        assert!(jensen_tree_sum_check(p(2, 3, 5), 3, 1000).unwrap());
        assert!(jensen_tree_sum_check(p(3, 2, 4), 2, 1000).unwrap());
        let (l, r) = jensen_tree_sides(p(3, 3, 7), 7, 1000).unwrap();
        assert_eq!((l, r), (q(1), q(1)));
        assert!(jensen_tree_sides(p(3, 3, 7), 2, 1000).is_err());
    }
}
