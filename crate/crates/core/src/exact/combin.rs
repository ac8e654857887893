use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ExactQ;
use crate::error::{Error, Result};

pub fn factorial(k: usize) -> BigUint {
    (2..=k as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `0!, 1!, ..., N!`, precomputed.
#[derive(Clone, Debug)]
pub struct Factorials(Vec<BigUint>);

impl Factorials {
    pub fn up_to(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(BigUint::one());
        for i in 1..=max {
            let next = &table[i - 1] * i;
            table.push(next);
        }
        Factorials(table)
    }

    pub fn get(&self, k: usize) -> &BigUint {
        &self.0[k]
    }

    pub fn max(&self) -> usize {
        self.0.len() - 1
    }
}

/// `ln 0!, ..., ln N!` from a compensated running sum of `ln i`.
#[derive(Clone, Debug)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn up_to(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(0.0);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for i in 1..=max {
            let y = (i as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            table.push(sum);
        }
        LnFactorials(table)
    }

    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(x, k) = x(x-1)...(x-k+1)/k!` for rational `x`; `C(x, 0) = 1`.
pub fn gen_binomial(x: &ExactQ, k: usize) -> ExactQ {
    let mut acc = ExactQ::one();
    for i in 0..k {
        acc = acc * (x - &ExactQ::int(i as i64)) / ExactQ::int(i as i64 + 1);
    }
    acc
}

/// Falling factorial `(x)_k` of a nonnegative integer.
pub fn falling(x: u64, k: usize) -> BigUint {
    (0..k as u64).fold(BigUint::one(), |acc, i| {
        if i >= x {
            BigUint::zero()
        } else {
            acc * (x - i)
        }
    })
}

/// Number of partitions of `t` labelled points into parts of size `s`:
/// `t! / ((t/s)! (s!)^{t/s})`.
pub fn num_partitions(t: usize, s: usize) -> Result<BigUint> {
    if s == 0 || !t.is_multiple_of(s) {
        return Err(Error::Divisibility(format!(
            "s = {s} does not divide t = {t}"
        )));
    }
    let parts = t / s;
    Ok(factorial(t) / (factorial(parts) * factorial(s).pow(parts as u32)))
}

/// Number of labelled `s`-uniform trees on `n` vertices:
/// `n^{t-1} (n-1)! / (t! ((s-1)!)^t)` with `t = (n-1)/(s-1)`.
pub fn count_uniform_trees(n: usize, s: usize) -> Result<BigUint> {
    if s < 2 || n == 0 || !(n - 1).is_multiple_of(s - 1) {
        return Err(Error::Divisibility(format!(
            "s-1 does not divide n-1 for (n, s) = ({n}, {s})"
        )));
    }
    let t = (n - 1) / (s - 1);
    if t == 0 {
        return Ok(BigUint::one());
    }
    let num = BigUint::from(n).pow(t as u32 - 1) * factorial(n - 1);
    let den = factorial(t) * factorial(s - 1).pow(t as u32);
    Ok(num / den)
}

/// Vertex degrees of an `s`-uniform tree: `n >= 2` entries, each at least one,
/// summing to `s(n-1)/(s-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDegreeSequence {
    s: usize,
    delta: Vec<usize>,
}

impl TreeDegreeSequence {
    pub fn new(delta: Vec<usize>, s: usize) -> Result<Self> {
        let n = delta.len();
        if s < 2 || n < 2 || !(n - 1).is_multiple_of(s - 1) {
            return Err(Error::Invalid(format!(
                "no {s}-uniform tree on {n} vertices"
            )));
        }
        let want = s * (n - 1) / (s - 1);
        if delta.contains(&0) || delta.iter().sum::<usize>() != want {
            return Err(Error::Invalid(format!(
                "degrees must be positive and sum to {want}: {delta:?}"
            )));
        }
        Ok(TreeDegreeSequence { s, delta })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.delta
    }

    pub fn s(&self) -> usize {
        self.s
    }
}

/// `(s-1)(n-2)! / ((s-1)!)^t * prod 1/(d_i - 1)!`.
pub fn count_trees_with_degrees(seq: &TreeDegreeSequence) -> BigUint {
    let (s, n) = (seq.s, seq.delta.len());
    let t = (n - 1) / (s - 1);
    let num = BigUint::from(s - 1) * factorial(n - 2);
    let den = seq
        .delta
        .iter()
        .fold(factorial(s - 1).pow(t as u32), |acc, &d| {
            acc * factorial(d - 1)
        });
    num / den
}

/// Every tree degree sequence for `(n, s)`, as compositions in lexicographic order.
pub fn tree_degree_sequences(n: usize, s: usize) -> Result<Vec<TreeDegreeSequence>> {
    if s < 2 || n < 2 || !(n - 1).is_multiple_of(s - 1) {
        return Err(Error::Divisibility(format!(
            "no {s}-uniform tree on {n} vertices"
        )));
    }
    let total = s * (n - 1) / (s - 1);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(
        left: usize,
        slots: usize,
        s: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<TreeDegreeSequence>,
    ) {
        if slots == 1 {
            cur.push(left);
            out.push(TreeDegreeSequence {
                s,
                delta: cur.clone(),
            });
            cur.pop();
            return;
        }
        for d in 1..=left - (slots - 1) {
            cur.push(d);
            rec(left - d, slots - 1, s, cur, out);
            cur.pop();
        }
    }
    rec(total, n, s, &mut cur, &mut out);
    Ok(out)
}
