use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The triple `(r, s, n)`: degree, edge size and number of vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelParams {
    pub r: usize,
    pub s: usize,
    pub n: usize,
}

/// Which of the two divisibility conditions hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    /// `s | rn`: the points can be split into parts of size `s`.
    pub d1: bool,
    /// `(s-1) | (n-1)`: a spanning tree can exist.
    pub d2: bool,
}

impl DivisibilityReport {
    pub fn admissible(&self) -> bool {
        self.d1 && self.d2
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.d1 {
            out.push("d1: s does not divide r*n");
        }
        if !self.d2 {
            out.push("d2: s-1 does not divide n-1");
        }
        out
    }
}

/// Checks the ranges `r >= 2`, `s >= 2`, `n >= 1`. Divisibility is reported, not enforced.
pub fn validate_params(r: usize, s: usize, n: usize) -> Result<ModelParams> {
    if r < 2 {
        return Err(Error::InvalidParams(format!("r = {r} must be at least 2")));
    }
    if s < 2 {
        return Err(Error::InvalidParams(format!("s = {s} must be at least 2")));
    }
    if n < 1 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    Ok(ModelParams { r, s, n })
}

impl ModelParams {
    pub fn new(r: usize, s: usize, n: usize) -> Result<Self> {
        validate_params(r, s, n)
    }

    pub fn report(&self) -> DivisibilityReport {
        DivisibilityReport {
            d1: (self.r * self.n).is_multiple_of(self.s),
            d2: (self.n - 1).is_multiple_of(self.s - 1),
        }
    }

    pub fn d1(&self) -> bool {
        self.report().d1
    }

    pub fn d2(&self) -> bool {
        self.report().d2
    }

    /// Membership of `n` in the admissible set for `(r, s)`.
    pub fn admissible(&self) -> bool {
        self.report().admissible()
    }

    pub fn require_d1(&self) -> Result<()> {
        if self.d1() {
            Ok(())
        } else {
            Err(Error::Divisibility(format!(
                "s = {} does not divide r*n = {}",
                self.s,
                self.r * self.n
            )))
        }
    }

    pub fn require_admissible(&self) -> Result<()> {
        self.require_d1()?;
        if self.d2() {
            Ok(())
        } else {
            Err(Error::Divisibility(format!(
                "s-1 = {} does not divide n-1 = {}",
                self.s - 1,
                self.n - 1
            )))
        }
    }

    pub fn points(&self) -> usize {
        self.r * self.n
    }

    /// Number of parts `rn/s`, when `s | rn`.
    pub fn parts(&self) -> Option<usize> {
        self.d1().then(|| self.points() / self.s)
    }

    /// Number of edges of a spanning tree, `t = (n-1)/(s-1)`.
    pub fn tree_edges(&self) -> Option<usize> {
        self.d2().then(|| (self.n - 1) / (self.s - 1))
    }

    /// `rs - r - s`; zero exactly at `(2, 2)` and positive otherwise.
    pub fn excess(&self) -> i64 {
        excess(self.r, self.s)
    }

    pub fn is_two_two(&self) -> bool {
        self.r == 2 && self.s == 2
    }
}

pub fn excess(r: usize, s: usize) -> i64 {
    (r * s) as i64 - r as i64 - s as i64
}

/// The `count` smallest admissible `n` for `(r, s)`.
pub fn admissible_ladder(r: usize, s: usize, count: usize) -> Vec<usize> {
    (1..)
        .filter(|&n| (r * n).is_multiple_of(s) && (n - 1) % (s - 1) == 0)
        .take(count)
        .collect()
}

/// Smallest admissible `n` that is at least `at_least`.
pub fn next_admissible(r: usize, s: usize, at_least: usize) -> usize {
    (at_least.max(1)..)
        .find(|&n| (r * n).is_multiple_of(s) && (n - 1) % (s - 1) == 0)
        .expect("admissible n exists for every (r, s)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags() {
        let p = validate_params(2, 3, 3).unwrap();
        assert!(p.d1() && p.d2());
        let p = validate_params(2, 2, 5).unwrap();
        assert!(p.d1() && p.d2());
        let p = validate_params(3, 4, 7).unwrap();
        assert!(!p.d1());
        assert_eq!(p.report().failures().len(), 1);
    }

    #[test]
    fn rejects_small_values() {
        assert!(matches!(
            validate_params(1, 3, 3),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            validate_params(2, 1, 3),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            validate_params(2, 3, 0),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn ladders() {
        assert_eq!(admissible_ladder(3, 2, 4), vec![2, 4, 6, 8]);
        assert_eq!(admissible_ladder(2, 3, 4), vec![3, 9, 15, 21]);
        assert_eq!(next_admissible(2, 3, 3000), 3003);
    }
}
