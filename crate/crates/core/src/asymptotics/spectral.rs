use serde::{Deserialize, Serialize};

use crate::exact::ExactQ;

/// The cycle parameters for index `j`:
/// `λ_j = q^j / (2j)` and `ζ_j = (a^j - 2) / q^j`, with
/// `q = (r-1)(s-1)` and `a = r/(r-1) - s + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPair {
    pub j: usize,
    pub lambda: ExactQ,
    pub zeta: ExactQ,
}

impl SpectralPair {
    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64()
    }

    pub fn zeta_f64(&self) -> f64 {
        self.zeta.to_f64()
    }

    /// `λ_j (1 + ζ_j)`, the limit of the joint-moment ratio per unit of `x_j`.
    pub fn xi(&self) -> ExactQ {
        &self.lambda * &(ExactQ::one() + &self.zeta)
    }
}

/// `q = (r-1)(s-1)`.
pub fn cycle_base(r: usize, s: usize) -> ExactQ {
    ExactQ::int(((r - 1) * (s - 1)) as i64)
}

/// `a = r/(r-1) - s + 1`.
pub fn cycle_shift(r: usize, s: usize) -> ExactQ {
    ExactQ::new(r as i64, r as i64 - 1) - ExactQ::int(s as i64 - 1)
}

pub fn spectral_pair(r: usize, s: usize, j: usize) -> SpectralPair {
    assert!(r >= 2 && s >= 2 && j >= 1, "need r, s >= 2 and j >= 1");
    let qj = cycle_base(r, s).pow(j as i32);
    let aj = cycle_shift(r, s).pow(j as i32);
    SpectralPair {
        j,
        lambda: &qj / &ExactQ::int(2 * j as i64),
        zeta: (aj - ExactQ::int(2)) / qj,
    }
}

pub fn spectral_pairs(r: usize, s: usize, j_max: usize) -> Vec<SpectralPair> {
    (1..=j_max).map(|j| spectral_pair(r, s, j)).collect()
}

/// First index of the limiting product: 3 for graphs, 2 for `s >= 3`.
pub fn j_start(s: usize) -> usize {
    if s == 2 {
        3
    } else {
        2
    }
}
