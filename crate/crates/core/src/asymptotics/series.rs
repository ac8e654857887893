use crate::error::{Error, Result};
use crate::exact::ExactQ;

/// Truncated power series with exact rational coefficients `c_0..=c_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesQ {
    coeffs: Vec<ExactQ>,
}

impl SeriesQ {
    pub fn new(mut coeffs: Vec<ExactQ>, order: usize) -> Self {
        coeffs.resize(order + 1, ExactQ::zero());
        SeriesQ { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: ExactQ, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// `x`.
    pub fn x(order: usize) -> Self {
        Self::new(vec![ExactQ::zero(), ExactQ::one()], order)
    }

    /// `1/(1 - c x) = sum (c x)^k`.
    pub fn geometric(c: &ExactQ, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut p = ExactQ::one();
        for _ in 0..=order {
            coeffs.push(p.clone());
            p *= c;
        }
        SeriesQ { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &ExactQ {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[ExactQ] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        SeriesQ { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        SeriesQ { coeffs }
    }

    pub fn scale(&self, c: &ExactQ) -> Self {
        SeriesQ {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![ExactQ::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        SeriesQ { coeffs: out }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain(
                "series with zero constant term has no inverse".into(),
            ));
        }
        let inv0 = c0.recip();
        let mut out: Vec<ExactQ> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for k in 1..self.coeffs.len() {
            let mut acc = ExactQ::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out.push(-(acc * &inv0));
        }
        Ok(SeriesQ { coeffs: out })
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let coeffs = (1..=n)
            .map(|k| &self.coeffs[k] * &ExactQ::int(k as i64))
            .collect();
        Self::new(coeffs, n)
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let n = self.order();
        let mut coeffs = vec![ExactQ::zero()];
        for k in 0..n {
            coeffs.push(&self.coeffs[k] / &ExactQ::int(k as i64 + 1));
        }
        SeriesQ { coeffs }
    }

    /// `log(self)` for a series with constant term 1, as `∫ self'/self`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != ExactQ::one() {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        Ok(self.derivative().mul(&self.inverse()?).integral())
    }

    /// `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Domain("inner series must vanish at 0".into()));
        }
        let n = self.order().min(inner.order());
        let mut out = Self::zero(n);
        for c in self.coeffs.iter().take(n + 1).rev() {
            out = out.mul(inner);
            out.coeffs[0] += c;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> ExactQ {
        ExactQ::new(a, b)
    }

    #[test]
    fn inverse_of_geometric() {
        let g = SeriesQ::geometric(&q(1, 1), 8);
        let inv = g.inverse().unwrap();
        assert_eq!(inv, SeriesQ::new(vec![q(1, 1), q(-1, 1)], 8));
    }

    #[test]
    fn log_of_one_minus_x() {
        let s = SeriesQ::constant(q(1, 1), 6).sub(&SeriesQ::x(6));
        let l = s.log().unwrap();
        for k in 1..=6 {
            assert_eq!(l.coeff(k), &q(-1, k as i64));
        }
    }

    #[test]
    fn compose_geometric() {
        // 1/(1-y) with y = 2x gives 1/(1-2x)
        let outer = SeriesQ::geometric(&q(1, 1), 7);
        let inner = SeriesQ::x(7).scale(&q(2, 1));
        assert_eq!(
            outer.compose(&inner).unwrap(),
            SeriesQ::geometric(&q(2, 1), 7)
        );
    }
}
