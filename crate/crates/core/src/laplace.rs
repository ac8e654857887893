//! The variational problem behind the second moment.
//!
//! Over `K = {(α, β) : α, β >= 0, (s-1)α + β <= 1}`, with `g(x) = x ln x`,
//! `g(0) = 0` and `m = rs - r - s`:
//!
//! ```text
//! φ(α, β) = (α+β) ln(r-1) + g(α+β) + g(r-1-α-β) - (2/(s-1)) g(β) - g(α)
//!           - g(m - sβ)/(s(s-1)) - g(1 - (s-1)α - β)/(s-1)
//! ```
//!
//! Throughout, `u = α+β`, `w = r-1-u`, `v = 1-(s-1)α-β` and `z = m - sβ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplacePoint {
    pub alpha: f64,
    pub beta: f64,
}

impl LaplacePoint {
    pub fn new(alpha: f64, beta: f64) -> Self {
        LaplacePoint { alpha, beta }
    }

    fn dist(&self, other: &LaplacePoint) -> f64 {
        (self.alpha - other.alpha).hypot(self.beta - other.beta)
    }
}

/// The shape `(r, s)` with the derived quantities used everywhere below.
#[derive(Clone, Copy, Debug)]
struct Shape {
    r: f64,
    s: f64,
    m: f64,
}

impl Shape {
    fn new(r: usize, s: usize) -> Result<Self> {
        if r < 2 || s < 2 {
            return Err(Error::InvalidParams(format!(
                "need r, s >= 2; got ({r}, {s})"
            )));
        }
        let (r, s) = (r as f64, s as f64);
        Ok(Shape {
            r,
            s,
            m: r * s - r - s,
        })
    }

    fn parts(&self, p: &LaplacePoint) -> (f64, f64, f64, f64) {
        let u = p.alpha + p.beta;
        (
            u,
            self.r - 1.0 - u,
            1.0 - (self.s - 1.0) * p.alpha - p.beta,
            self.m - self.s * p.beta,
        )
    }

    fn interior(&self, p: &LaplacePoint) -> bool {
        let (_, w, v, z) = self.parts(p);
        p.alpha > 0.0 && p.beta > 0.0 && v > 0.0 && w > 0.0 && z > 0.0
    }
}

/// Points within this distance of the boundary of `K` are clamped onto it.
const EDGE: f64 = 1e-15;

fn g(x: f64) -> f64 {
    if x <= EDGE {
        0.0
    } else {
        x * x.ln()
    }
}

pub fn phi(p: LaplacePoint, r: usize, s: usize) -> Result<f64> {
    let sh = Shape::new(r, s)?;
    let (u, w, v, z) = sh.parts(&p);
    if p.alpha < -EDGE || p.beta < -EDGE || v < -EDGE || w < -EDGE || z < -EDGE {
        return Err(Error::Domain(format!(
            "({}, {}) lies outside K",
            p.alpha, p.beta
        )));
    }
    let s1 = sh.s - 1.0;
    Ok(u * (sh.r - 1.0).ln() + g(u) + g(w)
        - 2.0 / s1 * g(p.beta)
        - g(p.alpha)
        - g(z) / (sh.s * s1)
        - g(v) / s1)
}

fn interior_parts(p: &LaplacePoint, r: usize, s: usize) -> Result<(Shape, f64, f64, f64, f64)> {
    let sh = Shape::new(r, s)?;
    if !sh.interior(p) {
        return Err(Error::Domain(format!(
            "({}, {}) is not interior to K",
            p.alpha, p.beta
        )));
    }
    let (u, w, v, z) = sh.parts(p);
    Ok((sh, u, w, v, z))
}

/// `φ_α = ln(u (r-1) v / (α w))`, `φ_β = ln(u (r-1)/w) + ln(v z / β²)/(s-1)`.
pub fn grad_phi(p: LaplacePoint, r: usize, s: usize) -> Result<(f64, f64)> {
    let (sh, u, w, v, z) = interior_parts(&p, r, s)?;
    let da = (u * (sh.r - 1.0) * v / (p.alpha * w)).ln();
    let db = (u * (sh.r - 1.0) / w).ln() + (v * z / (p.beta * p.beta)).ln() / (sh.s - 1.0);
    Ok((da, db))
}

/// Symmetric 2x2 matrix `[[aa, ab], [ab, bb]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub aa: f64,
    pub ab: f64,
    pub bb: f64,
}

impl Sym2 {
    pub fn det(&self) -> f64 {
        self.aa * self.bb - self.ab * self.ab
    }

    pub fn trace(&self) -> f64 {
        self.aa + self.bb
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half = 0.5 * self.trace();
        let disc = (0.25 * (self.aa - self.bb).powi(2) + self.ab * self.ab).sqrt();
        (half - disc, half + disc)
    }

    pub fn negative_definite(&self) -> bool {
        self.eigenvalues().1 < 0.0
    }
}

/// Differentiating the two partials above:
///
/// ```text
/// φ_αα = 1/u - (s-1)/v - 1/α + 1/w
/// φ_αβ = 1/u - 1/v + 1/w
/// φ_ββ = 1/u + 1/w - (1/v + s/z + 2/β)/(s-1)
/// ```
pub fn hessian_phi(p: LaplacePoint, r: usize, s: usize) -> Result<Sym2> {
    let (sh, u, w, v, z) = interior_parts(&p, r, s)?;
    let s1 = sh.s - 1.0;
    Ok(Sym2 {
        aa: 1.0 / u - s1 / v - 1.0 / p.alpha + 1.0 / w,
        ab: 1.0 / u - 1.0 / v + 1.0 / w,
        bb: 1.0 / u + 1.0 / w - (1.0 / v + sh.s / z + 2.0 / p.beta) / s1,
    })
}

/// `(α₀, β₀) = (1/(r(s-1)), m/(r(s-1)))`.
pub fn stationary_point(r: usize, s: usize) -> LaplacePoint {
    let (rf, sf) = (r as f64, s as f64);
    let d = rf * (sf - 1.0);
    LaplacePoint::new(1.0 / d, (rf * sf - rf - sf) / d)
}

/// `φ(α₀, β₀) = 2(r-1) ln(r-1) - (2m/(s(s-1))) ln m + (r/s) ln(s-1) - (m/s) ln r`.
pub fn phi_max_closed_form(r: usize, s: usize) -> f64 {
    let (rf, sf) = (r as f64, s as f64);
    let m = rf * sf - rf - sf;
    2.0 * (rf - 1.0) * (rf - 1.0).ln() - 2.0 * m / (sf * (sf - 1.0)) * m.ln()
        + rf / sf * (sf - 1.0).ln()
        - m / sf * rf.ln()
}

/// `det(-H₀) = r³(s-1)²(r²-rs+r+s-1) / ((r-1)² m)`.
pub fn det_neg_hessian_closed_form(r: usize, s: usize) -> f64 {
    let (rf, sf) = (r as f64, s as f64);
    let m = rf * sf - rf - sf;
    rf.powi(3) * (sf - 1.0).powi(2) * (rf * rf - rf * sf + rf + sf - 1.0) / ((rf - 1.0).powi(2) * m)
}

/// `tr(H₀) = -(r²/((r-1)m²) + r(2r-1)/((r-1)m) + (r²-4r+1)r/(r-1)² + rs(s-1))`.
pub fn trace_hessian_closed_form(r: usize, s: usize) -> f64 {
    let (rf, sf) = (r as f64, s as f64);
    let m = rf * sf - rf - sf;
    -(rf * rf / ((rf - 1.0) * m * m)
        + rf * (2.0 * rf - 1.0) / ((rf - 1.0) * m)
        + (rf * rf - 4.0 * rf + 1.0) * rf / (rf - 1.0).powi(2)
        + rf * sf * (sf - 1.0))
}

/// Central-difference Hessian of [`phi`] with step `h`.
pub fn hessian_finite_difference(p: LaplacePoint, r: usize, s: usize, h: f64) -> Result<Sym2> {
    let f = |da: f64, db: f64| phi(LaplacePoint::new(p.alpha + da, p.beta + db), r, s);
    let c = f(0.0, 0.0)?;
    let aa = (f(h, 0.0)? - 2.0 * c + f(-h, 0.0)?) / (h * h);
    let bb = (f(0.0, h)? - 2.0 * c + f(0.0, -h)?) / (h * h);
    let ab = (f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h);
    Ok(Sym2 { aa, ab, bb })
}

/// Denominator `rs - r + sx + x(x+1)/(r-1)` of the ridge.
fn ridge_den(x: f64, sh: &Shape) -> f64 {
    sh.r * sh.s - sh.r + sh.s * x + x * (x + 1.0) / (sh.r - 1.0)
}

/// `(α(x), β(x)) = ((1+x)/D, m/D)`, the curve on which `φ_α = 0`.
pub fn ridge(x: f64, r: usize, s: usize) -> Result<LaplacePoint> {
    if !(x > -1.0) {
        return Err(Error::Domain(format!(
            "ridge parameter must exceed -1; got {x}"
        )));
    }
    let sh = Shape::new(r, s)?;
    let d = ridge_den(x, &sh);
    Ok(LaplacePoint::new((1.0 + x) / d, sh.m / d))
}

/// `1 - (s-1)α(x) - β(x) = (1 + x + x(x+1)/(r-1)) / D`.
pub fn ridge_slack(x: f64, r: usize, s: usize) -> Result<f64> {
    if !(x > -1.0) {
        return Err(Error::Domain(format!(
            "ridge parameter must exceed -1; got {x}"
        )));
    }
    let sh = Shape::new(r, s)?;
    Ok((1.0 + x + x * (x + 1.0) / (sh.r - 1.0)) / ridge_den(x, &sh))
}

/// `m (1 + x/(r-1))^{s-2} - (1+x)(m + sx + x(x+1)/(r-1))`; stationary points
/// of `φ` along the ridge are its zeros.
pub fn ridge_equation_residual(x: f64, r: usize, s: usize) -> Result<f64> {
    let sh = Shape::new(r, s)?;
    Ok(sh.m * (1.0 + x / (sh.r - 1.0)).powi(s as i32 - 2)
        - (1.0 + x) * (sh.m + sh.s * x + x * (x + 1.0) / (sh.r - 1.0)))
}

/// Zeros of the ridge residual on `(-1, x_max]`: exact zeros at grid points
/// plus sign changes between consecutive grid points, refined by bisection.
pub fn ridge_roots(r: usize, s: usize, x_max: f64, steps: usize) -> Result<Vec<f64>> {
    let f = |x: f64| ridge_equation_residual(x, r, s);
    // Grid x_k = k/N - 1 hits 0 exactly at k = N.
    let per_unit = (steps as f64 / (x_max + 1.0)).ceil().max(1.0) as usize;
    let total = ((x_max + 1.0) * per_unit as f64).floor() as usize;
    let at = |k: usize| k as f64 / per_unit as f64 - 1.0;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=total {
        let x = at(k);
        let fx = f(x)?;
        if fx == 0.0 {
            roots.push(x);
            prev = None;
            continue;
        }
        if let Some((px, pf)) = prev {
            if pf.signum() != fx.signum() {
                let (mut lo, mut hi) = (px, x);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if f(mid)?.signum() == pf.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        prev = Some((x, fx));
    }
    Ok(roots)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Maximum {
    pub point: LaplacePoint,
    pub value: f64,
    pub grad_norm: f64,
    pub grid_point: LaplacePoint,
    pub iterations: usize,
}

/// Unconstrained search for the maximum of `φ` over `K`: a
/// `grid x grid` scan, then damped Newton ascent until `|∇φ| < tol_grad`.
pub fn search_phi_max(
    r: usize,
    s: usize,
    grid: usize,
    tol_grad: f64,
    exec: Execution,
) -> Result<Maximum> {
    let sh = Shape::new(r, s)?;
    let grid = grid.max(2);
    let a_max = 1.0 / (sh.s - 1.0);
    let point = |i: usize, j: usize| {
        LaplacePoint::new(a_max * i as f64 / grid as f64, j as f64 / grid as f64)
    };
    let rows = map_indexed(exec, grid + 1, |i| {
        let mut best: Option<(f64, usize)> = None;
        for j in 0..=grid {
            if let Ok(v) = phi(point(i, j), r, s) {
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, j));
                }
            }
        }
        best
    });
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, row) in rows.into_iter().enumerate() {
        if let Some((v, j)) = row {
            if best.is_none_or(|(b, _, _)| v > b) {
                best = Some((v, i, j));
            }
        }
    }
    let (_, bi, bj) = best.ok_or_else(|| Error::Domain("empty grid".into()))?;
    let grid_point = point(bi, bj);

    // Start from the best grid point, nudged into the interior.
    let mut p = grid_point;
    let nudge = 0.25 / grid as f64;
    if !sh.interior(&p) {
        p = LaplacePoint::new(p.alpha.max(nudge * a_max), p.beta.max(nudge));
        let (_, _, v, _) = sh.parts(&p);
        if v <= 0.0 {
            p = LaplacePoint::new(p.alpha * 0.99, p.beta * 0.99);
        }
    }
    let mut value = phi(p, r, s)?;
    let mut iterations = 0;
    let mut grad = grad_phi(p, r, s)?;
    while grad.0.hypot(grad.1) >= tol_grad && iterations < 500 {
        iterations += 1;
        let h = hessian_phi(p, r, s)?;
        let step = if h.negative_definite() {
            let d = h.det();
            (
                -(h.bb * grad.0 - h.ab * grad.1) / d,
                -(-h.ab * grad.0 + h.aa * grad.1) / d,
            )
        } else {
            let scale = 1e-3 / grad.0.hypot(grad.1).max(1.0);
            (grad.0 * scale, grad.1 * scale)
        };
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let q = LaplacePoint::new(p.alpha + t * step.0, p.beta + t * step.1);
            if sh.interior(&q) {
                let vq = phi(q, r, s)?;
                // Near the optimum φ is flat to rounding, so accept ties.
                if vq >= value - 1e-15 * value.abs().max(1.0) {
                    p = q;
                    value = vq;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        grad = grad_phi(p, r, s)?;
        if !moved {
            break;
        }
    }
    Ok(Maximum {
        point: p,
        value,
        grad_norm: grad.0.hypot(grad.1),
        grid_point,
        iterations,
    })
}

/// Numeric maximisation checked against the known maximiser: fails with
/// [`Error::BoundaryMaximum`] when `φ(0,0) >= φ(α₀, β₀)`, and with
/// [`Error::ArgmaxMismatch`] when the search lands farther than `tol` from
/// `(α₀, β₀)`.
pub fn maximize_phi(r: usize, s: usize, grid: usize, tol: f64) -> Result<(LaplacePoint, f64)> {
    let origin = phi(LaplacePoint::new(0.0, 0.0), r, s)?;
    let p0 = stationary_point(r, s);
    let stationary = phi(p0, r, s)?;
    if origin >= stationary {
        return Err(Error::BoundaryMaximum { origin, stationary });
    }
    let found = search_phi_max(r, s, grid, 1e-12, Execution::default())?;
    let distance = found.point.dist(&p0);
    if distance > tol || found.value < origin {
        return Err(Error::ArgmaxMismatch {
            alpha: found.point.alpha,
            beta: found.point.beta,
            distance,
        });
    }
    Ok((found.point, found.value))
}

/// `ψ(α, β) = w^{1/2} / (u^{3/2} z^{1/2 + 2/(s-1)} β^{1 - 2/(s-1)} α^{1/2} v^{1/2})`,
/// evaluated as written for every `s` (at `s = 2` the power of `β` is negative).
pub fn psi(p: LaplacePoint, r: usize, s: usize) -> Result<f64> {
    let (sh, u, w, v, z) = interior_parts(&p, r, s)?;
    let e = 2.0 / (sh.s - 1.0);
    Ok(w.sqrt()
        / (u.powf(1.5) * z.powf(0.5 + e) * p.beta.powf(1.0 - e) * p.alpha.sqrt() * v.sqrt()))
}

/// `ψ(α₀, β₀) = r^{7/2}(s-1)^{5/2} / (√(r-1) m^{2s/(s-1)})`.
pub fn psi_closed_form(r: usize, s: usize) -> f64 {
    let (rf, sf) = (r as f64, s as f64);
    let m = rf * sf - rf - sf;
    rf.powf(3.5) * (sf - 1.0).powf(2.5) / ((rf - 1.0).sqrt() * m.powf(2.0 * sf / (sf - 1.0)))
}

/// `ln b_n`, `b_n = (s-1)²/(2π n³) ((s-1)^{r/s} / r^{m/s})^n`.
pub fn ln_b_n(r: usize, s: usize, n: usize) -> f64 {
    let (rf, sf, nf) = (r as f64, s as f64, n as f64);
    let m = rf * sf - rf - sf;
    2.0 * (sf - 1.0).ln() - (2.0 * PI).ln() - 3.0 * nf.ln()
        + nf * (rf / sf * (sf - 1.0).ln() - m / sf * rf.ln())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prefactors {
    pub ln_b_n: f64,
    pub psi_direct: f64,
    pub psi_closed: f64,
    /// Covolume of the summation lattice `Z × (s-1)Z`.
    pub det_lattice: f64,
    pub det_neg_h0: f64,
    /// `2π ψ₀ / (det(L) √det(-H₀))`.
    pub constant: f64,
    /// `ln` of `constant · b_n · n · e^{n φ₀}`.
    pub ln_second_moment: f64,
}

pub fn laplace_prefactors(r: usize, s: usize, n: usize) -> Result<Prefactors> {
    let p0 = stationary_point(r, s);
    let psi_direct = psi(p0, r, s)?;
    let psi_closed = psi_closed_form(r, s);
    let det_lattice = (s - 1) as f64;
    let det_neg_h0 = det_neg_hessian_closed_form(r, s);
    let constant = 2.0 * PI * psi_closed / (det_lattice * det_neg_h0.sqrt());
    let lb = ln_b_n(r, s, n);
    Ok(Prefactors {
        ln_b_n: lb,
        psi_direct,
        psi_closed,
        det_lattice,
        det_neg_h0,
        constant,
        ln_second_moment: constant.ln()
            + lb
            + (n as f64).ln()
            + n as f64 * phi_max_closed_form(r, s),
    })
}

/// Summary record for one `(r, s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceRecord {
    pub r: usize,
    pub s: usize,
    pub alpha0: f64,
    pub beta0: f64,
    pub phi0: f64,
    pub det_h0_closed: f64,
    pub det_h0_numeric: f64,
    pub ridge_roots: Vec<f64>,
}

pub fn laplace_record(r: usize, s: usize) -> Result<LaplaceRecord> {
    let p0 = stationary_point(r, s);
    Ok(LaplaceRecord {
        r,
        s,
        alpha0: p0.alpha,
        beta0: p0.beta,
        phi0: phi(p0, r, s)?,
        det_h0_closed: det_neg_hessian_closed_form(r, s),
        det_h0_numeric: hessian_finite_difference(p0, r, s, 1e-5)?.det(),
        ridge_roots: ridge_roots(r, s, 50.0, 100_000)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_three_two() {
        let p0 = stationary_point(3, 2);
        assert!((p0.alpha - 1.0 / 3.0).abs() < 1e-15 && (p0.beta - 1.0 / 3.0).abs() < 1e-15);
        let v = phi(p0, 3, 2).unwrap();
        let want = 4.0 * 2f64.ln() - 0.5 * 3f64.ln();
        assert!((v - want).abs() < 1e-12);
        assert!((phi_max_closed_form(3, 2) - want).abs() < 1e-12);
        assert!((det_neg_hessian_closed_form(3, 2) - 47.25).abs() < 1e-12);
        let h = hessian_phi(p0, 3, 2).unwrap();
        assert!((h.det() - 47.25).abs() < 1e-10);
        assert!((h.trace() - trace_hessian_closed_form(3, 2)).abs() < 1e-10);
    }

    #[test]
    fn origin_value() {
        for (r, s) in [(3, 2), (4, 5), (2, 3)] {
            let (rf, sf) = (r as f64, s as f64);
            let m = rf * sf - rf - sf;
            let want = (rf - 1.0) * (rf - 1.0).ln() - m / (sf * (sf - 1.0)) * m.ln();
            assert!((phi(LaplacePoint::new(0.0, 0.0), r, s).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_gradient() {
        for (r, s) in [(3, 2), (2, 3), (4, 5), (9, 6), (5, 4)] {
            let (a, b) = grad_phi(stationary_point(r, s), r, s).unwrap();
            assert!(a.abs() < 1e-10 && b.abs() < 1e-10);
        }
    }

    #[test]
    fn ridge_properties() {
        let p = ridge(0.0, 4, 5).unwrap();
        assert!(p.dist(&stationary_point(4, 5)) < 1e-15);
        for x in [-0.5, 0.3, 2.0] {
            let q = ridge(x, 4, 5).unwrap();
            assert!(grad_phi(q, 4, 5).unwrap().0.abs() < 1e-12);
            let slack = 1.0 - 4.0 * q.alpha - q.beta;
            assert!((slack - ridge_slack(x, 4, 5).unwrap()).abs() < 1e-14);
        }
        assert_eq!(ridge_equation_residual(0.0, 4, 5).unwrap(), 0.0);
        assert!(ridge(-1.0, 4, 5).is_err());
    }

    #[test]
    fn maximisation() {
        let (p, v) = maximize_phi(3, 2, 400, 1e-6).unwrap();
        assert!((p.alpha - 1.0 / 3.0).abs() < 1e-6 && (p.beta - 1.0 / 3.0).abs() < 1e-6);
        assert!((v - 2.223_282_577_9).abs() < 1e-9);
        let (p, _) = maximize_phi(2, 3, 400, 1e-6).unwrap();
        assert!((p.alpha - 0.25).abs() < 1e-6 && (p.beta - 0.25).abs() < 1e-6);
        assert!(matches!(
            maximize_phi(2, 5, 400, 1e-6),
            Err(Error::BoundaryMaximum { .. })
        ));
    }

    #[test]
    fn psi_two_ways() {
        for (r, s) in [(3, 2), (2, 3), (4, 5)] {
            let direct = psi(stationary_point(r, s), r, s).unwrap();
            assert!((direct - psi_closed_form(r, s)).abs() < 1e-10 * direct);
        }
        assert!((psi_closed_form(3, 2) - 33.07).abs() < 0.01);
    }
}
