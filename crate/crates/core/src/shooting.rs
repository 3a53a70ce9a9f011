//! Eigenvalues on the principal sheet by shooting along the Stokes-wedge centers.
//!
//! Along the ray `x = r e^{i theta}` the equation `-y'' + V y = E y` becomes
//! `d^2y/dr^2 = e^{2 i theta} (V - E) y`. The solution that decays at the far
//! end of each ray is integrated inward to the origin, and the two are patched
//! through their Wronskian.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::DEFAULT_R_MAX;
use crate::error::{domain, Error, Result};
use crate::wedges::{wedge_geometry, EpsilonParam};

/// Smallest step count accepted by [`integrate_ray`].
pub const MIN_STEPS: usize = 1000;
/// Required `Re int sqrt(q) dr` along each ray, the log of the decay factor.
pub const DECAY_EXPONENT: f64 = 35.0;
const R_MAX_CAP: f64 = 400.0;
const RENORM_EVERY: usize = 100;
const SECANT_MAX_ITER: usize = 100;

/// Inward solution at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaySolution {
    /// `y(0)`, up to the positive factor `exp(-log_scale)`.
    pub y0: Complex64,
    /// `dy/dx` at the origin, same scale as `y0`.
    pub y1: Complex64,
    pub theta: f64,
    pub r_max: f64,
    pub steps: usize,
    /// Log of the product of all renormalization factors.
    pub log_scale: f64,
}

/// `e^{2 i theta} V(r e^{i theta})` as a function of `r`.
#[derive(Clone, Copy)]
struct RayPotential {
    exponent: Complex64,
    phase: Complex64,
    rot2: Complex64,
}

impl RayPotential {
    fn new(eps: Complex64, theta: f64) -> Self {
        // ln(ix) = ln r + i (theta + pi/2) with theta on the principal sheet
        let phi = theta + FRAC_PI_2;
        let rot2 = Complex64::from_polar(1.0, 2.0 * theta);
        Self {
            exponent: eps + 2.0,
            phase: rot2 * (eps * Complex64::new(0.0, phi)).exp() * rot2,
            rot2,
        }
    }

    /// `q(r) = e^{2 i theta} (V - E)`.
    fn q(&self, r: f64, e: Complex64) -> Complex64 {
        let v = if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (self.exponent * r.ln()).exp() * self.phase
        };
        v - self.rot2 * e
    }
}

fn sqrt_right(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.re < 0.0 {
        -s
    } else {
        s
    }
}

fn check_sheet(eps: Complex64) -> Result<EpsilonParam> {
    let p = EpsilonParam::new(eps)?;
    if !p.on_principal_sheet() {
        return Err(domain(format!(
            "shooting works on the principal sheet only, Re(eps) > -1; got {eps}"
        )));
    }
    Ok(p)
}

/// RK4 from `r_max` in to the origin, starting on the decaying branch.
pub fn integrate_ray(eps: Complex64, e: Complex64, theta: f64, r_max: f64, steps: usize) -> Result<RaySolution> {
    check_sheet(eps)?;
    let w = wedge_geometry(eps.re)?;
    if !(w.contains_right(theta) || w.contains_left(theta)) {
        return Err(domain(format!("ray angle {theta} is not inside a Stokes wedge")));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(domain(format!("r_max must be positive, got {r_max}")));
    }
    if steps < MIN_STEPS {
        return Err(domain(format!("need at least {MIN_STEPS} steps, got {steps}")));
    }
    let pot = RayPotential::new(eps, theta);
    let h = -r_max / steps as f64;
    let mut y = Complex64::new(1.0, 0.0);
    let mut dy = -sqrt_right(pot.q(r_max, e));
    let mut log_scale = 0.0;
    for k in 0..steps {
        let r = r_max + k as f64 * h;
        let rh = r + 0.5 * h;
        let r1 = if k + 1 == steps { 0.0 } else { r + h };
        let q0 = pot.q(r, e);
        let qh = pot.q(rh, e);
        let q1 = pot.q(r1, e);
        let k1y = dy;
        let k1d = q0 * y;
        let k2y = dy + 0.5 * h * k1d;
        let k2d = qh * (y + 0.5 * h * k1y);
        let k3y = dy + 0.5 * h * k2d;
        let k3d = qh * (y + 0.5 * h * k2y);
        let k4y = dy + h * k3d;
        let k4d = q1 * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        if (k + 1) % RENORM_EVERY == 0 {
            let m = y.norm().max(dy.norm());
            if !(m.is_finite()) || m == 0.0 {
                return Err(Error::Overflow(format!(
                    "ray integration lost the solution at r = {r1} (E = {e})"
                )));
            }
            y /= m;
            dy /= m;
            log_scale += m.ln();
        }
    }
    if !(y.norm().is_finite() && dy.norm().is_finite()) {
        return Err(Error::Overflow(format!("ray integration overflowed (E = {e})")));
    }
    Ok(RaySolution {
        y0: y,
        y1: dy * Complex64::from_polar(1.0, -theta),
        theta,
        r_max,
        steps,
        log_scale,
    })
}

/// `Re int_0^r_max sqrt(q) dr` by composite Simpson on 400 panels.
pub fn decay_integral(eps: Complex64, e: Complex64, theta: f64, r_max: f64) -> f64 {
    let pot = RayPotential::new(eps, theta);
    let n = 400;
    let h = r_max / n as f64;
    let f = |r: f64| sqrt_right(pot.q(r, e)).re;
    let mut acc = f(0.0) + f(r_max);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// Smallest `DEFAULT_R_MAX * 1.25^k` meeting the decay requirement on both rays.
pub fn choose_r_max(eps: Complex64, e: Complex64) -> Result<f64> {
    let w = wedge_geometry(eps.re)?;
    let mut r = DEFAULT_R_MAX;
    while r <= R_MAX_CAP {
        let right = decay_integral(eps, e, w.right_center, r);
        let left = decay_integral(eps, e, w.left_center, r);
        if right >= DECAY_EXPONENT && left >= DECAY_EXPONENT {
            return Ok(r);
        }
        r *= 1.25;
    }
    Err(domain(format!(
        "no ray length up to {R_MAX_CAP} gives enough decay at E = {e}"
    )))
}

/// Step count resolving the local wavelength at the far end of the ray.
pub fn default_steps(eps: Complex64, e: Complex64, r_max: f64) -> usize {
    let q_end = (eps + 2.0) * r_max.ln();
    let scale = q_end.exp().norm() + e.norm();
    let n = (r_max * (1.0 + scale.sqrt()) * 20.0).ceil() as usize;
    n.max(2 * MIN_STEPS)
}

/// `(y(0), y'(0))` scaled to unit Euclidean length.
fn unit_data(s: &RaySolution) -> (Complex64, Complex64) {
    let m = (s.y0.norm_sqr() + s.y1.norm_sqr()).sqrt();
    (s.y0 / m, s.y1 / m)
}

/// Patching function `psi_R(0) psi_L'(0) - psi_L(0) psi_R'(0)`.
///
/// Each solution is scaled so that `|psi(0)|^2 + |psi'(0)|^2 = 1`, which
/// bounds the result by 1 in modulus without moving its zeros.
pub fn wronskian(eps: Complex64, e: Complex64) -> Result<Complex64> {
    let r_max = choose_r_max(eps, e)?;
    wronskian_with(eps, e, r_max, default_steps(eps, e, r_max))
}

pub fn wronskian_with(eps: Complex64, e: Complex64, r_max: f64, steps: usize) -> Result<Complex64> {
    let w = wedge_geometry(eps.re)?;
    let right = integrate_ray(eps, e, w.right_center, r_max, steps)?;
    let left = integrate_ray(eps, e, w.left_center, r_max, steps)?;
    let (r0, r1) = unit_data(&right);
    let (l0, l1) = unit_data(&left);
    Ok(r0 * l1 - l0 * r1)
}

/// Real-valued Wronskian for real `eps` and real `E`.
///
/// The left solution is the mirror image of the right one, `psi_L(x) =
/// conj(psi_R(-conj x))`, so only one ray is integrated.
pub fn real_wronskian(eps: f64, e: f64, steps_factor: usize) -> Result<f64> {
    let ec = Complex64::new(eps, 0.0);
    let en = Complex64::new(e, 0.0);
    let r_max = choose_r_max(ec, en)?;
    let w = wedge_geometry(eps)?;
    let right = integrate_ray(ec, en, w.right_center, r_max, default_steps(ec, en, r_max) * steps_factor)?;
    let (y0, y1) = unit_data(&right);
    // psi_L(0) = conj(y0), psi_L'(0) = -conj(y1)
    Ok((-y0 * y1.conj() - y0.conj() * y1).re)
}

/// Secant iteration on the Wronskian from `guess`.
pub fn find_eigenvalue(eps: Complex64, guess: Complex64) -> Result<Complex64> {
    check_sheet(eps)?;
    let mut x0 = guess;
    let mut x1 = guess + Complex64::new(1e-4, 1e-5) * (1.0 + guess.norm());
    let mut f0 = wronskian(eps, x0)?;
    let mut f1 = wronskian(eps, x1)?;
    for _ in 0..SECANT_MAX_ITER {
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            if f1.norm() == 0.0 {
                return Ok(x1);
            }
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        if !(x2.re.is_finite() && x2.im.is_finite()) {
            break;
        }
        if (x2 - x1).norm() <= 1e-10 * (1.0 + x2.norm()) {
            return Ok(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = wronskian(eps, x1)?;
    }
    Err(Error::SecantFailed {
        last: x1,
        iterations: SECANT_MAX_ITER,
    })
}

/// Real eigenvalues found on a real-energy scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealScan {
    pub eps: f64,
    pub e_max: f64,
    pub roots: Vec<f64>,
    /// Pairs of roots closer than the scan spacing (near an exceptional point).
    pub warnings: Vec<String>,
}

/// Spacing of the coarse real-energy scan.
pub const SCAN_STEP: f64 = 0.02;
const ROOT_TOL: f64 = 1e-10;
const GOLDEN_TOL: f64 = 1e-9;

fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    while b - a > ROOT_TOL * (1.0 + a.abs()) {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Minimizes `g` on `[a, b]`, returning `(argmin, min)`.
fn golden_min(g: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    while b - a > GOLDEN_TOL {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d)?;
        }
    }
    Ok(if gc < gd { (c, gc) } else { (d, gd) })
}

/// Sign changes of the real Wronskian on `(0, e_max]`, with near-tangent dips
/// refined by golden-section search.
pub fn scan_real_eigenvalues(eps: f64, e_max: f64) -> Result<RealScan> {
    scan_real_with(eps, e_max, 1)
}

pub fn scan_real_with(eps: f64, e_max: f64, steps_factor: usize) -> Result<RealScan> {
    check_sheet(Complex64::new(eps, 0.0))?;
    if !(e_max > 0.0 && e_max <= 50.0) {
        return Err(domain(format!("E_max must lie in (0, 50], got {e_max}")));
    }
    let f = |e: f64| real_wronskian(eps, e, steps_factor);
    let n = (e_max / SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| e_max * i as f64 / n as f64).collect();
    let vals = grid.iter().map(|&e| f(e)).collect::<Result<Vec<f64>>>()?;

    let mut roots = Vec::new();
    for i in 0..n {
        let (a, b) = (grid[i], grid[i + 1]);
        let (fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            roots.push(a);
        } else if (fa > 0.0) != (fb > 0.0) && fb != 0.0 {
            roots.push(bisect(&f, a, b, fa)?);
        }
        // a dip towards zero with no sign change may hide two close roots
        if i >= 1 && i + 1 <= n {
            let fm = vals[i];
            let (fl, fr) = (vals[i - 1], vals[i + 1]);
            let same = (fl > 0.0) == (fm > 0.0) && (fm > 0.0) == (fr > 0.0);
            if same && fm.abs() < fl.abs() && fm.abs() <= fr.abs() {
                let sign = fm.signum();
                let g = |e: f64| f(e).map(|v| sign * v);
                let (emin, gmin) = golden_min(&g, grid[i - 1], grid[i + 1])?;
                if gmin < 0.0 {
                    let left = bisect(&f, grid[i - 1], emin, fl)?;
                    let right = bisect(&f, emin, grid[i + 1], sign * gmin)?;
                    roots.push(left);
                    roots.push(right);
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
    let warnings = roots
        .windows(2)
        .filter(|w| w[1] - w[0] < SCAN_STEP)
        .map(|w| format!("roots {:.6} and {:.6} are closer than the scan step", w[0], w[1]))
        .collect();
    Ok(RealScan {
        eps,
        e_max,
        roots,
        warnings,
    })
}

pub fn count_real_eigenvalues(eps: f64, e_max: f64) -> Result<usize> {
    Ok(scan_real_eigenvalues(eps, e_max)?.roots.len())
}

/// Energy ceiling used by [`find_transition`].
pub const TRANSITION_E_MAX: f64 = 30.0;

/// Bisection in `eps` for the point where the real-eigenvalue count changes.
pub fn find_transition(eps_lo: f64, eps_hi: f64) -> Result<f64> {
    find_transition_with(eps_lo, eps_hi, 1)
}

pub fn find_transition_with(eps_lo: f64, eps_hi: f64, steps_factor: usize) -> Result<f64> {
    if !(eps_lo < eps_hi) {
        return Err(domain(format!("bracket [{eps_lo}, {eps_hi}] is empty")));
    }
    let count = |e: f64| scan_real_with(e, TRANSITION_E_MAX, steps_factor).map(|s| s.roots.len());
    let (mut lo, mut hi) = (eps_lo, eps_hi);
    let c_lo = count(lo)?;
    let c_hi = count(hi)?;
    if c_lo == c_hi {
        return Err(Error::Precondition(format!(
            "real-eigenvalue count is {c_lo} at both ends of [{eps_lo}, {eps_hi}]"
        )));
    }
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        if count(mid)? == c_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
