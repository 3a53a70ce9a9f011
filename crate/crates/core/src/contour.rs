//! The looping ("toboggan") contour in the rotated variable `s = ix`.
//!
//! For `t` in `(-1, 1)` the path is `s(t) = exp(2 pi i t / (4 + eps)) / (1 - t^2)`.
//! Everything is derived from its logarithm
//! `L(t) = 2 pi i t / (4 + eps) - ln(1 - t^2)`, which is single valued in `t`
//! no matter how many times the path winds around `s = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::wedges::{wedge_geometry, EpsilonParam};

/// Which path carries the eigenvalue problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ContourKind {
    /// The parametrized loop in the `s` plane, `t` in `(-1, 1)`.
    WindingLoop,
    /// Two straight rays in the `x` plane meeting at the origin.
    WedgeRays {
        theta_left: f64,
        theta_right: f64,
        r_max: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub eps: EpsilonParam,
    pub kind: ContourKind,
}

/// Ray length used by the shooting solver unless the decay check asks for more.
pub const DEFAULT_R_MAX: f64 = 15.0;

impl ContourSpec {
    pub fn winding_loop(eps: EpsilonParam) -> Result<Self> {
        if eps.value.re >= 0.0 && eps.value != Complex64::new(0.0, 0.0) {
            return Err(domain(format!(
                "winding contour accepts Re(eps) in (-4, 0), got {}",
                eps.value
            )));
        }
        Ok(Self {
            eps,
            kind: ContourKind::WindingLoop,
        })
    }

    /// Rays on the wedge centers (evaluated at `Re eps` for complex `eps`).
    pub fn wedge_rays(eps: EpsilonParam, r_max: f64) -> Result<Self> {
        if !eps.on_principal_sheet() {
            return Err(domain(format!(
                "wedge rays need Re(eps) > -1, got {}",
                eps.value.re
            )));
        }
        if !(r_max > 0.0) {
            return Err(domain(format!("r_max must be positive, got {r_max}")));
        }
        let w = wedge_geometry(eps.value.re)?;
        Self::rays(eps, w.left_center, w.right_center, r_max)
    }

    pub fn rays(eps: EpsilonParam, theta_left: f64, theta_right: f64, r_max: f64) -> Result<Self> {
        if !eps.on_principal_sheet() {
            return Err(domain("wedge rays need Re(eps) > -1"));
        }
        let w = wedge_geometry(eps.value.re)?;
        if !w.contains_left(theta_left) || !w.contains_right(theta_right) {
            return Err(domain(format!(
                "ray angles ({theta_left}, {theta_right}) are not inside the Stokes wedges"
            )));
        }
        if !(r_max > 0.0) {
            return Err(domain(format!("r_max must be positive, got {r_max}")));
        }
        Ok(Self {
            eps,
            kind: ContourKind::WedgeRays {
                theta_left,
                theta_right,
                r_max,
            },
        })
    }
}

/// A point on the winding contour with its first two `t`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSample {
    pub t: f64,
    pub log_s: Complex64,
    pub s: Complex64,
    pub s1: Complex64,
    pub s2: Complex64,
}

fn check_t(t: f64) -> Result<()> {
    if !(t.abs() < 1.0) {
        return Err(domain(format!("contour parameter must satisfy |t| < 1, got {t}")));
    }
    Ok(())
}

fn winding_rate(eps: Complex64) -> Result<Complex64> {
    let four_plus = eps + 4.0;
    if four_plus.norm() == 0.0 {
        return Err(domain("eps = -4 is the conformal point; contour undefined"));
    }
    Ok(Complex64::new(0.0, 2.0 * PI) / four_plus)
}

pub fn log_s(t: f64, eps: Complex64) -> Result<Complex64> {
    check_t(t)?;
    Ok(winding_rate(eps)? * t - (1.0 - t * t).ln())
}

pub fn contour_sample(t: f64, eps: Complex64) -> Result<ContourSample> {
    let l = log_s(t, eps)?;
    let one_m = 1.0 - t * t;
    let dl = winding_rate(eps)? + 2.0 * t / one_m;
    let ddl = (2.0 + 2.0 * t * t) / (one_m * one_m);
    let s = l.exp();
    Ok(ContourSample {
        t,
        log_s: l,
        s,
        s1: s * dl,
        s2: s * (ddl + dl * dl),
    })
}

/// `s^(2+eps)` continued along the contour, `exp((2 + eps) L(t))`.
pub fn power_term(t: f64, eps: Complex64) -> Result<Complex64> {
    Ok(((eps + 2.0) * log_s(t, eps)?).exp())
}

/// Which sheet the coefficient `s^(2+eps)` is read from.
///
/// The two choices agree whenever the contour stays inside `|arg s| < pi`,
/// which is the case for `eps >= -2`. Below that the contour winds past the
/// negative real axis and they describe different operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum PowerBranch {
    /// `exp((2 + eps) Log s)` with `arg s` reduced to `(-pi, pi]` at every point.
    #[default]
    Principal,
    /// `exp((2 + eps) L(t))`, continued along the contour through every turn.
    Continued,
}

impl std::str::FromStr for PowerBranch {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "principal" => Ok(Self::Principal),
            "continued" => Ok(Self::Continued),
            other => Err(domain(format!(
                "unknown power branch '{other}' (expected principal or continued)"
            ))),
        }
    }
}

impl std::fmt::Display for PowerBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Principal => "principal",
            Self::Continued => "continued",
        })
    }
}

fn reduce_arg(phi: f64) -> f64 {
    let mut r = phi - 2.0 * PI * (phi / (2.0 * PI)).round();
    if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

/// `s^(2+eps)` on the requested branch.
pub fn power_term_on(t: f64, eps: Complex64, branch: PowerBranch) -> Result<Complex64> {
    let l = log_s(t, eps)?;
    let l = match branch {
        PowerBranch::Continued => l,
        PowerBranch::Principal => Complex64::new(l.re, reduce_arg(l.im)),
    };
    Ok(((eps + 2.0) * l).exp())
}

/// Net number of turns of `s(t)` about the origin between `t = -1 + mu` and `1 - mu`.
pub fn winding_turns(eps: Complex64, mu: f64) -> Result<f64> {
    let hi = log_s(1.0 - mu, eps)?;
    let lo = log_s(-1.0 + mu, eps)?;
    Ok((hi.im - lo.im) / (2.0 * PI))
}
