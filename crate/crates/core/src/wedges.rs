//! Branch-cut-aware potential and Stokes-wedge geometry.
//!
//! The potential `x^2 (ix)^eps` is multivalued for non-integer `eps`. The cut
//! runs along the positive imaginary `x` axis, so on the principal sheet
//! `arg x` lies in `(-3pi/2, pi/2]` and `arg(ix) = arg x + pi/2` lies in
//! `(-pi, pi]`. With this choice the potential is mirror symmetric about the
//! imaginary axis (PT symmetry).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// The deformation parameter `eps`, possibly complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonParam {
    pub value: Complex64,
    pub is_real: bool,
}

impl EpsilonParam {
    pub fn new(value: Complex64) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(domain(format!("eps must be finite, got {value}")));
        }
        if value.re <= -4.0 {
            return Err(domain(format!("Re(eps) must exceed -4, got {}", value.re)));
        }
        Ok(Self {
            value,
            is_real: value.im == 0.0,
        })
    }

    pub fn real(value: f64) -> Result<Self> {
        Self::new(Complex64::new(value, 0.0))
    }

    /// Number of loops the rotated contour makes about `s = 0`, `2 / (4 + eps)`.
    pub fn loops(&self) -> f64 {
        2.0 / (4.0 + self.value.re)
    }

    /// True when the two wedges live on the principal sheet (`Re eps > -1`).
    pub fn on_principal_sheet(&self) -> bool {
        self.value.re > -1.0
    }
}

/// Centers and edges of the left and right Stokes wedges, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeGeometry {
    pub right_center: f64,
    pub right_upper: f64,
    pub right_lower: f64,
    pub left_center: f64,
    pub left_upper: f64,
    pub left_lower: f64,
    pub opening: f64,
}

impl WedgeGeometry {
    pub fn contains_right(&self, theta: f64) -> bool {
        theta > self.right_lower && theta < self.right_upper
    }

    /// The left wedge is mirrored, so its "upper" edge has the smaller angle.
    pub fn contains_left(&self, theta: f64) -> bool {
        theta > self.left_upper && theta < self.left_lower
    }
}

pub fn wedge_geometry(eps: f64) -> Result<WedgeGeometry> {
    if !eps.is_finite() || eps <= -4.0 {
        return Err(domain(format!("wedge geometry needs eps > -4, got {eps}")));
    }
    let denom = 8.0 + 2.0 * eps;
    let right_center = -eps * PI / denom;
    let right_upper = (2.0 - eps) * PI / denom;
    let right_lower = -(2.0 + eps) * PI / denom;
    Ok(WedgeGeometry {
        right_center,
        right_upper,
        right_lower,
        left_center: -PI - right_center,
        left_upper: -PI - right_upper,
        left_lower: -PI - right_lower,
        opening: right_upper - right_lower,
    })
}

/// `arg x` on the principal sheet, in `(-3pi/2, pi/2]`.
pub fn principal_arg(x: Complex64) -> Result<f64> {
    if x.re == 0.0 && x.im == 0.0 {
        return Err(domain("arg is undefined at x = 0"));
    }
    let a = x.im.atan2(x.re);
    Ok(if a > FRAC_PI_2 { a - 2.0 * PI } else { a })
}

/// `x^2 (ix)^eps` on the principal sheet.
///
/// The power is formed from `ln|x| + i (arg x + pi/2)` with the principal-sheet
/// argument, never through a library complex power.
pub fn potential(x: Complex64, eps: Complex64) -> Result<Complex64> {
    if x.re == 0.0 && x.im == 0.0 {
        if eps.re < 0.0 {
            return Err(Error::Singularity(eps.re));
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    let log_ix = Complex64::new(x.norm().ln(), principal_arg(x)? + FRAC_PI_2);
    Ok(x * x * (eps * log_ix).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-13 * (1.0 + b.abs())
    }

    #[test]
    fn harmonic_wedges() {
        let w = wedge_geometry(0.0).unwrap();
        assert!(close(w.right_center, 0.0));
        assert!(close(w.right_upper, PI / 4.0));
        assert!(close(w.right_lower, -PI / 4.0));
        assert!(close(w.opening, PI / 2.0));
        assert!(close(w.left_center, -PI));
    }

    #[test]
    fn wedges_at_minus_one_open_to_120_degrees() {
        let w = wedge_geometry(-1.0).unwrap();
        assert!(close(w.right_upper, PI / 2.0));
        assert!(close(w.right_lower, -PI / 6.0));
        assert!(close(w.opening, 2.0 * PI / 3.0));
        // upper edges touch: the left upper edge is -3pi/2, i.e. pi/2 mod 2pi
        let gap = (w.right_upper - w.left_upper).rem_euclid(2.0 * PI);
        assert!(gap.min(2.0 * PI - gap) < 1e-12);
    }

    #[test]
    fn right_center_at_one() {
        assert!(close(wedge_geometry(1.0).unwrap().right_center, -PI / 10.0));
    }

    #[test]
    fn wedge_domain() {
        assert!(wedge_geometry(-4.0).is_err());
        assert!(wedge_geometry(-5.0).is_err());
        assert!(wedge_geometry(f64::NAN).is_err());
    }

    #[test]
    fn principal_arg_branch() {
        assert_eq!(principal_arg(Complex64::new(1.0, 0.0)).unwrap(), 0.0);
        assert!(close(principal_arg(Complex64::new(-1.0, 0.0)).unwrap(), -PI));
        assert!(close(principal_arg(Complex64::new(0.0, -1.0)).unwrap(), -FRAC_PI_2));
        assert!(close(principal_arg(Complex64::new(0.0, 1.0)).unwrap(), FRAC_PI_2));
        assert!(principal_arg(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn potential_values() {
        let c = |re, im| Complex64::new(re, im);
        assert!((potential(c(2.0, 0.0), c(0.0, 0.0)).unwrap() - c(4.0, 0.0)).norm() < 1e-14);
        assert!((potential(c(1.0, 0.0), c(-1.0, 0.0)).unwrap() - c(0.0, -1.0)).norm() < 1e-14);
        assert!((potential(c(1.0, 0.0), c(2.0, 0.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
        assert_eq!(
            potential(c(0.0, 0.0), c(-0.5, 0.0)),
            Err(Error::Singularity(-0.5))
        );
        assert_eq!(potential(c(0.0, 0.0), c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn epsilon_param_bounds() {
        assert!(EpsilonParam::real(-4.0).is_err());
        assert!(EpsilonParam::real(-3.99).is_ok());
        assert!(EpsilonParam::real(-3.99).unwrap().is_real);
        assert!(!EpsilonParam::new(Complex64::new(-1.0, 0.05)).unwrap().is_real);
        assert!((EpsilonParam::real(-3.0).unwrap().loops() - 2.0).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn potential_is_pt_symmetric(
                r in 0.05f64..5.0,
                theta in -1.49f64 * PI..0.49 * PI,
                eps in -0.99f64..1.0,
            ) {
                let x = Complex64::from_polar(r, theta);
                let mirrored = -x.conj();
                let e = Complex64::new(eps, 0.0);
                let v = potential(x, e).unwrap();
                let vm = potential(mirrored, e).unwrap();
                prop_assert!((vm - v.conj()).norm() <= 1e-10 * (1.0 + v.norm()));
            }

            #[test]
            fn wedge_invariants(eps in -3.99f64..4.0) {
                let w = wedge_geometry(eps).unwrap();
                prop_assert!(w.right_lower < w.right_center && w.right_center < w.right_upper);
                prop_assert!((w.opening - 4.0 * PI / (8.0 + 2.0 * eps)).abs() < 1e-12);
                prop_assert!((w.left_lower - w.left_upper - w.opening).abs() < 1e-12);
                prop_assert!((w.left_center + PI + w.right_center).abs() < 1e-12);
                prop_assert!(w.contains_right(w.right_center));
                prop_assert!(w.contains_left(w.left_center));
            }
        }
    }
}
