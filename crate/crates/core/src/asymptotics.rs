//! Closed-form eigenvalue asymptotics near `eps = -1`, near `eps = -2`, and
//! the linear fit used in the conformal limit `eps -> -4`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Outside `|delta| < VALIDITY` the formulas still evaluate but are flagged.
pub const VALIDITY: f64 = 0.2;

/// Choice of the `+-` in front of the imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Leading-log estimate near `eps = -1`, `delta = eps + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearM1Estimate {
    pub delta: f64,
    pub n: i64,
    pub re_e: f64,
    pub im_e: f64,
    pub extrapolated: bool,
}

pub fn near_m1(delta: f64, n: i64) -> Result<NearM1Estimate> {
    if !(delta != 0.0 && delta.is_finite() && delta.abs() < 1.0) {
        return Err(domain(format!("delta must satisfy 0 < |delta| < 1, got {delta}")));
    }
    let even = n.rem_euclid(2) == 0;
    if even != (delta > 0.0) {
        return Err(domain(format!(
            "n = {n} has the wrong parity for delta = {delta} (even n needs delta > 0)"
        )));
    }
    let re_e = (-0.75 * delta.abs().ln()).powf(2.0 / 3.0);
    Ok(NearM1Estimate {
        delta,
        n,
        re_e,
        im_e: n as f64 * PI / (2.0 * re_e.sqrt()),
        extrapolated: delta.abs() >= VALIDITY,
    })
}

/// WKB level of the rescaled problem near `eps = -2`.
pub fn wkb_f0(k: u32) -> f64 {
    ((2.0 * k as f64 + 1.5) * PI.sqrt()).ln()
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(domain(format!("delta = eps + 2 must be positive, got {delta}")));
    }
    Ok(())
}

/// First-order shift of `F` away from `F0`.
pub fn delta_f(k: u32, delta: f64, sign: Sign) -> Result<Complex64> {
    check_delta(delta)?;
    let f0 = wkb_f0(k);
    let ld = delta.ln();
    let re = 4.0 * f0 * f0 - 4.0 * f0 + 3.0 - 4.0 * f0 * ld + 2.0 * ld;
    let im = sign.value() * PI * (8.0 * f0 - 4.0);
    Ok(Complex64::new(re, im) * (delta / 8.0))
}

/// Second-order estimate near `eps = -2`, `delta = eps + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearM2Estimate {
    pub delta: f64,
    pub k: u32,
    pub f0: f64,
    pub d_f: Complex64,
    pub e: Complex64,
    pub extrapolated: bool,
}

pub fn eigenvalue_near_m2(k: u32, delta: f64, sign: Sign) -> Result<Complex64> {
    check_delta(delta)?;
    let f0 = wkb_f0(k);
    let ld = delta.ln();
    let d2 = delta * delta;
    let re = -1.0 + delta * (0.5 * ld - f0)
        - d2 / 8.0 * (ld * ld + 2.0 * ld - 4.0 * ld * f0 + 3.0 - 4.0 * PI * PI - 4.0 * f0 + 4.0 * f0 * f0);
    let im = -delta * PI + 0.5 * d2 * (PI * ld + PI - 2.0 * f0);
    Ok(Complex64::new(re, sign.value() * im))
}

pub fn near_m2(k: u32, delta: f64, sign: Sign) -> Result<NearM2Estimate> {
    Ok(NearM2Estimate {
        delta,
        k,
        f0: wkb_f0(k),
        d_f: delta_f(k, delta, sign)?,
        e: eigenvalue_near_m2(k, delta, sign)?,
        extrapolated: delta >= VALIDITY,
    })
}

/// `|numeric - estimate| / |numeric|`, in percent.
pub fn relative_error_percent(numeric: f64, estimate: f64) -> f64 {
    100.0 * (numeric - estimate).abs() / numeric.abs()
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(samples: &[(f64, f64)]) -> Result<LinearFit> {
    if samples.len() < 2 {
        return Err(domain("a line needs at least two samples"));
    }
    let n = samples.len() as f64;
    let mx = samples.iter().map(|p| p.0).sum::<f64>() / n;
    let my = samples.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = samples.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = samples.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = samples.iter().map(|p| (p.1 - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(domain("all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = samples
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(LinearFit { slope, intercept, r2 })
}

/// Linear fit of eigenvalue against `delta = eps + 4`.
pub fn conformal_fit(samples: &[(f64, f64)]) -> Result<LinearFit> {
    if samples.len() < 4 {
        return Err(domain(format!("need at least 4 samples, got {}", samples.len())));
    }
    let mut xs: Vec<f64> = samples.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(domain("delta values must be distinct"));
    }
    linear_fit(samples)
}

/// Exponent `p` of `y ~ C x^p`, fitted on a log-log scale.
pub fn power_law_exponent(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.iter().any(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return Err(domain("power-law fit needs positive data"));
    }
    let logs: Vec<(f64, f64)> = samples.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    Ok(linear_fit(&logs)?.slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_m1_values() {
        let e = near_m1(0.01, 0).unwrap();
        assert!((e.re_e - (0.75 * 100f64.ln()).powf(2.0 / 3.0)).abs() < 1e-14);
        assert_eq!(e.im_e, 0.0);
        let p = near_m1(0.01, 2).unwrap();
        let m = near_m1(0.01, -2).unwrap();
        assert_eq!(p.im_e, -m.im_e);
        assert!((p.im_e - PI / p.re_e.sqrt()).abs() < 1e-14);
        assert!(near_m1(0.01, 1).is_err());
        assert!(near_m1(-0.01, 2).is_err());
        assert!(near_m1(-0.01, 3).is_ok());
        assert!(near_m1(0.3, 0).unwrap().extrapolated);
    }

    #[test]
    fn wkb_levels() {
        assert!((wkb_f0(0) - (1.5 * PI.sqrt()).ln()).abs() < 1e-15);
        for k in 0..50 {
            assert!(wkb_f0(k + 1) > wkb_f0(k));
            let back = wkb_f0(k).exp() / PI.sqrt();
            assert!((back - (2.0 * k as f64 + 1.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_f_structure() {
        let a = delta_f(3, 0.01, Sign::Plus).unwrap();
        let b = delta_f(3, 0.01, Sign::Minus).unwrap();
        assert_eq!(a, b.conj());
        // independent expansion: delta/8 (A + B ln delta) with A, B from F0
        let f0 = wkb_f0(3);
        let d: f64 = 0.02;
        let want = d / 8.0 * (4.0 * f0 * f0 - 4.0 * f0 + 3.0 + (2.0 - 4.0 * f0) * d.ln());
        assert!((delta_f(3, d, Sign::Plus).unwrap().re - want).abs() < 1e-15);
        assert!((a.im - 0.01 / 8.0 * PI * (8.0 * f0 - 4.0)).abs() < 1e-15);
        assert!(delta_f(0, 0.0, Sign::Plus).is_err());
    }

    #[test]
    fn near_m2_conjugate_pair_and_limit() {
        for k in [0, 2, 7] {
            let p = eigenvalue_near_m2(k, 0.03, Sign::Plus).unwrap();
            let m = eigenvalue_near_m2(k, 0.03, Sign::Minus).unwrap();
            assert_eq!(p, m.conj());
            let tiny = eigenvalue_near_m2(k, 1e-9, Sign::Plus).unwrap();
            assert!((tiny - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
        }
        let est = near_m2(1, 0.01, Sign::Minus).unwrap();
        assert!(!est.extrapolated);
        assert_eq!(est.f0, wkb_f0(1));
    }

    #[test]
    fn near_m2_direct_substitution() {
        // k = 0, delta = 0.01 evaluated term by term
        let f0 = (1.5 * PI.sqrt()).ln();
        let l = 0.01f64.ln();
        let re = -1.0 + 0.01 * (l / 2.0 - f0)
            - 1e-4 / 8.0 * (l * l + 2.0 * l - 4.0 * l * f0 + 3.0 - 4.0 * PI * PI - 4.0 * f0 + 4.0 * f0 * f0);
        let im = -0.01 * PI + 0.5e-4 * (PI * l + PI - 2.0 * f0);
        let got = eigenvalue_near_m2(0, 0.01, Sign::Plus).unwrap();
        assert!((got.re - re).abs() < 1e-15 && (got.im - im).abs() < 1e-15);
    }

    #[test]
    fn fits() {
        let line: Vec<_> = (1..6).map(|i| (i as f64 * 0.01, 0.02 * i as f64)).collect();
        let f = conformal_fit(&line).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.intercept.abs() < 1e-14 && (f.r2 - 1.0).abs() < 1e-12);
        assert!(conformal_fit(&line[..3]).is_err());
        assert!(conformal_fit(&[(0.1, 1.0), (0.1, 2.0), (0.2, 1.0), (0.3, 1.0)]).is_err());
        let pw: Vec<_> = [1.0, 2.0, 5.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(0.6))).collect();
        assert!((power_law_exponent(&pw).unwrap() - 0.6).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sign_conjugates(k in 0u32..40, delta in 1e-6f64..0.19) {
                let p = eigenvalue_near_m2(k, delta, Sign::Plus).unwrap();
                let m = eigenvalue_near_m2(k, delta, Sign::Minus).unwrap();
                prop_assert_eq!(p, m.conj());
            }

            #[test]
            fn near_m1_spacing(delta in 1e-6f64..0.19, n in 0i64..20) {
                let a = near_m1(delta, 2 * n).unwrap();
                let b = near_m1(delta, 2 * n + 2).unwrap();
                let gap = PI / a.re_e.sqrt();
                prop_assert!((b.im_e - a.im_e - gap).abs() <= 1e-12 * (1.0 + gap));
            }
        }
    }
}
