use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::arnoldi::{dedup_pairs, run_plan};
use super::hessenberg::{hessenberg_eig, DenseMatrix};
use super::{cmp_eigenvalue, EigenPair, ShiftPlan};
use crate::discretize::DiscretizedOperator;
use crate::error::{domain, Result};

/// Axis-aligned rectangle in the complex energy plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min <= re_max && im_min <= im_max) {
            return Err(domain(format!(
                "rectangle bounds out of order: [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn area(&self) -> f64 {
        (self.re_max - self.re_min) * (self.im_max - self.im_min)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// Mirror image under complex conjugation.
    pub fn conj(&self) -> Self {
        Self {
            re_min: self.re_min,
            re_max: self.re_max,
            im_min: -self.im_max,
            im_max: -self.im_min,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub nx: usize,
    pub ny: usize,
    /// Relative jitter of each lattice shift, as a fraction of the cell size.
    pub jitter: f64,
    /// Template for the per-shift Arnoldi runs; its `shifts` are ignored.
    pub plan: ShiftPlan,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            nx: 8,
            ny: 8,
            jitter: 0.05,
            plan: ShiftPlan::default(),
        }
    }
}

impl ScanConfig {
    /// Jittered cell-center lattice over `rect`, reproducible from the plan seed.
    pub fn lattice(&self, rect: &Rect) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.plan.seed ^ 0x9e37_79b9_7f4a_7c15);
        let dx = (rect.re_max - rect.re_min) / self.nx as f64;
        let dy = (rect.im_max - rect.im_min) / self.ny as f64;
        let mut shifts = Vec::with_capacity(self.nx * self.ny);
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let jx = rng.gen_range(-self.jitter..=self.jitter);
                let jy = rng.gen_range(-self.jitter..=self.jitter);
                shifts.push(Complex64::new(
                    rect.re_min + (ix as f64 + 0.5 + jx) * dx,
                    rect.im_min + (iy as f64 + 0.5 + jy) * dy,
                ));
            }
        }
        shifts
    }
}

/// Eigenpairs inside `rect`, from shift-invert Arnoldi over a shift lattice.
///
/// The result is deduplicated and ordered by `(Re, Im)`.
pub fn spectrum_scan(op: &DiscretizedOperator, rect: &Rect, cfg: &ScanConfig) -> Result<Vec<EigenPair>> {
    if rect.area() <= 0.0 || cfg.nx == 0 || cfg.ny == 0 {
        return Ok(Vec::new());
    }
    let plan = ShiftPlan {
        shifts: cfg.lattice(rect),
        ..cfg.plan.clone()
    };
    let outcomes = run_plan(op, &plan)?;
    let inside = outcomes
        .into_iter()
        .flat_map(|o| o.converged)
        .filter(|p| rect.contains(p.value))
        .collect();
    Ok(dedup_pairs(inside))
}

/// Converged eigenpairs with real eigenvalue in `[lo, hi]`, from `n_shifts`
/// evenly spaced real shifts.
///
/// An eigenvalue counts as real when `|Im E| <= 1e-8 (1 + |E|)`.
pub fn real_axis_scan(
    op: &DiscretizedOperator,
    lo: f64,
    hi: f64,
    n_shifts: usize,
    template: &ShiftPlan,
) -> Result<Vec<EigenPair>> {
    if !(lo < hi) || n_shifts == 0 {
        return Err(domain(format!(
            "need lo < hi and at least one shift, got [{lo}, {hi}] with {n_shifts}"
        )));
    }
    let step = (hi - lo) / n_shifts as f64;
    let plan = ShiftPlan {
        shifts: (0..n_shifts)
            .map(|i| Complex64::new(lo + (i as f64 + 0.5) * step, 0.0))
            .collect(),
        ..template.clone()
    };
    let real = run_plan(op, &plan)?
        .into_iter()
        .flat_map(|o| o.converged)
        .filter(|p| p.value.im.abs() <= 1e-8 * (1.0 + p.value.norm()) && p.value.re >= lo && p.value.re <= hi)
        .collect();
    Ok(dedup_pairs(real))
}

/// Every eigenvalue of the tridiagonal operator by dense QR (small `n` only).
pub fn dense_spectrum(op: &DiscretizedOperator) -> Result<Vec<Complex64>> {
    let dense = DenseMatrix::from_rows(&op.to_dense())?;
    let mut eig = hessenberg_eig(&dense)?;
    eig.sort_by(cmp_eigenvalue);
    Ok(eig)
}
