//! Complex non-Hermitian eigensolver for the discretized operator.
//!
//! Shift-invert Arnoldi on `(M - sigma I)^-1` with a banded LU, a dense
//! shifted-QR solve of the projected Hessenberg matrix, and Ritz-pair
//! extraction. Shift lattices cover rectangles of the complex plane.

mod arnoldi;
mod hessenberg;
mod lu;
mod scan;

pub use arnoldi::{arnoldi_shift_invert, dedup_pairs, run_shift, shifted_norm, ShiftOutcome};
pub use hessenberg::{eigenvector, hessenberg_eig, DenseMatrix};
pub use lu::{factor_bands, lu_tridiag, Factorization};
pub use scan::{dense_spectrum, real_axis_scan, spectrum_scan, Rect, ScanConfig};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Spectral classification of an eigenpair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Discrete,
    Continuous,
    Unresolved,
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tag::Discrete => "Discrete",
            Tag::Continuous => "Continuous",
            Tag::Unresolved => "Unresolved",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    /// Eigenvector sampled on the interior grid, unit 2-norm.
    pub vector: Vec<Complex64>,
    /// `||M v - E v||` for the unit vector.
    pub residual: f64,
    pub tag: Tag,
}

/// Parameters of a shift-invert Arnoldi run.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftPlan {
    pub shifts: Vec<Complex64>,
    pub subspace_dim: usize,
    pub max_restarts: usize,
    /// Ritz-estimate tolerance for `(M - sigma)^-1`, relative to `|theta|`.
    pub tol: f64,
    /// Ritz pairs nearest each shift that must converge.
    pub wanted: usize,
    pub seed: u64,
}

impl Default for ShiftPlan {
    fn default() -> Self {
        Self {
            shifts: Vec::new(),
            subspace_dim: 60,
            max_restarts: 8,
            tol: 1e-8,
            wanted: 12,
            seed: 0x5eed,
        }
    }
}

impl ShiftPlan {
    pub fn with_shifts(shifts: Vec<Complex64>) -> Self {
        Self {
            shifts,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.subspace_dim < 10 {
            return Err(domain(format!(
                "subspace dimension must be at least 10, got {}",
                self.subspace_dim
            )));
        }
        if !(self.tol > 0.0) {
            return Err(domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.wanted == 0 || self.wanted >= self.subspace_dim {
            return Err(domain(format!(
                "wanted count {} must lie in 1..{}",
                self.wanted, self.subspace_dim
            )));
        }
        Ok(())
    }
}

/// Orders eigenvalues by real part, then imaginary part.
pub fn cmp_eigenvalue(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Merge tolerance for two eigenvalues found from different shifts.
pub fn same_eigenvalue(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-6 * (1.0 + a.norm())
}
