//! Finite-difference discretization of the eigenproblem on the winding contour.
//!
//! In the `t` variable the problem reads
//! `psi'' / s'^2 - s'' psi' / s'^3 - s^(2+eps) psi = E psi` with
//! `psi(-1 + eta) = psi(1 - eta) = 0`. Central differences on a uniform grid
//! give a complex tridiagonal matrix.

use num_complex::Complex64;

use crate::contour::{contour_sample, power_term_on, PowerBranch};
use crate::eigensolve::EigenPair;
use crate::error::{domain, Error, Result};
use crate::wedges::EpsilonParam;

/// Truncation used when nothing else is requested.
pub const DEFAULT_ETA: f64 = 0.01;
/// Smallest accepted number of interior points.
pub const MIN_INTERIOR: usize = 50;
const POWER_LIMIT: f64 = 1e300;

/// Uniform interior grid on `(-(1 - eta), 1 - eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n_interior: usize,
    pub eta: f64,
}

impl Grid {
    pub fn new(n_interior: usize, eta: f64) -> Result<Self> {
        if n_interior < MIN_INTERIOR {
            return Err(domain(format!(
                "need at least {MIN_INTERIOR} interior points, got {n_interior}"
            )));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(domain(format!("eta must lie in (0, 1), got {eta}")));
        }
        Ok(Self { n_interior, eta })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * (1.0 - self.eta) / (self.n_interior as f64 + 1.0)
    }

    /// `t_j` for `j = 1..=n` (returned zero-based).
    pub fn point(&self, j: usize) -> f64 {
        let h = self.spacing();
        let edge = 1.0 - self.eta;
        // mirror-exact: t_{n+1-j} = -t_j
        let from_left = -edge + (j as f64 + 1.0) * h;
        let from_right = edge - (self.n_interior - j) as f64 * h;
        if 2 * j + 1 < self.n_interior {
            from_left
        } else if 2 * j + 1 > self.n_interior {
            from_right
        } else {
            0.0
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_interior).map(|j| self.point(j)).collect()
    }
}

/// Tridiagonal matrix `M`: `M[j][j] = diag[j]`, `M[j+1][j] = sub[j]`, `M[j][j+1] = sup[j]`.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub grid: Grid,
    pub eps: EpsilonParam,
    pub branch: PowerBranch,
    pub diag: Vec<Complex64>,
    pub sub: Vec<Complex64>,
    pub sup: Vec<Complex64>,
}

/// Smallest `eta` for which `|s^(2+eps)|` stays below the overflow guard.
pub fn eta_floor(eps: Complex64) -> f64 {
    // |s^(2+eps)| ~ exp(-(2 + Re eps) ln(1 - t^2)) near the ends, up to the
    // bounded phase contribution of Im eps
    let growth = 2.0 + eps.re + eps.im.abs() * 2.0;
    if growth <= 0.0 {
        return 0.0;
    }
    let one_m_t2 = (-(POWER_LIMIT.ln() - 1.0) / growth).exp();
    // 1 - t^2 = eta (2 - eta) ~ 2 eta
    one_m_t2 / 2.0
}

/// Operator on the principal branch of `s^(2+eps)`; see [`build_operator_on`].
pub fn build_operator(eps: Complex64, n_interior: usize, eta: f64) -> Result<DiscretizedOperator> {
    build_operator_on(eps, n_interior, eta, PowerBranch::default())
}

pub fn build_operator_on(
    eps: Complex64,
    n_interior: usize,
    eta: f64,
    branch: PowerBranch,
) -> Result<DiscretizedOperator> {
    let param = EpsilonParam::new(eps)?;
    if !(eps.re < 0.0 || eps == Complex64::new(0.0, 0.0)) {
        return Err(domain(format!(
            "the winding contour needs Re(eps) in (-4, 0) (or eps = 0), got {eps}"
        )));
    }
    let grid = Grid::new(n_interior, eta)?;
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let inv_2h = 0.5 / h;

    let n = n_interior;
    let mut diag = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for j in 0..n {
        let t = grid.point(j);
        let smp = contour_sample(t, eps)?;
        let pw = power_term_on(t, eps, branch)?;
        if !(pw.norm() <= POWER_LIMIT) {
            return Err(Error::Overflow(format!(
                "|s^(2+eps)| exceeds {POWER_LIMIT:e} at t = {t}; use eta >= {:e}",
                eta_floor(eps)
            )));
        }
        let inv_s1 = smp.s1.inv();
        let a = inv_s1 * inv_s1;
        let b = -smp.s2 * a * inv_s1;
        diag.push(-2.0 * a * inv_h2 - pw);
        lower.push(a * inv_h2 - b * inv_2h);
        upper.push(a * inv_h2 + b * inv_2h);
    }
    // row j couples to j-1 through lower[j] and to j+1 through upper[j]
    let sub = lower[1..].to_vec();
    upper.truncate(n - 1);
    Ok(DiscretizedOperator {
        grid,
        eps: param,
        branch,
        diag,
        sub,
        sup: upper,
    })
}

impl DiscretizedOperator {
    /// Builds an operator from explicit bands (used for hand-made test matrices).
    pub fn from_bands(
        diag: Vec<Complex64>,
        sub: Vec<Complex64>,
        sup: Vec<Complex64>,
    ) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(domain("empty matrix"));
        }
        if sub.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: sub.len(),
            });
        }
        if sup.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: sup.len(),
            });
        }
        Ok(Self {
            grid: Grid {
                n_interior: n,
                eta: DEFAULT_ETA,
            },
            eps: EpsilonParam::real(0.0)?,
            branch: PowerBranch::default(),
            diag,
            sub,
            sup,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `y = M x`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.dim();
        for j in 0..n {
            let mut acc = self.diag[j] * x[j];
            if j > 0 {
                acc += self.sub[j - 1] * x[j - 1];
            }
            if j + 1 < n {
                acc += self.sup[j] * x[j + 1];
            }
            y[j] = acc;
        }
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let mut s = self.diag[j].norm();
                if j > 0 {
                    s += self.sub[j - 1].norm();
                }
                if j + 1 < n {
                    s += self.sup[j].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Dense row-major copy; only sensible for small `n`.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.dim();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for j in 0..n {
            m[j][j] = self.diag[j];
            if j + 1 < n {
                m[j][j + 1] = self.sup[j];
                m[j + 1][j] = self.sub[j];
            }
        }
        m
    }
}

/// `||M v - E v|| / ||v||`.
pub fn residual(op: &DiscretizedOperator, pair: &EigenPair) -> Result<f64> {
    residual_of(op, pair.value, &pair.vector)
}

pub(crate) fn residual_of(op: &DiscretizedOperator, value: Complex64, v: &[Complex64]) -> Result<f64> {
    let n = op.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let mut mv = vec![Complex64::new(0.0, 0.0); n];
    op.apply(v, &mut mv);
    let num: f64 = mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - value * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if den == 0.0 {
        return Err(domain("zero eigenvector"));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::Tag;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_layout() {
        let g = Grid::new(99, 0.01).unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 99);
        assert_eq!(pts[49], 0.0);
        assert!(pts[0] > -0.99 && pts[98] < 0.99);
        for j in 0..99 {
            assert_eq!(pts[j], -pts[98 - j]);
        }
        let h = g.spacing();
        for w in pts.windows(2) {
            assert!((w[1] - w[0] - h).abs() < 1e-14);
        }
        assert!(Grid::new(10, 0.01).is_err());
        assert!(Grid::new(100, 0.0).is_err());
        assert!(Grid::new(100, 1.0).is_err());
    }

    #[test]
    fn operator_domain() {
        assert!(build_operator(c(0.5, 0.0), 100, 0.01).is_err());
        assert!(build_operator(c(-4.5, 0.0), 100, 0.01).is_err());
        assert!(build_operator(c(-2.6, 0.0), 10, 0.01).is_err());
        assert!(build_operator(c(0.0, 0.0), 100, 0.01).is_ok());
    }

    #[test]
    fn discrete_pt_symmetry() {
        for eps in [-0.5, -2.6, -3.8] {
            let op = build_operator(c(eps, 0.0), 301, 0.01).unwrap();
            let n = op.dim();
            for j in 0..n {
                let m = n - 1 - j;
                assert!((op.diag[m] - op.diag[j].conj()).norm() <= 1e-12 * op.diag[j].norm());
                if j + 1 < n {
                    // M[m][m-1] = conj(M[j][j+1])
                    let lhs = op.sub[m - 1];
                    assert!((lhs - op.sup[j].conj()).norm() <= 1e-12 * op.sup[j].norm());
                }
            }
        }
    }

    #[test]
    fn residual_of_exact_pair() {
        // [[2, 1, 0], [1, 2, 1], [0, 1, 2]] has eigenpair (2 + sqrt 2, (1, sqrt 2, 1))
        let one = c(1.0, 0.0);
        let op = DiscretizedOperator::from_bands(vec![c(2.0, 0.0); 3], vec![one; 2], vec![one; 2])
            .unwrap();
        let r2 = 2f64.sqrt();
        let pair = EigenPair {
            value: c(2.0 + r2, 0.0),
            vector: vec![one, c(r2, 0.0), one],
            residual: 0.0,
            tag: Tag::Unresolved,
        };
        assert!(residual(&op, &pair).unwrap() <= 1e-12);

        let mut prev = 0.0;
        for delta in [1e-4, 1e-3, 1e-2] {
            let mut p = pair.clone();
            p.vector[0] += delta;
            let r = residual(&op, &p).unwrap();
            assert!(r > prev);
            let ratio = r / delta;
            assert!(ratio > 0.3 && ratio < 3.0, "ratio {ratio}");
            prev = r;
        }

        let short = EigenPair {
            vector: vec![one; 2],
            ..pair
        };
        assert!(matches!(
            residual(&op, &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eta_floor_is_tiny_for_physical_range() {
        assert!(eta_floor(c(-0.5, 0.0)) < 1e-100);
        assert_eq!(eta_floor(c(-2.6, 0.0)), 0.0);
    }
}
