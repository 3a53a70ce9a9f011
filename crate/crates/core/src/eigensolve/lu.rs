use num_complex::Complex64;

use crate::discretize::DiscretizedOperator;
use crate::error::{Error, Result};

const PIVOT_FLOOR: f64 = 1e-300;

/// Partial-pivoted LU of a shifted tridiagonal matrix `M - sigma I`.
///
/// Row interchanges push one extra superdiagonal into `U`, so `U` has upper
/// bandwidth two. Factor and solve are both `O(n)`.
#[derive(Debug, Clone)]
pub struct Factorization {
    multipliers: Vec<Complex64>,
    u0: Vec<Complex64>,
    u1: Vec<Complex64>,
    u2: Vec<Complex64>,
    swapped: Vec<bool>,
}

pub fn lu_tridiag(op: &DiscretizedOperator, sigma: Complex64) -> Result<Factorization> {
    let d: Vec<Complex64> = op.diag.iter().map(|&x| x - sigma).collect();
    factor_bands(op.sub.clone(), d, op.sup.clone())
}

/// Factors the tridiagonal matrix with bands `sub`, `diag`, `sup`.
pub fn factor_bands(
    mut dl: Vec<Complex64>,
    mut d: Vec<Complex64>,
    mut du: Vec<Complex64>,
) -> Result<Factorization> {
    let n = d.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut du2 = vec![zero; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];

    for i in 0..n.saturating_sub(1) {
        if l1(d[i]) >= l1(dl[i]) {
            if l1(d[i]) < PIVOT_FLOOR {
                return Err(Error::SingularPivot {
                    row: i,
                    magnitude: d[i].norm(),
                });
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if n > 0 && l1(d[n - 1]) < PIVOT_FLOOR {
        return Err(Error::SingularPivot {
            row: n - 1,
            magnitude: d[n - 1].norm(),
        });
    }
    Ok(Factorization {
        multipliers: dl,
        u0: d,
        u1: du,
        u2: du2,
        swapped,
    })
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

impl Factorization {
    pub fn dim(&self) -> usize {
        self.u0.len()
    }

    /// Overwrites `b` with the solution of `(M - sigma I) x = b`.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side has the wrong length");
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.multipliers[i] * b[i];
            } else {
                let bi = b[i];
                b[i + 1] -= self.multipliers[i] * bi;
            }
        }
        if n == 0 {
            return;
        }
        b[n - 1] /= self.u0[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.u1[n - 2] * b[n - 1]) / self.u0[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.u1[i] * b[i + 1] - self.u2[i] * b[i + 2]) / self.u0[i];
        }
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
