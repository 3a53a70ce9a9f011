use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::hessenberg::{eigenvector, hessenberg_eig, DenseMatrix};
use super::lu::{lu_tridiag, Factorization};
use super::{cmp_eigenvalue, same_eigenvalue, EigenPair, ShiftPlan, Tag};
use crate::discretize::{residual_of, DiscretizedOperator};
use crate::error::{Error, Result};

/// Everything one shift produced.
#[derive(Debug, Clone)]
pub struct ShiftOutcome {
    /// The shift actually used (nudged away from exact eigenvalues if needed).
    pub shift: Complex64,
    pub converged: Vec<EigenPair>,
    /// Ritz pairs that missed the tolerance; tagged `Unresolved`.
    pub unconverged: Vec<EigenPair>,
    pub restarts: usize,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= alpha * xi;
    }
}

struct Krylov {
    basis: Vec<Vec<Complex64>>,
    h: DenseMatrix,
    /// `h[m][m-1]`, the residual norm of the factorization.
    beta: f64,
    dim: usize,
}

/// `m` steps of Arnoldi on `(M - sigma)^-1` with classical Gram-Schmidt plus
/// one reorthogonalization pass.
fn factor(lu: &Factorization, start: Vec<Complex64>, m: usize) -> Krylov {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
    let nrm = norm(&start);
    basis.push(start.iter().map(|z| z / nrm).collect());
    let mut h = DenseMatrix::zeros(m);
    let mut beta = 0.0;
    let mut dim = m;
    for j in 0..m {
        let mut w = lu.solve(&basis[j]);
        let w_norm0 = norm(&w);
        for _pass in 0..2 {
            let coeffs: Vec<Complex64> = basis.iter().map(|v| dot(v, &w)).collect();
            for (i, (v, c)) in basis.iter().zip(&coeffs).enumerate() {
                axpy(*c, v, &mut w);
                if i < m {
                    h.set(i, j, h.get(i, j) + c);
                }
            }
        }
        let wn = norm(&w);
        if j + 1 < m {
            h.set(j + 1, j, Complex64::new(wn, 0.0));
        }
        if wn <= 1e-13 * w_norm0 || !wn.is_finite() {
            // invariant subspace: the Krylov space is exhausted
            dim = j + 1;
            beta = 0.0;
            if j + 1 < m {
                h.set(j + 1, j, Complex64::new(0.0, 0.0));
            }
            break;
        }
        if j + 1 == m {
            beta = wn;
        }
        for z in &mut w {
            *z /= wn;
        }
        basis.push(w);
    }
    basis.truncate(dim);
    Krylov { basis, h: h.leading(dim), beta, dim }
}

fn random_start(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn factor_with_nudge(op: &DiscretizedOperator, sigma: Complex64) -> Result<(Complex64, Factorization)> {
    let mut shift = sigma;
    let mut last = None;
    for attempt in 0..4 {
        match lu_tridiag(op, shift) {
            Ok(f) => return Ok((shift, f)),
            Err(e @ Error::SingularPivot { .. }) => {
                last = Some(e);
                let bump = 1e-9 * (1.0 + sigma.norm()) * 10f64.powi(attempt);
                shift = sigma + Complex64::new(bump, 0.7 * bump);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("loop ran"))
}

/// Shift-invert Arnoldi at a single shift.
pub fn run_shift(op: &DiscretizedOperator, sigma: Complex64, plan: &ShiftPlan, seed: u64) -> Result<ShiftOutcome> {
    plan.validate()?;
    let n = op.dim();
    let (shift, lu) = factor_with_nudge(op, sigma)?;
    let m = plan.subspace_dim.min(n);
    let wanted = plan.wanted.min(m);
    let scale = shifted_norm(op, shift);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut start = random_start(n, &mut rng);

    let mut restarts = 0;
    loop {
        let k = factor(&lu, start, m);
        let mut thetas = hessenberg_eig(&k.h)?;
        thetas.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        thetas.truncate(wanted.min(k.dim));

        let mut converged = Vec::new();
        let mut unconverged = Vec::new();
        for theta in thetas {
            if theta.norm() == 0.0 {
                continue;
            }
            let y = eigenvector(&k.h, theta);
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            for (v, yi) in k.basis.iter().zip(&y) {
                for (xj, vj) in x.iter_mut().zip(v) {
                    *xj += yi * vj;
                }
            }
            let xn = norm(&x);
            for z in &mut x {
                *z /= xn;
            }
            let value = shift + theta.inv();
            let residual = residual_of(op, value, &x)?;
            let pair = EigenPair {
                value,
                vector: x,
                residual,
                tag: Tag::Unresolved,
            };
            let ritz_estimate = k.beta * y.last().map_or(0.0, |v| v.norm());
            // converged when the Ritz estimate for the inverted operator is
            // small relative to |theta|; the eigenvalue error is then of order
            // tol |E - sigma|
            if ritz_estimate <= plan.tol * theta.norm() && residual <= 10.0 * plan.tol * scale {
                converged.push(pair);
            } else {
                unconverged.push(pair);
            }
        }

        if unconverged.is_empty() || k.beta == 0.0 || restarts >= plan.max_restarts {
            return Ok(ShiftOutcome {
                shift,
                converged,
                unconverged,
                restarts,
            });
        }
        restarts += 1;
        // explicit restart from the unconverged wanted Ritz vectors plus a
        // little noise so no direction is lost for good
        let mut next = random_start(n, &mut rng);
        for z in &mut next {
            *z *= 1e-3;
        }
        for p in &unconverged {
            for (a, b) in next.iter_mut().zip(&p.vector) {
                *a += b;
            }
        }
        start = next;
    }
}

/// `max(1, ||M - sigma I||_inf)`, the scale of an attainable residual.
pub fn shifted_norm(op: &DiscretizedOperator, sigma: Complex64) -> f64 {
    let n = op.dim();
    (0..n)
        .map(|j| {
            let mut s = (op.diag[j] - sigma).norm();
            if j > 0 {
                s += op.sub[j - 1].norm();
            }
            if j + 1 < n {
                s += op.sup[j].norm();
            }
            s
        })
        .fold(1.0, f64::max)
}

/// Keeps one representative (smallest residual) of each cluster of equal eigenvalues.
pub fn dedup_pairs(mut pairs: Vec<EigenPair>) -> Vec<EigenPair> {
    pairs.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let mut kept: Vec<EigenPair> = Vec::new();
    for p in pairs {
        if !kept.iter().any(|q| same_eigenvalue(q.value, p.value)) {
            kept.push(p);
        }
    }
    kept.sort_by(|a, b| cmp_eigenvalue(&a.value, &b.value));
    kept
}

/// Converged Ritz pairs nearest every shift in the plan, merged across shifts.
pub fn arnoldi_shift_invert(op: &DiscretizedOperator, plan: &ShiftPlan) -> Result<Vec<EigenPair>> {
    let outcomes = run_plan(op, plan)?;
    Ok(dedup_pairs(
        outcomes.into_iter().flat_map(|o| o.converged).collect(),
    ))
}

pub(crate) fn run_plan(op: &DiscretizedOperator, plan: &ShiftPlan) -> Result<Vec<ShiftOutcome>> {
    plan.validate()?;
    plan.shifts
        .par_iter()
        .enumerate()
        .map(|(i, &sigma)| run_shift(op, sigma, plan, plan.seed.wrapping_add(i as u64)))
        .collect()
}
