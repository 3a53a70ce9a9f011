//! Small dense complex matrices: shifted QR on upper-Hessenberg form,
//! Householder reduction, and inverse-iteration eigenvectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ULP: f64 = f64::EPSILON;

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_upper_hessenberg(&self) -> bool {
        (0..self.n).all(|i| (0..i.saturating_sub(1)).all(|j| self.get(i, j) == Complex64::new(0.0, 0.0)))
    }

    /// Householder reduction to upper-Hessenberg form (similarity transform).
    pub fn to_hessenberg(&self) -> Self {
        let n = self.n;
        let mut h = self.clone();
        for k in 0..n.saturating_sub(2) {
            let alpha_norm: f64 = (k + 1..n).map(|i| h.get(i, k).norm_sqr()).sum::<f64>().sqrt();
            if alpha_norm == 0.0 {
                continue;
            }
            let x0 = h.get(k + 1, k);
            let phase = if x0.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                x0 / x0.norm()
            };
            let mut v: Vec<Complex64> = (k + 1..n).map(|i| h.get(i, k)).collect();
            v[0] += phase * alpha_norm;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            // H <- (I - 2 v v^H / v^H v) H (I - 2 v v^H / v^H v)
            for j in 0..n {
                let dot: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(p, vp)| vp.conj() * h.get(k + 1 + p, j))
                    .sum();
                let f = dot * (2.0 / vnorm2);
                for (p, vp) in v.iter().enumerate() {
                    let cur = h.get(k + 1 + p, j);
                    h.set(k + 1 + p, j, cur - vp * f);
                }
            }
            for i in 0..n {
                let dot: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(p, vp)| h.get(i, k + 1 + p) * vp)
                    .sum();
                let f = dot * (2.0 / vnorm2);
                for (p, vp) in v.iter().enumerate() {
                    let cur = h.get(i, k + 1 + p);
                    h.set(i, k + 1 + p, cur - f * vp.conj());
                }
            }
            for i in k + 2..n {
                h.set(i, k, Complex64::new(0.0, 0.0));
            }
        }
        h
    }
}

/// Complex Givens rotation `G = [[conj(c), conj(s)], [-s, c]]` with `G (x, y)^T = (r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (x / r, y / r)
    }
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// All eigenvalues of an upper-Hessenberg matrix by single-shift QR with
/// Wilkinson shifts and deflation.
pub fn hessenberg_eig(h: &DenseMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let mut a = h.clone();
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eig);
    }
    let scale = a.frobenius().max(f64::MIN_POSITIVE);
    let max_iter = 30 * n.max(1);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;

    loop {
        if hi == 0 {
            eig[0] = a.get(0, 0);
            break;
        }
        // locate the start of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let sub = l1(a.get(lo, lo - 1));
            let mut diag = l1(a.get(lo - 1, lo - 1)) + l1(a.get(lo, lo));
            if diag == 0.0 {
                diag = scale;
            }
            if sub <= ULP * diag || sub <= f64::MIN_POSITIVE * 1e3 {
                a.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = a.get(hi, hi);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= max_iter {
            return Err(Error::NoConvergence {
                what: "Hessenberg QR",
                iterations: total,
            });
        }
        total += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 0 {
            // exceptional shift breaks rare cycles
            a.get(hi, hi) + Complex64::new(0.75, 0.5) * l1(a.get(hi, hi - 1))
        } else {
            wilkinson(
                a.get(hi - 1, hi - 1),
                a.get(hi - 1, hi),
                a.get(hi, hi - 1),
                a.get(hi, hi),
            )
        };

        // implicit single-shift sweep over rows/cols lo..=hi
        for k in lo..hi {
            let (x, y) = if k == lo {
                (a.get(lo, lo) - shift, a.get(lo + 1, lo))
            } else {
                (a.get(k, k - 1), a.get(k + 1, k - 1))
            };
            let (c, s) = givens(x, y);
            let col_start = if k == lo { lo } else { k - 1 };
            for j in col_start..=hi {
                let p = a.get(k, j);
                let q = a.get(k + 1, j);
                a.set(k, j, c.conj() * p + s.conj() * q);
                a.set(k + 1, j, -s * p + c * q);
            }
            if k > lo {
                a.set(k + 1, k - 1, Complex64::new(0.0, 0.0));
            }
            let row_end = (k + 2).min(hi);
            for i in lo..=row_end {
                let p = a.get(i, k);
                let q = a.get(i, k + 1);
                a.set(i, k, p * c + q * s);
                a.set(i, k + 1, -p * s.conj() + q * c.conj());
            }
        }
    }
    Ok(eig)
}

/// Eigenvalue of the trailing 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let r1 = mid + disc;
    let r2 = mid - disc;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// Eigenvector of `h` for the (approximate) eigenvalue `lambda`, unit 2-norm,
/// by inverse iteration with a partial-pivoted dense LU.
pub fn eigenvector(h: &DenseMatrix, lambda: Complex64) -> Vec<Complex64> {
    let n = h.dim();
    let mut m = h.clone();
    let nudge = (h.frobenius() * ULP * 10.0).max(f64::MIN_POSITIVE);
    for i in 0..n {
        m.set(i, i, m.get(i, i) - lambda);
    }
    let (lu, perm) = dense_lu(m, nudge);
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0, 0.37 * ((i * 7 + 3) % 11) as f64 / 11.0))
        .collect();
    for _ in 0..3 {
        let mut y = dense_solve(&lu, &perm, &x);
        let nrm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(nrm.is_finite()) || nrm == 0.0 {
            break;
        }
        for z in &mut y {
            *z /= nrm;
        }
        x = y;
    }
    let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    x.iter().map(|z| z / nrm).collect()
}

fn dense_lu(mut m: DenseMatrix, nudge: f64) -> (DenseMatrix, Vec<usize>) {
    let n = m.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (p, _) = (k..n)
            .map(|i| (i, m.get(i, k).norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if p != k {
            for j in 0..n {
                let t = m.get(k, j);
                m.set(k, j, m.get(p, j));
                m.set(p, j, t);
            }
            perm.swap(k, p);
        }
        if m.get(k, k).norm() < nudge {
            m.set(k, k, Complex64::new(nudge, 0.0));
        }
        let piv = m.get(k, k);
        for i in k + 1..n {
            let f = m.get(i, k) / piv;
            m.set(i, k, f);
            if f != Complex64::new(0.0, 0.0) {
                for j in k + 1..n {
                    let v = m.get(i, j) - f * m.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
    }
    (m, perm)
}

fn dense_solve(lu: &DenseMatrix, perm: &[usize], b: &[Complex64]) -> Vec<Complex64> {
    let n = lu.dim();
    let mut x: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let v = x[i] - lu.get(i, j) * x[j];
            x[i] = v;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let v = x[i] - lu.get(i, j) * x[j];
            x[i] = v;
        }
        x[i] /= lu.get(i, i);
    }
    x
}
