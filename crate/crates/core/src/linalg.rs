//! Dense complex LU with partial pivoting, a 1-norm condition estimator and
//! iterative refinement.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// `PA = LU` factorization of a square complex matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    a: DMatrix<C64>,
    lu: DMatrix<C64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    /// Factorizes `a`. An exactly zero pivot is reported as `NearSingular`
    /// with an infinite condition number.
    pub fn new(a: DMatrix<C64>) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::InvalidArgument(format!(
                "LU needs a square matrix, got {}x{}",
                n,
                a.ncols()
            )));
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for col in 0..n {
            let mut piv = col;
            let mut best = lu[(col, col)].norm();
            for row in col + 1..n {
                let v = lu[(row, col)].norm();
                if v > best {
                    best = v;
                    piv = row;
                }
            }
            if best == 0.0 {
                return Err(Error::NearSingular { cond: f64::INFINITY });
            }
            if piv != col {
                lu.swap_rows(piv, col);
                perm.swap(piv, col);
                swaps += 1;
            }
            let inv = lu[(col, col)].inv();
            for row in col + 1..n {
                let f = lu[(row, col)] * inv;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                lu[(row, col)] = f;
                for j in col + 1..n {
                    let u = lu[(col, j)];
                    lu[(row, j)] -= f * u;
                }
            }
        }
        Ok(Self { a, lu, perm, swaps })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn det(&self) -> C64 {
        let mut d = if self.swaps.is_multiple_of(2) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        };
        for i in 0..self.dim() {
            d *= self.lu[(i, i)];
        }
        d
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &DVector<C64>) -> DVector<C64> {
        let n = self.dim();
        let mut x = DVector::from_fn(n, |i, _| b[self.perm[i]]);
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &DVector<C64>) -> DVector<C64> {
        let n = self.dim();
        // A^H = U^H L^H P
        let mut y = b.clone();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = s / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = s;
        }
        let mut x = DVector::zeros(n);
        for i in 0..n {
            x[self.perm[i]] = y[i];
        }
        x
    }

    /// Solve followed by one step of iterative refinement.
    pub fn solve_refined(&self, b: &DVector<C64>) -> DVector<C64> {
        let x = self.solve(b);
        let r = b - &self.a * &x;
        x + self.solve(&r)
    }

    /// Estimate of `||A||_1 ||A^{-1}||_1` (Hager's method with Higham's
    /// alternating-sign safeguard).
    pub fn cond1_estimate(&self) -> f64 {
        norm1(&self.a) * self.inv_norm1_estimate()
    }

    fn inv_norm1_estimate(&self) -> f64 {
        let n = self.dim();
        let one = C64::new(1.0, 0.0);
        let mut x = DVector::from_element(n, one / n as f64);
        let mut est = 0.0;
        for iter in 0..5 {
            let y = self.solve(&x);
            let ny = vec_norm1(&y);
            if iter > 0 && ny <= est {
                break;
            }
            est = ny;
            let xi = y.map(|v| if v.norm() == 0.0 { one } else { v / v.norm() });
            let z = self.solve_adjoint(&xi);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            let ztx = z
                .iter()
                .zip(x.iter())
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>();
            if iter > 0 && zmax <= ztx {
                break;
            }
            x = DVector::zeros(n);
            x[j] = one;
        }
        let alt = DVector::from_fn(n, |i, _| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
            C64::new(s * (1.0 + i as f64 / denom), 0.0)
        });
        let alt_est = 2.0 * vec_norm1(&self.solve(&alt)) / (3.0 * n as f64);
        est.max(alt_est)
    }
}

pub fn norm1(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn norm_inf(a: &DMatrix<C64>) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn vec_norm1(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

pub fn vec_norm_inf(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `omega I - H`.
pub fn shifted(h: &DMatrix<C64>, omega: C64) -> DMatrix<C64> {
    let mut a = -h.clone();
    for i in 0..a.nrows() {
        a[(i, i)] += omega;
    }
    a
}

pub fn unit_vector(n: usize, index0: usize) -> DVector<C64> {
    let mut e = DVector::zeros(n);
    e[index0] = C64::new(1.0, 0.0);
    e
}

/// Reduces `a` to upper Hessenberg form by Householder reflections.
pub fn hessenberg(mut a: DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * alpha_norm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // A <- (I - 2 v v^H) A
        for j in k..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * a[(k + 1 + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                a[(k + 1 + i, j)] -= 2.0 * vi * s;
            }
        }
        // A <- A (I - 2 v v^H)
        for i in 0..n {
            let s: C64 = v.iter().enumerate().map(|(j, vj)| a[(i, k + 1 + j)] * vj).sum();
            for (j, vj) in v.iter().enumerate() {
                a[(i, k + 1 + j)] -= 2.0 * s * vj.conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    a
}

/// All eigenvalues of a square complex matrix: Hessenberg reduction then
/// single-shift complex QR with Wilkinson shifts and deflation.
pub fn eigenvalues(a: &DMatrix<C64>) -> Result<Vec<C64>> {
    let n = a.nrows();
    let mut h = hessenberg(a.clone());
    let mut eig = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eig);
    }
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig.push(h[(0, 0)]);
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= eps * diag || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig.push(h[(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * n {
            return Err(Error::ConvergenceFailure(
                "shifted QR eigenvalue iteration".into(),
            ));
        }
        let shift = if iter.is_multiple_of(10) {
            // exceptional shift breaks cycles
            h[(hi, hi)] + C64::new(0.75, 0.4375) * h[(hi, hi - 1)].norm()
        } else {
            let (p, q, r, s) = (h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            let half = (p - s) * 0.5;
            let disc = (half * half + q * r).sqrt();
            let m1 = (p + s) * 0.5 + disc;
            let m2 = (p + s) * 0.5 - disc;
            if (m1 - s).norm() < (m2 - s).norm() {
                m1
            } else {
                m2
            }
        };
        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        let mut rot = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (x, y) = (h[(k, k)], h[(k + 1, k)]);
            let rn = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if rn == 0.0 {
                (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
            } else {
                (x / rn, y / rn)
            };
            for j in k..=hi {
                let (u, v) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = c.conj() * u + s.conj() * v;
                h[(k + 1, j)] = -s * u + c * v;
            }
            rot.push((c, s));
        }
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = rot[idx];
            for i in lo..=(k + 1).min(hi) {
                let (u, v) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = u * c + v * s;
                h[(i, k + 1)] = -u * s.conj() + v * c.conj();
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(eig)
}
