//! PBC and OBC spectra, the finite-size pOBC spectrum with its root pairs,
//! and the boundary determinant.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves;
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, BoundaryKind, ModelParams};
use crate::roots::{bloch_roots, roots_unchecked};
use crate::C64;

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 100;
const DEDUP_RADIUS: f64 = 1e-8;
const MATCH_RADIUS: f64 = 1e-8;
const RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub energy: C64,
    /// Smaller-modulus root of `E(beta) = energy`.
    pub beta1: C64,
    pub beta2: C64,
    /// `||H v - E v|| / ||v||`; zero for analytic sets.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSet {
    pub points: Vec<SpectrumPoint>,
    pub boundary: BoundaryKind,
    /// Set for finite-size spectra; `None` for the analytic PBC/OBC curves.
    pub n_sites: Option<usize>,
}

impl SpectrumSet {
    pub fn energies(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.energy).collect()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.points.iter().map(|p| p.energy.im.abs()).fold(0.0, f64::max)
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 8 {
        return Err(Error::InvalidArgument(format!(
            "need at least 8 samples, got {m}"
        )));
    }
    Ok(())
}

fn analytic_point(p: &ModelParams, beta: C64) -> SpectrumPoint {
    let partner = p.r2() / beta;
    let (beta1, beta2) = crate::roots::order_pair(beta, partner);
    SpectrumPoint {
        energy: p.energy(beta),
        beta1,
        beta2,
        residual: 0.0,
    }
}

/// `E(e^{i theta_j})` at `theta_j = 2 pi j / m`.
pub fn pbc_spectrum(p: &ModelParams, m: usize) -> Result<SpectrumSet> {
    check_m(m)?;
    let points = (0..m)
        .map(|j| analytic_point(p, C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)))
        .collect();
    Ok(SpectrumSet {
        points,
        boundary: BoundaryKind::Pbc,
        n_sites: None,
    })
}

/// `E(r e^{i theta_j}) = 2 sqrt(t1 t2) cos(theta_j)` at `theta_j = 2 pi j / m`.
pub fn obc_spectrum(p: &ModelParams, m: usize) -> Result<SpectrumSet> {
    check_m(m)?;
    let r = p.r();
    let points = (0..m)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / m as f64;
            let mut pt = analytic_point(p, r * C64::from_polar(1.0, theta));
            // exact form avoids round-off in the imaginary part
            pt.energy = 2.0 * (p.t1 * p.t2).sqrt() * theta.cos();
            pt
        })
        .collect();
    Ok(SpectrumSet {
        points,
        boundary: BoundaryKind::Obc,
        n_sites: None,
    })
}

/// `det(omega I - H)` for the pOBC chain. Works for any `n_sites >= 1`.
pub fn char_poly(p: &ModelParams, omega: C64) -> C64 {
    let (v, _, log_scale) = char_poly_scaled(p, omega);
    v * log_scale.exp()
}

/// `det(omega I - H)` and its derivative, both divided by `exp(log_scale)`.
///
/// Continuant `D_n = omega D_{n-1} - t1 t2 D_{n-2}` plus the corner terms
/// from expanding along the first row:
/// `det = D_N - delta^2 D_{N-2} - delta (t1^{N-1} + t2^{N-1})`.
pub fn char_poly_scaled(p: &ModelParams, omega: C64) -> (C64, C64, f64) {
    let n = p.n_sites;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (t1, t2, d) = (p.t1, p.t2, p.delta);
    match n {
        0 => return (one, zero, 0.0),
        1 => return (omega - 2.0 * d, one, 0.0),
        2 => return (omega * omega - (t1 + d) * (t2 + d), 2.0 * omega, 0.0),
        _ => {}
    }
    let tt = t1 * t2;
    // (D_{n-1}, D_n) and derivatives, all sharing exp(log_scale)
    let (mut d_prev, mut d_cur) = (one, omega);
    let (mut dp_prev, mut dp_cur) = (zero, one);
    let mut log_scale = 0.0;
    let (mut d_nm2, mut dp_nm2) = (zero, zero);
    for k in 2..=n {
        if k == n {
            d_nm2 = d_prev;
            dp_nm2 = dp_prev;
        }
        let d_next = omega * d_cur - tt * d_prev;
        let dp_next = d_cur + omega * dp_cur - tt * dp_prev;
        d_prev = d_cur;
        d_cur = d_next;
        dp_prev = dp_cur;
        dp_cur = dp_next;
        let big = d_cur.norm().max(dp_cur.norm());
        if big > 1e100 {
            let s = 1.0 / big;
            d_prev *= s;
            d_cur *= s;
            dp_prev *= s;
            dp_cur *= s;
            d_nm2 *= s;
            dp_nm2 *= s;
            log_scale += big.ln();
        }
    }
    let corner = d * (t1.powu(n as u32 - 1) + t2.powu(n as u32 - 1)) * (-log_scale).exp();
    let value = d_cur - d * d * d_nm2 - corner;
    let deriv = dp_cur - d * d * dp_nm2;
    (value, deriv, log_scale)
}

/// Newton on the characteristic polynomial from one seed.
pub fn newton_root(p: &ModelParams, seed: C64) -> Option<C64> {
    let mut w = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let (v, dv, _) = char_poly_scaled(p, w);
        let step = v / dv;
        if !step.is_finite() {
            return None;
        }
        w -= step;
        if step.norm() < NEWTON_TOL {
            return Some(w);
        }
    }
    None
}

fn dedup(mut roots: Vec<C64>) -> Vec<C64> {
    canonical_sort(&mut roots);
    let mut out: Vec<C64> = Vec::with_capacity(roots.len());
    for z in roots {
        if out.iter().all(|w| (w - z).norm() > DEDUP_RADIUS) {
            out.push(z);
        }
    }
    out
}

/// Sorts by real part, then imaginary part.
pub fn canonical_sort(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Starting energies for the root search: images of cGBZ1 samples at
/// `theta_m = 2 pi m / N` above the critical length, OBC eigenvalues
/// otherwise.
fn seeds(p: &ModelParams) -> Vec<C64> {
    let n = p.n_sites;
    let above = p.critical_length().map(|nc| n as f64 > nc).unwrap_or(false);
    if above {
        if let Ok(c) = curves::cgbz_curve_unchecked(p, 1, n) {
            return c.samples.iter().map(|b| p.energy(*b)).collect();
        }
    }
    obc_eigenvalues(p)
}

/// `2 sqrt(t1 t2) cos(m pi / (N + 1))`, `m = 1..N`.
pub fn obc_eigenvalues(p: &ModelParams) -> Vec<C64> {
    let n = p.n_sites;
    let s = 2.0 * (p.t1 * p.t2).sqrt();
    (1..=n)
        .map(|m| s * (m as f64 * PI / (n as f64 + 1.0)).cos())
        .collect()
}

/// Aberth-Ehrlich iteration on the characteristic polynomial, started from
/// `init` (length N).
fn aberth(p: &ModelParams, init: Vec<C64>) -> Option<Vec<C64>> {
    let n = init.len();
    let mut z = init;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, dv, _) = char_poly_scaled(p, z[i]);
            let ratio = v / dv;
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (1.0 - ratio * s);
            if !step.is_finite() {
                return None;
            }
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < NEWTON_TOL {
            return Some(z);
        }
    }
    None
}

/// Eigenvalues of a dense matrix by shifted QR, sorted canonically; the
/// cross-check oracle for the polynomial root search.
pub fn dense_eigenvalues(h: &DMatrix<C64>) -> Result<Vec<C64>> {
    let mut ev = crate::linalg::eigenvalues(h)?;
    canonical_sort(&mut ev);
    Ok(ev)
}

fn oracle_eigenvalues(p: &ModelParams) -> Result<Vec<C64>> {
    if p.delta.norm() == 0.0 {
        // D^{-1} H D with D = diag(r^n) is symmetric up to phases and far
        // better conditioned than the raw OBC matrix
        let n = p.n_sites;
        let s = (p.t1 * p.t2).sqrt();
        let mut h = DMatrix::<C64>::zeros(n, n);
        for i in 0..n - 1 {
            h[(i, i + 1)] = s;
            h[(i + 1, i)] = s;
        }
        return dense_eigenvalues(&h);
    }
    dense_eigenvalues(&build_hamiltonian(p, BoundaryKind::Pobc, None)?)
}

/// Greedy nearest matching; returns the largest matched distance.
fn match_sets(a: &[C64], b: &[C64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for z in a {
        let mut best = (usize::MAX, f64::INFINITY);
        for (j, w) in b.iter().enumerate() {
            let d = (z - w).norm();
            if !used[j] && d < best.1 {
                best = (j, d);
            }
        }
        if best.0 == usize::MAX {
            return f64::INFINITY;
        }
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    worst
}

/// All N eigenvalues of the pOBC chain with their root pairs.
pub fn pobc_spectrum(p: &ModelParams) -> Result<SpectrumSet> {
    p.validate()?;
    let n = p.n_sites;
    let seeds = seeds(p);
    let found: Vec<C64> = seeds.par_iter().filter_map(|s| newton_root(p, *s)).collect();
    let mut roots = dedup(found);
    if roots.len() != n {
        log::debug!(
            "Newton found {} of {} roots; switching to Aberth-Ehrlich",
            roots.len(),
            n
        );
        let mut init = roots.clone();
        let radius = p.t1.norm() + p.t2.norm() + p.delta.norm();
        let mut k = 0;
        while init.len() < n {
            let angle = 2.0 * PI * (k as f64 + 0.5) / n as f64 + 0.3;
            init.push(C64::from_polar(radius, angle));
            k += 1;
        }
        init.truncate(n);
        let all = aberth(p, init).ok_or_else(|| {
            Error::ConvergenceFailure("Aberth-Ehrlich iteration on the characteristic polynomial".into())
        })?;
        roots = dedup(all.into_iter().map(|z| newton_root(p, z).unwrap_or(z)).collect());
    }
    let oracle = oracle_eigenvalues(p)?;
    let worst = if roots.len() == n {
        match_sets(&roots, &oracle)
    } else {
        f64::INFINITY
    };
    if roots.len() != n || worst > MATCH_RADIUS {
        return Err(Error::RootCountMismatch {
            found: roots.len(),
            expected: n,
            detail: format!("largest distance to dense eigenvalues {worst:e}"),
        });
    }
    let h = build_hamiltonian(p, BoundaryKind::Pobc, None)?;
    let points = roots
        .par_iter()
        .map(|&e| spectrum_point(p, &h, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSet {
        points,
        boundary: BoundaryKind::Pobc,
        n_sites: Some(n),
    })
}

fn spectrum_point(p: &ModelParams, h: &DMatrix<C64>, energy: C64) -> Result<SpectrumPoint> {
    let (beta1, beta2) = roots_unchecked(p, energy);
    let mut residual = f64::INFINITY;
    if (beta1 - beta2).norm() > 1e-6 * beta1.norm() {
        if let Some(v) = ansatz_vector(p, beta1, beta2) {
            residual = eigen_residual(h, energy, &v);
        }
    }
    if !(residual < RESIDUAL_LIMIT) {
        residual = inverse_iteration_residual(h, energy)?;
    }
    if !(residual < RESIDUAL_LIMIT) {
        return Err(Error::ConvergenceFailure(format!(
            "eigen-residual {residual:e} at E = {energy}"
        )));
    }
    Ok(SpectrumPoint {
        energy,
        beta1,
        beta2,
        residual,
    })
}

/// `psi_n = c1 beta1^n + c2 beta2^n` with weights fixed by the first row.
fn ansatz_vector(p: &ModelParams, beta1: C64, beta2: C64) -> Option<nalgebra::DVector<C64>> {
    let n = p.n_sites;
    let c1 = p.delta * beta2.powu(n as u32) - p.t2;
    let c2 = p.t2 - p.delta * beta1.powu(n as u32);
    let v = nalgebra::DVector::from_fn(n, |i, _| {
        let k = (i + 1) as i32;
        c1 * beta1.powi(k) + c2 * beta2.powi(k)
    });
    let norm = v.norm();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    Some(v / C64::new(norm, 0.0))
}

fn eigen_residual(h: &DMatrix<C64>, e: C64, v: &nalgebra::DVector<C64>) -> f64 {
    (h * v - v * e).norm() / v.norm()
}

fn inverse_iteration_residual(h: &DMatrix<C64>, e: C64) -> Result<f64> {
    let n = h.nrows();
    let shift = e + C64::new(1e-10, 1e-10) * e.norm().max(1.0);
    let a = crate::linalg::shifted(h, shift);
    let lu = match crate::linalg::Lu::new(a) {
        Ok(lu) => lu,
        // exactly singular: the shift hit an eigenvalue, which is the answer
        Err(_) => return Ok(0.0),
    };
    let mut v = nalgebra::DVector::from_fn(n, |i, _| C64::new(1.0, 0.1 * i as f64));
    for _ in 0..3 {
        let w = lu.solve(&v);
        let norm = w.norm();
        v = w / C64::new(norm, 0.0);
    }
    Ok(eigen_residual(h, e, &v))
}

/// Left side of the boundary determinant condition evaluated at the root
/// pair of `e`:
/// `t1 t2 (b2^{N+1} - b1^{N+1}) + delta^2 r^2 (b1^{N-1} - b2^{N-1}) + (t2 delta + t1 delta r^{2N}) (b1 - b2)`.
pub fn boundary_residual(p: &ModelParams, e: C64) -> Result<C64> {
    let roots = bloch_roots(p, e)?;
    let (b1, b2) = (roots.beta_a, roots.beta_b);
    let n = p.n_sites as i32;
    let r2 = p.r2();
    let d = p.delta;
    Ok(p.t1 * p.t2 * (b2.powi(n + 1) - b1.powi(n + 1))
        + d * d * r2 * (b1.powi(n - 1) - b2.powi(n - 1))
        + (p.t2 * d + p.t1 * d * r2.powi(n)) * (b1 - b2))
}

/// `|boundary_residual| / |t1 t2 b2^{N+1}|`.
pub fn boundary_residual_normalized(p: &ModelParams, e: C64) -> Result<f64> {
    let roots = bloch_roots(p, e)?;
    let scale = (p.t1 * p.t2 * roots.beta_b.powi(p.n_sites as i32 + 1)).norm();
    Ok(boundary_residual(p, e)?.norm() / scale)
}
