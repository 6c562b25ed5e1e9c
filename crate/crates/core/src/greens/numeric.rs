//! Exact finite-N Green's function by dense LU solves of
//! `(omega I - H) x = e_l`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::{EndpointRule, GreenQuery, GreenResult, Method};
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, BoundaryKind, DisorderSpec, ModelParams};
use crate::linalg::{norm_inf, shifted, unit_vector, vec_norm_inf, Lu};
use crate::C64;

/// Default limit on the 1-norm condition estimate of `omega I - H`.
pub const DEFAULT_COND_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    /// Solves whose condition estimate exceeds this are `NearSingular`.
    pub cond_limit: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            cond_limit: DEFAULT_COND_LIMIT,
        }
    }
}

impl SolveOptions {
    pub fn with_cond_limit(cond_limit: f64) -> Self {
        Self { cond_limit }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventColumn {
    /// `x` with `(omega I - H) x = e_l`; `x[k-1] = G_{k,l}`.
    pub x: DVector<C64>,
    pub cond_estimate: f64,
    /// `||(omega I - H) x - e_l||_inf` after refinement.
    pub residual: f64,
}

impl ResolventColumn {
    /// `G_{k,l}` for 1-based `k`.
    pub fn entry(&self, k: usize) -> C64 {
        self.x[k - 1]
    }
}

/// Column `l` (1-based) of `(omega I - H)^{-1}`, with one step of iterative
/// refinement.
pub fn resolvent_column(h: &DMatrix<C64>, omega: C64, l: usize) -> Result<ResolventColumn> {
    resolvent_column_with(h, omega, l, &SolveOptions::default())
}

pub fn resolvent_column_with(
    h: &DMatrix<C64>,
    omega: C64,
    l: usize,
    opts: &SolveOptions,
) -> Result<ResolventColumn> {
    let n = h.nrows();
    if l == 0 || l > n {
        return Err(Error::SiteOutOfRange { site: l, n_sites: n });
    }
    let a = shifted(h, omega);
    let lu = Lu::new(a)?;
    let cond = lu.cond1_estimate();
    if !(cond < opts.cond_limit) {
        return Err(Error::NearSingular { cond });
    }
    let e = unit_vector(n, l - 1);
    let x = lu.solve_refined(&e);
    let residual = vec_norm_inf(&(lu.matrix() * &x - &e));
    Ok(ResolventColumn {
        x,
        cond_estimate: cond,
        residual,
    })
}

/// `||(omega I - H) x - e_l||_inf / (|omega| + ||H||_inf)`.
pub fn relative_residual(h: &DMatrix<C64>, omega: C64, col: &ResolventColumn) -> f64 {
    col.residual / (omega.norm() + norm_inf(h))
}

/// One numeric entry `G_{k,l}(omega)` of the chain (trial 0 of `disorder`, if given).
pub fn green_entry(
    p: &ModelParams,
    bc: BoundaryKind,
    disorder: Option<&DisorderSpec>,
    omega: C64,
    k: usize,
    l: usize,
) -> Result<GreenResult> {
    green_entry_with(p, bc, disorder, omega, k, l, &SolveOptions::default())
}

pub fn green_entry_with(
    p: &ModelParams,
    bc: BoundaryKind,
    disorder: Option<&DisorderSpec>,
    omega: C64,
    k: usize,
    l: usize,
    opts: &SolveOptions,
) -> Result<GreenResult> {
    let query = GreenQuery::new(k, l, omega);
    query.check(p.n_sites)?;
    let h = build_hamiltonian(p, bc, disorder)?;
    let col = resolvent_column_with(&h, omega, l, opts)?;
    Ok(numeric_result(p, bc, query, &col))
}

pub(crate) fn numeric_result(
    p: &ModelParams,
    bc: BoundaryKind,
    query: GreenQuery,
    col: &ResolventColumn,
) -> GreenResult {
    GreenResult {
        query,
        n_sites: p.n_sites,
        boundary: bc,
        value: col.entry(query.k),
        method: Method::Numeric,
        regime: None,
        cond_estimate: Some(col.cond_estimate),
        dominant: None,
    }
}

/// All entries `G_{k,l}`, `k = 1..N`, for one excitation site.
pub fn site_profile(
    p: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    l: usize,
    opts: &SolveOptions,
) -> Result<Vec<GreenResult>> {
    let h = build_hamiltonian(p, bc, None)?;
    let col = resolvent_column_with(&h, omega, l, opts)?;
    Ok((1..=p.n_sites)
        .map(|k| numeric_result(p, bc, GreenQuery::new(k, l, omega), &col))
        .collect())
}

/// End-to-end entry for each chain length in `sizes`.
pub fn size_sweep(
    template: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    sizes: &[usize],
    rule: EndpointRule,
    opts: &SolveOptions,
) -> Result<Vec<GreenResult>> {
    sizes
        .par_iter()
        .map(|&n| {
            if n < 3 {
                return Err(Error::TooFewSites(n));
            }
            let p = template.with_sites(n);
            let (k, l) = rule.sites(n);
            green_entry_with(&p, bc, None, omega, k, l, opts)
        })
        .collect()
}

/// One row of a frequency sweep. `result` is `None` when the solve was
/// flagged near-singular.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyRow {
    pub omega: C64,
    pub result: Option<GreenResult>,
    pub near_singular: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencySweep {
    pub rule: EndpointRule,
    pub rows: Vec<FrequencyRow>,
    /// Midpoint of the adjacent pair with the largest `|d log10|G| / d omega|`.
    pub steepest: Option<C64>,
}

/// `|G|` along a list of frequencies for a chain of `p.n_sites` sites.
pub fn frequency_sweep(
    p: &ModelParams,
    bc: BoundaryKind,
    omegas: &[C64],
    rule: EndpointRule,
    opts: &SolveOptions,
) -> Result<FrequencySweep> {
    let h = build_hamiltonian(p, bc, None)?;
    let (k, l) = rule.sites(p.n_sites);
    let rows = omegas
        .par_iter()
        .map(|&omega| match resolvent_column_with(&h, omega, l, opts) {
            Ok(col) => Ok(FrequencyRow {
                omega,
                result: Some(numeric_result(p, bc, GreenQuery::new(k, l, omega), &col)),
                near_singular: None,
            }),
            Err(Error::NearSingular { cond }) => Ok(FrequencyRow {
                omega,
                result: None,
                near_singular: Some(cond),
            }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let steepest = steepest_slope(&rows);
    Ok(FrequencySweep { rule, rows, steepest })
}

fn steepest_slope(rows: &[FrequencyRow]) -> Option<C64> {
    let valid: Vec<(C64, f64)> = rows
        .iter()
        .filter_map(|r| r.result.map(|g| (r.omega, g.log10_abs())))
        .collect();
    valid
        .windows(2)
        .map(|w| {
            let slope = (w[1].1 - w[0].1).abs() / (w[1].0 - w[0].0).norm();
            (0.5 * (w[0].0 + w[1].0), slope)
        })
        .filter(|(_, s)| s.is_finite())
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(w, _)| w)
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: C64, b: C64, n: usize) -> Vec<C64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|j| a + (b - a) * (j as f64 / (n - 1) as f64))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_hamiltonian_is_diagonal() {
        let h = DMatrix::<C64>::zeros(4, 4);
        let omega = C64::new(0.3, -1.2);
        let col = resolvent_column(&h, omega, 2).unwrap();
        for k in 1..=4 {
            let expected = if k == 2 { 1.0 / omega } else { C64::new(0.0, 0.0) };
            assert!((col.entry(k) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn three_site_adjugate() {
        let p = ModelParams::real(0.5, 1.0, 0.0, 3);
        let g = green_entry(&p, BoundaryKind::Obc, None, C64::new(2.0, 0.0), 3, 1).unwrap();
        // cofactor of [[2,-0.5,0],[-1,2,-0.5],[0,-1,2]] at (1,3) is 1, det 6
        assert_abs_diff_eq!(g.value.re, 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.value.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn end_to_end_amplification() {
        let p = ModelParams::baseline(60);
        let g = green_entry(&p, BoundaryKind::Pobc, None, crate::OMEGA_1, 60, 1).unwrap();
        assert!((g.abs().log10() - 5.0).abs() < 0.01);
        assert!(g.cond_estimate.unwrap() < DEFAULT_COND_LIMIT);
    }

    #[test]
    fn residual_after_refinement() {
        let p = ModelParams::baseline(60);
        let h = build_hamiltonian(&p, BoundaryKind::Pobc, None).unwrap();
        for omega in [crate::OMEGA_1, crate::OMEGA_2, C64::new(0.7, 0.05)] {
            let col = resolvent_column(&h, omega, 1).unwrap();
            assert!(relative_residual(&h, omega, &col) < 1e-10);
        }
    }

    #[test]
    fn first_resolvent_identity() {
        let p = ModelParams::baseline(40);
        let h = build_hamiltonian(&p, BoundaryKind::Pobc, None).unwrap();
        let (w1, w2) = (C64::new(0.1, 0.3), C64::new(-0.2, 0.45));
        let g1: Vec<_> = (1..=40).map(|l| resolvent_column(&h, w1, l).unwrap().x).collect();
        let g2: Vec<_> = (1..=40).map(|l| resolvent_column(&h, w2, l).unwrap().x).collect();
        for (k, l) in [(1, 40), (40, 1), (17, 23)] {
            // G(w1) - G(w2) = (w2 - w1) G(w1) G(w2)
            let lhs = g1[l - 1][k - 1] - g2[l - 1][k - 1];
            let prod: C64 = (1..=40).map(|m| g1[m - 1][k - 1] * g2[l - 1][m - 1]).sum();
            let rhs = (w2 - w1) * prod;
            assert!((lhs - rhs).norm() < 1e-8 * lhs.norm());
        }
    }

    #[test]
    fn near_singular_is_reported() {
        let p = ModelParams::baseline(20).with_delta(0.0);
        let e = crate::spectra::obc_eigenvalues(&p)[3];
        let err = green_entry(&p, BoundaryKind::Obc, None, e, 20, 1).unwrap_err();
        assert!(matches!(err, Error::NearSingular { .. }));
    }

    #[test]
    fn site_range_checked() {
        let p = ModelParams::baseline(10);
        assert_eq!(
            green_entry(&p, BoundaryKind::Pobc, None, crate::OMEGA_1, 11, 1).unwrap_err(),
            Error::SiteOutOfRange {
                site: 11,
                n_sites: 10
            }
        );
    }

    #[test]
    fn obc_limit_at_tiny_delta() {
        let p = ModelParams::baseline(20);
        for omega in [crate::OMEGA_1, crate::OMEGA_2] {
            let a = green_entry(&p.with_delta(1e-12), BoundaryKind::Pobc, None, omega, 20, 1).unwrap();
            let b = green_entry(&p, BoundaryKind::Obc, None, omega, 20, 1).unwrap();
            assert!((a.value - b.value).norm() < 1e-6 * b.abs());
        }
    }

    #[test]
    fn sweep_flags_rows() {
        let p = ModelParams::baseline(20).with_delta(0.0);
        let e = crate::spectra::obc_eigenvalues(&p)[3];
        let sweep = frequency_sweep(
            &p,
            BoundaryKind::Obc,
            &[C64::new(0.0, 0.3), e, C64::new(0.0, 0.5)],
            EndpointRule::LastFirst,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(sweep.rows[1].near_singular.is_some());
        assert!(sweep.rows[0].result.is_some() && sweep.rows[2].result.is_some());
    }
}
