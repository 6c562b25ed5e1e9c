//! Monte Carlo relative error `dG = (G_disordered - G) / G` of Green's
//! function entries under uniform disorder.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::greens::numeric::{resolvent_column_with, SolveOptions};
use crate::greens::GreenQuery;
use crate::lattice::{
    build_hamiltonian, build_hamiltonian_trial, BoundaryKind, DisorderSpec, DisorderTarget, ModelParams,
};
use crate::C64;

/// Clean values at or below this modulus make the relative error undefined.
pub const CLEAN_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorStats {
    pub query: GreenQuery,
    pub target: DisorderTarget,
    pub half_width: f64,
    pub seed: u64,
    /// Trials that entered the statistics.
    pub trials: usize,
    pub median_abs_err: f64,
    pub mean_abs_err: f64,
    pub p90_abs_err: f64,
    /// Trials skipped because the disordered solve was near-singular.
    pub dropped_trials: usize,
}

/// Median, mean and 90th percentile (linear interpolation between order
/// statistics) of `values`, which must be nonempty.
pub fn summarize(values: &[f64]) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (quantile(&v, 0.5), mean, quantile(&v, 0.9))
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// `|dG_k|` for every `k` of one disorder realization, or `None` when the
/// solve was near-singular.
#[allow(clippy::too_many_arguments)]
fn trial_errors(
    p: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    l: usize,
    spec: &DisorderSpec,
    trial: u64,
    clean: &[C64],
    opts: &SolveOptions,
) -> Result<Option<Vec<f64>>> {
    let h = build_hamiltonian_trial(p, bc, spec, trial)?;
    match resolvent_column_with(&h, omega, l, opts) {
        Ok(col) => Ok(Some(
            clean
                .iter()
                .zip(col.x.iter())
                .map(|(g, gd)| ((gd - g) / g).norm())
                .collect(),
        )),
        Err(Error::NearSingular { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn clean_column(
    p: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    l: usize,
    opts: &SolveOptions,
) -> Result<Vec<C64>> {
    let h = build_hamiltonian(p, bc, None)?;
    Ok(resolvent_column_with(&h, omega, l, opts)?
        .x
        .iter()
        .copied()
        .collect())
}

/// Per-trial error columns, in trial order.
fn ensemble(
    p: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    l: usize,
    spec: &DisorderSpec,
    trials: usize,
    clean: &[C64],
) -> Result<Vec<Option<Vec<f64>>>> {
    let opts = SolveOptions::default();
    (0..trials as u64)
        .into_par_iter()
        .map(|t| trial_errors(p, bc, omega, l, spec, t, clean, &opts))
        .collect()
}

fn check_inputs(p: &ModelParams, spec: &DisorderSpec, trials: usize) -> Result<()> {
    p.validate()?;
    spec.validate()?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    Ok(())
}

fn stats_for(query: GreenQuery, spec: &DisorderSpec, errs: &[f64], dropped: usize) -> Result<ErrorStats> {
    if errs.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "all {dropped} trials were near-singular"
        )));
    }
    let (median, mean, p90) = summarize(errs);
    Ok(ErrorStats {
        query,
        target: spec.target,
        half_width: spec.half_width,
        seed: spec.seed,
        trials: errs.len(),
        median_abs_err: median,
        mean_abs_err: mean,
        p90_abs_err: p90,
        dropped_trials: dropped,
    })
}

/// Ensemble statistics of `|dG_{k,l}(omega)|` over `trials` realizations.
pub fn relative_error_ensemble(
    p: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    k: usize,
    l: usize,
    spec: &DisorderSpec,
    trials: usize,
) -> Result<ErrorStats> {
    let mut profile = error_profile_impl(p, bc, omega, l, spec, trials, Some(k))?;
    Ok(profile.remove(0))
}

/// [`relative_error_ensemble`] for every response site `k = 1..N`.
pub fn error_profile(
    p: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    l: usize,
    spec: &DisorderSpec,
    trials: usize,
) -> Result<Vec<ErrorStats>> {
    error_profile_impl(p, bc, omega, l, spec, trials, None)
}

fn error_profile_impl(
    p: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    l: usize,
    spec: &DisorderSpec,
    trials: usize,
    only: Option<usize>,
) -> Result<Vec<ErrorStats>> {
    check_inputs(p, spec, trials)?;
    let n = p.n_sites;
    GreenQuery::new(only.unwrap_or(1), l, omega).check(n)?;
    let clean = clean_column(p, bc, omega, l, &SolveOptions::default())?;
    let sites: Vec<usize> = match only {
        Some(k) => vec![k],
        None => (1..=n).collect(),
    };
    if sites.iter().any(|&k| clean[k - 1].norm() <= CLEAN_FLOOR) {
        return Err(Error::CleanValueZero);
    }
    let runs = ensemble(p, bc, omega, l, spec, trials, &clean)?;
    let kept: Vec<&Vec<f64>> = runs.iter().flatten().collect();
    let dropped = trials - kept.len();
    sites
        .iter()
        .map(|&k| {
            let errs: Vec<f64> = kept.iter().map(|e| e[k - 1]).collect();
            stats_for(GreenQuery::new(k, l, omega), spec, &errs, dropped)
        })
        .collect()
}

/// `|dG_{k,l}|` for `k = 1..N` from the single realization `trial`.
pub fn single_realization(
    p: &ModelParams,
    bc: BoundaryKind,
    omega: C64,
    l: usize,
    spec: &DisorderSpec,
    trial: u64,
) -> Result<Vec<f64>> {
    check_inputs(p, spec, 1)?;
    GreenQuery::new(1, l, omega).check(p.n_sites)?;
    let opts = SolveOptions::default();
    let clean = clean_column(p, bc, omega, l, &opts)?;
    if clean.iter().any(|g| g.norm() <= CLEAN_FLOOR) {
        return Err(Error::CleanValueZero);
    }
    let h = build_hamiltonian_trial(p, bc, spec, trial)?;
    let col = resolvent_column_with(&h, omega, l, &opts)?;
    Ok(clean
        .iter()
        .zip(col.x.iter())
        .map(|(g, gd)| ((gd - g) / g).norm())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MannKendall {
    pub s: i64,
    pub var_s: f64,
    pub z: f64,
    pub trend: Trend,
}

/// Two-sided standard normal quantile at 95%.
const Z_95: f64 = 1.959_963_984_540_054;

/// Mann-Kendall trend test at the 95% level, with the tie correction of the
/// variance and a continuity correction of `S`.
pub fn mann_kendall(y: &[f64]) -> MannKendall {
    let n = y.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            s += match y[j].partial_cmp(&y[i]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        ties += t * (t - 1.0) * (2.0 * t + 5.0);
        i = j + 1;
    }
    let nf = n as f64;
    let var_s = (nf * (nf - 1.0) * (2.0 * nf + 5.0) - ties) / 18.0;
    let z = if var_s <= 0.0 || s == 0 {
        0.0
    } else if s > 0 {
        (s - 1) as f64 / var_s.sqrt()
    } else {
        (s + 1) as f64 / var_s.sqrt()
    };
    let trend = if z > Z_95 {
        Trend::Increasing
    } else if z < -Z_95 {
        Trend::Decreasing
    } else {
        Trend::None
    };
    MannKendall { s, var_s, z, trend }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::OMEGA_1;

    #[test]
    fn zero_width_gives_zero_error() {
        let p = ModelParams::baseline(30);
        let spec = DisorderSpec::new(DisorderTarget::Hoppings, 0.0, 7);
        let s = relative_error_ensemble(&p, BoundaryKind::Pobc, OMEGA_1, 30, 1, &spec, 5).unwrap();
        assert_eq!((s.median_abs_err, s.mean_abs_err, s.p90_abs_err), (0.0, 0.0, 0.0));
        assert_eq!(s.trials, 5);
    }

    #[test]
    fn deterministic_and_consistent_with_profile() {
        let p = ModelParams::baseline(30);
        let spec = DisorderSpec::new(DisorderTarget::Onsite, 0.05, 11);
        let a = relative_error_ensemble(&p, BoundaryKind::Pobc, OMEGA_1, 30, 1, &spec, 8).unwrap();
        let b = relative_error_ensemble(&p, BoundaryKind::Pobc, OMEGA_1, 30, 1, &spec, 8).unwrap();
        assert_eq!(a, b);
        let prof = error_profile(&p, BoundaryKind::Pobc, OMEGA_1, 1, &spec, 8).unwrap();
        assert_eq!(prof[29], a);
        let one = single_realization(&p, BoundaryKind::Pobc, OMEGA_1, 1, &spec, 3).unwrap();
        assert_eq!(
            one,
            single_realization(&p, BoundaryKind::Pobc, OMEGA_1, 1, &spec, 3).unwrap()
        );
    }

    #[test]
    fn quantiles() {
        let (m, mean, p90) = summarize(&[4.0, 1.0, 3.0, 2.0, 5.0]);
        assert_eq!((m, mean), (3.0, 3.0));
        assert!((p90 - 4.6).abs() < 1e-15);
    }

    #[test]
    fn trend_test() {
        let up: Vec<f64> = (0..20).map(|i| i as f64 + 0.3 * ((i * 7) % 3) as f64).collect();
        assert_eq!(mann_kendall(&up).trend, Trend::Increasing);
        let down: Vec<f64> = up.iter().rev().copied().collect();
        assert_eq!(mann_kendall(&down).trend, Trend::Decreasing);
        assert_eq!(mann_kendall(&[1.0, 3.0, 2.0, 1.0, 3.0, 2.0]).trend, Trend::None);
        assert_eq!(mann_kendall(&[2.0; 10]).s, 0);
    }

    #[test]
    fn bad_inputs() {
        let p = ModelParams::baseline(30);
        let spec = DisorderSpec::new(DisorderTarget::Hoppings, 0.05, 1);
        assert!(relative_error_ensemble(&p, BoundaryKind::Pobc, OMEGA_1, 30, 1, &spec, 0).is_err());
        let bad = DisorderSpec::new(DisorderTarget::Hoppings, -1.0, 1);
        assert!(relative_error_ensemble(&p, BoundaryKind::Pobc, OMEGA_1, 30, 1, &bad, 3).is_err());
    }
}
