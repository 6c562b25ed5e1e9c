//! Analytic Green's function: regime classification on cGBZ1, contour terms
//! of order `q`, closed forms, eigenvector coefficients and the critical
//! lengths `N_c`, `N_0`, `N_1`, `L_c`.

use std::f64::consts::PI;

use serde::Serialize;

use super::logpolar::LogC;
use super::{DominantTerm, GreenQuery, GreenResult, Method, Regime};
use crate::curves::{self, point_inside, Curve};
use crate::error::{Error, Result};
use crate::lattice::{BoundaryKind, ModelParams};
use crate::roots::{bloch_roots, BlochRoots};
use crate::C64;

/// cGBZ1 resolution used for regime classification.
pub const CLASSIFY_SAMPLES: usize = 1024;
/// Smallest sample count accepted by [`expansion_term`].
pub const MIN_QUADRATURE_SAMPLES: usize = 256;
const MAX_QUADRATURE_SAMPLES: usize = 1 << 18;
const QUADRATURE_RTOL: f64 = 1e-6;
const QUADRATURE_ATOL: f64 = 1e-10;

/// Regime of `omega` from the position of the Bloch roots relative to `c`.
pub fn classify_regime_on(c: &Curve, p: &ModelParams, omega: C64) -> Result<Regime> {
    let roots = bloch_roots(p, omega)?;
    let a_inside = point_inside(c, roots.beta_a)?;
    let b_inside = point_inside(c, roots.beta_b)?;
    match (a_inside, b_inside) {
        (false, false) => Ok(Regime::Nontrivial),
        (true, false) => Ok(Regime::Trivial),
        _ => Err(Error::UnclassifiedConfiguration { a_inside, b_inside }),
    }
}

/// [`classify_regime_on`] with a freshly sampled cGBZ1.
pub fn classify_regime(p: &ModelParams, omega: C64) -> Result<Regime> {
    let c = curves::cgbz_curve(p, 1, CLASSIFY_SAMPLES)?;
    classify_regime_on(&c, p, omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionTerm {
    pub q: i32,
    pub value: C64,
    pub samples_used: usize,
    /// Mean modulus of the integrand; the natural size against which a
    /// vanishing term is judged.
    pub scale: f64,
}

/// `q`-th term of the contour expansion of `G_{k,l}(omega)`.
///
/// The integrand over cGBZ1, parametrised by `theta`, is
///
/// ```text
/// n(beta) / (omega - E(beta)) * [(delta/t2) beta^N (1 - beta^2/r^2)]^q / J(beta)
/// n(beta) = beta^(k-l) - beta^(k+l)/r^(2l)
///         - beta^(2N+2-k-l)/r^(2N+2-2k) + beta^(2N+2+l-k)/r^(2N+2+2l-2k)
/// ```
///
/// with `J = 1 - 2u/(N(1-u))`, `u = beta^2/r^2`. The trapezoid rule starts at
/// `m` samples and doubles until successive estimates agree.
pub fn expansion_term(
    p: &ModelParams,
    omega: C64,
    k: usize,
    l: usize,
    q: i32,
    m: usize,
) -> Result<ExpansionTerm> {
    p.validate()?;
    GreenQuery::new(k, l, omega).check(p.n_sites)?;
    if m < MIN_QUADRATURE_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "quadrature needs at least {MIN_QUADRATURE_SAMPLES} samples, got {m}"
        )));
    }
    if p.delta.norm() == 0.0 {
        return Err(Error::ZeroDelta);
    }
    let integrand = |theta: f64| -> Result<C64> {
        let beta = curves::cgbz1_point(p, theta)?;
        Ok(integrand(p, omega, k, l, q, beta))
    };

    let mut sum = C64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for j in 0..m {
        let f = integrand(2.0 * PI * j as f64 / m as f64)?;
        sum += f;
        abs_sum += f.norm();
    }
    let mut n = m;
    let mut value = sum / n as f64;
    loop {
        // the new nodes sit halfway between the old ones
        for j in 0..n {
            let f = integrand(2.0 * PI * (j as f64 + 0.5) / n as f64)?;
            sum += f;
            abs_sum += f.norm();
        }
        n *= 2;
        let next = sum / n as f64;
        let scale = abs_sum / n as f64;
        let change = (next - value).norm();
        value = next;
        if change <= QUADRATURE_RTOL * value.norm() + QUADRATURE_ATOL * scale {
            return Ok(ExpansionTerm {
                q,
                value,
                samples_used: n,
                scale,
            });
        }
        if n >= MAX_QUADRATURE_SAMPLES {
            return Err(Error::QuadratureNonConvergent { samples: n, change });
        }
    }
}

fn integrand(p: &ModelParams, omega: C64, k: usize, l: usize, q: i32, beta: C64) -> C64 {
    let n = p.n_sites as i32;
    let (k, l) = (k as i32, l as i32);
    let r2 = p.r2();
    let u = beta * beta / r2;
    let jac = 1.0 - 2.0 * u / (n as f64 * (1.0 - u));
    let numer = beta.powi(k - l)
        - beta.powi(k + l) / r2.powi(l)
        - (beta.powi(2 * n + 2 - k - l) / r2.powi(n + 1 - k)
            - beta.powi(2 * n + 2 + l - k) / r2.powi(n + 1 + l - k));
    let kernel = (p.delta / p.t2) * beta.powi(n) * (1.0 - u);
    numer / (omega - p.energy(beta)) * kernel.powi(q) / jac
}

/// Sum of the expansion terms `q = q_min..=q_max`.
pub fn expansion_sum(
    p: &ModelParams,
    omega: C64,
    k: usize,
    l: usize,
    q_range: std::ops::RangeInclusive<i32>,
    m: usize,
) -> Result<C64> {
    q_range
        .map(|q| expansion_term(p, omega, k, l, q, m).map(|t| t.value))
        .sum()
}

/// Closed-form pieces of `G_{k,l}(omega)` with the labels of the terms they
/// come from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormTerms {
    pub regime: Regime,
    pub roots: BlochRoots,
    pub terms: Vec<(DominantTerm, C64)>,
}

impl ClosedFormTerms {
    pub fn total(&self) -> C64 {
        let parts: Vec<LogC> = self.terms.iter().map(|(_, v)| LogC::from_c64(*v)).collect();
        LogC::sum(&parts).to_c64()
    }

    pub fn dominant(&self) -> DominantTerm {
        self.terms
            .iter()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|t| t.0)
            .expect("at least one term")
    }
}

/// Closed-form value of `G_{k,l}(omega)` for the pOBC chain.
///
/// Nontrivial regime: the `q = -1` residue sum for `k >= l`, the bulk
/// `q = 0` term for `k < l`. Trivial regime: the full `q = 0` term plus the
/// `q = 1` term (`k < l`) or the first-order correction `r(G)` (`k >= l`).
/// The value is the sum of the retained terms; `dominant` names the larger.
pub fn closed_form(p: &ModelParams, omega: C64, k: usize, l: usize) -> Result<GreenResult> {
    let terms = closed_form_terms(p, omega, k, l)?;
    Ok(GreenResult {
        query: GreenQuery::new(k, l, omega),
        n_sites: p.n_sites,
        boundary: BoundaryKind::Pobc,
        value: terms.total(),
        method: Method::ClosedForm,
        regime: Some(terms.regime),
        cond_estimate: None,
        dominant: Some(terms.dominant()),
    })
}

pub fn closed_form_terms(p: &ModelParams, omega: C64, k: usize, l: usize) -> Result<ClosedFormTerms> {
    p.validate()?;
    GreenQuery::new(k, l, omega).check(p.n_sites)?;
    if p.delta.norm() == 0.0 {
        return Err(Error::ZeroDelta);
    }
    let regime = classify_regime(p, omega)?;
    closed_form_terms_in(p, regime, omega, k, l)
}

/// Closed-form terms for a regime that is already known.
pub fn closed_form_terms_in(
    p: &ModelParams,
    regime: Regime,
    omega: C64,
    k: usize,
    l: usize,
) -> Result<ClosedFormTerms> {
    let roots = bloch_roots(p, omega)?;
    let c = Pieces::new(p, &roots);
    let (n, k, l) = (p.n_sites as i64, k as i64, l as i64);
    let terms = match regime {
        Regime::Nontrivial if k >= l => vec![(DominantTerm::Q(-1), c.nontrivial_residue(n, k, l))],
        Regime::Nontrivial => vec![(DominantTerm::Q(0), c.bulk(k, l))],
        Regime::Trivial => {
            let g0 = c.trivial_g0(n, k, l);
            if k < l {
                vec![
                    (DominantTerm::Q(0), g0),
                    (DominantTerm::Q(1), c.trivial_g1(n, k, l)),
                ]
            } else {
                vec![
                    (DominantTerm::Q(0), g0),
                    (DominantTerm::Correction, c.correction(n, k, l)),
                ]
            }
        }
    };
    Ok(ClosedFormTerms {
        regime,
        roots,
        terms: terms.into_iter().map(|(t, v)| (t, v.to_c64())).collect(),
    })
}

/// Log-polar building blocks shared by the closed forms.
struct Pieces {
    a: LogC,
    b: LogC,
    r: LogC,
    t1: LogC,
    t2: LogC,
    delta: LogC,
    /// `t1 (beta_a - beta_b)`
    t1_ab: LogC,
    one: LogC,
}

impl Pieces {
    fn new(p: &ModelParams, roots: &BlochRoots) -> Self {
        Self {
            a: LogC::from_c64(roots.beta_a),
            b: LogC::from_c64(roots.beta_b),
            r: LogC::from_c64(p.r()),
            t1: LogC::from_c64(p.t1),
            t2: LogC::from_c64(p.t2),
            delta: LogC::from_c64(p.delta),
            t1_ab: LogC::from_c64(p.t1 * (roots.beta_a - roots.beta_b)),
            one: LogC::ONE,
        }
    }

    /// `beta_a^e - beta_b^e`
    fn diff(&self, e: i64) -> LogC {
        LogC::sum(&[self.a.powi(e), -self.b.powi(e)])
    }

    /// `(beta_a^(k-l) - beta_b^(k-l)) / (t1 (beta_a - beta_b))`
    fn bulk(&self, k: i64, l: i64) -> LogC {
        self.diff(k - l) / self.t1_ab
    }

    fn nontrivial_residue(&self, n: i64, k: i64, l: i64) -> LogC {
        let l1 = (l - 1).min((n + l - 1 - k).div_euclid(2));
        let l2 = (l - 1).min((k + l - n - 3).div_euclid(2));
        let mut parts: Vec<LogC> = (0..=l1)
            .map(|m| self.diff(k - l + 2 * m - n) / self.r.powi(2 * m))
            .collect();
        if l2 >= 0 {
            parts.extend(
                (0..=l2)
                    .map(|m| -(self.diff(n + 2 - k + 2 * m - l) / self.r.powi(2 * n + 2 - 2 * k + 2 * m))),
            );
        }
        self.t2 / self.delta * LogC::sum(&parts) / self.t1_ab
    }

    fn trivial_g0(&self, n: i64, k: i64, l: i64) -> LogC {
        let (a, r) = (self.a, self.r);
        let image = LogC::sum(&[
            a.powi(k + l) / r.powi(2 * l),
            a.powi(2 * n + 2 - k - l) / r.powi(2 * n + 2 - 2 * k),
            -(a.powi(2 * n + 2 + l - k) / r.powi(2 * n + 2 + 2 * l - 2 * k)),
        ]);
        let direct = if k < l {
            -self.b.powi(k - l)
        } else {
            -a.powi(k - l)
        };
        LogC::sum(&[direct, image]) / self.t1_ab
    }

    fn trivial_g1(&self, n: i64, k: i64, l: i64) -> LogC {
        let x = self.a / self.r;
        let shape = LogC::sum(&[
            self.one,
            -x.powi(2 * l),
            -x.powi(2 * n + 2 - 2 * k),
            x.powi(2 * n + 2 + 2 * l - 2 * k),
        ]);
        let damp = LogC::sum(&[self.one, -(self.a.powi(2) / self.r.powi(2))]);
        -(self.delta / self.t2 * shape * self.a.powi(k - l + n) * damp / self.t1_ab)
    }

    fn correction(&self, n: i64, k: i64, l: i64) -> LogC {
        let damp = LogC::sum(&[self.one, -(self.r.powi(2) / self.b.powi(2))]);
        // t1^2 (beta_b - beta_a) = -t1 * t1_ab
        -(self.delta * self.b.powi(k - l - n) * damp / (self.t1 * self.t1_ab))
    }
}

/// Right and left eigenvector weights for the eigenvalue with root pair
/// `(beta1, beta2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenCoefficients {
    pub c1: C64,
    pub c2: C64,
    pub c1_tilde: C64,
    pub c2_tilde: C64,
    /// First-order-in-delta correction applied to `c1`.
    pub corrected: bool,
}

/// `c1 = c1~ = 1`, `c2~ = -1`, `c2 = -beta1^(N+1)/beta2^(N+1)`; with
/// `corrected`, `c1 = conj(c1~) = 1 + delta beta1^(-N)/t1`.
pub fn eigen_coefficients(p: &ModelParams, beta1: C64, beta2: C64, corrected: bool) -> EigenCoefficients {
    let n = p.n_sites as i64;
    let c2 = -(LogC::from_c64(beta1) / LogC::from_c64(beta2))
        .powi(n + 1)
        .to_c64();
    let c1 = if corrected {
        1.0 + p.delta * (LogC::from_c64(beta1).powi(-n)).to_c64() / p.t1
    } else {
        C64::new(1.0, 0.0)
    };
    EigenCoefficients {
        c1,
        c2,
        c1_tilde: c1.conj(),
        c2_tilde: C64::new(-1.0, 0.0),
        corrected,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalScales {
    /// Length above which the fGBZ leaves the GBZ.
    pub n_c: f64,
    /// Trivial-regime crossover distance.
    pub n_0: f64,
    /// Onset of the anomalous scaling from the correction term.
    pub n_1: f64,
    /// Localization length `1/|ln|beta1||` at the cGBZ1 point `theta = 0`.
    pub l_c: f64,
}

pub fn critical_scales(p: &ModelParams, omega: C64) -> Result<CriticalScales> {
    p.validate()?;
    let n_c = p.critical_length()?;
    let roots = bloch_roots(p, omega)?;
    let (la, lb) = (roots.beta_a.norm().ln(), roots.beta_b.norm().ln());
    let ln_delta = p.delta.norm().ln();
    let n = p.n_sites as f64;
    let gap = la - lb;
    if gap == 0.0 {
        return Err(Error::DegenerateRoots {
            re: omega.re,
            im: omega.im,
        });
    }
    Ok(CriticalScales {
        n_c,
        n_0: ((n * la + ln_delta) / gap).abs(),
        n_1: ((n * lb - ln_delta) / gap).abs(),
        l_c: localization_length(p)?,
    })
}

/// `L_c = 1/|ln|beta1||` with `beta1` the cGBZ1 point at `theta = 0`.
pub fn localization_length(p: &ModelParams) -> Result<f64> {
    let beta = curves::cgbz1_point(p, 0.0)?;
    Ok(1.0 / beta.norm().ln().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::numeric::green_entry;
    use crate::{OMEGA_1, OMEGA_2};

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn regimes_at_reference_frequencies() {
        let p = ModelParams::baseline(60);
        assert_eq!(classify_regime(&p, OMEGA_1).unwrap(), Regime::Nontrivial);
        assert_eq!(classify_regime(&p, OMEGA_2).unwrap(), Regime::Trivial);
    }

    #[test]
    fn end_to_end_is_minus_inverse_delta() {
        for n in [60, 80, 100] {
            let p = ModelParams::baseline(n);
            let g = closed_form(&p, OMEGA_1, n, 1).unwrap();
            assert!(rel(g.value, C64::new(-1e5, 0.0)) < 1e-10, "{n}: {}", g.value);
            assert_eq!(g.dominant, Some(DominantTerm::Q(-1)));
        }
        // any frequency in the nontrivial regime
        let p = ModelParams::baseline(60);
        let g = closed_form(&p, C64::new(0.3, 0.05), 60, 1).unwrap();
        assert!(rel(g.value, C64::new(-1e5, 0.0)) < 1e-10);
    }

    #[test]
    fn reference_entries() {
        let p = ModelParams::baseline(60);
        let g = closed_form(&p, OMEGA_1, 1, 2).unwrap();
        assert!(rel(g.value, C64::new(-1.0, 0.0)) < 1e-9, "{}", g.value);
        let g = closed_form(&p, OMEGA_2, 1, 60).unwrap();
        assert!((g.value.re + 1.14424e-5).abs() < 1e-9, "{}", g.value);
        assert_eq!(g.dominant, Some(DominantTerm::Q(1)));
    }

    #[test]
    fn closed_form_tracks_resolvent() {
        let p = ModelParams::baseline(60);
        for k in 1..=60 {
            let exact = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_1, k, 1).unwrap();
            let cf = closed_form(&p, OMEGA_1, k, 1).unwrap();
            assert!(rel(cf.value, exact.value) < 0.05, "k = {k}");
        }
    }

    #[test]
    fn huge_powers_stay_finite() {
        let p = ModelParams::baseline(100);
        let omega = C64::new(0.0, 2.8);
        for k in [10, 50, 100] {
            let t = closed_form_terms(&p, omega, k, 10).unwrap();
            assert_eq!(t.regime, Regime::Trivial);
            assert!(t.total().is_finite());
        }
    }

    #[test]
    fn contour_terms() {
        let p = ModelParams::baseline(60);
        let t = expansion_term(&p, OMEGA_1, 60, 1, -1, 256).unwrap();
        assert!(rel(t.value, C64::new(-1e5, 0.0)) < 1e-3, "{}", t.value);
        let t0 = expansion_term(&p, OMEGA_1, 60, 1, 0, 256).unwrap();
        assert!(t0.value.norm() / t0.scale < 1e-8);
    }

    #[test]
    fn contour_sum_matches_resolvent() {
        let p = ModelParams::baseline(60);
        let exact = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_1, 30, 1).unwrap();
        let s = expansion_sum(&p, OMEGA_1, 30, 1, -2..=2, 256).unwrap();
        assert!(rel(s, exact.value) < 0.01);
    }

    #[test]
    fn coefficients() {
        let p = ModelParams::baseline(60);
        let (b1, b2) = (C64::new(1.2, 0.1), C64::new(1.6, -0.2));
        let c = eigen_coefficients(&p, b1, b2, false);
        assert_eq!(c.c1, C64::new(1.0, 0.0));
        assert_eq!(c.c1_tilde, C64::new(1.0, 0.0));
        assert_eq!(c.c2_tilde, C64::new(-1.0, 0.0));
        assert!(rel(c.c2, -(b1 / b2).powi(61)) < 1e-12);
        let c = eigen_coefficients(&p, b1, b2, true);
        assert!(rel(c.c1, 1.0 + 1e-5 * b1.powi(-60) / 0.5) < 1e-12);
        assert_eq!(c.c1_tilde, c.c1.conj());
    }

    #[test]
    fn scales() {
        let s = critical_scales(&ModelParams::baseline(60), OMEGA_2).unwrap();
        assert!((s.n_c - 33.22).abs() < 0.01);
        assert!((s.n_0 - 13.38).abs() < 0.01, "{}", s.n_0);
        let s = critical_scales(&ModelParams::baseline(100), C64::new(0.0, 2.8)).unwrap();
        assert!((s.n_1 - 66.1).abs() < 0.05, "{}", s.n_1);
        assert!(
            critical_scales(&ModelParams::baseline(60).with_delta(0.0), OMEGA_1).unwrap_err()
                == Error::ZeroDelta
        );
    }
}
