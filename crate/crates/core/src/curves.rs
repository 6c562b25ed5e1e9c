//! Contours in the complex-beta plane: BZ, GBZ, the rGBZ circles and the
//! continuous cGBZ curves obtained by inverting the renormalization maps
//!
//! ```text
//! f1(beta) = beta (1 - beta^2/r^2)^(1/N)  = rho1 e^{i theta},  rho1 = (t2/delta)^(1/N)
//! f2(beta) = beta (1 - r^2/beta^2)^(-1/N) = rho2 e^{-i theta}, rho2 = r^2 (delta/t2)^(1/N)
//! ```
//!
//! All fractional powers use the principal branch.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::ModelParams;
use crate::spectra::SpectrumSet;
use crate::C64;

pub const MIN_SAMPLES: usize = 64;
const FIXED_POINT_TOL: f64 = 1e-12;
const FIXED_POINT_MAX_ITER: usize = 200;
const ON_CURVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveLabel {
    #[serde(rename = "BZ")]
    Bz,
    #[serde(rename = "GBZ")]
    Gbz,
    #[serde(rename = "RGBZ1")]
    Rgbz1,
    #[serde(rename = "RGBZ2")]
    Rgbz2,
    #[serde(rename = "CGBZ1")]
    Cgbz1,
    #[serde(rename = "CGBZ2")]
    Cgbz2,
    #[serde(rename = "FGBZ1")]
    Fgbz1,
    #[serde(rename = "FGBZ2")]
    Fgbz2,
}

impl CurveLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveLabel::Bz => "BZ",
            CurveLabel::Gbz => "GBZ",
            CurveLabel::Rgbz1 => "RGBZ1",
            CurveLabel::Rgbz2 => "RGBZ2",
            CurveLabel::Cgbz1 => "CGBZ1",
            CurveLabel::Cgbz2 => "CGBZ2",
            CurveLabel::Fgbz1 => "FGBZ1",
            CurveLabel::Fgbz2 => "FGBZ2",
        }
    }
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

/// Closed, ordered sampling of a contour. The last sample connects back to
/// the first. `thetas[j]` is the parameter that produced `samples[j]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub label: CurveLabel,
    pub samples: Vec<C64>,
    pub thetas: Vec<f64>,
    pub orientation: Orientation,
    pub n_sites: Option<usize>,
}

impl Curve {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Same contour traversed the other way.
    pub fn reversed(&self) -> Curve {
        let mut c = self.clone();
        c.samples.reverse();
        c.thetas.reverse();
        c.orientation = match self.orientation {
            Orientation::Counterclockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::Counterclockwise,
        };
        c
    }

    pub fn segments(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        let n = self.samples.len();
        (0..n).map(move |j| (self.samples[j], self.samples[(j + 1) % n]))
    }

    /// Distance from `z` to the closed polygon.
    pub fn distance_to(&self, z: C64) -> f64 {
        self.segments()
            .map(|(a, b)| segment_distance(a, b, z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Polygonal winding number of the sample sequence about `z`.
    pub fn winding_about(&self, z: C64) -> i64 {
        let total: f64 = self.segments().map(|(a, b)| ((b - z) / (a - z)).arg()).sum();
        (total / (2.0 * PI)).round() as i64
    }

    pub fn centroid(&self) -> C64 {
        self.samples.iter().sum::<C64>() / self.samples.len() as f64
    }

    pub fn max_modulus(&self) -> f64 {
        self.samples.iter().map(|b| b.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.samples
            .iter()
            .map(|b| b.norm())
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(a: C64, b: C64, z: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - z).norm()
}

/// True iff the polygonal winding of `c` about `z` is nonzero.
pub fn point_inside(c: &Curve, z: C64) -> Result<bool> {
    let distance = c.distance_to(z);
    if distance <= ON_CURVE_TOL {
        return Err(Error::OnBoundary { distance });
    }
    Ok(c.winding_about(z) != 0)
}

fn thetas(m: usize) -> Vec<f64> {
    (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
}

fn check_samples(m: usize) -> Result<()> {
    if m < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "curves need at least {MIN_SAMPLES} samples, got {m}"
        )));
    }
    Ok(())
}

/// Counterclockwise circle of the given radius.
pub fn circle(label: CurveLabel, radius: f64, m: usize, n_sites: Option<usize>) -> Result<Curve> {
    check_samples(m)?;
    let th = thetas(m);
    Ok(Curve {
        label,
        samples: th.iter().map(|&t| C64::from_polar(radius, t)).collect(),
        thetas: th,
        orientation: Orientation::Counterclockwise,
        n_sites,
    })
}

/// The unit circle and the GBZ circle `|beta| = |r|`.
pub fn standard_curves(p: &ModelParams, m: usize) -> Result<(Curve, Curve)> {
    Ok((
        circle(CurveLabel::Bz, 1.0, m, None)?,
        circle(CurveLabel::Gbz, p.r().norm(), m, None)?,
    ))
}

/// `|t2/delta|^(1/N)` and `|r^2| |delta/t2|^(1/N)`.
pub fn rgbz_radii(p: &ModelParams) -> Result<(f64, f64)> {
    if p.delta.norm() == 0.0 {
        return Err(Error::ZeroDelta);
    }
    let n = p.n_sites as f64;
    let rho1 = (p.t2 / p.delta).norm().powf(1.0 / n);
    let rho2 = p.r2().norm() * (p.delta / p.t2).norm().powf(1.0 / n);
    Ok((rho1, rho2))
}

pub fn rgbz_circles(p: &ModelParams, m: usize) -> Result<(Curve, Curve)> {
    let (rho1, rho2) = rgbz_radii(p)?;
    warn_below_critical(p);
    Ok((
        circle(CurveLabel::Rgbz1, rho1, m, Some(p.n_sites))?,
        circle(CurveLabel::Rgbz2, rho2, m, Some(p.n_sites))?,
    ))
}

fn warn_below_critical(p: &ModelParams) {
    if let Ok(nc) = p.critical_length() {
        if (p.n_sites as f64) <= nc {
            log::warn!(
                "N = {} does not exceed the critical length {:.3}; the renormalized circles are not attained",
                p.n_sites,
                nc
            );
        }
    }
}

/// One sample of cGBZ1: the solution of `f1(beta) = rho1 e^{i theta}` on
/// the principal branch.
pub fn cgbz1_point(p: &ModelParams, theta: f64) -> Result<C64> {
    if p.delta.norm() == 0.0 {
        return Err(Error::ZeroDelta);
    }
    let n = p.n_sites as f64;
    let r2 = p.r2();
    let target = (p.t2 / p.delta).powf(1.0 / n) * C64::from_polar(1.0, theta);
    let one = C64::new(1.0, 0.0);
    let mut beta = target;
    let mut converged = false;
    for _ in 0..FIXED_POINT_MAX_ITER {
        let next = target * (one - beta * beta / r2).powf(-1.0 / n);
        let step = (next - beta).norm();
        beta = next;
        if !beta.is_finite() {
            break;
        }
        if step < FIXED_POINT_TOL * beta.norm().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        if !beta.is_finite() {
            beta = target;
        }
        beta = newton_polish(beta, |b| {
            // (b/target)^N (1 - b^2/r^2) - 1 and its derivative
            let w = (b / target).powf(n);
            let u = one - b * b / r2;
            (w * u - one, w * (u * n / b - 2.0 * b / r2))
        })
        .ok_or_else(|| Error::ConvergenceFailure(format!("cGBZ1 at theta = {theta}")))?;
    }
    let check = beta * (one - beta * beta / r2).powf(1.0 / n) - target;
    if check.norm() > 1e-10 * target.norm().max(1.0) {
        return Err(Error::ConvergenceFailure(format!(
            "cGBZ1 at theta = {theta}: map residual {:e}",
            check.norm()
        )));
    }
    Ok(beta)
}

/// One sample of cGBZ2: the solution of `f2(beta) = rho2 e^{-i theta}`.
pub fn cgbz2_point(p: &ModelParams, theta: f64) -> Result<C64> {
    if p.delta.norm() == 0.0 {
        return Err(Error::ZeroDelta);
    }
    let n = p.n_sites as f64;
    let r2 = p.r2();
    let target = r2 * (p.delta / p.t2).powf(1.0 / n) * C64::from_polar(1.0, -theta);
    let one = C64::new(1.0, 0.0);
    let mut beta = target;
    let mut converged = false;
    for _ in 0..FIXED_POINT_MAX_ITER {
        let next = target * (one - r2 / (beta * beta)).powf(1.0 / n);
        let step = (next - beta).norm();
        beta = next;
        if !beta.is_finite() {
            break;
        }
        if step < FIXED_POINT_TOL * beta.norm().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        if !beta.is_finite() {
            beta = target;
        }
        beta = newton_polish(beta, |b| {
            // (b/target)^N - (1 - r^2/b^2)
            let w = (b / target).powf(n);
            (w - one + r2 / (b * b), w * n / b - 2.0 * r2 / (b * b * b))
        })
        .ok_or_else(|| Error::ConvergenceFailure(format!("cGBZ2 at theta = {theta}")))?;
    }
    let check = beta * (one - r2 / (beta * beta)).powf(-1.0 / n) - target;
    if check.norm() > 1e-10 * target.norm().max(1.0) {
        return Err(Error::ConvergenceFailure(format!(
            "cGBZ2 at theta = {theta}: map residual {:e}",
            check.norm()
        )));
    }
    Ok(beta)
}

fn newton_polish(mut x: C64, f: impl Fn(C64) -> (C64, C64)) -> Option<C64> {
    for _ in 0..100 {
        let (v, d) = f(x);
        let step = v / d;
        if !step.is_finite() {
            return None;
        }
        x -= step;
        if step.norm() < FIXED_POINT_TOL * x.norm().max(1.0) {
            return Some(x);
        }
    }
    None
}

/// `d beta / d theta` along cGBZ1 at the sample `beta`.
pub fn cgbz1_jacobian(p: &ModelParams, beta: C64) -> C64 {
    let u = beta * beta / p.r2();
    let n = p.n_sites as f64;
    C64::new(0.0, 1.0) * beta / (1.0 - 2.0 * u / (n * (1.0 - u)))
}

/// cGBZ curve of the given branch with `m` samples, counterclockwise.
pub fn cgbz_curve(p: &ModelParams, branch: u8, m: usize) -> Result<Curve> {
    check_samples(m)?;
    cgbz_curve_unchecked(p, branch, m)
}

type PointFn = fn(&ModelParams, f64) -> Result<C64>;

/// cGBZ curve without the minimum-sample check; used for seeding.
pub(crate) fn cgbz_curve_unchecked(p: &ModelParams, branch: u8, m: usize) -> Result<Curve> {
    let th = thetas(m);
    let (label, point): (CurveLabel, PointFn) = match branch {
        1 => (CurveLabel::Cgbz1, cgbz1_point),
        2 => (CurveLabel::Cgbz2, cgbz2_point),
        b => {
            return Err(Error::InvalidArgument(format!(
                "cGBZ branch must be 1 or 2, got {b}"
            )))
        }
    };
    let samples = th.par_iter().map(|&t| point(p, t)).collect::<Result<Vec<_>>>()?;
    let mut c = Curve {
        label,
        samples,
        thetas: th,
        orientation: Orientation::Counterclockwise,
        n_sites: Some(p.n_sites),
    };
    if branch == 2 {
        // e^{-i theta} runs clockwise
        c.samples.reverse();
        c.thetas.reverse();
    }
    Ok(c)
}

/// Resamples the contour behind `c` with `m` points.
pub fn resample(c: &Curve, p: &ModelParams, m: usize) -> Result<Curve> {
    let fresh = match c.label {
        CurveLabel::Cgbz1 => cgbz_curve(p, 1, m)?,
        CurveLabel::Cgbz2 => cgbz_curve(p, 2, m)?,
        CurveLabel::Fgbz1 | CurveLabel::Fgbz2 => {
            return Err(Error::InvalidArgument(format!(
                "{} is a point set and cannot be resampled",
                c.label
            )))
        }
        label => {
            let radius = c.samples.first().map(|b| b.norm()).unwrap_or(1.0);
            circle(label, radius, m, c.n_sites)?
        }
    };
    Ok(match c.orientation {
        Orientation::Counterclockwise => fresh,
        Orientation::Clockwise => fresh.reversed(),
    })
}

/// The finite-size root sets attached to a pOBC spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FgbzPoints {
    pub fgbz1: Vec<C64>,
    pub fgbz2: Vec<C64>,
    pub n_sites: Option<usize>,
}

pub fn fgbz_points(spec: &SpectrumSet) -> FgbzPoints {
    FgbzPoints {
        fgbz1: spec.points.iter().map(|pt| pt.beta1).collect(),
        fgbz2: spec.points.iter().map(|pt| pt.beta2).collect(),
        n_sites: spec.n_sites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn base60() -> ModelParams {
        ModelParams::baseline(60)
    }

    #[test]
    fn standard_radii() {
        let (bz, gbz) = standard_curves(&base60(), 128).unwrap();
        assert_abs_diff_eq!(bz.samples[17].norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gbz.samples[5].norm(), std::f64::consts::SQRT_2, epsilon = 1e-6);
        let p = ModelParams::real(1.0, 1.0, 0.0, 10);
        let (bz, gbz) = standard_curves(&p, 64).unwrap();
        assert_eq!(bz.samples, gbz.samples);
        assert!(standard_curves(&base60(), 63).is_err());
    }

    #[test]
    fn gbz_image_is_obc_segment() {
        let p = base60();
        let (_, gbz) = standard_curves(&p, 256).unwrap();
        let e0 = 2.0 * (0.5f64).sqrt();
        for b in &gbz.samples {
            let e = p.energy(*b);
            assert!(e.im.abs() < 1e-12);
            assert!(e.re.abs() <= e0 + 1e-12);
        }
    }

    #[test]
    fn rgbz_radii_baseline() {
        let (r1, r2) = rgbz_radii(&base60()).unwrap();
        assert_abs_diff_eq!(r1, 1.211528, epsilon = 1e-6);
        assert_abs_diff_eq!(r2, 1.650811, epsilon = 1e-5);
        for n in [10, 40, 77] {
            let (a, b) = rgbz_radii(&ModelParams::baseline(n)).unwrap();
            assert_abs_diff_eq!(a * b, 2.0, epsilon = 1e-12);
        }
        assert_eq!(rgbz_radii(&base60().with_delta(0.0)), Err(Error::ZeroDelta));
    }

    #[test]
    fn cgbz1_reference_points() {
        let p = base60();
        let b0 = cgbz1_point(&p, 0.0).unwrap();
        assert_abs_diff_eq!(b0.re, 1.2416459, epsilon = 1e-6);
        assert_abs_diff_eq!(b0.im, 0.0, epsilon = 1e-12);
        let b = cgbz1_point(&p, PI / 2.0).unwrap();
        assert_abs_diff_eq!(b.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.im, 1.20062, epsilon = 1e-4);
    }

    #[test]
    fn cgbz1_large_r_limit() {
        // r -> infinity: correction factor -> 1
        let p = ModelParams::real(1e-12, 1.0, 1e-5, 60);
        let rho1 = 1e5f64.powf(1.0 / 60.0);
        for theta in [0.0, 1.0, 3.0] {
            let b = cgbz1_point(&p, theta).unwrap();
            assert!((b - C64::from_polar(rho1, theta)).norm() < 1e-10);
        }
    }

    #[test]
    fn cgbz1_map_consistency_and_orientation() {
        let p = base60();
        let c = cgbz_curve(&p, 1, 256).unwrap();
        let rho1 = 1e5f64.powf(1.0 / 60.0);
        for (b, t) in c.samples.iter().zip(&c.thetas) {
            let f = b * (1.0 - b * b / 2.0).powf(1.0 / 60.0);
            assert!((f - C64::from_polar(rho1, *t)).norm() < 1e-10);
        }
        assert_eq!(c.winding_about(c.centroid()), 1);
        assert!(point_inside(&c, C64::new(0.0, 0.0)).unwrap());
    }

    #[test]
    fn cgbz2_is_counterclockwise_and_outside_cgbz1() {
        let p = base60();
        let c1 = cgbz_curve(&p, 1, 128).unwrap();
        let c2 = cgbz_curve(&p, 2, 128).unwrap();
        assert_eq!(c2.winding_about(C64::new(0.0, 0.0)), 1);
        assert!(c2.min_modulus() > c1.max_modulus());
    }

    #[test]
    fn refinement_stability() {
        let p = base60();
        let a = cgbz_curve(&p, 1, 256).unwrap().max_modulus();
        let b = cgbz_curve(&p, 1, 512).unwrap().max_modulus();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        let p = base60();
        let t = 0.7;
        let h = 1e-6;
        let fd = (cgbz1_point(&p, t + h).unwrap() - cgbz1_point(&p, t - h).unwrap()) / (2.0 * h);
        let j = cgbz1_jacobian(&p, cgbz1_point(&p, t).unwrap());
        assert!((fd - j).norm() < 1e-8);
    }

    #[test]
    fn inside_tests() {
        let unit = circle(CurveLabel::Bz, 1.0, 64, None).unwrap();
        assert!(point_inside(&unit, C64::new(0.0, 0.0)).unwrap());
        assert!(!point_inside(&unit, C64::new(2.0, 0.0)).unwrap());
        assert!(matches!(
            point_inside(&unit, C64::new(1.0, 0.0)),
            Err(Error::OnBoundary { .. })
        ));
        let c = cgbz_curve(&base60(), 1, 256).unwrap();
        assert!(point_inside(&c, C64::new(0.0, -1.069694)).unwrap());
        assert!(!point_inside(&c, C64::new(0.0, -1.317745)).unwrap());
    }

    #[test]
    fn reversed_flips_winding() {
        let c = cgbz_curve(&base60(), 1, 64).unwrap();
        assert_eq!(c.reversed().winding_about(C64::new(0.0, 0.0)), -1);
        assert_eq!(c.reversed().reversed(), c);
    }
}
