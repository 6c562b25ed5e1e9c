//! Spectral winding number of `E(beta) - omega` along a closed contour, its
//! argument-principle oracle, and the scan for the regime boundary.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curves::{self, point_inside, Curve, CurveLabel};
use crate::error::{Error, Result};
use crate::lattice::ModelParams;
use crate::roots::roots_unchecked;
use crate::C64;

const IMAGE_TOL: f64 = 1e-9;
const MAX_STEP: f64 = PI / 2.0;
const MAX_SAMPLES: usize = 1 << 16;
/// Contour resolution used by [`regime_boundary_scan`].
pub const SCAN_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingResult {
    pub value: i64,
    pub contour_label: CurveLabel,
    pub omega: C64,
    /// Largest per-segment argument increment of the accepted sampling.
    pub max_step: f64,
    pub samples_used: usize,
}

fn raw_winding(c: &Curve, p: &ModelParams, omega: C64) -> Result<(f64, f64)> {
    let image: Vec<C64> = c.samples.iter().map(|b| p.energy(*b) - omega).collect();
    let n = image.len();
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    for j in 0..n {
        let (a, b) = (image[j], image[(j + 1) % n]);
        let d = segment_origin_distance(a, b);
        if d <= IMAGE_TOL {
            return Err(Error::OmegaOnImage { distance: d });
        }
        let step = (b / a).arg();
        max_step = max_step.max(step.abs());
        total += step;
    }
    Ok((total / (2.0 * PI), max_step))
}

fn segment_origin_distance(a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = ((-a * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t).norm()
}

/// `W = (1/2 pi) sum_j darg(E(beta_{j+1}) - omega, E(beta_j) - omega)`.
///
/// When a single segment turns by `pi/2` or more, or the sum is not within
/// `1e-6` of an integer, the contour is resampled at twice the resolution.
pub fn winding_number(c: &Curve, p: &ModelParams, omega: C64) -> Result<WindingResult> {
    let mut curve = std::borrow::Cow::Borrowed(c);
    loop {
        let (w, max_step) = raw_winding(&curve, p, omega)?;
        let rounded = w.round();
        if max_step < MAX_STEP && (w - rounded).abs() < 1e-6 {
            return Ok(WindingResult {
                value: rounded as i64,
                contour_label: c.label,
                omega,
                max_step,
                samples_used: curve.len(),
            });
        }
        let m = curve.len() * 2;
        if m > MAX_SAMPLES || matches!(c.label, CurveLabel::Fgbz1 | CurveLabel::Fgbz2) {
            return Err(Error::UnresolvedWinding { max_step });
        }
        curve = std::borrow::Cow::Owned(curves::resample(c, p, m)?);
    }
}

/// Argument-principle count for `E(beta) - omega = (t1 beta^2 - omega beta + t2) / beta`:
/// roots of the quadratic inside `c` minus the pole at the origin.
pub fn winding_oracle(c: &Curve, p: &ModelParams, omega: C64) -> Result<i64> {
    let (a, b) = roots_unchecked(p, omega);
    let sign = match c.orientation {
        curves::Orientation::Counterclockwise => 1,
        curves::Orientation::Clockwise => -1,
    };
    let zeros = point_inside(c, a)? as i64 + point_inside(c, b)? as i64;
    let pole = point_inside(c, C64::new(0.0, 0.0))? as i64;
    Ok(sign * (zeros - pole))
}

/// Straight segment `origin + t direction`, `t in [0, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ray {
    #[serde(with = "crate::io::complex_pair")]
    pub origin: C64,
    #[serde(with = "crate::io::complex_pair")]
    pub direction: C64,
    pub t_max: f64,
    pub steps: usize,
}

impl Ray {
    /// `0 -> top i` on the imaginary axis.
    pub fn imaginary_axis(top: f64, steps: usize) -> Self {
        Self {
            origin: C64::new(0.0, 0.0),
            direction: C64::new(0.0, 1.0),
            t_max: top,
            steps,
        }
    }

    pub fn at(&self, t: f64) -> C64 {
        self.origin + self.direction * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeBoundary {
    pub omega_c: C64,
    pub winding_before: i64,
    pub winding_after: i64,
}

/// First change of the cGBZ1 winding number along `ray`, refined by
/// bisection to `|d omega| < 1e-6`.
pub fn regime_boundary_scan(p: &ModelParams, ray: &Ray) -> Result<RegimeBoundary> {
    let c = curves::cgbz_curve(p, 1, SCAN_SAMPLES)?;
    regime_boundary_scan_on(&c, p, ray)
}

/// As [`regime_boundary_scan`] on a given contour.
pub fn regime_boundary_scan_on(c: &Curve, p: &ModelParams, ray: &Ray) -> Result<RegimeBoundary> {
    if ray.steps == 0 || !(ray.t_max > 0.0) {
        return Err(Error::InvalidArgument(
            "ray needs t_max > 0 and steps >= 1".into(),
        ));
    }
    let w = |t: f64| winding_number(c, p, ray.at(t)).map(|r| r.value);
    let mut t_prev = 0.0;
    let mut w_prev = w(0.0)?;
    for j in 1..=ray.steps {
        let t = ray.t_max * j as f64 / ray.steps as f64;
        let w_here = match w(t) {
            Ok(v) => v,
            Err(Error::OmegaOnImage { .. }) => continue,
            Err(e) => return Err(e),
        };
        if w_here != w_prev {
            let (mut lo, mut hi) = (t_prev, t);
            let scale = ray.direction.norm();
            while (hi - lo) * scale > 1e-6 {
                let mid = 0.5 * (lo + hi);
                match w(mid) {
                    Ok(v) if v == w_prev => lo = mid,
                    Ok(_) => hi = mid,
                    Err(Error::OmegaOnImage { .. }) => {
                        lo = mid;
                        hi = mid;
                    }
                    Err(e) => return Err(e),
                }
            }
            return Ok(RegimeBoundary {
                omega_c: ray.at(0.5 * (lo + hi)),
                winding_before: w_prev,
                winding_after: w_here,
            });
        }
        t_prev = t;
        w_prev = w_here;
    }
    Err(Error::NoTransition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{cgbz_curve, standard_curves};

    fn setup() -> (ModelParams, Curve) {
        let p = ModelParams::baseline(60);
        let c = cgbz_curve(&p, 1, 256).unwrap();
        (p, c)
    }

    #[test]
    fn reference_windings() {
        let (p, c) = setup();
        assert_eq!(winding_number(&c, &p, crate::OMEGA_1).unwrap().value, -1);
        assert_eq!(winding_number(&c, &p, crate::OMEGA_2).unwrap().value, 0);
        let (bz, gbz) = standard_curves(&p, 128).unwrap();
        assert_eq!(winding_number(&gbz, &p, C64::new(0.0, 2.0)).unwrap().value, 0);
        assert_eq!(winding_oracle(&bz, &p, C64::new(0.0, 0.0)).unwrap(), -1);
    }

    #[test]
    fn oracle_reference_values() {
        let (p, c) = setup();
        assert_eq!(winding_oracle(&c, &p, crate::OMEGA_1).unwrap(), -1);
        assert_eq!(winding_oracle(&c, &p, crate::OMEGA_2).unwrap(), 0);
    }

    #[test]
    fn orientation_flip_negates() {
        let (p, c) = setup();
        let w = winding_number(&c.reversed(), &p, crate::OMEGA_1).unwrap();
        assert_eq!(w.value, 1);
        assert_eq!(winding_oracle(&c.reversed(), &p, crate::OMEGA_1).unwrap(), 1);
    }

    #[test]
    fn on_image_is_an_error() {
        let (p, c) = setup();
        let omega = p.energy(c.samples[10]);
        assert!(matches!(
            winding_number(&c, &p, omega),
            Err(Error::OmegaOnImage { .. })
        ));
    }

    #[test]
    fn coarse_sampling_is_refined() {
        let p = ModelParams::baseline(60);
        let coarse = cgbz_curve(&p, 1, 64).unwrap();
        let w = winding_number(&coarse, &p, C64::new(0.0, 0.2)).unwrap();
        let fine = cgbz_curve(&p, 1, 1024).unwrap();
        assert_eq!(
            w.value,
            winding_number(&fine, &p, C64::new(0.0, 0.2)).unwrap().value
        );
        assert!(w.max_step < MAX_STEP);
    }

    #[test]
    fn boundary_on_imaginary_axis() {
        let p = ModelParams::baseline(60);
        let b = regime_boundary_scan(&p, &Ray::imaginary_axis(0.5, 50)).unwrap();
        assert!((b.omega_c.im - 0.233).abs() < 0.01, "{:?}", b.omega_c);
        assert_eq!((b.winding_before, b.winding_after), (-1, 0));
        let none = Ray {
            origin: C64::new(0.0, 0.4),
            direction: C64::new(0.0, 1.0),
            t_max: 0.5,
            steps: 10,
        };
        assert_eq!(regime_boundary_scan(&p, &none), Err(Error::NoTransition));
    }
}
