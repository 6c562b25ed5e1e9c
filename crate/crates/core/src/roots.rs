//! Roots of the bulk equation `E(beta) = t1 beta + t2 / beta = omega`, i.e.
//! `t1 beta^2 - omega beta + t2 = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::ModelParams;
use crate::C64;

/// Relative modulus difference below which two roots count as equal in
/// modulus and are ordered by argument instead.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochRoots {
    /// Smaller-modulus root.
    pub beta_a: C64,
    pub beta_b: C64,
    pub omega: C64,
    /// `omega^2 - 4 t1 t2`.
    pub discriminant: C64,
}

/// Both roots of the bulk equation, ordered by modulus with ties broken by
/// ascending principal argument.
pub fn bloch_roots(p: &ModelParams, omega: C64) -> Result<BlochRoots> {
    let disc = omega * omega - 4.0 * p.t1 * p.t2;
    let scale = (omega * omega).norm().max((4.0 * p.t1 * p.t2).norm());
    if disc.norm() <= 1e-14 * scale {
        return Err(Error::DegenerateRoots {
            re: omega.re,
            im: omega.im,
        });
    }
    let (beta_a, beta_b) = raw_roots(p, omega, disc);
    Ok(BlochRoots {
        beta_a,
        beta_b,
        omega,
        discriminant: disc,
    })
}

/// Ordered roots without the degeneracy check.
pub fn roots_unchecked(p: &ModelParams, omega: C64) -> (C64, C64) {
    let disc = omega * omega - 4.0 * p.t1 * p.t2;
    raw_roots(p, omega, disc)
}

fn raw_roots(p: &ModelParams, omega: C64, disc: C64) -> (C64, C64) {
    let s = disc.sqrt();
    // avoid cancellation: take the sum with the larger modulus
    let q = if (omega + s).norm() >= (omega - s).norm() {
        omega + s
    } else {
        omega - s
    };
    let big = q / (2.0 * p.t1);
    let small = p.t2 / (p.t1 * big);
    order_pair(small, big)
}

/// Orders two roots by modulus, ties broken by ascending argument.
pub fn order_pair(x: C64, y: C64) -> (C64, C64) {
    let (mx, my) = (x.norm(), y.norm());
    if (mx - my).abs() <= TIE_TOLERANCE * mx.max(my) {
        if x.arg() <= y.arg() {
            (x, y)
        } else {
            (y, x)
        }
    } else if mx < my {
        (x, y)
    } else {
        (y, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn baseline_roots() {
        let p = ModelParams::baseline(60);
        let r = bloch_roots(&p, C64::new(0.0, 0.1)).unwrap();
        assert_abs_diff_eq!(r.beta_a.im, -1.317745, epsilon = 1e-6);
        assert_abs_diff_eq!(r.beta_b.im, 1.517745, epsilon = 1e-6);
        assert_abs_diff_eq!(r.discriminant.re, -2.01, epsilon = 1e-14);

        let r = bloch_roots(&p, C64::new(0.0, 0.4)).unwrap();
        assert_abs_diff_eq!(r.beta_a.im, -1.069694, epsilon = 1e-6);
        assert_abs_diff_eq!(r.beta_b.im, 1.869694, epsilon = 1e-6);
        assert_abs_diff_eq!(r.discriminant.re, -2.16, epsilon = 1e-14);
    }

    #[test]
    fn symmetric_case_tie_break() {
        let p = ModelParams::baseline(60);
        let r = bloch_roots(&p, C64::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(r.beta_a.im, -2f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.beta_b.im, 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn roots_satisfy_equation_and_vieta() {
        let p = ModelParams::baseline(60);
        for omega in [C64::new(0.3, -0.2), C64::new(0.0, 2.8), C64::new(-5.0, 1e-3)] {
            let r = bloch_roots(&p, omega).unwrap();
            for b in [r.beta_a, r.beta_b] {
                let f = p.t1 * b * b - omega * b + p.t2;
                assert!(f.norm() < 1e-12 * (1.0 + b.norm_sqr()));
            }
            assert!((r.beta_a * r.beta_b - p.r2()).norm() < 1e-12);
            assert!(r.beta_a.norm() <= r.beta_b.norm());
        }
    }

    #[test]
    fn branch_point_is_degenerate() {
        let p = ModelParams::baseline(60);
        let e0 = 2.0 * (0.5f64).sqrt();
        assert!(matches!(
            bloch_roots(&p, C64::new(e0, 0.0)),
            Err(Error::DegenerateRoots { .. })
        ));
    }
}
