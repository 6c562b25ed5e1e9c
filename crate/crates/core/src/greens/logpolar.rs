//! Complex numbers stored as `(ln |z|, arg z)` so that products of large
//! powers neither overflow nor underflow.

use std::ops::{Div, Mul, Neg};

use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogC {
    pub ln_abs: f64,
    pub arg: f64,
}

impl LogC {
    pub const ZERO: LogC = LogC {
        ln_abs: f64::NEG_INFINITY,
        arg: 0.0,
    };
    pub const ONE: LogC = LogC {
        ln_abs: 0.0,
        arg: 0.0,
    };

    pub fn from_c64(z: C64) -> Self {
        if z.norm() == 0.0 {
            return Self::ZERO;
        }
        Self {
            ln_abs: z.norm().ln(),
            arg: z.arg(),
        }
    }

    pub fn to_c64(self) -> C64 {
        if self.ln_abs == f64::NEG_INFINITY {
            return C64::new(0.0, 0.0);
        }
        C64::from_polar(self.ln_abs.exp(), self.arg)
    }

    pub fn is_zero(self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    pub fn powi(self, n: i64) -> Self {
        if self.is_zero() {
            return if n == 0 { Self::ONE } else { Self::ZERO };
        }
        Self {
            ln_abs: self.ln_abs * n as f64,
            arg: wrap(self.arg * n as f64),
        }
    }

    pub fn log10_abs(self) -> f64 {
        self.ln_abs / std::f64::consts::LN_10
    }

    /// Sum of terms, scaled by the largest modulus before adding.
    pub fn sum(terms: &[LogC]) -> LogC {
        let m = terms.iter().map(|t| t.ln_abs).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let s: C64 = terms
            .iter()
            .filter(|t| !t.is_zero())
            .map(|t| C64::from_polar((t.ln_abs - m).exp(), t.arg))
            .sum();
        let mut out = Self::from_c64(s);
        out.ln_abs += m;
        out
    }
}

fn wrap(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let w = a.rem_euclid(two_pi);
    if w > std::f64::consts::PI {
        w - two_pi
    } else {
        w
    }
}

impl Mul for LogC {
    type Output = LogC;
    fn mul(self, o: LogC) -> LogC {
        if self.is_zero() || o.is_zero() {
            return Self::ZERO;
        }
        LogC {
            ln_abs: self.ln_abs + o.ln_abs,
            arg: wrap(self.arg + o.arg),
        }
    }
}

impl Div for LogC {
    type Output = LogC;
    fn div(self, o: LogC) -> LogC {
        if self.is_zero() {
            return Self::ZERO;
        }
        LogC {
            ln_abs: self.ln_abs - o.ln_abs,
            arg: wrap(self.arg - o.arg),
        }
    }
}

impl Neg for LogC {
    type Output = LogC;
    fn neg(self) -> LogC {
        LogC {
            ln_abs: self.ln_abs,
            arg: wrap(self.arg + std::f64::consts::PI),
        }
    }
}

impl From<C64> for LogC {
    fn from(z: C64) -> Self {
        Self::from_c64(z)
    }
}
