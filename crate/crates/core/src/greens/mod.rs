//! Green's function `G(omega) = (omega - H)^{-1}`: exact finite-N values,
//! the contour expansion over boundary-effect orders `q`, closed forms and
//! crossover analysis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::BoundaryKind;
use crate::C64;

pub mod analytic;
pub mod crossover;
pub mod logpolar;
pub mod numeric;

/// One entry `G_{k,l}(omega)`: response at site `k` to excitation at site `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenQuery {
    pub k: usize,
    pub l: usize,
    pub omega: C64,
}

impl GreenQuery {
    pub fn new(k: usize, l: usize, omega: C64) -> Self {
        Self { k, l, omega }
    }

    pub fn check(&self, n_sites: usize) -> Result<()> {
        for site in [self.k, self.l] {
            if site == 0 || site > n_sites {
                return Err(Error::SiteOutOfRange { site, n_sites });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Numeric,
    ClosedForm,
    /// One contour term of order `q`.
    ContourQ(i32),
    /// One retained term of a closed form.
    ClosedFormTerm(DominantTerm),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Numeric => f.write_str("numeric"),
            Method::ClosedForm => f.write_str("closed_form"),
            Method::ContourQ(q) => write!(f, "contour_q{q}"),
            Method::ClosedFormTerm(DominantTerm::Q(q)) => write!(f, "closed_form_q{q}"),
            Method::ClosedFormTerm(DominantTerm::Correction) => f.write_str("closed_form_r"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// cGBZ1 winding -1: both roots outside cGBZ1.
    Nontrivial,
    /// cGBZ1 winding 0: `beta_a` inside, `beta_b` outside.
    Trivial,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Nontrivial => "nontrivial",
            Regime::Trivial => "trivial",
        }
    }

    pub fn winding(self) -> i64 {
        match self {
            Regime::Nontrivial => -1,
            Regime::Trivial => 0,
        }
    }
}

/// Which analytic term is largest in magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DominantTerm {
    /// Contour term of order `q`.
    Q(i32),
    /// First-order-in-delta correction to the `q = 0` term.
    Correction,
}

impl fmt::Display for DominantTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DominantTerm::Q(q) => write!(f, "{q}"),
            DominantTerm::Correction => f.write_str("r"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenResult {
    pub query: GreenQuery,
    pub n_sites: usize,
    pub boundary: BoundaryKind,
    pub value: C64,
    pub method: Method,
    pub regime: Option<Regime>,
    /// 1-norm condition estimate of `omega - H`; numeric results only.
    pub cond_estimate: Option<f64>,
    pub dominant: Option<DominantTerm>,
}

impl GreenResult {
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    pub fn log10_abs(&self) -> f64 {
        self.value.norm().log10()
    }
}

/// Which end-to-end entry a sweep reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointRule {
    /// `G_{N,1}`: excite site 1, observe site N.
    #[serde(rename = "N,1")]
    LastFirst,
    /// `G_{1,N}`: excite site N, observe site 1.
    #[serde(rename = "1,N")]
    FirstLast,
}

impl EndpointRule {
    /// `(k, l)` for a chain of `n` sites.
    pub fn sites(self, n: usize) -> (usize, usize) {
        match self {
            EndpointRule::LastFirst => (n, 1),
            EndpointRule::FirstLast => (1, n),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EndpointRule::LastFirst => "N,1",
            EndpointRule::FirstLast => "1,N",
        }
    }
}

impl FromStr for EndpointRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace(' ', "").as_str() {
            "N,1" | "(N,1)" => Ok(EndpointRule::LastFirst),
            "1,N" | "(1,N)" => Ok(EndpointRule::FirstLast),
            other => Err(Error::InvalidArgument(format!("unknown endpoint rule `{other}`"))),
        }
    }
}
