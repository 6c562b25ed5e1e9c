//! Hatano-Nelson chain: parameters, boundary conditions and Hamiltonian
//! construction.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = sum_{n=1}^{N-1} (t1 a_n^+ a_{n+1} + t2 a_{n+1}^+ a_n) + delta a_1^+ a_N + delta a_N^+ a_1
//! ```
//!
//! so that in matrix form `H[n][n+1] = t1` and `H[n+1][n] = t2`. Site labels
//! in every public interface run from 1 to N; the dense matrices returned here
//! are ordinary zero-based `nalgebra` matrices.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Physical specification of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    #[serde(with = "crate::io::complex_pair")]
    pub t1: C64,
    #[serde(with = "crate::io::complex_pair")]
    pub t2: C64,
    #[serde(with = "crate::io::complex_pair")]
    pub delta: C64,
    pub n_sites: usize,
}

impl ModelParams {
    pub fn new(t1: C64, t2: C64, delta: C64, n_sites: usize) -> Self {
        Self {
            t1,
            t2,
            delta,
            n_sites,
        }
    }

    /// Real hoppings and corner coupling.
    pub fn real(t1: f64, t2: f64, delta: f64, n_sites: usize) -> Self {
        Self::new(
            C64::new(t1, 0.0),
            C64::new(t2, 0.0),
            C64::new(delta, 0.0),
            n_sites,
        )
    }

    /// `t1 = 0.5`, `t2 = 1`, `delta = 1e-5`.
    pub fn baseline(n_sites: usize) -> Self {
        Self::real(0.5, 1.0, 1e-5, n_sites)
    }

    pub fn with_sites(self, n_sites: usize) -> Self {
        Self { n_sites, ..self }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self {
            delta: C64::new(delta, 0.0),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a1, a2) = (self.t1.norm(), self.t2.norm());
        if !(a1.is_finite() && a2.is_finite() && self.delta.norm().is_finite()) {
            return Err(Error::InvalidArgument("non-finite model parameter".into()));
        }
        if a1 == 0.0 || a2 == 0.0 {
            return Err(Error::NonPositiveHopping { t1: a1, t2: a2 });
        }
        if a2 <= a1 {
            return Err(Error::OrderingViolated { t1: a1, t2: a2 });
        }
        if self.n_sites < 3 {
            return Err(Error::TooFewSites(self.n_sites));
        }
        Ok(())
    }

    /// `r^2 = t2 / t1`.
    pub fn r2(&self) -> C64 {
        self.t2 / self.t1
    }

    /// Principal square root of `t2 / t1`; the radius of the GBZ.
    pub fn r(&self) -> C64 {
        self.r2().sqrt()
    }

    /// Bulk dispersion `E(beta) = t1 beta + t2 / beta`.
    pub fn energy(&self, beta: C64) -> C64 {
        self.t1 * beta + self.t2 / beta
    }

    /// Chain length above which the finite-size roots detach from the GBZ,
    /// `|ln(t2/delta) / ln r|`.
    pub fn critical_length(&self) -> Result<f64> {
        if self.delta.norm() == 0.0 {
            return Err(Error::ZeroDelta);
        }
        Ok(((self.t2 / self.delta).norm().ln() / self.r().norm().ln()).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Obc,
    Pbc,
    Pobc,
}

impl BoundaryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryKind::Obc => "obc",
            BoundaryKind::Pbc => "pbc",
            BoundaryKind::Pobc => "pobc",
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "obc" => Ok(BoundaryKind::Obc),
            "pbc" => Ok(BoundaryKind::Pbc),
            "pobc" => Ok(BoundaryKind::Pobc),
            other => Err(Error::InvalidArgument(format!("unknown boundary `{other}`"))),
        }
    }
}

/// The JSON parameter block `{"t1": [re, im], "t2": .., "delta": .., "n_sites": N, "boundary": ".."}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamBlock {
    #[serde(with = "crate::io::complex_pair")]
    pub t1: C64,
    #[serde(with = "crate::io::complex_pair")]
    pub t2: C64,
    #[serde(with = "crate::io::complex_pair")]
    pub delta: C64,
    pub n_sites: usize,
    pub boundary: BoundaryKind,
}

impl ParamBlock {
    pub fn new(params: ModelParams, boundary: BoundaryKind) -> Self {
        Self {
            t1: params.t1,
            t2: params.t2,
            delta: params.delta,
            n_sites: params.n_sites,
            boundary,
        }
    }

    pub fn params(&self) -> ModelParams {
        ModelParams::new(self.t1, self.t2, self.delta, self.n_sites)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisorderTarget {
    /// Every t1 and t2 bond, independently. The corner coupling is untouched.
    Hoppings,
    /// Diagonal entries.
    Onsite,
    /// Both corner entries, independently. Changes the scale-free value 1/delta directly.
    Corner,
}

impl DisorderTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            DisorderTarget::Hoppings => "hoppings",
            DisorderTarget::Onsite => "onsite",
            DisorderTarget::Corner => "corner",
        }
    }
}

/// Uniform disorder `U(-w, w)` on one class of matrix elements.
///
/// Trial `i` of seed `s` draws from ChaCha8 keyed by `s` (expanded to 256
/// bits by `seed_from_u64`) on stream `i`. Every trial is therefore an
/// independent counter-addressed stream and ensembles do not depend on the
/// order in which trials are evaluated. This derivation is fixed; changing it
/// changes every published ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSpec {
    pub target: DisorderTarget,
    pub half_width: f64,
    pub seed: u64,
}

impl DisorderSpec {
    pub fn new(target: DisorderTarget, half_width: f64, seed: u64) -> Self {
        Self {
            target,
            half_width,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width.is_finite() && self.half_width >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "disorder half width must be finite and >= 0, got {}",
                self.half_width
            )));
        }
        Ok(())
    }

    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }

    /// Adds one realization to `h` in place. Draws are taken in site order:
    /// diagonal `n = 1..N` for on-site disorder; for hoppings the pair
    /// `(n, n+1)` then `(n+1, n)` for `n = 1..N-1`; for the corner `(1, N)`
    /// then `(N, 1)`.
    pub fn apply(&self, h: &mut DMatrix<C64>, trial: u64) {
        let n = h.nrows();
        let w = self.half_width;
        let mut rng = self.trial_rng(trial);
        let mut draw = move || w * (2.0 * rng.random::<f64>() - 1.0);
        match self.target {
            DisorderTarget::Onsite => {
                for i in 0..n {
                    h[(i, i)] += draw();
                }
            }
            DisorderTarget::Hoppings => {
                for i in 0..n.saturating_sub(1) {
                    h[(i, i + 1)] += draw();
                    h[(i + 1, i)] += draw();
                }
            }
            DisorderTarget::Corner => {
                if n >= 2 {
                    h[(0, n - 1)] += draw();
                    h[(n - 1, 0)] += draw();
                }
            }
        }
    }
}

/// Dense Hamiltonian of the chain. `disorder`, when present, adds trial 0 of
/// the given ensemble.
pub fn build_hamiltonian(
    p: &ModelParams,
    bc: BoundaryKind,
    disorder: Option<&DisorderSpec>,
) -> Result<DMatrix<C64>> {
    match disorder {
        Some(spec) => build_hamiltonian_trial(p, bc, spec, 0),
        None => {
            p.validate()?;
            Ok(clean_matrix(p, bc))
        }
    }
}

/// Dense Hamiltonian with trial `trial` of the disorder ensemble `spec`.
pub fn build_hamiltonian_trial(
    p: &ModelParams,
    bc: BoundaryKind,
    spec: &DisorderSpec,
    trial: u64,
) -> Result<DMatrix<C64>> {
    p.validate()?;
    spec.validate()?;
    let mut h = clean_matrix(p, bc);
    spec.apply(&mut h, trial);
    Ok(h)
}

fn clean_matrix(p: &ModelParams, bc: BoundaryKind) -> DMatrix<C64> {
    let n = p.n_sites;
    let mut h = DMatrix::<C64>::zeros(n, n);
    for i in 0..n - 1 {
        h[(i, i + 1)] = p.t1;
        h[(i + 1, i)] = p.t2;
    }
    let (upper, lower) = match bc {
        BoundaryKind::Obc => (C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        BoundaryKind::Pobc => (p.delta, p.delta),
        // a_1^+ a_N closes the t2 bond, a_N^+ a_1 the t1 bond
        BoundaryKind::Pbc => (p.t2, p.t1),
    };
    h[(0, n - 1)] += upper;
    h[(n - 1, 0)] += lower;
    h
}
