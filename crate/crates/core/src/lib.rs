//! Green's functions, spectra and generalized Brillouin zones of the
//! Hatano-Nelson chain with a weak corner coupling.
//!
//! The chain has hoppings `t1` (left) and `t2` (right), `|t2| > |t1|`, and a
//! corner coupling `delta` between sites 1 and N. Under open boundaries the
//! end-to-end response grows like `beta^N`; with `delta > 0` and large enough
//! N it saturates at a size-independent value such as `1/delta`.
//!
//! The crate is organised around runnable examples, one per capability:
//!
//! | example | what it does |
//! |---|---|
//! | `spectrum` | PBC/OBC spectra, pOBC eigenvalues with root pairs, the bifurcation at `N_c` |
//! | `curves` | BZ, GBZ, rGBZ circles and the cGBZ curves |
//! | `winding` | winding numbers on cGBZ1 and the regime boundary `omega_c` |
//! | `size_sweep` | exact `G_{N,1}` and `G_{1,N}` against chain length |
//! | `frequency_sweep` | `|G|` along the imaginary axis and the steepest-slope point |
//! | `analytic` | closed forms, contour expansion terms and crossover distances |
//! | `disorder` | Monte Carlo relative-error statistics |
//! | `run_config` | drive a JSON experiment config and write CSV artifacts |
//!
//! Run any of them with `cargo run --release --example <name>`.
//!
//! Site labels are 1-based everywhere in the public API.
//!
//! ```
//! use respond::{ModelParams, C64};
//! use respond::greens::numeric::green_entry;
//! use respond::lattice::BoundaryKind;
//!
//! let p = ModelParams::baseline(100);
//! let g = green_entry(&p, BoundaryKind::Pobc, None, C64::new(0.0, 0.1), 100, 1).unwrap();
//! assert!((g.value.norm() * 1e-5 - 1.0).abs() < 1e-3);
//! ```

// `!(x < limit)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod disorder;
pub mod error;
pub mod greens;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod roots;
pub mod spectra;
pub mod winding;

pub use error::{Error, Result};
pub use lattice::{BoundaryKind, DisorderSpec, DisorderTarget, ModelParams};

pub type C64 = num_complex::Complex64;

/// `omega_1 = 0.1i`, deep in the amplifying regime of the baseline chain.
pub const OMEGA_1: C64 = C64::new(0.0, 0.1);
/// `omega_2 = 0.4i`, in the suppressing regime of the baseline chain.
pub const OMEGA_2: C64 = C64::new(0.0, 0.4);
