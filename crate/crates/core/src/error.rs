use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hopping amplitudes must be nonzero (|t1| = {t1}, |t2| = {t2})")]
    NonPositiveHopping { t1: f64, t2: f64 },

    #[error("hopping ordering violated: need |t2| > |t1|, got |t1| = {t1}, |t2| = {t2}")]
    OrderingViolated { t1: f64, t2: f64 },

    #[error("chain needs at least 3 sites, got {0}")]
    TooFewSites(usize),

    #[error("site index {site} outside 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root count mismatch: {found} roots from the characteristic polynomial, {expected} expected ({detail})")]
    RootCountMismatch {
        found: usize,
        expected: usize,
        detail: String,
    },

    #[error("iteration failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("bulk equation has a double root at E = {re} + {im}i")]
    DegenerateRoots { re: f64, im: f64 },

    #[error("corner coupling is zero; quantity is undefined")]
    ZeroDelta,

    #[error("point lies on the contour (distance {distance:e})")]
    OnBoundary { distance: f64 },

    #[error("frequency lies on the energy image of the contour (distance {distance:e})")]
    OmegaOnImage { distance: f64 },

    #[error("winding number unresolved: largest argument step {max_step} rad after refinement")]
    UnresolvedWinding { max_step: f64 },

    #[error("winding number does not change along the ray")]
    NoTransition,

    #[error("resolvent is near singular (1-norm condition estimate {cond:e})")]
    NearSingular { cond: f64 },

    #[error("contour quadrature did not converge with {samples} samples (last change {change:e})")]
    QuadratureNonConvergent { samples: usize, change: f64 },

    #[error("Bloch roots are in an unclassified inside/outside configuration (beta_a inside: {a_inside}, beta_b inside: {b_inside})")]
    UnclassifiedConfiguration { a_inside: bool, b_inside: bool },

    #[error("no kink: a single slope explains the data")]
    NoKink,

    #[error("clean Green's function entry is zero")]
    CleanValueZero,
}
