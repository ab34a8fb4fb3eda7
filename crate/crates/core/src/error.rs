use core::fmt;

/// Errors reported by region and channel computations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument is outside its mathematical domain
    /// (non-positive distance, empty point set, ...).
    Domain(&'static str),
    /// Sizes or vector lengths are inconsistent with the declared
    /// element counts.
    Config(&'static str),
    /// A value violates a structural invariant (non-unit-modulus phase,
    /// malformed pentagon caps, non-convex polygon, ...).
    Validation(&'static str),
    /// The SDP solver hit its iteration cap before reaching the requested
    /// optimality gap. The carried value is still a certified upper bound.
    SdrNotConverged {
        /// Certified bound (linear power units) reached so far.
        bound: f64,
        /// Relative duality gap at the last iterate.
        gap: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::SdrNotConverged { bound, gap } => write!(
                f,
                "SDP solver did not reach requested gap (bound {bound:.6e}, gap {gap:.3e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
