use thiserror::Error;

/// Errors raised by the numerical pipeline.
///
/// Every variant is a hard stop: nothing downstream tries to recover from a
/// non-finite intermediate or a failed construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid precision: {0}")]
    Precision(String),

    #[error("gamma function pole at {0}")]
    Pole(String),

    #[error("non-finite intermediate in {0}")]
    NonFinite(&'static str),

    #[error("point {point} lies within {resolution:e} of the branch cut")]
    OnCut { point: String, resolution: f64 },

    #[error("moment functional is degenerate: monic orthogonal polynomial of degree {index} does not exist at working precision")]
    DegenerateFunctional { index: usize },

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("ill-conditioned solve: lost {lost_digits:.1} digits with only {guard_digits} guard digits available")]
    IllConditioned { lost_digits: f64, guard_digits: u32 },

    #[error("trajectory trace diverged after arc length {arc_length:.4} (budget {budget:.4})")]
    TraceDiverged { arc_length: f64, budget: f64 },

    #[error("point {point} lies outside the disk of radius {radius} around the endpoint")]
    OutsideDisk { point: String, radius: f64 },

    #[error("point {point} is not in the region required by {formula}")]
    Region { point: String, formula: &'static str },

    #[error("descent path leaves the declared analyticity radius {radius} at {point}")]
    AnalyticityBudget { point: String, radius: f64 },

    #[error("all {count} error samples are below the oracle noise floor")]
    NoiseFloor { count: usize },

    #[error("atoms {first} and {second} coincide")]
    CoincidentAtoms { first: usize, second: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
