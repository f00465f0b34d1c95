use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid density: sample {index} is {value}")]
    InvalidDensity { index: usize, value: f64 },

    #[error("invalid normalization: density integrates to {integral}")]
    InvalidNormalization { integral: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("{requested} particles exceed the bound-level capacity ({max_supported} supported)")]
    Capacity {
        requested: usize,
        max_supported: usize,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("fitted exponent {exponent} is not positive")]
    NonPositiveExponent { exponent: f64 },

    #[error("slope b = {slope} is not positive; the entropic force would be repulsive")]
    Sign { slope: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("N = {n}: {source}")]
    AtParticleNumber {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn at(n: usize, source: Error) -> Self {
        Error::AtParticleNumber {
            n,
            source: Box::new(source),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
