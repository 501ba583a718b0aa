use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("outside the physical domain: {0}")]
    Domain(String),

    #[error("velocities {0:?} and {1:?} are not collinear")]
    NonCollinear([f64; 3], [f64; 3]),

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("state is not normalised (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not a density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("size limit exceeded: {what} = {got} > {limit}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("spin state does not factorise from the momentum distribution")]
    NotFactorized,

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
