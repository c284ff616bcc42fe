use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("symbol `{name}` is not finite at wavenumber {wavenumber}")]
    NonFiniteSymbol { name: String, wavenumber: f64 },

    #[error("symbol `{0}` is not Hermitian on the grid and cannot act on a real field")]
    NonHermitianSymbol(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("strip solve did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("inverse of Id+G did not converge after {iterations} iterations (last increment {residual:.3e})")]
    InverseNotConverged { iterations: usize, residual: f64 },

    #[error("Picard iteration failed to contract; iterate distances {distances:?}")]
    PicardNotContracting { distances: Vec<f64> },

    #[error("L2 guard tripped at t = {t}: |U|_L2 = {norm:.6e} exceeds {guard:.6e}")]
    GuardTripped { t: f64, norm: f64, guard: f64 },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SolverDiverged { .. }
                | Error::InverseNotConverged { .. }
                | Error::PicardNotContracting { .. }
                | Error::NonFinite(_)
        )
    }
}
