use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("delta {0} lies outside (1/3, 5/8]")]
    DeltaOutOfRange(String),
    #[error("cannot parse `{0}` as a rational")]
    ParseRational(String),
    #[error("dyadic series diverges for alpha = {0}")]
    Divergent(String),
    #[error("projector direction is zero")]
    DegenerateProjector,
    #[error("degenerate window [{lo}, {hi}]")]
    DegenerateWindow { lo: f64, hi: f64 },
    #[error("horizon {horizon} is shorter than the window scale {scale}")]
    HorizonTooShort { horizon: f64, scale: f64 },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("tiles do not form a rank-4 pair")]
    NotRank4,
    #[error("dyad {dyad} is not representable on a {grid}^3 grid")]
    DyadTooLarge { dyad: u32, grid: usize },
    #[error("dyad {0} is not a power of two")]
    NotDyadic(u32),
    #[error("zone masks need the direct method")]
    MaskNeedsDirect,
    #[error("CFL violation: dt = {dt} exceeds {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("grid sizes differ: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
