use thiserror::Error;

/// Which axis of a Θ-grid an index range was checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Position axis `x` on `[1, a)`, modulation index `m`.
    X,
    /// Frequency axis `ξ` on `[0, 1)`, scale index `j`.
    Xi,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Xi => f.write_str("xi"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MdError {
    #[error("dilation factor must satisfy a > 1, got {0}")]
    InvalidBase(f64),

    #[error("empty or inverted index range [{min}, {max}]")]
    InvalidWindow { min: i64, max: i64 },

    #[error("grid sizes must be positive, got {n_x}x{n_xi}")]
    InvalidGrid { n_x: usize, n_xi: usize },

    #[error("argument outside its domain: {0}")]
    Domain(String),

    #[error("index range of width {width} does not fit {capacity} nodes on the {axis} axis")]
    Aliasing {
        axis: Axis,
        width: usize,
        capacity: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not a frame: min spectral density {min:e} <= tolerance {tol:e}")]
    NotAFrame { min: f64, tol: f64 },

    #[error("symbol vanishes at grid node n={node} (xi={xi})")]
    SymbolZero { node: usize, xi: f64 },

    #[error("unit-sum identity violated: max deviation {max_deviation:e} > {tol:e}")]
    UnitSumViolation { max_deviation: f64, tol: f64 },

    #[error("partition of unity violated: max deviation {max_deviation:e} > {tol:e}")]
    PartitionViolation { max_deviation: f64, tol: f64 },

    #[error("|c0| + |c1| = {value:e} at node k={node} is not bounded away from zero")]
    LowerBoundFailure { node: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, MdError>;
