use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree {degree} of variable X{var} exceeds the bound {bound}")]
    DegreeBound { var: usize, degree: u32, bound: u32 },

    #[error("index j={j} out of range 0..={n}")]
    IndexOutOfRange { j: u32, n: u32 },

    #[error("denominator certificate failed at j={j:?}, s={s:?}: d_n^{exponent} * C is not an integer")]
    Certificate {
        j: Vec<u32>,
        s: Vec<u32>,
        exponent: u32,
    },

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("n = {0} is odd; the symmetric pipeline only supports even n")]
    OddN(u32),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("divergent word {0} cannot be evaluated")]
    Divergent(String),

    #[error("shift must be positive to step down (slot {0})")]
    ZeroShift(usize),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
