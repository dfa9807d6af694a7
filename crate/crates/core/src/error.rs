use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid bit string {0:?}")]
    BadBitString(String),

    #[error("register of {0} qubits exceeds the supported maximum of {1}")]
    TooManyQubits(usize, usize),

    #[error("invalid excitation operator: {0}")]
    BadExcitation(String),

    #[error("odd electron count {0}: closed-shell reference required")]
    OddElectronCount(usize),

    #[error("{0} electrons do not fit in {1} orbitals")]
    TooManyElectrons(usize, usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("gate {kind} is not supported by the {target} gate set")]
    Unsupported { kind: String, target: String },

    #[error("unbound parameter {0:?}")]
    UnboundParameter(String),

    #[error("unknown parameter {0:?} in assignment")]
    UnknownParameter(String),

    #[error("synthesis failed: {0}")]
    Synthesis(String),

    #[error(
        "normalizer underflow at rotation {0}: reorder so the largest coefficient comes first"
    )]
    NormalizerUnderflow(usize),

    #[error("term cap exceeded: projected {projected} terms, cap {cap}")]
    TermCapExceeded { projected: usize, cap: usize },

    #[error("dimension {0} exceeds the dense limit {1}")]
    DimensionOverflow(usize, usize),

    #[error("numerical tolerance not reached: {0}")]
    Tolerance(String),

    #[error("cumulants are degenerate for the QCM4 formula (3c3^2 - 2c2c4 = {0:e})")]
    DegenerateCumulants(f64),

    #[error("third cumulant vanishes with nonzero variance")]
    ZeroThirdCumulant,

    #[error("time step {tau} violates the aliasing bound {bound}")]
    TimeStepTooLarge { tau: f64, bound: f64 },

    #[error("matrix is not symmetric (max deviation {0:e})")]
    NotSymmetric(f64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
