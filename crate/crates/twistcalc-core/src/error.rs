//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("operand must be a pure coordinate polynomial (no form/derivative factors): {0}")]
    NotPolynomial(String),

    #[error("operator must not carry form factors: {0}")]
    FormFactor(String),

    #[error("form degree {p} exceeds dimension {n}")]
    DegreeOutOfRange { p: u32, n: usize },

    #[error("series did not terminate within safety cap {cap} (set TWISTCALC_SAFETY_CAP to raise)")]
    SafetyCap { cap: u32 },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("family `{family}` has no twist `{twist}`")]
    UnknownTwist { family: String, twist: String },

    #[error("parameter `{name}` = {value} must be a square of a rational (bind e.g. {name}=1)")]
    NonSquareParam { name: String, value: String },

    #[error("parameter `{name}` must be bound for this operation")]
    UnboundParam { name: String },

    #[error("invalid parameter binding `{0}` (expected name=rational, e.g. a=1 or c=-1/2)")]
    BadParamBinding(String),

    #[error("parameter `{name}` violates family constraint: {constraint}")]
    ParamConstraint { name: String, constraint: String },

    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },

    #[error("catalog format error at line {line}: {msg}")]
    Catalog { line: usize, msg: String },

    #[error("operation requires the {0} chart for this family")]
    WrongChart(String),

    #[error("diagonal twist leg `{0}` does not act diagonally on this element")]
    NotDiagonal(String),

    #[error("non-integer phase exponent from diagonal twist (eigenvalue pairing {0})")]
    FractionalPhase(String),

    #[error("normal projection undefined: {0}")]
    ProjectionUndefined(String),

    #[error("element is not a vector field (needs derivative degree 1, form degree 0): {0}")]
    NotVectorField(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
