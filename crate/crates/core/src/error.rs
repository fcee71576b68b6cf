use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant maps to a stable machine-readable code via [`Error::code`],
/// which the command-line front end embeds in its JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative input to integer square root")]
    NegativeInput,
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("prime bound must be at least 3")]
    BoundTooSmall,
    #[error("prime sampling failed after {attempts} attempts")]
    SamplingFailed { attempts: u64 },

    #[error("precision {precision} is smaller than the {needed} coefficients supplied")]
    PrecisionTooSmall { precision: usize, needed: usize },
    #[error("precision must be at least {needed}, got {precision}")]
    InsufficientPrecision { precision: usize, needed: usize },
    #[error("divisor vanishes within the known precision")]
    DivisionIndeterminate,
    #[error("quotient has negative powers of x")]
    QuotientNotPowerSeries,
    #[error("constant term is not a nonzero rational square")]
    NotSquareConstantTerm,
    #[error("constant term must be zero")]
    NonzeroConstantTerm,
    #[error("constant term must be one")]
    NonUnitConstantTerm,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,

    #[error("family is rank deficient within precision (member {index} vanished)")]
    RankDeficientWithinPrecision { index: usize },
    #[error("result is indeterminate at the current precision; raise precision")]
    Indeterminate,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: register {register} referenced before definition")]
    ForwardReference { line: usize, register: usize },
    #[error("line {line}: unknown opcode {opcode:?}")]
    UnknownOpcode { line: usize, opcode: String },
    #[error("instruction {instruction} exceeds the bit limit {limit}")]
    BitLimitExceeded { instruction: usize, limit: u64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(String),
    #[error("{0} is a perfect square")]
    PerfectSquare(String),

    #[error("sum A = sum c_i d_i is nonzero; the S_j analysis applies only when A = 0")]
    WrongBranch,
    #[error("certified evaluation could not separate the value from zero")]
    Unresolved,
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

impl Error {
    /// Stable identifier used in JSON reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NegativeInput => "negative_input",
            Error::ModulusTooSmall => "modulus_too_small",
            Error::BoundTooSmall => "bound_too_small",
            Error::SamplingFailed { .. } => "sampling_failed",
            Error::PrecisionTooSmall { .. } => "precision_too_small",
            Error::InsufficientPrecision { .. } => "insufficient_precision",
            Error::DivisionIndeterminate => "division_indeterminate",
            Error::QuotientNotPowerSeries => "quotient_not_power_series",
            Error::NotSquareConstantTerm => "not_square_constant_term",
            Error::NonzeroConstantTerm => "nonzero_constant_term",
            Error::NonUnitConstantTerm => "non_unit_constant_term",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::EmptyInput => "empty_input",
            Error::RankDeficientWithinPrecision { .. } => "rank_deficient_within_precision",
            Error::Indeterminate => "indeterminate",
            Error::InvalidInstance(_) => "invalid_instance",
            Error::Parse { .. } => "parse_error",
            Error::ForwardReference { .. } => "forward_reference",
            Error::UnknownOpcode { .. } => "unknown_opcode",
            Error::BitLimitExceeded { .. } => "bit_limit_exceeded",
            Error::NotOddPrime(_) => "not_odd_prime",
            Error::PerfectSquare(_) => "perfect_square",
            Error::WrongBranch => "wrong_branch",
            Error::Unresolved => "unresolved",
            Error::Degenerate(_) => "degenerate",
        }
    }

    /// True for outcomes that more precision or a smaller instance might resolve.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::Indeterminate
                | Error::Unresolved
                | Error::BitLimitExceeded { .. }
                | Error::DivisionIndeterminate
                | Error::RankDeficientWithinPrecision { .. }
                | Error::InsufficientPrecision { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
