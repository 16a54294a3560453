use thiserror::Error;

/// Every failure the library can report. The CLI maps each variant to an
/// exit code through [`Error::exit_code`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("tag mismatch: {0}")]
    TagMismatch(String),
    #[error("ground {0} has no total addition")]
    NoAddition(String),
    #[error("ground {0} has no positive order")]
    NoOrder(String),
    #[error("incompatible base valuation: {0}")]
    Incompatible(String),
    #[error("monoid completion exceeded its budget: {0}")]
    CompletionBudgetExceeded(String),
    #[error("generator mismatch: {0}")]
    GeneratorMismatch(String),
    #[error("unsupported ground: {0}")]
    UnsupportedGround(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("ground mismatch: {0}")]
    GroundMismatch(String),
    #[error("cannot invert zero")]
    ZeroInverted,
    #[error("name clash: {0}")]
    NameClash(String),
    #[error("unassigned generator: {0}")]
    UnassignedGenerator(String),
    #[error("unsupported regime: {0}")]
    RegimeUnsupported(String),
    #[error("not a valuation: {0}")]
    NotAValuation(String),
    #[error("target {0} is not idempotent")]
    NotIdempotentTarget(String),
    #[error("degree bound too small: {0}")]
    DegreeBoundTooSmall(String),
    #[error("polynomial needs at least two terms")]
    TooFewTerms,
    #[error("unsupported dimension: {0}")]
    DimensionUnsupported(String),
    #[error("enumeration bound exceeded: {0}")]
    EnumerationBoundExceeded(String),
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("point is not in the tropicalization")]
    NotInTrop,
    #[error("tie space is not linear: {0}")]
    TieSpaceNotLinear(String),
    #[error("too many generators: {0}")]
    TooManyGenerators(usize),
    #[error("spectrum is not principally covered: {0}")]
    NotPrincipallyCovered(String),
    #[error("unstable: {0}")]
    Unstable(String),
    #[error("not a monoid presentation: {0}")]
    NotAMonoid(String),
    #[error("monodromy unsupported: {0}")]
    MonodromyUnsupported(String),
    #[error("unknown verdict: {0}")]
    Unknown(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::TagMismatch(_) => "TagMismatch",
            Error::NoAddition(_) => "NoAddition",
            Error::NoOrder(_) => "NoOrder",
            Error::Incompatible(_) => "Incompatible",
            Error::CompletionBudgetExceeded(_) => "CompletionBudgetExceeded",
            Error::GeneratorMismatch(_) => "GeneratorMismatch",
            Error::UnsupportedGround(_) => "UnsupportedGround",
            Error::NotAMorphism(_) => "NotAMorphism",
            Error::GroundMismatch(_) => "GroundMismatch",
            Error::ZeroInverted => "ZeroInverted",
            Error::NameClash(_) => "NameClash",
            Error::UnassignedGenerator(_) => "UnassignedGenerator",
            Error::RegimeUnsupported(_) => "RegimeUnsupported",
            Error::NotAValuation(_) => "NotAValuation",
            Error::NotIdempotentTarget(_) => "NotIdempotentTarget",
            Error::DegreeBoundTooSmall(_) => "DegreeBoundTooSmall",
            Error::TooFewTerms => "TooFewTerms",
            Error::DimensionUnsupported(_) => "DimensionUnsupported",
            Error::EnumerationBoundExceeded(_) => "EnumerationBoundExceeded",
            Error::NotStabilized(_) => "NotStabilized",
            Error::NotInTrop => "NotInTrop",
            Error::TieSpaceNotLinear(_) => "TieSpaceNotLinear",
            Error::TooManyGenerators(_) => "TooManyGenerators",
            Error::NotPrincipallyCovered(_) => "NotPrincipallyCovered",
            Error::Unstable(_) => "Unstable",
            Error::NotAMonoid(_) => "NotAMonoid",
            Error::MonodromyUnsupported(_) => "MonodromyUnsupported",
            Error::Unknown(_) => "Unknown",
            Error::Parse(_) => "ParseError",
            Error::Invalid(_) => "ValidationError",
        }
    }

    /// 2 for malformed input, 3 for an undecided verdict, 4 for violated preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::Invalid(_)
            | Error::TagMismatch(_)
            | Error::GeneratorMismatch(_)
            | Error::NameClash(_)
            | Error::UnassignedGenerator(_) => 2,
            Error::Unknown(_) | Error::Unstable(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
