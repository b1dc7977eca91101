use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("unknown marked curve `{0}`")]
    UnknownCurve(String),
    #[error("duplicate marked curve `{0}`")]
    DuplicateCurve(String),
    #[error("negative multiplicity {multiplicity} on curve `{curve}`")]
    NegativeMultiplicity { curve: String, multiplicity: i64 },
    #[error("infinitely near point: `{0}` is an exceptional curve")]
    InfinitelyNear(String),
    #[error("cover degree must be positive")]
    ZeroCoverDegree,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("not negative definite: {0}")]
    NotNegativeDefinite(String),
    #[error("singular linear system")]
    Singular,
    #[error("coefficient of `{label}` is not an integer ({value})")]
    NonIntegral { label: String, value: String },
    #[error("curve `{0}` carries no restriction group")]
    NoRestrictionGroup(String),
    #[error("curve `{curve}` has no group element for point `{label}`")]
    MissingPoint { curve: String, label: String },
    #[error("group element shape does not match the group")]
    GroupMismatch,
    #[error("wrong surface shape: {0}")]
    WrongShape(String),
    #[error("criterion precondition failed: {0}")]
    Precondition(String),
    #[error("nef/volume evidence rejected: {0}")]
    Evidence(String),
    #[error("decomposition identity fails: {0}")]
    IdentityFails(String),
    #[error("required degree not positive: {0}")]
    DegreeNotPositive(String),
    #[error("pair is not generalised log canonical: {0}")]
    NotLogCanonical(String),
    #[error("class is not orthogonal to contracted curve `{0}`")]
    NotOrthogonal(String),
    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("search bound {0} exhausted without certificate")]
    BoundExceeded(u64),
}
