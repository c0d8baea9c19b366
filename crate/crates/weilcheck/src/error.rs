use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero element where a unit was required")]
    ZeroElement,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("elements belong to different ground fields")]
    FieldMismatch,
    #[error("odd rank {0} where an even-rank form was required")]
    OddRank(usize),
    #[error("degenerate quadratic form")]
    DegenerateForm,
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("rank {0} exceeds the supported maximum of 4")]
    RankTooLarge(usize),
    #[error("isotropic vector has no reflection")]
    IsotropicVector,
    #[error("unsupported root datum type: {0}")]
    UnsupportedType(String),
    #[error("form is not integral on the lattice")]
    NotIntegral,
    #[error("ell = {0} is not prime")]
    EllNotPrime(i64),
    #[error("ell = {0} vanishes in the ground field")]
    EllZeroInField(i64),
    #[error("wrong characteristic: {0}")]
    WrongCharacteristic(String),
    #[error("cocycle obstructed: {0}")]
    Obstructed(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("Gauss sum {re:.9}+{im:.9}i is not within tolerance of a fourth root of unity")]
    SnapFailure { re: f64, im: f64 },
    #[error("Gauss sum did not stabilize: phases {0:?} and {1:?}")]
    NotStabilized((f64, f64), (f64, f64)),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
