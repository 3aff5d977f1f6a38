use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("points are collinear or not distinct")]
    CollinearPoints,
    #[error("degenerate object: {0}")]
    Degenerate(&'static str),
    #[error("{subsets} probe subsets exceed the budget of {budget}")]
    ProbeTooLarge { subsets: u128, budget: u128 },
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("m = {m} is below the partition base a'·n^(1/k)")]
    BelowBase { m: u64 },
    #[error("calibration suite is empty")]
    EmptySuite,
    #[error("series has no two distinct x values")]
    DegenerateSeries,
    #[error("curve {0} lies inside a partition plane")]
    CurveOnZeroSet(usize),
    #[error("the two points coincide")]
    CoincidentPoints,
    #[error("triangle shape is degenerate")]
    DegenerateShape,
    #[error("inversion pole lies on an input point or curve")]
    PoleOnObject,
    #[error("gave up after {0} degenerate samples")]
    ExhaustedRetries(usize),
    #[error("curve set mixes lines and circles")]
    MixedCurves,
}
