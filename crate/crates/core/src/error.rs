use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pairs have different squared distances ({0} vs {1})")]
    DistanceMismatch(String, String),
    #[error("source pair is degenerate (a = b)")]
    DegeneratePair,
    #[error("p = ({0}, {1}) is not a unit complex number")]
    NotUnit(String, String),
    #[error("rotation by pi has no coordinates in the tan-half-angle chart")]
    ChartExcluded,
    #[error("h-parabola degenerates to a line (b = -a)")]
    DegenerateParabola,
    #[error("rotation is not incident to the parabola")]
    NotIncident,
    #[error("both parabolas are the same")]
    SameParabola,
    #[error("quadruple count {count} is not of the form k(k-1)")]
    IntegralityViolation { count: u64 },
    #[error("half-turn line pair: (1+p)*d vanishes, the special surface is undefined")]
    HalfTurnDegenerate,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("vanishing fit accepts at most {max} points, got {got}")]
    CapacityExceeded { max: usize, got: usize },
    #[error("could not find a generic frame after {0} attempts")]
    ReframeFailed(usize),
    #[error("duplicate point ({0}, {1})")]
    DuplicatePoint(String, String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
