use thiserror::Error;

/// Errors raised by the measure, algebra, function-space, partial-map and
/// signal layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier labels must be strictly increasing")]
    UnsortedCarrier,
    #[error("carrier has {0} points; at most {max} are supported", max = crate::measure::MAX_POINTS)]
    CarrierTooLarge(usize),
    #[error("point {0} is not in the carrier")]
    UnknownPoint(i64),
    #[error("family is not a sigma-algebra: {0}")]
    NotASigmaAlgebra(String),
    #[error("expected {expected} weights, got {got}")]
    WeightMismatch { expected: usize, got: usize },
    #[error("weights must be nonnegative")]
    NegativeWeight,
    #[error("mapping is not defined on source point {0}")]
    MapNotTotal(i64),
    #[error("set or function is not measurable")]
    NotMeasurable,
    #[error("every class would be null; a measure algebra needs a nonzero element of positive measure")]
    DegenerateMeasure,
    #[error("map is not non-singular")]
    NotNonsingular,
    #[error("map is not inverse-measure-preserving")]
    NotImp,
    #[error("map is not a sequentially order-continuous Boolean homomorphism")]
    NotHom,
    #[error("homomorphism is not measure-preserving")]
    NotMeasurePreserving,
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("function is not square-integrable")]
    NotSquareIntegrable,
    #[error("function class is not constant on atom {0}")]
    NonConstantOnAtom(usize),
    #[error("space was not built as a direct sum")]
    NotADirectSum,
    #[error("pairs do not form an injective partial map")]
    NotInjective,
    #[error("breakpoints must be strictly increasing and inside the signal extent")]
    BadBreakpoints,
    #[error("segment interval does not match the arrow")]
    IntervalMismatch,
    #[error("index map must have a nonzero stride")]
    ZeroStride,
    #[error("amplitude map must have a nonzero scale")]
    ZeroScale,
}

pub type Result<T> = std::result::Result<T, Error>;
