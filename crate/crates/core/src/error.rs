use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("exponent cap exceeded: product needs exponent {needed}, cap is {cap}")]
    ExponentCapExceeded { needed: u32, cap: u32 },
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("evaluation at a pole")]
    PoleEvaluation,
    #[error("polynomial is not harmonic")]
    NonHarmonic,
    #[error("poles are not pairwise distinct")]
    DuplicatePoles,
    #[error("pole list is empty")]
    EmptyPoles,
    #[error("weights and poles differ in length ({weights} vs {poles})")]
    WeightCount { poles: usize, weights: usize },
    #[error("B is constant")]
    ConstantB,
    #[error("input is identically zero")]
    ZeroInput,
    #[error("weight vector is zero")]
    ZeroWeight,
    #[error("C must be positive")]
    NonpositiveC,
    #[error("degenerate parameters: {0}")]
    Degenerate(&'static str),
    #[error("weight vector lies outside the Laplace-constrained family")]
    WeightOutsideFamily,
    #[error("seed pair violates Y_x = Q_y, Y_y = -Q_x")]
    InvalidSeed,
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("every grid point is excluded")]
    AllPointsExcluded,
    #[error("unsupported stencil order {0}")]
    StencilOrder(u32),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
