use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("scale must be a finite non-zero real, got {0}")]
    InvalidScale(f64),
    #[error("non-finite component")]
    NonFinite,
    #[error("operands carry different scales ({0} vs {1})")]
    ScaleMismatch(f64, f64),
    #[error("element is not invertible (det = {det:e})")]
    NonInvertible { det: f64 },
    #[error("no invertible pivot block found")]
    NoInvertiblePivot,
    #[error("operator norm {norm} is not below 1")]
    NotContractive { norm: f64 },
    #[error("empty input")]
    EmptyInput,
    #[error("constant term is not invertible")]
    NonInvertibleConstantTerm,
    #[error("point has operator norm {norm} >= 1")]
    NotInUnitBall { norm: f64 },
    #[error("function does not vanish at the point (residual {residual:e})")]
    NotAZero { residual: f64 },
    #[error("smallness condition violated ({value} >= 1)")]
    SmallnessViolated { value: f64 },
    #[error("Gram matrix is not invertible")]
    GramNotInvertible,
    #[error("perturbation norm {norm} is not below 1")]
    NotContractivePerturbation { norm: f64 },
    #[error("vector part lies on the null cone (det = {det:e})")]
    OnNullCone { det: f64 },
    #[error("degree {0} exceeds the cap")]
    DegreeCap(usize),
    #[error("point outside the kernel domain")]
    DomainViolation,
    #[error("admissibility condition violated ({value} >= 1)")]
    ConditionViolated { value: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("feedthrough block D is not invertible")]
    NonInvertibleD,
}

pub(crate) fn same_scale(a: f64, b: f64) -> Result<()> {
    if a.to_bits() == b.to_bits() {
        Ok(())
    } else {
        Err(Error::ScaleMismatch(a, b))
    }
}
