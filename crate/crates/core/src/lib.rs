//! Arithmetic over the split/non-split quaternion family `H_t`, matrices
//! and power series over it, Hardy-space interpolation and the three-variable
//! Fueter theory.

pub mod error;
pub mod fueter;
pub mod hardy;
pub mod htmatrix;
pub mod hypercomplex;
pub mod rational;
pub mod sample;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use htmatrix::HMatrix;
pub use hypercomplex::{Adjoint, AdjointKind, FormKind, HElem, NormKind, Scale};
pub use rational::Realization;
pub use series::PowerSeries;
