pub mod cocycle;
pub mod cyclic;
pub mod cz;
pub mod deligne;
pub mod dirac;
pub mod error;
pub mod forms;
pub mod fourier;
pub mod operators;
pub mod regulator;
pub mod scalar;
pub mod verify;

pub use cz::{CZValue, TolerancePolicy};
pub use error::{Error, Result};
pub use fourier::{TrigPoly, UnitFunction};
pub use scalar::{RationalTau, Scalar, C64};
