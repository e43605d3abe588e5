//! Numerical certification of entanglement-measure values and bounds for
//! GHZ, W, EPR and antisymmetric three-party states under PPT-preserving
//! operations.
//!
//! Exact values are computed where they are finite-dimensional; asymptotic
//! (regularized) quantities are carried as [`measures::BoundInterval`]s.

pub mod claims;
pub mod distill;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod mregs;
pub mod states;
pub mod tensor;
pub mod twirl;

pub use error::{Error, Result};
pub use measures::{BoundInterval, MeasureProfile};
pub use states::StateKind;
pub use tensor::{Cut, MultiState, PureVector};
