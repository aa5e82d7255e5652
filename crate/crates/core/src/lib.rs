//! Numerical toolkit for finite-dimensional complex representations of quivers.

pub mod builders;
pub mod cli;
pub mod cyclic;
pub mod error;
pub mod hom;
pub mod linalg;
pub mod opmodels;
pub mod quiver;
pub mod reflection;
pub mod rep;
pub mod textio;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CMat, Tolerances, C64};
pub use quiver::Quiver;
pub use rep::{Hom, Rep};
