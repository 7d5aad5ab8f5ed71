//! Exact finite-n moments of the classical random matrix ensembles.

pub mod cli;
pub mod densities;
pub mod ensemble;
pub mod error;
pub mod exactnum;
pub mod moments;
pub mod oracle;
pub mod orthopoly;
pub mod physics;
pub mod quadrature;
pub mod verify;

pub use ensemble::{Beta, EnsembleSpec, Family, MomentQuery};
pub use error::{MathError, Result, RmtError};
pub use moments::MomentResult;
