//! Exact test for whether a finite-dimensional quiver representation
//! factors through an inverse category, together with a certified
//! decomposition into blockcodes for cycle-free quivers.
//!
//! The pipeline is
//! [`flag::compute_flag`] → [`criterion::check_representation`] →
//! [`realize::realize_all`] → [`decompose::decompose`], with
//! [`decompose::verify_decomposition`] as an independent checker and
//! [`oracle`] as a brute-force ground truth over small prime fields.

pub mod cli;
pub mod criterion;
pub mod decompose;
pub mod error;
pub mod flag;
pub mod linalg;
pub mod oracle;
pub mod poset;
pub mod realize;
pub mod rep;

pub use error::{Error, Result};
