//! Cobar complexes and Ext groups over the R-motivic and Z/2-equivariant
//! dual Steenrod algebras, and exact GF(2) checks of the degree bounds and
//! of the comparison map between them.

pub mod cache;
pub mod chart;
pub mod cobar;
pub mod coeff;
pub mod compare;
pub mod error;
pub mod gf2;
pub mod grading;
pub mod par;
pub mod steenrod;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
