//! Frenet frames of space curves and their lifts to the tangent bundle.
//!
//! Curves and fields are written in a small expression language
//! ([`expr`]) and differentiated exactly with truncated Taylor arithmetic
//! ([`jet`]). On top of that sit the Frenet apparatus in R³ ([`frenet`]),
//! vertical/complete/horizontal lifts of functions, vector fields and
//! curves to TR³ = R⁶ ([`lift`]), the lifted Frenet apparatus with its
//! residual reports ([`lift_frenet`]), and the command-line reports
//! ([`report`]).

pub mod error;
pub mod expr;
pub mod fd;
pub mod frenet;
pub mod jet;
pub mod lift;
pub mod lift_frenet;
pub mod report;
pub mod vector;

pub use error::Error;
