//! Construction, auditing and classification of Z-graded Lie conformal
//! algebras whose graded components are free of rank at most one.

mod error;

pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod derived;
pub mod lie;
pub mod poly;

pub use error::{Error, Result};
