//! Exact finite-field toolkit: arithmetic in `F_{q^n}`, normality and
//! primitivity tests, character sums, completely normal constructions and
//! the inequality survey for primitive completely normal elements.

pub mod cache;
pub mod criteria;
pub mod characters;
pub mod construction;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod integer;
pub mod normality;
pub mod registry;
pub mod selftest;
pub mod survey;
mod serde_big;

pub use error::{Error, Result};
