//! Exact geometry of Hermitian lattices over rings of integers of number
//! fields, integer homology tools, and big-number bound arithmetic.
//!
//! Everything that has to be exact is exact: field arithmetic and Gram
//! matrices use arbitrary-precision rationals, embeddings are rigorous complex
//! balls, and huge constants are symbolic products compared through certified
//! log intervals.

#![allow(clippy::needless_range_loop)]

pub mod ball;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod hermitian;
pub mod homology;
pub mod ideal_lattice;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use config::Config;
pub use error::{Error, Result};
pub use field::{FieldElement, FractionalIdeal, NumberField, RealEmbeddingVector};
pub use rational::Rat;
