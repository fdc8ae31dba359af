//! Quantifier elimination over the complex numbers in a language with the
//! imaginary unit, real and imaginary parts and complex conjugation.

pub mod backend;
pub mod corpus;
pub mod error;
pub mod finite;
pub mod formula;
pub mod matching;
pub mod nf;
pub mod number;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod real;
pub mod reinterpret;
pub mod problem;
pub mod realnf;
pub mod sample;
pub mod simplify;
pub mod term;
pub mod vs;

pub use error::{Error, Result};
