pub mod error;
pub mod poly;
pub mod words;
pub mod lie;
pub mod linalg;
pub mod algebra;
pub mod block;
pub mod depth;
pub mod pairing;
pub mod relations;
pub mod series;
pub mod cache;
pub mod cli;

pub use error::{Error, Result};
pub use poly::{Monomial, Poly, Rational};
