//! Exact arithmetic for rank-2 Drinfeld modules over F_q[T] and the averaged
//! distribution of their Frobenius traces.

pub mod constants;
pub mod drinfeld;
pub mod error;
pub mod experiment;
pub mod factor;
pub mod fq;
pub mod poly;
pub mod quadratic;
pub mod rational;
pub mod residue;
pub mod verify;

pub use error::{Error, Result};
pub use fq::{Fq, Scalar};
pub use poly::Poly;
