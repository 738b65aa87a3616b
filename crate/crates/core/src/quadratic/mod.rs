//! Quadratic characters, L-values, class numbers and Dirichlet characters mod p.

pub mod chi;
pub mod classnum;
pub mod dirichlet;
pub mod discriminant;
pub mod lvalue;

pub use chi::{chi, legendre, QuadChar};
pub use classnum::{class_number, hurwitz_mass, ClassNumbers};
pub use dirichlet::{
    char_sum, char_sum_bound, orthogonality_check, CyclotomicInt, DirichletCharModP,
};
pub use discriminant::{canonical_discriminant, is_imaginary_discriminant, DiscriminantDecomp};
pub use lvalue::{l_value_at_one, LFunction};
