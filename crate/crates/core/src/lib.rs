//! Exact commutative algebra for Ratliff-Rush filtrations of m-primary
//! ideals in polynomial rings over the rationals or a prime field.

pub mod error;
pub mod field;
pub mod filtration;
pub mod graded;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod reductions;
pub mod ring;
pub mod theorems;

pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rat, Rationals};
pub use ideal::Ideal;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use ring::Ring;
