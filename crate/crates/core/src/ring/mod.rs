//! Laurent polynomial ring `F_p[x_1^±, …, x_D^±]` and its ideals.

pub mod groebner;
mod ideal;
mod poly;
mod text;
pub mod univariate;

pub(crate) use ideal::{engine_for, from_terms, saturation_term, to_terms};
pub use ideal::{gcd_univariate, Height, Ideal};
pub use poly::{cmp_exp, Exponent, LaurentPoly, Ring, MAX_PRIME};
