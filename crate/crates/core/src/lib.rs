//! Exact algebra for translation-invariant Pauli stabilizer Hamiltonians.
//!
//! Hamiltonians are matrices over the Laurent ring `F_p[x_1^±, …, x_D^±]`; this crate
//! verifies their algebraic properties, synthesizes separators, flippers and
//! disentangling Clifford QCAs, classifies 1D anti-hermitian forms, and checks the
//! results against brute-force finite tori.

pub mod certificate;
pub mod clifford;
pub mod coarse;
pub mod error;
pub mod forms1d;
pub mod lattice_oracle;
pub mod pauli;
pub mod polymat;
pub mod ring;
pub mod walker_wang;

pub use certificate::{Certificate, Check, Status};
pub use clifford::{Gate, GateList, SymplecticQCA};
pub use coarse::CoarseContext;
pub use error::{Error, Result};
pub use forms1d::{AntiHermitianForm, FormClassification};
pub use pauli::{Exactness, FlipperSet, SeparatorCertificate, StabilizerMap};
pub use polymat::PolyMatrix;
pub use ring::{Height, Ideal, LaurentPoly, Ring};
