//! Combinatorial designs with guaranteed minimum Hamming distance and the
//! entangled states they generate.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`arrays`] — mixed orthogonal arrays (MOAs): exhaustive strength
//!   verification, minimum Hamming distance, irredundancy, column surgery.
//! * [`schemes`] — difference schemes over `Z_d` (including Hadamard matrices
//!   in 0/1 form) with exhaustive strength-2/3 verification and generators
//!   for the orders reachable by Sylvester doubling, Paley I, and prime
//!   multiplication tables.
//! * [`constructions`] — expansive replacement, Kronecker-sum extension by a
//!   generalized Hadamard matrix, and the strength-3 extension; each
//!   recomputes the minimum-distance postcondition instead of trusting it.
//! * [`states`] — sparse pure states on heterogeneous party dimensions,
//!   exact k-uniformity checks by partial trace, projective reduction,
//!   coarse-graining, party-wise tensoring, and generalized Pauli orbits.
//! * [`locc`] — orthogonality-preserving-measurement solution spaces and the
//!   local-irreducibility certificate they yield.
//! * [`shadow`] — exact big-rational shadow inequalities deciding AME
//!   nonexistence, including the full nonincreasing-dimension scan.
//! * [`formats`] — the `.moa` / `.ds` / `.qst` text formats.
//!
//! With the default `parallel` feature the exhaustive checks fan out over
//! rayon; disabling it yields a dependency-light sequential build with
//! identical results.

pub mod arrays;
pub mod constructions;
pub mod error;
pub mod formats;
pub mod locc;
pub mod matrix;
mod par;
pub mod schemes;
pub mod shadow;
pub mod states;
#[cfg(test)]
pub(crate) mod testdata;

pub use arrays::{hamming_distance, LevelSignature, MixedArray, StrengthCheck};
pub use error::{Error, Result};
pub use matrix::{kron_sum, SymbolMatrix};
pub use schemes::DifferenceScheme;
pub use shadow::DimVector;
pub use states::{DensityMatrix, PauliWord, PureState};
