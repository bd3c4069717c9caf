//! Iterative quantum optimization with an adaptive problem Hamiltonian for
//! the lattice shortest vector problem.
//!
//! A lattice basis is encoded as a truncated Ising Hamiltonian whose diagonal
//! holds squared lattice-vector lengths. A simulated depth-1 QAOA circuit
//! samples short vectors from it, and every sample that can replace a longer
//! basis vector without changing the lattice does so. The Hamiltonian is then
//! rebuilt from the improved basis.
//!
//! Modules, bottom-up:
//!
//! * [`lattice`]: exact integer bases, Gram matrices, unimodular transforms,
//!   the substitution rule and a shortest-vector oracle.
//! * [`encoding`]: the k-qubit coefficient register and the dense diagonal
//!   problem Hamiltonian, plus truncated-spectrum analyses.
//! * [`qaoa`]: statevector simulation of the depth-1 circuit, the Ising
//!   expansion and its closed-form energy, angle optimization and sampling.
//! * [`adaptive`]: the outer loop, run logs and ensemble statistics.

// matrix code reads best with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod adaptive;
pub mod encoding;
mod error;
pub mod lattice;
pub mod qaoa;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
