//! Streamed Jacobi symbols, exact classical simulation of the Jacobi
//! factoring circuit, and complete factorization of integers whose prime
//! exponents are pairwise distinct.
//!
//! Module map:
//!
//! * [`numtheory`]: big-integer primitives (Jacobi symbol, inverses mod `2^m`,
//!   Miller–Rabin, roots, continued fractions, desk-scale factoring).
//! * [`window`]: the block-streaming reduction that builds a multiple of `x`
//!   agreeing with `N` on its low bits while holding a `2m`-bit window.
//! * [`engine`]: the streamed Jacobi symbol built on the reduction, with a
//!   word-operation cost model.
//! * [`sim`]: statevector simulation of the factoring circuit and numeric
//!   checks of the phase-sum and Gauss-sum estimates behind it.
//! * [`driver`]: success boosting, the `B_max` search and the special-integer
//!   factoring loop over a pluggable squarefree-decomposition oracle.
//! * [`verify`]: invariant sweeps shared by the CLI and the test suites.

pub mod driver;
pub mod engine;
pub mod error;
pub mod numtheory;
pub mod report;
pub mod sim;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
pub use numtheory::{JacobiValue, Natural, SignedNatural};
