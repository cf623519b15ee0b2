//! Simulation library for a d-level quantum secret sharing scheme.
//!
//! A dealer and n-1 participants share a generalized GHZ state; each party
//! measures its qudit in a private basis drawn from one of two single-qudit
//! basis families (quadratic-phase, for odd prime d, or near-flat, for any
//! d >= 2), and rounds where the basis labels sum to zero mod d leave
//! outcomes that also sum to zero mod d, giving the dealer a secret any
//! full coalition of participants can reconstruct. The crate provides:
//!
//! * [`qmath`]: dense state vectors over qudit registers, projective
//!   measurement, and a seeded, stream-splittable rng.
//! * [`bases`]: the two basis family constructions and their exact overlap
//!   laws.
//! * [`ghz`]: the shared state, the consistency rules, completion lookup
//!   tables, and the uniqueness audit that underpins outsider security.
//! * [`protocol`]: honest session simulation for both variants (announced
//!   bases, and chained bases bootstrapped over QKD), sifting, the
//!   eavesdropping check, and key reconstruction.
//! * [`attacks`]: intercept-resend and insider adversaries with analytic,
//!   exact-rational, and Monte Carlo detection rates, plus the
//!   entangled-probe audit.
//!
//! Everything is deterministic given a seed: parallel and sequential runs
//! of the same configuration produce identical transcripts.

pub mod attacks;
pub mod bases;
pub mod error;
pub mod ghz;
pub mod protocol;
pub mod qmath;

pub use error::{Error, Result};
