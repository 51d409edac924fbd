//! Exact arithmetic for orthogonal periods of tame supercuspidal
//! representations of `GL_n`.
//!
//! The crate covers both sides of the local/finite picture:
//!
//! * [`ff`], [`cyc`], [`mat`], [`orth`]: finite fields, exact cyclotomic
//!   integers, small matrix groups over finite fields, spinor norms.
//! * [`green`], [`dl`]: Green functions of `GL_k(F_Q)` and Deligne–Lusztig
//!   character sums over orthogonal subgroups, with both sides of the
//!   generalized Lusztig formula computed independently.
//! * [`rat`], [`qform`], [`tame`]: quadratic forms over `Q_p` (square classes,
//!   Hilbert symbols, Hasse invariants, congruence transforms) and tame
//!   extensions modelled as exact rational algebras with their trace forms.
//! * [`distinction`]: the distinction-dimension decision procedure and its
//!   depth-zero finite-field cross-check.
//!
//! Everything is `no_std` with `alloc`; IO and the command-line front end
//! live in the companion `ortho` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cyc;
pub mod distinction;
pub mod dl;
pub mod error;
pub mod ff;
pub mod green;
pub mod mat;
pub mod orth;
pub mod qform;
pub mod rat;
pub mod tame;

mod hensel;
mod partition;
mod poly;

pub use error::{Error, Result};
