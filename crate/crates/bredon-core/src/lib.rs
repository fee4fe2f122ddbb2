//! Exact computation of the `RO(C_n)`-graded Bredon cohomology of a point
//! for odd cyclic groups `C_n` with constant integral Mackey coefficients.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised in five
//! layers:
//!
//! * [`arith`]: divisor combinatorics (colon operation, lcm-gcd sequences,
//!   allowable paths and the integrality constants `Y`).
//! * [`mackey`]: the additive category of free modules `F_d`, modelled as
//!   permutation modules over the integral group ring, together with
//!   levelwise evaluation and recognition of the basic Mackey functors.
//! * [`complexes`]: bounded complexes of free modules, Smith normal form,
//!   spheres, linear models, box products, and the chain-homotopy oracle.
//! * [`cohomology`]: the graded group engine (closed forms, reduction moves,
//!   oracle fallback and prime-by-prime assembly).
//! * [`ring`]: symbolic products of named classes.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod arith;
pub mod cohomology;
pub mod complexes;
mod error;
pub mod mackey;
pub mod ring;

pub use error::{Error, Result};
