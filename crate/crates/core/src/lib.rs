//! Computational toolkit for weakly Krull semigroup rings.
//!
//! The crate decides when a semigroup ring `D[Γ]` is weakly Krull (and the
//! related WFD and generalized Krull properties) from descriptors of `D` and
//! `Γ`, and computes factorization invariants of the monoids involved:
//! numerical monoids and their direct sums, block monoids over finite abelian
//! groups, and class groups of numerical semigroup rings over prime fields.

pub mod affine;
pub mod arith;
pub mod blocks;
pub mod classgrp;
pub mod decide;
pub mod factor;
pub mod groups;
pub mod hilbertian;
pub mod numon;

pub use affine::AffineSumMonoid;
pub use groups::{FiniteAbelianGroup, TorsionFreeGroupDescriptor};
pub use numon::{MonoidIdeal, NumericalMonoid};
