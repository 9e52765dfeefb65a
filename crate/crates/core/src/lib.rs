//! Exact-arithmetic intuitionistic quantum logic of an `n`-level system.
//!
//! A quantum system with finitely many levels is modelled by the matrix
//! algebra `M_n(C)`. Its classical contexts — the commutative unital
//! *-subalgebras, or equivalently the partitions of unity into orthogonal
//! projections — form a finite poset once a family of contexts is closed
//! under intersection. Monotone projection-valued maps on such a poset form
//! a finite distributive lattice (a frame), whose Heyting structure is the
//! intuitionistic propositional logic of the system.
//!
//! Everything here is computed over Gaussian rationals (complex numbers
//! with exact rational real and imaginary parts). There is no floating
//! point anywhere: equality of matrices, projections, spectra, lattice
//! elements, and pairing values is always exact.
//!
//! The crate provides:
//!
//! * [`scalar`], [`matrix`] — Gaussian-rational scalars and dense matrices,
//!   with exact solvers, minimal polynomials, and projection lattice ops.
//! * [`context`], [`poset`] — partitions of unity, joint spectral
//!   refinement of commuting observables, intersection-closed posets of
//!   contexts with refinement maps.
//! * [`open`], [`support`], [`gelfand`] — rational opens of the line,
//!   support vectors of the positive cone, spectral projections
//!   `[a in U]`, and the transform embedding an observable into the frame.
//! * [`frame`] — the frame of monotone projection selections with its
//!   Heyting operations (meet, join, implication, negation).
//! * [`state`] — density matrices, the exact state/proposition pairing,
//!   and the induced monotone measures.
//! * [`ks`] — ray sets, noncontextual {0,1} valuations with an exact
//!   backtracking search, and the points of a finite frame.
//! * [`cli`] — the `bohr` command-line interface.
//!
//! JSON encodings for every boundary type live in [`json`]; ready-made
//! posets and ray sets used by the test suite live in [`fixtures`].

pub mod cli;
pub mod context;
pub mod error;
pub mod fixtures;
pub mod frame;
pub mod gelfand;
pub mod json;
pub mod ks;
pub mod matrix;
pub mod open;
pub mod poset;
pub mod scalar;
pub mod state;
pub mod support;

pub use error::Error;
pub use matrix::CMatrix;
pub use scalar::{GaussianRational, Rational};
