//! Rank-level calculator for the E1-page of the Morse–Bott–Floer spectral
//! sequence of a symplectic C*-manifold, together with the bookkeeping solver
//! that extracts the φ-filtration of cohomology from it.
//!
//! The input is purely combinatorial: a list of fixed components (complex
//! dimension, Betti ranks, C*-weight multiset) plus the outer torsion families
//! (Z/m-fixed submanifolds) with their bundle or explicit column data. All
//! cohomology is handled rank-wise over a characteristic-0 field; all period
//! and index arithmetic is exact rational.
//!
//! Module layout:
//! - [`model`] — input types and validation, total cohomology;
//! - [`index`] — W-function, Maslov / Morse–Bott / Floer indices, critical
//!   times, slice gradings;
//! - [`graded`] — graded-rank algebra: shifts, Gysin sphere bundles,
//!   Leray–Hirsch, slice cohomology;
//! - [`page`] — E1-page assembly and its structural laws (periodicity,
//!   central symmetry, support bounds, pillar/block taxonomy);
//! - [`solver`] — matching model for iterated differentials, filtration
//!   intervals, consistency checks;
//! - [`equivariant`] — S¹-equivariant columns, the collapse check and the
//!   equivariant rank identity;
//! - [`presets`] — generators and static data for the worked example corpus;
//! - [`render`] — table/report emitters (ascii, latex, json, csv) and the
//!   JSON spec schema.

pub mod equivariant;
pub mod graded;
pub mod index;
pub mod model;
pub mod page;
pub mod presets;
pub mod render;
pub mod solver;

pub use index::Period;
pub use model::{GradedRanks, ManifoldSpec};
