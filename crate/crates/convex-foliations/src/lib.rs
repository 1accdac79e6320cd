//! Exact-arithmetic toolkit for homogeneous convex foliations of the complex
//! projective plane and the critically fixed rational self-maps of the
//! projective line attached to them.
//!
//! The crate is organized around the objects it computes with:
//!
//! * [`scalar`] — rationals, number fields `Q[t]/(m)` with certified complex
//!   embedding boxes, and exact comparison.
//! * [`poly`] — univariate polynomials and binary forms over those scalars:
//!   gcd, squarefree decomposition, resultants, certified root isolation.
//! * [`ratmap`] — rational self-maps of the line: fixed points, multipliers,
//!   holomorphic indices, critical structure, Möbius conjugacy.
//! * [`foliation`] — foliations given by polynomial 1-forms: radial orders,
//!   Camacho–Sad indices, invariant lines, homogeneous degeneration.
//! * [`catalog`] — the fourteen degree-5 homogeneous convex normal forms,
//!   the Fermat/Hesse/Hilbert families, and their conjugation witnesses.
//! * [`typesolver`] — replays the classification: anchored coefficient
//!   solving, residual parameter polynomials, small-degree classification,
//!   and the reconstruction of the degree-5 Hilbert foliation from radial
//!   incidence data.
//! * [`conjectures`] — multiplier/index region checks and the reciprocal
//!   index-set assembly.
//! * [`cli`] — a small text DSL for fields and 1-forms plus JSON reports;
//!   the `cfol` binary is a thin wrapper over it.
//!
//! Every check in this crate is exact: values live in explicit number
//! fields, equality is decided algebraically, and floating point appears
//! only as decimal display hints derived from certified enclosures.

pub mod ball;
pub mod catalog;
pub mod cli;
pub mod conjectures;
pub mod foliation;
pub mod poly;
pub mod ratmap;
pub mod scalar;
pub mod typesolver;

pub use scalar::{NumberField, Scalar};
