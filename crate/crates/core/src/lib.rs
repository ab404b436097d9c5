//! Thermodynamic quantities of finitely generated semigroup actions on the circle.
//!
//! The building blocks are words over a finite alphabet of circle maps
//! ([`words`], [`dynamics`]), their dynamical metrics and separated sets
//! ([`separation`]), partition functions and rate estimators built on top
//! ([`thermo`]), fixed-point counting ([`periodic`]) and constructive checks of
//! orbital specification ([`specprobe`]).

pub mod circle;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod periodic;
pub mod separation;
pub mod specprobe;
pub mod thermo;
pub mod words;

pub use circle::{circle_distance, wrap, CircleArc, CirclePoint};
pub use error::{Error, Result};
