//! Circle generators, word evaluation, the dynamical metric and Birkhoff sums.

pub mod affine;
pub mod generator;
pub mod potential;
pub mod semigroup;

pub use affine::{dyn_ball_image, dyn_ball_interval, reduce_affine, AffineWordForm};
pub use generator::{apply_generator, parse_generators, GeneratorSpec, GOLDEN};
pub use potential::{Holder, Potential, PotentialKind};
pub use semigroup::{birkhoff_sum, dyn_distance, evaluate_prefixes, Expansion, SemigroupSpec};
