//! Just-intonation pitch math.
//!
//! The lattice has two axes. Moving along `fifths` multiplies by 3/2; moving
//! along `limb` multiplies by 5/4 in five-limit or 7/4 in seven-limit. Every
//! lattice ratio is folded back into a single octave `[1, 2)` and applied to
//! a base pitch (A4 = 440 Hz by default).

mod lattice;
mod notation;
mod pitch;
mod rational;

pub use lattice::{lattice_ratio, LatticeCoord, TuningSystem, MAX_EXPONENT};
pub use notation::{helmholtz_annotation, HelmholtzAnnotation};
pub use pitch::{cents_between, coord_frequency, nearest_tet, ratio_cents, tet_frequency, Pitch, TetNeighbor};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TuningError {
    #[error("ratio {numer}/{denom} is not strictly positive")]
    NonPositive { numer: u128, denom: u128 },
    #[error("rational arithmetic overflowed 128 bits")]
    Overflow,
    #[error("lattice coordinate ({fifths}, {limb}) is outside the supported range of ±{max}")]
    OutOfRange { fifths: i32, limb: i32, max: i32 },
    #[error("pitch must be a positive finite frequency, got {0}")]
    InvalidPitch(String),
    #[error("cannot parse {0:?} as a ratio")]
    Parse(String),
}

/// Folds `r` into `[1, 2)`.
pub fn octave_reduce(r: Rational) -> Result<Rational, TuningError> {
    r.octave_reduce()
}
