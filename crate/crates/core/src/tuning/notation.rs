//! Helmholtz-Ellis style spelling of lattice points.
//!
//! A note is spelled from its position on the Pythagorean chain of fifths
//! around A, then marked with how many syntonic commas (81/80) or septimal
//! steps separate the just pitch from that Pythagorean spelling.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LatticeCoord, TuningSystem};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HelmholtzAnnotation {
    pub pythagorean_note_name: String,
    /// Syntonic commas relative to the Pythagorean spelling; negative is lower.
    pub comma_alteration: i32,
    /// Septimal (7/4) steps, seven-limit only.
    pub septimal_alteration: i32,
}

impl fmt::Display for HelmholtzAnnotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pythagorean_note_name)?;
        if self.comma_alteration != 0 {
            write!(f, " {:+} comma", self.comma_alteration)?;
        }
        if self.septimal_alteration != 0 {
            write!(f, " {:+} septimal", self.septimal_alteration)?;
        }
        Ok(())
    }
}

const CHAIN: [char; 7] = ['F', 'C', 'G', 'D', 'A', 'E', 'B'];
const A_ON_CHAIN: i32 = 4;

/// Spells the pitch `fifths` Pythagorean fifths away from A.
pub fn chain_of_fifths_name(fifths: i32) -> String {
    let pos = fifths + A_ON_CHAIN;
    let letter = CHAIN[pos.rem_euclid(7) as usize];
    let accidentals = pos.div_euclid(7);
    let mark = if accidentals >= 0 { '♯' } else { '♭' };
    let mut name = String::from(letter);
    name.extend(std::iter::repeat(mark).take(accidentals.unsigned_abs() as usize));
    name
}

pub fn helmholtz_annotation(coord: LatticeCoord, system: TuningSystem) -> HelmholtzAnnotation {
    match system {
        // 5/4 = 81/64 lowered by 81/80, and 81/64 is four fifths up.
        TuningSystem::FiveLimit => HelmholtzAnnotation {
            pythagorean_note_name: chain_of_fifths_name(coord.fifths + 4 * coord.limb),
            comma_alteration: -coord.limb,
            septimal_alteration: 0,
        },
        TuningSystem::SevenLimit => HelmholtzAnnotation {
            pythagorean_note_name: chain_of_fifths_name(coord.fifths),
            comma_alteration: 0,
            septimal_alteration: coord.limb,
        },
    }
}
