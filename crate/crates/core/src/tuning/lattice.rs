use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Rational, TuningError};

/// Largest supported absolute exponent on either lattice axis.
pub const MAX_EXPONENT: i32 = 16;

/// Exponent pair addressing a point of the tuning lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeCoord {
    /// Exponent of 3/2.
    pub fifths: i32,
    /// Exponent of the limb step (5/4 or 7/4 depending on the system).
    pub limb: i32,
}

impl LatticeCoord {
    pub const ORIGIN: LatticeCoord = LatticeCoord { fifths: 0, limb: 0 };

    pub const fn new(fifths: i32, limb: i32) -> Self {
        LatticeCoord { fifths, limb }
    }

    fn check_range(self) -> Result<(), TuningError> {
        if self.fifths.abs() > MAX_EXPONENT || self.limb.abs() > MAX_EXPONENT {
            return Err(TuningError::OutOfRange {
                fifths: self.fifths,
                limb: self.limb,
                max: MAX_EXPONENT,
            });
        }
        Ok(())
    }
}

impl fmt::Display for LatticeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.fifths, self.limb)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuningSystem {
    #[default]
    FiveLimit,
    SevenLimit,
}

const FIFTH: Rational = Rational::raw(3, 2);
const MAJOR_THIRD: Rational = Rational::raw(5, 4);
const SEPTIMAL_SEVENTH: Rational = Rational::raw(7, 4);

impl TuningSystem {
    /// Ratio of one step along the vertical axis.
    pub fn fifth_step(self) -> Rational {
        FIFTH
    }

    /// Ratio of one step along the horizontal axis.
    pub fn limb_step(self) -> Rational {
        match self {
            TuningSystem::FiveLimit => MAJOR_THIRD,
            TuningSystem::SevenLimit => SEPTIMAL_SEVENTH,
        }
    }

    pub fn prime_limit(self) -> u8 {
        match self {
            TuningSystem::FiveLimit => 5,
            TuningSystem::SevenLimit => 7,
        }
    }

    pub fn toggled(self) -> Self {
        match self {
            TuningSystem::FiveLimit => TuningSystem::SevenLimit,
            TuningSystem::SevenLimit => TuningSystem::FiveLimit,
        }
    }
}

impl fmt::Display for TuningSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-limit", self.prime_limit())
    }
}

impl FromStr for TuningSystem {
    type Err = TuningError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "5" | "five" | "five_limit" | "5-limit" => Ok(TuningSystem::FiveLimit),
            "7" | "seven" | "seven_limit" | "7-limit" => Ok(TuningSystem::SevenLimit),
            _ => Err(TuningError::Parse(s.to_string())),
        }
    }
}

/// Octave-reduced ratio at `coord`: `(3/2)^fifths · step^limb` folded into `[1, 2)`.
pub fn lattice_ratio(coord: LatticeCoord, system: TuningSystem) -> Result<Rational, TuningError> {
    coord.check_range()?;
    let fifths = system.fifth_step().checked_pow(coord.fifths)?;
    let limb = system.limb_step().checked_pow(coord.limb)?;
    fifths.checked_mul(limb)?.octave_reduce()
}
