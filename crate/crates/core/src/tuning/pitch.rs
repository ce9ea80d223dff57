use std::fmt;

use serde::{Deserialize, Serialize};

use super::{lattice_ratio, LatticeCoord, Rational, TuningError, TuningSystem};

/// A frequency in Hz. Always positive and finite.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Pitch(f64);

impl Pitch {
    /// Concert A4.
    pub const A4: Pitch = Pitch(440.0);

    pub fn new(hz: f64) -> Result<Self, TuningError> {
        if hz.is_finite() && hz > 0.0 {
            Ok(Pitch(hz))
        } else {
            Err(TuningError::InvalidPitch(hz.to_string()))
        }
    }

    pub fn hz(self) -> f64 {
        self.0
    }
}

impl Default for Pitch {
    fn default() -> Self {
        Pitch::A4
    }
}

impl TryFrom<f64> for Pitch {
    type Error = TuningError;

    fn try_from(hz: f64) -> Result<Self, Self::Error> {
        Pitch::new(hz)
    }
}

impl From<Pitch> for f64 {
    fn from(p: Pitch) -> f64 {
        p.0
    }
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3} Hz", self.0)
    }
}

pub fn ratio_cents(r: Rational) -> f64 {
    r.cents()
}

/// Frequency of a lattice point above `base`. The ratio is exact; only the
/// final scaling is done in floating point.
pub fn coord_frequency(coord: LatticeCoord, system: TuningSystem, base: Pitch) -> Result<Pitch, TuningError> {
    let r = lattice_ratio(coord, system)?;
    Pitch::new(base.0 * r.numer() as f64 / r.denom() as f64)
}

/// Twelve-tone equal-tempered pitch `semitones` away from `base`.
pub fn tet_frequency(semitones: i32, base: Pitch) -> Pitch {
    Pitch(base.0 * (semitones as f64 / 12.0).exp2())
}

/// Signed interval from `a` up to `b` in cents.
pub fn cents_between(a: Pitch, b: Pitch) -> f64 {
    1200.0 * (b.0.log2() - a.0.log2())
}

const NOTE_NAMES: [&str; 12] = ["C", "C♯", "D", "D♯", "E", "F", "F♯", "G", "G♯", "A", "A♯", "B"];

/// The equal-tempered pitch closest to some frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetNeighbor {
    /// Semitones above the reference pitch.
    pub semitones: i32,
    /// Scientific pitch name, taking the reference as A4.
    pub name: String,
    /// How far the frequency sits from that pitch, in cents.
    pub cents: f64,
}

/// Finds the nearest 12TET pitch to `pitch`, counting semitones from `reference` (taken as A4).
pub fn nearest_tet(pitch: Pitch, reference: Pitch) -> TetNeighbor {
    let offset = cents_between(reference, pitch);
    let semitones = (offset / 100.0).round() as i32;
    let cents = cents_between(tet_frequency(semitones, reference), pitch);
    // A4 is nine semitones above C4.
    let from_c4 = semitones + 9;
    let octave = 4 + from_c4.div_euclid(12);
    let name = format!("{}{}", NOTE_NAMES[from_c4.rem_euclid(12) as usize], octave);
    TetNeighbor { semitones, name, cents }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hz(x: f64) -> Pitch {
        Pitch::new(x).unwrap()
    }

    #[test]
    fn pitch_rejects_non_positive() {
        assert!(Pitch::new(0.0).is_err());
        assert!(Pitch::new(-1.0).is_err());
        assert!(Pitch::new(f64::NAN).is_err());
    }

    #[test]
    fn coord_frequency_examples() {
        let f = |fi, l, s| coord_frequency(LatticeCoord::new(fi, l), s, Pitch::A4).unwrap().hz();
        assert_eq!(f(0, 0, TuningSystem::FiveLimit), 440.0);
        assert_eq!(f(0, 1, TuningSystem::SevenLimit), 770.0);
        assert_eq!(f(1, 0, TuningSystem::FiveLimit), 660.0);
        assert_eq!(f(1, 1, TuningSystem::SevenLimit), 577.5);
    }

    #[test]
    fn tet_examples() {
        assert_eq!(tet_frequency(0, Pitch::A4).hz(), 440.0);
        assert!((tet_frequency(10, Pitch::A4).hz() - 783.99).abs() < 0.01);
        assert!((tet_frequency(7, Pitch::A4).hz() - 659.255).abs() < 0.01);
        assert_eq!(tet_frequency(12, Pitch::A4).hz(), 880.0);
        assert_eq!(tet_frequency(-12, Pitch::A4).hz(), 220.0);
    }

    #[test]
    fn cents_between_examples() {
        assert_eq!(cents_between(hz(440.0), hz(440.0)), 0.0);
        let c = cents_between(hz(440.0), hz(770.0));
        assert!((c - ratio_cents(Rational::new(7, 4).unwrap())).abs() < 1e-9);
        assert_eq!(c, -cents_between(hz(770.0), hz(440.0)));
    }

    #[test]
    fn nearest_tet_names() {
        let a = nearest_tet(Pitch::A4, Pitch::A4);
        assert_eq!(a.name, "A4");
        assert_eq!(a.cents, 0.0);
        let g = nearest_tet(hz(770.0), Pitch::A4);
        assert_eq!(g.name, "G5");
        assert_eq!(g.semitones, 10);
        assert!((g.cents + 31.174).abs() < 1e-3);
        let c = nearest_tet(hz(261.6256), Pitch::A4);
        assert_eq!(c.name, "C4");
        assert_eq!(nearest_tet(hz(110.0), Pitch::A4).name, "A2");
    }
}
