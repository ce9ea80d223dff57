use serde::{Deserialize, Serialize};

use super::{RenderError, Waveform};

/// Per-voice patch settings. Times are in seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoiceParams {
    pub waveform: Waveform,
    pub attack: f64,
    pub decay: f64,
    pub sustain_level: f64,
    pub release: f64,
    /// Output gain of each of the four voices.
    pub gain: f64,
}

impl Default for VoiceParams {
    fn default() -> Self {
        VoiceParams {
            waveform: Waveform::Sine,
            attack: 0.010,
            decay: 0.050,
            sustain_level: 0.8,
            release: 0.400,
            gain: 0.25,
        }
    }
}

impl VoiceParams {
    pub fn validate(&self) -> Result<(), RenderError> {
        let times = [self.attack, self.decay, self.release];
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(RenderError::InvalidVoice("envelope times must be finite and non-negative"));
        }
        if !(0.0..=1.0).contains(&self.sustain_level) {
            return Err(RenderError::InvalidVoice("sustain level must lie in [0, 1]"));
        }
        // Four voices at full envelope must not clip.
        if !(0.0..=0.25).contains(&self.gain) {
            return Err(RenderError::InvalidVoice("voice gain must lie in [0, 0.25]"));
        }
        Ok(())
    }

    /// Steepest rate of change of the envelope, in gain per second.
    ///
    /// Zero-length segments jump, so the bound is infinite for them.
    pub fn max_slope(&self) -> f64 {
        let rate = |rise: f64, t: f64| if rise == 0.0 { 0.0 } else if t == 0.0 { f64::INFINITY } else { rise / t };
        rate(1.0, self.attack)
            .max(rate(1.0 - self.sustain_level, self.decay))
            .max(rate(1.0, self.release))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    On,
    /// Released `since_off` seconds ago.
    Off { since_off: f64 },
}

fn held_gain(p: &VoiceParams, t: f64) -> f64 {
    if t < p.attack {
        t / p.attack
    } else if t < p.attack + p.decay {
        1.0 - (1.0 - p.sustain_level) * (t - p.attack) / p.decay
    } else {
        p.sustain_level
    }
}

/// Piecewise-linear ADSR. `since_on` counts from gate-on, including any time
/// spent released.
pub fn envelope_gain(p: &VoiceParams, since_on: f64, gate: Gate) -> f64 {
    match gate {
        Gate::On => held_gain(p, since_on),
        Gate::Off { since_off } => {
            let from = held_gain(p, (since_on - since_off).max(0.0));
            if since_off >= p.release {
                0.0
            } else {
                from * (1.0 - since_off / p.release)
            }
        }
    }
}
