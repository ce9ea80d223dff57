//! Offline rendering of an effect stream to mono PCM.

use serde::{Deserialize, Serialize};

use super::envelope::{envelope_gain, Gate, VoiceParams};
use super::osc::oscillator_sample;
use super::RenderError;
use crate::engine::EngineEffect;

pub const SUPPORTED_SAMPLE_RATES: [u32; 3] = [22_050, 44_100, 48_000];
pub const BIT_DEPTH: u16 = 16;
pub const CHANNELS: u16 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderConfig {
    pub sample_rate: u32,
    /// How long the last chord keeps sounding when the stream has no fade.
    pub hold_ms: u64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            sample_rate: 44_100,
            hold_ms: 1_000,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), RenderError> {
        if SUPPORTED_SAMPLE_RATES.contains(&self.sample_rate) {
            Ok(())
        } else {
            Err(RenderError::SampleRate(self.sample_rate))
        }
    }

    fn ms_to_samples(&self, ms: u64) -> u64 {
        ms * self.sample_rate as u64 / 1000
    }

    fn secs_to_samples(&self, secs: f64) -> u64 {
        (secs * self.sample_rate as f64).round() as u64
    }
}

/// An engine effect stamped with milliseconds since the performance began.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimedEffect {
    pub at: u64,
    pub effect: EngineEffect,
}

/// Rendered mono audio, nominally in `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PcmBuffer {
    pub sample_rate: u32,
    pub samples: Vec<f32>,
}

impl PcmBuffer {
    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    pub fn peak(&self) -> f32 {
        self.samples.iter().fold(0.0f32, |m, s| m.max(s.abs()))
    }

    /// Peak level in dBFS; `-inf` for silence.
    pub fn peak_dbfs(&self) -> f64 {
        20.0 * (self.peak() as f64).log10()
    }
}

struct Note {
    slot: usize,
    freq: f64,
    phase: f64,
    on_at: u64,
    off_at: Option<u64>,
}

impl Note {
    fn gain(&self, voice: &VoiceParams, n: u64, rate: f64) -> f64 {
        let since_on = (n - self.on_at) as f64 / rate;
        let gate = match self.off_at {
            Some(off) if n >= off => Gate::Off {
                since_off: (n - off) as f64 / rate,
            },
            _ => Gate::On,
        };
        envelope_gain(voice, since_on, gate)
    }

    fn finished(&self, voice: &VoiceParams, n: u64, rate: f64) -> bool {
        match self.off_at {
            Some(off) => n >= off && (n - off) as f64 / rate >= voice.release,
            None => false,
        }
    }
}

/// What to do at one sample index.
enum Cue {
    Chord([f64; 4]),
    Release,
}

/// Renders a performance's effects to audio.
///
/// Each chord starts four fresh notes while the previous chord releases. A
/// slot's new note picks up the phase of the note it replaces. A fade ramps
/// the master gain linearly to zero and ends the buffer; the held chord is
/// released so that it dies away exactly at the fade's end.
pub fn render_performance(
    effects: &[TimedEffect],
    render: &RenderConfig,
    voice: &VoiceParams,
) -> Result<PcmBuffer, RenderError> {
    render.validate()?;
    voice.validate()?;
    for (i, pair) in effects.windows(2).enumerate() {
        if pair[1].at < pair[0].at {
            return Err(RenderError::DecreasingTime { index: i + 1 });
        }
    }

    let rate = render.sample_rate as f64;
    let release = render.secs_to_samples(voice.release);
    let mut cues: Vec<(u64, Cue)> = Vec::new();
    let mut fade: Option<(u64, u64)> = None;
    for e in effects {
        let at = render.ms_to_samples(e.at);
        match &e.effect {
            EngineEffect::ChordOn { frequencies } => {
                cues.push((at, Cue::Chord(frequencies.map(|p| p.hz()))));
            }
            EngineEffect::FadeOut { duration_ms } => {
                let len = render.ms_to_samples(*duration_ms);
                let off = at + len.saturating_sub(release);
                cues.push((off, Cue::Release));
                fade = Some((at, len));
                break;
            }
            _ => {}
        }
    }

    let end = match fade {
        Some((at, len)) => at + len,
        None => match cues.last() {
            Some(&(at, _)) => {
                let off = at + render.ms_to_samples(render.hold_ms);
                cues.push((off, Cue::Release));
                off + release
            }
            None => 0,
        },
    };

    let mut samples = Vec::with_capacity(end as usize);
    let mut notes: Vec<Note> = Vec::new();
    let mut next_cue = 0;
    for n in 0..end {
        while next_cue < cues.len() && cues[next_cue].0 <= n {
            match &cues[next_cue].1 {
                Cue::Chord(freqs) => {
                    let mut phases = [0.0; 4];
                    for note in notes.iter_mut().filter(|x| x.off_at.is_none()) {
                        note.off_at = Some(n);
                        phases[note.slot] = note.phase;
                    }
                    for (slot, &freq) in freqs.iter().enumerate() {
                        notes.push(Note {
                            slot,
                            freq,
                            phase: phases[slot],
                            on_at: n,
                            off_at: None,
                        });
                    }
                }
                Cue::Release => {
                    for note in notes.iter_mut().filter(|x| x.off_at.is_none()) {
                        note.off_at = Some(n);
                    }
                }
            }
            next_cue += 1;
        }
        notes.retain(|x| !x.finished(voice, n, rate));

        let mut slot_sum = [0.0f64; 4];
        let mut slot_env = [0.0f64; 4];
        for note in notes.iter_mut() {
            let g = note.gain(voice, n, rate);
            slot_sum[note.slot] += g * oscillator_sample(voice.waveform, note.phase);
            slot_env[note.slot] += g;
            note.phase += note.freq / rate;
            note.phase -= note.phase.floor();
        }
        // A releasing note overlapping its replacement must not push the slot
        // past unit gain.
        let mut mix = 0.0;
        for slot in 0..4 {
            mix += slot_sum[slot] / slot_env[slot].max(1.0);
        }
        mix *= voice.gain;
        if let Some((at, len)) = fade {
            if n >= at {
                mix *= 1.0 - (n - at) as f64 / len as f64;
            }
        }
        samples.push(mix as f32);
    }

    Ok(PcmBuffer {
        sample_rate: render.sample_rate,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuning::Pitch;

    fn chord(at: u64, f: [f64; 4]) -> TimedEffect {
        TimedEffect {
            at,
            effect: EngineEffect::ChordOn {
                frequencies: f.map(|x| Pitch::new(x).unwrap()),
            },
        }
    }

    fn fade(at: u64, ms: u64) -> TimedEffect {
        TimedEffect {
            at,
            effect: EngineEffect::FadeOut { duration_ms: ms },
        }
    }

    #[test]
    fn empty_stream_is_empty_buffer() {
        let pcm = render_performance(&[], &RenderConfig::default(), &VoiceParams::default()).unwrap();
        assert!(pcm.samples.is_empty());
    }

    #[test]
    fn non_audio_effects_alone_are_silent() {
        let e = [TimedEffect {
            at: 100,
            effect: EngineEffect::Flash,
        }];
        let pcm = render_performance(&e, &RenderConfig::default(), &VoiceParams::default()).unwrap();
        assert!(pcm.samples.is_empty());
    }

    #[test]
    fn decreasing_time_is_malformed() {
        let e = [chord(10, [440.0; 4]), chord(5, [440.0; 4])];
        let err = render_performance(&e, &RenderConfig::default(), &VoiceParams::default()).unwrap_err();
        assert_eq!(err, RenderError::DecreasingTime { index: 1 });
    }

    #[test]
    fn unsupported_sample_rate() {
        let cfg = RenderConfig {
            sample_rate: 8000,
            ..RenderConfig::default()
        };
        assert!(render_performance(&[], &cfg, &VoiceParams::default()).is_err());
    }

    #[test]
    fn held_chord_length_and_peak() {
        let cfg = RenderConfig::default();
        let pcm = render_performance(&[chord(0, [440.0, 550.0, 660.0, 825.0])], &cfg, &VoiceParams::default()).unwrap();
        // hold + release
        assert_eq!(pcm.samples.len(), 44_100 + 17_640);
        assert!(pcm.peak() <= 1.0);
        assert!(pcm.peak() > 0.5);
        assert!(pcm.samples.last().unwrap().abs() < 1e-4);
    }

    #[test]
    fn fade_ends_the_buffer() {
        let cfg = RenderConfig::default();
        let e = [chord(0, [440.0; 4]), fade(1000, 2000), chord(1500, [880.0; 4])];
        let pcm = render_performance(&e, &cfg, &VoiceParams::default()).unwrap();
        assert_eq!(pcm.samples.len(), 3 * 44_100);
    }

    #[test]
    fn crossfade_never_clips() {
        // Square waves in phase are the worst case for the overlap.
        let voice = VoiceParams {
            waveform: crate::synth::Waveform::Square,
            ..VoiceParams::default()
        };
        let e = [chord(0, [100.0; 4]), chord(40, [100.0; 4]), chord(80, [200.0; 4])];
        let pcm = render_performance(&e, &RenderConfig::default(), &voice).unwrap();
        assert!(pcm.peak() <= 1.0, "{}", pcm.peak());
    }
}
