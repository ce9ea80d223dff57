//! Four-voice chord synthesis, rendered offline.

mod envelope;
mod osc;
mod render;
mod wav;

pub use envelope::{envelope_gain, Gate, VoiceParams};
pub use osc::{oscillator_sample, Waveform};
pub use render::{
    render_performance, PcmBuffer, RenderConfig, TimedEffect, BIT_DEPTH, CHANNELS,
    SUPPORTED_SAMPLE_RATES,
};
pub use wav::{to_pcm16, wav_encode, WavFile, HEADER_LEN};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("effect {index} is earlier than the one before it")]
    DecreasingTime { index: usize },
    #[error("unsupported sample rate {0} Hz (use 22050, 44100 or 48000)")]
    SampleRate(u32),
    #[error("invalid voice parameters: {0}")]
    InvalidVoice(&'static str),
}
