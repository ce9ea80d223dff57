use std::path::Path;

use serde::{Deserialize, Serialize};

use limiter_core::engine::GridConfig;
use limiter_core::session::{replay, EventLog};
use limiter_core::synth::{render_performance, wav_encode, RenderConfig, VoiceParams, WavFile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderSummary {
    pub duration_secs: f64,
    /// `null` for a silent file.
    pub peak_dbfs: Option<f64>,
    pub samples: usize,
    pub clipped: usize,
}

impl RenderSummary {
    pub fn to_text(&self, path: &Path) -> String {
        let peak = self
            .peak_dbfs
            .map_or("silent".to_string(), |p| format!("peak {p:.2} dBFS"));
        format!(
            "wrote {}: {:.3} s, {}, {} clipped\n",
            path.display(),
            self.duration_secs,
            peak,
            self.clipped
        )
    }
}

/// Replays a log and renders it to WAV bytes.
pub fn render_log(
    log: &EventLog,
    grid: &GridConfig,
    render: &RenderConfig,
    voice: &VoiceParams,
) -> anyhow::Result<(WavFile, RenderSummary)> {
    let played = replay(log, grid)?;
    let pcm = render_performance(&played.effects, render, voice)?;
    let wav = wav_encode(&pcm);
    let peak = pcm.peak_dbfs();
    let summary = RenderSummary {
        duration_secs: pcm.duration_secs(),
        peak_dbfs: peak.is_finite().then_some(peak),
        samples: pcm.samples.len(),
        clipped: wav.clipped,
    };
    Ok((wav, summary))
}
