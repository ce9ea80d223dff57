use super::render::{PcmBuffer, BIT_DEPTH, CHANNELS};

/// An encoded file plus how many samples had to be clamped to full scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WavFile {
    pub bytes: Vec<u8>,
    pub clipped: usize,
}

pub const HEADER_LEN: usize = 44;

/// Maps `[-1, 1]` onto `[-32767, 32767]`, clamping anything outside.
pub fn to_pcm16(sample: f32) -> (i16, bool) {
    let clipped = !(-1.0..=1.0).contains(&sample);
    let s = if sample.is_nan() { 0.0 } else { sample.clamp(-1.0, 1.0) };
    ((s as f64 * 32767.0).round() as i16, clipped)
}

/// Canonical 44-byte-header RIFF/WAVE, PCM 16-bit little-endian mono.
pub fn wav_encode(pcm: &PcmBuffer) -> WavFile {
    let block_align = CHANNELS * BIT_DEPTH / 8;
    let byte_rate = pcm.sample_rate * block_align as u32;
    let data_len = (pcm.samples.len() * block_align as usize) as u32;

    let mut out = Vec::with_capacity(HEADER_LEN + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");

    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&CHANNELS.to_le_bytes());
    out.extend_from_slice(&pcm.sample_rate.to_le_bytes());
    out.extend_from_slice(&byte_rate.to_le_bytes());
    out.extend_from_slice(&block_align.to_le_bytes());
    out.extend_from_slice(&BIT_DEPTH.to_le_bytes());

    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    let mut clipped = 0;
    for &s in &pcm.samples {
        let (v, c) = to_pcm16(s);
        clipped += c as usize;
        out.extend_from_slice(&v.to_le_bytes());
    }
    WavFile { bytes: out, clipped }
}
