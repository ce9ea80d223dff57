//! Python bindings. Structured values (snapshots, effects, statuses) cross
//! the boundary as the same JSON the WebSocket protocol uses, decoded with
//! Python's `json` module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use serde::Serialize;

use limiter_core::engine::{Button, Direction, GridConfig, Input};
use limiter_core::session::{replay, EventLog, PerformanceEvent, Session};
use limiter_core::synth::{render_performance, wav_encode, RenderConfig, VoiceParams, Waveform};
use limiter_core::tuning::{self, LatticeCoord, Pitch, Rational, TuningSystem};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn system(limit: u8) -> PyResult<TuningSystem> {
    limit.to_string().parse().map_err(value_err)
}

fn grid(width: i32, height: i32, base_hz: f64) -> PyResult<GridConfig> {
    let config = GridConfig {
        base_pitch: Pitch::new(base_hz).map_err(value_err)?,
        ..GridConfig::with_size(width, height)
    };
    config.validate().map_err(value_err)?;
    Ok(config)
}

/// Octave-reduced ratio at a lattice coordinate, as `(numerator, denominator)`.
#[pyfunction]
#[pyo3(signature = (fifths, limb, system_limit=5))]
fn lattice_ratio(fifths: i32, limb: i32, system_limit: u8) -> PyResult<(u128, u128)> {
    let r = tuning::lattice_ratio(LatticeCoord::new(fifths, limb), system(system_limit)?).map_err(value_err)?;
    Ok((r.numer(), r.denom()))
}

#[pyfunction]
fn ratio_cents(numer: u128, denom: u128) -> PyResult<f64> {
    Ok(tuning::ratio_cents(Rational::new(numer, denom).map_err(value_err)?))
}

#[pyfunction]
#[pyo3(signature = (fifths, limb, system_limit=5, base_hz=440.0))]
fn coord_frequency(fifths: i32, limb: i32, system_limit: u8, base_hz: f64) -> PyResult<f64> {
    let base = Pitch::new(base_hz).map_err(value_err)?;
    let p = tuning::coord_frequency(LatticeCoord::new(fifths, limb), system(system_limit)?, base).map_err(value_err)?;
    Ok(p.hz())
}

#[pyfunction]
#[pyo3(signature = (semitones, base_hz=440.0))]
fn tet_frequency(semitones: i32, base_hz: f64) -> PyResult<f64> {
    Ok(tuning::tet_frequency(semitones, Pitch::new(base_hz).map_err(value_err)?).hz())
}

/// Note name with comma and septimal marks, e.g. `"C# -1 comma"`.
#[pyfunction]
#[pyo3(signature = (fifths, limb, system_limit=5))]
fn helmholtz(fifths: i32, limb: i32, system_limit: u8) -> PyResult<String> {
    Ok(tuning::helmholtz_annotation(LatticeCoord::new(fifths, limb), system(system_limit)?).to_string())
}

/// A live game. Every input is logged, so `log()` replays to the same state.
#[pyclass]
struct Game {
    session: Session,
}

#[pymethods]
impl Game {
    #[new]
    #[pyo3(signature = (width=16, height=16, base_hz=440.0))]
    fn new(width: i32, height: i32, base_hz: f64) -> PyResult<Self> {
        Ok(Game {
            session: Session::new(grid(width, height, base_hz)?).map_err(value_err)?,
        })
    }

    /// Applies a button name or a direction at time `at` (ms). Returns
    /// `{"status": ..., "effects": [...]}`.
    #[pyo3(signature = (name, at=None))]
    fn input<'py>(&mut self, py: Python<'py>, name: &str, at: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
        let input = match name.parse::<Direction>() {
            Ok(d) => Input::Move(d),
            Err(_) => Input::Button(name.parse::<Button>().map_err(value_err)?),
        };
        let at = at.unwrap_or_else(|| self.session.log().last_at());
        let applied = self.session.apply_clamped(PerformanceEvent::new(at, input));
        let out = serde_json::json!({ "status": applied.status, "effects": applied.effects });
        to_py(py, &out)
    }

    fn snapshot<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.session.snapshot())
    }

    /// The session so far in `.limlog` form.
    fn log(&self) -> String {
        self.session.log().to_text()
    }
}

/// Replays `.limlog` text; returns the final snapshot.
#[pyfunction]
#[pyo3(name = "replay", signature = (log_text, width=16, height=16, base_hz=440.0))]
fn replay_log<'py>(py: Python<'py>, log_text: &str, width: i32, height: i32, base_hz: f64) -> PyResult<Bound<'py, PyAny>> {
    let log = EventLog::parse(log_text).map_err(value_err)?;
    let played = replay(&log, &grid(width, height, base_hz)?).map_err(value_err)?;
    to_py(py, &played.snapshots.last())
}

/// Renders `.limlog` text to WAV bytes.
#[pyfunction]
#[pyo3(signature = (log_text, sample_rate=44100, waveform="sine", width=16, height=16, base_hz=440.0))]
fn render_wav<'py>(
    py: Python<'py>,
    log_text: &str,
    sample_rate: u32,
    waveform: &str,
    width: i32,
    height: i32,
    base_hz: f64,
) -> PyResult<Bound<'py, PyBytes>> {
    let log = EventLog::parse(log_text).map_err(value_err)?;
    let played = replay(&log, &grid(width, height, base_hz)?).map_err(value_err)?;
    let render = RenderConfig {
        sample_rate,
        ..RenderConfig::default()
    };
    let voice = VoiceParams {
        waveform: waveform.parse::<Waveform>().map_err(value_err)?,
        ..VoiceParams::default()
    };
    let pcm = render_performance(&played.effects, &render, &voice).map_err(value_err)?;
    Ok(PyBytes::new(py, &wav_encode(&pcm).bytes))
}

#[pymodule]
fn limiter(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(lattice_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_cents, m)?)?;
    m.add_function(wrap_pyfunction!(coord_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(tet_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(helmholtz, m)?)?;
    m.add_function(wrap_pyfunction!(replay_log, m)?)?;
    m.add_function(wrap_pyfunction!(render_wav, m)?)?;
    m.add_class::<Game>()?;
    Ok(())
}
