use std::fmt::Write;

use serde::{Deserialize, Serialize};

use limiter_core::engine::GridConfig;
use limiter_core::tuning::{
    coord_frequency, helmholtz_annotation, lattice_ratio, HelmholtzAnnotation, ratio_cents, Rational, TuningSystem,
};

/// One grid cell's tuning. Cells past the supported exponent range carry no
/// ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeEntry {
    pub row: i32,
    pub col: i32,
    pub fifths: i32,
    pub limb: i32,
    pub ratio: Option<Rational>,
    pub hz: Option<f64>,
    pub cents: Option<f64>,
    pub note: String,
    pub comma: i32,
    pub septimal: i32,
}

pub fn lattice_entries(config: &GridConfig, system: TuningSystem) -> Vec<LatticeEntry> {
    config
        .cells()
        .map(|cell| {
            let coord = config.cell_to_coord(cell).expect("cells() stays on the grid");
            let ratio = lattice_ratio(coord, system).ok();
            let hz = coord_frequency(coord, system, config.base_pitch).ok().map(|p| p.hz());
            let note = helmholtz_annotation(coord, system);
            LatticeEntry {
                row: cell.row,
                col: cell.col,
                fifths: coord.fifths,
                limb: coord.limb,
                ratio,
                hz,
                cents: ratio.map(ratio_cents),
                note: note.pythagorean_note_name,
                comma: note.comma_alteration,
                septimal: note.septimal_alteration,
            }
        })
        .collect()
}

pub fn render_text(entries: &[LatticeEntry], system: TuningSystem) -> String {
    let mut out = format!("{system} lattice\n");
    let _ = writeln!(
        out,
        "{:>4} {:>4} {:>6} {:>5}  {:<22} {:>12} {:>9}  notation",
        "row", "col", "fifths", "limb", "ratio", "hz", "cents"
    );
    for e in entries {
        let ratio = e.ratio.map_or("out of range".to_string(), |r| r.to_string());
        let hz = e.hz.map_or("-".to_string(), |v| format!("{v:.3}"));
        let cents = e.cents.map_or("-".to_string(), |v| format!("{v:.3}"));
        let _ = writeln!(
            out,
            "{:>4} {:>4} {:>6} {:>5}  {:<22} {:>12} {:>9}  {}",
            e.row,
            e.col,
            e.fifths,
            e.limb,
            ratio,
            hz,
            cents,
            notation(e)
        );
    }
    out
}

fn notation(e: &LatticeEntry) -> String {
    HelmholtzAnnotation {
        pythagorean_note_name: e.note.clone(),
        comma_alteration: e.comma,
        septimal_alteration: e.septimal,
    }
    .to_string()
}

pub fn render_machine(entries: &[LatticeEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e).expect("entries serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_machine(text: &str) -> Result<Vec<LatticeEntry>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
