use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use limiter_core::engine::{GridConfig, DEFAULT_FADE_MS};
use limiter_core::synth::Waveform;
use limiter_core::tuning::{Pitch, TuningSystem};

#[derive(Debug, Parser)]
#[command(name = "limiter", version, about = "Just-intonation grid instrument tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the tuning of every grid cell.
    Lattice {
        #[command(flatten)]
        grid: GridArgs,
        /// 5 or 7.
        #[arg(long, default_value = "5", value_parser = parse_system)]
        system: TuningSystem,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Replay a .limlog and report what each event did.
    Validate {
        script: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Replay a .limlog and write the performance as a WAV file.
    Render {
        script: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 44_100)]
        sample_rate: u32,
        #[arg(long, default_value = "sine", value_parser = parse_waveform)]
        waveform: Waveform,
        /// How long the last chord rings when the log never ends the game.
        #[arg(long, default_value_t = 1_000)]
        hold_ms: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a live session endpoint.
    Serve {
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Append every applied event to this .limlog.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Re-broadcast a recorded .limlog to observers at its recorded tempo.
    Replay {
        log: PathBuf,
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1.0)]
        speed: f64,
        /// Start playback immediately instead of waiting for an observer.
        #[arg(long)]
        no_wait: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON object per line.
    Machine,
}

#[derive(Clone, Debug, Args)]
pub struct GridArgs {
    /// Grid size as WIDTHxHEIGHT.
    #[arg(long, default_value = "16x16", value_parser = parse_size)]
    pub grid: (i32, i32),
    /// Lattice origin as ROW,COL. Defaults to the grid center.
    #[arg(long, value_parser = parse_origin)]
    pub origin: Option<(i32, i32)>,
    #[arg(long, default_value_t = 440.0)]
    pub base_hz: f64,
    #[arg(long, default_value_t = DEFAULT_FADE_MS)]
    pub fade_ms: u64,
}

impl GridArgs {
    pub fn config(&self) -> anyhow::Result<GridConfig> {
        let (w, h) = self.grid;
        let mut cfg = GridConfig::with_size(w, h);
        if let Some((r, c)) = self.origin {
            cfg.origin_row = r;
            cfg.origin_col = c;
        }
        cfg.base_pitch = Pitch::new(self.base_hz)?;
        cfg.fade_ms = self.fade_ms;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Args)]
pub struct NetArgs {
    #[arg(long, default_value_t = 8765)]
    pub port: u16,
    #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    pub bind: IpAddr,
}

impl NetArgs {
    pub fn addr(&self) -> SocketAddr {
        SocketAddr::new(self.bind, self.port)
    }
}

fn parse_size(s: &str) -> Result<(i32, i32), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WIDTHxHEIGHT")?;
    Ok((parse_int(w)?, parse_int(h)?))
}

fn parse_origin(s: &str) -> Result<(i32, i32), String> {
    let (r, c) = s.split_once(',').ok_or("expected ROW,COL")?;
    Ok((parse_int(r)?, parse_int(c)?))
}

fn parse_int(s: &str) -> Result<i32, String> {
    s.trim().parse().map_err(|e| format!("{s:?}: {e}"))
}

fn parse_system(s: &str) -> Result<TuningSystem, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_waveform(s: &str) -> Result<Waveform, String> {
    s.parse().map_err(|e| format!("{e}"))
}
