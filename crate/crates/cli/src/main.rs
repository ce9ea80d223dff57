use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use limiter_cli::lattice::{lattice_entries, render_machine, render_text};
use limiter_cli::render::render_log;
use limiter_cli::validate::validate_log;
use limiter_cli::{Cli, Command, Format};
use limiter_core::session::EventLog;
use limiter_core::synth::{RenderConfig, VoiceParams};
use limiter_server::{serve, serve_replay, ReplayOptions, ServeOptions};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Lattice {
            grid,
            system,
            format,
        } => {
            let entries = lattice_entries(&grid.config()?, system);
            match format {
                Format::Text => print!("{}", render_text(&entries, system)),
                Format::Machine => print!("{}", render_machine(&entries)),
            }
        }
        Command::Validate {
            script,
            grid,
            format,
        } => {
            let text = std::fs::read_to_string(&script)
                .with_context(|| format!("cannot read {}", script.display()))?;
            let report = validate_log(&text, &grid.config()?)?;
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Machine => print!("{}", report.to_machine()),
            }
            if !report.is_clean() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Render {
            script,
            output,
            grid,
            sample_rate,
            waveform,
            hold_ms,
            format,
        } => {
            let log = EventLog::read(&script).with_context(|| format!("cannot load {}", script.display()))?;
            let render = RenderConfig {
                sample_rate,
                hold_ms,
            };
            let voice = VoiceParams {
                waveform,
                ..VoiceParams::default()
            };
            let (wav, summary) = render_log(&log, &grid.config()?, &render, &voice)?;
            std::fs::write(&output, &wav.bytes)
                .with_context(|| format!("cannot write {}", output.display()))?;
            match format {
                Format::Text => print!("{}", summary.to_text(&output)),
                Format::Machine => println!("{}", serde_json::to_string(&summary)?),
            }
        }
        Command::Serve { net, grid, log } => {
            let options = ServeOptions {
                grid: grid.config()?,
                log_path: log,
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let server = serve(net.addr(), options).await?;
                eprintln!("listening on ws://{}/ (performer: /performer)", server.local_addr());
                tokio::signal::ctrl_c().await?;
                server.shutdown().await;
                anyhow::Ok(())
            })?;
        }
        Command::Replay {
            log,
            net,
            grid,
            speed,
            no_wait,
        } => {
            anyhow::ensure!(speed.is_finite() && speed > 0.0, "speed must be positive");
            let events = EventLog::read(&log).with_context(|| format!("cannot load {}", log.display()))?;
            let options = ReplayOptions {
                grid: grid.config()?,
                speed,
                wait_for_observer: !no_wait,
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let mut server = serve_replay(net.addr(), events, options).await?;
                eprintln!("replaying on ws://{}/", server.local_addr());
                tokio::select! {
                    _ = server.playback_finished() => {
                        // Let the last messages drain before closing.
                        tokio::time::sleep(std::time::Duration::from_millis(200)).await;
                    }
                    r = tokio::signal::ctrl_c() => r?,
                }
                server.shutdown().await;
                anyhow::Ok(())
            })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
