//! WebSocket endpoint for a live session.
//!
//! One task owns the [`Session`]; connections talk to it over a channel, so
//! events are applied strictly one at a time. Whatever the session produces
//! is serialized once and fanned out on a broadcast channel.
//!
//! A client connecting on [`PERFORMER_PATH`] becomes the performer; any other
//! path makes it an observer. Only one performer may be connected at a time.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use futures_util::{SinkExt, StreamExt};
use thiserror::Error;
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::{broadcast, mpsc, oneshot, watch};
use tokio::task::JoinHandle;
use tokio::time::Instant;
use tokio_tungstenite::tungstenite::handshake::server::{ErrorResponse, Request, Response};
use tokio_tungstenite::tungstenite::Message;

use limiter_core::engine::GridConfig;
use limiter_core::session::{
    Applied, ClientMessage, EventLog, LogWriter, PerformanceEvent, Role, ServerMessage, Session,
    SessionError,
};

pub const PERFORMER_PATH: &str = "/performer";

/// Messages buffered per slow client before it is resynchronized.
const BROADCAST_CAPACITY: usize = 1024;

#[derive(Debug, Error)]
pub enum ServerError {
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error("cannot open session log: {0}")]
    Log(std::io::Error),
    #[error(transparent)]
    Session(#[from] SessionError),
}

#[derive(Clone, Debug, Default)]
pub struct ServeOptions {
    pub grid: GridConfig,
    /// Every applied event is appended here.
    pub log_path: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct ReplayOptions {
    pub grid: GridConfig,
    /// Playback tempo relative to the recording; 2.0 plays twice as fast.
    pub speed: f64,
    /// Hold playback until the first observer connects.
    pub wait_for_observer: bool,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        ReplayOptions {
            grid: GridConfig::default(),
            speed: 1.0,
            wait_for_observer: true,
        }
    }
}

enum Command {
    Join {
        role: Role,
        reply: oneshot::Sender<Result<Joined, String>>,
    },
    LeavePerformer,
    Input(PerformanceEvent),
    Resync {
        reply: oneshot::Sender<String>,
    },
    Log {
        reply: oneshot::Sender<EventLog>,
    },
}

struct Joined {
    snapshot: String,
    updates: broadcast::Receiver<Arc<str>>,
}

/// Owns the session. Runs until every command sender is gone.
struct Hub {
    session: Session,
    writer: Option<LogWriter>,
    performer: bool,
    accept_performer: bool,
    updates: broadcast::Sender<Arc<str>>,
    observers: watch::Sender<usize>,
}

impl Hub {
    fn run(mut self, mut commands: mpsc::UnboundedReceiver<Command>) {
        while let Some(cmd) = commands.blocking_recv() {
            match cmd {
                Command::Join { role, reply } => {
                    let _ = reply.send(self.join(role));
                }
                Command::LeavePerformer => self.performer = false,
                Command::Input(event) => {
                    let applied = self.session.apply_clamped(event);
                    if let Some(w) = &mut self.writer {
                        if let Err(e) = w.append(&applied.event) {
                            eprintln!("session log write failed: {e}");
                        }
                    }
                    self.publish(applied);
                }
                Command::Resync { reply } => {
                    let _ = reply.send(self.snapshot_json());
                }
                Command::Log { reply } => {
                    let _ = reply.send(self.session.log().clone());
                }
            }
        }
    }

    fn join(&mut self, role: Role) -> Result<Joined, String> {
        match role {
            Role::Performer if !self.accept_performer => {
                return Err("this session does not take a performer".into())
            }
            Role::Performer if self.performer => return Err("a performer is already connected".into()),
            Role::Performer => self.performer = true,
            Role::Observer => self.observers.send_modify(|n| *n += 1),
        }
        Ok(Joined {
            snapshot: self.snapshot_json(),
            updates: self.updates.subscribe(),
        })
    }

    fn snapshot_json(&self) -> String {
        ServerMessage::Snapshot(self.session.snapshot()).to_json()
    }

    fn publish(&self, applied: Applied) {
        let at = applied.event.at;
        let mut out = vec![ServerMessage::Result {
            seq: applied.snapshot.seq,
            at,
            status: applied.status,
        }];
        out.extend(applied.effects.into_iter().map(|effect| ServerMessage::Effect { at, effect }));
        out.push(ServerMessage::Snapshot(applied.snapshot));
        for msg in out {
            // No receivers is fine.
            let _ = self.updates.send(msg.to_json().into());
        }
    }
}

/// A running endpoint. Dropping it does not stop the server; call
/// [`RunningServer::shutdown`].
pub struct RunningServer {
    addr: SocketAddr,
    commands: mpsc::UnboundedSender<Command>,
    stop: watch::Sender<bool>,
    accept_task: JoinHandle<()>,
    feeder: Option<JoinHandle<()>>,
}

impl RunningServer {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    /// Events applied so far, with the timestamps actually used.
    pub async fn session_log(&self) -> EventLog {
        let (reply, rx) = oneshot::channel();
        let _ = self.commands.send(Command::Log { reply });
        rx.await.unwrap_or_default()
    }

    /// Resolves when a replay has fed its last event. Never resolves for a
    /// live session.
    pub async fn playback_finished(&mut self) {
        match self.feeder.as_mut() {
            Some(task) => {
                let _ = task.await;
                self.feeder = None;
            }
            None => std::future::pending().await,
        }
    }

    pub async fn shutdown(self) {
        let _ = self.stop.send(true);
        let _ = self.accept_task.await;
        if let Some(f) = self.feeder {
            f.abort();
        }
    }
}

async fn bind(addr: SocketAddr) -> Result<TcpListener, ServerError> {
    TcpListener::bind(addr)
        .await
        .map_err(|source| ServerError::Bind { addr, source })
}

struct Spawned {
    addr: SocketAddr,
    commands: mpsc::UnboundedSender<Command>,
    stop: watch::Sender<bool>,
    accept_task: JoinHandle<()>,
    observers: watch::Receiver<usize>,
}

async fn spawn(
    addr: SocketAddr,
    grid: GridConfig,
    writer: Option<LogWriter>,
    accept_performer: bool,
) -> Result<Spawned, ServerError> {
    let session = Session::new(grid)?;
    let listener = bind(addr).await?;
    let addr = listener.local_addr().map_err(|source| ServerError::Bind { addr, source })?;
    let (updates, _) = broadcast::channel(BROADCAST_CAPACITY);
    let (observers_tx, observers) = watch::channel(0);
    let (commands, rx) = mpsc::unbounded_channel();
    let hub = Hub {
        session,
        writer,
        performer: false,
        accept_performer,
        updates,
        observers: observers_tx,
    };
    tokio::task::spawn_blocking(move || hub.run(rx));

    let (stop, stop_rx) = watch::channel(false);
    let accept_task = tokio::spawn(accept_loop(listener, commands.clone(), stop_rx));
    Ok(Spawned {
        addr,
        commands,
        stop,
        accept_task,
        observers,
    })
}

/// Starts a live session on `addr`. Port 0 picks a free port.
pub async fn serve(addr: SocketAddr, options: ServeOptions) -> Result<RunningServer, ServerError> {
    let writer = match &options.log_path {
        Some(p) => Some(LogWriter::create(p).map_err(ServerError::Log)?),
        None => None,
    };
    let s = spawn(addr, options.grid, writer, true).await?;
    Ok(RunningServer {
        addr: s.addr,
        commands: s.commands,
        stop: s.stop,
        accept_task: s.accept_task,
        feeder: None,
    })
}

/// Re-performs a recorded log for observers at the recorded tempo scaled by
/// `options.speed`.
pub async fn serve_replay(
    addr: SocketAddr,
    log: EventLog,
    options: ReplayOptions,
) -> Result<RunningServer, ServerError> {
    let speed = if options.speed.is_finite() && options.speed > 0.0 {
        options.speed
    } else {
        1.0
    };
    let s = spawn(addr, options.grid, None, false).await?;
    let commands = s.commands.clone();
    let mut observers = s.observers;
    let wait = options.wait_for_observer;
    let feeder = tokio::spawn(async move {
        if wait {
            let _ = observers.wait_for(|&n| n > 0).await;
        }
        let start = Instant::now();
        let first = log.events().first().map_or(0, |e| e.at);
        for &event in log.events() {
            let offset = Duration::from_secs_f64((event.at - first) as f64 / 1000.0 / speed);
            tokio::time::sleep_until(start + offset).await;
            if commands.send(Command::Input(event)).is_err() {
                break;
            }
        }
    });
    Ok(RunningServer {
        addr: s.addr,
        commands: s.commands,
        stop: s.stop,
        accept_task: s.accept_task,
        feeder: Some(feeder),
    })
}

async fn accept_loop(
    listener: TcpListener,
    commands: mpsc::UnboundedSender<Command>,
    mut stop: watch::Receiver<bool>,
) {
    let mut connections = Vec::new();
    loop {
        tokio::select! {
            _ = stop.changed() => break,
            accepted = listener.accept() => {
                let Ok((stream, _)) = accepted else { continue };
                connections.push(tokio::spawn(connection(stream, commands.clone(), stop.clone())));
                connections.retain(|c| !c.is_finished());
            }
        }
    }
    for c in connections {
        c.abort();
    }
}

async fn connection(
    stream: TcpStream,
    commands: mpsc::UnboundedSender<Command>,
    mut stop: watch::Receiver<bool>,
) {
    let mut path = String::new();
    let callback = |req: &Request, resp: Response| {
        path = req.uri().path().to_string();
        Ok::<_, ErrorResponse>(resp)
    };
    let Ok(ws) = tokio_tungstenite::accept_hdr_async(stream, callback).await else {
        return;
    };
    let role = if path == PERFORMER_PATH {
        Role::Performer
    } else {
        Role::Observer
    };
    let (mut sink, mut incoming) = ws.split();
    let send = |msg: &ServerMessage| Message::text(msg.to_json());

    let (reply, rx) = oneshot::channel();
    if commands.send(Command::Join { role, reply }).is_err() {
        return;
    }
    let joined = match rx.await {
        Ok(Ok(j)) => j,
        Ok(Err(message)) => {
            let _ = sink.send(send(&ServerMessage::Error { message })).await;
            let _ = sink.close().await;
            return;
        }
        Err(_) => return,
    };
    let Joined {
        snapshot,
        mut updates,
    } = joined;

    let hello = [send(&ServerMessage::Welcome { role }), Message::text(snapshot)];
    for m in hello {
        if sink.send(m).await.is_err() {
            return leave(&commands, role);
        }
    }

    loop {
        tokio::select! {
            _ = stop.changed() => break,
            update = updates.recv() => match update {
                Ok(json) => {
                    if sink.send(Message::text(&*json)).await.is_err() {
                        break;
                    }
                }
                Err(broadcast::error::RecvError::Lagged(_)) => {
                    let (reply, rx) = oneshot::channel();
                    if commands.send(Command::Resync { reply }).is_err() {
                        break;
                    }
                    let Ok(json) = rx.await else { break };
                    if sink.send(Message::text(json)).await.is_err() {
                        break;
                    }
                }
                Err(broadcast::error::RecvError::Closed) => break,
            },
            frame = incoming.next() => {
                let text = match frame {
                    Some(Ok(Message::Text(t))) => t.to_string(),
                    Some(Ok(Message::Close(_))) | None | Some(Err(_)) => break,
                    Some(Ok(_)) => continue,
                };
                let error = match (role, ClientMessage::parse(&text)) {
                    (Role::Observer, _) => Some("observers cannot send input".to_string()),
                    (Role::Performer, Err(e)) => Some(format!("malformed message: {e}")),
                    (Role::Performer, Ok(event)) => {
                        if commands.send(Command::Input(event)).is_err() {
                            break;
                        }
                        None
                    }
                };
                if let Some(message) = error {
                    if sink.send(send(&ServerMessage::Error { message })).await.is_err() {
                        break;
                    }
                }
            }
        }
    }
    let _ = sink.close().await;
    leave(&commands, role);
}

fn leave(commands: &mpsc::UnboundedSender<Command>, role: Role) {
    if role == Role::Performer {
        let _ = commands.send(Command::LeavePerformer);
    }
}
