use std::io::Cursor;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use limiter_cli::lattice::parse_machine;
use limiter_core::session::ServerMessage;

fn limiter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_limiter"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn lattice_text_has_the_basic_ratios() {
    let out = limiter(&["lattice"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1/1") && text.contains("3/2") && text.contains("5/4"));
    let seven = stdout(&limiter(&["lattice", "--system", "7"]));
    assert!(seven.contains("7/4") && seven.contains("968.826"));
}

#[test]
fn lattice_machine_output_parses_back() {
    let out = limiter(&["lattice", "--grid", "8x6", "--origin", "2,3", "--base-hz", "261.6", "--format", "machine"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let entries = parse_machine(&stdout(&out)).unwrap();
    assert_eq!(entries.len(), 48);
    let origin = entries.iter().find(|e| e.row == 2 && e.col == 3).unwrap();
    assert_eq!((origin.fifths, origin.limb, origin.hz), (0, 0, Some(261.6)));
}

#[test]
fn bad_flags_fail_with_usage() {
    let out = limiter(&["lattice", "--grid", "2x2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("grid width"));
    let out = limiter(&["lattice", "--nope"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("Usage"));
    assert!(!limiter(&["frobnicate"]).status.success());
}

#[test]
fn validate_reports() {
    let ok = limiter(&["validate", &fixture("square.limlog")]);
    assert!(ok.status.success());
    assert!(stdout(&ok).ends_with("10 events, 0 malformed\n"));

    let rejected = limiter(&["validate", &fixture("no_overlap.limlog")]);
    assert!(rejected.status.success());
    let last_event = stdout(&rejected).lines().rev().nth(1).unwrap().to_string();
    assert!(last_event.contains("rejected NoOverlap"), "{last_event}");

    let broken = limiter(&["validate", &fixture("truncated.limlog")]);
    assert!(!broken.status.success());
    let text = stdout(&broken);
    assert!(text.contains("line    3  malformed"));
    assert!(text.ends_with("3 events, 1 malformed\n"));

    let missing = limiter(&["validate", "/definitely/not/here.limlog"]);
    assert!(!missing.status.success());
    assert!(stderr(&missing).contains("cannot read"));
}

fn render_to(dir: &Path, script: &str, name: &str, extra: &[&str]) -> (PathBuf, Output) {
    let path = dir.join(name);
    let mut args = vec!["render", script, "-o", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = limiter(&args);
    (path, out)
}

#[test]
fn render_writes_a_deterministic_wav() {
    let dir = tempfile::tempdir().unwrap();
    let script = fixture("square.limlog");
    let (a, out) = render_to(dir.path(), &script, "a.wav", &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let msg = stdout(&out);
    assert!(msg.contains("10.000 s") && msg.contains("dBFS") && msg.contains("0 clipped"), "{msg}");
    let (b, _) = render_to(dir.path(), &script, "b.wav", &[]);
    let hash = |p: &Path| Sha256::digest(std::fs::read(p).unwrap());
    assert_eq!(hash(&a), hash(&b));

    let reader = hound::WavReader::open(&a).unwrap();
    assert_eq!(reader.spec().sample_rate, 44_100);
    assert_eq!(reader.duration(), 10 * 44_100);

    let (c, out) = render_to(dir.path(), &script, "c.wav", &["--sample-rate", "22050", "--format", "machine"]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(summary["samples"], 10 * 22_050);
    assert_eq!(hound::WavReader::open(&c).unwrap().spec().sample_rate, 22_050);

    let (_, out) = render_to(dir.path(), &script, "d.wav", &["--sample-rate", "12345"]);
    assert!(!out.status.success());
}

#[test]
fn empty_script_renders_an_empty_wav() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.limlog");
    std::fs::write(&empty, "").unwrap();
    let (wav, out) = render_to(dir.path(), empty.to_str().unwrap(), "e.wav", &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("silent"));
    let bytes = std::fs::read(wav).unwrap();
    assert_eq!(bytes.len(), 44);
    assert_eq!(hound::WavReader::new(Cursor::new(bytes)).unwrap().duration(), 0);
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

/// Retries until the child is accepting connections.
fn connect(port: u16, path: &str) -> tungstenite::WebSocket<tungstenite::stream::MaybeTlsStream<std::net::TcpStream>> {
    let deadline = Instant::now() + Duration::from_secs(10);
    loop {
        match tungstenite::connect(format!("ws://127.0.0.1:{port}{path}")) {
            Ok((ws, _)) => return ws,
            Err(_) if Instant::now() < deadline => std::thread::sleep(Duration::from_millis(50)),
            Err(e) => panic!("could not connect: {e}"),
        }
    }
}

fn read(ws: &mut tungstenite::WebSocket<tungstenite::stream::MaybeTlsStream<std::net::TcpStream>>) -> ServerMessage {
    loop {
        if let tungstenite::Message::Text(t) = ws.read().unwrap() {
            return ServerMessage::parse(&t).unwrap();
        }
    }
}

#[test]
fn serve_sends_a_snapshot_on_connect() {
    let port = free_port();
    let mut child = Command::new(env!("CARGO_BIN_EXE_limiter"))
        .args(["serve", "--port", &port.to_string(), "--grid", "8x8"])
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut ws = connect(port, "/performer");
    assert!(matches!(read(&mut ws), ServerMessage::Welcome { .. }));
    match read(&mut ws) {
        ServerMessage::Snapshot(s) => assert_eq!((s.width, s.height, s.seq), (8, 8, 0)),
        other => panic!("expected a snapshot, got {other:?}"),
    }
    ws.send(tungstenite::Message::text(r#"{"type":"input","at":3,"kind":"button","arg":"draw"}"#))
        .unwrap();
    loop {
        if let ServerMessage::Snapshot(s) = read(&mut ws) {
            assert_eq!(s.pending.len(), 1);
            break;
        }
    }
    child.kill().unwrap();
    child.wait().unwrap();
}

#[test]
fn serve_on_an_occupied_port_fails_cleanly() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let out = limiter(&["serve", "--port", &port]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("cannot listen"), "{}", stderr(&out));
}

#[test]
fn replay_plays_a_log_and_exits() {
    let port = free_port();
    let start = Instant::now();
    let child = Command::new(env!("CARGO_BIN_EXE_limiter"))
        .args(["replay", &fixture("square.limlog"), "--port", &port.to_string(), "--speed", "4"])
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut ws = connect(port, "/");
    assert!(matches!(read(&mut ws), ServerMessage::Welcome { .. }));
    let mut last_seq = 0;
    while last_seq < 10 {
        if let ServerMessage::Snapshot(s) = read(&mut ws) {
            last_seq = s.seq;
        }
    }
    let status = child.wait_with_output().unwrap().status;
    assert!(status.success());
    // 5 s of recording at 4x.
    assert!(start.elapsed() >= Duration::from_millis(1200));
}
