//! Replay against hand-stepped engine calls, determinism, and log round trips.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use limiter_core::engine::{new_game, Button, Direction, EngineEffect, GridConfig, Input, InputStatus};
use limiter_core::session::{
    replay, ClientMessage, EventLog, PerformanceEvent, ServerMessage, Session, SessionSnapshot,
};

fn scripted(seed: u64, n: usize) -> EventLog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Input> = Input::all().collect();
    let mut at = 0;
    let events = (0..n).map(|_| {
        at += rng.gen_range(0..400);
        // Mostly moves and draws so shapes actually get made.
        let input = match rng.gen_range(0..10) {
            0..=3 => Input::Move(Direction::ALL[rng.gen_range(0..4)]),
            4..=6 => Input::Button(Button::Draw),
            7 => Input::Button(Button::Sonify),
            _ => inputs[rng.gen_range(0..inputs.len())],
        };
        PerformanceEvent::new(at, input)
    });
    EventLog::from_events(events).unwrap()
}

#[test]
fn empty_log_replays_to_a_new_game() {
    let cfg = GridConfig::default();
    let out = replay(&EventLog::new(), &cfg).unwrap();
    assert_eq!(out.final_state, new_game(cfg).unwrap());
    assert!(out.effects.is_empty());
    assert_eq!(out.snapshots.len(), 1);
}

#[test]
fn replay_matches_hand_stepped_engine() {
    let cfg = GridConfig::default();
    let log = EventLog::parse(
        r#"{"at":0,"kind":"button","arg":"draw"}
{"at":100,"kind":"move","arg":"right"}
{"at":200,"kind":"button","arg":"draw"}
{"at":300,"kind":"move","arg":"right"}
{"at":400,"kind":"button","arg":"draw"}
{"at":500,"kind":"move","arg":"up"}
{"at":600,"kind":"button","arg":"draw"}
{"at":700,"kind":"button","arg":"sonify"}
"#,
    )
    .unwrap();
    let out = replay(&log, &cfg).unwrap();

    let s = new_game(cfg).unwrap();
    let s = s.press_draw().state;
    let s = s.move_cursor(Direction::Right).state;
    let s = s.press_draw().state;
    let s = s.move_cursor(Direction::Right).state;
    let s = s.press_draw().state;
    let s = s.move_cursor(Direction::Up).state;
    let s = s.press_draw().state;
    let step = s.press_sonify();

    assert_eq!(out.final_state, step.state);
    assert_eq!(out.final_state.history().len(), 1);
    let chords: Vec<_> = out
        .effects
        .iter()
        .filter(|e| matches!(e.effect, EngineEffect::ChordOn { .. }))
        .collect();
    assert_eq!(chords.len(), 1);
    assert_eq!(chords[0].at, 700);
    assert_eq!(chords[0].effect, step.effects[0]);
    assert!(out.statuses.iter().all(|s| *s == InputStatus::Applied));
}

#[test]
fn replaying_twice_is_identical() {
    let log = scripted(7, 200);
    let cfg = GridConfig::default();
    let a = replay(&log, &cfg).unwrap();
    let b = replay(&log, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.snapshots.len(), 201);
}

#[test]
fn live_session_matches_replay_of_its_log() {
    let cfg = GridConfig::default();
    let script = scripted(11, 300);
    let mut live = Session::new(cfg.clone()).unwrap();
    let mut stream = vec![live.snapshot()];
    for &e in script.events() {
        stream.push(live.apply(e).unwrap().snapshot);
    }
    let out = replay(live.log(), &cfg).unwrap();
    assert_eq!(out.snapshots, stream);
    assert_eq!(&out.final_state, live.state());
}

#[test]
fn clamped_timestamps_keep_the_log_monotone() {
    let mut live = Session::new(GridConfig::default()).unwrap();
    live.apply_clamped(PerformanceEvent::pressed(50, Button::Draw));
    let applied = live.apply_clamped(PerformanceEvent::moved(10, Direction::Up));
    assert_eq!(applied.event.at, 50);
    assert_eq!(live.log().last_at(), 50);
    assert!(EventLog::parse(&live.log().to_text()).is_ok());
}

#[test]
fn snapshots_survive_the_wire() {
    let out = replay(&scripted(3, 120), &GridConfig::default()).unwrap();
    for snap in &out.snapshots {
        let json = ServerMessage::Snapshot(snap.clone()).to_json();
        match ServerMessage::parse(&json).unwrap() {
            ServerMessage::Snapshot(back) => assert_eq!(&back, snap),
            other => panic!("unexpected {other:?}"),
        }
    }
}

#[test]
fn snapshot_reflects_state() {
    let out = replay(&scripted(5, 150), &GridConfig::default()).unwrap();
    let state = &out.final_state;
    let snap: &SessionSnapshot = out.snapshots.last().unwrap();
    assert_eq!(snap.history_len, state.history().len());
    assert_eq!(snap.cursor, state.cursor());
    assert_eq!(snap.pending, state.pending());
    assert_eq!(snap.cells.len(), state.lit_cells().len());
    assert_eq!(snap.seq, 150);
}

fn event() -> impl Strategy<Value = (u64, usize)> {
    (0u64..1000, 0usize..12)
}

proptest! {
    #[test]
    fn log_text_round_trips(raw in proptest::collection::vec(event(), 0..100)) {
        let inputs: Vec<Input> = Input::all().collect();
        let mut at = 0;
        let log = EventLog::from_events(raw.into_iter().map(|(gap, i)| {
            at += gap;
            PerformanceEvent::new(at, inputs[i])
        }))
        .unwrap();
        let text = log.to_text();
        let back = EventLog::parse(&text).unwrap();
        prop_assert_eq!(&back, &log);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn client_messages_round_trip(at in 0u64..u64::MAX / 2, i in 0usize..12) {
        let input = Input::all().nth(i).unwrap();
        let e = PerformanceEvent::new(at, input);
        prop_assert_eq!(ClientMessage::parse(&ClientMessage::input(&e).to_json()).unwrap(), e);
    }
}
