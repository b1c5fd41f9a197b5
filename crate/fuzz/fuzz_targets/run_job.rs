#![no_main]

//! First line selects the command, the rest is the job document.

use libfuzzer_sys::fuzz_target;
use sepmon::cli::{run, Command, JobConfig};
use sepmon::input::Caps;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (head, body) = text.split_once('\n').unwrap_or(("atoms", text));
    let Ok(command) = head.trim().parse::<Command>() else {
        return;
    };
    if command == Command::Oracle {
        return; // exponential by design
    }
    let config = JobConfig {
        caps: Caps {
            frontier: Some(5_000),
            degree: Some(24),
        },
        ..JobConfig::new(command)
    };
    let (code, out) = run(&config, body);
    assert!((0..=3).contains(&code));
    let value: serde_json::Value = serde_json::from_str(&out).expect("output is JSON");
    assert_eq!(value.to_string(), out, "output is canonical");
});
