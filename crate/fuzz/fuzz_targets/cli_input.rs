#![no_main]

use libfuzzer_sys::fuzz_target;

// Inline JSON only: anything else would be read as a path.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if !text.trim_start().starts_with(['{', '[']) {
        return;
    }
    for cmd in ["cone-plan", "commutant-check", "jet-extend", "pushforward"] {
        let code = mucut_cli::run_with_io(["mucut", cmd, text], &mut std::io::sink(), &mut std::io::sink());
        assert!((0..=2).contains(&code));
    }
});
