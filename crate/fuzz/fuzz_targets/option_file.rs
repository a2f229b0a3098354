#![no_main]

use libfuzzer_sys::fuzz_target;
use lfo_cli::config_file;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(pairs) = config_file::parse(text) {
        // every accepted pair must splice into a well-formed argument list
        let args = config_file::splice(vec!["lfo".into(), "run".into()], &pairs);
        assert_eq!(args.len(), 2 + 2 * pairs.len());
    }
});
