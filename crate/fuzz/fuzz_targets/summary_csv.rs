#![no_main]

use libfuzzer_sys::fuzz_target;
use lfo::harness::read_summary_csv;

fuzz_target!(|data: &[u8]| {
    let _ = read_summary_csv(data);
});
