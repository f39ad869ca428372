#![no_main]

use amap_core::io::{read_report, write_report};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = read_report(text) {
        let _ = read_report(&write_report(&rows));
    }
});
