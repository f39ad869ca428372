#![no_main]

use amap_core::io::{parse_network, parse_problem, serialize_problem};
use amap_core::synth::sprinkler;
use libfuzzer_sys::fuzz_target;

// Input is `network text \0 problem text`; without a separator, or when
// the network does not parse, the problem is read against the sprinkler
// network.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (net, problem_text) = match text.split_once('\0') {
        Some((n, p)) => (parse_network(n).unwrap_or_else(|_| sprinkler()), p),
        None => (sprinkler(), text),
    };
    if let Ok(problem) = parse_problem(problem_text, &net) {
        let again =
            parse_problem(&serialize_problem(&problem, &net), &net).expect("serialized problem reparses");
        assert_eq!(problem, again);
    }
});
