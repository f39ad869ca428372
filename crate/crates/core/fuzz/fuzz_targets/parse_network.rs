#![no_main]

use amap_core::io::{parse_network, serialize_network};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(net) = parse_network(text) {
        // anything accepted must survive a round trip
        let again = parse_network(&serialize_network(&net)).expect("serialized network reparses");
        assert_eq!(net, again);
    }
});
