#![no_main]

use imatch_core::model::{deserialize_graph, serialize_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(graph) = deserialize_graph(data) {
        let bytes = serialize_graph(&graph);
        let again = deserialize_graph(&bytes).expect("re-serialized graph parses");
        assert_eq!(serialize_graph(&again), bytes);
    }
});
