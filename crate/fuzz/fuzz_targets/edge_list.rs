#![no_main]

//! Fuzzes the edge-list parser. Arbitrary text must either parse into a
//! valid graph or return an error; it must never panic.

use libfuzzer_sys::fuzz_target;
use stubborn_opt::parse::load_edge_list;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = load_edge_list(text) {
        assert!(g.node_count() >= 1);
        assert!(g.edge_count() >= 1);
        for v in 0..g.node_count() {
            for &(u, w) in g.neighbors(v) {
                assert!(u < g.node_count());
                assert!(w > 0.0 && w.is_finite());
                assert!(g.has_edge(u, v), "adjacency must be symmetric");
            }
        }
    }
});
