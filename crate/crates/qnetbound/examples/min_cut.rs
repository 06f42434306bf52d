//! Exhaustive enumeration vs augmenting-path max-flow on a random-ish
//! two-column network: both must find the same bottleneck.
//!
//! ```bash
//! cargo run --release --example min_cut
//! ```

use qnetbound::network::maxflow_value;
use qnetbound::{
    make_channel, min_cut, ChannelKind, Edge, MeasureCache, MinCutMethod, NetworkGraph, Overrides,
    WeightPolicy,
};

fn edge(from: &str, to: &str, kind: ChannelKind, param: f64, uses: f64) -> Edge {
    Edge {
        from: from.into(),
        to: to.into(),
        channel: make_channel(kind, param).expect("valid param"),
        avg_uses: uses,
        overrides: Overrides::default(),
    }
}

fn main() -> qnetbound::Result<()> {
    let nodes: Vec<String> = ["A", "C1", "C2", "C3", "C4", "C5", "C6", "B"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let edges = vec![
        edge("A", "C1", ChannelKind::Dephasing, 0.1, 2.0),
        edge("A", "C2", ChannelKind::Erasure, 0.2, 1.0),
        edge("A", "C3", ChannelKind::Depolarizing, 0.3, 1.5),
        edge("C1", "C4", ChannelKind::AmplitudeDamping, 0.5, 1.0),
        edge("C2", "C4", ChannelKind::Dephasing, 0.4, 2.0),
        edge("C2", "C5", ChannelKind::Dephasing, 0.6, 1.0),
        edge("C3", "C5", ChannelKind::Erasure, 0.5, 2.0),
        edge("C3", "C6", ChannelKind::AmplitudeDamping, 0.2, 0.5),
        edge("C5", "C2", ChannelKind::Dephasing, 0.3, 1.0),
        edge("C4", "B", ChannelKind::Dephasing, 0.2, 1.0),
        edge("C5", "B", ChannelKind::Erasure, 0.4, 2.0),
        edge("C6", "B", ChannelKind::Depolarizing, 0.1, 1.0),
    ];
    let graph = NetworkGraph::new(nodes, edges)?;
    let cache = MeasureCache::new();

    let ex = min_cut(&graph, WeightPolicy::Versatile, MinCutMethod::Exhaustive, &cache)?;
    println!(
        "exhaustive ({} cuts): C_A = {:?}, value = {:.9}",
        1u64 << graph.intermediates().len(),
        ex.cut.names().collect::<Vec<_>>(),
        ex.e_versatile
    );

    let (cut, flow) = maxflow_value(&graph, WeightPolicy::Versatile, &cache)?;
    println!(
        "max-flow:             C_A = {:?}, value = {:.9}",
        cut.names().collect::<Vec<_>>(),
        flow
    );
    println!("difference: {:.2e}", (ex.e_versatile - flow).abs());
    Ok(())
}
