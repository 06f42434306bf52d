//! Upper bounds on the entanglement (ebits or private bits) two parties can
//! extract from a quantum network, evaluated channel by channel.
//!
//! The crate models a network as a directed multigraph of qubit channels,
//! weighs each bipartition by the entanglement its crossing channels can
//! generate (relative entropy of entanglement on Choi-simulable channels,
//! max-relative entropy of entanglement on the rest), and turns the minimum
//! cut into a bound on the ebits shared at a given error threshold. The
//! max-relative entropy of entanglement is computed exactly for qubit
//! channels by a built-in interior-point solver over the PPT cone, with a
//! symmetry-reduced direct search as an independent route.
//!
//! Start with the runnable examples:
//!
//! ```text
//! examples/
//! ├── divergences.rs      # max-relative vs Umegaki relative entropy
//! ├── channel_report.rs   # closed-form and solver measures per channel
//! ├── emax_methods.rs     # the three conic programs and the reduced search
//! ├── network_bound.rs    # cut weights and ebit bounds for a small network
//! ├── min_cut.rs          # exhaustive vs max-flow minimum cuts
//! ├── mu_sweep.rs         # squashed-vs-versatile advantage sweep to CSV
//! └── strong_converse.rs  # error curve beyond the bound
//! ```
//!
//! Run one with `cargo run --release --example network_bound`. The same
//! functionality is scriptable through the thin `qnetbound` binary
//! (`channel`, `emax`, `network`, `sweep`, `verify` subcommands), and
//! `qnetbound verify` replays the full verification suite.

pub mod channels;
pub mod cli;
pub mod emax;
pub mod error;
pub mod linalg;
pub mod network;
pub mod sdp;
pub mod verify;

#[cfg(test)]
pub(crate) mod testutil;

pub use channels::{
    ad_lower_closed, binary_entropy, closed_form_measures, make_channel, maximally_entangled,
    Channel, ChannelKind, ChannelMeasures, MeasureMethod,
};
pub use emax::{
    emax_lower_sdp, emax_reduced, emax_reduced_auto, emax_sigma_sdp, emax_upper_marginal_sdp,
    EmaxMethod, EmaxResult, PhaseCovariantSeparable, ReducedVariant,
};
pub use error::{Error, Result};
pub use linalg::{
    dmax, eig_hermitian, kron, relative_entropy, BipartiteState, ComplexMatrix, HermitianMatrix,
    Subsystem,
};
pub use network::{
    cut_edges, cut_entanglement, ebit_upper_bound, evaluate_cut, min_cut, mu_tilde,
    strong_converse_error, ContinuityProfile, Cut, CutBound, Edge, Measure, MeasureCache,
    MinCutMethod, NetworkFile, NetworkGraph, Overrides, ProfileMeasure, WeightPolicy,
};
