//! Entanglement measures for the four named qubit channels on a small
//! parameter grid: relative entropy of entanglement, squashed-entanglement
//! upper bound, and max-relative entropy of entanglement.
//!
//! ```bash
//! cargo run --release --example channel_report
//! ```

use qnetbound::{closed_form_measures, emax_sigma_sdp, make_channel, ChannelKind};

fn main() -> qnetbound::Result<()> {
    let kinds = [
        ChannelKind::Dephasing,
        ChannelKind::Erasure,
        ChannelKind::Depolarizing,
        ChannelKind::AmplitudeDamping,
    ];
    for kind in kinds {
        println!("{} (choi_simulable = {})", kind.name(), kind != ChannelKind::AmplitudeDamping);
        println!("  param      e_r     e_sq_ub  e_max(sdp)");
        for i in 0..=4 {
            let p = i as f64 / 4.0;
            let m = closed_form_measures(kind, p)?;
            let sdp = emax_sigma_sdp(&make_channel(kind, p)?)?;
            let fmt = |v: Option<f64>| match v {
                Some(v) => format!("{v:8.6}"),
                None => "       -".into(),
            };
            println!(
                "  {p:.2}   {}  {}    {:8.6}",
                fmt(m.e_r.map(|(v, _)| v)),
                fmt(m.e_sq_ub),
                sdp.value
            );
        }
        println!();
    }
    Ok(())
}
