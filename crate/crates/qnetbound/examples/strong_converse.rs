//! Strong converse behaviour: once the attempted rate exceeds the channel
//! entanglement, the failure probability rises to one exponentially in the
//! number of channel uses.
//!
//! ```bash
//! cargo run --release --example strong_converse
//! ```

use qnetbound::{closed_form_measures, strong_converse_error, ChannelKind};

fn main() -> qnetbound::Result<()> {
    // amplitude damping at lambda = 0.5 supports at most log2(1.5) ebits/use
    let e = closed_form_measures(ChannelKind::AmplitudeDamping, 0.5)?
        .e_max
        .expect("closed form")
        .0;
    println!("channel entanglement: {e:.6} bits per use");
    println!("\nerror lower bound at rate = entanglement + 0.25:");
    println!("{:>6}  {}", "uses", "min error");
    for n in [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        println!("{n:>6}  {:.9}", strong_converse_error(e + 0.25, n, e, 2.0));
    }
    println!("\nat the entanglement rate itself the bound is vacuous:");
    println!("{:>6}  {:.9}", 1000, strong_converse_error(e, 1000.0, e, 2.0));
    Ok(())
}
