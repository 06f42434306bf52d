//! The four routes to the max-relative entropy of entanglement of the
//! amplitude damping channel: the exact conic program, the two-sided
//! bounding programs, and the symmetry-reduced direct search. The exact
//! value is log2(2 - lambda); the lower bound has a piecewise closed form
//! with a breakpoint at (sqrt(5)-1)/2.
//!
//! ```bash
//! cargo run --release --example emax_methods
//! ```

use qnetbound::{
    ad_lower_closed, emax_lower_sdp, emax_reduced, emax_sigma_sdp, emax_upper_marginal_sdp,
    make_channel, ChannelKind, ReducedVariant,
};

fn main() -> qnetbound::Result<()> {
    println!("amplitude damping channel");
    println!("lambda   lower(sdp)  F(lambda)   sigma(sdp)  marginal(sdp)  reduced(upper)  log2(2-l)");
    for i in 0..=8 {
        let l = i as f64 / 8.0;
        let ch = make_channel(ChannelKind::AmplitudeDamping, l)?;
        let lower = emax_lower_sdp(&ch)?.value;
        let sigma = emax_sigma_sdp(&ch)?.value;
        let upper = emax_upper_marginal_sdp(&ch)?.value;
        let reduced = emax_reduced(&ch, ReducedVariant::Upper)?.value;
        println!(
            "{l:.3}    {lower:.6}    {:.6}    {sigma:.6}    {upper:.6}       {reduced:.6}        {:.6}",
            ad_lower_closed(l)?,
            (2.0 - l).log2()
        );
    }

    println!("\ndephasing channel: the program pair collapses on Choi-simulable channels");
    println!("x       lower(sdp)  sigma(sdp)");
    for i in 0..=4 {
        let x = i as f64 / 4.0;
        let ch = make_channel(ChannelKind::Dephasing, x)?;
        println!(
            "{x:.2}    {:.6}    {:.6}",
            emax_lower_sdp(&ch)?.value,
            emax_sigma_sdp(&ch)?.value
        );
    }
    Ok(())
}
