//! Max-relative entropy vs Umegaki relative entropy on a few states.
//!
//! ```bash
//! cargo run --release --example divergences
//! ```

use qnetbound::linalg::{cr, ComplexMatrix, HermitianMatrix};
use qnetbound::maximally_entangled;
use qnetbound::{dmax, relative_entropy, BipartiteState};

fn main() -> qnetbound::Result<()> {
    let psi = maximally_entangled(2);
    let mixed = BipartiteState::density(
        HermitianMatrix::new(ComplexMatrix::identity(4).scale(cr(0.25)))?,
        2,
        2,
    )?;

    println!("maximally entangled state vs maximally mixed state:");
    println!("  S(psi || I/4)     = {:.6} bits", psi.relative_entropy(&mixed)?);
    println!("  D_max(psi || I/4) = {:.6} bits", psi.dmax(&mixed)?);

    // mixing with noise brings both divergences down
    println!("\nwerner-like family rho(p) = p psi + (1-p) I/4:");
    for p in [1.0, 0.8, 0.5, 0.2] {
        let rho = BipartiteState::density(
            HermitianMatrix::new(
                psi.matrix()
                    .scale(cr(p))
                    .add(&ComplexMatrix::identity(4).scale(cr((1.0 - p) / 4.0))),
            )?,
            2,
            2,
        )?;
        println!(
            "  p = {p:.1}: S = {:.6}, D_max = {:.6}",
            rho.relative_entropy(&mixed)?,
            rho.dmax(&mixed)?
        );
    }

    // support violation saturates to infinity
    let ket0 = HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]))?;
    let ket1 = HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]))?;
    println!("\nsupport violation: D_max(|0><0| || |1><1|) = {}", dmax(&ket0, &ket1)?);
    println!("                    S(|0><0| || |1><1|)     = {}", relative_entropy(&ket0, &ket1)?);
    Ok(())
}
