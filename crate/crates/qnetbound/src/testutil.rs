//! Shared helpers for unit tests: seeded random operators and common states.

use rand::Rng;

use crate::linalg::{c, cr, BipartiteState, ComplexMatrix, HermitianMatrix};

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, cr(rng.gen_range(-1.0..1.0)));
        for j in (i + 1)..n {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermitianMatrix::new(m).unwrap()
}

/// Ginibre-style random density matrix: `G G†` normalized to unit trace.
pub fn random_density(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    let gg = g.mul(&g.adjoint());
    let tr = gg.trace().re;
    HermitianMatrix::new(gg.scale(cr(1.0 / tr))).unwrap()
}

/// Random unitary: the eigenvector matrix of a random Hermitian operator.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    random_hermitian(rng, n).eig().unwrap().1
}

/// Maximally entangled state on `d x d`.
pub fn psi(d: usize) -> BipartiteState {
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m.set(i * d + i, j * d + j, cr(1.0 / d as f64));
        }
    }
    BipartiteState::density(HermitianMatrix::new(m).unwrap(), d, d).unwrap()
}
