//! Max-relative entropy of entanglement of a channel, by three semidefinite
//! programs over the PPT cone and by a symmetry-reduced direct search.
//!
//! The PPT cone coincides with the separable cone only on 2x2 and 2x3
//! systems, so the SDP routes insist on qubit input and output dimension 2
//! or 3. The reduced search applies to phase-covariant qubit channels, whose
//! optimal separable reference state can be taken from a five-parameter
//! family.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{Channel, ChannelKind};
use crate::error::{Error, Result};
use crate::linalg::{c, cr, BipartiteState, ComplexMatrix, HermitianMatrix};
use crate::sdp::{self, AffineBlock, Equality, SdpProblem};

/// Seed for the multi-start search; fixed for reproducible runs.
pub const REDUCED_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

const STARTS: usize = 64;
const COORD_TOL: f64 = 1e-8;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmaxMethod {
    SigmaSdp,
    LowerSdp,
    UpperMarginalSdp,
    Reduced,
}

/// Which side of the two-sided bound the reduced search evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedVariant {
    /// Minimum over the full phase-covariant separable family; equals the
    /// channel value on Choi-simulable channels.
    Lower,
    /// Adds the maximally mixed marginal constraint (`γ = 1-α`, `δ = 1-β`);
    /// always a valid upper bound.
    Upper,
}

#[derive(Debug, Clone, Copy)]
pub struct EmaxResult {
    /// Bits; never meaningfully below zero.
    pub value: f64,
    pub method: EmaxMethod,
    /// Duality measure reported by the solver; zero for the reduced search.
    pub solver_gap: f64,
}

fn require_ppt_exact(ch: &Channel) -> Result<()> {
    if ch.dim_in != 2 || !(ch.dim_out == 2 || ch.dim_out == 3) {
        return Err(Error::UnsupportedDims {
            dim_in: ch.dim_in,
            dim_out: ch.dim_out,
        });
    }
    Ok(())
}

/// Partial transpose over the B factor of an arbitrary square matrix on
/// `A ⊗ B`.
fn pt_b(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..da {
            for b in 0..db {
                for bp in 0..db {
                    out.set(i * db + b, j * db + bp, m.get(i * db + bp, j * db + b));
                }
            }
        }
    }
    out
}

fn tr_b(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(da, da);
    for i in 0..da {
        for j in 0..da {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for b in 0..db {
                acc += m.get(i * db + b, j * db + b);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Strictly feasible `Y0 = scale·π + c·I` with `c = 2d·λ_max(π) + 1`, which
/// keeps both `Y0 - scale·π` and the partial transpose of `Y0` positive.
fn feasible_y0(pi: &BipartiteState, scale: f64) -> Result<HermitianMatrix> {
    let d = pi.dim_a() as f64;
    let c0 = 2.0 * d * pi.hermitian().max_eigenvalue()? + 1.0;
    Ok(pi
        .hermitian()
        .scale(scale)
        .add(&HermitianMatrix::identity(pi.dim()).scale(c0)))
}

/// `Σ(N)` program: minimize `‖Tr_B Y‖_∞` over PPT-cone operators with
/// `Y ⪰ d·π`, via the epigraph block `t·I - Tr_B Y ⪰ 0`. The channel value
/// is `log2` of the optimum.
pub fn emax_sigma_sdp(ch: &Channel) -> Result<EmaxResult> {
    require_ppt_exact(ch)?;
    let pi = ch.choi();
    let (da, db) = (pi.dim_a(), pi.dim_b());
    let d = da as f64;
    let n = da * db;
    let nv = n * n + 1; // Y coordinates plus the epigraph scalar t
    let basis = sdp::hermitian_basis(n);

    let zero_n = ComplexMatrix::zeros(n, n);
    let zero_a = ComplexMatrix::zeros(da, da);

    let mut coeffs_gap = Vec::with_capacity(nv);
    let mut coeffs_pt = Vec::with_capacity(nv);
    let mut coeffs_epi = Vec::with_capacity(nv);
    for b in &basis {
        coeffs_gap.push(b.clone());
        coeffs_pt.push(pt_b(b, da, db));
        coeffs_epi.push(tr_b(b, da, db).scale(cr(-1.0)));
    }
    coeffs_gap.push(zero_n.clone());
    coeffs_pt.push(zero_n);
    coeffs_epi.push(ComplexMatrix::identity(da));

    let y0 = feasible_y0(&pi, d)?;
    let marg0 = HermitianMatrix::new(tr_b(y0.matrix(), da, db))?;
    let t0 = marg0.max_eigenvalue()? + 1.0;
    let mut start = sdp::hermitian_coords(&y0);
    start.push(t0);

    let mut objective = vec![0.0; nv];
    objective[nv - 1] = 1.0;

    let problem = SdpProblem {
        num_vars: nv,
        objective,
        blocks: vec![
            AffineBlock::new(pi.matrix().scale(cr(-d)), coeffs_gap)?,
            AffineBlock::new(ComplexMatrix::zeros(n, n), coeffs_pt)?,
            AffineBlock::new(zero_a, coeffs_epi)?,
        ],
        equalities: vec![],
        start,
    };
    let sol = sdp::solve(&problem)?;
    Ok(EmaxResult {
        value: sol.optimum.log2(),
        method: EmaxMethod::SigmaSdp,
        solver_gap: sol.gap,
    })
}

/// Lower bound of the two-sided bound: `log2 min Tr Y` over the PPT cone
/// with `Y ⪰ π`, the conic form of minimizing `D_max(π‖σ)` over separable
/// states. Equals the channel value on Choi-simulable channels.
pub fn emax_lower_sdp(ch: &Channel) -> Result<EmaxResult> {
    require_ppt_exact(ch)?;
    let pi = ch.choi();
    let (da, db) = (pi.dim_a(), pi.dim_b());
    let n = da * db;
    let nv = n * n;
    let basis = sdp::hermitian_basis(n);

    let coeffs_gap: Vec<_> = basis.iter().cloned().collect();
    let coeffs_pt: Vec<_> = basis.iter().map(|b| pt_b(b, da, db)).collect();

    let mut objective = vec![0.0; nv];
    for i in 0..n {
        objective[i] = 1.0; // diagonal coordinates come first
    }

    let problem = SdpProblem {
        num_vars: nv,
        objective,
        blocks: vec![
            AffineBlock::new(pi.matrix().scale(cr(-1.0)), coeffs_gap)?,
            AffineBlock::new(ComplexMatrix::zeros(n, n), coeffs_pt)?,
        ],
        equalities: vec![],
        start: sdp::hermitian_coords(&feasible_y0(&pi, 1.0)?),
    };
    let sol = sdp::solve(&problem)?;
    Ok(EmaxResult {
        value: sol.optimum.log2(),
        method: EmaxMethod::LowerSdp,
        solver_gap: sol.gap,
    })
}

/// Upper bound of the two-sided bound: `log2 min d·c` over the PPT cone with
/// `Y ⪰ π` and the marginal pinned to `Tr_B Y = c·I_A` by equality
/// constraints.
pub fn emax_upper_marginal_sdp(ch: &Channel) -> Result<EmaxResult> {
    require_ppt_exact(ch)?;
    let pi = ch.choi();
    let (da, db) = (pi.dim_a(), pi.dim_b());
    let d = da as f64;
    let n = da * db;
    let nv = n * n + 1; // Y coordinates plus the marginal scale c
    let basis = sdp::hermitian_basis(n);

    let mut coeffs_gap = Vec::with_capacity(nv);
    let mut coeffs_pt = Vec::with_capacity(nv);
    for b in &basis {
        coeffs_gap.push(b.clone());
        coeffs_pt.push(pt_b(b, da, db));
    }
    coeffs_gap.push(ComplexMatrix::zeros(n, n));
    coeffs_pt.push(ComplexMatrix::zeros(n, n));

    // Tr_B Y = c·I_A, written as real equality rows over the coordinates
    let marginals: Vec<ComplexMatrix> = basis.iter().map(|b| tr_b(b, da, db)).collect();
    let mut equalities = Vec::new();
    for i in 0..da {
        for j in i..da {
            let mut re = vec![0.0; nv];
            let mut im = vec![0.0; nv];
            for (k, m) in marginals.iter().enumerate() {
                re[k] = m.get(i, j).re;
                im[k] = m.get(i, j).im;
            }
            if i == j {
                re[nv - 1] = -1.0;
                equalities.push(Equality { coeffs: re, rhs: 0.0 });
            } else {
                equalities.push(Equality { coeffs: re, rhs: 0.0 });
                equalities.push(Equality { coeffs: im, rhs: 0.0 });
            }
        }
    }

    let y0 = feasible_y0(&pi, 1.0)?;
    let mut start = sdp::hermitian_coords(&y0);
    // Tr_B Y0 is exactly (1/d + c0·db)·I because the Choi marginal is I/d
    let c_start = HermitianMatrix::new(tr_b(y0.matrix(), da, db))?.get(0, 0).re;
    start.push(c_start);

    let mut objective = vec![0.0; nv];
    objective[nv - 1] = 1.0;

    let problem = SdpProblem {
        num_vars: nv,
        objective,
        blocks: vec![
            AffineBlock::new(pi.matrix().scale(cr(-1.0)), coeffs_gap)?,
            AffineBlock::new(ComplexMatrix::zeros(n, n), coeffs_pt)?,
        ],
        equalities,
        start,
    };
    let sol = sdp::solve(&problem)?;
    Ok(EmaxResult {
        value: (d * sol.optimum).log2(),
        method: EmaxMethod::UpperMarginalSdp,
        solver_gap: sol.gap,
    })
}

/// Separable two-qubit states invariant under phase rotations, written in
/// the computational basis as
///
/// ```text
///         ⎛ α            ξ e^{iφ} ⎞
///  σ = ½  ⎜     γ                 ⎟
///         ⎜         δ             ⎟
///         ⎝ ξ e^{-iφ}           β ⎠
/// ```
///
/// with `α+β+γ+δ = 2` and `0 ≤ ξ ≤ min(√(αβ), √(γδ))`, the latter being the
/// two-qubit separability condition.
#[derive(Debug, Clone, Copy)]
pub struct PhaseCovariantSeparable {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub xi: f64,
    pub phi: f64,
}

impl PhaseCovariantSeparable {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, xi: f64, phi: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta), ("xi", xi)] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::Domain(name, v));
            }
        }
        if (alpha + beta + gamma + delta - 2.0).abs() > 1e-9 {
            return Err(Error::Domain("trace sum", alpha + beta + gamma + delta));
        }
        let bound = (alpha * beta).sqrt().min((gamma * delta).sqrt());
        if xi > bound + 1e-12 {
            return Err(Error::Domain("xi", xi));
        }
        Ok(Self { alpha, beta, gamma, delta, xi: xi.min(bound), phi })
    }

    /// Builds from the search coordinates `(α, β, δ, s, φ)` with `γ`
    /// eliminated by the trace constraint. `s ∈ [0, 1]` positions `ξ` within
    /// its feasible interval, `ξ = s · min(√(αβ), √(γδ))`, so that moves of
    /// the weight coordinates track the separability boundary instead of
    /// falling off it; values outside the box are projected back.
    pub(crate) fn from_free(alpha: f64, beta: f64, delta: f64, xi_rel: f64, phi: f64) -> Result<Self> {
        let gamma = 2.0 - alpha - beta - delta;
        if gamma < -1e-12 || alpha < 0.0 || beta < 0.0 || delta < 0.0 {
            return Err(Error::Domain("trace sum", gamma));
        }
        let gamma = gamma.max(0.0);
        let bound = (alpha * beta).sqrt().min((gamma * delta).sqrt());
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
            xi: xi_rel.clamp(0.0, 1.0) * bound,
            phi,
        })
    }

    /// The density matrix; positive by the `ξ` constraint, so only dimension
    /// metadata is attached.
    pub fn density(&self) -> BipartiteState {
        let mut m = ComplexMatrix::zeros(4, 4);
        m.set(0, 0, cr(self.alpha / 2.0));
        m.set(1, 1, cr(self.gamma / 2.0));
        m.set(2, 2, cr(self.delta / 2.0));
        m.set(3, 3, cr(self.beta / 2.0));
        let off = c(0.0, self.phi).exp().scale(self.xi / 2.0);
        m.set(0, 3, off);
        m.set(3, 0, off.conj());
        BipartiteState::new(HermitianMatrix::new(m).expect("Hermitian by construction"), 2, 2)
            .expect("4 = 2x2")
    }
}

/// Derivative-free simplex minimization (Nelder–Mead with the standard
/// reflection/expansion/contraction/shrink coefficients). Infeasible probes
/// must evaluate to infinity; the simplex then contracts back into the
/// feasible region. `scale` sets the initial simplex edge per coordinate.
///
/// The objective here is a maximum of spectral branches, so it has kinks and
/// curved valleys that defeat per-coordinate line searches; the simplex walk
/// handles both.
pub(crate) fn nelder_mead<const N: usize>(
    start: [f64; N],
    scale: [f64; N],
    mut eval: impl FnMut(&[f64; N]) -> f64,
) -> ([f64; N], f64) {
    const MAX_ITERS: usize = 4000;
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, eval(&start)));
    for i in 0..N {
        let mut p = start;
        p[i] += scale[i];
        let f = eval(&p);
        simplex.push((p, f));
    }

    for _ in 0..MAX_ITERS {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let best = simplex[0].1;
        let worst = simplex[N].1;
        let spread = if worst.is_finite() { worst - best } else { f64::INFINITY };
        let mut diameter = 0.0f64;
        for v in &simplex[1..] {
            for i in 0..N {
                diameter = diameter.max((v.0[i] - simplex[0].0[i]).abs());
            }
        }
        if diameter <= COORD_TOL && spread <= 1e-12 * (1.0 + best.abs()) {
            break;
        }

        let mut centroid = [0.0f64; N];
        for v in &simplex[..N] {
            for i in 0..N {
                centroid[i] += v.0[i] / N as f64;
            }
        }
        let at = |t: f64| -> [f64; N] {
            std::array::from_fn(|i| centroid[i] + t * (centroid[i] - simplex[N].0[i]))
        };

        let xr = at(1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = at(2.0);
            let fe = eval(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[N].1 {
                let x = at(0.5);
                let f = eval(&x);
                (x, f)
            } else {
                let x = at(-0.5);
                let f = eval(&x);
                (x, f)
            };
            if fc < simplex[N].1.min(fr) {
                simplex[N] = (xc, fc);
            } else {
                // shrink toward the best vertex
                let anchor = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    for i in 0..N {
                        v.0[i] = anchor[i] + 0.5 * (v.0[i] - anchor[i]);
                    }
                    v.1 = eval(&v.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    simplex[0]
}

fn sigma_upper(p: &[f64; 4]) -> Result<PhaseCovariantSeparable> {
    PhaseCovariantSeparable::from_free(p[0], p[1], 1.0 - p[1], p[2], p[3])
}

/// Multi-start direct search of `D_max(π‖σ)` over the reduced family:
/// 64 seeded pseudo-random starts, simplex descent per start down to a 1e-8
/// simplex diameter, and the plain minimum over starts (independent of
/// evaluation order).
pub fn emax_reduced(ch: &Channel, variant: ReducedVariant) -> Result<EmaxResult> {
    match ch.kind {
        ChannelKind::AmplitudeDamping | ChannelKind::Dephasing | ChannelKind::Depolarizing => {}
        other => return Err(Error::UnsupportedKind(other.name().into())),
    }
    let pi = ch.choi();
    let objective_state = |s: &PhaseCovariantSeparable| -> f64 {
        pi.dmax(&s.density()).unwrap_or(f64::INFINITY)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(REDUCED_SEED);
    let mut best = f64::INFINITY;

    for _ in 0..STARTS {
        let value = match variant {
            ReducedVariant::Lower => {
                let raw: [f64; 4] = [
                    rng.gen_range(0.05..1.0),
                    rng.gen_range(0.05..1.0),
                    rng.gen_range(0.05..1.0),
                    rng.gen_range(0.05..1.0),
                ];
                let s: f64 = raw.iter().sum();
                let p = [
                    2.0 * raw[0] / s,
                    2.0 * raw[1] / s,
                    2.0 * raw[3] / s,
                    rng.gen_range(0.0..1.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ];
                nelder_mead(p, [0.2, 0.2, 0.2, 0.25, 0.8], |q| {
                    match PhaseCovariantSeparable::from_free(q[0], q[1], q[2], q[3], q[4]) {
                        Ok(s) => objective_state(&s),
                        Err(_) => f64::INFINITY,
                    }
                })
                .1
            }
            ReducedVariant::Upper => {
                let p = [
                    rng.gen_range(0.05..0.95),
                    rng.gen_range(0.05..0.95),
                    rng.gen_range(0.0..1.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ];
                nelder_mead(p, [0.2, 0.2, 0.25, 0.8], |q| match sigma_upper(q) {
                    Ok(s) => objective_state(&s),
                    Err(_) => f64::INFINITY,
                })
                .1
            }
        };
        best = best.min(value);
    }

    Ok(EmaxResult {
        value: best,
        method: EmaxMethod::Reduced,
        solver_gap: 0.0,
    })
}

/// Reduced-search value with the variant chosen by Choi-simulability: the
/// lower search is exact on simulable channels, while the marginal-pinned
/// upper search remains a valid upper bound otherwise.
pub fn emax_reduced_auto(ch: &Channel) -> Result<EmaxResult> {
    if ch.choi_simulable {
        emax_reduced(ch, ReducedVariant::Lower)
    } else {
        emax_reduced(ch, ReducedVariant::Upper)
    }
}
