//! Self-contained interior-point solver for small conic programs.
//!
//! A problem has one real coordinate vector `x` (typically the n² real
//! coordinates of an n x n Hermitian matrix plus a few scalar auxiliaries),
//! a list of affine Hermitian-matrix-valued maps that must stay positive
//! semidefinite, a linear objective, and optional linear equality
//! constraints. Solved by logarithmic-barrier path following with damped
//! Newton steps; problem sizes here never exceed a handful of blocks of
//! dimension 8, so every linear solve is dense.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cr, ComplexMatrix, HermitianMatrix};

const BARRIER_SHRINK: f64 = 0.25; // barrier weight multiplier per outer step
const ARMIJO_C: f64 = 1e-4;
const GAP_TOL: f64 = 1e-9;
const MAX_OUTER: usize = 80;
const MAX_NEWTON: usize = 100;
const NEWTON_DECREMENT_TOL: f64 = 1e-13;
const START_MARGIN: f64 = 1e-6;

/// Affine map `x -> constant + Σ_k x_k coeffs[k]`, required PSD.
#[derive(Debug, Clone)]
pub struct AffineBlock {
    dim: usize,
    constant: ComplexMatrix,
    coeffs: Vec<ComplexMatrix>,
}

impl AffineBlock {
    /// Validates that the constant and every coefficient are Hermitian.
    pub fn new(constant: ComplexMatrix, coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = constant.rows();
        if constant.cols() != dim {
            return Err(Error::DimensionMismatch("block constant must be square".into()));
        }
        if constant.hermiticity_defect() > 1e-12 {
            return Err(Error::NotHermitian(constant.hermiticity_defect()));
        }
        for m in &coeffs {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch("block coefficient shape".into()));
            }
            if m.hermiticity_defect() > 1e-12 {
                return Err(Error::NotHermitian(m.hermiticity_defect()));
            }
        }
        Ok(Self { dim, constant, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> ComplexMatrix {
        let mut out = self.constant.clone();
        for (k, m) in self.coeffs.iter().enumerate() {
            if x[k] == 0.0 {
                continue;
            }
            out = out.add(&m.scale(cr(x[k])));
        }
        out
    }
}

/// Linear equality `coeffs · x = rhs`.
#[derive(Debug, Clone)]
pub struct Equality {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// Conic program over a real coordinate vector; every block must be PSD.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub blocks: Vec<AffineBlock>,
    pub equalities: Vec<Equality>,
    /// Strictly feasible starting point (all blocks positive definite by a
    /// margin of at least 1e-6).
    pub start: Vec<f64>,
}

/// Certified optimum of an [`SdpProblem`].
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub optimum: f64,
    pub x: Vec<f64>,
    /// Duality measure `n_total / t` at termination.
    pub gap: f64,
    /// Residual of each equality constraint at the solution.
    pub eq_residuals: Vec<f64>,
    /// Objective value after each outer centering step; decreases
    /// monotonically along the central path.
    pub central_path: Vec<f64>,
}

/// Cholesky factor of a Hermitian positive definite matrix, or `None` if the
/// matrix is not positive definite.
fn cholesky(m: &ComplexMatrix) -> Option<Vec<Complex64>> {
    let n = m.rows();
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            if i == j {
                if s.re <= 0.0 {
                    return None;
                }
                l[i * n + i] = cr(s.re.sqrt());
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn chol_logdet(l: &[Complex64], n: usize) -> f64 {
    (0..n).map(|i| l[i * n + i].re.ln()).sum::<f64>() * 2.0
}

/// Inverse from a Cholesky factor by forward/backward substitution.
fn chol_inverse(l: &[Complex64], n: usize) -> ComplexMatrix {
    let mut inv = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        // forward: L y = e_col
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = if i == col { cr(1.0) } else { cr(0.0) };
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        // backward: L† z = y
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k * n + i].conj() * z[k];
            }
            z[i] = s / l[i * n + i];
        }
        for i in 0..n {
            inv.set(i, col, z[i]);
        }
    }
    inv
}

/// Dense LU solve with partial pivoting. Returns `None` on singularity.
fn lu_solve(a: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for r in (col + 1)..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in (col + 1)..n {
            let f = a[r * n + col] / d;
            if f == 0.0 {
                continue;
            }
            a[r * n + col] = 0.0;
            for k in (col + 1)..n {
                a[r * n + k] -= f * a[col * n + k];
            }
            b[r] -= f * b[col];
        }
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    Some(())
}

struct BarrierState {
    /// Cholesky factors per block at the current point.
    chols: Vec<Vec<Complex64>>,
    logdet: f64,
}

fn factor_blocks(p: &SdpProblem, x: &[f64]) -> Option<BarrierState> {
    let mut chols = Vec::with_capacity(p.blocks.len());
    let mut logdet = 0.0;
    for b in &p.blocks {
        let m = b.eval(x);
        let l = cholesky(&m)?;
        logdet += chol_logdet(&l, b.dim());
        chols.push(l);
    }
    Some(BarrierState { chols, logdet })
}

/// Solves the program by barrier path following.
///
/// The optimum is accurate to about 1e-7 absolute for block sizes up to 8 and
/// the run is deterministic for a fixed input.
pub fn solve(p: &SdpProblem) -> Result<SdpSolution> {
    let m = p.num_vars;
    if p.objective.len() != m || p.start.len() != m {
        return Err(Error::DimensionMismatch(
            "objective/start length must equal num_vars".into(),
        ));
    }
    for b in &p.blocks {
        if b.coeffs.len() != m {
            return Err(Error::DimensionMismatch(
                "every block needs one coefficient per variable".into(),
            ));
        }
    }
    let n_total: usize = p.blocks.iter().map(|b| b.dim()).sum();

    // validate the supplied start: strictly feasible with margin, equalities met
    for b in &p.blocks {
        let h = HermitianMatrix::new(b.eval(&p.start))?;
        let min = h.min_eigenvalue()?;
        if min < START_MARGIN {
            return Err(Error::Infeasible(format!(
                "starting block has minimum eigenvalue {min:.3e}"
            )));
        }
    }
    for (i, eq) in p.equalities.iter().enumerate() {
        let r: f64 = dot(&eq.coeffs, &p.start) - eq.rhs;
        if r.abs() > 1e-8 {
            return Err(Error::Infeasible(format!(
                "starting point violates equality {i} by {r:.3e}"
            )));
        }
    }

    let n_eq = p.equalities.len();
    let mut x = p.start.clone();
    let mut t = 1.0f64;
    let mut central_path = Vec::new();

    for _outer in 0..MAX_OUTER {
        newton_center(p, &mut x, t, n_eq)?;
        central_path.push(dot(&p.objective, &x));
        if n_total as f64 / t <= GAP_TOL {
            let eq_residuals = p
                .equalities
                .iter()
                .map(|eq| dot(&eq.coeffs, &x) - eq.rhs)
                .collect();
            return Ok(SdpSolution {
                optimum: dot(&p.objective, &x),
                x,
                gap: n_total as f64 / t,
                eq_residuals,
                central_path,
            });
        }
        t /= BARRIER_SHRINK;
    }
    Err(Error::NoConvergence("outer iteration cap reached".into()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Damped Newton minimization of `t·c·x - Σ log det B_j(x)` subject to the
/// equality constraints (KKT system, feasible start).
fn newton_center(p: &SdpProblem, x: &mut Vec<f64>, t: f64, n_eq: usize) -> Result<()> {
    let m = p.num_vars;
    let dim_kkt = m + n_eq;

    for _iter in 0..MAX_NEWTON {
        let state = factor_blocks(p, x)
            .ok_or_else(|| Error::NoConvergence("interior point left the cone".into()))?;

        // gradient and Hessian of the barrier
        let mut grad: Vec<f64> = p.objective.iter().map(|c| t * c).collect();
        let mut hess = vec![0.0f64; m * m];
        for (bi, b) in p.blocks.iter().enumerate() {
            let n = b.dim();
            let inv = chol_inverse(&state.chols[bi], n);
            // W_k = B^{-1} A_k ; grad_k -= tr(W_k) ; H_kl += tr(W_k W_l)
            let ws: Vec<ComplexMatrix> = b.coeffs.iter().map(|a| inv.mul(a)).collect();
            for (k, w) in ws.iter().enumerate() {
                grad[k] -= w.trace().re;
            }
            for k in 0..m {
                for l in k..m {
                    let mut tr = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            tr += (ws[k].get(i, j) * ws[l].get(j, i)).re;
                        }
                    }
                    hess[k * m + l] += tr;
                    hess[l * m + k] = hess[k * m + l];
                }
            }
        }

        // KKT system [H E'; E 0] [dx; nu] = [-g; 0]
        let mut kkt = vec![0.0f64; dim_kkt * dim_kkt];
        let reg = 1e-12 * (1.0 + (0..m).map(|k| hess[k * m + k]).sum::<f64>() / m as f64);
        for k in 0..m {
            for l in 0..m {
                kkt[k * dim_kkt + l] = hess[k * m + l];
            }
            kkt[k * dim_kkt + k] += reg;
        }
        for (e, eq) in p.equalities.iter().enumerate() {
            for k in 0..m {
                kkt[k * dim_kkt + (m + e)] = eq.coeffs[k];
                kkt[(m + e) * dim_kkt + k] = eq.coeffs[k];
            }
        }
        let mut rhs = vec![0.0f64; dim_kkt];
        for k in 0..m {
            rhs[k] = -grad[k];
        }
        lu_solve(&mut kkt, &mut rhs, dim_kkt).ok_or(Error::IllConditioned)?;
        let dx = &rhs[..m];

        // Newton decrement
        let mut hdx = vec![0.0f64; m];
        for k in 0..m {
            hdx[k] = (0..m).map(|l| hess[k * m + l] * dx[l]).sum();
        }
        let decrement = dot(dx, &hdx);
        if !decrement.is_finite() {
            return Err(Error::IllConditioned);
        }
        if std::env::var_os("QNETBOUND_SDP_TRACE").is_some() {
            eprintln!(
                "t={t:.3e} iter={_iter} obj={:.9e} dec={decrement:.3e}",
                dot(&p.objective, x)
            );
        }
        if decrement / 2.0 <= NEWTON_DECREMENT_TOL {
            return Ok(());
        }

        // Armijo backtracking, staying inside the cone
        let f0 = t * dot(&p.objective, x) - state.logdet;
        let slope = dot(&grad, dx);
        let mut alpha = 1.0f64;
        let mut progress = 0.0f64;
        let mut accepted = false;
        while alpha >= 1e-16 {
            let trial: Vec<f64> = x.iter().zip(dx).map(|(xi, di)| xi + alpha * di).collect();
            if let Some(s) = factor_blocks(p, &trial) {
                let f1 = t * dot(&p.objective, &trial) - s.logdet;
                if f1 <= f0 + ARMIJO_C * alpha * slope {
                    progress = f0 - f1;
                    *x = trial;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        // once steps stop moving the barrier objective beyond double
        // precision the point is as centered as it can get
        if !accepted || progress <= 1e-14 * (1.0 + f0.abs()) {
            return Ok(());
        }
    }
    Err(Error::NoConvergence("inner Newton cap reached".into()))
}

/// Pinned ordering of the n² real coordinates of an n x n Hermitian matrix:
/// the n diagonal entries first, then `(Re, Im)` pairs of the strict upper
/// triangle in row-major order.
pub fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut m = ComplexMatrix::zeros(n, n);
        m.set(i, i, cr(1.0));
        basis.push(m);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut re = ComplexMatrix::zeros(n, n);
            re.set(i, j, cr(1.0));
            re.set(j, i, cr(1.0));
            basis.push(re);
            let mut im = ComplexMatrix::zeros(n, n);
            im.set(i, j, Complex64::new(0.0, 1.0));
            im.set(j, i, Complex64::new(0.0, -1.0));
            basis.push(im);
        }
    }
    basis
}

/// Coordinates of a Hermitian matrix in the [`hermitian_basis`] ordering.
pub fn hermitian_coords(h: &HermitianMatrix) -> Vec<f64> {
    let n = h.dim();
    let mut x = Vec::with_capacity(n * n);
    for i in 0..n {
        x.push(h.get(i, i).re);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            x.push(h.get(i, j).re);
            x.push(h.get(i, j).im);
        }
    }
    x
}

/// Reassembles a Hermitian matrix from its coordinate vector.
pub fn hermitian_from_coords(n: usize, x: &[f64]) -> HermitianMatrix {
    let basis = hermitian_basis(n);
    let mut m = ComplexMatrix::zeros(n, n);
    for (k, b) in basis.iter().enumerate() {
        m = m.add(&b.scale(cr(x[k])));
    }
    HermitianMatrix::new(m).expect("basis combination is Hermitian")
}
