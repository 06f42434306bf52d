//! Dense complex linear algebra for small Hermitian operators, plus the two
//! entropy divergences used throughout the crate.
//!
//! Everything here is sized for dimensions up to 8: matrices are stored dense
//! and full, the eigensolver is a cyclic Jacobi iteration, and all operations
//! are pure functions over immutable values.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues below this threshold are treated as kernel when testing
/// support membership for the divergences.
pub const SUPPORT_EPS: f64 = 1e-10;

/// Maximum allowed deviation from Hermiticity at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

const EIG_OFF_TOL: f64 = 1e-14;
const EIG_MAX_SWEEPS: usize = 100;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense complex matrix, row-major, full storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, cr(1.0));
        }
        m
    }

    /// Builds from row-major complex entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Self { rows, cols, data }
    }

    /// Builds from row-major real entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(rows, cols, data.iter().map(|&x| cr(x)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_vec(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self::from_vec(self.rows, self.cols, data)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_vec(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum deviation from Hermiticity, `max |m - m†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Kronecker product with `self` as the left (slow) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }
}

/// Kronecker product, subsystem A as the left (slow) factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Hermitian matrix; the constructor checks the defect and stores the exact
/// Hermitianization `(m + m†)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    m: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::Domain("matrix entry", f64::NAN));
        }
        let dev = m.hermiticity_defect();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let sym = m.add(&m.adjoint()).scale(cr(0.5));
        Ok(Self { dim: m.rows(), m: sym })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, m: ComplexMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, m: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, m: self.m.add(&other.m) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, m: self.m.sub(&other.m) }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, m: self.m.scale(cr(s)) }
    }

    /// Conjugation `u · self · u†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(u.mul(&self.m).mul(&u.adjoint()))
    }

    /// Eigendecomposition; see [`eig_hermitian`].
    pub fn eig(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        eig_hermitian(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.0[0])
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eig()?.0.last().expect("dim > 0"))
    }
}

/// Which tensor factor of a bipartite operator an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Hermitian operator on a tensor product `A ⊗ B`, with `A` the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    m: HermitianMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteState {
    /// Wraps a Hermitian operator with bipartite dimension metadata.
    pub fn new(m: HermitianMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a * dim_b != m.dim() {
            return Err(Error::DimensionMismatch(format!(
                "dim_a*dim_b = {} does not match matrix dim {}",
                dim_a * dim_b,
                m.dim()
            )));
        }
        Ok(Self { m, dim_a, dim_b })
    }

    /// Like [`BipartiteState::new`] but additionally requires a density
    /// matrix: trace within 1e-10 of 1 and minimum eigenvalue >= -1e-10.
    pub fn density(m: HermitianMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        let s = Self::new(m, dim_a, dim_b)?;
        let tr = s.m.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::Domain("state trace", tr));
        }
        let min = s.m.min_eigenvalue()?;
        if min < -1e-10 {
            return Err(Error::Domain("state minimum eigenvalue", min));
        }
        Ok(s)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.m
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.m.matrix()
    }

    /// Trace over the named subsystem; preserves the total trace.
    pub fn partial_trace(&self, sub: Subsystem) -> HermitianMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        match sub {
            Subsystem::B => {
                let mut out = ComplexMatrix::zeros(da, da);
                for i in 0..da {
                    for j in 0..da {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for b in 0..db {
                            acc += self.m.get(i * db + b, j * db + b);
                        }
                        out.set(i, j, acc);
                    }
                }
                HermitianMatrix::new(out).expect("partial trace preserves Hermiticity")
            }
            Subsystem::A => {
                let mut out = ComplexMatrix::zeros(db, db);
                for i in 0..db {
                    for j in 0..db {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for a in 0..da {
                            acc += self.m.get(a * db + i, a * db + j);
                        }
                        out.set(i, j, acc);
                    }
                }
                HermitianMatrix::new(out).expect("partial trace preserves Hermiticity")
            }
        }
    }

    /// Transpose applied to subsystem B only. An involution.
    pub fn partial_transpose(&self) -> Self {
        let (da, db) = (self.dim_a, self.dim_b);
        let mut out = ComplexMatrix::zeros(da * db, da * db);
        for i in 0..da {
            for j in 0..da {
                for b in 0..db {
                    for bp in 0..db {
                        out.set(i * db + b, j * db + bp, self.m.get(i * db + bp, j * db + b));
                    }
                }
            }
        }
        Self {
            m: HermitianMatrix::new(out).expect("partial transpose preserves Hermiticity"),
            dim_a: da,
            dim_b: db,
        }
    }

    /// Exchanges the two subsystems.
    pub fn swap_subsystems(&self) -> Self {
        let (da, db) = (self.dim_a, self.dim_b);
        let mut out = ComplexMatrix::zeros(da * db, da * db);
        for a in 0..da {
            for b in 0..db {
                for ap in 0..da {
                    for bp in 0..db {
                        out.set(b * da + a, bp * da + ap, self.m.get(a * db + b, ap * db + bp));
                    }
                }
            }
        }
        Self {
            m: HermitianMatrix::new(out).expect("swap preserves Hermiticity"),
            dim_a: db,
            dim_b: da,
        }
    }

    pub fn dmax(&self, sigma: &Self) -> Result<f64> {
        if (self.dim_a, self.dim_b) != (sigma.dim_a, sigma.dim_b) {
            return Err(Error::DimensionMismatch(
                "dmax requires identical bipartite dimensions".into(),
            ));
        }
        dmax(&self.m, &sigma.m)
    }

    pub fn relative_entropy(&self, sigma: &Self) -> Result<f64> {
        if (self.dim_a, self.dim_b) != (sigma.dim_a, sigma.dim_b) {
            return Err(Error::DimensionMismatch(
                "relative entropy requires identical bipartite dimensions".into(),
            ));
        }
        relative_entropy(&self.m, &sigma.m)
    }
}

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi
/// rotations.
///
/// Returns eigenvalues in ascending order together with the matrix whose
/// columns are the corresponding eigenvectors, so that `m = V Λ V†` with a
/// reconstruction residual below 1e-10.
///
/// The sweep loop stops once the off-diagonal Frobenius norm falls below
/// 1e-14 (relative to the matrix scale when that scale exceeds one), and
/// errors out after 100 sweeps, which signals numerically pathological input.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = ComplexMatrix::identity(n);

    let tol = EIG_OFF_TOL * a.frobenius().max(1.0);
    let mut converged = false;
    for _ in 0..EIG_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            converged = true;
            break;
        }

        for p in 0..(n.saturating_sub(1)) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let u = apq / g; // unit phase of the pivot
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * g);
                // smaller root of t^2 - 2 tau t - 1 = 0
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                let su = u.scale(sth);

                // rows: J† from the left
                for j in 0..n {
                    let rp = a.get(p, j);
                    let rq = a.get(q, j);
                    a.set(p, j, rp.scale(cth) + su * rq);
                    a.set(q, j, -su.conj() * rp + rq.scale(cth));
                }
                // columns: J from the right
                for i in 0..n {
                    let cp = a.get(i, p);
                    let cq = a.get(i, q);
                    a.set(i, p, cp.scale(cth) + su.conj() * cq);
                    a.set(i, q, -su * cp + cq.scale(cth));
                }
                for i in 0..n {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, vp.scale(cth) + su.conj() * vq);
                    v.set(i, q, -su * vp + vq.scale(cth));
                }
                a.set(p, q, cr(0.0));
                a.set(q, p, cr(0.0));
                a.set(p, p, cr(a.get(p, p).re));
                a.set(q, q, cr(a.get(q, q).re));
            }
        }
    }
    if !converged {
        return Err(Error::EigNoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            vecs.set(r, k, v.get(r, i));
        }
    }
    Ok((vals, vecs))
}

/// Mass of `rho` on the kernel of the decomposition `(vals, vecs)`.
fn kernel_mass(rho: &HermitianMatrix, vals: &[f64], vecs: &ComplexMatrix) -> f64 {
    let n = rho.dim();
    let mut mass = 0.0;
    for (k, &val) in vals.iter().enumerate() {
        if val >= SUPPORT_EPS {
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += vecs.get(i, k).conj() * rho.get(i, j) * vecs.get(j, k);
            }
        }
        mass += acc.re;
    }
    mass
}

/// Max-relative entropy `D_max(rho ‖ sigma)` in bits.
///
/// Computed as `log2 λ_max(σ^{-1/2} ρ σ^{-1/2})` on the support of `sigma`,
/// with a pseudo-inverse square root. Returns `+∞` when the support of `rho`
/// is not contained in the support of `sigma`.
pub fn dmax(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(
            "dmax requires operators of equal dimension".into(),
        ));
    }
    let n = rho.dim();
    let (svals, svecs) = sigma.eig()?;
    if kernel_mass(rho, &svals, &svecs) > SUPPORT_EPS {
        return Ok(f64::INFINITY);
    }
    // sigma^{-1/2} restricted to the support
    let mut isqrt = ComplexMatrix::zeros(n, n);
    for (k, &val) in svals.iter().enumerate() {
        if val < SUPPORT_EPS {
            continue;
        }
        let w = 1.0 / val.sqrt();
        for i in 0..n {
            for j in 0..n {
                let v = isqrt.get(i, j) + svecs.get(i, k) * svecs.get(j, k).conj() * cr(w);
                isqrt.set(i, j, v);
            }
        }
    }
    let d = isqrt.mul(rho.matrix()).mul(&isqrt);
    // small asymmetry from the eigensolver is washed out here
    let d = HermitianMatrix::new(d.add(&d.adjoint()).scale(cr(0.5)))?;
    let lam = d.max_eigenvalue()?;
    Ok(lam.max(f64::MIN_POSITIVE).log2())
}

/// Umegaki relative entropy `S(rho ‖ sigma)` in bits, with the convention
/// `0·log 0 = 0`. Returns `+∞` on support violation.
pub fn relative_entropy(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(
            "relative entropy requires operators of equal dimension".into(),
        ));
    }
    let n = rho.dim();
    let (rvals, rvecs) = rho.eig()?;
    let (svals, svecs) = sigma.eig()?;
    if kernel_mass(rho, &svals, &svecs) > SUPPORT_EPS {
        return Ok(f64::INFINITY);
    }

    let mut s = 0.0;
    for &r in &rvals {
        if r > 0.0 {
            s += r * r.log2();
        }
    }
    for (i, &r) in rvals.iter().enumerate() {
        if r <= 0.0 {
            continue;
        }
        for (j, &sv) in svals.iter().enumerate() {
            if sv < SUPPORT_EPS {
                continue;
            }
            let mut overlap = Complex64::new(0.0, 0.0);
            for k in 0..n {
                overlap += rvecs.get(k, i).conj() * svecs.get(k, j);
            }
            s -= r * overlap.norm_sqr() * sv.log2();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{psi, random_density, random_hermitian, random_unitary};
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kron_identity_and_diagonal() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let zi = kron(&pauli_z(), &i2);
        let expect = ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, -1.0, 0.0, //
                0.0, 0.0, 0.0, -1.0,
            ],
        );
        assert_eq!(zi, expect);
    }

    #[test]
    fn kron_shape_law() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 2);
        let k = kron(&a, &b);
        assert_eq!((k.rows(), k.cols()), (4, 6));
    }

    #[test]
    fn partial_trace_max_entangled_marginal() {
        let p = psi(2);
        let ta = p.partial_trace(Subsystem::B);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert!((ta.get(i, j) - cr(expect)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_product_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_hermitian(&mut rng, 2);
        let y = random_hermitian(&mut rng, 3);
        let xy = BipartiteState::new(
            HermitianMatrix::new(kron(x.matrix(), y.matrix())).unwrap(),
            2,
            3,
        )
        .unwrap();
        let tb = xy.partial_trace(Subsystem::B);
        let expect = x.scale(y.trace());
        assert!(tb.matrix().sub(expect.matrix()).max_abs() < 1e-12);
        // total trace preserved
        assert!((tb.trace() - xy.hermitian().trace()).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_product_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_hermitian(&mut rng, 2);
        let y = random_hermitian(&mut rng, 2);
        let xy = BipartiteState::new(
            HermitianMatrix::new(kron(x.matrix(), y.matrix())).unwrap(),
            2,
            2,
        )
        .unwrap();
        let pt = xy.partial_transpose();
        let expect = kron(x.matrix(), &y.matrix().transpose());
        assert!(pt.matrix().sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_of_max_entangled_spectrum() {
        let pt = psi(2).partial_transpose();
        let (vals, _) = pt.hermitian().eig().unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert!((v - e).abs() < 1e-12, "{vals:?}");
        }
    }

    #[test]
    fn eig_pauli_and_scalar() {
        let z = HermitianMatrix::new(pauli_z()).unwrap();
        let (vals, _) = z.eig().unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);

        let q = HermitianMatrix::new(ComplexMatrix::identity(4).scale(cr(0.25))).unwrap();
        let (vals, _) = q.eig().unwrap();
        assert!(vals.iter().all(|v| (v - 0.25).abs() < 1e-14));
    }

    #[test]
    fn eig_amplitude_damping_choi_matches_block_roots() {
        // Choi of the damping channel at λ = 1/2; its nonzero 2x2 block has
        // analytic roots (tr ± sqrt(tr² - 4 det))/2.
        let lam = 0.5f64;
        let s = (1.0 - lam).sqrt();
        let m = ComplexMatrix::from_real(
            4,
            4,
            &[
                0.5, 0.0, 0.0, 0.5 * s, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.5 * lam, 0.0, //
                0.5 * s, 0.0, 0.0, 0.5 * (1.0 - lam),
            ],
        );
        let (vals, _) = HermitianMatrix::new(m).unwrap().eig().unwrap();
        let (a, b, z) = (0.5, 0.5 * (1.0 - lam), 0.5 * s);
        let tr = a + b;
        let disc = (tr * tr - 4.0 * (a * b - z * z)).sqrt();
        let mut expect = vec![0.0, 0.5 * lam, (tr - disc) / 2.0, (tr + disc) / 2.0];
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn dmax_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = BipartiteState::new(random_density(&mut rng, 4), 2, 2).unwrap();
        assert!(rho.dmax(&rho).unwrap().abs() < 1e-10);

        let ket0 = HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0])).unwrap();
        let half = HermitianMatrix::new(ComplexMatrix::identity(2).scale(cr(0.5))).unwrap();
        assert!((dmax(&ket0, &half).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dmax_max_entangled_vs_maximally_mixed() {
        let p = psi(2);
        let mixed = BipartiteState::density(
            HermitianMatrix::new(ComplexMatrix::identity(4).scale(cr(0.25))).unwrap(),
            2,
            2,
        )
        .unwrap();
        // brute-force oracle: smallest x on a fine grid with 2^x σ - ρ psd
        let mut oracle = f64::NAN;
        let mut x = 0.0;
        while x <= 4.0 {
            let gap = mixed.hermitian().scale(2f64.powf(x)).sub(p.hermitian());
            if gap.min_eigenvalue().unwrap() >= -1e-12 {
                oracle = x;
                break;
            }
            x += 1e-4;
        }
        assert!((oracle - 2.0).abs() < 1e-3);
        assert!((p.dmax(&mixed).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn dmax_support_violation_is_infinite() {
        let ket0 = HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0])).unwrap();
        let ket1 = HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0])).unwrap();
        assert!(dmax(&ket0, &ket1).unwrap().is_infinite());
        assert!(relative_entropy(&ket0, &ket1).unwrap().is_infinite());
    }

    #[test]
    fn relative_entropy_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let rho = random_density(&mut rng, 4);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-9);

        let ket0 = HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0])).unwrap();
        let half = HermitianMatrix::new(ComplexMatrix::identity(2).scale(cr(0.5))).unwrap();
        assert!((relative_entropy(&ket0, &half).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn divergence_ordering_and_invariance_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rho = random_density(&mut rng, 4);
            let sig = random_density(&mut rng, 4);
            let d = dmax(&rho, &sig).unwrap();
            let s = relative_entropy(&rho, &sig).unwrap();
            assert!(s <= d + 1e-9);
            assert!(s >= -1e-9);

            let u = random_unitary(&mut rng, 4);
            let rho_u = rho.conjugate_by(&u).unwrap();
            let sig_u = sig.conjugate_by(&u).unwrap();
            assert!((dmax(&rho_u, &sig_u).unwrap() - d).abs() < 1e-9);
            assert!((relative_entropy(&rho_u, &sig_u).unwrap() - s).abs() < 1e-9);
        }
    }

    #[test]
    fn dmax_joint_quasi_convexity_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let (r1, s1) = (random_density(&mut rng, 4), random_density(&mut rng, 4));
            let (r2, s2) = (random_density(&mut rng, 4), random_density(&mut rng, 4));
            let p: f64 = rand::Rng::gen_range(&mut rng, 0.0..1.0);
            let rmix = r1.scale(p).add(&r2.scale(1.0 - p));
            let smix = s1.scale(p).add(&s2.scale(1.0 - p));
            let lhs = dmax(&rmix, &smix).unwrap();
            let rhs = dmax(&r1, &s1).unwrap().max(dmax(&r2, &s2).unwrap());
            assert!(lhs <= rhs + 1e-9);
        }
    }

    #[test]
    fn hermitian_rejects_asymmetric() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eig_reconstructs_and_trace_matches(seed in 0u64..1000, n in 2usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, n);
            let (vals, vecs) = h.eig().unwrap();
            // V Λ V†
            let mut lam = ComplexMatrix::zeros(n, n);
            for (i, &v) in vals.iter().enumerate() {
                lam.set(i, i, cr(v));
            }
            let rec = vecs.mul(&lam).mul(&vecs.adjoint());
            prop_assert!(rec.sub(h.matrix()).max_abs() < 1e-10);
            prop_assert!(vecs.adjoint().mul(&vecs).sub(&ComplexMatrix::identity(n)).max_abs() < 1e-10);
            let sum: f64 = vals.iter().sum();
            prop_assert!((sum - h.trace()).abs() < 1e-10);
        }

        #[test]
        fn partial_transpose_involution_and_relabel(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, 6);
            let st = BipartiteState::new(h, 2, 3).unwrap();
            let twice = st.partial_transpose().partial_transpose();
            prop_assert!(twice.matrix().sub(st.matrix()).max_abs() < 1e-12);

            // spectrum of PT is invariant under exchanging the subsystems
            let (v1, _) = st.partial_transpose().hermitian().eig().unwrap();
            let (v2, _) = st.swap_subsystems().partial_transpose().hermitian().eig().unwrap();
            for (a, b) in v1.iter().zip(v2.iter()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
