//! Qubit channel constructors, Choi states, and the closed-form entanglement
//! data available for them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cr, BipartiteState, ComplexMatrix, HermitianMatrix};

/// Channel families supported by constructors; `Custom` wraps a raw Kraus
/// list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    AmplitudeDamping,
    Dephasing,
    Erasure,
    Depolarizing,
    Custom,
}

impl ChannelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "amplitude_damping",
            ChannelKind::Dephasing => "dephasing",
            ChannelKind::Erasure => "erasure",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "amplitude_damping" => Ok(ChannelKind::AmplitudeDamping),
            "dephasing" => Ok(ChannelKind::Dephasing),
            "erasure" => Ok(ChannelKind::Erasure),
            "depolarizing" => Ok(ChannelKind::Depolarizing),
            "custom" => Ok(ChannelKind::Custom),
            other => Err(Error::Parse(format!("unknown channel kind {other:?}"))),
        }
    }
}

/// CPTP map described by its Kraus operators.
#[derive(Debug, Clone)]
pub struct Channel {
    pub kind: ChannelKind,
    pub param: f64,
    pub kraus: Vec<ComplexMatrix>,
    pub dim_in: usize,
    pub dim_out: usize,
    pub choi_simulable: bool,
}

fn check_param(param: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&param) || !param.is_finite() {
        return Err(Error::Domain("channel parameter", param));
    }
    Ok(())
}

/// Builds one of the four named channels.
pub fn make_channel(kind: ChannelKind, param: f64) -> Result<Channel> {
    check_param(param)?;
    let l = param;
    let channel = match kind {
        ChannelKind::AmplitudeDamping => {
            let m1 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - l).sqrt()]);
            let m2 = ComplexMatrix::from_real(2, 2, &[0.0, l.sqrt(), 0.0, 0.0]);
            Channel {
                kind,
                param,
                kraus: vec![m1, m2],
                dim_in: 2,
                dim_out: 2,
                choi_simulable: false,
            }
        }
        ChannelKind::Dephasing => {
            let m1 = ComplexMatrix::identity(2).scale(cr((1.0 - l / 2.0).sqrt()));
            let m2 = crate::linalg::pauli_z().scale(cr((l / 2.0).sqrt()));
            Channel {
                kind,
                param,
                kraus: vec![m1, m2],
                dim_in: 2,
                dim_out: 2,
                choi_simulable: true,
            }
        }
        ChannelKind::Depolarizing => {
            let mut kraus = vec![ComplexMatrix::identity(2).scale(cr((1.0 - l).sqrt()))];
            for i in 0..2 {
                for j in 0..2 {
                    let mut m = ComplexMatrix::zeros(2, 2);
                    m.set(i, j, cr((l / 2.0).sqrt()));
                    kraus.push(m);
                }
            }
            Channel {
                kind,
                param,
                kraus,
                dim_in: 2,
                dim_out: 2,
                choi_simulable: true,
            }
        }
        ChannelKind::Erasure => {
            // output basis {|0>, |1>, |e>}, the error ket orthogonal to both
            let mut survive = ComplexMatrix::zeros(3, 2);
            survive.set(0, 0, cr((1.0 - l).sqrt()));
            survive.set(1, 1, cr((1.0 - l).sqrt()));
            let mut erase0 = ComplexMatrix::zeros(3, 2);
            erase0.set(2, 0, cr(l.sqrt()));
            let mut erase1 = ComplexMatrix::zeros(3, 2);
            erase1.set(2, 1, cr(l.sqrt()));
            Channel {
                kind,
                param,
                kraus: vec![survive, erase0, erase1],
                dim_in: 2,
                dim_out: 3,
                choi_simulable: true,
            }
        }
        ChannelKind::Custom => {
            return Err(Error::UnsupportedKind(
                "custom channels take an explicit Kraus list".into(),
            ))
        }
    };
    debug_assert!(channel.trace_preservation_defect() < 1e-10);
    Ok(channel)
}

impl Channel {
    /// Wraps a raw Kraus list; the caller declares Choi-simulability.
    pub fn custom(kraus: Vec<ComplexMatrix>, choi_simulable: bool) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Parse("custom channel needs at least one Kraus operator".into()));
        }
        let dim_out = kraus[0].rows();
        let dim_in = kraus[0].cols();
        for k in &kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::DimensionMismatch(
                    "all Kraus operators must share the same shape".into(),
                ));
            }
        }
        let ch = Channel {
            kind: ChannelKind::Custom,
            param: 0.0,
            kraus,
            dim_in,
            dim_out,
            choi_simulable,
        };
        let defect = ch.trace_preservation_defect();
        if defect > 1e-10 {
            return Err(Error::Parse(format!(
                "Kraus operators are not trace preserving (defect {defect:.3e})"
            )));
        }
        Ok(ch)
    }

    /// `max |Σ K†K - I|`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc = acc.add(&k.adjoint().mul(k));
        }
        acc.sub(&ComplexMatrix::identity(self.dim_in)).max_abs()
    }

    /// Applies the channel to a state on the input space.
    pub fn apply(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "state dim {} vs channel input dim {}",
                rho.dim(),
                self.dim_in
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = out.add(&k.mul(rho.matrix()).mul(&k.adjoint()));
        }
        HermitianMatrix::new(out)
    }

    /// Normalized Choi state `(1 ⊗ N)[ψ]` with `dim_a = dim_in` and
    /// `dim_b = dim_out`, assembled entrywise from the Kraus operators.
    pub fn choi(&self) -> BipartiteState {
        let d = self.dim_in;
        let n = d * self.dim_out;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..d {
            for j in 0..d {
                for b in 0..self.dim_out {
                    for bp in 0..self.dim_out {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in &self.kraus {
                            acc += k.get(b, i) * k.get(bp, j).conj();
                        }
                        m.set(i * self.dim_out + b, j * self.dim_out + bp, acc / cr(d as f64));
                    }
                }
            }
        }
        BipartiteState::density(
            HermitianMatrix::new(m).expect("Choi state is Hermitian"),
            d,
            self.dim_out,
        )
        .expect("Choi state of a CPTP map is a density matrix")
    }
}

/// Maximally entangled state `ψ(d)` across `d x d`.
pub fn maximally_entangled(d: usize) -> BipartiteState {
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m.set(i * d + i, j * d + j, cr(1.0 / d as f64));
        }
    }
    BipartiteState::density(HermitianMatrix::new(m).unwrap(), d, d).unwrap()
}

/// Binary entropy in bits with the endpoint convention `h(0) = h(1) = 0`.
pub fn binary_entropy(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) || !y.is_finite() {
        return Err(Error::Domain("binary entropy argument", y));
    }
    if y == 0.0 || y == 1.0 {
        return Ok(0.0);
    }
    Ok(-y * y.log2() - (1.0 - y) * (1.0 - y).log2())
}

fn h(y: f64) -> f64 {
    // closed forms below can overshoot [0,1] by double-precision dust
    binary_entropy(y.clamp(0.0, 1.0)).expect("clamped argument")
}

/// Provenance of a measure value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMethod {
    ClosedForm,
    Sdp,
    Reduced,
    Override,
}

/// Per-channel entanglement data with method provenance; a `None` field means
/// no value is available for that channel.
#[derive(Debug, Clone)]
pub struct ChannelMeasures {
    pub e_r: Option<(f64, MeasureMethod)>,
    pub e_max: Option<(f64, MeasureMethod)>,
    pub e_sq_ub: Option<f64>,
    pub choi_simulable: bool,
}

impl ChannelMeasures {
    /// Checks the ordering `e_r <= e_max + 1e-6` when both are present.
    pub fn validate(&self) -> Result<()> {
        if let (Some((er, _)), Some((emax, _))) = (self.e_r, self.e_max) {
            if er > emax + 1e-6 {
                return Err(Error::Domain("e_r exceeds e_max", er - emax));
            }
        }
        Ok(())
    }
}

/// Closed-form measures for the named channels.
///
/// Dephasing: `E_R = 1 - h(x/2)` and a squashed-entanglement upper bound
/// `h(sqrt(x/2·(1-x/2)) + 1/2)`. Amplitude damping: `E_max = log2(2-λ)` and
/// `h(1/2 - λ/4) - h(1 - λ/4)`. Erasure: `E_R = 1 - λ`, with the squashed
/// bound equal to it. Depolarizing: `E_R = 1 - h(1 - 3λ/4)` up to the
/// entanglement-breaking point `λ = 2/3` and zero beyond; its squashed bound
/// has no closed form here and the field stays empty.
pub fn closed_form_measures(kind: ChannelKind, param: f64) -> Result<ChannelMeasures> {
    check_param(param)?;
    let l = param;
    let cf = MeasureMethod::ClosedForm;
    let m = match kind {
        ChannelKind::Dephasing => ChannelMeasures {
            e_r: Some((1.0 - h(l / 2.0), cf)),
            e_max: None,
            e_sq_ub: Some(h((l / 2.0 * (1.0 - l / 2.0)).sqrt() + 0.5)),
            choi_simulable: true,
        },
        ChannelKind::AmplitudeDamping => ChannelMeasures {
            e_r: None,
            e_max: Some(((2.0 - l).log2(), cf)),
            e_sq_ub: Some(h(0.5 - l / 4.0) - h(1.0 - l / 4.0)),
            choi_simulable: false,
        },
        ChannelKind::Erasure => ChannelMeasures {
            e_r: Some((1.0 - l, cf)),
            e_max: None,
            e_sq_ub: Some(1.0 - l),
            choi_simulable: true,
        },
        ChannelKind::Depolarizing => ChannelMeasures {
            e_r: Some((
                if l <= 2.0 / 3.0 { 1.0 - h(1.0 - 0.75 * l) } else { 0.0 },
                cf,
            )),
            e_max: None,
            e_sq_ub: None,
            choi_simulable: true,
        },
        ChannelKind::Custom => {
            return Err(Error::UnsupportedKind(
                "no closed forms for custom channels; supply overrides".into(),
            ))
        }
    };
    m.validate()?;
    Ok(m)
}

/// Closed-form lower bound on the max-relative entanglement of the amplitude
/// damping channel: piecewise in λ with breakpoint `(√5 - 1)/2`, continuous
/// there.
pub fn ad_lower_closed(lambda: f64) -> Result<f64> {
    check_param(lambda)?;
    let breakpoint = (5.0f64.sqrt() - 1.0) / 2.0;
    if lambda <= breakpoint {
        let s = (1.0 - lambda).sqrt();
        Ok(((1.0 + s) * (1.0 + s) / 2.0).log2())
    } else {
        Ok(((1.0 + lambda) / (2.0 * lambda)).log2())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, kron, Subsystem};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.25).unwrap() - 0.8112781244591328).abs() < 1e-12);
        assert!(binary_entropy(1.2).is_err());
    }

    #[test]
    fn dephasing_zero_is_identity() {
        let ch = make_channel(ChannelKind::Dephasing, 0.0).unwrap();
        assert_eq!(ch.kraus[0], ComplexMatrix::identity(2));
        assert_eq!(ch.kraus[1].max_abs(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rho = crate::testutil::random_density(&mut rng, 2);
        let out = ch.apply(&rho).unwrap();
        assert!(out.matrix().sub(rho.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn amplitude_damping_kraus_entries() {
        let ch = make_channel(ChannelKind::AmplitudeDamping, 0.5).unwrap();
        assert!((ch.kraus[0].get(0, 0) - cr(1.0)).norm() < 1e-15);
        assert!((ch.kraus[0].get(1, 1) - cr(0.5f64.sqrt())).norm() < 1e-15);
        assert!((ch.kraus[1].get(0, 1) - cr(0.5f64.sqrt())).norm() < 1e-15);
        assert!(!ch.choi_simulable);
    }

    #[test]
    fn erasure_shape_and_trace_preservation() {
        let ch = make_channel(ChannelKind::Erasure, 0.3).unwrap();
        assert_eq!(ch.dim_out, 3);
        assert_eq!(ch.kraus.len(), 3);
        assert!(ch.trace_preservation_defect() < 1e-10);
    }

    #[test]
    fn all_kinds_trace_preserving_on_grid() {
        for kind in [
            ChannelKind::AmplitudeDamping,
            ChannelKind::Dephasing,
            ChannelKind::Erasure,
            ChannelKind::Depolarizing,
        ] {
            for i in 0..=10 {
                let ch = make_channel(kind, i as f64 / 10.0).unwrap();
                assert!(ch.trace_preservation_defect() < 1e-10);
            }
        }
    }

    #[test]
    fn param_out_of_range() {
        assert!(make_channel(ChannelKind::Dephasing, 1.2).is_err());
        assert!(make_channel(ChannelKind::Dephasing, -0.1).is_err());
    }

    #[test]
    fn choi_of_identity_is_max_entangled() {
        let ch = make_channel(ChannelKind::Dephasing, 0.0).unwrap();
        let pi = ch.choi();
        assert!(pi.matrix().sub(maximally_entangled(2).matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn choi_of_amplitude_damping_matches_printed_matrix() {
        for l in [0.0f64, 0.3, 0.5, 1.0] {
            let s = (1.0 - l).sqrt();
            let expect = ComplexMatrix::from_real(
                4,
                4,
                &[
                    1.0, 0.0, 0.0, s, //
                    0.0, 0.0, 0.0, 0.0, //
                    0.0, 0.0, l, 0.0, //
                    s, 0.0, 0.0, 1.0 - l,
                ],
            )
            .scale(cr(0.5));
            let pi = make_channel(ChannelKind::AmplitudeDamping, l).unwrap().choi();
            assert!(pi.matrix().sub(&expect).max_abs() < 1e-15);
        }
    }

    #[test]
    fn choi_of_depolarizing_is_isotropic() {
        let l = 0.37;
        let pi = make_channel(ChannelKind::Depolarizing, l).unwrap().choi();
        let expect = maximally_entangled(2)
            .matrix()
            .scale(cr(1.0 - l))
            .add(&ComplexMatrix::identity(4).scale(cr(l / 4.0)));
        assert!(pi.matrix().sub(&expect).max_abs() < 1e-14);
    }

    #[test]
    fn choi_two_routes_agree() {
        // entrywise assembly vs explicit (I ⊗ K) ψ (I ⊗ K)†
        for (kind, param) in [
            (ChannelKind::AmplitudeDamping, 0.42),
            (ChannelKind::Dephasing, 0.17),
            (ChannelKind::Depolarizing, 0.66),
            (ChannelKind::Erasure, 0.25),
        ] {
            let ch = make_channel(kind, param).unwrap();
            let psi = maximally_entangled(2);
            let mut explicit = ComplexMatrix::zeros(2 * ch.dim_out, 2 * ch.dim_out);
            for k in &ch.kraus {
                let ik = kron(&ComplexMatrix::identity(2), k);
                explicit = explicit.add(&ik.mul(psi.matrix()).mul(&ik.adjoint()));
            }
            assert!(ch.choi().matrix().sub(&explicit).max_abs() < 1e-12);
        }
    }

    #[test]
    fn choi_marginal_is_maximally_mixed() {
        let pi = make_channel(ChannelKind::AmplitudeDamping, 0.5).unwrap().choi();
        let ta = pi.partial_trace(Subsystem::B);
        assert!(ta.matrix().sub(&ComplexMatrix::identity(2).scale(cr(0.5))).max_abs() < 1e-14);
    }

    #[test]
    fn phase_covariance_of_choi_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for kind in [
            ChannelKind::AmplitudeDamping,
            ChannelKind::Dephasing,
            ChannelKind::Depolarizing,
        ] {
            let pi = make_channel(kind, rng.gen_range(0.0..1.0)).unwrap().choi();
            for _ in 0..5 {
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let phase = |sign: f64| {
                    let mut m = ComplexMatrix::zeros(2, 2);
                    m.set(0, 0, c(0.0, sign * theta / 2.0).exp());
                    m.set(1, 1, c(0.0, -sign * theta / 2.0).exp());
                    m
                };
                let u = kron(&phase(1.0), &phase(-1.0));
                let rotated = pi.hermitian().conjugate_by(&u).unwrap();
                assert!(rotated.matrix().sub(pi.matrix()).max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn closed_forms_dephasing() {
        let m = closed_form_measures(ChannelKind::Dephasing, 0.5).unwrap();
        assert!((m.e_r.unwrap().0 - 0.18872187554086717).abs() < 1e-12);
        assert!((m.e_sq_ub.unwrap() - 0.35457890266527003).abs() < 1e-12);
        assert!(m.e_max.is_none());
        assert!(m.choi_simulable);
    }

    #[test]
    fn closed_forms_amplitude_damping_and_depolarizing() {
        let m = closed_form_measures(ChannelKind::AmplitudeDamping, 0.5).unwrap();
        assert!((m.e_max.unwrap().0 - 1.5f64.log2()).abs() < 1e-12);
        assert!(m.e_r.is_none());

        let m = closed_form_measures(ChannelKind::Depolarizing, 2.0 / 3.0).unwrap();
        assert!(m.e_r.unwrap().0.abs() < 1e-12);
        assert!(m.e_sq_ub.is_none());

        let m = closed_form_measures(ChannelKind::Depolarizing, 0.9).unwrap();
        assert_eq!(m.e_r.unwrap().0, 0.0);
    }

    #[test]
    fn erasure_closed_forms_match() {
        let m = closed_form_measures(ChannelKind::Erasure, 0.3).unwrap();
        assert!((m.e_r.unwrap().0 - 0.7).abs() < 1e-12);
        assert_eq!(m.e_r.unwrap().0, m.e_sq_ub.unwrap());
    }

    #[test]
    fn ad_lower_closed_values_and_continuity() {
        assert_eq!(ad_lower_closed(0.0).unwrap(), 1.0);
        let f03 = ((1.0 + 0.7f64.sqrt()).powi(2) / 2.0).log2();
        assert!((ad_lower_closed(0.3).unwrap() - f03).abs() < 1e-14);
        assert!((ad_lower_closed(0.8).unwrap() - 1.125f64.log2()).abs() < 1e-14);

        let b = (5.0f64.sqrt() - 1.0) / 2.0;
        let left = ad_lower_closed(b - 1e-9).unwrap();
        let right = ad_lower_closed(b + 1e-9).unwrap();
        assert!((left - right).abs() < 1e-7);
    }

    #[test]
    fn custom_channel_validation() {
        // a dephasing-like custom channel round-trips
        let deph = make_channel(ChannelKind::Dephasing, 0.4).unwrap();
        let ch = Channel::custom(deph.kraus.clone(), true).unwrap();
        assert_eq!(ch.dim_in, 2);
        assert!(ch.choi_simulable);

        // not trace preserving
        let bad = vec![ComplexMatrix::identity(2).scale(cr(0.5))];
        assert!(Channel::custom(bad, false).is_err());
    }

    /// Numeric oracle for the relative entropy of entanglement of a
    /// phase-covariant Choi state: golden-section coordinate descent of
    /// `S(π‖σ)` over the invariant separable family. Used to pin the
    /// depolarizing and dephasing closed forms.
    fn er_numeric(pi: &BipartiteState) -> f64 {
        use crate::emax::PhaseCovariantSeparable;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut best = f64::INFINITY;
        for _ in 0..16 {
            let p = [
                rng.gen_range(0.1..0.9),
                rng.gen_range(0.1..0.9),
                rng.gen_range(0.1..0.9),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            ];
            let (_, value) = crate::emax::nelder_mead(p, [0.2, 0.2, 0.2, 0.25, 0.8], |q| {
                match PhaseCovariantSeparable::from_free(q[0], q[1], q[2], q[3], q[4]) {
                    Ok(s) => pi.relative_entropy(&s.density()).unwrap_or(f64::INFINITY),
                    Err(_) => f64::INFINITY,
                }
            });
            best = best.min(value);
        }
        best
    }

    #[test]
    fn depolarizing_er_closed_form_matches_numeric_minimization() {
        for l in [0.2, 0.5] {
            let pi = make_channel(ChannelKind::Depolarizing, l).unwrap().choi();
            let closed = closed_form_measures(ChannelKind::Depolarizing, l)
                .unwrap()
                .e_r
                .unwrap()
                .0;
            let numeric = er_numeric(&pi);
            assert!(
                (closed - numeric).abs() < 1e-4,
                "λ={l}: closed {closed} vs numeric {numeric}"
            );
        }
    }

    #[test]
    fn dephasing_er_closed_form_matches_numeric_minimization() {
        let x = 0.5;
        let pi = make_channel(ChannelKind::Dephasing, x).unwrap().choi();
        let closed = closed_form_measures(ChannelKind::Dephasing, x).unwrap().e_r.unwrap().0;
        let numeric = er_numeric(&pi);
        assert!((closed - numeric).abs() < 1e-4, "closed {closed} vs numeric {numeric}");
    }
}
