//! Built-in verification suite: every reproduction target and property the
//! crate promises, each expressed as a pass/fail check with its tolerance
//! pinned in code. The `verify` subcommand and the acceptance test target
//! both run these.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::channels::{self, ad_lower_closed, make_channel, ChannelKind};
use crate::emax::{self, ReducedVariant};
use crate::linalg::{c, cr, dmax, relative_entropy, ComplexMatrix, HermitianMatrix};
use crate::network::{self, Cut, Edge, MeasureCache, MinCutMethod, NetworkGraph, Overrides, WeightPolicy};

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    fn run(name: &'static str, body: impl FnOnce() -> Result<String, String>) -> Self {
        let start = Instant::now();
        let (passed, detail) = match body() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Self { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
    }
}

fn grid21() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

fn fail_if(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Err(msg)
    } else {
        Ok(())
    }
}

/// `E_max` of the damping channel from the Σ-program matches `log2(2-λ)`
/// on a 21-point grid, within 1e-4, in at most five seconds.
pub fn check_sigma_sdp_matches_ad_closed_form() -> CheckResult {
    CheckResult::run("sigma_sdp_matches_ad_closed_form", || {
        let start = Instant::now();
        let mut max_dev: f64 = 0.0;
        for l in grid21() {
            let ch = make_channel(ChannelKind::AmplitudeDamping, l).map_err(|e| e.to_string())?;
            let got = emax::emax_sigma_sdp(&ch).map_err(|e| e.to_string())?.value;
            max_dev = max_dev.max((got - (2.0 - l).log2()).abs());
        }
        let secs = start.elapsed().as_secs_f64();
        fail_if(max_dev > 1e-4, format!("max deviation {max_dev:.2e} exceeds 1e-4"))?;
        fail_if(secs > 5.0, format!("grid took {secs:.2}s, budget is 5s"))?;
        Ok(format!("max dev {max_dev:.2e} over 21 points in {secs:.2}s"))
    })
}

/// The minimum-trace program over the PPT cone reproduces the piecewise
/// closed-form lower bound for the damping channel, with both branches of
/// the piecewise expression exercised.
pub fn check_lower_sdp_matches_ad_lower_bound() -> CheckResult {
    CheckResult::run("lower_sdp_matches_ad_lower_bound", || {
        let breakpoint = (5.0f64.sqrt() - 1.0) / 2.0;
        let grid = grid21();
        let below = grid.iter().filter(|&&l| l < breakpoint).count();
        let above = grid.iter().filter(|&&l| l > breakpoint).count();
        fail_if(below == 0 || above == 0, "grid misses a branch".into())?;
        let mut max_dev: f64 = 0.0;
        for l in grid {
            let ch = make_channel(ChannelKind::AmplitudeDamping, l).map_err(|e| e.to_string())?;
            let got = emax::emax_lower_sdp(&ch).map_err(|e| e.to_string())?.value;
            max_dev = max_dev.max((got - ad_lower_closed(l).unwrap()).abs());
        }
        fail_if(max_dev > 1e-4, format!("max deviation {max_dev:.2e} exceeds 1e-4"))?;
        Ok(format!("max dev {max_dev:.2e}, {below}+{above} points per branch"))
    })
}

/// The marginal-pinned program reproduces `log2(2-λ)` as well.
pub fn check_marginal_sdp_matches_ad_closed_form() -> CheckResult {
    CheckResult::run("marginal_sdp_matches_ad_closed_form", || {
        let mut max_dev: f64 = 0.0;
        for l in grid21() {
            let ch = make_channel(ChannelKind::AmplitudeDamping, l).map_err(|e| e.to_string())?;
            let got = emax::emax_upper_marginal_sdp(&ch).map_err(|e| e.to_string())?.value;
            max_dev = max_dev.max((got - (2.0 - l).log2()).abs());
        }
        fail_if(max_dev > 1e-4, format!("max deviation {max_dev:.2e} exceeds 1e-4"))?;
        Ok(format!("max dev {max_dev:.2e} over 21 points"))
    })
}

/// On Choi-simulable channels the Σ-program and the lower program agree.
pub fn check_sigma_equals_lower_on_simulable() -> CheckResult {
    CheckResult::run("sigma_equals_lower_on_simulable", || {
        let mut max_dev: f64 = 0.0;
        for kind in [ChannelKind::Dephasing, ChannelKind::Erasure, ChannelKind::Depolarizing] {
            for l in grid21() {
                let ch = make_channel(kind, l).map_err(|e| e.to_string())?;
                let a = emax::emax_sigma_sdp(&ch).map_err(|e| e.to_string())?.value;
                let b = emax::emax_lower_sdp(&ch).map_err(|e| e.to_string())?.value;
                max_dev = max_dev.max((a - b).abs());
            }
        }
        fail_if(max_dev > 1e-4, format!("max |sigma - lower| {max_dev:.2e} exceeds 1e-4"))?;
        Ok(format!("max |sigma - lower| {max_dev:.2e} over 3x21 points"))
    })
}

/// Measure ordering on the simulable channels: relative entropy below the
/// squashed upper bound (where available) below the solver value, and the
/// depolarizing channel value vanishing past its entanglement-breaking
/// point.
pub fn check_measure_ordering_on_simulable() -> CheckResult {
    CheckResult::run("measure_ordering_on_simulable", || {
        for l in grid21() {
            let m = channels::closed_form_measures(ChannelKind::Dephasing, l).unwrap();
            let ch = make_channel(ChannelKind::Dephasing, l).map_err(|e| e.to_string())?;
            let emax = emax::emax_sigma_sdp(&ch).map_err(|e| e.to_string())?.value;
            let (er, esq) = (m.e_r.unwrap().0, m.e_sq_ub.unwrap());
            fail_if(er > esq + 1e-9, format!("dephasing x={l}: e_r {er} > e_sq {esq}"))?;
            fail_if(esq > emax + 1e-4, format!("dephasing x={l}: e_sq {esq} > e_max {emax}"))?;
        }
        for kind in [ChannelKind::Erasure, ChannelKind::Depolarizing] {
            for l in grid21() {
                let m = channels::closed_form_measures(kind, l).unwrap();
                let ch = make_channel(kind, l).map_err(|e| e.to_string())?;
                let emax = emax::emax_sigma_sdp(&ch).map_err(|e| e.to_string())?.value;
                let er = m.e_r.unwrap().0;
                fail_if(
                    er > emax + 1e-4,
                    format!("{} λ={l}: e_r {er} > e_max {emax}", kind.name()),
                )?;
                if kind == ChannelKind::Depolarizing && l >= 2.0 / 3.0 {
                    fail_if(emax > 1e-4, format!("depolarizing λ={l}: e_max {emax} not zero"))?;
                }
            }
        }
        Ok("ordering holds on all three 21-point grids".into())
    })
}

fn mu_network(k: usize, x: f64, l: f64) -> NetworkGraph {
    let mut edges: Vec<Edge> = (0..k)
        .map(|_| Edge {
            from: "A".into(),
            to: "B".into(),
            channel: make_channel(ChannelKind::Dephasing, x).unwrap(),
            avg_uses: 1.0,
            overrides: Overrides::default(),
        })
        .collect();
    edges.push(Edge {
        from: "A".into(),
        to: "B".into(),
        channel: make_channel(ChannelKind::AmplitudeDamping, l).unwrap(),
        avg_uses: 1.0,
        overrides: Overrides::default(),
    });
    NetworkGraph::new(vec!["A".into(), "B".into()], edges).unwrap()
}

/// Sign regions of the squashed-vs-versatile comparison for k dephasing
/// channels plus one damping channel, including monotone growth of the
/// advantage with k.
pub fn check_mu_sign_regions() -> CheckResult {
    CheckResult::run("mu_sign_regions", || {
        let cache = MeasureCache::new();
        let mu = |k: usize, x: f64, l: f64| -> Result<f64, String> {
            network::mu_tilde(&mu_network(k, x, l), &Cut::empty(), &cache).map_err(|e| e.to_string())
        };
        let exact_zero = mu(1, 0.0, 0.0)?;
        fail_if(exact_zero != 0.0, format!("identity channels give {exact_zero}, not exactly 0"))?;

        let known = mu(1, 0.5, 1.0)?;
        fail_if(
            (known - 0.3052766235160333).abs() > 1e-3,
            format!("mu(1, 0.5, 1.0) = {known}, expected 0.30528 ± 1e-3"),
        )?;
        // the network route and the closed-form route must agree
        fail_if(
            (known - network::mu_dephasing_damping(1.0, 0.5, 1.0)).abs() > 1e-12,
            "graph route disagrees with closed-form route".into(),
        )?;

        let neg = mu(1, 0.99, 0.2)?;
        fail_if(neg >= 0.0, format!("mu(1, 0.99, 0.2) = {neg}, expected negative"))?;
        let pos = mu(5, 0.5, 0.9)?;
        fail_if(pos <= 0.0, format!("mu(5, 0.5, 0.9) = {pos}, expected positive"))?;

        // pointwise nondecreasing in k wherever the dephasing squashed bound
        // dominates its relative entropy
        let mut checked = 0usize;
        for k in 1..=9u32 {
            for xi in 0..=10 {
                for li in 0..=10 {
                    let x = xi as f64 / 10.0;
                    let l = li as f64 / 10.0;
                    let deph = channels::closed_form_measures(ChannelKind::Dephasing, x).unwrap();
                    if deph.e_sq_ub.unwrap() < deph.e_r.unwrap().0 {
                        continue;
                    }
                    let lo = network::mu_dephasing_damping(k as f64, x, l);
                    let hi = network::mu_dephasing_damping((k + 1) as f64, x, l);
                    fail_if(
                        hi < lo - 1e-12,
                        format!("mu decreasing in k at (k={k}, x={x}, λ={l}): {lo} -> {hi}"),
                    )?;
                    checked += 1;
                }
            }
        }
        Ok(format!("sign regions match; monotone in k at {checked} grid points"))
    })
}

fn random_verification_graph(rng: &mut impl Rng) -> NetworkGraph {
    let m = rng.gen_range(0..=10);
    let mut nodes: Vec<String> = vec!["A".into(), "B".into()];
    for i in 0..m {
        nodes.push(format!("C{i}"));
    }
    let kinds = [
        ChannelKind::AmplitudeDamping,
        ChannelKind::Dephasing,
        ChannelKind::Erasure,
        ChannelKind::Depolarizing,
    ];
    let n_edges = rng.gen_range(1..=30);
    let mut edges = Vec::new();
    for _ in 0..n_edges {
        let from = nodes[rng.gen_range(0..nodes.len())].clone();
        let mut to = nodes[rng.gen_range(0..nodes.len())].clone();
        while to == from {
            to = nodes[rng.gen_range(0..nodes.len())].clone();
        }
        edges.push(Edge {
            from,
            to,
            channel: make_channel(kinds[rng.gen_range(0..4)], rng.gen_range(0.0..1.0)).unwrap(),
            avg_uses: rng.gen_range(0.0..3.0),
            overrides: Overrides::default(),
        });
    }
    NetworkGraph::new(nodes, edges).unwrap()
}

/// Exhaustive cut enumeration and augmenting-path max-flow find the same
/// optimum on seeded random multigraphs.
pub fn check_min_cut_oracle_equivalence() -> CheckResult {
    CheckResult::run("min_cut_oracle_equivalence", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC07);
        let cache = MeasureCache::new();
        let mut max_dev: f64 = 0.0;
        for i in 0..100 {
            let g = random_verification_graph(&mut rng);
            let ex = network::min_cut(&g, WeightPolicy::Versatile, MinCutMethod::Exhaustive, &cache)
                .map_err(|e| e.to_string())?;
            let (_, flow) = network::maxflow_value(&g, WeightPolicy::Versatile, &cache)
                .map_err(|e| e.to_string())?;
            let dev = (ex.e_versatile - flow).abs();
            max_dev = max_dev.max(dev);
            fail_if(dev > 1e-9, format!("graph {i}: exhaustive {} vs flow {flow}", ex.e_versatile))?;
        }
        Ok(format!("100 graphs, max |exhaustive - maxflow| = {max_dev:.2e}"))
    })
}

fn random_density(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
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

/// Divergence properties on 1000 seeded random state pairs of dimensions 4
/// and 6: ordering, vanishing on equal arguments, joint-unitary invariance,
/// and sampled joint quasi-convexity.
pub fn check_divergence_properties() -> CheckResult {
    CheckResult::run("divergence_properties", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1);
        let mut pairs = 0usize;
        for &dim in &[4usize, 6] {
            for _ in 0..500 {
                pairs += 1;
                let rho = random_density(&mut rng, dim);
                let sig = random_density(&mut rng, dim);
                let d = dmax(&rho, &sig).map_err(|e| e.to_string())?;
                let s = relative_entropy(&rho, &sig).map_err(|e| e.to_string())?;
                fail_if(d < s - 1e-9, format!("pair {pairs}: D_max {d} below S {s}"))?;

                let self_d = dmax(&rho, &rho).map_err(|e| e.to_string())?;
                fail_if(self_d.abs() > 1e-10, format!("pair {pairs}: D_max(ρ‖ρ) = {self_d}"))?;

                let u = random_density(&mut rng, dim).eig().map_err(|e| e.to_string())?.1;
                let rho_u = rho.conjugate_by(&u).map_err(|e| e.to_string())?;
                let sig_u = sig.conjugate_by(&u).map_err(|e| e.to_string())?;
                let d_u = dmax(&rho_u, &sig_u).map_err(|e| e.to_string())?;
                fail_if((d_u - d).abs() > 1e-9, format!("pair {pairs}: invariance off by {}", (d_u - d).abs()))?;

                if pairs % 2 == 0 {
                    let rho2 = random_density(&mut rng, dim);
                    let sig2 = random_density(&mut rng, dim);
                    let p: f64 = rng.gen_range(0.0..1.0);
                    let mix_r = rho.scale(p).add(&rho2.scale(1.0 - p));
                    let mix_s = sig.scale(p).add(&sig2.scale(1.0 - p));
                    let lhs = dmax(&mix_r, &mix_s).map_err(|e| e.to_string())?;
                    let rhs = d.max(dmax(&rho2, &sig2).map_err(|e| e.to_string())?);
                    fail_if(lhs > rhs + 1e-9, format!("pair {pairs}: quasi-convexity violated"))?;
                }
            }
        }
        Ok(format!("{pairs} pairs across dims 4 and 6"))
    })
}

/// The reduced multi-start search agrees with the corresponding conic
/// program on each phase-covariant kind, both variants, within 1e-3.
pub fn check_reduced_search_matches_sdp() -> CheckResult {
    CheckResult::run("reduced_search_matches_sdp", || {
        let mut max_dev: f64 = 0.0;
        for kind in [ChannelKind::AmplitudeDamping, ChannelKind::Dephasing, ChannelKind::Depolarizing] {
            for l in [0.1, 0.5, 0.9] {
                let ch = make_channel(kind, l).map_err(|e| e.to_string())?;
                let red_lo = emax::emax_reduced(&ch, ReducedVariant::Lower)
                    .map_err(|e| e.to_string())?
                    .value;
                let sdp_lo = emax::emax_lower_sdp(&ch).map_err(|e| e.to_string())?.value;
                let dev_lo = (red_lo - sdp_lo).abs();
                fail_if(
                    dev_lo > 1e-3,
                    format!("{} λ={l}: reduced lower {red_lo} vs sdp {sdp_lo}", kind.name()),
                )?;
                let red_hi = emax::emax_reduced(&ch, ReducedVariant::Upper)
                    .map_err(|e| e.to_string())?
                    .value;
                let sdp_hi = emax::emax_upper_marginal_sdp(&ch).map_err(|e| e.to_string())?.value;
                let dev_hi = (red_hi - sdp_hi).abs();
                fail_if(
                    dev_hi > 1e-3,
                    format!("{} λ={l}: reduced upper {red_hi} vs sdp {sdp_hi}", kind.name()),
                )?;
                max_dev = max_dev.max(dev_lo.max(dev_hi));
            }
        }
        Ok(format!("max |reduced - sdp| = {max_dev:.2e} over 9 channels x 2 variants"))
    })
}

/// Shape of the strong converse error curve at unit rate gap.
pub fn check_strong_converse_curve() -> CheckResult {
    CheckResult::run("strong_converse_curve", || {
        let at = |n: f64| network::strong_converse_error(2.0, n, 1.0, 2.0);
        fail_if((at(2.0) - 0.5).abs() > 1e-15, format!("value at N=2 is {}", at(2.0)))?;
        let mut prev = -1.0;
        for n in 1..=60 {
            let v = at(n as f64);
            fail_if(v <= prev, format!("not strictly increasing at N={n}"))?;
            prev = v;
        }
        fail_if(at(60.0) < 1.0 - 1e-9, format!("value at N=60 is {}", at(60.0)))?;
        Ok("0.5 at N=2, strictly increasing, above 1 - 1e-9 by N=60".into())
    })
}

/// Runs the whole suite in criterion order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_sigma_sdp_matches_ad_closed_form(),
        check_lower_sdp_matches_ad_lower_bound(),
        check_marginal_sdp_matches_ad_closed_form(),
        check_sigma_equals_lower_on_simulable(),
        check_measure_ordering_on_simulable(),
        check_mu_sign_regions(),
        check_min_cut_oracle_equivalence(),
        check_divergence_properties(),
        check_reduced_search_matches_sdp(),
        check_strong_converse_curve(),
    ]
}

/// Renders one report line per check.
pub fn render(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let status = if r.passed { "ok  " } else { "FAIL" };
        out.push_str(&format!("[{status}] {} ({}, {:.2}s)\n", r.name, r.detail, r.seconds));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let total: f64 = results.iter().map(|r| r.seconds).sum();
    out.push_str(&format!(
        "{} passed, {} failed, {:.1}s total\n",
        results.len() - failed,
        failed,
        total
    ));
    out
}

/// Exit code contract: zero only when every check passed.
pub fn exit_code(results: &[CheckResult]) -> i32 {
    if results.iter().all(|r| r.passed) {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_check_is_named_and_drives_exit_code() {
        // a tampered closed form must surface as a named failure
        let tampered = CheckResult::run("sigma_sdp_matches_ad_closed_form", || {
            let l: f64 = 0.5;
            let tampered_closed_form = (2.0 - l).log2() + 0.01;
            let ch = make_channel(ChannelKind::AmplitudeDamping, l).unwrap();
            let got = emax::emax_sigma_sdp(&ch).unwrap().value;
            let dev = (got - tampered_closed_form).abs();
            fail_if(dev > 1e-4, format!("max deviation {dev:.2e} exceeds 1e-4"))?;
            Ok("unexpected agreement".into())
        });
        assert!(!tampered.passed);
        let report = render(&[tampered.clone()]);
        assert!(report.contains("FAIL"));
        assert!(report.contains("sigma_sdp_matches_ad_closed_form"));
        assert_eq!(exit_code(&[tampered]), 1);

        let ok = CheckResult::run("strong_converse_curve", || Ok("fine".into()));
        assert_eq!(exit_code(&[ok]), 0);
    }

    #[test]
    fn mu_closed_form_handles_vanishing_denominator() {
        assert_eq!(network::mu_dephasing_damping(3.0, 1.0, 1.0), 0.0);
    }
}
