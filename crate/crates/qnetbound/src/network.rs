//! Directed-multigraph model of a quantum network and evaluation of the cut
//! bounds: the versatile weight (relative entropy on Choi-simulable crossing
//! channels, max-relative entropy on the rest), single-measure weights, the
//! normalized squashed-vs-versatile comparison, minimum cuts, and the strong
//! converse error curve.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Mutex;

use serde::Deserialize;

use crate::channels::{self, Channel, ChannelKind, MeasureMethod};
use crate::emax;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Endpoint names reserved for the two users.
pub const NODE_A: &str = "A";
pub const NODE_B: &str = "B";

/// Optional user-supplied measure values for one edge; these take precedence
/// over closed forms and solver runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub e_r: Option<f64>,
    pub e_max: Option<f64>,
    pub e_sq_ub: Option<f64>,
}

/// One directed edge carrying a channel used `avg_uses` times on average.
#[derive(Debug, Clone)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub channel: Channel,
    pub avg_uses: f64,
    pub overrides: Overrides,
}

/// Directed multigraph with named nodes including `A` and `B`; parallel
/// edges and both directions are permitted.
#[derive(Debug, Clone)]
pub struct NetworkGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

impl NetworkGraph {
    pub fn new(nodes: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let set: BTreeSet<&str> = nodes.iter().map(|s| s.as_str()).collect();
        if set.len() != nodes.len() {
            return Err(Error::InvalidNetwork("duplicate node names".into()));
        }
        if !set.contains(NODE_A) || !set.contains(NODE_B) {
            return Err(Error::InvalidNetwork("nodes must include \"A\" and \"B\"".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if !set.contains(e.from.as_str()) || !set.contains(e.to.as_str()) {
                return Err(Error::InvalidNetwork(format!(
                    "edge {i} references unknown node"
                )));
            }
            if !(e.avg_uses >= 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "edge {i} has negative avg_uses"
                )));
            }
        }
        Ok(Self { nodes, edges })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Nodes other than the two endpoints, in declaration order.
    pub fn intermediates(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .map(|s| s.as_str())
            .filter(|&s| s != NODE_A && s != NODE_B)
            .collect()
    }

    fn edge_label(&self, idx: usize) -> String {
        let e = &self.edges[idx];
        format!("{idx} ({} -> {}, {})", e.from, e.to, e.channel.kind.name())
    }
}

/// A bipartition of the intermediate nodes, identified by the set on the
/// `A` side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    c_a: BTreeSet<String>,
}

impl Cut {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(graph: &NetworkGraph, names: I) -> Result<Self> {
        let mut c_a = BTreeSet::new();
        for n in names {
            let n: String = n.into();
            if n == NODE_A || n == NODE_B {
                return Err(Error::InvalidNetwork("cut may not contain A or B".into()));
            }
            if !graph.nodes.iter().any(|m| *m == n) {
                return Err(Error::InvalidNetwork(format!("unknown node {n:?} in cut")));
            }
            c_a.insert(n);
        }
        Ok(Self { c_a })
    }

    pub fn empty() -> Self {
        Self { c_a: BTreeSet::new() }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.c_a.iter().map(|s| s.as_str())
    }

    fn contains(&self, name: &str) -> bool {
        self.c_a.contains(name)
    }
}

/// Entanglement measures attachable to an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    RelativeEntropy,
    MaxRelative,
    SquashedUb,
}

impl Measure {
    pub fn name(&self) -> &'static str {
        match self {
            Measure::RelativeEntropy => "e_r",
            Measure::MaxRelative => "e_max",
            Measure::SquashedUb => "e_sq_ub",
        }
    }
}

/// Weighting rule for a cut: the versatile rule applies the relative entropy
/// of entanglement to Choi-simulable crossing channels and the max-relative
/// entropy to the rest; the single rule applies one measure throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightPolicy {
    Versatile,
    Single(Measure),
}

/// Cache of solver-computed channel values, keyed by kind and parameter
/// rounded to 1e-12. Interior mutability keeps sweeps cheap while staying a
/// single-writer-per-key map.
#[derive(Debug, Default)]
pub struct MeasureCache {
    emax: Mutex<HashMap<(ChannelKind, i64), f64>>,
}

impl MeasureCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn emax_sdp(&self, ch: &Channel) -> Result<f64> {
        let key = (ch.kind, (ch.param / 1e-12).round() as i64);
        if ch.kind != ChannelKind::Custom {
            if let Some(&v) = self.emax.lock().unwrap().get(&key) {
                return Ok(v);
            }
        }
        let v = emax::emax_sigma_sdp(ch)?.value;
        if ch.kind != ChannelKind::Custom {
            self.emax.lock().unwrap().insert(key, v);
        }
        Ok(v)
    }
}

/// Value of `measure` on one edge: override first, then closed form, then
/// (for the max-relative entropy) the conic solver.
pub fn edge_measure(
    graph: &NetworkGraph,
    idx: usize,
    measure: Measure,
    cache: &MeasureCache,
) -> Result<f64> {
    let e = &graph.edges[idx];
    let missing = || Error::MissingMeasure {
        edge: graph.edge_label(idx),
        measure: measure.name().into(),
    };
    let closed = if e.channel.kind == ChannelKind::Custom {
        None
    } else {
        Some(channels::closed_form_measures(e.channel.kind, e.channel.param)?)
    };
    match measure {
        Measure::RelativeEntropy => {
            if let Some(v) = e.overrides.e_r {
                return Ok(v);
            }
            closed
                .and_then(|m| m.e_r.map(|(v, _)| v))
                .ok_or_else(missing)
        }
        Measure::SquashedUb => {
            if let Some(v) = e.overrides.e_sq_ub {
                return Ok(v);
            }
            closed.and_then(|m| m.e_sq_ub).ok_or_else(missing)
        }
        Measure::MaxRelative => {
            if let Some(v) = e.overrides.e_max {
                return Ok(v);
            }
            if let Some(v) = closed.as_ref().and_then(|m| m.e_max.map(|(v, _)| v)) {
                return Ok(v);
            }
            cache.emax_sdp(&e.channel).map_err(|err| match err {
                Error::UnsupportedDims { .. } => missing(),
                other => other,
            })
        }
    }
}

/// Provenance of an edge's max-relative entropy value, mirroring the
/// resolution order of [`edge_measure`].
pub fn edge_emax_method(edge: &Edge) -> MeasureMethod {
    if edge.overrides.e_max.is_some() {
        MeasureMethod::Override
    } else if edge.channel.kind == ChannelKind::AmplitudeDamping {
        MeasureMethod::ClosedForm
    } else {
        MeasureMethod::Sdp
    }
}

/// Versatile weight of one edge.
fn versatile_weight(graph: &NetworkGraph, idx: usize, cache: &MeasureCache) -> Result<f64> {
    if graph.edges[idx].channel.choi_simulable {
        edge_measure(graph, idx, Measure::RelativeEntropy, cache)
    } else {
        edge_measure(graph, idx, Measure::MaxRelative, cache)
    }
}

/// Indices of the edges with one endpoint in `{A} ∪ C_A` and the other in
/// `C_B ∪ {B}`, regardless of direction.
pub fn cut_edges(graph: &NetworkGraph, cut: &Cut) -> Result<Vec<usize>> {
    for n in cut.names() {
        if !graph.nodes.iter().any(|m| m == n) {
            return Err(Error::InvalidNetwork(format!("unknown node {n:?} in cut")));
        }
    }
    let side_a = |name: &str| name == NODE_A || cut.contains(name);
    Ok(graph
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| side_a(&e.from) != side_a(&e.to))
        .map(|(i, _)| i)
        .collect())
}

/// Cut weight `Σ_l ⟨m^(l)⟩ · w_l` over the crossing edges.
pub fn cut_entanglement(
    graph: &NetworkGraph,
    cut: &Cut,
    policy: WeightPolicy,
    cache: &MeasureCache,
) -> Result<f64> {
    let mut total = 0.0;
    for idx in cut_edges(graph, cut)? {
        let w = match policy {
            WeightPolicy::Versatile => versatile_weight(graph, idx, cache)?,
            WeightPolicy::Single(m) => edge_measure(graph, idx, m, cache)?,
        };
        total += graph.edges[idx].avg_uses * w;
    }
    Ok(total)
}

/// Continuity data of a measure at error `ε`: the bound on the shared ebits
/// (or pbits) is `(f + ℰ)/g`.
#[derive(Debug, Clone, Copy)]
pub struct ContinuityProfile {
    pub measure: ProfileMeasure,
    pub epsilon: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMeasure {
    ErVersatile,
    Emax,
}

impl ContinuityProfile {
    /// Profile of the versatile relative-entropy bound:
    /// `f = -2[ε log2 ε + (1-ε) log2(1-ε)]`, `g = 1 - 8ε`. The resulting
    /// bound is finite only for `ε < 1/8`.
    pub fn er_versatile(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        let f = if epsilon == 0.0 {
            0.0
        } else {
            -2.0 * (epsilon * epsilon.log2() + (1.0 - epsilon) * (1.0 - epsilon).log2())
        };
        Ok(Self {
            measure: ProfileMeasure::ErVersatile,
            epsilon,
            f,
            g: 1.0 - 8.0 * epsilon,
        })
    }

    /// Profile of the max-relative entropy bound: `f = -2 log2(1 - ε/2)`,
    /// `g = 1`.
    pub fn emax(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            measure: ProfileMeasure::Emax,
            epsilon,
            f: -2.0 * (1.0 - epsilon / 2.0).log2(),
            g: 1.0,
        })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain("epsilon", epsilon));
    }
    Ok(())
}

/// Upper bound `(f + ℰ)/g` on the average shared ebits (or pbits);
/// saturates to `+∞` where the continuity prefactor `g` is not positive,
/// which for the versatile profile happens at `ε ≥ 1/8`.
pub fn ebit_upper_bound(e_cut: f64, profile: &ContinuityProfile) -> f64 {
    if profile.g <= 0.0 {
        return f64::INFINITY;
    }
    (profile.f + e_cut) / profile.g
}

/// Normalized advantage of the versatile cut weight over the squashed
/// entanglement cut weight, in `[-1, 1]`; zero by convention when both cut
/// weights vanish. Positive where the versatile bound is tighter.
pub fn mu_tilde(graph: &NetworkGraph, cut: &Cut, cache: &MeasureCache) -> Result<f64> {
    let e_sq = cut_entanglement(graph, cut, WeightPolicy::Single(Measure::SquashedUb), cache)?;
    let e_v = cut_entanglement(graph, cut, WeightPolicy::Versatile, cache)?;
    if e_sq + e_v == 0.0 {
        return Ok(0.0);
    }
    Ok((e_sq - e_v) / (e_sq + e_v))
}

/// Strategy for the minimum-cut search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinCutMethod {
    /// Enumerates all `2^M` subsets of intermediate nodes (M ≤ 28).
    Exhaustive,
    /// Shortest-augmenting-path max-flow on the undirected capacity graph.
    MaxFlow,
    /// Exhaustive for M ≤ 20, max-flow beyond.
    Auto,
}

const EXHAUSTIVE_MAX: usize = 28;
const AUTO_EXHAUSTIVE_MAX: usize = 20;
const FLOW_CUTOFF: f64 = 1e-12;

/// Everything known about one evaluated cut.
#[derive(Debug, Clone)]
pub struct CutBound {
    pub cut: Cut,
    pub crossing_edges: Vec<usize>,
    /// Versatile cut weight ℰ'.
    pub e_versatile: f64,
    /// Single-measure max-relative cut weight, when every crossing edge has
    /// a value.
    pub e_emax: Option<f64>,
    /// Squashed-vs-versatile comparison, when every crossing edge has a
    /// squashed-entanglement upper bound.
    pub mu: Option<f64>,
    /// `(f + ℰ)/g` under the two profiles at the supplied error, when one
    /// was supplied.
    pub ebit_versatile: Option<f64>,
    pub ebit_emax: Option<f64>,
}

/// Evaluates one cut under every available measure; `epsilon` additionally
/// fills the ebit bounds.
pub fn evaluate_cut(
    graph: &NetworkGraph,
    cut: &Cut,
    epsilon: Option<f64>,
    cache: &MeasureCache,
) -> Result<CutBound> {
    let crossing = cut_edges(graph, cut)?;
    let e_versatile = cut_entanglement(graph, cut, WeightPolicy::Versatile, cache)?;
    let e_emax = match cut_entanglement(graph, cut, WeightPolicy::Single(Measure::MaxRelative), cache) {
        Ok(v) => Some(v),
        Err(Error::MissingMeasure { .. }) => None,
        Err(e) => return Err(e),
    };
    let mu = match mu_tilde(graph, cut, cache) {
        Ok(v) => Some(v),
        Err(Error::MissingMeasure { .. }) => None,
        Err(e) => return Err(e),
    };
    let (ebit_versatile, ebit_emax) = match epsilon {
        Some(eps) => {
            let ev = ebit_upper_bound(e_versatile, &ContinuityProfile::er_versatile(eps)?);
            let em = e_emax.map(|e| ebit_upper_bound(e, &ContinuityProfile::emax(eps).expect("validated")));
            (Some(ev), em)
        }
        None => (None, None),
    };
    Ok(CutBound {
        cut: cut.clone(),
        crossing_edges: crossing,
        e_versatile,
        e_emax,
        mu,
        ebit_versatile,
        ebit_emax,
    })
}

/// The cut minimizing the policy weight.
pub fn min_cut(
    graph: &NetworkGraph,
    policy: WeightPolicy,
    method: MinCutMethod,
    cache: &MeasureCache,
) -> Result<CutBound> {
    let inter = graph.intermediates();
    let m = inter.len();
    let use_exhaustive = match method {
        MinCutMethod::Exhaustive => {
            if m > EXHAUSTIVE_MAX {
                return Err(Error::TooLarge { nodes: m, max: EXHAUSTIVE_MAX });
            }
            true
        }
        MinCutMethod::MaxFlow => false,
        MinCutMethod::Auto => m <= AUTO_EXHAUSTIVE_MAX,
    };
    let cut = if use_exhaustive {
        exhaustive_min_cut(graph, policy, cache)?
    } else {
        maxflow_min_cut(graph, policy, cache)?.0
    };
    evaluate_cut(graph, &cut, None, cache)
}

fn exhaustive_min_cut(
    graph: &NetworkGraph,
    policy: WeightPolicy,
    cache: &MeasureCache,
) -> Result<Cut> {
    let inter = graph.intermediates();
    let m = inter.len();
    // resolve weights once; cut values are then pure sums
    let mut weights = Vec::with_capacity(graph.edges.len());
    for idx in 0..graph.edges.len() {
        let w = match policy {
            WeightPolicy::Versatile => versatile_weight(graph, idx, cache)?,
            WeightPolicy::Single(ms) => edge_measure(graph, idx, ms, cache)?,
        };
        weights.push(graph.edges[idx].avg_uses * w);
    }
    let node_index: HashMap<&str, usize> = inter.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let side_bit = |mask: u64, name: &str| -> bool {
        if name == NODE_A {
            true
        } else if name == NODE_B {
            false
        } else {
            mask >> node_index[name] & 1 == 1
        }
    };

    let mut best_mask = 0u64;
    let mut best = f64::INFINITY;
    for mask in 0..(1u64 << m) {
        let mut v = 0.0;
        for (e, w) in graph.edges.iter().zip(&weights) {
            if side_bit(mask, &e.from) != side_bit(mask, &e.to) {
                v += w;
            }
        }
        if v < best {
            best = v;
            best_mask = mask;
        }
    }
    Cut::new(
        graph,
        inter.iter()
            .enumerate()
            .filter(|(i, _)| best_mask >> i & 1 == 1)
            .map(|(_, &n)| n),
    )
}

/// Max-flow min-cut on the undirected capacity graph with
/// `capacity(u,v) = Σ ⟨m⟩·w` over edges between `u` and `v` in both
/// directions. Returns the cut read off the final residual reachability
/// from `A`, together with the flow value.
fn maxflow_min_cut(
    graph: &NetworkGraph,
    policy: WeightPolicy,
    cache: &MeasureCache,
) -> Result<(Cut, f64)> {
    let n = graph.nodes.len();
    let index: HashMap<&str, usize> = graph.nodes.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let (a, b) = (index[NODE_A], index[NODE_B]);

    let mut cap = vec![vec![0.0f64; n]; n];
    for (idx, e) in graph.edges.iter().enumerate() {
        let w = match policy {
            WeightPolicy::Versatile => versatile_weight(graph, idx, cache)?,
            WeightPolicy::Single(ms) => edge_measure(graph, idx, ms, cache)?,
        };
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Domain("max-flow edge weight", w));
        }
        let (u, v) = (index[e.from.as_str()], index[e.to.as_str()]);
        if u == v {
            continue; // self loops never cross a cut
        }
        cap[u][v] += e.avg_uses * w;
        cap[v][u] += e.avg_uses * w;
    }

    let mut flow = 0.0f64;
    loop {
        // BFS for the shortest augmenting path; node order is deterministic
        let mut parent = vec![usize::MAX; n];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && cap[u][v] > FLOW_CUTOFF {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[b] == usize::MAX {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = b;
        while v != a {
            bottleneck = bottleneck.min(cap[parent[v]][v]);
            v = parent[v];
        }
        let mut v = b;
        while v != a {
            cap[parent[v]][v] -= bottleneck;
            cap[v][parent[v]] += bottleneck;
            v = parent[v];
        }
        flow += bottleneck;
    }

    // residual reachability from A defines the A side of the cut
    let mut reach = vec![false; n];
    reach[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if !reach[v] && cap[u][v] > FLOW_CUTOFF {
                reach[v] = true;
                queue.push_back(v);
            }
        }
    }
    let cut = Cut::new(
        graph,
        graph.nodes.iter()
            .enumerate()
            .filter(|(i, name)| reach[*i] && name.as_str() != NODE_A && name.as_str() != NODE_B)
            .map(|(_, name)| name.clone()),
    )?;
    Ok((cut, flow))
}

/// Exposes the max-flow value alongside the cut, for oracle comparisons.
pub fn maxflow_value(
    graph: &NetworkGraph,
    policy: WeightPolicy,
    cache: &MeasureCache,
) -> Result<(Cut, f64)> {
    maxflow_min_cut(graph, policy, cache)
}

/// Lower bound on the failure probability `ε/2` of any protocol that tries
/// to beat the entanglement bound: `max(0, 1 - 2^{-(n/c)·(rate - e)})`,
/// which tends to one exponentially once the rate exceeds the channel
/// entanglement.
pub fn strong_converse_error(rate: f64, n_uses: f64, e_channel: f64, c: f64) -> f64 {
    let exponent = -(n_uses / c) * (rate - e_channel);
    (1.0 - 2.0f64.powf(exponent)).max(0.0)
}

/// `mu_tilde` for the canonical single-cut family of `k` dephasing channels
/// at parameter `x` plus one amplitude damping channel at `lambda`, all with
/// equal average uses, evaluated purely from closed forms.
pub fn mu_dephasing_damping(k: f64, x: f64, lambda: f64) -> f64 {
    let ad_emax = channels::closed_form_measures(ChannelKind::AmplitudeDamping, lambda)
        .expect("λ validated by caller")
        .e_max
        .expect("closed form exists")
        .0;
    mu_dephasing_damping_with(k, x, lambda, ad_emax)
}

/// Same family with an externally supplied damping-channel value, so solver
/// output can be cross-checked against the closed form.
pub fn mu_dephasing_damping_with(k: f64, x: f64, lambda: f64, ad_emax: f64) -> f64 {
    let deph = channels::closed_form_measures(ChannelKind::Dephasing, x).expect("x validated");
    let ad = channels::closed_form_measures(ChannelKind::AmplitudeDamping, lambda).expect("λ validated");
    let (er, esq_d) = (deph.e_r.expect("closed form").0, deph.e_sq_ub.expect("closed form"));
    let esq_a = ad.e_sq_ub.expect("closed form");
    let num = k * (esq_d - er) + (esq_a - ad_emax);
    let den = k * (esq_d + er) + (esq_a + ad_emax);
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

// ---------------------------------------------------------------------------
// network file ingestion

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub epsilon: f64,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub channel: ChannelSpec,
    pub avg_uses: f64,
    #[serde(default)]
    pub overrides: Option<OverrideSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub kind: String,
    #[serde(default)]
    pub param: Option<f64>,
    /// Kraus operators for `custom` channels: matrices of `[re, im]` pairs,
    /// each `dim_out x dim_in`.
    #[serde(default)]
    pub kraus: Option<Vec<Vec<Vec<[f64; 2]>>>>,
    #[serde(default)]
    pub choi_simulable: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideSpec {
    #[serde(default)]
    pub e_r: Option<f64>,
    #[serde(default)]
    pub e_max: Option<f64>,
    #[serde(default)]
    pub e_sq_ub: Option<f64>,
}

impl NetworkFile {
    /// Parses the UTF-8 JSON network format; unknown keys are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Validates and converts into a graph, returning it with the file's
    /// error threshold.
    pub fn into_graph(self) -> Result<(NetworkGraph, f64)> {
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::InvalidNetwork(format!(
                "epsilon {} outside [0, 1)",
                self.epsilon
            )));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, spec) in self.edges.into_iter().enumerate() {
            let kind = ChannelKind::parse(&spec.channel.kind)?;
            let channel = match kind {
                ChannelKind::Custom => {
                    let kraus_spec = spec.channel.kraus.ok_or_else(|| {
                        Error::InvalidNetwork(format!("edge {i}: custom channel needs kraus"))
                    })?;
                    let simulable = spec.channel.choi_simulable.ok_or_else(|| {
                        Error::InvalidNetwork(format!(
                            "edge {i}: custom channel needs choi_simulable"
                        ))
                    })?;
                    let mut kraus = Vec::with_capacity(kraus_spec.len());
                    for mat in kraus_spec {
                        let rows = mat.len();
                        let cols = mat.first().map(|r| r.len()).unwrap_or(0);
                        if rows == 0 || cols == 0 || mat.iter().any(|r| r.len() != cols) {
                            return Err(Error::InvalidNetwork(format!(
                                "edge {i}: ragged kraus matrix"
                            )));
                        }
                        let mut m = ComplexMatrix::zeros(rows, cols);
                        for (r, row) in mat.iter().enumerate() {
                            for (cidx, &[re, im]) in row.iter().enumerate() {
                                m.set(r, cidx, num_complex::Complex64::new(re, im));
                            }
                        }
                        kraus.push(m);
                    }
                    Channel::custom(kraus, simulable)
                        .map_err(|e| Error::InvalidNetwork(format!("edge {i}: {e}")))?
                }
                named => {
                    if spec.channel.kraus.is_some() || spec.channel.choi_simulable.is_some() {
                        return Err(Error::InvalidNetwork(format!(
                            "edge {i}: kraus/choi_simulable only apply to custom channels"
                        )));
                    }
                    let param = spec.channel.param.ok_or_else(|| {
                        Error::InvalidNetwork(format!("edge {i}: channel needs param"))
                    })?;
                    channels::make_channel(named, param)
                        .map_err(|e| Error::InvalidNetwork(format!("edge {i}: {e}")))?
                }
            };
            let overrides = spec
                .overrides
                .map(|o| Overrides { e_r: o.e_r, e_max: o.e_max, e_sq_ub: o.e_sq_ub })
                .unwrap_or_default();
            edges.push(Edge {
                from: spec.from,
                to: spec.to,
                channel,
                avg_uses: spec.avg_uses,
                overrides,
            });
        }
        Ok((NetworkGraph::new(self.nodes, edges)?, self.epsilon))
    }
}
