// Copyright contributors to the zxstab project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Recursive stabiliser decomposition with interleaved simplification.
//!
//! A closed non-Clifford diagram is evaluated by repeatedly unfusing up
//! to six π/4 phases and replacing them with stabiliser terms: six magic
//! phases become seven Clifford terms, two become two, one becomes two.
//! Each child is fully simplified before recursing, which is where the
//! exponential savings come from.
//!
//! The first `parallel_depth` levels are expanded breadth-first and the
//! resulting frontier is evaluated in parallel; each worker then unwinds
//! depth-first, so at most 7^depth · ⌈t/6⌉ diagrams are live at a time.
//! Results are folded in frontier order with the exact ring addition, so
//! the final scalar is identical for any worker count.

use num::BigUint;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use crate::graph::{EKind, VKind, ZXDiagram, V};
use crate::phase::Phase;
use crate::scalar::Scalar;
use crate::simplify::full_simp;

#[derive(Clone, Debug)]
pub struct DecompCfg {
    /// Breadth-first fan-out depth before the parallel phase.
    pub parallel_depth: u32,
    /// Force the sequential driver even when the parallel feature is on.
    pub sequential: bool,
    /// Cooperative deadline, checked between decomposition branches.
    pub deadline: Option<Instant>,
}

impl Default for DecompCfg {
    fn default() -> DecompCfg {
        DecompCfg {
            parallel_depth: 3,
            sequential: false,
            deadline: None,
        }
    }
}

/// Counters for one decomposition run.
///
/// `leaf_terms` counts every terminated branch, including branches pruned
/// because their scalar became exactly zero. `naive_terms` is the
/// reference 7^{⌈t₀/6⌉} for the T-count t₀ of the diagram as given,
/// before the first simplification.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub leaf_terms: u64,
    pub max_live_diagrams: u64,
    /// Non-Clifford spider count after the first full simplification.
    pub initial_t: u32,
    /// Non-Clifford spider count of the input diagram.
    pub pre_simp_t: u32,
    /// 7^{⌈pre_simp_t/6⌉}, as a decimal string in JSON.
    #[serde(serialize_with = "serialize_biguint")]
    pub naive_terms: BigUint,
    pub wall_time_ms: u64,
    /// depth → (T-count → number of diagrams processed).
    pub depth_t_histogram: BTreeMap<u32, BTreeMap<u32, u64>>,
}

fn serialize_biguint<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub scalar: Scalar,
    pub report: DecompositionReport,
    pub timed_out: bool,
}

#[derive(Debug, Clone)]
pub enum DecompError {
    /// A branch reached T-count zero but spiders remained, or some other
    /// state that indicates a rewrite bug rather than a user error.
    Inconsistency(String),
    NotClosed,
}

impl std::fmt::Display for DecompError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecompError::Inconsistency(m) => write!(f, "internal inconsistency: {}", m),
            DecompError::NotClosed => write!(f, "decompose requires a closed diagram"),
        }
    }
}

impl std::error::Error for DecompError {}

/// 7^{⌈t/6⌉}: the naive stabiliser-term count for t magic states.
pub fn naive_terms(t: u64) -> BigUint {
    BigUint::from(7u32).pow(t.div_ceil(6) as u32)
}

/// Run a closure inside a worker pool of the given size (None uses the
/// global pool). With the parallel feature disabled this just calls the
/// closure.
#[cfg(feature = "parallel")]
pub fn run_with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn run_with_threads<T: Send>(_threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    f()
}

// ----------------------------------------------------------------------
// unfusing and the stabiliser terms
// ----------------------------------------------------------------------

/// Split a π/4 factor off a spider with odd phase. The spider keeps
/// phase − π/4 and gains a fresh degree-1 π/4 spider reached through a
/// phase-0 junction (two Hadamard edges compose to a plain wire, so the
/// value is unchanged). Returns the fresh leaf.
pub fn unfuse_t(d: &mut ZXDiagram, v: V) -> Result<V, DecompError> {
    if !d.contains(v) || !d.kind(v).is_spider() || !d.phase(v).is_odd() {
        return Err(DecompError::Inconsistency(
            "unfuse_t requires a spider with odd phase".into(),
        ));
    }
    d.add_to_phase(v, Phase::MINUS_T);
    let base = d.add_vertex(VKind::Z, Phase::ZERO);
    let leaf = d.add_vertex(VKind::Z, Phase::T);
    d.add_edge(v, base, EKind::Hadamard);
    d.add_edge(base, leaf, EKind::Hadamard);
    Ok(leaf)
}

/// One stabiliser replacement applied to a set of odd-phase target
/// spiders: a phase shift per target, optional new structure, and a
/// coefficient folded into the scalar.
fn apply_term(d: &ZXDiagram, targets: &[V], kind: DecompKind, term: usize) -> ZXDiagram {
    let mut g = d.clone();
    match (kind, term) {
        (DecompKind::Bss, 0) => {
            // |+⟩-type product term
            *g.scalar_mut() *= Scalar::new(2, -1, 0, 1, -1);
            for &v in targets {
                g.add_to_phase(v, Phase::MINUS_T);
            }
        }
        (DecompKind::Bss, 1) => {
            // |−⟩-type product term
            *g.scalar_mut() *= Scalar::new(2, -1, 0, 1, 1);
            for &v in targets {
                g.add_to_phase(v, Phase::new(3));
            }
        }
        (DecompKind::Bss, 2) => {
            // odd-weight superposition
            *g.scalar_mut() *= Scalar::new(-1, 0, -1, 0, 0);
            let w = g.add_vertex(VKind::Z, Phase::PI);
            for &v in targets {
                g.add_to_phase(v, Phase::T);
                g.add_edge(v, w, EKind::Hadamard);
            }
        }
        (DecompKind::Bss, 3) => {
            // even-weight superposition
            *g.scalar_mut() *= Scalar::new(-1, -1, 0, -1, 0);
            let w = g.add_vertex(VKind::Z, Phase::ZERO);
            for &v in targets {
                g.add_to_phase(v, Phase::T);
                g.add_edge(v, w, EKind::Hadamard);
            }
        }
        (DecompKind::Bss, 4) => {
            // GHZ-type term: plain edges pin all six targets together
            *g.scalar_mut() *= Scalar::new(-1, 1, 0, 0, 0);
            let w = g.add_vertex(VKind::Z, Phase::MINUS_HALF_PI);
            for &v in targets {
                g.add_to_phase(v, Phase::MINUS_T);
                g.add_edge(v, w, EKind::Simple);
            }
        }
        (DecompKind::Bss, 5) => {
            apply_phi(&mut g, targets);
        }
        (DecompKind::Bss, 6) => {
            let t = targets;
            apply_phi(&mut g, &[t[0], t[1], t[3], t[4], t[5], t[2]]);
        }
        (DecompKind::Pair, 0) => {
            // |00⟩ + i|11⟩: the two targets fuse with a π/2 twist that
            // cancels the two −π/4 shifts
            g.add_to_phase(targets[0], Phase::MINUS_T);
            g.add_to_phase(targets[1], Phase::T);
            g.add_edge(targets[0], targets[1], EKind::Simple);
        }
        (DecompKind::Pair, 1) => {
            // ω(|01⟩ + |10⟩)
            *g.scalar_mut() *= Scalar::from_phase(Phase::T);
            let w = g.add_vertex(VKind::Z, Phase::PI);
            for &v in &targets[..2] {
                g.add_to_phase(v, Phase::MINUS_T);
                g.add_edge(v, w, EKind::Hadamard);
            }
        }
        (DecompKind::Single, 0) => {
            // |0⟩/√2
            *g.scalar_mut() *= Scalar::one_over_sqrt2_pow(1);
            let w = g.add_vertex(VKind::Z, Phase::ZERO);
            g.add_to_phase(targets[0], Phase::MINUS_T);
            g.add_edge(targets[0], w, EKind::Hadamard);
        }
        (DecompKind::Single, 1) => {
            // ω|1⟩/√2
            let mut f = Scalar::one_over_sqrt2_pow(1);
            f.mul_phase(Phase::T);
            *g.scalar_mut() *= f;
            let w = g.add_vertex(VKind::Z, Phase::PI);
            g.add_to_phase(targets[0], Phase::MINUS_T);
            g.add_edge(targets[0], w, EKind::Hadamard);
        }
        _ => unreachable!("term index out of range"),
    }
    g
}

/// The graph-state term of the six-magic-state decomposition: a wheel of
/// five junction spiders with a pentagram of chords.
fn apply_phi(g: &mut ZXDiagram, t: &[V]) {
    *g.scalar_mut() *= Scalar::new(-3, 1, 0, 1, 0);
    let mut ws = [0 as V; 5];
    for i in 0..5 {
        let w = g.add_vertex(VKind::Z, Phase::ZERO);
        ws[i] = w;
        g.add_edge(t[i], w, EKind::Hadamard);
        g.add_edge(w, t[5], EKind::Hadamard);
        g.add_to_phase(t[i], Phase::MINUS_T);
    }
    g.add_to_phase(t[5], Phase::new(3));
    for (i, j) in [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)] {
        g.add_edge(ws[i], ws[j], EKind::Hadamard);
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
enum DecompKind {
    Bss,
    Pair,
    Single,
}

impl DecompKind {
    fn n_terms(self) -> usize {
        match self {
            DecompKind::Bss => 7,
            DecompKind::Pair => 2,
            DecompKind::Single => 2,
        }
    }

    fn n_targets(self) -> usize {
        match self {
            DecompKind::Bss => 6,
            DecompKind::Pair => 2,
            DecompKind::Single => 1,
        }
    }
}

fn check_leaves(d: &ZXDiagram, vs: &[V], want: usize) -> Result<(), DecompError> {
    if vs.len() != want {
        return Err(DecompError::Inconsistency(format!(
            "expected {} leaves, got {}",
            want,
            vs.len()
        )));
    }
    for &v in vs {
        if !d.contains(v) || !d.kind(v).is_spider() || d.phase(v) != Phase::T || d.degree(v) != 1 {
            return Err(DecompError::Inconsistency(format!(
                "vertex {} is not a degree-1 π/4 leaf",
                v
            )));
        }
    }
    Ok(())
}

/// Replace six π/4 leaves by the seven-term stabiliser decomposition.
/// The sum of the returned diagrams' values equals the input's exactly.
pub fn apply_bss(d: &ZXDiagram, leaves: &[V]) -> Result<Vec<ZXDiagram>, DecompError> {
    check_leaves(d, leaves, 6)?;
    Ok((0..7)
        .map(|k| apply_term(d, leaves, DecompKind::Bss, k))
        .collect())
}

/// Replace a pair of π/4 leaves by the rank-2 pairwise decomposition.
pub fn apply_pairwise(d: &ZXDiagram, leaves: &[V]) -> Result<Vec<ZXDiagram>, DecompError> {
    check_leaves(d, leaves, 2)?;
    Ok((0..2)
        .map(|k| apply_term(d, leaves, DecompKind::Pair, k))
        .collect())
}

/// Replace a single π/4 leaf by the two-term basis decomposition.
pub fn apply_single(d: &ZXDiagram, leaf: V) -> Result<Vec<ZXDiagram>, DecompError> {
    check_leaves(d, &[leaf], 1)?;
    Ok((0..2)
        .map(|k| apply_term(d, &[leaf], DecompKind::Single, k))
        .collect())
}

/// Deterministic target choice: the six odd-phase spiders of lowest id,
/// preferring spiders that are not gadget pendants.
pub fn select_targets(d: &ZXDiagram) -> Result<[V; 6], DecompError> {
    let picked = pick_targets(d, 6);
    picked.as_slice().try_into().map_err(|_| {
        DecompError::Inconsistency(format!(
            "select_targets needs 6 odd-phase spiders, found {}",
            picked.len()
        ))
    })
}

fn pick_targets(d: &ZXDiagram, max: usize) -> Vec<V> {
    let mut odd = d.odd_phase_vertices();
    odd.sort_by_key(|&v| (d.degree(v) == 1, v));
    odd.truncate(max);
    odd
}

// ----------------------------------------------------------------------
// the driver
// ----------------------------------------------------------------------

struct Shared {
    live: AtomicU64,
    max_live: AtomicU64,
    expired: AtomicBool,
    deadline: Option<Instant>,
}

impl Shared {
    fn acquire(&self, n: u64) {
        let live = self.live.fetch_add(n, Ordering::Relaxed) + n;
        self.max_live.fetch_max(live, Ordering::Relaxed);
    }

    fn release(&self, n: u64) {
        self.live.fetch_sub(n, Ordering::Relaxed);
    }

    fn check_deadline(&self) -> bool {
        if self.expired.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(dl) = self.deadline {
            if Instant::now() >= dl {
                self.expired.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }
}

#[derive(Default)]
struct BranchResult {
    scalar: Scalar,
    leaves: u64,
    hist: BTreeMap<u32, BTreeMap<u32, u64>>,
    expired: bool,
}

impl BranchResult {
    fn absorb(&mut self, other: BranchResult) {
        self.scalar += &other.scalar;
        self.leaves += other.leaves;
        self.expired |= other.expired;
        for (depth, row) in other.hist {
            let dst = self.hist.entry(depth).or_default();
            for (t, n) in row {
                *dst.entry(t).or_default() += n;
            }
        }
    }
}

/// Evaluate a closed diagram to an exact scalar by recursive stabiliser
/// decomposition with interleaved full simplification.
pub fn decompose(d: &ZXDiagram, cfg: &DecompCfg) -> Result<Decomposition, DecompError> {
    if !d.inputs().is_empty() || !d.outputs().is_empty() {
        return Err(DecompError::NotClosed);
    }
    let start = Instant::now();
    let pre_simp_t = d.odd_phase_spiders() as u32;
    let shared = Shared {
        live: AtomicU64::new(0),
        max_live: AtomicU64::new(0),
        expired: AtomicBool::new(false),
        deadline: cfg.deadline,
    };

    let mut root = d.clone();
    full_simp(&mut root);
    let initial_t = root.odd_phase_spiders() as u32;

    // breadth-first fan-out
    let mut acc = BranchResult::default();
    let mut frontier: Vec<(u32, ZXDiagram)> = Vec::new();
    let mut queue: std::collections::VecDeque<(u32, ZXDiagram)> = std::collections::VecDeque::new();
    shared.acquire(1);
    queue.push_back((0, root));
    while let Some((depth, g)) = queue.pop_front() {
        shared.release(1);
        if shared.check_deadline() {
            acc.expired = true;
            break;
        }
        let t = g.odd_phase_spiders() as u32;
        *acc.hist.entry(depth).or_default().entry(t).or_default() += 1;
        if g.scalar().is_zero() || t == 0 {
            leaf_check(&g, t)?;
            acc.scalar += g.scalar();
            acc.leaves += 1;
            continue;
        }
        if depth >= cfg.parallel_depth {
            shared.acquire(1);
            frontier.push((depth, g));
            continue;
        }
        let (kind, targets) = plan(&g, t);
        for k in 0..kind.n_terms() {
            let mut child = apply_term(&g, &targets, kind, k);
            full_simp(&mut child);
            shared.acquire(1);
            queue.push_back((depth + 1, child));
        }
    }

    // parallel (or sequential) depth-first phase over the frontier
    if !acc.expired {
        let results = run_frontier(frontier, &shared, cfg);
        for r in results {
            let r = r?;
            acc.absorb(r);
        }
    } else {
        shared.release(frontier.len() as u64);
    }

    let report = DecompositionReport {
        leaf_terms: acc.leaves,
        max_live_diagrams: shared.max_live.load(Ordering::Relaxed),
        initial_t,
        pre_simp_t,
        naive_terms: naive_terms(pre_simp_t as u64),
        wall_time_ms: start.elapsed().as_millis() as u64,
        depth_t_histogram: acc.hist,
    };
    Ok(Decomposition {
        scalar: acc.scalar,
        report,
        timed_out: acc.expired,
    })
}

fn leaf_check(g: &ZXDiagram, t: u32) -> Result<(), DecompError> {
    if t == 0 && !g.scalar().is_zero() && g.num_vertices() != 0 {
        return Err(DecompError::Inconsistency(format!(
            "Clifford branch left {} spiders after simplification",
            g.num_vertices()
        )));
    }
    Ok(())
}

fn plan(g: &ZXDiagram, t: u32) -> (DecompKind, Vec<V>) {
    let kind = if t >= 6 {
        DecompKind::Bss
    } else if t >= 2 {
        DecompKind::Pair
    } else {
        DecompKind::Single
    };
    (kind, pick_targets(g, kind.n_targets()))
}

fn run_frontier(
    frontier: Vec<(u32, ZXDiagram)>,
    shared: &Shared,
    cfg: &DecompCfg,
) -> Vec<Result<BranchResult, DecompError>> {
    #[cfg(feature = "parallel")]
    {
        if !cfg.sequential {
            use rayon::prelude::*;
            return frontier
                .into_par_iter()
                .map(|(depth, g)| {
                    let r = dfs(g, depth, shared);
                    shared.release(1);
                    r
                })
                .collect();
        }
    }
    let _ = cfg;
    frontier
        .into_iter()
        .map(|(depth, g)| {
            let r = dfs(g, depth, shared);
            shared.release(1);
            r
        })
        .collect()
}

fn dfs(g: ZXDiagram, depth: u32, shared: &Shared) -> Result<BranchResult, DecompError> {
    let mut out = BranchResult::default();
    if shared.check_deadline() {
        out.expired = true;
        return Ok(out);
    }
    let t = g.odd_phase_spiders() as u32;
    *out.hist.entry(depth).or_default().entry(t).or_default() += 1;
    if g.scalar().is_zero() || t == 0 {
        leaf_check(&g, t)?;
        out.scalar = g.scalar().clone();
        out.leaves = 1;
        return Ok(out);
    }
    let (kind, targets) = plan(&g, t);
    for k in 0..kind.n_terms() {
        let mut child = apply_term(&g, &targets, kind, k);
        full_simp(&mut child);
        shared.acquire(1);
        let r = dfs(child, depth + 1, shared);
        shared.release(1);
        let r = r?;
        let expired = r.expired;
        out.absorb(r);
        if expired {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CczMode, Circuit, Gate};
    use crate::tensor::tensor_c64;
    use num::Complex;

    fn close(a: Complex<f64>, b: Complex<f64>) -> bool {
        (a - b).norm() < 1e-9 * (1.0 + a.norm().max(b.norm()))
    }

    fn bare_t_leaves(n: usize) -> (ZXDiagram, Vec<V>) {
        // n one-legged π/4 spiders wired to outputs, scalar (1/√2)^n,
        // i.e. exactly |T⟩^{⊗n}
        let mut g = ZXDiagram::new();
        let mut outs = vec![];
        let mut leaves = vec![];
        for _ in 0..n {
            let v = g.add_vertex(VKind::Z, Phase::T);
            let b = g.add_vertex(VKind::BoundaryOut, Phase::ZERO);
            g.add_edge(v, b, EKind::Simple);
            leaves.push(v);
            outs.push(b);
        }
        g.set_outputs(outs);
        g.scalar_mut().mul_sqrt2_pow(-(n as i64));
        (g, leaves)
    }

    #[test]
    fn single_terms_sum_to_t_state() {
        let (g, leaves) = bare_t_leaves(1);
        let terms = apply_single(&g, leaves[0]).unwrap();
        assert_eq!(terms.len(), 2);
        let full = tensor_c64(&g).unwrap();
        let t0 = tensor_c64(&terms[0]).unwrap();
        let t1 = tensor_c64(&terms[1]).unwrap();
        for i in 0..2 {
            assert!(close(full[i], t0[i] + t1[i]), "entry {}", i);
        }
    }

    #[test]
    fn pair_terms_sum_to_tt_state() {
        let (g, leaves) = bare_t_leaves(2);
        let terms = apply_pairwise(&g, &leaves).unwrap();
        let full = tensor_c64(&g).unwrap();
        let mut sum = vec![Complex::new(0.0, 0.0); 4];
        for term in &terms {
            let t = tensor_c64(term).unwrap();
            for i in 0..4 {
                sum[i] += t[i];
            }
        }
        for i in 0..4 {
            assert!(close(full[i], sum[i]), "entry {}", i);
        }
    }

    #[test]
    fn unfuse_preserves_tensor() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0));
        c.push(Gate::T(0));
        c.push(Gate::CNOT(0, 1));
        c.push(Gate::ZPhase(1, Phase::new(3)));
        let mut g = c.to_zx(CczMode::SevenT);
        g.to_graph_like();
        let before = tensor_c64(&g).unwrap();
        let target = g
            .vertices()
            .find(|&v| g.kind(v).is_spider() && g.phase(v).is_odd())
            .unwrap();
        let leaf = unfuse_t(&mut g, target).unwrap();
        assert_eq!(g.phase(leaf), Phase::T);
        assert_eq!(g.degree(leaf), 1);
        let after = tensor_c64(&g).unwrap();
        for i in 0..before.len() {
            assert!(close(before[i], after[i]), "entry {}", i);
        }
    }

    #[test]
    fn select_targets_policy() {
        let mut g = ZXDiagram::new();
        // ids 0..7 odd spiders in a cycle; id 1 is a gadget pendant
        let vs: Vec<V> = (0..8).map(|_| g.add_vertex(VKind::Z, Phase::T)).collect();
        let ring: Vec<V> = vs.iter().copied().filter(|&v| v != vs[1]).collect();
        for i in 0..ring.len() {
            g.add_edge(ring[i], ring[(i + 1) % ring.len()], EKind::Hadamard);
        }
        let base = g.add_vertex(VKind::Z, Phase::ZERO);
        g.add_edge(base, vs[1], EKind::Hadamard);
        g.add_edge(base, vs[0], EKind::Hadamard);
        let ts = select_targets(&g).unwrap();
        // vs[1] has degree 1 (a pendant) so it is deprioritised
        assert_eq!(ts.to_vec(), vec![vs[0], vs[2], vs[3], vs[4], vs[5], vs[6]]);

        let (g, _) = bare_t_leaves(5);
        assert!(select_targets(&g).is_err());
    }
}
