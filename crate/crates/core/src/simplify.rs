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

//! The rewrite engine: local complementation, pivoting, gadget pivots
//! and phase-gadget fusion, driven to a fixpoint by [`full_simp`].
//!
//! All rules operate on graph-like diagrams and are scalar-exact: each
//! application multiplies the diagram scalar by the precise ring factor
//! for the rule, so the denoted value is preserved bit-for-bit. The
//! factors are certified wholesale against the tensor oracle in the
//! rewrite-soundness test suite rather than proved case by case.
//!
//! Matching is deterministic: every pass scans vertices (or vertex
//! pairs) in ascending id order, so identical input diagrams produce
//! identical outputs and identical traces.

use serde::Serialize;

use crate::graph::{EKind, VKind, ZXDiagram, V};
use crate::phase::Phase;
use crate::scalar::Scalar;

/// The rule inventory. `ParallelEdge` and `SelfLoop` normalisations fire
/// inside other rules' edge toggles (and inside `to_graph_like`), so
/// their scalar effects appear folded into the enclosing step's factor.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum RuleKind {
    Fuse,
    LocalComp,
    Pivot,
    PivotGadget,
    GadgetFuse,
    IdGadgetFuse,
    ParallelEdge,
    SelfLoop,
    IsolatedVertex,
    IsolatedPair,
    BaseFlip,
    GadgetDissolve,
}

/// One applied rewrite, for debug traces. Serialises to a JSON line.
#[derive(Clone, Debug, Serialize)]
pub struct RewriteStep {
    pub rule: RuleKind,
    pub vertices: Vec<V>,
    pub scalar_factor: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleNotApplicable {
    pub rule: RuleKind,
    pub reason: &'static str,
}

impl std::fmt::Display for RuleNotApplicable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} not applicable: {}", self.rule, self.reason)
    }
}

impl std::error::Error for RuleNotApplicable {}

type RuleResult = Result<RewriteStep, RuleNotApplicable>;

fn fail(rule: RuleKind, reason: &'static str) -> RuleResult {
    Err(RuleNotApplicable { rule, reason })
}

// ----------------------------------------------------------------------
// predicates
// ----------------------------------------------------------------------

/// Internal spider: a Z-spider whose neighbours are all Z-spiders
/// reached by single Hadamard edges (in particular, no boundaries).
fn is_internal(d: &ZXDiagram, v: V) -> bool {
    d.kind(v) == VKind::Z
        && d.neighbours(v)
            .all(|(w, c)| w != v && d.kind(w) == VKind::Z && c.simple == 0 && c.had == 1)
}

/// A spider that carries the pendant of a phase gadget (i.e. has a
/// degree-1 Z-spider neighbour). Such spiders are never pivot targets.
fn has_pendant(d: &ZXDiagram, v: V) -> bool {
    d.neighbours(v)
        .any(|(w, _)| w != v && d.kind(w) == VKind::Z && d.degree(w) == 1)
}

/// Identify a phase gadget: `base` must be an internal Z-spider with
/// exactly one degree-1 neighbour (the top) and at least one other
/// neighbour. Returns the top.
fn gadget_top(d: &ZXDiagram, base: V) -> Option<V> {
    if d.kind(base) != VKind::Z || !is_internal(d, base) {
        return None;
    }
    let mut top = None;
    let mut others = 0usize;
    for (w, _) in d.neighbours(base) {
        if d.kind(w) == VKind::Z && d.degree(w) == 1 {
            if top.is_some() {
                return None; // two pendants: not a gadget
            }
            top = Some(w);
        } else {
            others += 1;
        }
    }
    if others == 0 {
        return None; // a bare pair, handled by the isolated-pair rule
    }
    top
}

// ----------------------------------------------------------------------
// the rules
// ----------------------------------------------------------------------

/// Local complementation at an internal ±π/2 spider. Deletes the
/// spider, toggles all edges among its neighbours, subtracts its phase
/// from each neighbour, and multiplies the scalar by
/// √2^{(n−1)(n−2)/2}·ω^{±1}.
pub fn local_comp(d: &mut ZXDiagram, v: V) -> RuleResult {
    if !d.contains(v) || d.kind(v) != VKind::Z {
        return fail(RuleKind::LocalComp, "not a Z-spider");
    }
    if !d.phase(v).is_proper_clifford() {
        return fail(RuleKind::LocalComp, "phase is not ±π/2");
    }
    if !is_internal(d, v) {
        return fail(RuleKind::LocalComp, "spider is not internal");
    }
    let p = d.phase(v);
    let ns = d.neighbour_vec(v);
    let mut factor = Scalar::one();
    for i in 0..ns.len() {
        d.add_to_phase(ns[i], -p);
        for j in (i + 1)..ns.len() {
            factor *= d.add_edge_smart(ns[i], ns[j]);
        }
    }
    d.remove_vertex(v);
    let n = ns.len() as i64;
    let f = {
        let mut f = Scalar::sqrt2_pow((n - 1) * (n - 2) / 2);
        f.mul_phase(if p == Phase::HALF_PI {
            Phase::T
        } else {
            Phase::MINUS_T
        });
        f
    };
    *d.scalar_mut() *= &f;
    factor *= &f;
    Ok(RewriteStep {
        rule: RuleKind::LocalComp,
        vertices: vec![v],
        scalar_factor: factor,
    })
}

fn pivot_preconditions(d: &ZXDiagram, u: V, v: V) -> Result<(), RuleNotApplicable> {
    let r = RuleKind::Pivot;
    if u == v || !d.contains(u) || !d.contains(v) {
        return Err(RuleNotApplicable {
            rule: r,
            reason: "bad vertex pair",
        });
    }
    if d.edge_counts(u, v).had != 1 {
        return Err(RuleNotApplicable {
            rule: r,
            reason: "not Hadamard-connected",
        });
    }
    if !is_internal(d, u) || !is_internal(d, v) {
        return Err(RuleNotApplicable {
            rule: r,
            reason: "spiders must be internal",
        });
    }
    Ok(())
}

/// Pivot along a Hadamard edge between two internal 0/π spiders.
/// Deletes both, complements the three neighbour classes pairwise,
/// propagates the π phases, and multiplies the scalar by √2^E.
///
/// Gadget bases (spiders with a degree-1 neighbour) are never valid
/// targets; pivoting them would undo gadget-forming pivots and loop.
/// A Pauli pendant paired with its own neighbour is eliminated by the
/// dissolution rule in the fixpoint driver instead.
pub fn pivot(d: &mut ZXDiagram, u: V, v: V) -> RuleResult {
    pivot_preconditions(d, u, v)?;
    if !d.phase(u).is_pauli() || !d.phase(v).is_pauli() {
        return fail(RuleKind::Pivot, "phases must be 0 or π");
    }
    if has_pendant(d, u) || has_pendant(d, v) {
        return fail(RuleKind::Pivot, "gadget bases are not pivot targets");
    }
    let factor = pivot_unchecked(d, u, v);
    Ok(RewriteStep {
        rule: RuleKind::Pivot,
        vertices: vec![u, v],
        scalar_factor: factor,
    })
}

fn pivot_unchecked(d: &mut ZXDiagram, u: V, v: V) -> Scalar {
    let pu = d.phase(u);
    let pv = d.phase(v);
    let nu: Vec<V> = d.neighbour_vec(u).into_iter().filter(|&w| w != v).collect();
    let nv: Vec<V> = d.neighbour_vec(v).into_iter().filter(|&w| w != u).collect();

    let mut factor = Scalar::one();
    for &a in &nu {
        d.add_to_phase(a, pv);
    }
    for &b in &nv {
        d.add_to_phase(b, pu);
    }
    for &a in &nu {
        for &b in &nv {
            factor *= d.add_edge_smart(a, b);
        }
    }
    d.remove_vertex(u);
    d.remove_vertex(v);

    let e = (nu.len() as i64 - 1) * (nv.len() as i64 - 1);
    let mut f = Scalar::sqrt2_pow(e);
    if pu == Phase::PI && pv == Phase::PI {
        f.mul_phase(Phase::PI);
    }
    *d.scalar_mut() *= &f;
    factor *= &f;
    factor
}

/// Gadget-forming pivot: `u` is an internal 0/π spider, `v` an internal
/// spider with a non-Clifford phase. The phase of `v` is extracted onto
/// a fresh phase gadget, after which an ordinary pivot removes `u` and
/// `v`.
///
/// `u` must not carry a pendant: pairing a gadget base with its own top
/// here would recreate the gadget forever.
pub fn pivot_gadget(d: &mut ZXDiagram, u: V, v: V) -> RuleResult {
    pivot_preconditions(d, u, v).map_err(|e| RuleNotApplicable {
        rule: RuleKind::PivotGadget,
        reason: e.reason,
    })?;
    if !d.phase(u).is_pauli() {
        return fail(RuleKind::PivotGadget, "first spider must be 0 or π");
    }
    if !d.phase(v).is_odd() {
        return fail(RuleKind::PivotGadget, "second spider must be non-Clifford");
    }
    if has_pendant(d, u) {
        return fail(RuleKind::PivotGadget, "gadget bases are not pivot targets");
    }
    let pv = d.phase(v);
    let base = d.add_vertex(VKind::Z, Phase::ZERO);
    let top = d.add_vertex(VKind::Z, pv);
    d.add_edge(v, base, EKind::Hadamard);
    d.add_edge(base, top, EKind::Hadamard);
    d.set_phase(v, Phase::ZERO);
    let factor = pivot_unchecked(d, u, v);
    Ok(RewriteStep {
        rule: RuleKind::PivotGadget,
        vertices: vec![u, v],
        scalar_factor: factor,
    })
}

/// Fuse two phase gadgets whose bases have identical neighbourhoods.
/// The surviving top accumulates both phases; scalar gains √2^{2−deg}.
pub fn gadget_fuse(d: &mut ZXDiagram, b1: V, b2: V) -> RuleResult {
    let r = RuleKind::GadgetFuse;
    if b1 == b2 || !d.contains(b1) || !d.contains(b2) {
        return fail(r, "bad vertex pair");
    }
    let (Some(t1), Some(t2)) = (gadget_top(d, b1), gadget_top(d, b2)) else {
        return fail(r, "not a pair of phase gadgets");
    };
    if d.phase(b1) != Phase::ZERO || d.phase(b2) != Phase::ZERO {
        return fail(r, "gadget bases must have phase 0");
    }
    let n1: Vec<V> = d
        .neighbour_vec(b1)
        .into_iter()
        .filter(|&w| w != t1)
        .collect();
    let n2: Vec<V> = d
        .neighbour_vec(b2)
        .into_iter()
        .filter(|&w| w != t2)
        .collect();
    if n1 != n2 {
        return fail(r, "base neighbourhoods differ");
    }
    let p2 = d.phase(t2);
    d.add_to_phase(t1, p2);
    d.remove_vertex(b2);
    d.remove_vertex(t2);
    let f = Scalar::sqrt2_pow(2 - d.degree(b1) as i64);
    *d.scalar_mut() *= &f;
    Ok(RewriteStep {
        rule: r,
        vertices: vec![b1, b2],
        scalar_factor: f,
    })
}

/// Fuse a gadget whose base has a single non-top neighbour into that
/// neighbour. No scalar factor.
pub fn id_gadget_fuse(d: &mut ZXDiagram, base: V) -> RuleResult {
    let r = RuleKind::IdGadgetFuse;
    if !d.contains(base) {
        return fail(r, "no such vertex");
    }
    let Some(top) = gadget_top(d, base) else {
        return fail(r, "not a phase gadget");
    };
    if d.phase(base) != Phase::ZERO {
        return fail(r, "gadget base must have phase 0");
    }
    let others: Vec<V> = d
        .neighbour_vec(base)
        .into_iter()
        .filter(|&w| w != top)
        .collect();
    if others.len() != 1 {
        return fail(r, "base must have exactly one non-top neighbour");
    }
    let p = d.phase(top);
    d.add_to_phase(others[0], p);
    d.remove_vertex(base);
    d.remove_vertex(top);
    Ok(RewriteStep {
        rule: r,
        vertices: vec![base],
        scalar_factor: Scalar::one(),
    })
}

// ----------------------------------------------------------------------
// housekeeping rules used by the fixpoint driver
// ----------------------------------------------------------------------

/// Remove a degree-0 spider; its value 1 + e^{iθ} joins the scalar.
fn remove_isolated(d: &mut ZXDiagram, v: V) -> RewriteStep {
    let f = Scalar::one_plus_phase(d.phase(v));
    *d.scalar_mut() *= &f;
    d.remove_vertex(v);
    RewriteStep {
        rule: RuleKind::IsolatedVertex,
        vertices: vec![v],
        scalar_factor: f,
    }
}

/// Remove a pair of degree-1 spiders joined by a Hadamard edge; the
/// value (1 + ω^p + ω^q − ω^{p+q})/√2 joins the scalar.
fn remove_isolated_pair(d: &mut ZXDiagram, u: V, v: V) -> RewriteStep {
    let p = d.phase(u);
    let q = d.phase(v);
    let mut f = Scalar::one();
    f += Scalar::from_phase(p);
    f += Scalar::from_phase(q);
    f += Scalar::from_phase(p + q + Phase::PI);
    f.mul_sqrt2_pow(-1);
    *d.scalar_mut() *= &f;
    d.remove_vertex(u);
    d.remove_vertex(v);
    RewriteStep {
        rule: RuleKind::IsolatedPair,
        vertices: vec![u, v],
        scalar_factor: f,
    }
}

/// Remove an internal phase-0 degree-2 spider by fusing its two
/// neighbours (Hadamard edges compose to a plain wire).
fn remove_identity(d: &mut ZXDiagram, v: V, a: V, b: V) -> RewriteStep {
    d.remove_vertex(v);
    // merge b into a
    let mut factor = Scalar::one();
    let pb = d.phase(b);
    d.add_to_phase(a, pb);
    for (w, c) in d.neighbours(b).collect::<Vec<_>>() {
        if w == a {
            debug_assert_eq!(c.simple, 0);
            for _ in 0..c.had {
                factor *= d.add_edge_smart(a, a);
            }
        } else if d.kind(w).is_boundary() {
            d.add_edge(a, w, EKind::Simple);
        } else {
            for _ in 0..c.had {
                factor *= d.add_edge_smart(a, w);
            }
        }
    }
    d.remove_vertex(b);
    RewriteStep {
        rule: RuleKind::Fuse,
        vertices: vec![v, a, b],
        scalar_factor: factor,
    }
}

/// Push a π out of a gadget base: gadget(π base, top α) equals
/// e^{iα}·gadget(0 base, top −α).
fn flip_pi_base(d: &mut ZXDiagram, base: V, top: V) -> RewriteStep {
    let alpha = d.phase(top);
    d.set_phase(base, Phase::ZERO);
    d.set_phase(top, -alpha);
    let f = Scalar::from_phase(alpha);
    *d.scalar_mut() *= &f;
    RewriteStep {
        rule: RuleKind::BaseFlip,
        vertices: vec![base, top],
        scalar_factor: f,
    }
}

// ----------------------------------------------------------------------
// fixpoint driver
// ----------------------------------------------------------------------

#[derive(Clone, Debug, Default)]
pub struct SimpStats {
    pub iterations: u32,
    pub rewrites: u64,
}

struct Trace<'a>(Option<&'a mut Vec<RewriteStep>>);

impl Trace<'_> {
    fn push(&mut self, step: RewriteStep) {
        if let Some(t) = self.0.as_mut() {
            t.push(step);
        }
    }
}

/// Simplify to a fixpoint. For a closed diagram, every surviving spider
/// has a non-Clifford phase or belongs to a phase gadget whose top phase
/// is non-Clifford; a closed Clifford diagram reduces to its scalar.
pub fn full_simp(d: &mut ZXDiagram) -> SimpStats {
    run_simp(d, &mut Trace(None))
}

/// As [`full_simp`], returning the full rewrite trace.
pub fn full_simp_traced(d: &mut ZXDiagram) -> (SimpStats, Vec<RewriteStep>) {
    let mut steps = Vec::new();
    let stats = run_simp(d, &mut Trace(Some(&mut steps)));
    (stats, steps)
}

fn run_simp(d: &mut ZXDiagram, trace: &mut Trace) -> SimpStats {
    d.to_graph_like();
    let mut stats = SimpStats::default();
    loop {
        let before = (d.num_vertices(), count_internal_pauli(d));
        let mut changed = false;
        let mut only_flips = true;

        let passes: [fn(&mut ZXDiagram, &mut Trace, &mut u64) -> (bool, bool); 5] = [
            normalize_pass,
            lcomp_pass,
            pivot_pass,
            pivot_gadget_pass,
            gadget_pass,
        ];
        for pass in passes {
            let (fired, flips_only) = pass(d, trace, &mut stats.rewrites);
            changed |= fired;
            only_flips &= !fired || flips_only;
        }

        stats.iterations += 1;
        if !changed {
            break;
        }
        let after = (d.num_vertices(), count_internal_pauli(d));
        debug_assert!(
            after.0 < before.0 || (after.0 == before.0 && (after.1 < before.1 || only_flips)),
            "simplification made no progress: {:?} -> {:?}",
            before,
            after
        );
    }
    stats
}

fn count_internal_pauli(d: &ZXDiagram) -> usize {
    d.vertices()
        .filter(|&v| {
            d.kind(v) == VKind::Z
                && d.phase(v).is_pauli()
                && is_internal(d, v)
                && !has_pendant(d, v)
        })
        .count()
}

/// Isolated vertices and pairs, and identity (phase-0, degree-2)
/// spiders. Returns (fired, fired_only_flips).
fn normalize_pass(d: &mut ZXDiagram, trace: &mut Trace, rewrites: &mut u64) -> (bool, bool) {
    let mut fired = false;
    loop {
        let mut step_applied = false;
        for v in d.vertices().collect::<Vec<_>>() {
            if !d.contains(v) || !d.kind(v).is_spider() {
                continue;
            }
            let deg = d.degree(v);
            if deg == 0 {
                trace.push(remove_isolated(d, v));
                *rewrites += 1;
                step_applied = true;
                continue;
            }
            if deg == 1 && d.kind(v) == VKind::Z {
                let (w, c) = d.neighbours(v).next().unwrap();
                if w != v && d.kind(w) == VKind::Z && d.degree(w) == 1 && c.had == 1 {
                    trace.push(remove_isolated_pair(d, v, w));
                    *rewrites += 1;
                    step_applied = true;
                    continue;
                }
            }
            if deg == 2 && d.kind(v) == VKind::Z && d.phase(v) == Phase::ZERO && is_internal(d, v) {
                let ns = d.neighbour_vec(v);
                if ns.len() == 2 {
                    let (a, b) = (ns[0], ns[1]);
                    // merging two boundary-claimed spiders would put two
                    // boundaries on one spider; leave those alone
                    if !(d.boundary_adjacent(a) && d.boundary_adjacent(b)) {
                        trace.push(remove_identity(d, v, a, b));
                        *rewrites += 1;
                        step_applied = true;
                        continue;
                    }
                }
            }
        }
        fired |= step_applied;
        if !step_applied {
            break;
        }
    }
    (fired, false)
}

fn lcomp_pass(d: &mut ZXDiagram, trace: &mut Trace, rewrites: &mut u64) -> (bool, bool) {
    let mut fired = false;
    for v in d.vertices().collect::<Vec<_>>() {
        if !d.contains(v) {
            continue;
        }
        if let Ok(step) = local_comp(d, v) {
            trace.push(step);
            *rewrites += 1;
            fired = true;
        }
    }
    (fired, false)
}

fn pivot_pass(d: &mut ZXDiagram, trace: &mut Trace, rewrites: &mut u64) -> (bool, bool) {
    let mut fired = false;
    for u in d.vertices().collect::<Vec<_>>() {
        if !d.contains(u) {
            continue;
        }
        loop {
            let mut applied = false;
            for v in d.neighbour_vec(u) {
                if v > u && d.contains(u) && d.contains(v) {
                    if let Ok(step) = pivot(d, u, v) {
                        trace.push(step);
                        *rewrites += 1;
                        fired = true;
                        applied = true;
                        break;
                    }
                }
            }
            if !applied || !d.contains(u) {
                break;
            }
        }
    }
    (fired, false)
}

fn pivot_gadget_pass(d: &mut ZXDiagram, trace: &mut Trace, rewrites: &mut u64) -> (bool, bool) {
    let mut fired = false;
    for u in d.vertices().collect::<Vec<_>>() {
        if !d.contains(u) || !d.phase(u).is_pauli() {
            continue;
        }
        for v in d.neighbour_vec(u) {
            if !d.contains(u) {
                break;
            }
            if d.contains(v) && d.phase(v).is_odd() {
                if let Ok(step) = pivot_gadget(d, u, v) {
                    trace.push(step);
                    *rewrites += 1;
                    fired = true;
                }
            }
        }
    }
    (fired, false)
}

/// Gadget normalisation and fusion: dissolve Pauli pendants, flip π
/// bases, fuse gadgets with identical neighbourhoods, and fuse
/// single-leg gadgets into their neighbour.
fn gadget_pass(d: &mut ZXDiagram, trace: &mut Trace, rewrites: &mut u64) -> (bool, bool) {
    let mut fired = false;
    let mut non_flip = false;

    // A degree-1 Pauli spider hanging off an internal Pauli spider is
    // removed by pivoting the pair. Unlike general pivots on gadget
    // bases this only ever deletes vertices, so it cannot loop.
    for t in d.vertices().collect::<Vec<_>>() {
        if !d.contains(t) || d.kind(t) != VKind::Z || d.degree(t) != 1 || !d.phase(t).is_pauli() {
            continue;
        }
        let (u, c) = d.neighbours(t).next().unwrap();
        if c.had == 1 && is_internal(d, u) && d.phase(u).is_pauli() {
            let factor = pivot_unchecked(d, t, u);
            trace.push(RewriteStep {
                rule: RuleKind::GadgetDissolve,
                vertices: vec![t, u],
                scalar_factor: factor,
            });
            *rewrites += 1;
            fired = true;
            non_flip = true;
        }
    }

    // normalise π bases and fuse single-leg gadgets
    for base in d.vertices().collect::<Vec<_>>() {
        if !d.contains(base) {
            continue;
        }
        let Some(top) = gadget_top(d, base) else {
            continue;
        };
        if d.phase(base) == Phase::PI {
            trace.push(flip_pi_base(d, base, top));
            *rewrites += 1;
            fired = true;
        }
        if d.phase(base) != Phase::ZERO {
            continue; // ±π/2 bases are local-complementation targets
        }
        if id_gadget_fuse(d, base).map(|s| trace.push(s)).is_ok() {
            *rewrites += 1;
            fired = true;
            non_flip = true;
        }
    }

    // fuse gadgets with equal neighbourhoods, grouped deterministically
    let mut groups: std::collections::BTreeMap<Vec<V>, Vec<V>> = std::collections::BTreeMap::new();
    for base in d.vertices().collect::<Vec<_>>() {
        if !d.contains(base) || d.phase(base) != Phase::ZERO {
            continue;
        }
        let Some(top) = gadget_top(d, base) else {
            continue;
        };
        let nbhd: Vec<V> = d
            .neighbour_vec(base)
            .into_iter()
            .filter(|&w| w != top)
            .collect();
        groups.entry(nbhd).or_default().push(base);
    }
    for (_, bases) in groups {
        if bases.len() < 2 {
            continue;
        }
        let first = bases[0];
        for &other in &bases[1..] {
            if let Ok(step) = gadget_fuse(d, first, other) {
                trace.push(step);
                *rewrites += 1;
                fired = true;
                non_flip = true;
            }
        }
    }

    (fired, fired && !non_flip)
}
