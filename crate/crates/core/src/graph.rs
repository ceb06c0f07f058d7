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

//! The ZX-diagram data structure: an undirected multigraph of phased
//! spiders with typed edges, ordered boundary lists and an exact global
//! scalar.
//!
//! Vertex ids are stable for the lifetime of a diagram and never reused,
//! so rewrite traces are reproducible. Edges are stored as an adjacency
//! map with per-pair multiplicities; multiplicities only collapse inside
//! [`ZXDiagram::to_graph_like`] and the rewrite rules, never on insertion.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::phase::Phase;
use crate::scalar::Scalar;

pub type V = u32;

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum VKind {
    BoundaryIn,
    BoundaryOut,
    Z,
    X,
    /// A 2-ary Hadamard box. Exists only transiently before graph-like
    /// normalisation; afterwards Hadamards live on edges.
    HBox,
}

impl VKind {
    pub fn is_boundary(self) -> bool {
        matches!(self, VKind::BoundaryIn | VKind::BoundaryOut)
    }

    pub fn is_spider(self) -> bool {
        matches!(self, VKind::Z | VKind::X)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum EKind {
    Simple,
    Hadamard,
}

/// Edge multiplicities between one (unordered) pair of vertices. A
/// self-loop pair (v, v) is stored once.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub struct EdgeCounts {
    pub simple: u32,
    pub had: u32,
}

impl EdgeCounts {
    pub fn total(&self) -> u32 {
        self.simple + self.had
    }

    fn slot(&mut self, kind: EKind) -> &mut u32 {
        match kind {
            EKind::Simple => &mut self.simple,
            EKind::Hadamard => &mut self.had,
        }
    }
}

#[derive(Copy, Clone, Debug)]
struct VertexData {
    kind: VKind,
    phase: Phase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    UnknownVertex(V),
    NotABoundary(V),
    HasInputs,
    BadWidth { expected: usize, got: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::UnknownVertex(v) => write!(f, "unknown vertex id {}", v),
            GraphError::NotABoundary(v) => write!(f, "vertex {} is not an open boundary", v),
            GraphError::HasInputs => write!(f, "operation requires a diagram with no open inputs"),
            GraphError::BadWidth { expected, got } => {
                write!(f, "expected {} entries, got {}", expected, got)
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// Basis states/effects that can be plugged onto open boundaries.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PlugValue {
    Zero,
    One,
    Plus,
}

#[derive(Clone)]
pub struct ZXDiagram {
    verts: Vec<Option<VertexData>>,
    adj: Vec<BTreeMap<V, EdgeCounts>>,
    inputs: Vec<V>,
    outputs: Vec<V>,
    scalar: Scalar,
    n_verts: usize,
}

impl Default for ZXDiagram {
    fn default() -> Self {
        ZXDiagram::new()
    }
}

impl ZXDiagram {
    pub fn new() -> ZXDiagram {
        ZXDiagram {
            verts: Vec::new(),
            adj: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            scalar: Scalar::one(),
            n_verts: 0,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n_verts
    }

    pub fn num_edges(&self) -> usize {
        let mut n = 0;
        for v in self.vertices() {
            for (&w, c) in &self.adj[v as usize] {
                if w >= v {
                    n += c.total() as usize;
                }
            }
        }
        n
    }

    pub fn scalar(&self) -> &Scalar {
        &self.scalar
    }

    pub fn scalar_mut(&mut self) -> &mut Scalar {
        &mut self.scalar
    }

    pub fn inputs(&self) -> &[V] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[V] {
        &self.outputs
    }

    pub fn set_inputs(&mut self, vs: Vec<V>) {
        self.inputs = vs;
    }

    pub fn set_outputs(&mut self, vs: Vec<V>) {
        self.outputs = vs;
    }

    pub fn contains(&self, v: V) -> bool {
        (v as usize) < self.verts.len() && self.verts[v as usize].is_some()
    }

    pub fn kind(&self, v: V) -> VKind {
        self.verts[v as usize].expect("vertex was removed").kind
    }

    pub fn set_kind(&mut self, v: V, kind: VKind) {
        self.verts[v as usize]
            .as_mut()
            .expect("vertex was removed")
            .kind = kind;
    }

    pub fn phase(&self, v: V) -> Phase {
        self.verts[v as usize].expect("vertex was removed").phase
    }

    pub fn set_phase(&mut self, v: V, p: Phase) {
        self.verts[v as usize]
            .as_mut()
            .expect("vertex was removed")
            .phase = p;
    }

    pub fn add_to_phase(&mut self, v: V, p: Phase) {
        let data = self.verts[v as usize].as_mut().expect("vertex was removed");
        data.phase += p;
    }

    /// Iterate live vertex ids in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = V> + '_ {
        self.verts
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.as_ref().map(|_| i as V))
    }

    /// Neighbours of `v` in ascending id order, with edge multiplicities.
    /// A self-loop appears as the pair `(v, counts)`.
    pub fn neighbours(&self, v: V) -> impl Iterator<Item = (V, EdgeCounts)> + '_ {
        self.adj[v as usize].iter().map(|(&w, &c)| (w, c))
    }

    pub fn neighbour_vec(&self, v: V) -> Vec<V> {
        self.adj[v as usize]
            .keys()
            .copied()
            .filter(|&w| w != v)
            .collect()
    }

    pub fn edge_counts(&self, u: V, v: V) -> EdgeCounts {
        self.adj[u as usize].get(&v).copied().unwrap_or_default()
    }

    pub fn connected(&self, u: V, v: V) -> bool {
        self.edge_counts(u, v).total() > 0
    }

    /// Degree counting multiplicities; a self-loop contributes 2.
    pub fn degree(&self, v: V) -> usize {
        self.adj[v as usize]
            .iter()
            .map(|(&w, c)| {
                if w == v {
                    2 * c.total() as usize
                } else {
                    c.total() as usize
                }
            })
            .sum()
    }

    /// All edges as (u, v, kind, multiplicity) with u ≤ v, ascending.
    pub fn edges(&self) -> Vec<(V, V, EKind, u32)> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for (&w, c) in &self.adj[v as usize] {
                if w >= v {
                    if c.simple > 0 {
                        out.push((v, w, EKind::Simple, c.simple));
                    }
                    if c.had > 0 {
                        out.push((v, w, EKind::Hadamard, c.had));
                    }
                }
            }
        }
        out
    }

    pub fn add_vertex(&mut self, kind: VKind, phase: Phase) -> V {
        let id = self.verts.len() as V;
        self.verts.push(Some(VertexData { kind, phase }));
        self.adj.push(BTreeMap::new());
        self.n_verts += 1;
        id
    }

    /// Insert a new spider wired to existing vertices. The edge multiset is
    /// updated verbatim; no rewriting happens on insertion, so adding two
    /// edges to the same neighbour records two parallel edges.
    pub fn add_spider(
        &mut self,
        kind: VKind,
        phase: Phase,
        neighbours: &[(V, EKind)],
    ) -> Result<V, GraphError> {
        for &(w, _) in neighbours {
            if !self.contains(w) {
                return Err(GraphError::UnknownVertex(w));
            }
        }
        let v = self.add_vertex(kind, phase);
        for &(w, kind) in neighbours {
            self.add_edge(v, w, kind);
        }
        Ok(v)
    }

    pub fn add_edge(&mut self, u: V, v: V, kind: EKind) {
        debug_assert!(self.contains(u) && self.contains(v));
        *self.adj[u as usize].entry(v).or_default().slot(kind) += 1;
        if u != v {
            *self.adj[v as usize].entry(u).or_default().slot(kind) += 1;
        }
    }

    /// Remove one edge of the given kind. Returns false if absent.
    pub fn remove_edge(&mut self, u: V, v: V, kind: EKind) -> bool {
        let Some(c) = self.adj[u as usize].get_mut(&v) else {
            return false;
        };
        if *c.slot(kind) == 0 {
            return false;
        }
        *c.slot(kind) -= 1;
        let empty = c.total() == 0;
        if empty {
            self.adj[u as usize].remove(&v);
        }
        if u != v {
            let c = self.adj[v as usize].get_mut(&u).unwrap();
            *c.slot(kind) -= 1;
            if empty {
                self.adj[v as usize].remove(&u);
            }
        }
        true
    }

    /// Remove a vertex together with all incident edges. Ids are never
    /// reused. Boundary list entries pointing at it are dropped.
    pub fn remove_vertex(&mut self, v: V) {
        let nbrs: Vec<V> = self.adj[v as usize].keys().copied().collect();
        for w in nbrs {
            if w != v {
                self.adj[w as usize].remove(&v);
            }
        }
        self.adj[v as usize].clear();
        self.verts[v as usize] = None;
        self.n_verts -= 1;
        self.inputs.retain(|&b| b != v);
        self.outputs.retain(|&b| b != v);
    }

    /// Toggle-style Hadamard edge insertion for graph-like diagrams.
    ///
    /// Adding a Hadamard edge where one already exists removes the pair
    /// (two parallel H-edges cancel at the cost of 1/2); adding a self-loop
    /// resolves immediately to a π phase and a factor 1/√2. Returns the
    /// scalar factor that was applied.
    pub fn add_edge_smart(&mut self, u: V, v: V) -> Scalar {
        debug_assert!(self.kind(u) == VKind::Z && self.kind(v) == VKind::Z);
        if u == v {
            self.add_to_phase(u, Phase::PI);
            let f = Scalar::one_over_sqrt2_pow(1);
            self.scalar *= &f;
            return f;
        }
        if self.edge_counts(u, v).had > 0 {
            self.remove_edge(u, v, EKind::Hadamard);
            let f = Scalar::new(1, 1, 0, 0, 0);
            self.scalar *= &f;
            f
        } else {
            self.add_edge(u, v, EKind::Hadamard);
            Scalar::one()
        }
    }

    /// Count of spiders carrying a non-Clifford (odd π/4) phase.
    pub fn odd_phase_spiders(&self) -> usize {
        self.vertices()
            .filter(|&v| self.kind(v).is_spider() && self.phase(v).is_odd())
            .count()
    }

    /// Lowest-id spiders with odd phase, up to `max`.
    pub fn odd_phase_vertices(&self) -> Vec<V> {
        self.vertices()
            .filter(|&v| self.kind(v).is_spider() && self.phase(v).is_odd())
            .collect()
    }

    /// True if `v` has a boundary vertex among its neighbours.
    pub fn boundary_adjacent(&self, v: V) -> bool {
        self.adj[v as usize]
            .keys()
            .any(|&w| self.kind(w).is_boundary())
    }

    // ------------------------------------------------------------------
    // plugging, adjoints, doubling
    // ------------------------------------------------------------------

    /// Replace open boundaries by basis states/effects.
    ///
    /// |0⟩ becomes an X-spider with phase 0 and a factor 1/√2, |1⟩ an
    /// X-spider with phase π and 1/√2, |+⟩ a Z-spider with phase 0 and
    /// 1/√2. Effects use the same spiders. Plugged boundaries are removed
    /// from the input/output lists.
    pub fn plug(&mut self, assignments: &BTreeMap<V, PlugValue>) -> Result<(), GraphError> {
        for (&b, _) in assignments {
            if !self.contains(b) {
                return Err(GraphError::UnknownVertex(b));
            }
            if !self.kind(b).is_boundary() {
                return Err(GraphError::NotABoundary(b));
            }
        }
        for (&b, &val) in assignments {
            let (kind, phase) = match val {
                PlugValue::Zero => (VKind::X, Phase::ZERO),
                PlugValue::One => (VKind::X, Phase::PI),
                PlugValue::Plus => (VKind::Z, Phase::ZERO),
            };
            self.set_kind(b, kind);
            self.set_phase(b, phase);
            self.scalar.mul_sqrt2_pow(-1);
            self.inputs.retain(|&x| x != b);
            self.outputs.retain(|&x| x != b);
        }
        Ok(())
    }

    /// Plug all inputs with computational basis states given as bits.
    pub fn plug_inputs(&mut self, bits: &[bool]) -> Result<(), GraphError> {
        if bits.len() != self.inputs.len() {
            return Err(GraphError::BadWidth {
                expected: self.inputs.len(),
                got: bits.len(),
            });
        }
        let m: BTreeMap<V, PlugValue> = self
            .inputs
            .clone()
            .into_iter()
            .zip(
                bits.iter()
                    .map(|&b| if b { PlugValue::One } else { PlugValue::Zero }),
            )
            .collect();
        self.plug(&m)
    }

    /// Plug all outputs with computational basis effects given as bits.
    pub fn plug_outputs(&mut self, bits: &[bool]) -> Result<(), GraphError> {
        if bits.len() != self.outputs.len() {
            return Err(GraphError::BadWidth {
                expected: self.outputs.len(),
                got: bits.len(),
            });
        }
        let m: BTreeMap<V, PlugValue> = self
            .outputs
            .clone()
            .into_iter()
            .zip(
                bits.iter()
                    .map(|&b| if b { PlugValue::One } else { PlugValue::Zero }),
            )
            .collect();
        self.plug(&m)
    }

    /// The adjoint diagram: mirror inputs/outputs, negate all phases,
    /// conjugate the scalar.
    pub fn adjoint(&self) -> ZXDiagram {
        let mut g = self.clone();
        for v in g.vertices().collect::<Vec<_>>() {
            let data = g.verts[v as usize].as_mut().unwrap();
            data.phase = -data.phase;
            data.kind = match data.kind {
                VKind::BoundaryIn => VKind::BoundaryOut,
                VKind::BoundaryOut => VKind::BoundaryIn,
                k => k,
            };
        }
        std::mem::swap(&mut g.inputs, &mut g.outputs);
        g.scalar = self.scalar.conj();
        g
    }

    /// Compose the diagram with its adjoint to form the closed diagram of
    /// ⟨0…0|U†(P ⊗ I)U|0…0⟩, where P fixes the outputs listed in `fixed`
    /// (by output position) and the remaining outputs are traced through.
    ///
    /// The diagram must have no open inputs (plug them first).
    pub fn double(&self, fixed: &BTreeMap<usize, bool>) -> Result<ZXDiagram, GraphError> {
        if !self.inputs.is_empty() {
            return Err(GraphError::HasInputs);
        }
        for (&i, _) in fixed {
            if i >= self.outputs.len() {
                return Err(GraphError::BadWidth {
                    expected: self.outputs.len(),
                    got: i + 1,
                });
            }
        }
        let mut g = self.clone();
        let offset = g.verts.len() as V;

        // twin copy with negated phases (the adjoint side)
        for i in 0..offset {
            match self.verts[i as usize] {
                Some(data) => {
                    let kind = match data.kind {
                        VKind::BoundaryOut => VKind::BoundaryIn,
                        VKind::BoundaryIn => VKind::BoundaryOut,
                        k => k,
                    };
                    g.add_vertex(kind, -data.phase);
                }
                None => {
                    g.verts.push(None);
                    g.adj.push(BTreeMap::new());
                }
            }
        }
        for (u, v, kind, mult) in self.edges() {
            for _ in 0..mult {
                g.add_edge(u + offset, v + offset, kind);
            }
        }
        g.scalar = self.scalar() * &self.scalar().conj();

        let mut plugs: BTreeMap<V, PlugValue> = BTreeMap::new();
        for (i, &o) in self.outputs.iter().enumerate() {
            let o2 = o + offset;
            match fixed.get(&i) {
                Some(&bit) => {
                    let val = if bit { PlugValue::One } else { PlugValue::Zero };
                    plugs.insert(o, val);
                    plugs.insert(o2, val);
                }
                None => {
                    // trace the output through between the two copies
                    let (s1, k1) = g.boundary_attachment(o);
                    let (s2, k2) = g.boundary_attachment(o2);
                    g.remove_vertex(o);
                    g.remove_vertex(o2);
                    let kind = if k1 == k2 {
                        EKind::Simple
                    } else {
                        EKind::Hadamard
                    };
                    g.add_edge(s1, s2, kind);
                }
            }
        }
        g.inputs.clear();
        g.outputs.clear();
        g.plug(&plugs)?;
        Ok(g)
    }

    /// The unique neighbour of a degree-1 boundary vertex along with the
    /// kind of the connecting edge.
    fn boundary_attachment(&self, b: V) -> (V, EKind) {
        debug_assert!(self.kind(b).is_boundary());
        debug_assert_eq!(self.degree(b), 1);
        let (&w, c) = self.adj[b as usize]
            .iter()
            .next()
            .expect("dangling boundary");
        let kind = if c.had > 0 {
            EKind::Hadamard
        } else {
            EKind::Simple
        };
        (w, kind)
    }

    // ------------------------------------------------------------------
    // graph-like normalisation
    // ------------------------------------------------------------------

    /// Bring the diagram to graph-like form: only Z-spiders, connected by
    /// Hadamard edges, no parallel edges or self-loops, every boundary on
    /// a Simple edge to its own Z-spider. Value-preserving; all scalar
    /// effects are absorbed into the global scalar.
    pub fn to_graph_like(&mut self) {
        self.eliminate_hboxes();
        self.colour_change();
        self.fuse_simple_edges();
        self.resolve_loops_and_parallels();
        self.normalise_boundaries();
        debug_assert!(self.is_graph_like());
    }

    fn eliminate_hboxes(&mut self) {
        let hboxes: Vec<V> = self
            .vertices()
            .filter(|&v| self.kind(v) == VKind::HBox)
            .collect();
        for h in hboxes {
            let loops = self.adj[h as usize].get(&h).copied().unwrap_or_default();
            if loops.total() > 0 {
                // a single self-loop occupies both legs: Tr(H) = 0 on a
                // simple loop, Tr(H·H) = 2 on a Hadamard loop
                assert!(
                    loops.total() == 1 && self.degree(h) == 2,
                    "H-boxes must be 2-ary"
                );
                if loops.had == 1 {
                    *self.scalar_mut() *= Scalar::new(-1, 1, 0, 0, 0);
                } else {
                    *self.scalar_mut() = Scalar::zero();
                }
                self.remove_vertex(h);
                continue;
            }
            let mut ends: Vec<(V, EKind)> = Vec::new();
            for (&w, c) in &self.adj[h as usize] {
                for _ in 0..c.simple {
                    ends.push((w, EKind::Simple));
                }
                for _ in 0..c.had {
                    ends.push((w, EKind::Hadamard));
                }
            }
            assert!(
                ends.len() == 2,
                "H-boxes must be 2-ary (found one with {} legs)",
                ends.len()
            );
            let (p, k1) = ends[0];
            let (q, k2) = ends[1];
            let parity = 1 + (k1 == EKind::Hadamard) as u32 + (k2 == EKind::Hadamard) as u32;
            let kind = if parity % 2 == 1 {
                EKind::Hadamard
            } else {
                EKind::Simple
            };
            self.remove_vertex(h);
            self.add_edge(p, q, kind);
        }
    }

    fn colour_change(&mut self) {
        let xs: Vec<V> = self
            .vertices()
            .filter(|&v| self.kind(v) == VKind::X)
            .collect();
        for v in xs {
            self.set_kind(v, VKind::Z);
            let nbrs: Vec<V> = self.adj[v as usize].keys().copied().collect();
            for w in nbrs {
                if w == v {
                    continue; // a self-loop is conjugated on both ends: unchanged
                }
                let c = self.edge_counts(v, w);
                let swapped = EdgeCounts {
                    simple: c.had,
                    had: c.simple,
                };
                self.adj[v as usize].insert(w, swapped);
                self.adj[w as usize].insert(v, swapped);
            }
        }
    }

    fn fuse_simple_edges(&mut self) {
        loop {
            let mut target = None;
            'outer: for v in self.vertices() {
                if self.kind(v) != VKind::Z {
                    continue;
                }
                for (&w, c) in &self.adj[v as usize] {
                    if w > v && c.simple > 0 && self.kind(w) == VKind::Z {
                        target = Some((v, w));
                        break 'outer;
                    }
                }
            }
            let Some((u, v)) = target else { break };
            // merge v into u along one simple edge; remaining u–v edges
            // become self-loops on u, everything else moves verbatim
            self.remove_edge(u, v, EKind::Simple);
            let p = self.phase(v);
            self.add_to_phase(u, p);
            let moves: Vec<(V, EdgeCounts)> =
                self.adj[v as usize].iter().map(|(&w, &c)| (w, c)).collect();
            for (w, c) in moves {
                let dest = if w == v { u } else { w };
                for _ in 0..c.simple {
                    self.add_edge(u, dest, EKind::Simple);
                }
                for _ in 0..c.had {
                    self.add_edge(u, dest, EKind::Hadamard);
                }
                if w != v {
                    self.adj[w as usize].remove(&v);
                }
            }
            self.adj[v as usize].clear();
            self.verts[v as usize] = None;
            self.n_verts -= 1;
            self.inputs.retain(|&b| b != v);
            self.outputs.retain(|&b| b != v);
        }
    }

    fn resolve_loops_and_parallels(&mut self) {
        let vs: Vec<V> = self.vertices().collect();
        for v in vs {
            if self.kind(v) != VKind::Z {
                continue;
            }
            // self-loops: simple loops vanish, each Hadamard loop adds π
            // and a factor 1/√2
            if let Some(c) = self.adj[v as usize].get(&v).copied() {
                for _ in 0..c.had {
                    self.add_to_phase(v, Phase::PI);
                    self.scalar.mul_sqrt2_pow(-1);
                }
                self.adj[v as usize].remove(&v);
            }
            // parallel Hadamard edges cancel in pairs at 1/2 each
            let nbrs: Vec<V> = self.adj[v as usize].keys().copied().collect();
            for w in nbrs {
                if w <= v || !self.kind(w).is_spider() {
                    continue;
                }
                let c = self.edge_counts(v, w);
                debug_assert_eq!(c.simple, 0, "simple spider-spider edges must be fused");
                if c.had >= 2 {
                    let pairs = c.had / 2;
                    let rest = c.had % 2;
                    let new = EdgeCounts {
                        simple: 0,
                        had: rest,
                    };
                    if rest == 0 {
                        self.adj[v as usize].remove(&w);
                        self.adj[w as usize].remove(&v);
                    } else {
                        self.adj[v as usize].insert(w, new);
                        self.adj[w as usize].insert(v, new);
                    }
                    self.scalar *= Scalar::new(pairs as i64, 1, 0, 0, 0);
                }
            }
        }
    }

    fn normalise_boundaries(&mut self) {
        let boundaries: Vec<V> = self
            .vertices()
            .filter(|&v| self.kind(v).is_boundary())
            .collect();
        let mut claimed: std::collections::BTreeSet<V> = std::collections::BTreeSet::new();
        let mut done: std::collections::BTreeSet<V> = std::collections::BTreeSet::new();
        for b in boundaries {
            if done.contains(&b) {
                continue;
            }
            let (s, kind) = self.boundary_attachment(b);
            if self.kind(s).is_boundary() {
                // bare wire between two boundaries: splice in an identity
                // chain of Z(0) spiders joined by Hadamard edges
                self.remove_edge(b, s, kind);
                let z1 = self.add_vertex(VKind::Z, Phase::ZERO);
                let z2 = self.add_vertex(VKind::Z, Phase::ZERO);
                self.add_edge(b, z1, EKind::Simple);
                self.add_edge(z1, z2, EKind::Hadamard);
                let last = match kind {
                    EKind::Hadamard => z2,
                    EKind::Simple => {
                        let z3 = self.add_vertex(VKind::Z, Phase::ZERO);
                        self.add_edge(z2, z3, EKind::Hadamard);
                        z3
                    }
                };
                self.add_edge(last, s, EKind::Simple);
                claimed.insert(z1);
                claimed.insert(last);
                done.insert(s);
                continue;
            }
            let need_unfuse = claimed.contains(&s);
            match (kind, need_unfuse) {
                (EKind::Simple, false) => {
                    claimed.insert(s);
                }
                (EKind::Hadamard, false) => {
                    self.remove_edge(b, s, EKind::Hadamard);
                    let z = self.add_vertex(VKind::Z, Phase::ZERO);
                    self.add_edge(b, z, EKind::Simple);
                    self.add_edge(z, s, EKind::Hadamard);
                    claimed.insert(z);
                }
                (k, true) => {
                    self.remove_edge(b, s, k);
                    let z1 = self.add_vertex(VKind::Z, Phase::ZERO);
                    self.add_edge(b, z1, EKind::Simple);
                    match k {
                        EKind::Simple => {
                            let z2 = self.add_vertex(VKind::Z, Phase::ZERO);
                            self.add_edge(z1, z2, EKind::Hadamard);
                            self.add_edge(z2, s, EKind::Hadamard);
                        }
                        EKind::Hadamard => {
                            self.add_edge(z1, s, EKind::Hadamard);
                        }
                    }
                    claimed.insert(z1);
                }
            }
        }
    }

    /// Check the four graph-like conditions.
    pub fn is_graph_like(&self) -> bool {
        let mut claimed: BTreeMap<V, u32> = BTreeMap::new();
        for v in self.vertices() {
            match self.kind(v) {
                VKind::X | VKind::HBox => return false,
                VKind::Z => {
                    for (w, c) in self.neighbours(v) {
                        if w == v {
                            return false; // self-loop
                        }
                        match self.kind(w) {
                            VKind::Z => {
                                if c.simple > 0 || c.had > 1 {
                                    return false;
                                }
                            }
                            VKind::BoundaryIn | VKind::BoundaryOut => {
                                if c.had > 0 || c.simple != 1 {
                                    return false;
                                }
                                *claimed.entry(v).or_default() += 1;
                            }
                            _ => return false,
                        }
                    }
                }
                _ => {
                    if self.degree(v) != 1 {
                        return false;
                    }
                    let (w, kind) = self.boundary_attachment(v);
                    if self.kind(w) != VKind::Z || kind != EKind::Simple {
                        return false;
                    }
                }
            }
        }
        claimed.values().all(|&n| n <= 1)
    }
}

// ----------------------------------------------------------------------
// JSON serialisation (regression fixtures and debugging)
// ----------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    vertices: Vec<(V, VKind, u8)>,
    edges: Vec<(V, V, EKind, u32)>,
    inputs: Vec<V>,
    outputs: Vec<V>,
    scalar: Scalar,
}

impl Serialize for ZXDiagram {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = DiagramRepr {
            vertices: self
                .vertices()
                .map(|v| (v, self.kind(v), self.phase(v).m()))
                .collect(),
            edges: self.edges(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            scalar: self.scalar.clone(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ZXDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<ZXDiagram, D::Error> {
        let repr = DiagramRepr::deserialize(deserializer)?;
        let mut g = ZXDiagram::new();
        let max_id = repr
            .vertices
            .iter()
            .map(|&(v, _, _)| v)
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        g.verts = vec![None; max_id as usize];
        g.adj = vec![BTreeMap::new(); max_id as usize];
        for (v, kind, m) in repr.vertices {
            g.verts[v as usize] = Some(VertexData {
                kind,
                phase: Phase::new(m as i64),
            });
            g.n_verts += 1;
        }
        for (u, v, kind, mult) in repr.edges {
            for _ in 0..mult {
                g.add_edge(u, v, kind);
            }
        }
        g.inputs = repr.inputs;
        g.outputs = repr.outputs;
        g.scalar = repr.scalar;
        Ok(g)
    }
}

impl fmt::Debug for ZXDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZXDiagram (scalar {}):", self.scalar)?;
        for v in self.vertices() {
            writeln!(
                f,
                "  {} {:?} {:?} -> {:?}",
                v,
                self.kind(v),
                self.phase(v),
                self.adj[v as usize]
            )?;
        }
        writeln!(f, "  inputs {:?} outputs {:?}", self.inputs, self.outputs)
    }
}
