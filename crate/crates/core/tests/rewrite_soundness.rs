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

//! Rewrite soundness: every rule must preserve the tensor oracle value
//! on randomly generated small diagrams, and the fixpoint driver must be
//! deterministic, terminating and non-Clifford-monotone.

mod common;

use common::*;
use rand::Rng;
use zxstab::graph::{VKind, ZXDiagram, V};
use zxstab::phase::Phase;
use zxstab::simplify::{
    full_simp, full_simp_traced, gadget_fuse, id_gadget_fuse, local_comp, pivot, pivot_gadget,
};
use zxstab::tensor::tensor_c64;

const TOL: f64 = 1e-9;

fn check_preserves(before: &ZXDiagram, after: &ZXDiagram, ctx: &str) {
    let tb = tensor_c64(before).unwrap();
    let ta = tensor_c64(after).unwrap();
    assert_tensors_close(&tb, &ta, TOL, ctx);
}

/// Local complementation: ≥2000 applications on random diagrams.
#[test]
fn local_comp_soundness() {
    let mut r = rng(101);
    let mut applied = 0;
    let mut tries = 0;
    while applied < 2000 {
        tries += 1;
        assert!(tries < 100_000, "generator starved");
        let ns = r.gen_range(3..=9);
        let nb = r.gen_range(0..=4).min(ns);
        let mut g = random_graph_like(&mut r, ns, nb, 0.3);
        let candidates: Vec<V> = g.vertices().collect();
        let snapshot = g.clone();
        let mut hit = false;
        for v in candidates {
            if local_comp(&mut g, v).is_ok() {
                hit = true;
                break;
            }
        }
        if hit {
            check_preserves(&snapshot, &g, &format!("local_comp try {}", tries));
            applied += 1;
        }
    }
}

/// Pivot: ≥2000 applications, all four 0/π phase combinations arise.
#[test]
fn pivot_soundness() {
    let mut r = rng(202);
    let mut applied = 0;
    let mut tries = 0;
    while applied < 2000 {
        tries += 1;
        assert!(tries < 200_000, "generator starved");
        let ns = r.gen_range(4..=9);
        let nb = r.gen_range(0..=4).min(ns);
        let mut g = random_graph_like(&mut r, ns, nb, 0.25);
        let verts: Vec<V> = g.vertices().collect();
        let snapshot = g.clone();
        let mut hit = false;
        'outer: for &u in &verts {
            if !g.contains(u) {
                continue;
            }
            for v in g.neighbour_vec(u) {
                if v > u && pivot(&mut g, u, v).is_ok() {
                    hit = true;
                    break 'outer;
                }
            }
        }
        if hit {
            check_preserves(&snapshot, &g, &format!("pivot try {}", tries));
            applied += 1;
        }
    }
}

/// Gadget-forming pivot: ≥2000 applications.
#[test]
fn pivot_gadget_soundness() {
    let mut r = rng(303);
    let mut applied = 0;
    let mut tries = 0;
    while applied < 2000 {
        tries += 1;
        assert!(tries < 200_000, "generator starved");
        let ns = r.gen_range(4..=9);
        let nb = r.gen_range(0..=4).min(ns);
        let mut g = random_graph_like(&mut r, ns, nb, 0.5);
        let verts: Vec<V> = g.vertices().collect();
        let snapshot = g.clone();
        let mut hit = false;
        'outer: for &u in &verts {
            if !g.contains(u) {
                continue;
            }
            for v in g.neighbour_vec(u) {
                if pivot_gadget(&mut g, u, v).is_ok() {
                    hit = true;
                    break 'outer;
                }
            }
        }
        if hit {
            check_preserves(&snapshot, &g, &format!("pivot_gadget try {}", tries));
            applied += 1;
        }
    }
}

/// Gadget fusion: ≥2000 applications on constructed gadget pairs with
/// random shared neighbourhoods.
#[test]
fn gadget_fuse_soundness() {
    let mut r = rng(404);
    for trial in 0..2000 {
        let n = r.gen_range(2..=5);
        let nb = r.gen_range(0..=2);
        let mut g = random_graph_like(&mut r, n, nb, 0.4);
        let legs: Vec<V> = g
            .vertices()
            .filter(|&v| g.kind(v) == VKind::Z && !g.kind(v).is_boundary())
            .take(r.gen_range(1..=n))
            .collect();
        let legs: Vec<V> = legs
            .into_iter()
            .filter(|&v| !g.kind(v).is_boundary())
            .collect();
        if legs.is_empty() {
            continue;
        }
        let p1 = Phase::new(r.gen_range(0..8));
        let p2 = Phase::new(r.gen_range(0..8));
        let (b1, _) = add_gadget(&mut g, &legs, p1);
        let (b2, _) = add_gadget(&mut g, &legs, p2);
        let snapshot = g.clone();
        gadget_fuse(&mut g, b1, b2).unwrap_or_else(|e| panic!("trial {}: {}", trial, e));
        check_preserves(&snapshot, &g, &format!("gadget_fuse trial {}", trial));
    }
}

/// Single-leg gadget fusion: ≥2000 applications.
#[test]
fn id_gadget_fuse_soundness() {
    let mut r = rng(505);
    let mut applied = 0;
    let mut trial = 0;
    while applied < 2000 {
        trial += 1;
        assert!(trial < 100_000, "generator starved");
        let ns = r.gen_range(2..=6);
        let nb = r.gen_range(0..=3).min(ns);
        let mut g = random_graph_like(&mut r, ns, nb, 0.4);
        let Some(host) = g
            .vertices()
            .find(|&v| g.kind(v) == VKind::Z && g.degree(v) >= 1)
        else {
            continue;
        };
        let (base, _) = add_gadget(&mut g, &[host], Phase::new(r.gen_range(0..8)));
        let snapshot = g.clone();
        id_gadget_fuse(&mut g, base).unwrap_or_else(|e| panic!("trial {}: {}", trial, e));
        check_preserves(&snapshot, &g, &format!("id_gadget_fuse trial {}", trial));
        applied += 1;
    }
}

/// Fusion, parallel-edge and self-loop elimination are exercised through
/// to_graph_like on raw diagrams with all vertex kinds: ≥2000 random
/// normalisations must preserve the tensor.
#[test]
fn to_graph_like_soundness() {
    let mut r = rng(606);
    let mut checked = 0;
    let mut trial = 0;
    while checked < 2000 {
        trial += 1;
        assert!(trial < 100_000, "generator starved");
        let ns = r.gen_range(2..=9);
        let nb = r.gen_range(0..=4).min(ns);
        let mut g = random_raw_diagram(&mut r, ns, nb);
        let before = tensor_c64(&g).unwrap();
        g.to_graph_like();
        assert!(g.is_graph_like(), "trial {}: not graph-like", trial);
        // boundary normalisation can add spiders past the oracle cap
        let Ok(after) = tensor_c64(&g) else { continue };
        assert_tensors_close(
            &before,
            &after,
            TOL,
            &format!("to_graph_like trial {}", trial),
        );
        checked += 1;
    }
}

/// to_graph_like never increases the number of non-Clifford phases.
#[test]
fn to_graph_like_t_monotone() {
    let mut r = rng(707);
    for _ in 0..500 {
        let ns = r.gen_range(2..=9);
        let nb = r.gen_range(0..=4).min(ns);
        let mut g = random_raw_diagram(&mut r, ns, nb);
        let before = g.odd_phase_spiders();
        g.to_graph_like();
        assert!(g.odd_phase_spiders() <= before);
    }
}

/// The full fixpoint: value-preserving, T-monotone, deterministic.
#[test]
fn full_simp_soundness_and_determinism() {
    let mut r = rng(808);
    for trial in 0..800 {
        let ns = r.gen_range(2..=9);
        let nb = r.gen_range(0..=4).min(ns);
        let g0 = random_raw_diagram(&mut r, ns, nb);
        let Ok(before) = tensor_c64(&g0) else {
            continue;
        };
        let t_before = g0.odd_phase_spiders();

        let mut g1 = g0.clone();
        let (_, trace1) = full_simp_traced(&mut g1);
        let Ok(after) = tensor_c64(&g1) else { continue };
        assert_tensors_close(&before, &after, TOL, &format!("full_simp trial {}", trial));
        assert!(
            g1.odd_phase_spiders() <= t_before,
            "trial {}: T-count increased",
            trial
        );

        // identical input (same ids) must give identical output and trace
        let mut g2 = g0.clone();
        let (_, trace2) = full_simp_traced(&mut g2);
        let v1: Vec<_> = g1
            .vertices()
            .map(|v| (v, g1.kind(v), g1.phase(v)))
            .collect();
        let v2: Vec<_> = g2
            .vertices()
            .map(|v| (v, g2.kind(v), g2.phase(v)))
            .collect();
        assert_eq!(v1, v2, "trial {}: nondeterministic vertices", trial);
        assert_eq!(
            g1.edges(),
            g2.edges(),
            "trial {}: nondeterministic edges",
            trial
        );
        assert_eq!(
            g1.scalar(),
            g2.scalar(),
            "trial {}: nondeterministic scalar",
            trial
        );
        let r1: Vec<_> = trace1
            .iter()
            .map(|s| (s.rule, s.vertices.clone()))
            .collect();
        let r2: Vec<_> = trace2
            .iter()
            .map(|s| (s.rule, s.vertices.clone()))
            .collect();
        assert_eq!(r1, r2, "trial {}: nondeterministic trace", trial);
    }
}

/// Rewrite traces serialise to JSON lines with rule name, vertices and
/// the exact scalar factor.
#[test]
fn trace_emits_json_lines() {
    let mut r = rng(909);
    let mut g = random_graph_like(&mut r, 6, 0, 0.2);
    let (_, trace) = full_simp_traced(&mut g);
    for step in &trace {
        let line = serde_json::to_string(&step).unwrap();
        assert!(line.contains("\"rule\""));
        assert!(line.contains("\"scalar_factor\""));
    }
}

/// A gadget whose top phases cancel to zero is removed entirely.
#[test]
fn cancelled_gadgets_dissolve() {
    let mut r = rng(111);
    let mut g = random_graph_like(&mut r, 4, 2, 0.0);
    let legs: Vec<V> = g
        .vertices()
        .filter(|&v| g.kind(v) == VKind::Z)
        .take(3)
        .collect();
    add_gadget(&mut g, &legs, Phase::T);
    add_gadget(&mut g, &legs, Phase::MINUS_T);
    let before = tensor_c64(&g).unwrap();
    full_simp(&mut g);
    let after = tensor_c64(&g).unwrap();
    assert_tensors_close(&before, &after, TOL, "cancelled gadgets");
    // no pendant spiders survive
    for v in g.vertices() {
        if g.kind(v) == VKind::Z && g.degree(v) == 1 {
            let (w, _) = g.neighbours(v).next().unwrap();
            assert!(
                g.kind(w).is_boundary() || g.phase(v).is_odd(),
                "leftover Clifford pendant {}",
                v
            );
        }
    }
}
