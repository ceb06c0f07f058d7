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

//! Shared helpers for the integration tests: seeded random diagram and
//! circuit generators, and tensor comparison utilities.

#![allow(dead_code)]

use num::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zxstab::circuit::{Circuit, Gate};
use zxstab::graph::{EKind, VKind, ZXDiagram, V};
use zxstab::phase::Phase;

pub type C64 = Complex<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn assert_tensors_close(a: &[C64], b: &[C64], tol: f64, ctx: &str) {
    assert_eq!(a.len(), b.len(), "{}: size mismatch", ctx);
    for (i, (x, y)) in a.iter().zip(b.iter()).enumerate() {
        assert!(
            (x - y).norm() <= tol * (1.0 + x.norm().max(y.norm())),
            "{}: entry {} differs: {} vs {}",
            ctx,
            i,
            x,
            y
        );
    }
}

/// A raw diagram with mixed spider colours, Hadamard boxes on some
/// edges, parallel edges and self-loops: input fodder for
/// `to_graph_like`.
pub fn random_raw_diagram(rng: &mut ChaCha8Rng, n_spiders: usize, n_bound: usize) -> ZXDiagram {
    let mut g = ZXDiagram::new();
    let spiders: Vec<V> = (0..n_spiders)
        .map(|_| {
            let kind = if rng.gen_bool(0.6) {
                VKind::Z
            } else {
                VKind::X
            };
            g.add_vertex(kind, Phase::new(rng.gen_range(0..8)))
        })
        .collect();
    // random edges, sometimes parallel or looped
    let n_edges = rng.gen_range(n_spiders / 2..=n_spiders * 2);
    for _ in 0..n_edges {
        let u = spiders[rng.gen_range(0..n_spiders)];
        let v = if rng.gen_bool(0.08) {
            u // self-loop
        } else {
            spiders[rng.gen_range(0..n_spiders)]
        };
        let kind = if rng.gen_bool(0.5) {
            EKind::Hadamard
        } else {
            EKind::Simple
        };
        if rng.gen_bool(0.15) && u != v {
            // splice a Hadamard box into this connection instead
            let h = g.add_vertex(VKind::HBox, Phase::ZERO);
            g.add_edge(u, h, kind);
            g.add_edge(
                h,
                v,
                if rng.gen_bool(0.5) {
                    EKind::Simple
                } else {
                    EKind::Hadamard
                },
            );
        } else {
            g.add_edge(u, v, kind);
        }
    }
    let mut ins = vec![];
    let mut outs = vec![];
    for i in 0..n_bound {
        let target = spiders[rng.gen_range(0..n_spiders)];
        if i % 2 == 0 {
            let b = g.add_vertex(VKind::BoundaryIn, Phase::ZERO);
            g.add_edge(
                b,
                target,
                if rng.gen_bool(0.3) {
                    EKind::Hadamard
                } else {
                    EKind::Simple
                },
            );
            ins.push(b);
        } else {
            let b = g.add_vertex(VKind::BoundaryOut, Phase::ZERO);
            g.add_edge(
                b,
                target,
                if rng.gen_bool(0.3) {
                    EKind::Hadamard
                } else {
                    EKind::Simple
                },
            );
            outs.push(b);
        }
    }
    g.set_inputs(ins);
    g.set_outputs(outs);
    g
}

/// A random graph-like diagram: Z-spiders joined by single Hadamard
/// edges, no loops, boundaries on distinct spiders via plain edges.
pub fn random_graph_like(
    rng: &mut ChaCha8Rng,
    n_spiders: usize,
    n_bound: usize,
    odd_prob: f64,
) -> ZXDiagram {
    assert!(n_bound <= n_spiders);
    let mut g = ZXDiagram::new();
    let spiders: Vec<V> = (0..n_spiders)
        .map(|_| {
            let m = if rng.gen_bool(odd_prob) {
                2 * rng.gen_range(0..4) + 1
            } else {
                2 * rng.gen_range(0..4)
            };
            g.add_vertex(VKind::Z, Phase::new(m))
        })
        .collect();
    for i in 0..n_spiders {
        for j in (i + 1)..n_spiders {
            if rng.gen_bool(0.4) {
                g.add_edge(spiders[i], spiders[j], EKind::Hadamard);
            }
        }
    }
    let mut ins = vec![];
    let mut outs = vec![];
    for (i, &s) in spiders.iter().take(n_bound).enumerate() {
        if i % 2 == 0 {
            let b = g.add_vertex(VKind::BoundaryIn, Phase::ZERO);
            g.add_edge(b, s, EKind::Simple);
            ins.push(b);
        } else {
            let b = g.add_vertex(VKind::BoundaryOut, Phase::ZERO);
            g.add_edge(b, s, EKind::Simple);
            outs.push(b);
        }
    }
    g.set_inputs(ins);
    g.set_outputs(outs);
    g
}

/// Attach a phase gadget over the given legs; returns (base, top).
pub fn add_gadget(g: &mut ZXDiagram, legs: &[V], top_phase: Phase) -> (V, V) {
    let base = g.add_vertex(VKind::Z, Phase::ZERO);
    for &l in legs {
        g.add_edge(base, l, EKind::Hadamard);
    }
    let top = g.add_vertex(VKind::Z, top_phase);
    g.add_edge(base, top, EKind::Hadamard);
    (base, top)
}

/// A random circuit over the full supported gate set.
pub fn random_circuit(
    rng: &mut ChaCha8Rng,
    n_qubits: usize,
    n_gates: usize,
    max_t: usize,
) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    let mut t_left = max_t;
    for _ in 0..n_gates {
        let q = rng.gen_range(0..n_qubits);
        let pick = rng.gen_range(0..12);
        match pick {
            0 => c.push(Gate::H(q)),
            1 => c.push(Gate::X(q)),
            2 => c.push(Gate::Z(q)),
            3 => c.push(Gate::S(q)),
            4 => c.push(Gate::Sdg(q)),
            5 | 6 => {
                if n_qubits >= 2 {
                    let mut r = rng.gen_range(0..n_qubits - 1);
                    if r >= q {
                        r += 1;
                    }
                    if pick == 5 {
                        c.push(Gate::CNOT(q, r));
                    } else {
                        c.push(Gate::CZ(q, r));
                    }
                } else {
                    c.push(Gate::H(q));
                }
            }
            7 => {
                if t_left > 0 {
                    t_left -= 1;
                    c.push(Gate::T(q));
                } else {
                    c.push(Gate::S(q));
                }
            }
            8 => {
                if t_left > 0 {
                    t_left -= 1;
                    c.push(Gate::Tdg(q));
                } else {
                    c.push(Gate::Sdg(q));
                }
            }
            9 => {
                if t_left > 0 {
                    t_left -= 1;
                    let m = 2 * rng.gen_range(0..4) + 1;
                    c.push(Gate::ZPhase(q, Phase::new(m)));
                } else {
                    c.push(Gate::Z(q));
                }
            }
            10 => {
                if n_qubits >= 3 && t_left >= 7 {
                    t_left -= 7;
                    let mut qs: Vec<usize> = (0..n_qubits).collect();
                    for i in 0..3 {
                        let j = rng.gen_range(i..n_qubits);
                        qs.swap(i, j);
                    }
                    c.push(Gate::CCZ(qs[0], qs[1], qs[2]));
                } else {
                    c.push(Gate::Z(q));
                }
            }
            _ => {
                let m = 2 * rng.gen_range(0..4);
                c.push(Gate::ZPhase(q, Phase::new(m)));
            }
        }
    }
    c
}

pub fn bits_of(value: usize, n: usize) -> Vec<bool> {
    (0..n).map(|q| (value >> (n - 1 - q)) & 1 == 1).collect()
}
