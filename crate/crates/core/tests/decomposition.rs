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

//! Certification of the stabiliser decompositions and the recursive
//! decomposition driver.

mod common;

use common::*;
use rand::Rng;
use std::collections::BTreeMap;
use zxstab::circuit::CczMode;
use zxstab::decompose::{
    apply_bss, apply_pairwise, apply_single, decompose, naive_terms, unfuse_t, DecompCfg,
};
use zxstab::graph::{EKind, VKind, ZXDiagram, V};
use zxstab::phase::Phase;
use zxstab::scalar::Scalar;
use zxstab::simulate::{amplitude, SimCfg};
use zxstab::tensor::{tensor_c64, tensor_exact};

/// |T⟩^{⊗n} as a diagram: n one-legged π/4 spiders with scalar (1/√2)^n.
fn bare_t_state(n: usize) -> (ZXDiagram, Vec<V>) {
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

/// The expected |T⟩^{⊗6} vector in the exact ring: entry(x) = ω^{|x|}/8.
fn expected_t6() -> Vec<Scalar> {
    (0..64u32)
        .map(|x| {
            let mut s = Scalar::from_phase(Phase::new(x.count_ones() as i64));
            s.mul_sqrt2_pow(-6);
            s
        })
        .collect()
}

/// The seven BSS terms sum to |T⟩^{⊗6} exactly: ring equality on all 64
/// entries, and float agreement within 1e−12.
#[test]
fn bss_certification_exact() {
    let (g, leaves) = bare_t_state(6);
    let terms = apply_bss(&g, &leaves).unwrap();
    assert_eq!(terms.len(), 7);

    let mut sum = vec![Scalar::zero(); 64];
    for term in &terms {
        let t = tensor_exact(term).unwrap();
        for (acc, v) in sum.iter_mut().zip(t) {
            *acc += v;
        }
    }
    let want = expected_t6();
    for (i, (got, want)) in sum.iter().zip(want.iter()).enumerate() {
        assert_eq!(got, want, "ring mismatch at entry {}", i);
        assert!(
            (got.to_float() - want.to_float()).norm() < 1e-12,
            "float mismatch at entry {}",
            i
        );
    }
}

/// Every BSS term is Clifford in the replaced region: no odd phases
/// remain anywhere in the bare-state terms.
#[test]
fn bss_terms_are_stabiliser() {
    let (g, leaves) = bare_t_state(6);
    for (k, term) in apply_bss(&g, &leaves).unwrap().iter().enumerate() {
        assert_eq!(term.odd_phase_spiders(), 0, "term {} has odd phases", k);
    }
}

/// Branch additivity of all three decompositions on random host
/// diagrams: the children's tensors sum to the parent's. Hosts carry
/// degree-1 π/4 leaves wired into a random core, the same shape
/// `unfuse_t` produces.
#[test]
fn decomposition_additivity_on_random_hosts() {
    let mut r = rng(4242);
    for which in 0..3usize {
        let need = [6, 2, 1][which];
        for trial in 0..60 {
            let ns = r.gen_range(2..=4);
            let nb = r.gen_range(0..=2).min(ns);
            let mut g = random_graph_like(&mut r, ns, nb, 0.5);
            let core: Vec<V> = g.vertices().filter(|&v| g.kind(v) == VKind::Z).collect();
            let leaves: Vec<V> = (0..need)
                .map(|_| {
                    let host = core[r.gen_range(0..core.len())];
                    let leaf = g.add_vertex(VKind::Z, Phase::T);
                    g.add_edge(host, leaf, EKind::Hadamard);
                    leaf
                })
                .collect();
            let before = zxstab::tensor::tensor_c64_capped(&g, 16, 8).unwrap();
            let terms = match which {
                0 => apply_bss(&g, &leaves).unwrap(),
                1 => apply_pairwise(&g, &leaves).unwrap(),
                _ => apply_single(&g, leaves[0]).unwrap(),
            };
            let mut sum = vec![C64::new(0.0, 0.0); before.len()];
            for term in &terms {
                let t = zxstab::tensor::tensor_c64_capped(term, 16, 8).unwrap();
                for (acc, v) in sum.iter_mut().zip(t) {
                    *acc += v;
                }
            }
            assert_tensors_close(
                &before,
                &sum,
                1e-9,
                &format!("additivity kind {} trial {}", which, trial),
            );
        }
    }
}

/// The pairwise identity on the bare pair, exactly:
/// |T⟩⊗|T⟩ = ½(|00⟩+i|11⟩) + ½ω(|01⟩+|10⟩).
#[test]
fn pairwise_certification_exact() {
    let (g, leaves) = bare_t_state(2);
    let terms = apply_pairwise(&g, &leaves).unwrap();
    let mut sum = vec![Scalar::zero(); 4];
    for term in &terms {
        for (acc, v) in sum.iter_mut().zip(tensor_exact(term).unwrap()) {
            *acc += v;
        }
    }
    let expect = [
        Scalar::new(1, 1, 0, 0, 0), // 1/2
        Scalar::new(1, 0, 1, 0, 0), // ω/2
        Scalar::new(1, 0, 1, 0, 0), // ω/2
        Scalar::new(1, 0, 0, 1, 0), // i/2
    ];
    for (i, (got, want)) in sum.iter().zip(expect.iter()).enumerate() {
        assert_eq!(got, want, "entry {}", i);
    }
}

/// The driver yields exact amplitudes: Clifford leaf counts, pairwise
/// tails and the BSS path all agree with exhaustive single-T
/// decomposition (a fully independent route through the same machinery).
#[test]
fn decompose_matches_exhaustive_single_route() {
    let mut r = rng(1313);
    for trial in 0..40 {
        let n = r.gen_range(2..=6);
        let gates = r.gen_range(4..=24);
        let maxt = r.gen_range(0..=10);
        let c = random_circuit(&mut r, n, gates, maxt);
        let inb = bits_of(r.gen_range(0..1 << n), n);
        let outb = bits_of(r.gen_range(0..1 << n), n);
        let mut g = c.to_zx(CczMode::SevenT);
        g.plug_inputs(&inb).unwrap();
        g.plug_outputs(&outb).unwrap();

        let fast = decompose(&g, &DecompCfg::default()).unwrap();

        // exhaustive 2^t route: apply only single-T decompositions with
        // no interleaved simplification beyond the leaves
        let exhaustive = exhaustive_single(&g);
        assert_eq!(
            fast.scalar, exhaustive,
            "trial {}: exact scalars differ",
            trial
        );
    }
}

fn exhaustive_single(g: &ZXDiagram) -> Scalar {
    let mut g = g.clone();
    g.to_graph_like();
    let odd: Vec<V> = g.odd_phase_vertices();
    match odd.first() {
        None => {
            let mut h = g.clone();
            zxstab::simplify::full_simp(&mut h);
            assert_eq!(h.num_vertices(), 0, "Clifford leaf failed to reduce");
            h.scalar().clone()
        }
        Some(&v) => {
            let mut h = g.clone();
            let leaf = unfuse_t(&mut h, v).unwrap();
            let terms = apply_single(&h, leaf).unwrap();
            let mut acc = Scalar::zero();
            for t in terms {
                acc += exhaustive_single(&t);
            }
            acc
        }
    }
}

/// Exactness against the dense oracle, and determinism across repeated
/// runs and across the sequential/parallel drivers.
#[test]
fn decompose_exact_and_deterministic() {
    let mut r = rng(77);
    let cfg_par = DecompCfg::default();
    let cfg_seq = DecompCfg {
        sequential: true,
        ..DecompCfg::default()
    };
    for trial in 0..60 {
        let n = r.gen_range(2..=6);
        let gates = r.gen_range(6..=30);
        let maxt = r.gen_range(0..=12);
        let c = random_circuit(&mut r, n, gates, maxt);
        let inb = bits_of(r.gen_range(0..1 << n), n);
        let outb = bits_of(r.gen_range(0..1 << n), n);

        let cfg = SimCfg::default();
        let dec = amplitude(&c, &inb, &outb, &cfg).unwrap();
        let dense = zxstab::dense::amplitude(&c, &inb, &outb);
        assert!(
            (dec.scalar.to_float() - dense).norm() < 1e-9,
            "trial {}: {} vs {}",
            trial,
            dec.scalar.to_float(),
            dense
        );

        // schedule independence: parallel and sequential agree exactly
        let mut g = c.to_zx(CczMode::SevenT);
        g.plug_inputs(&inb).unwrap();
        g.plug_outputs(&outb).unwrap();
        let d1 = decompose(&g, &cfg_par).unwrap();
        let d2 = decompose(&g, &cfg_seq).unwrap();
        assert_eq!(d1.scalar, d2.scalar, "trial {}", trial);
        assert_eq!(
            d1.report.leaf_terms, d2.report.leaf_terms,
            "trial {}",
            trial
        );
    }
}

/// Worst-case branching: leaf_terms ≤ 7^{⌈t/6⌉}·2² and the live-diagram
/// memory bound holds.
#[test]
fn decompose_counters_and_memory_bound() {
    let mut r = rng(99);
    for _ in 0..25 {
        let n = r.gen_range(3..=6);
        let (gates, maxt) = (r.gen_range(10..=40), r.gen_range(1..=14));
        let c = random_circuit(&mut r, n, gates, maxt);
        let mut g = c.to_zx(CczMode::SevenT);
        let want_in = vec![false; n];
        g.plug_inputs(&want_in).unwrap();
        g.plug_outputs(&want_in).unwrap();
        let d = decompose(&g, &DecompCfg::default()).unwrap();
        let t = d.report.initial_t as u64;
        if t >= 1 {
            let bound = 7u64.pow(t.div_ceil(6) as u32) * 4;
            assert!(
                d.report.leaf_terms <= bound,
                "leaf_terms {} exceeds {}",
                d.report.leaf_terms,
                bound
            );
            let mem = 7u64.pow(3) * t.div_ceil(6);
            assert!(
                d.report.max_live_diagrams <= mem,
                "max_live {} exceeds {}",
                d.report.max_live_diagrams,
                mem
            );
        }
        assert_eq!(
            d.report.naive_terms,
            naive_terms(d.report.pre_simp_t as u64)
        );
    }
}

/// Zero-scalar pruning: the all-plus amplitude of a circuit with a Z on
/// a |0⟩-measured wire vanishes; leaf counting is still consistent.
#[test]
fn decompose_zero_amplitude() {
    let mut c = zxstab::circuit::Circuit::new(1);
    c.push(zxstab::circuit::Gate::H(0));
    c.push(zxstab::circuit::Gate::T(0));
    c.push(zxstab::circuit::Gate::H(0));
    // amplitude ⟨1|·|0⟩ path is nonzero; force a zero with X basis clash
    let mut g = c.to_zx(CczMode::SevenT);
    g.plug_inputs(&[false]).unwrap();
    g.plug_outputs(&[false]).unwrap();
    let d = decompose(&g, &DecompCfg::default()).unwrap();
    assert!(d.report.leaf_terms >= 1);

    // an exactly zero diagram: ⟨0|X|0⟩
    let mut c = zxstab::circuit::Circuit::new(1);
    c.push(zxstab::circuit::Gate::X(0));
    let mut g = c.to_zx(CczMode::SevenT);
    g.plug_inputs(&[false]).unwrap();
    g.plug_outputs(&[false]).unwrap();
    let d = decompose(&g, &DecompCfg::default()).unwrap();
    assert!(d.scalar.is_zero());
}

/// Doubling: the marginal diagram of a fixed-output circuit evaluates to
/// the Born probability (oracle-checked on small cases).
#[test]
fn double_matches_born_rule() {
    let mut r = rng(555);
    for trial in 0..60 {
        let n = r.gen_range(1..=4);
        let (gates, maxt) = (r.gen_range(3..=14), r.gen_range(0..=6));
        let c = random_circuit(&mut r, n, gates, maxt);
        let mut g = c.to_zx(CczMode::SevenT);
        g.plug_inputs(&vec![false; n]).unwrap();
        let n_fix = r.gen_range(0..=n);
        let fixed: BTreeMap<usize, bool> = (0..n_fix).map(|q| (q, r.gen_bool(0.5))).collect();
        let doubled = g.double(&fixed).unwrap();
        let got = zxstab::tensor::tensor_c64_capped(&doubled, 20, 0)
            .map(|t| t[0])
            .ok();
        let Some(got) = got else { continue };
        let want: f64 =
            zxstab::dense::marginal(&c, &fixed.iter().map(|(&q, &b)| (q, b)).collect::<Vec<_>>());
        assert!(
            (got - C64::new(want, 0.0)).norm() < 1e-9,
            "trial {}: {} vs {}",
            trial,
            got,
            want
        );
    }
}
