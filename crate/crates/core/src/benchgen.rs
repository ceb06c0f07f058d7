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

//! Reproducible generators for the two benchmark families: random
//! Pauli-exponential circuits and hidden-shift circuits.
//!
//! All randomness comes from ChaCha8 (rand_chacha 0.3) keyed by the
//! spec's seed, so instances are identical across platforms and runs.

use num::BigUint;
use rand::seq::index::sample as index_sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::phase::Phase;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchGenError(pub String);

impl std::fmt::Display for BenchGenError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "generator spec invalid: {}", self.0)
    }
}

impl std::error::Error for BenchGenError {}

/// Spec for a random circuit built from exponentiated Pauli unitaries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PauliExpSpec {
    pub n_qubits: usize,
    /// Number of exponentials; equals the T-count of the output.
    pub count: usize,
    pub w_min: usize,
    pub w_max: usize,
    pub seed: u64,
}

impl PauliExpSpec {
    pub fn new(n_qubits: usize, count: usize, seed: u64) -> PauliExpSpec {
        PauliExpSpec {
            n_qubits,
            count,
            w_min: 2,
            w_max: 4,
            seed,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
enum Pauli {
    X,
    Y,
    Z,
}

/// Generate a random product of exponentiated Paulis exp(−i(α/2)P),
/// each synthesised as basis-change Cliffords, a CNOT ladder onto the
/// last chosen qubit, one odd Z-phase, and the mirror image.
///
/// Basis changes: X-qubits are conjugated by H; Y-qubits by (sdg, h) on
/// the way in and (h, s) on the way out. A weight-k term uses exactly
/// one odd phase gate and 2(k−1) CNOTs, so `t_count` equals `count`.
/// Each gate Z_α differs from exp(−i(α/2)Z) by the global phase
/// e^{iα/2}, so the whole circuit matches the exponential product up to
/// global phase.
pub fn gen_pauli_exp(spec: &PauliExpSpec) -> Result<Circuit, BenchGenError> {
    if spec.w_min < 2 || spec.w_min > spec.w_max || spec.w_max > spec.n_qubits {
        return Err(BenchGenError(format!(
            "need 2 ≤ w_min ≤ w_max ≤ n_qubits, got {} ≤ {} ≤ {}",
            spec.w_min, spec.w_max, spec.n_qubits
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut c = Circuit::new(spec.n_qubits);
    for _ in 0..spec.count {
        let k = rng.gen_range(spec.w_min..=spec.w_max);
        let mut qubits: Vec<usize> = index_sample(&mut rng, spec.n_qubits, k).into_vec();
        qubits.sort_unstable();
        let paulis: Vec<Pauli> = (0..k)
            .map(|_| match rng.gen_range(0..3u8) {
                0 => Pauli::X,
                1 => Pauli::Y,
                _ => Pauli::Z,
            })
            .collect();
        let alpha = Phase::new(2 * rng.gen_range(0..4i64) + 1);

        for (&q, &p) in qubits.iter().zip(&paulis) {
            match p {
                Pauli::X => c.push(Gate::H(q)),
                Pauli::Y => {
                    c.push(Gate::Sdg(q));
                    c.push(Gate::H(q));
                }
                Pauli::Z => {}
            }
        }
        for w in qubits.windows(2) {
            c.push(Gate::CNOT(w[0], w[1]));
        }
        c.push(Gate::ZPhase(*qubits.last().unwrap(), alpha));
        for w in qubits.windows(2).rev() {
            c.push(Gate::CNOT(w[0], w[1]));
        }
        for (&q, &p) in qubits.iter().zip(&paulis) {
            match p {
                Pauli::X => c.push(Gate::H(q)),
                Pauli::Y => {
                    c.push(Gate::H(q));
                    c.push(Gate::S(q));
                }
                Pauli::Z => {}
            }
        }
    }
    Ok(c)
}

/// Spec for a hidden-shift instance over the gate set {H, Z, CZ, CCZ}.
///
/// The two oracles encode the Maiorana–McFarland bent function
/// f(x, y) = x·y ⊕ g(y) and its dual x·y ⊕ g(x), where g is built from
/// random CCZ terms plus `n_cz` CZ and `n_z` Z terms. The shift is
/// folded into the first oracle by expanding each shifted term into
/// gates of the same set (global phases dropped).
///
/// `n_ccz` counts the CCZ gates of the whole circuit. Duality puts g in
/// both oracles, so `n_ccz` must be even: each oracle carries n_ccz/2
/// cubic terms, and the T-count is 7·n_ccz under the seven-T encoding.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HiddenShiftSpec {
    /// Total qubits; must be even.
    pub n_qubits: usize,
    /// Total CCZ gates across both oracles; must be even.
    pub n_ccz: usize,
    /// Random CZ terms in the quadratic part of g.
    pub n_cz: usize,
    /// Random Z terms in the linear part of g.
    pub n_z: usize,
    pub seed: u64,
}

impl HiddenShiftSpec {
    /// Default densities: half-width(half-width−1)/4 CZ terms (half the
    /// expected count of a uniform quadratic) and half-width/2 Z terms.
    pub fn new(n_qubits: usize, n_ccz: usize, seed: u64) -> HiddenShiftSpec {
        let half = n_qubits / 2;
        HiddenShiftSpec {
            n_qubits,
            n_ccz,
            n_cz: half * half.saturating_sub(1) / 4,
            n_z: half / 2,
            seed,
        }
    }
}

/// One term of the Boolean polynomial g, over half-register indices.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum GTerm {
    Ccz(usize, usize, usize),
    Cz(usize, usize),
    Z(usize),
}

pub fn gen_hidden_shift(spec: &HiddenShiftSpec) -> Result<(Circuit, Vec<bool>), BenchGenError> {
    let n = spec.n_qubits;
    if n == 0 || n % 2 != 0 {
        return Err(BenchGenError(format!("n_qubits must be even, got {}", n)));
    }
    let half = n / 2;
    if spec.n_ccz % 2 != 0 {
        return Err(BenchGenError(format!(
            "n_ccz must be even (each oracle carries half), got {}",
            spec.n_ccz
        )));
    }
    let g_cubics = spec.n_ccz / 2;
    if g_cubics > 0 && half < 3 {
        return Err(BenchGenError("CCZ terms need at least 6 qubits".into()));
    }
    let max_triples = half * (half.max(1) - 1) * (half.max(2) - 2) / 6;
    if g_cubics > max_triples {
        return Err(BenchGenError(format!(
            "cannot place {} distinct CCZ terms on {} qubits",
            g_cubics, half
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let shift: Vec<bool> = (0..n).map(|_| rng.gen()).collect();

    // distinct CCZ triples so the T-count is exactly 7·n_ccz
    let mut terms: Vec<GTerm> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < g_cubics {
        let mut t = index_sample(&mut rng, half, 3).into_vec();
        t.sort_unstable();
        if seen.insert((t[0], t[1], t[2])) {
            terms.push(GTerm::Ccz(t[0], t[1], t[2]));
        }
    }
    for _ in 0..spec.n_cz {
        let mut p = index_sample(&mut rng, half, 2).into_vec();
        p.sort_unstable();
        terms.push(GTerm::Cz(p[0], p[1]));
    }
    for _ in 0..spec.n_z {
        terms.push(GTerm::Z(rng.gen_range(0..half)));
    }

    let mut c = Circuit::new(n);
    let h_layer = |c: &mut Circuit| {
        for q in 0..n {
            c.push(Gate::H(q));
        }
    };

    h_layer(&mut c);
    emit_oracle(&mut c, half, &terms, OracleHalf::Y, Some(&shift));
    h_layer(&mut c);
    emit_oracle(&mut c, half, &terms, OracleHalf::X, None);
    h_layer(&mut c);

    if n <= 10 {
        // behavioural self-test: the circuit must put all probability
        // mass on the planted shift
        let state = crate::dense::run(&c, &vec![false; n]);
        let mut index = 0usize;
        for (q, &b) in shift.iter().enumerate() {
            if b {
                index |= 1 << (n - 1 - q);
            }
        }
        let p = state[index].norm_sqr();
        assert!(
            (p - 1.0).abs() < 1e-9,
            "hidden-shift generator self-test failed: P(shift) = {}",
            p
        );
    }

    Ok((c, shift))
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum OracleHalf {
    /// g acts on the x half (qubits 0..half)
    X,
    /// g acts on the y half (qubits half..n)
    Y,
}

/// Emit the phase oracle (−1)^{x·y ⊕ g(·)}, optionally precomposed with
/// the shift. Shifted terms are expanded over {CCZ, CZ, Z}; parities are
/// accumulated so every pair/qubit gets at most one CZ/Z gate.
fn emit_oracle(
    c: &mut Circuit,
    half: usize,
    terms: &[GTerm],
    g_half: OracleHalf,
    shift: Option<&[bool]>,
) {
    let n = 2 * half;
    let s = |q: usize| shift.map(|s| s[q]).unwrap_or(false);
    let mut z_par = vec![false; n];
    let mut cz_par: std::collections::BTreeMap<(usize, usize), bool> =
        std::collections::BTreeMap::new();
    let mut cczs: Vec<(usize, usize, usize)> = Vec::new();

    let flip_cz =
        |a: usize, b: usize, cz_par: &mut std::collections::BTreeMap<(usize, usize), bool>| {
            let key = (a.min(b), a.max(b));
            *cz_par.entry(key).or_default() ^= true;
        };

    // the x·y ladder: CZ(i, half+i), shifted on both ends
    for i in 0..half {
        let (a, b) = (i, half + i);
        flip_cz(a, b, &mut cz_par);
        if s(b) {
            z_par[a] ^= true;
        }
        if s(a) {
            z_par[b] ^= true;
        }
    }

    let to_global = |i: usize| match g_half {
        OracleHalf::X => i,
        OracleHalf::Y => half + i,
    };
    for term in terms {
        match *term {
            GTerm::Ccz(i, j, k) => {
                let (a, b, d) = (to_global(i), to_global(j), to_global(k));
                cczs.push((a, b, d));
                let (sa, sb, sd) = (s(a), s(b), s(d));
                if sd {
                    flip_cz(a, b, &mut cz_par);
                }
                if sb {
                    flip_cz(a, d, &mut cz_par);
                }
                if sa {
                    flip_cz(b, d, &mut cz_par);
                }
                if sb && sd {
                    z_par[a] ^= true;
                }
                if sa && sd {
                    z_par[b] ^= true;
                }
                if sa && sb {
                    z_par[d] ^= true;
                }
            }
            GTerm::Cz(i, j) => {
                let (a, b) = (to_global(i), to_global(j));
                flip_cz(a, b, &mut cz_par);
                if s(b) {
                    z_par[a] ^= true;
                }
                if s(a) {
                    z_par[b] ^= true;
                }
            }
            GTerm::Z(i) => {
                let a = to_global(i);
                z_par[a] ^= true;
            }
        }
    }

    for &(a, b, d) in &cczs {
        c.push(Gate::CCZ(a, b, d));
    }
    for ((a, b), on) in cz_par {
        if on {
            c.push(Gate::CZ(a, b));
        }
    }
    for (q, on) in z_par.into_iter().enumerate() {
        if on {
            c.push(Gate::Z(q));
        }
    }
}

/// 7^{⌈t/6⌉} (or with t doubled), the reference stabiliser-term count
/// for plots against the naive decomposition.
pub fn naive_terms(t: u64, doubled: bool) -> BigUint {
    crate::decompose::naive_terms(if doubled { 2 * t } else { t })
}
