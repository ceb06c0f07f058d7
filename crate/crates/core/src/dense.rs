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

//! Dense state-vector reference simulator.
//!
//! A deliberately straightforward gate-by-gate simulator used as an
//! independent oracle in tests. It never touches the ZX machinery, so
//! agreement between the two paths is meaningful evidence.
//!
//! Qubit 0 occupies the most significant bit of the state index.

use crate::circuit::{Circuit, Gate};
use num::Complex;

pub type C64 = Complex<f64>;

const MAX_QUBITS: usize = 22;

fn omega_pow(m: u8) -> C64 {
    C64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * m as f64)
}

/// Apply one gate in place.
pub fn apply_gate(state: &mut [C64], n: usize, gate: &Gate) {
    let bit = |q: usize| 1usize << (n - 1 - q);
    match *gate {
        Gate::H(q) => {
            let b = bit(q);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..state.len() {
                if i & b == 0 {
                    let (x, y) = (state[i], state[i | b]);
                    state[i] = (x + y) * s;
                    state[i | b] = (x - y) * s;
                }
            }
        }
        Gate::X(q) => {
            let b = bit(q);
            for i in 0..state.len() {
                if i & b == 0 {
                    state.swap(i, i | b);
                }
            }
        }
        Gate::Z(q) => phase_if(state, bit(q), C64::new(-1.0, 0.0)),
        Gate::S(q) => phase_if(state, bit(q), C64::new(0.0, 1.0)),
        Gate::Sdg(q) => phase_if(state, bit(q), C64::new(0.0, -1.0)),
        Gate::T(q) => phase_if(state, bit(q), omega_pow(1)),
        Gate::Tdg(q) => phase_if(state, bit(q), omega_pow(7)),
        Gate::ZPhase(q, p) => phase_if(state, bit(q), omega_pow(p.m())),
        Gate::XPhase(q, p) => {
            apply_gate(state, n, &Gate::H(q));
            apply_gate(state, n, &Gate::ZPhase(q, p));
            apply_gate(state, n, &Gate::H(q));
        }
        Gate::CNOT(c, t) => {
            let (bc, bt) = (bit(c), bit(t));
            for i in 0..state.len() {
                if i & bc != 0 && i & bt == 0 {
                    state.swap(i, i | bt);
                }
            }
        }
        Gate::CZ(a, b) => {
            let m = bit(a) | bit(b);
            for (i, s) in state.iter_mut().enumerate() {
                if i & m == m {
                    *s = -*s;
                }
            }
        }
        Gate::CCZ(a, b, c) => {
            let m = bit(a) | bit(b) | bit(c);
            for (i, s) in state.iter_mut().enumerate() {
                if i & m == m {
                    *s = -*s;
                }
            }
        }
    }
}

fn phase_if(state: &mut [C64], b: usize, ph: C64) {
    for (i, s) in state.iter_mut().enumerate() {
        if i & b != 0 {
            *s *= ph;
        }
    }
}

/// The full output state for a basis-state input.
pub fn run(c: &Circuit, in_bits: &[bool]) -> Vec<C64> {
    let n = c.n_qubits();
    assert!(
        n <= MAX_QUBITS,
        "dense oracle capped at {} qubits",
        MAX_QUBITS
    );
    assert_eq!(in_bits.len(), n);
    let mut index = 0usize;
    for (q, &b) in in_bits.iter().enumerate() {
        if b {
            index |= 1 << (n - 1 - q);
        }
    }
    let mut state = vec![C64::new(0.0, 0.0); 1 << n];
    state[index] = C64::new(1.0, 0.0);
    for g in c.gates() {
        apply_gate(&mut state, n, g);
    }
    state
}

/// ⟨out|U|in⟩ for computational basis states.
pub fn amplitude(c: &Circuit, in_bits: &[bool], out_bits: &[bool]) -> C64 {
    let n = c.n_qubits();
    assert_eq!(out_bits.len(), n);
    let state = run(c, in_bits);
    let mut index = 0usize;
    for (q, &b) in out_bits.iter().enumerate() {
        if b {
            index |= 1 << (n - 1 - q);
        }
    }
    state[index]
}

/// The full 2^n × 2^n unitary, column by column. Intended for small n.
pub fn unitary(c: &Circuit) -> Vec<Vec<C64>> {
    let n = c.n_qubits();
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    for col in 0..dim {
        let bits: Vec<bool> = (0..n).map(|q| (col >> (n - 1 - q)) & 1 == 1).collect();
        cols.push(run(c, &bits));
    }
    cols
}

/// Marginal probability that the listed qubits take the listed values,
/// computed from the dense output state on |0…0⟩.
pub fn marginal(c: &Circuit, fixed: &[(usize, bool)]) -> f64 {
    let n = c.n_qubits();
    let state = run(c, &vec![false; n]);
    let mut p = 0.0;
    'outer: for (i, amp) in state.iter().enumerate() {
        for &(q, b) in fixed {
            if ((i >> (n - 1 - q)) & 1 == 1) != b {
                continue 'outer;
            }
        }
        p += amp.norm_sqr();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Phase;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn bell_state() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0));
        c.push(Gate::CNOT(0, 1));
        let s = run(&c, &[false, false]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(s[0b00], C64::new(r, 0.0)));
        assert!(close(s[0b01], C64::new(0.0, 0.0)));
        assert!(close(s[0b10], C64::new(0.0, 0.0)));
        assert!(close(s[0b11], C64::new(r, 0.0)));
    }

    #[test]
    fn ccz_phase() {
        let mut c = Circuit::new(3);
        for q in 0..3 {
            c.push(Gate::H(q));
        }
        c.push(Gate::CCZ(0, 1, 2));
        let s = run(&c, &[false; 3]);
        for i in 0..8 {
            let expect = if i == 7 { -1.0 } else { 1.0 } / 8f64.sqrt();
            assert!(close(s[i], C64::new(expect, 0.0)), "index {}", i);
        }
    }

    #[test]
    fn xphase_is_h_conjugate() {
        let mut c1 = Circuit::new(1);
        c1.push(Gate::XPhase(0, Phase::new(3)));
        let mut c2 = Circuit::new(1);
        c2.push(Gate::H(0));
        c2.push(Gate::ZPhase(0, Phase::new(3)));
        c2.push(Gate::H(0));
        let u1 = unitary(&c1);
        let u2 = unitary(&c2);
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(u1[i][j], u2[i][j]));
            }
        }
    }

    #[test]
    fn marginal_completeness() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0));
        c.push(Gate::T(0));
        c.push(Gate::CNOT(0, 1));
        let p0 = marginal(&c, &[(0, false)]);
        let p1 = marginal(&c, &[(0, true)]);
        assert!((p0 + p1 - 1.0).abs() < 1e-12);
    }
}
