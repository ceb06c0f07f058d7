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

//! Brute-force dense evaluation of small ZX-diagrams.
//!
//! This is the testing oracle used throughout the repository: every
//! rewrite, translation and decomposition is certified against it. It
//! evaluates a diagram by summing over one binary branch variable per
//! vertex, which is exponential, so it refuses diagrams above a size cap.
//!
//! Index order of the returned tensor is inputs then outputs, first
//! boundary in the most significant bit.

use num::Complex;

use crate::graph::{EKind, VKind, ZXDiagram, V};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_SPIDERS: usize = 14;
pub const DEFAULT_MAX_BOUNDARIES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorError {
    TooManySpiders { count: usize, cap: usize },
    TooManyBoundaries { count: usize, cap: usize },
    DanglingBoundary(V),
}

impl std::fmt::Display for TensorError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TensorError::TooManySpiders { count, cap } => {
                write!(f, "diagram has {} spiders, oracle cap is {}", count, cap)
            }
            TensorError::TooManyBoundaries { count, cap } => {
                write!(f, "diagram has {} boundaries, oracle cap is {}", count, cap)
            }
            TensorError::DanglingBoundary(v) => {
                write!(f, "boundary vertex {} not in the input/output lists", v)
            }
        }
    }
}

impl std::error::Error for TensorError {}

/// Numeric domain the oracle contracts in. Implemented for `Complex<f64>`
/// (fast path) and [`Scalar`] (exact path).
pub trait TensorElem: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_assign(&mut self, rhs: &Self);
    fn mul_assign(&mut self, rhs: &Self);
    fn from_ring(s: &Scalar) -> Self;
    /// ω^m
    fn phase_power(m: u8) -> Self;
    fn inv_sqrt2() -> Self;
    fn negate(&mut self);
    fn is_zero(&self) -> bool;
}

impl TensorElem for Complex<f64> {
    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_assign(&mut self, rhs: &Self) {
        *self *= rhs;
    }
    fn from_ring(s: &Scalar) -> Self {
        s.to_float()
    }
    fn phase_power(m: u8) -> Self {
        Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4 * m as f64)
    }
    fn inv_sqrt2() -> Self {
        Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    }
    fn negate(&mut self) {
        *self = -*self;
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl TensorElem for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_assign(&mut self, rhs: &Self) {
        *self *= rhs;
    }
    fn from_ring(s: &Scalar) -> Self {
        s.clone()
    }
    fn phase_power(m: u8) -> Self {
        Scalar::from_phase(crate::phase::Phase::new(m as i64))
    }
    fn inv_sqrt2() -> Self {
        Scalar::one_over_sqrt2_pow(1)
    }
    fn negate(&mut self) {
        *self = -self.clone();
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

/// One edge instance prepared for contraction: positions into the vertex
/// list plus the net Hadamard parity after absorbing emission bases.
struct PreparedEdge {
    u: usize,
    v: usize,
    hadamard: bool,
}

struct Prepared {
    /// phases of all vertices, in contraction order: boundaries first
    /// (inputs then outputs), then internal vertices ascending
    phases: Vec<u8>,
    n_bound: usize,
    n_intern: usize,
    edges: Vec<PreparedEdge>,
}

fn prepare(
    d: &ZXDiagram,
    max_spiders: usize,
    max_boundaries: usize,
) -> Result<Prepared, TensorError> {
    let n_bound = d.inputs().len() + d.outputs().len();
    let mut order: Vec<V> = Vec::new();
    order.extend_from_slice(d.inputs());
    order.extend_from_slice(d.outputs());
    let mut internal: Vec<V> = Vec::new();
    for v in d.vertices() {
        if d.kind(v).is_boundary() {
            if !d.inputs().contains(&v) && !d.outputs().contains(&v) {
                return Err(TensorError::DanglingBoundary(v));
            }
        } else {
            internal.push(v);
        }
    }
    if internal.len() > max_spiders {
        return Err(TensorError::TooManySpiders {
            count: internal.len(),
            cap: max_spiders,
        });
    }
    if n_bound > max_boundaries {
        return Err(TensorError::TooManyBoundaries {
            count: n_bound,
            cap: max_boundaries,
        });
    }
    order.extend_from_slice(&internal);
    let pos: std::collections::BTreeMap<V, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // X spiders emit in the Hadamard basis on every leg; H-boxes emit
    // computationally on one leg and in the Hadamard basis on the other.
    // Each edge absorbs its endpoints' emission bases into a single net
    // Hadamard parity.
    let mut hbox_leg: std::collections::BTreeMap<V, u32> = std::collections::BTreeMap::new();
    let mut next_emission = |d: &ZXDiagram, v: V| -> bool {
        match d.kind(v) {
            VKind::X => true,
            VKind::HBox => {
                let n = hbox_leg.entry(v).or_insert(0);
                let x_basis = *n == 1;
                *n += 1;
                x_basis
            }
            _ => false,
        }
    };

    let mut edges = Vec::new();
    for (u, v, kind, mult) in d.edges() {
        for _ in 0..mult {
            let eu = next_emission(d, u);
            let ev = next_emission(d, v);
            let hadamard = eu ^ ev ^ (kind == EKind::Hadamard);
            edges.push(PreparedEdge {
                u: pos[&u],
                v: pos[&v],
                hadamard,
            });
        }
    }

    let phases = order.iter().map(|&v| d.phase(v).m()).collect();
    Ok(Prepared {
        phases,
        n_bound,
        n_intern: internal.len(),
        edges,
    })
}

fn contract<T: TensorElem>(d: &ZXDiagram, p: &Prepared) -> Vec<T> {
    let global = T::from_ring(d.scalar());
    let inv_rt2 = T::inv_sqrt2();
    let size = 1usize << p.n_bound;
    let mut out = Vec::with_capacity(size);
    for index in 0..size {
        let mut acc = T::zero();
        if !global.is_zero() {
            for assign in 0..(1usize << p.n_intern) {
                // branch bit of the vertex at position i
                let bit = |i: usize| -> bool {
                    if i < p.n_bound {
                        (index >> (p.n_bound - 1 - i)) & 1 == 1
                    } else {
                        (assign >> (i - p.n_bound)) & 1 == 1
                    }
                };
                let mut term = T::one();
                let mut ok = true;
                let mut rt2_count = 0usize;
                let mut sign = false;
                for e in &p.edges {
                    let (a, b) = (bit(e.u), bit(e.v));
                    if e.hadamard {
                        rt2_count += 1;
                        sign ^= a & b;
                    } else if a != b {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let mut m_total: u8 = 0;
                for (i, &m) in p.phases.iter().enumerate() {
                    if bit(i) {
                        m_total = (m_total + m) % 8;
                    }
                }
                term.mul_assign(&T::phase_power(m_total));
                if sign {
                    term.negate();
                }
                for _ in 0..rt2_count {
                    term.mul_assign(&inv_rt2);
                }
                acc.add_assign(&term);
            }
            acc.mul_assign(&global);
        }
        out.push(acc);
    }
    out
}

/// Dense tensor over `Complex<f64>`, with default size caps.
pub fn tensor_c64(d: &ZXDiagram) -> Result<Vec<Complex<f64>>, TensorError> {
    tensor_c64_capped(d, DEFAULT_MAX_SPIDERS, DEFAULT_MAX_BOUNDARIES)
}

pub fn tensor_c64_capped(
    d: &ZXDiagram,
    max_spiders: usize,
    max_boundaries: usize,
) -> Result<Vec<Complex<f64>>, TensorError> {
    let p = prepare(d, max_spiders, max_boundaries)?;
    Ok(contract(d, &p))
}

/// Dense tensor evaluated exactly in the scalar ring. Slower; intended
/// for certification tests on very small diagrams.
pub fn tensor_exact(d: &ZXDiagram) -> Result<Vec<Scalar>, TensorError> {
    let p = prepare(d, DEFAULT_MAX_SPIDERS, DEFAULT_MAX_BOUNDARIES)?;
    Ok(contract(d, &p))
}

/// The value of a closed (scalar) diagram.
pub fn scalar_value_c64(d: &ZXDiagram) -> Result<Complex<f64>, TensorError> {
    debug_assert!(d.inputs().is_empty() && d.outputs().is_empty());
    Ok(tensor_c64(d)?[0])
}
