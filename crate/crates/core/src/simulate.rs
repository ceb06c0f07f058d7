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

//! User-facing strong simulation: exact amplitudes, exact marginals via
//! the doubling construction, and full samples drawn qubit by qubit.
//!
//! All diagram-level arithmetic is exact; floating point appears only in
//! the random draw of each sampled bit, where the conditional is the
//! ratio of two exact joints.

use num::BigUint;
use std::collections::BTreeMap;
use std::time::Instant;

use crate::circuit::{CczMode, Circuit};
use crate::decompose::{
    decompose, naive_terms, DecompCfg, DecompError, Decomposition, DecompositionReport,
};
use crate::graph::GraphError;
use crate::scalar::Scalar;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, Default)]
pub struct SimCfg {
    pub ccz_mode: CczMode,
    pub decomp: DecompCfg,
}

#[derive(Debug, Clone)]
pub enum SimError {
    Width(GraphError),
    Decomp(DecompError),
    /// A conditional probability fell outside [−ε, 1+ε]: a rewrite bug.
    Inconsistent(String),
}

impl std::fmt::Display for SimError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimError::Width(e) => write!(f, "{}", e),
            SimError::Decomp(e) => write!(f, "{}", e),
            SimError::Inconsistent(m) => write!(f, "internal inconsistency: {}", m),
        }
    }
}

impl std::error::Error for SimError {}

impl From<GraphError> for SimError {
    fn from(e: GraphError) -> SimError {
        SimError::Width(e)
    }
}

impl From<DecompError> for SimError {
    fn from(e: DecompError) -> SimError {
        SimError::Decomp(e)
    }
}

/// Exact ⟨out|U|in⟩.
pub fn amplitude(
    c: &Circuit,
    in_bits: &[bool],
    out_bits: &[bool],
    cfg: &SimCfg,
) -> Result<Decomposition, SimError> {
    let mut g = c.to_zx(cfg.ccz_mode);
    g.plug_inputs(in_bits)?;
    g.plug_outputs(out_bits)?;
    Ok(decompose(&g, &cfg.decomp)?)
}

/// Exact P(fixed outputs) on input |0…0⟩, via the doubled diagram.
pub fn marginal(
    c: &Circuit,
    fixed: &BTreeMap<usize, bool>,
    cfg: &SimCfg,
) -> Result<Decomposition, SimError> {
    let mut g = c.to_zx(cfg.ccz_mode);
    g.plug_inputs(&vec![false; c.n_qubits()])?;
    let doubled = g.double(fixed)?;
    Ok(decompose(&doubled, &cfg.decomp)?)
}

/// One full sample: the output bitstring, its exact joint probability,
/// and the per-qubit conditionals that produced it.
#[derive(Clone, Debug)]
pub struct SampleResult {
    pub bits: Vec<bool>,
    /// Exact joint probability of `bits` (real: passes `as_real`).
    pub probability: Scalar,
    /// Conditional probability of each drawn bit, as floats.
    pub conditionals: Vec<f64>,
    /// Post-simplification T-count of each step's doubled diagram; shows
    /// how much of the doubling cancels.
    pub per_step_t: Vec<u32>,
    pub report: DecompositionReport,
    pub timed_out: bool,
}

const COND_EPS: f64 = 1e-9;

/// Draw a full sample by chaining exact marginals, qubit 0 first.
/// Deterministic given the seed (ChaCha8 keyed by `seed`).
pub fn sample(c: &Circuit, seed: u64, cfg: &SimCfg) -> Result<SampleResult, SimError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = c.n_qubits();
    let mut fixed: BTreeMap<usize, bool> = BTreeMap::new();
    let mut prev_joint = Scalar::one();
    let mut agg = Aggregate::new(c);
    let mut conditionals = Vec::with_capacity(n);

    for q in 0..n {
        fixed.insert(q, false);
        let dec = marginal(c, &fixed, cfg)?;
        agg.push(&dec.report);
        if dec.timed_out {
            return Ok(agg.partial(fixed_bits(&fixed, q), conditionals, start));
        }
        let joint0 = dec.scalar;
        let joint1 = &prev_joint - &joint0;

        #[cfg(debug_assertions)]
        {
            let mut f1 = fixed.clone();
            f1.insert(q, true);
            let direct = marginal(c, &f1, cfg)?;
            assert!(
                direct.timed_out || direct.scalar == joint1,
                "marginal completeness violated at qubit {}",
                q
            );
        }

        let f0 = real_part(&joint0, q)?;
        let fp = real_part(&prev_joint, q)?;
        let cond = if fp == 0.0 { 0.0 } else { f0 / fp };
        if !(-COND_EPS..=1.0 + COND_EPS).contains(&cond) {
            return Err(SimError::Inconsistent(format!(
                "conditional {} out of range at qubit {}",
                cond, q
            )));
        }
        let cond = cond.clamp(0.0, 1.0);
        let bit = rng.gen::<f64>() >= cond;
        fixed.insert(q, bit);
        conditionals.push(if bit { 1.0 - cond } else { cond });
        prev_joint = if bit { joint1 } else { joint0 };
    }

    Ok(SampleResult {
        bits: fixed_bits(&fixed, n),
        probability: prev_joint,
        conditionals,
        per_step_t: agg.per_step_t.clone(),
        report: agg.finish(start),
        timed_out: false,
    })
}

/// Fast path for circuits known to have a deterministic output: every
/// joint distribution is then the product of single-qubit marginals, so
/// each bit is fixed independently by P(q_i = 0).
pub fn sample_deterministic(c: &Circuit, cfg: &SimCfg) -> Result<SampleResult, SimError> {
    let start = Instant::now();
    let n = c.n_qubits();
    let mut bits = Vec::with_capacity(n);
    let mut conditionals = Vec::with_capacity(n);
    let mut probability = Scalar::one();
    let mut agg = Aggregate::new(c);

    for q in 0..n {
        let mut fixed = BTreeMap::new();
        fixed.insert(q, false);
        let dec = marginal(c, &fixed, cfg)?;
        agg.push(&dec.report);
        if dec.timed_out {
            return Ok(agg.partial(bits, conditionals, start));
        }
        let p0 = dec.scalar;
        let bit = !p0.is_one();
        let p = if bit { Scalar::one() - p0 } else { p0 };
        conditionals.push(real_part(&p, q)?);
        probability *= &p;
        bits.push(bit);
    }

    Ok(SampleResult {
        bits,
        probability,
        conditionals,
        per_step_t: agg.per_step_t.clone(),
        report: agg.finish(start),
        timed_out: false,
    })
}

fn real_part(s: &Scalar, q: usize) -> Result<f64, SimError> {
    match s.as_real() {
        Some(_) => Ok(s.to_float().re),
        None => Err(SimError::Inconsistent(format!(
            "probability at qubit {} is not real: {}",
            q, s
        ))),
    }
}

fn fixed_bits(fixed: &BTreeMap<usize, bool>, upto: usize) -> Vec<bool> {
    (0..upto).map(|q| fixed[&q]).collect()
}

/// Folds the per-step decomposition reports of one sample into a single
/// report. `naive_terms` is the reference denominator for a full
/// sample: n_qubits · 7^{⌈2t/6⌉} for the circuit's T-count t.
struct Aggregate {
    leaf_terms: u64,
    max_live: u64,
    initial_t: u32,
    pre_simp_t: u32,
    naive: BigUint,
    hist: BTreeMap<u32, BTreeMap<u32, u64>>,
    per_step_t: Vec<u32>,
}

impl Aggregate {
    fn new(c: &Circuit) -> Aggregate {
        let t = c.t_count(CczMode::SevenT) as u64;
        Aggregate {
            leaf_terms: 0,
            max_live: 0,
            initial_t: 0,
            pre_simp_t: 0,
            naive: BigUint::from(c.n_qubits()) * naive_terms(2 * t),
            hist: BTreeMap::new(),
            per_step_t: Vec::new(),
        }
    }

    fn push(&mut self, r: &DecompositionReport) {
        self.leaf_terms += r.leaf_terms;
        self.max_live = self.max_live.max(r.max_live_diagrams);
        self.initial_t = self.initial_t.max(r.initial_t);
        self.pre_simp_t = self.pre_simp_t.max(r.pre_simp_t);
        self.per_step_t.push(r.initial_t);
        for (d, row) in &r.depth_t_histogram {
            let dst = self.hist.entry(*d).or_default();
            for (t, n) in row {
                *dst.entry(*t).or_default() += n;
            }
        }
    }

    fn finish(self, start: Instant) -> DecompositionReport {
        DecompositionReport {
            leaf_terms: self.leaf_terms,
            max_live_diagrams: self.max_live,
            initial_t: self.initial_t,
            pre_simp_t: self.pre_simp_t,
            naive_terms: self.naive,
            wall_time_ms: start.elapsed().as_millis() as u64,
            depth_t_histogram: self.hist,
        }
    }

    fn partial(self, bits: Vec<bool>, conditionals: Vec<f64>, start: Instant) -> SampleResult {
        SampleResult {
            bits,
            probability: Scalar::zero(),
            conditionals,
            per_step_t: self.per_step_t.clone(),
            report: self.finish(start),
            timed_out: true,
        }
    }
}
