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

//! Command-line front end: circuit generators, exact amplitude /
//! marginal / sample runs emitting JSON run records, and a benchmark
//! harness emitting CSV rows.
//!
//! Exit codes: 0 success, 1 input error, 2 usage, 3 timeout,
//! 4 internal inconsistency.

use clap::{Args, Parser, Subcommand};
use num::BigUint;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use zxstab::benchgen::{gen_hidden_shift, gen_pauli_exp, HiddenShiftSpec, PauliExpSpec};
use zxstab::circuit::{CczMode, Circuit};
use zxstab::decompose::{run_with_threads, DecompCfg};
use zxstab::scalar::format_real;
use zxstab::simulate::{amplitude, marginal, sample, sample_deterministic, SimCfg, SimError};

#[derive(Parser)]
#[command(name = "zxstab", version, about = "Exact Clifford+T strong simulation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate benchmark circuits (QASM file plus JSON sidecar)
    Gen {
        #[command(subcommand)]
        family: GenCmd,
    },
    /// Exact amplitude ⟨out|U|in⟩ of a circuit
    Amplitude {
        #[arg(long)]
        circuit: PathBuf,
        /// Input bitstring, e.g. 0000
        #[arg(long)]
        in_bits: String,
        /// Output bitstring
        #[arg(long)]
        out_bits: String,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Exact marginal probability of fixed output bits on input |0…0⟩
    Marginal {
        #[arg(long)]
        circuit: PathBuf,
        /// Output pattern over {0,1,*}, e.g. 01**0
        #[arg(long)]
        fixed: String,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Draw one full sample from the output distribution
    Sample {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fix each bit from its single-qubit marginal (valid when the
        /// circuit output is deterministic, e.g. hidden shift)
        #[arg(long)]
        assume_deterministic: bool,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Run a benchmark family, one CSV row per instance
    Bench {
        /// pauli | hidden-shift
        #[arg(long)]
        family: String,
        #[arg(long)]
        qubits: usize,
        /// T-counts (pauli) or CCZ counts (hidden-shift), comma separated
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        per_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        run: RunOpts,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Random circuit of exponentiated Paulis
    Pauli {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        tcount: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path prefix; writes <out>.qasm and <out>.json
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        w_min: usize,
        #[arg(long, default_value_t = 4)]
        w_max: usize,
    },
    /// Hidden-shift circuit over {H, Z, CZ, CCZ}
    HiddenShift {
        #[arg(long)]
        qubits: usize,
        /// Total CCZ gates (even; T-count is 7× this)
        #[arg(long)]
        ccz: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// CZ terms in the oracle quadratic part (default half·(half−1)/4)
        #[arg(long)]
        cz: Option<usize>,
        /// Z terms in the oracle linear part (default half/2)
        #[arg(long)]
        z: Option<usize>,
    },
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Cooperative timeout, checked between decomposition branches
    #[arg(long, default_value_t = 300)]
    timeout_secs: u64,
    /// Worker threads for the decomposition fan-out (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Breadth-first fan-out depth before parallel evaluation
    #[arg(long, default_value_t = 3)]
    depth: u32,
    /// CCZ encoding: seven-t | four-t
    #[arg(long, default_value = "seven-t")]
    ccz_mode: CczMode,
}

impl RunOpts {
    /// A fresh config with the deadline starting now.
    fn sim_cfg(&self) -> SimCfg {
        SimCfg {
            ccz_mode: self.ccz_mode,
            decomp: DecompCfg {
                parallel_depth: self.depth,
                sequential: false,
                deadline: Some(Instant::now() + Duration::from_secs(self.timeout_secs)),
            },
        }
    }

    /// Invocation echo for run records. Execution knobs that cannot
    /// affect results (worker threads) are left out so records are
    /// byte-reproducible across machines and thread counts.
    fn spec_echo(&self, extra: serde_json::Value) -> serde_json::Value {
        serde_json::json!({
            "timeout_secs": self.timeout_secs,
            "depth": self.depth,
            "ccz_mode": format!("{:?}", self.ccz_mode),
            "args": extra,
        })
    }
}

/// One simulation run, as printed on standard output.
#[derive(Serialize)]
struct RunRecord {
    schema_version: u32,
    command: String,
    spec: serde_json::Value,
    outcome: String,
    bits: String,
    /// Exact scalar tuple "(k; a, b, c, d)"; amplitude runs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitude: Option<String>,
    /// Exact probability in the form (x + y√2)/2^k.
    probability: String,
    probability_float: f64,
    leaf_terms: u64,
    naive_terms: String,
    reduction_factor: String,
    wall_time_ms: u64,
}

const SCHEMA_VERSION: u32 = 1;

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    };
    std::process::exit(code);
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Inconsistency(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Inconsistency(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{}", m),
            CliError::Inconsistency(m) => write!(f, "{}", m),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> CliError {
        match e {
            SimError::Inconsistent(m) => CliError::Inconsistency(m),
            SimError::Decomp(zxstab::decompose::DecompError::Inconsistency(m)) => {
                CliError::Inconsistency(m)
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Gen { family } => {
            cmd_gen(family)?;
            Ok(0)
        }
        Cmd::Amplitude {
            circuit,
            in_bits,
            out_bits,
            run,
        } => cmd_amplitude(&circuit, &in_bits, &out_bits, &run),
        Cmd::Marginal {
            circuit,
            fixed,
            run,
        } => cmd_marginal(&circuit, &fixed, &run),
        Cmd::Sample {
            circuit,
            seed,
            assume_deterministic,
            run,
        } => cmd_sample(&circuit, seed, assume_deterministic, &run),
        Cmd::Bench {
            family,
            qubits,
            sizes,
            per_size,
            seed,
            run,
        } => cmd_bench(&family, qubits, &sizes, per_size, seed, &run),
    }
}

fn cmd_gen(family: GenCmd) -> Result<(), CliError> {
    let (out, qasm, sidecar) = match family {
        GenCmd::Pauli {
            qubits,
            tcount,
            seed,
            out,
            w_min,
            w_max,
        } => {
            let spec = PauliExpSpec {
                n_qubits: qubits,
                count: tcount,
                w_min,
                w_max,
                seed,
            };
            let c = gen_pauli_exp(&spec).map_err(|e| CliError::Input(e.to_string()))?;
            let sidecar = serde_json::json!({
                "family": "pauli",
                "spec": spec,
                "t_count": c.t_count(CczMode::SevenT),
            });
            (out, c.emit(), sidecar)
        }
        GenCmd::HiddenShift {
            qubits,
            ccz,
            seed,
            out,
            cz,
            z,
        } => {
            let mut spec = HiddenShiftSpec::new(qubits, ccz, seed);
            if let Some(cz) = cz {
                spec.n_cz = cz;
            }
            if let Some(z) = z {
                spec.n_z = z;
            }
            let (c, shift) = gen_hidden_shift(&spec).map_err(|e| CliError::Input(e.to_string()))?;
            let sidecar = serde_json::json!({
                "family": "hidden-shift",
                "spec": spec,
                "shift": bits_to_string(&shift),
                "t_count": c.t_count(CczMode::SevenT),
            });
            (out, c.emit(), sidecar)
        }
    };
    let qasm_path = out.with_extension("qasm");
    let json_path = out.with_extension("json");
    std::fs::write(&qasm_path, qasm)
        .map_err(|e| CliError::Input(format!("{}: {}", qasm_path.display(), e)))?;
    std::fs::write(
        &json_path,
        serde_json::to_string_pretty(&sidecar).unwrap() + "\n",
    )
    .map_err(|e| CliError::Input(format!("{}: {}", json_path.display(), e)))?;
    Ok(())
}

fn load_circuit(path: &PathBuf) -> Result<Circuit, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))?;
    Circuit::parse(&text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))
}

fn parse_bits(s: &str, n: usize, what: &str) -> Result<Vec<bool>, CliError> {
    if s.len() != n {
        return Err(CliError::Input(format!(
            "{} must have {} bits, got {}",
            what,
            n,
            s.len()
        )));
    }
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CliError::Input(format!("bad bit '{}' in {}", other, what))),
        })
        .collect()
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// naive/leaf as an exact rational rendered with three decimals.
fn reduction_factor(naive: &BigUint, leaf: u64) -> String {
    if leaf == 0 {
        return "0".to_string();
    }
    let scaled = naive * BigUint::from(1000u32) / BigUint::from(leaf);
    let digits = scaled.to_string();
    if digits.len() <= 3 {
        format!("0.{:0>3}", digits)
    } else {
        let (int, frac) = digits.split_at(digits.len() - 3);
        format!("{}.{}", int, frac)
    }
}

fn emit_record(record: &RunRecord) -> i32 {
    println!("{}", serde_json::to_string(record).unwrap());
    if record.outcome == "timeout" {
        3
    } else {
        0
    }
}

fn cmd_amplitude(
    path: &PathBuf,
    in_bits: &str,
    out_bits: &str,
    run: &RunOpts,
) -> Result<i32, CliError> {
    let c = load_circuit(path)?;
    let inb = parse_bits(in_bits, c.n_qubits(), "--in-bits")?;
    let outb = parse_bits(out_bits, c.n_qubits(), "--out-bits")?;
    let cfg = run.sim_cfg();
    let start = Instant::now();
    let dec = run_with_threads(run.threads, || amplitude(&c, &inb, &outb, &cfg))?;
    let prob = &dec.scalar * &dec.scalar.conj();
    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        command: "amplitude".into(),
        spec: run.spec_echo(serde_json::json!({
            "circuit": path.display().to_string(),
            "in_bits": in_bits,
            "out_bits": out_bits,
        })),
        outcome: if dec.timed_out { "timeout" } else { "success" }.into(),
        bits: out_bits.to_string(),
        amplitude: Some(dec.scalar.to_string()),
        probability: format_real(&prob).unwrap_or_default(),
        probability_float: prob.to_float().re,
        leaf_terms: dec.report.leaf_terms,
        naive_terms: dec.report.naive_terms.to_string(),
        reduction_factor: reduction_factor(&dec.report.naive_terms, dec.report.leaf_terms),
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok(emit_record(&record))
}

fn cmd_marginal(path: &PathBuf, fixed: &str, run: &RunOpts) -> Result<i32, CliError> {
    let c = load_circuit(path)?;
    if fixed.len() != c.n_qubits() {
        return Err(CliError::Input(format!(
            "--fixed must have {} symbols, got {}",
            c.n_qubits(),
            fixed.len()
        )));
    }
    let mut map = BTreeMap::new();
    for (q, ch) in fixed.chars().enumerate() {
        match ch {
            '0' => {
                map.insert(q, false);
            }
            '1' => {
                map.insert(q, true);
            }
            '*' => {}
            other => {
                return Err(CliError::Input(format!(
                    "bad symbol '{}' in --fixed",
                    other
                )));
            }
        }
    }
    let cfg = run.sim_cfg();
    let start = Instant::now();
    let dec = run_with_threads(run.threads, || marginal(&c, &map, &cfg))?;
    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        command: "marginal".into(),
        spec: run.spec_echo(serde_json::json!({
            "circuit": path.display().to_string(),
            "fixed": fixed,
        })),
        outcome: if dec.timed_out { "timeout" } else { "success" }.into(),
        bits: fixed.to_string(),
        amplitude: None,
        probability: format_real(&dec.scalar).ok_or_else(|| {
            CliError::Inconsistency(format!("marginal is not real: {}", dec.scalar))
        })?,
        probability_float: dec.scalar.to_float().re,
        leaf_terms: dec.report.leaf_terms,
        naive_terms: dec.report.naive_terms.to_string(),
        reduction_factor: reduction_factor(&dec.report.naive_terms, dec.report.leaf_terms),
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok(emit_record(&record))
}

fn cmd_sample(
    path: &PathBuf,
    seed: u64,
    assume_deterministic: bool,
    run: &RunOpts,
) -> Result<i32, CliError> {
    let c = load_circuit(path)?;
    let cfg = run.sim_cfg();
    let start = Instant::now();
    let res = run_with_threads(run.threads, || {
        if assume_deterministic {
            sample_deterministic(&c, &cfg)
        } else {
            sample(&c, seed, &cfg)
        }
    })?;
    let probability = if res.timed_out {
        String::new()
    } else {
        format_real(&res.probability).ok_or_else(|| {
            CliError::Inconsistency(format!("probability is not real: {}", res.probability))
        })?
    };
    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        command: "sample".into(),
        spec: run.spec_echo(serde_json::json!({
            "circuit": path.display().to_string(),
            "seed": seed,
            "assume_deterministic": assume_deterministic,
        })),
        outcome: if res.timed_out { "timeout" } else { "success" }.into(),
        bits: bits_to_string(&res.bits),
        amplitude: None,
        probability,
        probability_float: if res.timed_out {
            0.0
        } else {
            res.probability.to_float().re
        },
        leaf_terms: res.report.leaf_terms,
        naive_terms: res.report.naive_terms.to_string(),
        reduction_factor: reduction_factor(&res.report.naive_terms, res.report.leaf_terms),
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok(emit_record(&record))
}

const CSV_HEADER: &str = "schema,family,qubits,size,seed,outcome,bits,probability,leaf_terms,naive_terms,reduction_factor,initial_t,wall_time_ms";

fn cmd_bench(
    family: &str,
    qubits: usize,
    sizes: &[usize],
    per_size: usize,
    seed_base: u64,
    run: &RunOpts,
) -> Result<i32, CliError> {
    println!("{}", CSV_HEADER);
    for &size in sizes {
        for i in 0..per_size {
            let seed = seed_base + (size as u64) * 1009 + i as u64;
            let (circuit, deterministic, expected_shift) = match family {
                "pauli" => {
                    let spec = PauliExpSpec::new(qubits, size, seed);
                    let c = gen_pauli_exp(&spec).map_err(|e| CliError::Input(e.to_string()))?;
                    (c, false, None)
                }
                "hidden-shift" => {
                    let spec = HiddenShiftSpec::new(qubits, size, seed);
                    let (c, shift) =
                        gen_hidden_shift(&spec).map_err(|e| CliError::Input(e.to_string()))?;
                    (c, true, Some(shift))
                }
                other => {
                    return Err(CliError::Input(format!(
                        "unknown family '{}', expected pauli or hidden-shift",
                        other
                    )));
                }
            };
            let cfg = run.sim_cfg(); // per-instance deadline
            let start = Instant::now();
            let res = run_with_threads(run.threads, || {
                if deterministic {
                    sample_deterministic(&circuit, &cfg)
                } else {
                    sample(&circuit, seed, &cfg)
                }
            })?;
            let outcome = if res.timed_out {
                "timeout"
            } else if let Some(shift) = &expected_shift {
                if &res.bits == shift && res.probability.is_one() {
                    "success"
                } else {
                    "shift-mismatch"
                }
            } else {
                "success"
            };
            let probability = if res.timed_out {
                String::new()
            } else {
                format_real(&res.probability).unwrap_or_default()
            };
            println!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                SCHEMA_VERSION,
                family,
                qubits,
                size,
                seed,
                outcome,
                bits_to_string(&res.bits),
                probability,
                res.report.leaf_terms,
                res.report.naive_terms,
                reduction_factor(&res.report.naive_terms, res.report.leaf_terms),
                res.report.initial_t,
                start.elapsed().as_millis(),
            );
        }
    }
    Ok(0)
}
