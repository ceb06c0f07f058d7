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

//! Circuit representation, a QASM-subset parser/emitter, and the
//! gate-to-ZX translation.
//!
//! The accepted text format is the OpenQASM 2.0 subset
//!
//! ```text
//! OPENQASM 2.0;              // optional
//! include "qelib1.inc";      // optional, ignored
//! qreg q[n];
//! h q[0]; x q[1]; z q[2]; s q[0]; sdg q[0]; t q[0]; tdg q[0];
//! cx q[0],q[1]; cz q[0],q[1]; ccz q[0],q[1],q[2];
//! rz(3*pi/4) q[0];
//! ```
//!
//! `rz(θ)` denotes the phase gate diag(1, e^{iθ}) and θ must be a
//! symbolic multiple of π/4 (`0`, `pi`, `pi/2`, `-pi/4`, `3*pi/4`, ...);
//! floating-point angles are rejected to preserve exactness. `//`
//! comments run to the end of the line.

use crate::graph::{EKind, VKind, ZXDiagram, V};
use crate::phase::Phase;
use std::fmt;
use std::fmt::Write as _;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    CNOT(usize, usize),
    CZ(usize, usize),
    CCZ(usize, usize, usize),
    /// diag(1, e^{i·m·π/4})
    ZPhase(usize, Phase),
    /// The Hadamard conjugate of `ZPhase`. No concrete syntax; emitted
    /// as an h/rz/h sandwich.
    XPhase(usize, Phase),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::ZPhase(q, _)
            | Gate::XPhase(q, _) => vec![q],
            Gate::CNOT(a, b) | Gate::CZ(a, b) => vec![a, b],
            Gate::CCZ(a, b, c) => vec![a, b, c],
        }
    }

    /// Number of non-Clifford spiders this gate contributes under the
    /// given CCZ encoding, before any simplification.
    pub fn t_weight(&self, mode: CczMode) -> usize {
        match *self {
            Gate::T(_) | Gate::Tdg(_) => 1,
            Gate::ZPhase(_, p) | Gate::XPhase(_, p) => {
                if p.is_odd() {
                    1
                } else {
                    0
                }
            }
            Gate::CCZ(..) => match mode {
                CczMode::SevenT => 7,
                CczMode::FourT => 4,
            },
            _ => 0,
        }
    }
}

/// Which ZX encoding to use for CCZ gates.
///
/// `SevenT` (the default) expands a CCZ into seven π/4-phase spiders
/// arranged as wire phases and parity gadgets; it simplifies much better
/// under the rewrite strategy. `FourT` uses a postselected-ancilla form
/// with only four non-Clifford spiders but worse rewrite behaviour.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum CczMode {
    #[default]
    SevenT,
    FourT,
}

impl std::str::FromStr for CczMode {
    type Err = String;
    fn from_str(s: &str) -> Result<CczMode, String> {
        match s.to_ascii_lowercase().as_str() {
            "sevent" | "seven-t" | "7t" => Ok(CczMode::SevenT),
            "fourt" | "four-t" | "4t" => Ok(CczMode::FourT),
            other => Err(format!("unknown ccz mode '{}'", other)),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, g: Gate) {
        let qs = g.qubits();
        assert!(
            qs.iter().all(|&q| q < self.n_qubits),
            "gate operand out of range"
        );
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert!(sorted.len() == qs.len(), "gate operands must be distinct");
        self.gates.push(g);
    }

    /// Total non-Clifford spider count the ZX translation will emit.
    pub fn t_count(&self, mode: CczMode) -> usize {
        self.gates.iter().map(|g| g.t_weight(mode)).sum()
    }

    // ------------------------------------------------------------------
    // text format
    // ------------------------------------------------------------------

    pub fn parse(text: &str) -> Result<Circuit, ParseError> {
        Parser::new(text).parse()
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\n");
        let _ = writeln!(out, "qreg q[{}];", self.n_qubits);
        for g in &self.gates {
            match *g {
                Gate::H(q) => {
                    let _ = writeln!(out, "h q[{}];", q);
                }
                Gate::X(q) => {
                    let _ = writeln!(out, "x q[{}];", q);
                }
                Gate::Z(q) => {
                    let _ = writeln!(out, "z q[{}];", q);
                }
                Gate::S(q) => {
                    let _ = writeln!(out, "s q[{}];", q);
                }
                Gate::Sdg(q) => {
                    let _ = writeln!(out, "sdg q[{}];", q);
                }
                Gate::T(q) => {
                    let _ = writeln!(out, "t q[{}];", q);
                }
                Gate::Tdg(q) => {
                    let _ = writeln!(out, "tdg q[{}];", q);
                }
                Gate::CNOT(a, b) => {
                    let _ = writeln!(out, "cx q[{}],q[{}];", a, b);
                }
                Gate::CZ(a, b) => {
                    let _ = writeln!(out, "cz q[{}],q[{}];", a, b);
                }
                Gate::CCZ(a, b, c) => {
                    let _ = writeln!(out, "ccz q[{}],q[{}],q[{}];", a, b, c);
                }
                Gate::ZPhase(q, p) => {
                    let _ = writeln!(out, "rz({}) q[{}];", p, q);
                }
                Gate::XPhase(q, p) => {
                    let _ = writeln!(out, "h q[{}];", q);
                    let _ = writeln!(out, "rz({}) q[{}];", p, q);
                    let _ = writeln!(out, "h q[{}];", q);
                }
            }
        }
        out
    }

    // ------------------------------------------------------------------
    // ZX translation
    // ------------------------------------------------------------------

    /// Translate the circuit into a ZX-diagram whose tensor equals the
    /// circuit unitary exactly, global scalar included.
    pub fn to_zx(&self, mode: CczMode) -> ZXDiagram {
        let mut g = ZXDiagram::new();
        struct Wire {
            last: V,
            pending_h: bool,
        }
        let mut wires: Vec<Wire> = (0..self.n_qubits)
            .map(|_| {
                let b = g.add_vertex(VKind::BoundaryIn, Phase::ZERO);
                Wire {
                    last: b,
                    pending_h: false,
                }
            })
            .collect();
        g.set_inputs(wires.iter().map(|w| w.last).collect());

        fn connect(g: &mut ZXDiagram, wire: &mut Wire, v: V) {
            let kind = if wire.pending_h {
                EKind::Hadamard
            } else {
                EKind::Simple
            };
            g.add_edge(wire.last, v, kind);
            wire.last = v;
            wire.pending_h = false;
        }

        let tap = |g: &mut ZXDiagram, wires: &mut Vec<Wire>, q: usize, kind, phase| {
            let v = g.add_vertex(kind, phase);
            connect(g, &mut wires[q], v);
            v
        };

        for gate in &self.gates {
            match *gate {
                Gate::H(q) => wires[q].pending_h ^= true,
                Gate::Z(q) => {
                    tap(&mut g, &mut wires, q, VKind::Z, Phase::PI);
                }
                Gate::S(q) => {
                    tap(&mut g, &mut wires, q, VKind::Z, Phase::HALF_PI);
                }
                Gate::Sdg(q) => {
                    tap(&mut g, &mut wires, q, VKind::Z, Phase::MINUS_HALF_PI);
                }
                Gate::T(q) => {
                    tap(&mut g, &mut wires, q, VKind::Z, Phase::T);
                }
                Gate::Tdg(q) => {
                    tap(&mut g, &mut wires, q, VKind::Z, Phase::MINUS_T);
                }
                Gate::ZPhase(q, p) => {
                    tap(&mut g, &mut wires, q, VKind::Z, p);
                }
                Gate::X(q) => {
                    tap(&mut g, &mut wires, q, VKind::X, Phase::PI);
                }
                Gate::XPhase(q, p) => {
                    tap(&mut g, &mut wires, q, VKind::X, p);
                }
                Gate::CNOT(c, t) => {
                    let zc = tap(&mut g, &mut wires, c, VKind::Z, Phase::ZERO);
                    let xt = tap(&mut g, &mut wires, t, VKind::X, Phase::ZERO);
                    g.add_edge(zc, xt, EKind::Simple);
                    g.scalar_mut().mul_sqrt2_pow(1);
                }
                Gate::CZ(a, b) => {
                    let za = tap(&mut g, &mut wires, a, VKind::Z, Phase::ZERO);
                    let zb = tap(&mut g, &mut wires, b, VKind::Z, Phase::ZERO);
                    g.add_edge(za, zb, EKind::Hadamard);
                    g.scalar_mut().mul_sqrt2_pow(1);
                }
                Gate::CCZ(a, b, c) => {
                    let ta = tap(&mut g, &mut wires, a, VKind::Z, Phase::ZERO);
                    let tb = tap(&mut g, &mut wires, b, VKind::Z, Phase::ZERO);
                    let tc = tap(&mut g, &mut wires, c, VKind::Z, Phase::ZERO);
                    match mode {
                        CczMode::SevenT => emit_ccz_seven_t(&mut g, ta, tb, tc),
                        CczMode::FourT => emit_ccz_four_t(&mut g, ta, tb, tc),
                    }
                }
            }
        }

        let mut outs = Vec::with_capacity(self.n_qubits);
        for wire in wires.iter_mut() {
            let b = g.add_vertex(VKind::BoundaryOut, Phase::ZERO);
            connect(&mut g, wire, b);
            outs.push(b);
        }
        g.set_outputs(outs);
        g
    }
}

/// Attach a phase gadget tapping `legs`, with the given phase on its top.
fn attach_gadget(g: &mut ZXDiagram, legs: &[V], top_phase: Phase) {
    let base = g.add_vertex(VKind::Z, Phase::ZERO);
    for &v in legs {
        g.add_edge(v, base, EKind::Hadamard);
    }
    let top = g.add_vertex(VKind::Z, top_phase);
    g.add_edge(base, top, EKind::Hadamard);
}

/// The seven-T CCZ encoding: T phases on the three wires, −π/4 gadgets
/// on each pair parity and a +π/4 gadget on the triple parity, with an
/// overall factor √2⁵.
fn emit_ccz_seven_t(g: &mut ZXDiagram, a: V, b: V, c: V) {
    g.add_to_phase(a, Phase::T);
    g.add_to_phase(b, Phase::T);
    g.add_to_phase(c, Phase::T);
    attach_gadget(g, &[a, b], Phase::MINUS_T);
    attach_gadget(g, &[a, c], Phase::MINUS_T);
    attach_gadget(g, &[b, c], Phase::MINUS_T);
    attach_gadget(g, &[a, b, c], Phase::T);
    g.scalar_mut().mul_sqrt2_pow(5);
}

/// The four-T CCZ encoding: an ancilla junction spider carrying −π/4,
/// coupled to the third wire, with +π/4 phase gadgets on the parities
/// (w⊕a), (w⊕b) and (w⊕a⊕b), plus Clifford dressing (an S phase on c
/// and CZ couplings a–c, b–c) and a global factor 8·ω⁻¹.
///
/// Reconstructed by exhaustive search over small gadget structures and
/// certified against the 8×8 CCZ matrix by the tensor oracle.
fn emit_ccz_four_t(g: &mut ZXDiagram, a: V, b: V, c: V) {
    g.add_to_phase(c, Phase::HALF_PI);
    g.add_edge(a, c, EKind::Hadamard);
    g.add_edge(b, c, EKind::Hadamard);
    let w = g.add_vertex(VKind::Z, Phase::MINUS_T);
    g.add_edge(w, c, EKind::Hadamard);
    attach_gadget(g, &[a, w], Phase::T);
    attach_gadget(g, &[b, w], Phase::T);
    attach_gadget(g, &[a, b, w], Phase::T);
    *g.scalar_mut() *= crate::scalar::Scalar::new(-3, 0, 0, 0, 1);
}

// ----------------------------------------------------------------------
// parser
// ----------------------------------------------------------------------

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser {
            text: text.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let ch = self.peek()?;
        self.pos += 1;
        if ch == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(ch)
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'/') if self.text.get(self.pos + 1) == Some(&b'/') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' {
                self.bump();
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected identifier");
        }
        Ok(String::from_utf8_lossy(&self.text[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.bump();
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer too large"))
    }

    fn expect(&mut self, ch: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.bump();
            Ok(())
        } else {
            self.err(format!(
                "expected '{}', found {}",
                ch as char,
                match self.peek() {
                    Some(c) => format!("'{}'", c as char),
                    None => "end of input".to_string(),
                }
            ))
        }
    }

    fn arg(&mut self, reg: &str, width: usize) -> Result<usize, ParseError> {
        let (line, col) = (self.line, self.col);
        let name = self.ident()?;
        if name != reg {
            return Err(ParseError {
                line,
                col,
                msg: format!("unknown register '{}'", name),
            });
        }
        self.expect(b'[')?;
        let idx = self.number()?;
        self.expect(b']')?;
        if idx >= width {
            return Err(ParseError {
                line,
                col,
                msg: format!("qubit index {} out of range (width {})", idx, width),
            });
        }
        Ok(idx)
    }

    /// Symbolic multiple of π/4, returned in π/4 units.
    fn angle(&mut self) -> Result<Phase, ParseError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == b')' {
                break;
            }
            if c.is_ascii_whitespace() {
                break;
            }
            self.bump();
        }
        let raw = std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .to_string();
        let bad = |msg: &str| ParseError {
            line,
            col,
            msg: format!("{} in angle '{}'", msg, raw),
        };
        let mut s = raw.as_str();
        let mut sign = 1i64;
        if let Some(rest) = s.strip_prefix('-') {
            sign = -1;
            s = rest;
        }
        if s == "0" {
            return Ok(Phase::ZERO);
        }
        let (coef, rest) = match s.split_once('*') {
            Some((c, rest)) => {
                let coef: i64 = c.parse().map_err(|_| bad("expected integer coefficient"))?;
                (coef, rest)
            }
            None => (1, s),
        };
        let (body, den) = match rest.split_once('/') {
            Some((body, d)) => {
                let den: i64 = d.parse().map_err(|_| bad("expected denominator"))?;
                (body, den)
            }
            None => (rest, 1),
        };
        if body != "pi" {
            return Err(bad("expected a symbolic multiple of pi/4"));
        }
        let m = match den {
            1 => coef * 4,
            2 => coef * 2,
            4 => coef,
            _ => return Err(bad("angle must be a multiple of pi/4")),
        };
        Ok(Phase::new(sign * m))
    }

    fn parse(mut self) -> Result<Circuit, ParseError> {
        self.skip_ws();

        // optional header
        {
            let save = (self.pos, self.line, self.col);
            if let Ok(word) = self.ident() {
                if word == "OPENQASM" {
                    let _ = self.ident();
                    self.expect(b';')?;
                } else {
                    (self.pos, self.line, self.col) = save;
                }
            }
        }
        // optional include, ignored
        {
            let save = (self.pos, self.line, self.col);
            if let Ok(word) = self.ident() {
                if word == "include" {
                    self.skip_ws();
                    self.expect(b'"')?;
                    while let Some(c) = self.peek() {
                        self.bump();
                        if c == b'"' {
                            break;
                        }
                    }
                    self.expect(b';')?;
                } else {
                    (self.pos, self.line, self.col) = save;
                }
            }
        }

        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let kw = self.ident()?;
        if kw != "qreg" {
            return Err(ParseError {
                line,
                col,
                msg: format!("expected 'qreg', found '{}'", kw),
            });
        }
        let reg = self.ident()?;
        self.expect(b'[')?;
        let width = self.number()?;
        self.expect(b']')?;
        self.expect(b';')?;

        let mut circuit = Circuit::new(width);
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
            let (line, col) = (self.line, self.col);
            let name = self.ident()?;
            let gate = match name.as_str() {
                "h" => Gate::H(self.arg(&reg, width)?),
                "x" => Gate::X(self.arg(&reg, width)?),
                "z" => Gate::Z(self.arg(&reg, width)?),
                "s" => Gate::S(self.arg(&reg, width)?),
                "sdg" => Gate::Sdg(self.arg(&reg, width)?),
                "t" => Gate::T(self.arg(&reg, width)?),
                "tdg" => Gate::Tdg(self.arg(&reg, width)?),
                "cx" => {
                    let a = self.arg(&reg, width)?;
                    self.expect(b',')?;
                    let b = self.arg(&reg, width)?;
                    if a == b {
                        return Err(ParseError {
                            line,
                            col,
                            msg: "cx operands must be distinct".into(),
                        });
                    }
                    Gate::CNOT(a, b)
                }
                "cz" => {
                    let a = self.arg(&reg, width)?;
                    self.expect(b',')?;
                    let b = self.arg(&reg, width)?;
                    if a == b {
                        return Err(ParseError {
                            line,
                            col,
                            msg: "cz operands must be distinct".into(),
                        });
                    }
                    Gate::CZ(a, b)
                }
                "ccz" => {
                    let a = self.arg(&reg, width)?;
                    self.expect(b',')?;
                    let b = self.arg(&reg, width)?;
                    self.expect(b',')?;
                    let c = self.arg(&reg, width)?;
                    if a == b || a == c || b == c {
                        return Err(ParseError {
                            line,
                            col,
                            msg: "ccz operands must be distinct".into(),
                        });
                    }
                    Gate::CCZ(a, b, c)
                }
                "rz" => {
                    self.expect(b'(')?;
                    let p = self.angle()?;
                    self.expect(b')')?;
                    Gate::ZPhase(self.arg(&reg, width)?, p)
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        msg: format!("unknown gate '{}'", other),
                    });
                }
            };
            self.expect(b';')?;
            // gates parsed as ZPhase(0) stay as written; push validates operands
            circuit.gates.push(gate);
        }
        Ok(circuit)
    }
}
