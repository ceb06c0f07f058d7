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

//! Exact strong simulation of Clifford+T quantum circuits.
//!
//! The engine translates circuits into ZX-diagrams, simplifies them with
//! a graph-rewriting strategy built on local complementation and
//! pivoting, and evaluates the remaining non-Clifford content by
//! recursive stabiliser decomposition. All arithmetic happens in the
//! ring ℤ[1/2, e^{iπ/4}], so amplitudes, marginal probabilities and
//! samples are exact.

pub mod benchgen;
pub mod circuit;
pub mod decompose;
pub mod dense;
pub mod graph;
pub mod phase;
pub mod scalar;
pub mod simplify;
pub mod simulate;
pub mod tensor;

pub use graph::{EKind, PlugValue, VKind, ZXDiagram, V};
pub use phase::Phase;
pub use scalar::Scalar;
