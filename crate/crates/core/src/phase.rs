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

//! Spider phases as integer multiples of π/4, stored mod 8.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// A phase angle `m·π/4` with `m` reduced mod 8.
///
/// Clifford phases have even `m`; T-like (non-Clifford) phases have odd `m`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Phase(u8);

impl Phase {
    pub const ZERO: Phase = Phase(0);
    pub const T: Phase = Phase(1);
    pub const HALF_PI: Phase = Phase(2);
    pub const PI: Phase = Phase(4);
    pub const MINUS_HALF_PI: Phase = Phase(6);
    pub const MINUS_T: Phase = Phase(7);

    pub fn new(m: i64) -> Phase {
        Phase(m.rem_euclid(8) as u8)
    }

    /// The integer `m` in `[0, 8)` such that the phase is `m·π/4`.
    pub fn m(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Even multiples of π/4, i.e. multiples of π/2.
    pub fn is_clifford(self) -> bool {
        self.0 % 2 == 0
    }

    /// Odd multiples of π/4 (non-Clifford).
    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    /// 0 or π.
    pub fn is_pauli(self) -> bool {
        self.0 % 4 == 0
    }

    /// ±π/2.
    pub fn is_proper_clifford(self) -> bool {
        self.0 == 2 || self.0 == 6
    }
}

impl From<i64> for Phase {
    fn from(m: i64) -> Phase {
        Phase::new(m)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 8)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase((8 + self.0 - rhs.0) % 8)
    }
}

impl SubAssign for Phase {
    fn sub_assign(&mut self, rhs: Phase) {
        *self = *self - rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase((8 - self.0) % 8)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}π/4", self.0)
    }
}

impl fmt::Display for Phase {
    /// Symbolic rendering used by the circuit text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            1 => write!(f, "pi/4"),
            2 => write!(f, "pi/2"),
            4 => write!(f, "pi"),
            m if m % 2 == 0 => write!(f, "{}*pi/2", m / 2),
            m => write!(f, "{}*pi/4", m),
        }
    }
}
