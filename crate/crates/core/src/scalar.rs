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

//! Exact arithmetic in the ring generated by 1/2 and ω = e^{iπ/4}.
//!
//! A [`Scalar`] stores five integers `(k; a, b, c, d)` denoting the complex
//! number
//!
//! ```text
//!   (1/2^k) · (a + b·ω + c·i + d·ω⁻¹)
//! ```
//!
//! with arbitrary-precision coefficients. Every scalar produced by a
//! Clifford+T diagram lives in this ring, so diagram rewriting and
//! stabiliser decompositions never touch floating point.

use num::bigint::BigInt;
use num::{Complex, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use crate::phase::Phase;

/// An exact element of ℤ[1/2, e^{iπ/4}].
///
/// Canonical form: if all four coefficients are even, not all zero, and
/// `k > 0`, everything is halved until that no longer holds. Zero is stored
/// as `(0; 0, 0, 0, 0)`. Negative `k` is allowed (values like `√2·2^j`
/// appear as rewrite factors), and is not reduced further.
#[derive(Clone, Debug)]
pub struct Scalar {
    k: i64,
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Scalar {
    pub fn new(k: i64, a: i64, b: i64, c: i64, d: i64) -> Scalar {
        let mut s = Scalar {
            k,
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        s.canonicalize();
        s
    }

    pub fn zero() -> Scalar {
        Scalar::new(0, 0, 0, 0, 0)
    }

    pub fn one() -> Scalar {
        Scalar::new(0, 1, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    /// The five stored parameters `(k, a, b, c, d)`.
    pub fn parts(&self) -> (i64, &BigInt, &BigInt, &BigInt, &BigInt) {
        (self.k, &self.a, &self.b, &self.c, &self.d)
    }

    /// Exact ω^m for a phase m·π/4.
    pub fn from_phase(p: Phase) -> Scalar {
        match p.m() {
            0 => Scalar::new(0, 1, 0, 0, 0),
            1 => Scalar::new(0, 0, 1, 0, 0),
            2 => Scalar::new(0, 0, 0, 1, 0),
            3 => Scalar::new(0, 0, 0, 0, -1),
            4 => Scalar::new(0, -1, 0, 0, 0),
            5 => Scalar::new(0, 0, -1, 0, 0),
            6 => Scalar::new(0, 0, 0, -1, 0),
            _ => Scalar::new(0, 0, 0, 0, 1),
        }
    }

    /// Exact 1 + ω^m, the value of a 0-ary spider with phase m·π/4.
    pub fn one_plus_phase(p: Phase) -> Scalar {
        let mut s = Scalar::from_phase(p);
        s.a += 1;
        s.canonicalize();
        s
    }

    /// Exact √2^p.
    pub fn sqrt2_pow(p: i64) -> Scalar {
        if p % 2 == 0 {
            Scalar::new(-p / 2, 1, 0, 0, 0)
        } else {
            // √2 = ω + ω⁻¹
            Scalar::new(-(p - 1) / 2, 0, 1, 0, 1)
        }
    }

    /// Exact (1/√2)^p.
    pub fn one_over_sqrt2_pow(p: i64) -> Scalar {
        Scalar::sqrt2_pow(-p)
    }

    /// Multiply in place by √2^p without a full ring product.
    pub fn mul_sqrt2_pow(&mut self, p: i64) {
        if self.is_zero() {
            return;
        }
        let even = if p % 2 == 0 { p } else { p - 1 };
        self.k -= even / 2;
        if p % 2 != 0 {
            // multiply by ω + ω⁻¹
            let a = &self.b + &self.d;
            let b = &self.a + &self.c;
            let c = &self.b - &self.d;
            let d = &self.a - &self.c;
            self.a = a;
            self.b = b;
            self.c = c;
            self.d = d;
        }
        self.canonicalize();
    }

    /// Multiply in place by ω^m.
    pub fn mul_phase(&mut self, p: Phase) {
        for _ in 0..p.m() {
            // ×ω sends (a, b, c, d) to (d, a, b, -c)
            let d = std::mem::take(&mut self.c);
            let c = std::mem::take(&mut self.b);
            let b = std::mem::take(&mut self.a);
            let a = std::mem::take(&mut self.d);
            self.a = a;
            self.b = b;
            self.c = c;
            self.d = -d;
        }
    }

    pub fn mul_one_plus_phase(&mut self, p: Phase) {
        let s = self.clone() * Scalar::one_plus_phase(p);
        *self = s;
    }

    /// Complex conjugate: negates the i coefficient and swaps ω ↔ ω⁻¹.
    pub fn conj(&self) -> Scalar {
        let mut s = Scalar {
            k: self.k,
            a: self.a.clone(),
            b: self.d.clone(),
            c: -self.c.clone(),
            d: self.b.clone(),
        };
        s.canonicalize();
        s
    }

    /// If the value is real, return `(k, x, y)` with value `(x + y√2)/2^k`.
    ///
    /// Real values are exactly those with `c = 0` and `b = d`.
    pub fn as_real(&self) -> Option<(i64, BigInt, BigInt)> {
        if self.c.is_zero() && self.b == self.d {
            Some((self.k, self.a.clone(), self.b.clone()))
        } else {
            None
        }
    }

    /// Approximate complex value. Accurate to ~1e-12 relative error for
    /// |k| ≤ 200 and coefficients below 2^53.
    pub fn to_float(&self) -> Complex<f64> {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        let bpd = (&self.b + &self.d).to_f64().unwrap_or(f64::NAN);
        let bmd = (&self.b - &self.d).to_f64().unwrap_or(f64::NAN);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let scale = (-(self.k as f64)).exp2();
        Complex::new((a + bpd * h) * scale, (c + bmd * h) * scale)
    }

    fn canonicalize(&mut self) {
        if self.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0
            && self.a.is_even()
            && self.b.is_even()
            && self.c.is_even()
            && self.d.is_even()
        {
            self.a /= 2;
            self.b /= 2;
            self.c /= 2;
            self.d /= 2;
            self.k -= 1;
        }
    }

    /// Rescale so the stored exponent becomes `k ≥ self.k` (value unchanged).
    fn with_k(&self, k: i64) -> Scalar {
        debug_assert!(k >= self.k);
        let shift = (k - self.k) as u32;
        if shift == 0 {
            return self.clone();
        }
        Scalar {
            k,
            a: &self.a << shift,
            b: &self.b << shift,
            c: &self.c << shift,
            d: &self.d << shift,
        }
    }
}

trait IsEven {
    fn is_even(&self) -> bool;
}

impl IsEven for BigInt {
    fn is_even(&self) -> bool {
        !self.bit(0)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() == other.is_zero();
        }
        let k = self.k.max(other.k);
        let x = self.with_k(k);
        let y = other.with_k(k);
        x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Scalar {
        Scalar::zero()
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let k = self.k.max(rhs.k);
        let x = self.with_k(k);
        let y = rhs.with_k(k);
        let mut s = Scalar {
            k,
            a: x.a + y.a,
            b: x.b + y.b,
            c: x.c + y.c,
            d: x.d + y.d,
        };
        s.canonicalize();
        s
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self + &(-rhs)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            k: self.k,
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // basis products with ω⁴ = −1:
        //   ω·ω = i, ω·i = −ω⁻¹, ω·ω⁻¹ = 1, i·i = −1, i·ω⁻¹ = ω, ω⁻¹·ω⁻¹ = −i
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        let mut s = Scalar {
            k: self.k + rhs.k,
            a: a1 * a2 + b1 * d2 + d1 * b2 - c1 * c2,
            b: a1 * b2 + b1 * a2 + c1 * d2 + d1 * c2,
            c: a1 * c2 + c1 * a2 + b1 * b2 - d1 * d2,
            d: a1 * d2 + d1 * a2 - b1 * c2 - c1 * b2,
        };
        s.canonicalize();
        s
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = &*self * &rhs;
    }
}

impl fmt::Display for Scalar {
    /// Textual form `(k; a, b, c, d)`, used in JSON reports.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {}, {}, {}, {})",
            self.k, self.a, self.b, self.c, self.d
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError(pub String);

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scalar literal: {}", self.0)
    }
}

impl std::error::Error for ParseScalarError {}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Scalar, ParseScalarError> {
        let err = || ParseScalarError(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(err)?;
        let (ks, rest) = inner.split_once(';').ok_or_else(err)?;
        let k: i64 = ks.trim().parse().map_err(|_| err())?;
        let coeffs: Vec<BigInt> = rest
            .split(',')
            .map(|t| t.trim().parse::<BigInt>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        if coeffs.len() != 4 {
            return Err(err());
        }
        let mut sc = Scalar {
            k,
            a: coeffs[0].clone(),
            b: coeffs[1].clone(),
            c: coeffs[2].clone(),
            d: coeffs[3].clone(),
        };
        sc.canonicalize();
        Ok(sc)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Render a real scalar as `(x + y*sqrt(2))/2^k`, reduced, with plain
/// integers when possible. Returns `None` for non-real values.
pub fn format_real(s: &Scalar) -> Option<String> {
    let (mut k, mut x, mut y) = s.as_real()?;
    // normalise to a non-negative displayed exponent
    while k < 0 {
        x *= 2;
        y *= 2;
        k += 1;
    }
    while k > 0 && x.is_even() && y.is_even() {
        x /= 2;
        y /= 2;
        k -= 1;
    }
    Some(if y.is_zero() {
        if k == 0 {
            format!("{}", x)
        } else {
            format!("{}/2^{}", x, k)
        }
    } else {
        let ys = if y.is_negative() {
            format!("- {}*sqrt(2)", -y)
        } else {
            format!("+ {}*sqrt(2)", y)
        };
        if k == 0 {
            format!("({} {})", x, ys)
        } else {
            format!("({} {})/2^{}", x, ys, k)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn close(a: Complex<f64>, b: Complex<f64>) -> bool {
        (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
    }

    #[test]
    fn identities() {
        let s = Scalar::new(3, 5, -1, 2, 7);
        assert_eq!(&s * &Scalar::one(), s);
        assert_eq!(&s + &Scalar::zero(), s);
        // ω² = i
        let om = Scalar::from_phase(Phase::new(1));
        assert_eq!(&om * &om, Scalar::new(0, 0, 0, 1, 0));
        // (ω + ω⁻¹)² = 2, canonicalised from (0,2,0,0,0)... k stays 0
        let rt2 = Scalar::new(0, 0, 1, 0, 1);
        assert_eq!(&rt2 * &rt2, Scalar::new(0, 2, 0, 0, 0));
        // spec example: (0,0,1,0,1) × (0,0,1,0,1) canonicalises to (−1,1,0,0,0)
        assert_eq!(&rt2 * &rt2, Scalar::new(-1, 1, 0, 0, 0));
    }

    #[test]
    fn add_examples() {
        let x = Scalar::new(1, 1, 1, 0, 0);
        let y = Scalar::new(1, 1, -1, 0, 0);
        assert_eq!(&x + &y, Scalar::one());
        let om = Scalar::from_phase(Phase::new(1));
        let om7 = Scalar::from_phase(Phase::new(7));
        assert_eq!(&om + &om7, Scalar::new(0, 0, 1, 0, 1));
    }

    #[test]
    fn from_phase_table() {
        assert_eq!(Scalar::from_phase(Phase::new(0)), Scalar::one());
        assert_eq!(
            Scalar::from_phase(Phase::new(4)),
            Scalar::new(0, -1, 0, 0, 0)
        );
        assert_eq!(
            Scalar::from_phase(Phase::new(7)),
            Scalar::new(0, 0, 0, 0, 1)
        );
        for m in 0..8 {
            let got = Scalar::from_phase(Phase::new(m)).to_float();
            let want = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4 * m as f64);
            assert!(close(got, want), "m={}: {} vs {}", m, got, want);
        }
    }

    #[test]
    fn sqrt2_powers() {
        assert_eq!(Scalar::one_over_sqrt2_pow(0), Scalar::one());
        assert_eq!(Scalar::one_over_sqrt2_pow(2), Scalar::new(1, 1, 0, 0, 0));
        assert_eq!(Scalar::one_over_sqrt2_pow(1), Scalar::new(1, 0, 1, 0, 1));
        assert_eq!(Scalar::one_over_sqrt2_pow(-1), Scalar::new(0, 0, 1, 0, 1));
        for p in -7i64..8 {
            let got = Scalar::sqrt2_pow(p).to_float();
            let want = Complex::new(2f64.powf(p as f64 / 2.0), 0.0);
            assert!(close(got, want), "p={}", p);
        }
        let mut s = Scalar::new(0, 3, 0, 1, 0);
        let t = &s.clone() * &Scalar::sqrt2_pow(-5);
        s.mul_sqrt2_pow(-5);
        assert_eq!(s, t);
    }

    #[test]
    fn phase_product_is_phase_sum() {
        for m in 0..8i64 {
            for n in 0..8i64 {
                let lhs = &Scalar::from_phase(Phase::new(m)) * &Scalar::from_phase(Phase::new(n));
                let rhs = Scalar::from_phase(Phase::new(m + n));
                assert_eq!(lhs, rhs, "m={} n={}", m, n);
            }
        }
    }

    #[test]
    fn mul_phase_matches_full_product() {
        let base = Scalar::new(2, 3, -5, 7, 1);
        for m in 0..8i64 {
            let mut s = base.clone();
            s.mul_phase(Phase::new(m));
            assert_eq!(s, &base * &Scalar::from_phase(Phase::new(m)));
        }
    }

    #[test]
    fn as_real_examples() {
        let s = Scalar::new(1, 1, 1, 0, 1);
        let (k, x, y) = s.as_real().unwrap();
        assert_eq!((k, x, y), (1, 1.into(), 1.into()));
        assert!(Scalar::new(0, 0, 0, 1, 0).as_real().is_none());
        let (k, x, y) = Scalar::new(0, 2, 0, 0, 0).as_real().unwrap();
        assert_eq!((k, x, y), (0, 2.into(), 0.into()));
    }

    #[test]
    fn conj_times_self_is_real_nonnegative() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let s = Scalar::new(
                rng.gen_range(-4..8),
                rng.gen_range(-50..50),
                rng.gen_range(-50..50),
                rng.gen_range(-50..50),
                rng.gen_range(-50..50),
            );
            let n = &s * &s.conj();
            let (_, x, y) = n.as_real().expect("norm must be real");
            let v = x.to_f64().unwrap() + y.to_f64().unwrap() * 2f64.sqrt();
            assert!(v >= -1e-9, "norm² negative: {} for {}", v, s);
            assert!(close(n.to_float(), s.to_float() * s.to_float().conj()));
        }
    }

    // Ring axioms are checked both symbolically (canonical equality) and
    // numerically via to_float, on ≥10⁴ random triples.
    #[test]
    fn ring_axioms_random() {
        let mut rng = StdRng::seed_from_u64(42);
        let mut rand_scalar = |rng: &mut StdRng| {
            Scalar::new(
                rng.gen_range(-6..10),
                rng.gen_range(-99..100),
                rng.gen_range(-99..100),
                rng.gen_range(-99..100),
                rng.gen_range(-99..100),
            )
        };
        for _ in 0..4000 {
            let x = rand_scalar(&mut rng);
            let y = rand_scalar(&mut rng);
            let z = rand_scalar(&mut rng);

            // commutativity
            assert_eq!(&x + &y, &y + &x);
            assert_eq!(&x * &y, &y * &x);
            // associativity
            assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            // distributivity
            assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));

            let (fx, fy) = (x.to_float(), y.to_float());
            assert!(close((&x * &y).to_float(), fx * fy));
            assert!(close((&x + &y).to_float(), fx + fy));
        }
    }

    #[test]
    fn canonicalisation_idempotent_and_value_preserving() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..2000 {
            let raw = (
                rng.gen_range(-3..6),
                rng.gen_range(-8..9) * 4,
                rng.gen_range(-8..9) * 4,
                rng.gen_range(-8..9) * 4,
                rng.gen_range(-8..9) * 4,
            );
            let s = Scalar::new(raw.0, raw.1, raw.2, raw.3, raw.4);
            let mut t = s.clone();
            t.canonicalize();
            assert_eq!(s, t);
            let unreduced = Scalar {
                k: raw.0,
                a: raw.1.into(),
                b: raw.2.into(),
                c: raw.3.into(),
                d: raw.4.into(),
            };
            assert!(close(s.to_float(), unreduced.to_float()));
        }
    }

    #[test]
    fn display_roundtrip() {
        let cases = [
            Scalar::zero(),
            Scalar::one(),
            Scalar::new(-3, 17, 0, -2, 5),
            Scalar::new(12, 1, 1, 1, 1),
        ];
        for s in &cases {
            let text = s.to_string();
            let back: Scalar = text.parse().unwrap();
            assert_eq!(&back, s, "roundtrip of {}", text);
        }
        assert_eq!(Scalar::new(1, 0, 1, 0, 1).to_string(), "(1; 0, 1, 0, 1)");
        let json = serde_json::to_string(&Scalar::new(1, 0, 1, 0, 1)).unwrap();
        assert_eq!(json, "\"(1; 0, 1, 0, 1)\"");
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Scalar::new(1, 0, 1, 0, 1));
    }

    #[test]
    fn format_real_rendering() {
        assert_eq!(format_real(&Scalar::one()).unwrap(), "1");
        assert_eq!(format_real(&Scalar::new(1, 1, 0, 0, 0)).unwrap(), "1/2^1");
        assert_eq!(
            format_real(&Scalar::new(1, 1, 1, 0, 1)).unwrap(),
            "(1 + 1*sqrt(2))/2^1"
        );
        assert_eq!(format_real(&Scalar::new(-1, 1, 0, 0, 0)).unwrap(), "2");
        assert!(format_real(&Scalar::new(0, 0, 1, 0, 0)).is_none());
    }
}
