//! Exact Laurent polynomials over the integers with exponents on the
//! half-integer lattice, plus breadth / gap / sign-alternation analysis.
//!
//! Exponents are stored doubled, so `t^(5/2)` is kept under the key `5`.
//! Polynomials in `A` (integer exponents) use the same type with even keys.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::Cyclotomic16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("lattice step must be positive, got {0}")]
    InvalidStep(HalfInt),
    #[error("support is not contained in a single progression of step {step} (offending exponent {exponent})")]
    SupportNotOnLattice { step: HalfInt, exponent: HalfInt },
    #[error("supports overlap: min degree {min_right} of the right operand is not above max degree {max_left} of the left operand")]
    Overlap { max_left: HalfInt, min_right: HalfInt },
    #[error("polynomial parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("exponent {0} cannot be mapped onto the target lattice")]
    OddExponent(HalfInt),
}

/// A half-integer, stored as twice its value. Serialized as its value: an
/// integer, or a float ending in `.5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(pub i64);

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_int() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_f64(self.to_f64()),
        }
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = HalfInt;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or half-integer")
            }
            fn visit_i64<E: serde::de::Error>(self, n: i64) -> Result<HalfInt, E> {
                n.checked_mul(2).map(HalfInt).ok_or_else(|| E::custom("half-integer out of range"))
            }
            fn visit_u64<E: serde::de::Error>(self, n: u64) -> Result<HalfInt, E> {
                i64::try_from(n).map_err(E::custom).and_then(|n| self.visit_i64(n))
            }
            fn visit_f64<E: serde::de::Error>(self, x: f64) -> Result<HalfInt, E> {
                let twice = x * 2.0;
                if twice.fract() != 0.0 || twice.abs() > 2f64.powi(53) {
                    return Err(E::custom(format!("{x} is not a half-integer")));
                }
                Ok(HalfInt(twice as i64))
            }
        }
        d.deserialize_any(V)
    }
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const ONE: HalfInt = HalfInt(2);

    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value, if this is an integer.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl FromStr for HalfInt {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let den: i64 = den.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            let num: i64 = num.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            match den {
                1 => Ok(HalfInt(2 * num)),
                2 => Ok(HalfInt(num)),
                _ => Err(format!("denominator must be 1 or 2 in {s:?}")),
            }
        } else {
            let n: i64 = s.parse().map_err(|_| format!("bad integer {s:?}"))?;
            Ok(HalfInt(2 * n))
        }
    }
}

/// Exact Laurent polynomial `Σ a_k x^k` with `k` on the half-integer lattice.
///
/// Canonical: no zero coefficient is ever stored. Serializes as its text
/// rendering in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct HalfLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, HalfInt::ZERO)
    }

    pub fn monomial(coef: impl Into<BigInt>, exp: HalfInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coef.into());
        p
    }

    /// Monomial with an integer exponent.
    pub fn mono(coef: i64, exp: i64) -> Self {
        Self::monomial(coef, HalfInt::from_int(exp))
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (HalfInt, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Build from integer-exponent pairs.
    pub fn from_int_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (HalfInt::from_int(e), c)))
    }

    fn add_term(&mut self, exp: HalfInt, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp.0).or_insert_with(BigInt::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&exp.0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coefficient(&self, exp: HalfInt) -> BigInt {
        self.terms.get(&exp.0).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (HalfInt(e), c))
    }

    pub fn min_degree(&self) -> Option<HalfInt> {
        self.terms.keys().next().map(|&e| HalfInt(e))
    }

    pub fn max_degree(&self) -> Option<HalfInt> {
        self.terms.keys().next_back().map(|&e| HalfInt(e))
    }

    pub fn breadth(&self) -> Option<HalfInt> {
        Some(self.max_degree()? - self.min_degree()?)
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: HalfInt) -> Self {
        HalfLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e + shift.0, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HalfLaurent {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `x ↦ x^{-1}`.
    pub fn invert_variable(&self) -> Self {
        HalfLaurent {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Re-map every (doubled) exponent; fails if `f` rejects one.
    pub fn map_exponents<F>(&self, mut f: F) -> Result<Self, LaurentError>
    where
        F: FnMut(HalfInt) -> Option<HalfInt>,
    {
        let mut out = Self::zero();
        for (&e, c) in &self.terms {
            let ne = f(HalfInt(e)).ok_or(LaurentError::OddExponent(HalfInt(e)))?;
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`, if the division leaves no remainder.
    ///
    /// Long division from the top degree; the divisor's leading coefficient
    /// must divide every intermediate leading coefficient.
    pub fn div_exact(&self, divisor: &HalfLaurent) -> Option<HalfLaurent> {
        let dmax = divisor.max_degree()?;
        let dmin = divisor.min_degree()?;
        let lead = divisor.coefficient(dmax);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rmax) = rem.max_degree() {
            let rmin = rem.min_degree()?;
            if rmax - rmin < dmax - dmin {
                return None;
            }
            let rc = rem.coefficient(rmax);
            if !(&rc % &lead).is_zero() {
                return None;
            }
            let q = HalfLaurent::monomial(&rc / &lead, rmax - dmax);
            rem = &rem - &(&q * divisor);
            quot = &quot + &q;
        }
        Some(quot)
    }

    /// If `self = c · x^k · other` with `c = ±1`, returns `(c, k)`.
    pub fn monomial_quotient(&self, other: &HalfLaurent) -> Option<(i64, HalfInt)> {
        if self.len() != other.len() || self.is_zero() {
            return None;
        }
        let k = self.min_degree()? - other.min_degree()?;
        let c = self.coefficient(self.min_degree()?);
        let oc = other.coefficient(other.min_degree()?);
        let sign = if c == oc {
            1
        } else if c == -oc {
            -1
        } else {
            return None;
        };
        let candidate = other.shift(k).scale(&BigInt::from(sign));
        (&candidate == self).then_some((sign, k))
    }

    /// Float evaluation at `z`, with `z^{1/2}` taken as the principal square root.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let root = z.sqrt();
        self.terms
            .iter()
            .map(|(&e, c)| root.powi(e as i32) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Exact evaluation at `z = ζ₈^k` with `z^{1/2} = ζ₁₆^k` (the principal
    /// branch for `k ∈ (-8, 8]`). `k = 4` is `t = -1, t^{1/2} = i`; `k = 1`
    /// is `A = e^{iπ/4}`.
    pub fn evaluate_root_of_unity(&self, k: i64) -> Cyclotomic16 {
        let mut acc = Cyclotomic16::zero();
        for (&e, c) in &self.terms {
            acc.add_power(e * k, c);
        }
        acc
    }

    /// `|f(z)|` at `z = ζ₈^k` when it is an exact integer.
    pub fn abs_at_root_of_unity(&self, k: i64) -> Option<BigInt> {
        self.evaluate_root_of_unity(k).abs_integer()
    }

    /// Breadth, gaps and sign alternation on the lattice `min_degree + step·ℤ`.
    pub fn analyze(&self, step: HalfInt) -> Result<GapReport, LaurentError> {
        if step.0 <= 0 {
            return Err(LaurentError::InvalidStep(step));
        }
        let lo = self.min_degree().ok_or(LaurentError::ZeroPolynomial)?;
        let hi = self.max_degree().expect("nonzero");
        for (e, _) in self.terms() {
            if (e - lo).0 % step.0 != 0 {
                return Err(LaurentError::SupportNotOnLattice { step, exponent: e });
            }
        }
        let mut gaps = Vec::new();
        let mut prev = lo;
        for (e, _) in self.terms().skip(1) {
            let missing = (e - prev).0 / step.0 - 1;
            if missing > 0 {
                gaps.push(Gap {
                    start: prev + step,
                    length: missing as u64,
                });
            }
            prev = e;
        }
        let first_sign = self.coefficient(lo).signum();
        let alternating = self.terms().all(|(e, c)| {
            let parity = ((e - lo).0 / step.0) % 2;
            let expected = if parity == 0 { first_sign.clone() } else { -first_sign.clone() };
            c.signum() == expected
        });
        Ok(GapReport {
            breadth: hi - lo,
            step,
            gaps,
            alternating,
        })
    }

    /// Length `n' - m - 1` of the gap between `self` (max degree `m`) and
    /// `upper` (min degree `n'`), in raw exponent units, or `None` when the
    /// supports abut (`n' ≤ m + 1`). Both operands must sit on one shared
    /// progression of the given step.
    pub fn gap_between(&self, upper: &HalfLaurent, step: HalfInt) -> Result<Option<HalfInt>, LaurentError> {
        if step.0 <= 0 {
            return Err(LaurentError::InvalidStep(step));
        }
        let m = self.max_degree().ok_or(LaurentError::ZeroPolynomial)?;
        let n = upper.min_degree().ok_or(LaurentError::ZeroPolynomial)?;
        let base = self.min_degree().expect("nonzero");
        for (e, _) in self.terms().chain(upper.terms()) {
            if (e - base).0 % step.0 != 0 {
                return Err(LaurentError::SupportNotOnLattice { step, exponent: e });
            }
        }
        if n <= m {
            return Err(LaurentError::Overlap { max_left: m, min_right: n });
        }
        let len = n - m - HalfInt::ONE;
        Ok((len.0 > 0).then_some(len))
    }

    /// Render with the given variable name, e.g. `-t^(-5/2) - t^(-1/2)`.
    pub fn display_in<'a>(&'a self, var: &'a str) -> DisplayIn<'a> {
        DisplayIn { poly: self, var }
    }

    /// Parse the rendering grammar; `var` is the variable name expected.
    pub fn parse_in(s: &str, var: &str) -> Result<Self, LaurentError> {
        Parser { src: s, pos: 0, var }.parse()
    }

    /// `true` when, at every shared exponent, the two polynomials have
    /// coefficients of the same sign (so `self + other` cancels nothing).
    pub fn sums_without_cancellation(&self, other: &HalfLaurent) -> bool {
        self.terms
            .iter()
            .all(|(e, c)| other.terms.get(e).is_none_or(|d| c.signum() == d.signum()))
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }
}

/// A run of zero lattice positions strictly inside the support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    /// First missing exponent.
    pub start: HalfInt,
    /// Number of consecutive missing lattice positions.
    pub length: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub breadth: HalfInt,
    pub step: HalfInt,
    pub gaps: Vec<Gap>,
    pub alternating: bool,
}

impl GapReport {
    pub fn gap_count(&self) -> usize {
        self.gaps.len()
    }
}

impl From<i64> for HalfLaurent {
    fn from(c: i64) -> Self {
        HalfLaurent::monomial(c, HalfInt::ZERO)
    }
}

impl<'a> Add<&'a HalfLaurent> for &'a HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for HalfLaurent {
    type Output = HalfLaurent;
    fn add(mut self, rhs: HalfLaurent) -> HalfLaurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&HalfLaurent> for HalfLaurent {
    fn add_assign(&mut self, rhs: &HalfLaurent) {
        for (&e, c) in &rhs.terms {
            self.add_term(HalfInt(e), c.clone());
        }
    }
}

impl<'a> Sub<&'a HalfLaurent> for &'a HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(HalfInt(e), -c);
        }
        out
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        HalfLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        -&self
    }
}

impl<'a> Mul<&'a HalfLaurent> for &'a HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = HalfLaurent::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(HalfInt(e1 + e2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: HalfLaurent) -> HalfLaurent {
        &self * &rhs
    }
}

impl One for HalfLaurent {
    fn one() -> Self {
        HalfLaurent::one()
    }
}

impl Zero for HalfLaurent {
    fn zero() -> Self {
        HalfLaurent::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::iter::Sum for HalfLaurent {
    fn sum<I: Iterator<Item = HalfLaurent>>(iter: I) -> Self {
        iter.fold(HalfLaurent::zero(), |acc, p| acc + p)
    }
}

pub struct DisplayIn<'a> {
    poly: &'a HalfLaurent,
    var: &'a str,
}

impl fmt::Display for DisplayIn<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.poly.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e == HalfInt::ZERO {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", self.var)?;
            if e == HalfInt::ONE {
                continue;
            }
            if e.0 > 0 && e.is_integer() {
                write!(f, "^{e}")?;
            } else {
                write!(f, "^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    var: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> LaurentError {
        LaurentError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let digits: usize = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return None;
        }
        let v = self.rest()[..digits].parse().ok()?;
        self.pos += digits;
        Some(v)
    }

    fn signed_i64(&mut self) -> Result<i64, LaurentError> {
        let neg = if self.eat("-") {
            true
        } else {
            self.eat("+");
            false
        };
        let v = self
            .integer()
            .and_then(|v| v.to_i64())
            .ok_or_else(|| self.err("expected integer exponent"))?;
        Ok(if neg { -v } else { v })
    }

    fn exponent(&mut self) -> Result<HalfInt, LaurentError> {
        if self.eat("(") {
            let num = self.signed_i64()?;
            let e = if self.eat("/") {
                match self.integer().and_then(|d| d.to_i64()) {
                    Some(2) => HalfInt(num),
                    Some(1) => HalfInt(2 * num),
                    _ => return Err(self.err("exponent denominator must be 1 or 2")),
                }
            } else {
                HalfInt(2 * num)
            };
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            Ok(e)
        } else {
            Ok(HalfInt(2 * self.signed_i64()?))
        }
    }

    fn parse(mut self) -> Result<HalfLaurent, LaurentError> {
        let mut out = HalfLaurent::zero();
        self.skip_ws();
        if self.rest() == "0" {
            return Ok(out);
        }
        let mut first = true;
        loop {
            self.skip_ws();
            if self.rest().is_empty() {
                if first {
                    return Err(self.err("empty polynomial"));
                }
                break;
            }
            let neg = if self.eat("-") {
                true
            } else if self.eat("+") || first {
                false
            } else {
                return Err(self.err("expected '+' or '-'"));
            };
            first = false;
            let coef = self.integer();
            let has_star = coef.is_some() && self.eat("*");
            let exp = if self.eat(self.var) {
                if self.eat("^") {
                    self.exponent()?
                } else {
                    HalfInt::ONE
                }
            } else if has_star {
                return Err(self.err(format!("expected variable {:?}", self.var)));
            } else if coef.is_some() {
                HalfInt::ZERO
            } else {
                return Err(self.err("expected a term"));
            };
            let mut c = coef.unwrap_or_else(BigInt::one);
            if neg {
                c = -c;
            }
            out.add_term(exp, c);
        }
        Ok(out)
    }
}

impl From<HalfLaurent> for String {
    fn from(p: HalfLaurent) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for HalfLaurent {
    type Error = LaurentError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for HalfLaurent {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HalfLaurent::parse_in(s, "t")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(n: i64) -> HalfInt {
        HalfInt(n)
    }

    fn hopf() -> HalfLaurent {
        HalfLaurent::from_terms([(h(-5), -1), (h(-1), -1)])
    }

    #[test]
    fn half_int_json() {
        for h in [HalfInt(7), HalfInt(-3), HalfInt::from_int(-4), HalfInt::ZERO] {
            let text = serde_json::to_string(&h).unwrap();
            assert_eq!(serde_json::from_str::<HalfInt>(&text).unwrap(), h);
        }
        assert_eq!(serde_json::to_string(&HalfInt(5)).unwrap(), "2.5");
        assert_eq!(serde_json::to_string(&HalfInt(-6)).unwrap(), "-3");
        assert!(serde_json::from_str::<HalfInt>("0.25").is_err());
    }

    #[test]
    fn add_identity_and_cancellation() {
        let f = hopf();
        assert_eq!(&HalfLaurent::zero() + &f, f);
        let g = HalfLaurent::from_int_terms(&[(1, 1), (2, 1)]);
        assert_eq!(&g + &HalfLaurent::mono(-1, 2), HalfLaurent::mono(1, 1));
        assert_eq!((&g - &g).len(), 0);
    }

    #[test]
    fn mul_hopf_square() {
        // (-t^{-5/2} - t^{-1/2})^2 = t^{-5} + 2t^{-3} + t^{-1}
        let sq = &hopf() * &hopf();
        assert_eq!(sq, HalfLaurent::from_int_terms(&[(-5, 1), (-3, 2), (-1, 1)]));
        assert_eq!(&HalfLaurent::one() * &hopf(), hopf());
        assert_eq!(
            &HalfLaurent::mono(1, 3) * &HalfLaurent::monomial(1, h(-7)),
            HalfLaurent::monomial(1, h(-1))
        );
    }

    #[test]
    fn evaluate_exact_points() {
        // Hopf Jones at t = -1, t^{1/2} = i: -i^{-5} - i^{-1} = 2i.
        let v = hopf().evaluate_root_of_unity(4);
        assert_eq!(v.abs_integer(), Some(BigInt::from(2)));
        assert_eq!(v, Cyclotomic16::from_int(2).mul_zeta_power(4));
        // -A^{-4} - A^4 at A = e^{iπ/4} is 2.
        let gamma = HalfLaurent::from_int_terms(&[(-4, -1), (4, -1)]);
        assert_eq!(gamma.evaluate_root_of_unity(1), Cyclotomic16::from_int(2));
        assert_eq!(HalfLaurent::one().evaluate_root_of_unity(3), Cyclotomic16::from_int(1));
    }

    #[test]
    fn evaluate_float_matches_exact() {
        let v = hopf().evaluate(Complex64::new(-1.0, 0.0));
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn analyze_examples() {
        let r = HalfLaurent::one().analyze(HalfInt::ONE).unwrap();
        assert_eq!(r.breadth, HalfInt::ZERO);
        assert!(r.gaps.is_empty() && r.alternating);

        let sq = &hopf() * &hopf();
        let r = sq.analyze(HalfInt::ONE).unwrap();
        assert_eq!(r.breadth, HalfInt::from_int(4));
        assert_eq!(
            r.gaps,
            vec![
                Gap { start: HalfInt::from_int(-4), length: 1 },
                Gap { start: HalfInt::from_int(-2), length: 1 }
            ]
        );
        // 1, 2, 1 at even offsets: same sign on the even positions.
        assert!(r.alternating);

        let trefoil = HalfLaurent::from_int_terms(&[(-4, -1), (-3, 1), (-1, 1)]);
        let r = trefoil.analyze(HalfInt::ONE).unwrap();
        assert_eq!(r.gaps, vec![Gap { start: HalfInt::from_int(-2), length: 1 }]);
    }

    #[test]
    fn analyze_rejects_off_lattice() {
        let f = HalfLaurent::from_int_terms(&[(0, 1), (1, 1)]);
        assert!(matches!(
            f.analyze(HalfInt::from_int(4)),
            Err(LaurentError::SupportNotOnLattice { .. })
        ));
        assert_eq!(HalfLaurent::zero().analyze(HalfInt::ONE), Err(LaurentError::ZeroPolynomial));
    }

    #[test]
    fn gap_between_examples() {
        let one = HalfLaurent::one();
        assert_eq!(one.gap_between(&HalfLaurent::mono(1, 1), HalfInt::ONE), Ok(None));
        assert_eq!(
            one.gap_between(&HalfLaurent::mono(1, 3), HalfInt::ONE),
            Ok(Some(HalfInt::from_int(2)))
        );
        // A-lattice: exponents 0 and 4 abut on the lattice; raw length 3.
        let four = HalfInt::from_int(4);
        assert_eq!(
            one.gap_between(&HalfLaurent::mono(1, 4), four),
            Ok(Some(HalfInt::from_int(3)))
        );
        assert!(matches!(
            HalfLaurent::mono(1, 4).gap_between(&one, four),
            Err(LaurentError::Overlap { .. })
        ));
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(hopf().to_string(), "-t^(-5/2) - t^(-1/2)");
        let p = HalfLaurent::from_int_terms(&[(-2, 1), (0, -3), (1, 1), (4, 2)]);
        assert_eq!(p.to_string(), "t^(-2) - 3 + t + 2*t^4");
        assert_eq!("t^(-2) - 3 + t + 2*t^4".parse::<HalfLaurent>().unwrap(), p);
        assert_eq!("0".parse::<HalfLaurent>().unwrap(), HalfLaurent::zero());
        assert_eq!(
            HalfLaurent::parse_in("-A^(-4) - A^4", "A").unwrap(),
            HalfLaurent::from_int_terms(&[(-4, -1), (4, -1)])
        );
        assert!("t^".parse::<HalfLaurent>().is_err());
        assert!("t^(1/3)".parse::<HalfLaurent>().is_err());
    }

    #[test]
    fn div_exact_and_monomial_quotient() {
        let f = HalfLaurent::from_int_terms(&[(0, 1), (2, 1)]);
        let sq = f.pow(2);
        assert_eq!(sq.div_exact(&f), Some(f.clone()));
        assert_eq!(sq.div_exact(&HalfLaurent::from_int_terms(&[(0, 1), (1, 1)])), None);
        let g = hopf();
        assert_eq!(g.monomial_quotient(&f), Some((-1, h(-5))));
        assert_eq!(g.monomial_quotient(&sq), None);
    }

    fn arb_poly() -> impl Strategy<Value = HalfLaurent> {
        proptest::collection::vec((-12i64..12, -5i64..=5), 0..7)
            .prop_map(|v| HalfLaurent::from_terms(v.into_iter().map(|(e, c)| (HalfInt(e), c))))
    }

    proptest! {
        #[test]
        fn canonical_after_ops(f in arb_poly(), g in arb_poly()) {
            for p in [&f + &g, &f - &g, &f * &g] {
                prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
            }
        }

        #[test]
        fn breadth_is_additive(f in arb_poly(), g in arb_poly()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let prod = &f * &g;
            prop_assert_eq!(prod.breadth().unwrap(), f.breadth().unwrap() + g.breadth().unwrap());
        }

        #[test]
        fn analyze_invariant_under_monomial(f in arb_poly(), shift in -9i64..9, neg in any::<bool>()) {
            prop_assume!(!f.is_zero());
            let step = HalfInt(1);
            let c = BigInt::from(if neg { -1 } else { 1 });
            let g = f.shift(HalfInt(shift)).scale(&c);
            let a = f.analyze(step).unwrap();
            let b = g.analyze(step).unwrap();
            prop_assert_eq!(a.breadth, b.breadth);
            prop_assert_eq!(a.alternating, b.alternating);
            let shifted: Vec<_> = a.gaps.iter().map(|x| (x.start + HalfInt(shift), x.length)).collect();
            let got: Vec<_> = b.gaps.iter().map(|x| (x.start, x.length)).collect();
            prop_assert_eq!(shifted, got);
        }

        #[test]
        fn branch_consistency_at_minus_one(f in arb_poly()) {
            // term-by-term: a_k * i^{2k}, with 2k the stored key
            let mut re = BigInt::zero();
            let mut im = BigInt::zero();
            for (e, c) in f.terms() {
                match e.0.rem_euclid(4) {
                    0 => re += c,
                    1 => im += c,
                    2 => re -= c,
                    _ => im -= c,
                }
            }
            let norm2 = &re * &re + &im * &im;
            let v = f.evaluate_root_of_unity(4);
            prop_assert_eq!(v.norm_squared_integer(), Some(norm2));
        }

        #[test]
        fn render_parse_roundtrip(f in arb_poly()) {
            let s = f.to_string();
            prop_assert_eq!(s.parse::<HalfLaurent>().unwrap(), f);
        }
    }
}
