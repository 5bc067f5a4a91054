//! Exact arithmetic in `ℤ[ζ₁₆]`, enough to evaluate Laurent polynomials at
//! `i` and `e^{iπ/4}` (and their square roots) without floating point.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

const N: usize = 8;

/// `Σ c_j ζ^j` for `j < 8`, with `ζ = e^{iπ/8}` and `ζ^8 = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cyclotomic16 {
    coeffs: [BigInt; N],
}

impl Cyclotomic16 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_int(n: i64) -> Self {
        let mut z = Self::zero();
        z.coeffs[0] = BigInt::from(n);
        z
    }

    /// Add `c · ζ^power` for any integer power.
    pub fn add_power(&mut self, power: i64, c: &BigInt) {
        let p = power.rem_euclid(2 * N as i64) as usize;
        if p < N {
            self.coeffs[p] += c;
        } else {
            self.coeffs[p - N] -= c;
        }
    }

    pub fn mul_zeta_power(&self, power: i64) -> Self {
        let mut out = Self::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            out.add_power(j as i64 + power, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.add_power((i + j) as i64, &(a * b));
            }
        }
        out
    }

    /// Complex conjugate: `ζ^j ↦ ζ^{-j}`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            out.add_power(-(j as i64), c);
        }
        out
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// `|z|²` when it is a rational integer.
    pub fn norm_squared_integer(&self) -> Option<BigInt> {
        self.mul(&self.conj()).as_integer()
    }

    /// `|z|` when it is an exact integer.
    pub fn abs_integer(&self) -> Option<BigInt> {
        let n2 = self.norm_squared_integer()?;
        if n2.is_negative() {
            return None;
        }
        let r = n2.sqrt();
        (&r * &r == n2).then_some(r)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let zeta = num_complex::Complex64::from_polar(1.0, std::f64::consts::PI / 8.0);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| zeta.powi(j as i32) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }
}
