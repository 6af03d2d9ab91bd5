//! Coefficient rings as context objects.
//!
//! A `Ring` is a small value describing the coefficient domain; elements are a
//! separate associated type. This keeps prime fields with a runtime modulus
//! and arbitrary-precision rationals behind one interface, so the polynomial
//! layer is written once.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;
}

pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero; callers guard.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// F_p with a runtime modulus. Elements are canonical representatives in
/// `0..p`. The modulus is capped so that a 32-term delayed-reduction dot
/// product fits in u64 (see linalg).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

/// Largest modulus the delayed-reduction kernels accept: 32 * (p-1)^2 + (p-1)
/// must fit in u64, which holds comfortably for p < 2^25.
pub const MAX_MODULUS: u64 = 1 << 25;

impl PrimeField {
    pub fn new(p: u64) -> crate::Result<Self> {
        if p < 2 || p >= MAX_MODULUS {
            return Err(crate::Error::BadModulus(
                p,
                format!("modulus must lie in 2..2^25, got {p}"),
            ));
        }
        if !is_prime(p) {
            return Err(crate::Error::BadModulus(p, "not prime".into()));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        // p prime, so a^(p-2) works and needs no sign bookkeeping.
        self.pow(*a, self.p - 2)
    }
}

/// The rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            a.to_string()
        }
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero rational");
        a.recip()
    }
}

/// Reduce a rational to F_p. Fails when p divides the denominator.
pub fn rational_mod_p(fp: &PrimeField, a: &BigRational) -> crate::Result<u64> {
    let p = BigInt::from(fp.modulus());
    let den = (a.denom() % &p + &p) % &p;
    let den_u = bigint_to_u64(&den);
    if den_u == 0 {
        return Err(crate::Error::BadModulus(
            fp.modulus(),
            format!("denominator of {} vanishes mod p", a),
        ));
    }
    let num = ((a.numer() % &p) + &p) % &p;
    Ok(fp.mul(&bigint_to_u64(&num), &fp.inv(&den_u)))
}

fn bigint_to_u64(n: &BigInt) -> u64 {
    // Precondition: 0 <= n < p < 2^25.
    debug_assert!(!n.is_negative());
    let (_, digits) = n.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => unreachable!("reduced residue exceeds u64"),
    }
}
