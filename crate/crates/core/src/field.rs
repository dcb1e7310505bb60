//! Exact scalars: prime fields GF(p) for odd p, and the rationals.
//!
//! Bulk containers are generic over [`Arith`], a small arithmetic context that
//! knows its field. [`FieldScalar`] is the self-describing scalar used at API
//! boundaries; it carries its characteristic and refuses to mix with another.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of every computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Prime(u32),
    Rational,
}

impl Field {
    /// GF(p); rejects 2, composites and anything too large for u32 products.
    pub fn prime(p: u32) -> Result<Field> {
        if p == 2 || p < 3 || p > 65521 || !is_prime(p) {
            return Err(Error::UnsupportedCharacteristic(p));
        }
        Ok(Field::Prime(p))
    }

    /// `0` gives the rationals, an odd prime gives GF(p).
    pub fn from_characteristic(c: u32) -> Result<Field> {
        if c == 0 {
            Ok(Field::Rational)
        } else {
            Field::prime(c)
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(*p as u64),
            Field::Rational => None,
        }
    }

    pub fn zero(&self) -> FieldScalar {
        FieldScalar::from_i64(*self, 0)
    }

    pub fn one(&self) -> FieldScalar {
        FieldScalar::from_i64(*self, 1)
    }

    /// All elements of a finite field in increasing residue order.
    pub fn elements(&self) -> Option<Vec<FieldScalar>> {
        match self {
            Field::Prime(p) => Some((0..*p).map(|v| FieldScalar::Residue { value: v, modulus: *p }).collect()),
            Field::Rational => None,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A single exact scalar tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    /// Residue in `[0, modulus)`.
    Residue { value: u32, modulus: u32 },
    /// Always in lowest terms with positive denominator.
    Rational(BigRational),
}

impl FieldScalar {
    pub fn from_i64(field: Field, v: i64) -> FieldScalar {
        match field {
            Field::Prime(p) => FieldScalar::Residue { value: ModArith::new(p).reduce_i64(v), modulus: p },
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// `num/den` in the given field; fails when `den` vanishes there.
    pub fn from_fraction(field: Field, num: i64, den: i64) -> Result<FieldScalar> {
        FieldScalar::from_i64(field, num).checked_div(&FieldScalar::from_i64(field, den))
    }

    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Residue { modulus, .. } => Field::Prime(*modulus),
            FieldScalar::Rational(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Residue { value, .. } => *value == 0,
            FieldScalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Residue { value, .. } => *value == 1,
            FieldScalar::Rational(q) => q.is_one(),
        }
    }

    fn same_field(&self, other: &FieldScalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::CharacteristicMismatch { left: self.field(), right: other.field() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &FieldScalar) -> Result<FieldScalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldScalar::Residue { value: a, modulus }, FieldScalar::Residue { value: b, .. }) => {
                let m = ModArith::new(*modulus);
                FieldScalar::Residue { value: m.add(a, b), modulus: *modulus }
            }
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &FieldScalar) -> Result<FieldScalar> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &FieldScalar) -> Result<FieldScalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldScalar::Residue { value: a, modulus }, FieldScalar::Residue { value: b, .. }) => {
                let m = ModArith::new(*modulus);
                FieldScalar::Residue { value: m.mul(a, b), modulus: *modulus }
            }
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &FieldScalar) -> Result<FieldScalar> {
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldScalar> {
        match self {
            FieldScalar::Residue { value, modulus } => ModArith::new(*modulus)
                .inv(value)
                .map(|v| FieldScalar::Residue { value: v, modulus: *modulus })
                .ok_or(Error::DivisionByZero),
            FieldScalar::Rational(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(FieldScalar::Rational(q.recip()))
                }
            }
        }
    }

    fn neg_ref(&self) -> FieldScalar {
        match self {
            FieldScalar::Residue { value, modulus } => {
                FieldScalar::Residue { value: ModArith::new(*modulus).neg(value), modulus: *modulus }
            }
            FieldScalar::Rational(q) => FieldScalar::Rational(-q),
        }
    }

    /// Integer representative: the residue, or the numerator of an integral rational.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldScalar::Residue { value, .. } => Some(*value as i64),
            FieldScalar::Rational(q) if q.is_integer() => i64::try_from(q.numer().clone()).ok(),
            FieldScalar::Rational(_) => None,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Residue { value, .. } => write!(f, "{value}"),
            FieldScalar::Rational(q) => write!(f, "{q}"),
        }
    }
}

// Operator sugar panics on mixed characteristics; use the `checked_*` forms
// where the operands come from outside.
impl Add for &FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        self.checked_add(rhs).expect("scalar addition across fields")
    }
}

impl Sub for &FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        self.checked_sub(rhs).expect("scalar subtraction across fields")
    }
}

impl Mul for &FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        self.checked_mul(rhs).expect("scalar multiplication across fields")
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

/// Arithmetic context used by the generic kernels.
pub trait Arith: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type E: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn field(&self) -> Field;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_i64(&self, v: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn to_scalar(&self, a: &Self::E) -> FieldScalar;
    fn from_scalar(&self, s: &FieldScalar) -> Result<Self::E>;
    /// Uniform element for finite fields; small numerators for the rationals.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::E;

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }

    /// `acc += a * b`
    fn mul_add(&self, acc: &mut Self::E, a: &Self::E, b: &Self::E) {
        *acc = self.add(acc, &self.mul(a, b));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModArith {
    p: u32,
}

impl ModArith {
    pub fn new(p: u32) -> ModArith {
        ModArith { p }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

impl Arith for ModArith {
    type E = u32;

    fn field(&self) -> Field {
        Field::Prime(self.p)
    }
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i64(v)
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce_i64(t0))
    }
    fn to_scalar(&self, a: &u32) -> FieldScalar {
        FieldScalar::Residue { value: *a, modulus: self.p }
    }
    fn from_scalar(&self, s: &FieldScalar) -> Result<u32> {
        match s {
            FieldScalar::Residue { value, modulus } if *modulus == self.p => Ok(*value),
            other => Err(Error::CharacteristicMismatch { left: self.field(), right: other.field() }),
        }
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    #[inline]
    fn mul_add(&self, acc: &mut u32, a: &u32, b: &u32) {
        *acc = ((*acc as u64 + *a as u64 * *b as u64) % self.p as u64) as u32;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatArith;

impl Arith for RatArith {
    type E = BigRational;

    fn field(&self) -> Field {
        Field::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
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
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn to_scalar(&self, a: &BigRational) -> FieldScalar {
        FieldScalar::Rational(a.clone())
    }
    fn from_scalar(&self, s: &FieldScalar) -> Result<BigRational> {
        match s {
            FieldScalar::Rational(q) => Ok(q.clone()),
            other => Err(Error::CharacteristicMismatch { left: Field::Rational, right: other.field() }),
        }
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let n: i64 = rng.gen_range(-4..=4);
        let d: i64 = rng.gen_range(1..=3);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn mul_add(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
}

/// Render a rational as `n` or `n/d` with a positive denominator.
pub fn rational_parts(q: &BigRational) -> (BigInt, BigInt) {
    let d = q.denom().clone();
    if d.is_negative() {
        (-q.numer().clone(), -d)
    } else {
        (q.numer().clone(), d)
    }
}
