//! Exact arithmetic over rational linear combinations of square roots.
//!
//! A [`Radical`] is a finite sum `c1*sqrt(k1) + c2*sqrt(k2) + ...` where every
//! radicand `k` is a square-free positive integer and every coefficient is a
//! non-zero element of the coefficient field `T`. Radicand `1` carries the
//! rational part. Because the representation is canonical, structural
//! equality is numeric equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_integer::Integer;
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Coefficient field for radical numbers.
///
/// Blanket-implemented for every exact signed numeric type with the listed
/// capabilities, in practice `BigRational` and `Rational64`.
pub trait Coefficient:
    Clone + Num + Signed + FromPrimitive + ToPrimitive + Ord + fmt::Debug + fmt::Display + Send + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Ord
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
{
}

/// Splits `n` into `(s, t)` with `n = s² · t` and `t` square-free.
///
/// `square_free_decompose(0)` is `(0, 1)`.
pub fn square_free_decompose(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut rest = n;
    let mut square_root_part = 1u64;
    let mut free_part = 1u64;
    let mut prime = 2u64;
    while prime.saturating_mul(prime) <= rest {
        let mut exponent = 0u32;
        while rest.is_multiple_of(prime) {
            rest /= prime;
            exponent += 1;
        }
        if exponent > 0 {
            square_root_part *= prime.pow(exponent / 2);
            if exponent % 2 == 1 {
                free_part *= prime;
            }
        }
        prime += if prime == 2 { 1 } else { 2 };
    }
    free_part *= rest;
    (square_root_part, free_part)
}

pub fn is_square_free(n: u64) -> bool {
    n >= 1 && square_free_decompose(n).0 == 1
}

/// An exact element of the span of `{sqrt(k) : k square-free}` over `T`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Radical<T> {
    terms: BTreeMap<u64, T>,
}

impl<T: Coefficient> Default for Radical<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> Radical<T> {
    pub fn zero() -> Self {
        Radical { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::rational(T::one())
    }

    pub fn rational(value: T) -> Self {
        Self::term(value, 1)
    }

    pub fn int(value: i64) -> Self {
        Self::rational(T::from_i64(value).expect("i64 fits the coefficient type"))
    }

    /// `coefficient * sqrt(radicand)`, with the radicand reduced to its
    /// square-free part.
    ///
    /// A zero radicand yields zero.
    pub fn term(coefficient: T, radicand: u64) -> Self {
        let mut out = Self::zero();
        if radicand == 0 || coefficient.is_zero() {
            return out;
        }
        let (outer, inner) = square_free_decompose(radicand);
        let scaled = coefficient * T::from_u64(outer).expect("square part fits the coefficient type");
        out.accumulate(inner, scaled);
        out
    }

    /// Exact square root of a non-negative integer.
    pub fn sqrt_int(n: u64) -> Self {
        Self::term(T::one(), n)
    }

    /// Builds a value from arbitrary `(radicand, coefficient)` pairs,
    /// merging like terms after radicand reduction.
    pub fn from_terms<I: IntoIterator<Item = (u64, T)>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (radicand, coefficient)| acc + Self::term(coefficient, radicand))
    }

    fn accumulate(&mut self, radicand: u64, coefficient: T) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.remove(&radicand) {
            Some(existing) => {
                let sum = existing + coefficient;
                if !sum.is_zero() {
                    self.terms.insert(radicand, sum);
                }
            }
            None => {
                self.terms.insert(radicand, coefficient);
            }
        }
    }

    /// Terms in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &T)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, radicand: u64) -> T {
        self.terms.get(&radicand).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&k| k == 1)
    }

    /// The value as an element of `T`, if it has no irrational part.
    pub fn as_rational(&self) -> Option<T> {
        if self.is_rational() {
            Some(self.coefficient(1))
        } else {
            None
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Radical {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.clone() * factor.clone()))
                .collect(),
        }
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&T::from_i64(factor).expect("i64 fits the coefficient type"))
    }

    /// Sum of `coefficient * sqrt(radicand)` in ascending radicand order.
    pub fn to_float<F: Float + FromPrimitive>(&self) -> F {
        self.terms.iter().fold(F::zero(), |acc, (k, c)| {
            let coefficient = F::from_f64(c.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan);
            let root = if *k == 1 {
                F::one()
            } else {
                F::from_u64(*k).unwrap_or_else(F::nan).sqrt()
            };
            acc + coefficient * root
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float::<f64>()
    }

    /// Sign of the represented real number, decided exactly where the value
    /// is rational and from the floating approximation otherwise.
    pub fn signum_approx(&self) -> i32 {
        if let Some(r) = self.as_rational() {
            return if r.is_positive() { 1 } else if r.is_negative() { -1 } else { 0 };
        }
        let v = self.to_f64();
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    }
}

fn multiply_radicands(a: u64, b: u64) -> (u64, u64) {
    // both square-free: a*b = g^2 * (a/g)(b/g) with (a/g)(b/g) square-free
    let g = a.gcd(&b);
    let radicand = (a / g)
        .checked_mul(b / g)
        .expect("radicand product overflows u64");
    (g, radicand)
}

impl<T: Coefficient> Zero for Radical<T> {
    fn zero() -> Self {
        Radical::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Coefficient> One for Radical<T> {
    fn one() -> Self {
        Radical::one()
    }
}

impl<T: Coefficient> AddAssign<&Radical<T>> for Radical<T> {
    fn add_assign(&mut self, rhs: &Radical<T>) {
        for (k, c) in &rhs.terms {
            self.accumulate(*k, c.clone());
        }
    }
}

impl<T: Coefficient> SubAssign<&Radical<T>> for Radical<T> {
    fn sub_assign(&mut self, rhs: &Radical<T>) {
        for (k, c) in &rhs.terms {
            self.accumulate(*k, -c.clone());
        }
    }
}

impl<T: Coefficient> Add for &Radical<T> {
    type Output = Radical<T>;
    fn add(self, rhs: &Radical<T>) -> Radical<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Coefficient> Add for Radical<T> {
    type Output = Radical<T>;
    fn add(mut self, rhs: Radical<T>) -> Radical<T> {
        self += &rhs;
        self
    }
}

impl<T: Coefficient> Sub for &Radical<T> {
    type Output = Radical<T>;
    fn sub(self, rhs: &Radical<T>) -> Radical<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Coefficient> Sub for Radical<T> {
    type Output = Radical<T>;
    fn sub(mut self, rhs: Radical<T>) -> Radical<T> {
        self -= &rhs;
        self
    }
}

impl<T: Coefficient> Neg for &Radical<T> {
    type Output = Radical<T>;
    fn neg(self) -> Radical<T> {
        Radical {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl<T: Coefficient> Neg for Radical<T> {
    type Output = Radical<T>;
    fn neg(self) -> Radical<T> {
        -&self
    }
}

impl<T: Coefficient> Mul for &Radical<T> {
    type Output = Radical<T>;
    fn mul(self, rhs: &Radical<T>) -> Radical<T> {
        let mut out = Radical::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let (outer, radicand) = multiply_radicands(*ka, *kb);
                let factor = T::from_u64(outer).expect("gcd fits the coefficient type");
                out.accumulate(radicand, ca.clone() * cb.clone() * factor);
            }
        }
        out
    }
}

impl<T: Coefficient> Mul for Radical<T> {
    type Output = Radical<T>;
    fn mul(self, rhs: Radical<T>) -> Radical<T> {
        &self * &rhs
    }
}

impl<T: Coefficient> std::iter::Sum for Radical<T> {
    fn sum<I: Iterator<Item = Radical<T>>>(iter: I) -> Self {
        iter.fold(Radical::zero(), |acc, x| acc + x)
    }
}

impl<T: Coefficient> fmt::Display for Radical<T> {
    /// `c1*sqrt(k1) + c2*sqrt(k2) + ...`, ascending radicand, with the
    /// rational part printed bare and negative terms joined by ` - `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *k == 1 {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*sqrt({k})")?;
            }
        }
        Ok(())
    }
}
