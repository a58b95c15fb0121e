//! Piecewise bilinear closed forms `a·pq + b·p + c·q + d`.

use std::fmt;
use std::str::FromStr;

use num_traits::Float;
use num_traits::FromPrimitive;
use thiserror::Error;

use crate::radical::{Coefficient, Radical};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("no piece covers (p, q) = ({p}, {q})")]
    NoCoveringPiece { p: i64, q: i64 },
    #[error("regions overlap on {0}")]
    Overlap(Region),
    #[error("no region covers {0}")]
    Gap(Region),
    #[error("region decompositions differ: [{left}] vs [{right}]")]
    RegionMismatch { left: String, right: String },
    #[error("cannot parse form {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Condition on one axis parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxisCondition {
    EqOne,
    GtOne,
    AtLeastOne,
}

impl AxisCondition {
    pub fn contains(self, value: i64) -> bool {
        match self {
            AxisCondition::EqOne => value == 1,
            AxisCondition::GtOne => value > 1,
            AxisCondition::AtLeastOne => value >= 1,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            AxisCondition::EqOne => "= 1",
            AxisCondition::GtOne => "> 1",
            AxisCondition::AtLeastOne => ">= 1",
        }
    }
}

/// A product of one condition on `p` and one on `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Region {
    pub p: AxisCondition,
    pub q: AxisCondition,
}

impl Region {
    pub const FULL: Region = Region { p: AxisCondition::AtLeastOne, q: AxisCondition::AtLeastOne };
    pub const P_ONE: Region = Region { p: AxisCondition::EqOne, q: AxisCondition::AtLeastOne };
    pub const P_MANY: Region = Region { p: AxisCondition::GtOne, q: AxisCondition::AtLeastOne };
    pub const Q_ONE: Region = Region { p: AxisCondition::AtLeastOne, q: AxisCondition::EqOne };
    pub const Q_MANY: Region = Region { p: AxisCondition::AtLeastOne, q: AxisCondition::GtOne };

    pub fn new(p: AxisCondition, q: AxisCondition) -> Self {
        Region { p, q }
    }

    pub fn contains(&self, p: i64, q: i64) -> bool {
        self.p.contains(p) && self.q.contains(q)
    }

    pub fn is_full(&self) -> bool {
        *self == Region::FULL
    }

    // The four cells {p=1, p>1} x {q=1, q>1}; every region is a union of them.
    fn cells() -> [Region; 4] {
        use AxisCondition::*;
        [
            Region::new(EqOne, EqOne),
            Region::new(EqOne, GtOne),
            Region::new(GtOne, EqOne),
            Region::new(GtOne, GtOne),
        ]
    }

    fn covers_cell(&self, cell: &Region) -> bool {
        // a representative point of each cell
        let p = if cell.p == AxisCondition::EqOne { 1 } else { 2 };
        let q = if cell.q == AxisCondition::EqOne { 1 } else { 2 };
        self.contains(p, q)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p {}, q {}", self.p.symbol(), self.q.symbol())
    }
}

impl FromStr for Region {
    type Err = FormError;

    /// Parses `p = 1, q >= 1`, `q > 1`, `p>1` and the like; an omitted axis
    /// means `>= 1`. `≥` is accepted for `>=`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| FormError::Parse { text: s.to_string(), reason: reason.to_string() };
        let mut region = Region::FULL;
        let mut seen = (false, false);
        let cleaned = s.replace('≥', ">=");
        for part in cleaned.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let compact: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let (axis, rest) = compact.split_at(1.min(compact.len()));
            let cond = match rest {
                "=1" | "==1" => AxisCondition::EqOne,
                ">1" => AxisCondition::GtOne,
                ">=1" => AxisCondition::AtLeastOne,
                _ => return Err(err("condition must be one of `= 1`, `> 1`, `>= 1`")),
            };
            match axis {
                "p" if !seen.0 => {
                    region.p = cond;
                    seen.0 = true;
                }
                "q" if !seen.1 => {
                    region.q = cond;
                    seen.1 = true;
                }
                "p" | "q" => return Err(err("axis constrained twice")),
                _ => return Err(err("expected `p` or `q`")),
            }
        }
        Ok(region)
    }
}

/// `pq·A + p·B + q·C + D` with radical coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bilinear<T> {
    pub pq: Radical<T>,
    pub p: Radical<T>,
    pub q: Radical<T>,
    pub constant: Radical<T>,
}

impl<T: Coefficient> Default for Bilinear<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> Bilinear<T> {
    pub fn new(pq: Radical<T>, p: Radical<T>, q: Radical<T>, constant: Radical<T>) -> Self {
        Bilinear { pq, p, q, constant }
    }

    pub fn zero() -> Self {
        Self::new(Radical::zero(), Radical::zero(), Radical::zero(), Radical::zero())
    }

    /// Integer-coefficient form, the shape of every counting formula.
    pub fn ints(pq: i64, p: i64, q: i64, constant: i64) -> Self {
        Self::new(Radical::int(pq), Radical::int(p), Radical::int(q), Radical::int(constant))
    }

    pub fn constant(value: Radical<T>) -> Self {
        Self::new(Radical::zero(), Radical::zero(), Radical::zero(), value)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_zero())
    }

    pub fn coefficients(&self) -> [&Radical<T>; 4] {
        [&self.pq, &self.p, &self.q, &self.constant]
    }

    /// True when all four coefficients are rational.
    pub fn is_rational(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_rational())
    }

    pub fn eval(&self, p: i64, q: i64) -> Radical<T> {
        let mut out = self.pq.scale_int(p * q);
        out += &self.p.scale_int(p);
        out += &self.q.scale_int(q);
        out += &self.constant;
        out
    }

    pub fn eval_float<F: Float + FromPrimitive>(&self, p: i64, q: i64) -> F {
        let pf = F::from_i64(p).unwrap_or_else(F::nan);
        let qf = F::from_i64(q).unwrap_or_else(F::nan);
        self.pq.to_float::<F>() * pf * qf
            + self.p.to_float::<F>() * pf
            + self.q.to_float::<F>() * qf
            + self.constant.to_float::<F>()
    }

    /// Every coefficient multiplied by `factor`.
    pub fn scale(&self, factor: &Radical<T>) -> Self {
        Self::new(&self.pq * factor, &self.p * factor, &self.q * factor, &self.constant * factor)
    }

    /// Canonical representative of this form as a function on `region`:
    /// on `p = 1` the `pq` and `p` terms fold into `q` and the constant, and
    /// symmetrically for `q = 1`.
    pub fn restrict(&self, region: Region) -> Self {
        let mut out = self.clone();
        if region.p == AxisCondition::EqOne {
            out.q = &out.q + &out.pq;
            out.constant = &out.constant + &out.p;
            out.pq = Radical::zero();
            out.p = Radical::zero();
        }
        if region.q == AxisCondition::EqOne {
            out.p = &out.p + &out.pq;
            out.constant = &out.constant + &out.q;
            out.pq = Radical::zero();
            out.q = Radical::zero();
        }
        out
    }
}

impl<T: Coefficient> std::ops::Add for &Bilinear<T> {
    type Output = Bilinear<T>;
    fn add(self, rhs: &Bilinear<T>) -> Bilinear<T> {
        Bilinear::new(&self.pq + &rhs.pq, &self.p + &rhs.p, &self.q + &rhs.q, &self.constant + &rhs.constant)
    }
}

impl<T: Coefficient> std::ops::Sub for &Bilinear<T> {
    type Output = Bilinear<T>;
    fn sub(self, rhs: &Bilinear<T>) -> Bilinear<T> {
        Bilinear::new(&self.pq - &rhs.pq, &self.p - &rhs.p, &self.q - &rhs.q, &self.constant - &rhs.constant)
    }
}

/// Coefficientwise difference `f − g`.
pub fn form_sub<T: Coefficient>(f: &Bilinear<T>, g: &Bilinear<T>) -> Bilinear<T> {
    f - g
}

fn write_coefficient<T: Coefficient>(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coefficient: &Radical<T>,
    monomial: &str,
) -> fmt::Result {
    let simple = coefficient.term_count() == 1;
    let negative = simple && coefficient.signum_approx() < 0;
    let shown = if negative { -coefficient } else { coefficient.clone() };
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    let body = if simple { shown.to_string() } else { format!("({shown})") };
    if monomial.is_empty() {
        f.write_str(&body)
    } else {
        write!(f, "{body}*{monomial}")
    }
}

impl<T: Coefficient> fmt::Display for Bilinear<T> {
    /// `A*pq + B*p + C*q + D`, zero terms omitted; multi-term coefficients
    /// are parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (c, m) in [(&self.pq, "pq"), (&self.p, "p"), (&self.q, "q"), (&self.constant, "")] {
            if c.is_zero() {
                continue;
            }
            write_coefficient(f, first, c, m)?;
            first = false;
        }
        Ok(())
    }
}

impl<T: Coefficient> FromStr for Bilinear<T> {
    type Err = FormError;

    /// Parses rational-coefficient forms such as `12pq - 2p - 3q + 1`,
    /// `3/2*q`, `6p - 1 + 8q - 8`, or `0`. Like terms are merged.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational_form(s)
    }
}

fn parse_rational_form<T: Coefficient>(s: &str) -> Result<Bilinear<T>, FormError> {
    let err = |reason: String| FormError::Parse { text: s.to_string(), reason };
    let chars: Vec<char> = s.chars().collect();
    for (i, c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            let before = chars[..i].iter().rev().find(|c| !c.is_whitespace());
            let after = chars[i..].iter().find(|c| !c.is_whitespace());
            if matches!((before, after), (Some(b), Some(a)) if b.is_ascii_digit() && a.is_ascii_digit()) {
                return Err(err(format!("whitespace inside number at offset {i}")));
            }
        }
    }
    let text: String = chars
        .iter()
        .filter(|c| !c.is_whitespace())
        .map(|&c| if c == '−' { '-' } else { c })
        .collect();
    if text.is_empty() {
        return Err(err("empty form".into()));
    }
    let mut out = Bilinear::<T>::zero();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(err(format!("expected `+` or `-` at offset {i}")));
        }
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/' || bytes[i] == b'.') {
            i += 1;
        }
        let number = &text[start..i];
        let coefficient = if number.is_empty() {
            T::one()
        } else {
            parse_rational::<T>(number).ok_or_else(|| err(format!("bad number {number:?}")))?
        };
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let mono_start = i;
        while i < bytes.len() && matches!(bytes[i], b'p' | b'q' | b'*') {
            i += 1;
        }
        let monomial: String = text[mono_start..i].chars().filter(|&c| c != '*').collect();
        if number.is_empty() && monomial.is_empty() {
            return Err(err(format!("empty term at offset {start}")));
        }
        let value = Radical::rational(coefficient * T::from_i64(sign).expect("sign"));
        let slot = match monomial.as_str() {
            "" => &mut out.constant,
            "p" => &mut out.p,
            "q" => &mut out.q,
            "pq" | "qp" => &mut out.pq,
            other => return Err(err(format!("unsupported monomial {other:?}"))),
        };
        *slot = &*slot + &value;
    }
    Ok(out)
}

/// Parses `n`, `n/d` or a terminating decimal `a.b` exactly.
pub(crate) fn parse_rational<T: Coefficient>(text: &str) -> Option<T> {
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.parse().ok()?;
        let d: i64 = d.parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(T::from_i64(n)? / T::from_i64(d)?);
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole: i64 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
        let frac_value: i64 = frac.parse().ok()?;
        let scale = T::from_i64(10i64.checked_pow(frac.len() as u32)?)?;
        return Some(T::from_i64(whole)? + T::from_i64(frac_value)? / scale);
    }
    T::from_i64(text.parse().ok()?)
}

/// A region with the matching piece from each side.
pub type AlignedPiece<'a, T> = (Region, &'a Bilinear<T>, &'a Bilinear<T>);

/// An ordered list of `(Region, Bilinear)` pieces covering every `p, q ≥ 1`
/// exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piecewise<T> {
    pieces: Vec<(Region, Bilinear<T>)>,
}

impl<T: Coefficient> Piecewise<T> {
    /// Validates that the regions tile `p, q ≥ 1` without overlap.
    pub fn new(pieces: Vec<(Region, Bilinear<T>)>) -> Result<Self, FormError> {
        for cell in Region::cells() {
            let covering = pieces.iter().filter(|(r, _)| r.covers_cell(&cell)).count();
            match covering {
                0 => return Err(FormError::Gap(cell)),
                1 => {}
                _ => return Err(FormError::Overlap(cell)),
            }
        }
        Ok(Piecewise { pieces })
    }

    pub fn single(form: Bilinear<T>) -> Self {
        Piecewise { pieces: vec![(Region::FULL, form)] }
    }

    pub fn zero() -> Self {
        Self::single(Bilinear::zero())
    }

    /// Two-branch form split on `p = 1` / `p > 1`.
    pub fn split_p(at_one: Bilinear<T>, above_one: Bilinear<T>) -> Self {
        Piecewise { pieces: vec![(Region::P_ONE, at_one), (Region::P_MANY, above_one)] }
    }

    /// Two-branch form split on `q = 1` / `q > 1`.
    pub fn split_q(at_one: Bilinear<T>, above_one: Bilinear<T>) -> Self {
        Piecewise { pieces: vec![(Region::Q_ONE, at_one), (Region::Q_MANY, above_one)] }
    }

    pub fn pieces(&self) -> &[(Region, Bilinear<T>)] {
        &self.pieces
    }

    pub fn regions(&self) -> Vec<Region> {
        self.pieces.iter().map(|(r, _)| *r).collect()
    }

    pub fn is_single(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].0.is_full()
    }

    pub fn piece_at(&self, p: i64, q: i64) -> Result<&Bilinear<T>, FormError> {
        self.pieces
            .iter()
            .find(|(r, _)| r.contains(p, q))
            .map(|(_, f)| f)
            .ok_or(FormError::NoCoveringPiece { p, q })
    }

    pub fn eval(&self, p: i64, q: i64) -> Result<Radical<T>, FormError> {
        Ok(self.piece_at(p, q)?.eval(p, q))
    }

    pub fn eval_float<F: Float + FromPrimitive>(&self, p: i64, q: i64) -> Result<F, FormError> {
        Ok(self.piece_at(p, q)?.eval_float(p, q))
    }

    /// Pairs up pieces of `self` and `other`. Succeeds when both use the same
    /// region list (in any order) or when one side is a single unconditional
    /// piece, which is then broadcast over the other side's regions.
    pub fn align<'a>(
        &'a self,
        other: &'a Piecewise<T>,
    ) -> Result<Vec<AlignedPiece<'a, T>>, FormError> {
        if other.is_single() {
            return Ok(self.pieces.iter().map(|(r, f)| (*r, f, &other.pieces[0].1)).collect());
        }
        if self.is_single() {
            return Ok(other.pieces.iter().map(|(r, g)| (*r, &self.pieces[0].1, g)).collect());
        }
        let mut left = self.regions();
        let mut right = other.regions();
        left.sort();
        right.sort();
        if left != right {
            return Err(FormError::RegionMismatch {
                left: render_regions(&self.regions()),
                right: render_regions(&other.regions()),
            });
        }
        Ok(self
            .pieces
            .iter()
            .map(|(r, f)| {
                let g = other.pieces.iter().find(|(s, _)| s == r).map(|(_, g)| g).expect("aligned");
                (*r, f, g)
            })
            .collect())
    }

    fn combine(
        &self,
        other: &Piecewise<T>,
        op: impl Fn(&Bilinear<T>, &Bilinear<T>) -> Bilinear<T>,
    ) -> Result<Piecewise<T>, FormError> {
        let pieces = self
            .align(other)?
            .into_iter()
            .map(|(r, f, g)| (r, op(f, g).restrict(r)))
            .collect();
        Ok(Piecewise { pieces })
    }

    /// Region-aligned difference; each piece is restricted to its region.
    pub fn sub(&self, other: &Piecewise<T>) -> Result<Piecewise<T>, FormError> {
        self.combine(other, |f, g| f - g)
    }

    pub fn add(&self, other: &Piecewise<T>) -> Result<Piecewise<T>, FormError> {
        self.combine(other, |f, g| f + g)
    }

    pub fn scale(&self, factor: &Radical<T>) -> Piecewise<T> {
        Piecewise { pieces: self.pieces.iter().map(|(r, f)| (*r, f.scale(factor))).collect() }
    }

    /// True when every piece vanishes as a function on its region.
    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|(r, f)| f.restrict(*r).is_zero())
    }

    /// Pieces restricted to their regions.
    pub fn restricted(&self) -> Piecewise<T> {
        Piecewise { pieces: self.pieces.iter().map(|(r, f)| (*r, f.restrict(*r))).collect() }
    }
}

fn render_regions(regions: &[Region]) -> String {
    regions.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; ")
}

impl<T: Coefficient> fmt::Display for Piecewise<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (r, form)) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{form} [{r}]")?;
        }
        Ok(())
    }
}
