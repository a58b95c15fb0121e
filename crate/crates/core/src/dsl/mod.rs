//! A small expression language for edge weights `w(du, dv)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! exponent := '-'? INT ('^' exponent)?      right-associative, folded
//! atom   := NUMBER | 'du' | 'dv' | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Numbers are exact: integers or terminating decimals.

mod eval;
mod parser;

pub use eval::{eval_weight, Value};
pub use parser::parse_weight;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("parse error at offset {position}: {message} (expected {})", expected.join(", "))]
    Parse { position: usize, message: String, expected: Vec<String> },
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeSqrt,
    #[error("exponent {0} is out of range")]
    ExponentRange(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Du,
    Dv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Parsed weight expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WeightExpr {
    Literal(BigRational),
    Var(Var),
    Neg(Box<WeightExpr>),
    Sqrt(Box<WeightExpr>),
    Binary(BinOp, Box<WeightExpr>, Box<WeightExpr>),
    Pow(Box<WeightExpr>, i64),
}

// binding strength used by the renderer: 1 +-, 2 */, 3 unary minus, 4 ^, 5 atoms
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl WeightExpr {
    pub fn binary(op: BinOp, lhs: WeightExpr, rhs: WeightExpr) -> Self {
        WeightExpr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    fn precedence(&self) -> u8 {
        match self {
            WeightExpr::Binary(op, ..) => op.precedence(),
            WeightExpr::Neg(_) => PREC_NEG,
            WeightExpr::Pow(..) => PREC_POW,
            // rendered as `n/d`, so it binds like a division
            WeightExpr::Literal(r) if !r.is_integer() && !is_terminating(r) => BinOp::Div.precedence(),
            _ => PREC_ATOM,
        }
    }

    /// True when no `sqrt` occurs anywhere below this node.
    fn is_sqrt_free(&self) -> bool {
        match self {
            WeightExpr::Literal(_) | WeightExpr::Var(_) => true,
            WeightExpr::Sqrt(_) => false,
            WeightExpr::Neg(e) | WeightExpr::Pow(e, _) => e.is_sqrt_free(),
            WeightExpr::Binary(_, a, b) => a.is_sqrt_free() && b.is_sqrt_free(),
        }
    }

    /// Syntactic guarantee that evaluation at integer degrees stays inside
    /// the radical field: every `sqrt` argument, every divisor and every base
    /// raised to a negative power is free of `sqrt`.
    pub fn is_radical_closed(&self) -> bool {
        match self {
            WeightExpr::Literal(_) | WeightExpr::Var(_) => true,
            WeightExpr::Sqrt(e) => e.is_sqrt_free(),
            WeightExpr::Neg(e) => e.is_radical_closed(),
            WeightExpr::Pow(e, n) => e.is_radical_closed() && (*n >= 0 || e.is_sqrt_free()),
            WeightExpr::Binary(BinOp::Div, a, b) => a.is_radical_closed() && b.is_sqrt_free(),
            WeightExpr::Binary(_, a, b) => a.is_radical_closed() && b.is_radical_closed(),
        }
    }
}

fn is_terminating(r: &BigRational) -> bool {
    let mut d = r.denom().clone();
    let two = num_bigint::BigInt::from(2u32);
    let five = num_bigint::BigInt::from(5u32);
    while (&d % &two).is_zero() {
        d /= &two;
    }
    while (&d % &five).is_zero() {
        d /= &five;
    }
    d.is_one()
}

fn render_literal(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_negative() {
        // only reachable for programmatically built trees
        f.write_str("-")?;
    }
    let r = r.abs();
    if r.is_integer() {
        return write!(f, "{}", r.numer());
    }
    if is_terminating(&r) {
        // scale by 10^k until integral
        let mut digits = 0usize;
        let mut scaled = r.clone();
        let ten = BigRational::from_integer(10.into());
        while !scaled.is_integer() {
            scaled *= &ten;
            digits += 1;
        }
        let text = scaled.to_integer().to_string();
        let padded = format!("{text:0>width$}", width = digits + 1);
        let (whole, frac) = padded.split_at(padded.len() - digits);
        return write!(f, "{whole}.{frac}");
    }
    write!(f, "{}/{}", r.numer(), r.denom())
}

impl fmt::Display for WeightExpr {
    /// Minimal-parenthesis rendering that re-parses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &WeightExpr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            WeightExpr::Literal(r) => render_literal(r, f),
            WeightExpr::Var(Var::Du) => f.write_str("du"),
            WeightExpr::Var(Var::Dv) => f.write_str("dv"),
            WeightExpr::Sqrt(e) => write!(f, "sqrt({e})"),
            WeightExpr::Neg(e) => {
                f.write_str("-")?;
                child(f, e, PREC_NEG)
            }
            WeightExpr::Pow(base, n) => {
                child(f, base, PREC_ATOM)?;
                write!(f, "^{n}")
            }
            WeightExpr::Binary(op, a, b) => {
                let p = op.precedence();
                child(f, a, p)?;
                write!(f, " {} ", op.symbol())?;
                // left-associative: an equal-precedence right operand needs parens
                child(f, b, p + 1)
            }
        }
    }
}

/// Converts an exact value to `f64` for the `Real` path.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
