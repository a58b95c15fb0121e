use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::{rational_to_f64, BinOp, DslError, Var, WeightExpr};
use crate::RadicalNumber;

/// Result of evaluating a weight: exact when it stays in the radical field,
/// otherwise a floating approximation.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(RadicalNumber),
    Real(f64),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Exact(RadicalNumber::int(n))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64(),
            Value::Real(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&RadicalNumber> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Real(_) => None,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_zero(),
            Value::Real(x) => *x == 0.0,
        }
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a + b),
            _ => Value::Real(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a - b),
            _ => Value::Real(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a * b),
            _ => Value::Real(self.to_f64() * other.to_f64()),
        }
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(-a),
            Value::Real(x) => Value::Real(-x),
        }
    }

    /// Division stays exact only for a rational divisor.
    pub fn div(&self, other: &Value) -> Result<Value, DslError> {
        if other.is_zero() {
            return Err(DslError::DivisionByZero);
        }
        if let (Value::Exact(a), Value::Exact(b)) = (self, other) {
            if let Some(divisor) = b.as_rational() {
                return Ok(Value::Exact(a.scale(&divisor.recip())));
            }
        }
        Ok(Value::Real(self.to_f64() / other.to_f64()))
    }

    /// `sqrt(r)` for a non-negative rational `r = n/d` is `sqrt(n·d)/d`,
    /// reduced to `s·sqrt(t)` with `t` square-free.
    pub fn sqrt(&self) -> Result<Value, DslError> {
        if let Value::Exact(a) = self {
            if let Some(r) = a.as_rational() {
                if r.is_negative() {
                    return Err(DslError::NegativeSqrt);
                }
                let product: BigInt = r.numer() * r.denom();
                if let Some(n) = product.to_u64() {
                    let scale = BigRational::new(BigInt::one(), r.denom().clone());
                    return Ok(Value::Exact(RadicalNumber::term(scale, n)));
                }
                return Ok(Value::Real(rational_to_f64(&r).sqrt()));
            }
        }
        let x = self.to_f64();
        if x < 0.0 {
            return Err(DslError::NegativeSqrt);
        }
        Ok(Value::Real(x.sqrt()))
    }

    pub fn pow(&self, exponent: i64) -> Result<Value, DslError> {
        if exponent < 0 && self.is_zero() {
            return Err(DslError::DivisionByZero);
        }
        let magnitude = exponent.unsigned_abs();
        match self {
            Value::Exact(base) => {
                let mut result = RadicalNumber::one();
                let mut square = base.clone();
                let mut rest = magnitude;
                while rest > 0 {
                    if rest & 1 == 1 {
                        result = &result * &square;
                    }
                    rest >>= 1;
                    if rest > 0 {
                        square = &square * &square;
                    }
                }
                if exponent >= 0 {
                    Ok(Value::Exact(result))
                } else {
                    Value::int(1).div(&Value::Exact(result))
                }
            }
            Value::Real(x) => {
                let e = i32::try_from(exponent).map_err(|_| DslError::ExponentRange(exponent))?;
                Ok(Value::Real(x.powi(e)))
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Real(x) => write!(f, "{x}"),
        }
    }
}

/// Bottom-up evaluation at degrees `(du, dv)`.
pub fn eval_weight(expr: &WeightExpr, du: u32, dv: u32) -> Result<Value, DslError> {
    Ok(match expr {
        WeightExpr::Literal(r) => Value::Exact(RadicalNumber::rational(r.clone())),
        WeightExpr::Var(Var::Du) => Value::int(du.into()),
        WeightExpr::Var(Var::Dv) => Value::int(dv.into()),
        WeightExpr::Neg(e) => eval_weight(e, du, dv)?.neg(),
        WeightExpr::Sqrt(e) => eval_weight(e, du, dv)?.sqrt()?,
        WeightExpr::Pow(e, n) => eval_weight(e, du, dv)?.pow(*n)?,
        WeightExpr::Binary(op, a, b) => {
            let a = eval_weight(a, du, dv)?;
            let b = eval_weight(b, du, dv)?;
            match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                BinOp::Mul => a.mul(&b),
                BinOp::Div => a.div(&b)?,
            }
        }
    })
}
