use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{BinOp, DslError, Var, WeightExpr};

const MAX_EXPONENT: i64 = 1024;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(_) => "number".into(),
            Token::Ident(name) => format!("`{name}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn error(position: usize, message: impl Into<String>, expected: &[&str]) -> DslError {
    DslError::Parse {
        position,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, DslError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(token) = single {
            out.push((start, token));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut frac_digits = 0usize;
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                    frac_digits += 1;
                }
                if frac_digits == 0 {
                    return Err(error(i, "malformed number", &["digit"]));
                }
            }
            let digits: String = text[start..i].chars().filter(|&ch| ch != '.').collect();
            let numerator: BigInt = digits.parse().map_err(|_| error(start, "malformed number", &["number"]))?;
            let denominator = num_traits::pow(BigInt::from(10), frac_digits);
            out.push((start, Token::Number(BigRational::new(numerator, denominator))));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Token::Ident(text[start..i].to_string())));
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(error(
            start,
            format!("unexpected character {ch:?}"),
            &["number", "du", "dv", "sqrt", "operator", "(", ")"],
        ));
    }
    out.push((text.len(), Token::End));
    Ok(out)
}

const ATOM_START: &[&str] = &["number", "du", "dv", "sqrt", "(", "-"];

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor].1
    }

    fn position(&self) -> usize {
        self.tokens[self.cursor].0
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.cursor].1.clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        token
    }

    fn unexpected(&self, expected: &[&str]) -> DslError {
        let message = match self.peek() {
            Token::End => "unexpected end of input".to_string(),
            other => format!("unexpected {}", other.describe()),
        };
        error(self.position(), message, expected)
    }

    fn expect(&mut self, token: Token, label: &str) -> Result<(), DslError> {
        if *self.peek() == token {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    fn expr(&mut self) -> Result<WeightExpr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = WeightExpr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<WeightExpr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = WeightExpr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<WeightExpr, DslError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(WeightExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<WeightExpr, DslError> {
        let base = self.atom()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let exponent = self.exponent()?;
            return Ok(WeightExpr::Pow(Box::new(base), exponent));
        }
        Ok(base)
    }

    /// `'-'? INT ('^' exponent)?`, folded to a single integer.
    fn exponent(&mut self) -> Result<i64, DslError> {
        let start = self.position();
        let negative = if *self.peek() == Token::Minus {
            self.bump();
            true
        } else {
            false
        };
        let magnitude = match self.peek().clone() {
            Token::Number(r) if r.is_integer() => {
                self.bump();
                r.to_integer()
            }
            Token::Number(_) => return Err(error(self.position(), "exponent must be an integer", &["integer"])),
            _ => return Err(self.unexpected(&["integer"])),
        };
        let mut value: BigInt = magnitude;
        if *self.peek() == Token::Caret {
            self.bump();
            let inner = self.exponent()?;
            if inner < 0 {
                if value.is_one() {
                    // 1^(-k) = 1
                } else {
                    return Err(error(start, "integer exponent tower with a negative power", &["integer"]));
                }
            } else {
                let inner = u32::try_from(inner).map_err(|_| error(start, "exponent out of range", &["integer"]))?;
                value = num_traits::pow(value, inner as usize);
            }
        }
        if negative {
            value = -value;
        }
        let value: i64 = i64::try_from(value).map_err(|_| error(start, "exponent out of range", &["integer"]))?;
        if value.abs() > MAX_EXPONENT {
            return Err(error(start, format!("exponent {value} exceeds {MAX_EXPONENT} in magnitude"), &["integer"]));
        }
        Ok(value)
    }

    fn atom(&mut self) -> Result<WeightExpr, DslError> {
        match self.peek().clone() {
            Token::Number(r) => {
                self.bump();
                Ok(WeightExpr::Literal(r))
            }
            Token::Ident(name) => match name.as_str() {
                "du" => {
                    self.bump();
                    Ok(WeightExpr::Var(Var::Du))
                }
                "dv" => {
                    self.bump();
                    Ok(WeightExpr::Var(Var::Dv))
                }
                "sqrt" => {
                    self.bump();
                    self.expect(Token::LParen, "(")?;
                    let inner = self.expr()?;
                    self.expect(Token::RParen, ")")?;
                    Ok(WeightExpr::Sqrt(Box::new(inner)))
                }
                _ => Err(error(self.position(), format!("unknown identifier `{name}`"), &["du", "dv", "sqrt"])),
            },
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Token::RParen, ")")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(ATOM_START)),
        }
    }
}

/// Parses a weight expression over the variables `du` and `dv`.
pub fn parse_weight(text: &str) -> Result<WeightExpr, DslError> {
    let mut parser = Parser { tokens: tokenize(text)?, cursor: 0 };
    if *parser.peek() == Token::End {
        return Err(parser.unexpected(ATOM_START));
    }
    let expr = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected(&["operator", "end of input"]));
    }
    Ok(expr)
}
