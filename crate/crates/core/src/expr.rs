//! A small expression language for matrix entries and potentials.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          right associative, integer exponent
//! atom   := number | ident | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | sqrt | abs
//! ident  := t | x | i | pi
//! ```
//!
//! Values are complex so that `i` can appear in off-diagonal entries.
//! `x` is only accepted where the caller allows it (potentials).

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier '{name}' at {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("exponent {value} is not an integer")]
    NonIntegerExponent { value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Imag,
    Var(Var),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    source: String,
    root: Node,
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Parses an expression in the single variable `t`.
pub fn parse_expression(src: &str) -> Result<Expression, ExprError> {
    Expression::parse_with(src, &[Var::T])
}

impl Expression {
    pub fn parse_with(src: &str, vars: &[Var]) -> Result<Self, ExprError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            vars,
        };
        p.skip_ws();
        if p.pos == p.src.len() {
            return Err(ExprError::Syntax {
                position: 0,
                message: "empty expression".into(),
            });
        }
        let root = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Self {
            source: src.trim().to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// True when `x` occurs.
    pub fn uses_x(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Var(Var::X) => true,
                Node::Num(_) | Node::Imag | Node::Var(_) => false,
                Node::Neg(a) | Node::Call(_, a) => walk(a),
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                    walk(a) || walk(b)
                }
            }
        }
        walk(&self.root)
    }

    pub fn eval(&self, t: f64) -> Result<Complex64, ExprError> {
        self.eval_at(t, 0.0)
    }

    pub fn eval_at(&self, t: f64, x: f64) -> Result<Complex64, ExprError> {
        eval(&self.root, t, x)
    }

    /// Real part of the value; the imaginary part is returned separately
    /// so callers can decide what counts as real.
    pub fn eval_real(&self, t: f64, x: f64) -> Result<(f64, f64), ExprError> {
        let z = self.eval_at(t, x)?;
        Ok((z.re, z.im))
    }
}

fn eval(n: &Node, t: f64, x: f64) -> Result<Complex64, ExprError> {
    Ok(match n {
        Node::Num(v) => Complex64::new(*v, 0.0),
        Node::Imag => Complex64::new(0.0, 1.0),
        Node::Var(Var::T) => Complex64::new(t, 0.0),
        Node::Var(Var::X) => Complex64::new(x, 0.0),
        Node::Neg(a) => -eval(a, t, x)?,
        Node::Add(a, b) => eval(a, t, x)? + eval(b, t, x)?,
        Node::Sub(a, b) => eval(a, t, x)? - eval(b, t, x)?,
        Node::Mul(a, b) => eval(a, t, x)? * eval(b, t, x)?,
        Node::Div(a, b) => eval(a, t, x)? / eval(b, t, x)?,
        Node::Pow(a, b) => {
            let base = eval(a, t, x)?;
            let e = eval(b, t, x)?;
            if e.im != 0.0 || e.re.fract() != 0.0 || e.re.abs() > i32::MAX as f64 {
                return Err(ExprError::NonIntegerExponent { value: e.to_string() });
            }
            let k = e.re as i32;
            if base.im == 0.0 {
                Complex64::new(base.re.powi(k), 0.0)
            } else {
                base.powi(k)
            }
        }
        Node::Call(f, a) => {
            let v = eval(a, t, x)?;
            let real = v.im == 0.0;
            match f {
                Func::Sin if real => Complex64::new(v.re.sin(), 0.0),
                Func::Cos if real => Complex64::new(v.re.cos(), 0.0),
                Func::Exp if real => Complex64::new(v.re.exp(), 0.0),
                Func::Sqrt if real && v.re >= 0.0 => Complex64::new(v.re.sqrt(), 0.0),
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Exp => v.exp(),
                Func::Sqrt => v.sqrt(),
                Func::Abs => Complex64::new(v.norm(), 0.0),
            }
        }
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [Var],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' {
                Node::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == b'*' {
                Node::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).expect("ascii");
        let v: f64 = text.parse().map_err(|_| ExprError::Syntax {
            position: start,
            message: format!("malformed number '{text}'"),
        })?;
        self.pos = i;
        Ok(Node::Num(v))
    }

    fn ident(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if let Some(f) = Func::from_name(name) {
            if self.peek() != Some(b'(') {
                return Err(self.error(&format!("expected '(' after {}", f.name())));
            }
            self.pos += 1;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(Node::Call(f, Box::new(arg)));
        }
        let var = match name {
            "t" => Some(Var::T),
            "x" => Some(Var::X),
            "i" => return Ok(Node::Imag),
            "pi" => return Ok(Node::Num(std::f64::consts::PI)),
            _ => None,
        };
        match var {
            Some(v) if self.vars.contains(&v) => Ok(Node::Var(v)),
            _ => Err(ExprError::UnknownIdentifier {
                name: name.to_string(),
                position: start,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(src: &str, t: f64) -> f64 {
        let z = parse_expression(src).unwrap().eval(t).unwrap();
        assert_eq!(z.im, 0.0);
        z.re
    }

    #[test]
    fn polynomial() {
        assert_eq!(val("t^2+1", 2.0), 5.0);
    }

    #[test]
    fn sine() {
        assert_eq!(val("sin(t)/2", 0.0), 0.0);
    }

    #[test]
    fn nested_integer_power() {
        assert_eq!(val("2^(-(3*3))", 17.0), 1.0 / 512.0);
    }

    #[test]
    fn precedence() {
        assert_eq!(val("-2^2", 0.0), -4.0);
        assert_eq!(val("2^3^2", 0.0), 512.0);
        assert_eq!(val("1-2-3", 0.0), -4.0);
        assert_eq!(val("8/2/2", 0.0), 2.0);
        assert_eq!(val("2*-t", 3.0), -6.0);
        assert_eq!(val("1.5e1 + abs(-t)", 2.0), 17.0);
    }

    #[test]
    fn imaginary_unit() {
        let z = parse_expression("t*i").unwrap().eval(2.0).unwrap();
        assert_eq!(z, Complex64::new(0.0, 2.0));
        assert_eq!(val("i*i", 0.0), -1.0);
    }

    #[test]
    fn errors_carry_position() {
        match parse_expression("t + * 2") {
            Err(ExprError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        match parse_expression("t + y") {
            Err(ExprError::UnknownIdentifier { name, position }) => {
                assert_eq!(name, "y");
                assert_eq!(position, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_expression("").is_err());
        assert!(parse_expression("(t").is_err());
        assert!(parse_expression("sin t").is_err());
        assert!(parse_expression("x").is_err());
        assert!(Expression::parse_with("t*x", &[Var::T, Var::X]).is_ok());
    }

    #[test]
    fn non_integer_exponent_is_rejected() {
        let e = parse_expression("2^t").unwrap();
        assert!(e.eval(2.0).is_ok());
        assert!(matches!(e.eval(0.5), Err(ExprError::NonIntegerExponent { .. })));
    }
}
