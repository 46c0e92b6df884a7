//! Arithmetic expressions over a distribution point.
//!
//! Reward functions are written as small arithmetic expressions in the
//! variables `u0..u9` (coordinates of a [`crate::DistPoint`]). Grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := NUMBER | VAR | FUNC '(' expr (',' expr)* ')' | '(' expr ')'
//! VAR   := 'u' DIGIT
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so
//! `-2^2 = -4` and `2^3^2 = 512`. Functions: `min`, `max` (two arguments),
//! `abs`, `exp`, `log`, `sin`, `cos` (one argument). Numbers are decimal
//! literals with optional fraction and exponent.
//!
//! Evaluation is plain `f64` arithmetic except that division by zero,
//! `log` of a non-positive value, and domain-invalid powers raise an
//! [`EvalError`] instead of propagating non-finite values.

use std::fmt;

use thiserror::Error;

/// Parse failure with the byte offset into the source string.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier {name:?} at byte {offset}")]
    UnknownIdent { offset: usize, name: String },
    #[error(
        "variable u{index} at byte {offset} is out of range: dimension d = {d} allows u0..u{d}"
    )]
    VarOutOfRange {
        offset: usize,
        index: usize,
        d: usize,
    },
    #[error("{name} expects {expected} argument(s), got {got} (at byte {offset})")]
    Arity {
        offset: usize,
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("numeric literal at byte {offset} does not fit in a finite f64")]
    LiteralOverflow { offset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    LogNonPositive,
    PowDomain,
}

/// Evaluation failure, reporting the offending sub-expression.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{} in `{subexpr}`", match kind {
    EvalErrorKind::DivisionByZero => "division by zero",
    EvalErrorKind::LogNonPositive => "log of a non-positive value",
    EvalErrorKind::PowDomain => "power outside the real domain",
})]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub subexpr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Min,
    Max,
    Abs,
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Min => "min",
            Func::Max => "max",
            Func::Abs => "abs",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "min" => Func::Min,
            "max" => Func::Max,
            "abs" => Func::Abs,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }
}

/// Parsed expression tree. Immutable after parse; evaluation is pure.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// Parse `src` against dimension `d` (variables `u0..u{d}` allowed).
pub fn parse(src: &str, d: usize) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        d,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(expr)
}

impl Expr {
    /// Evaluate at the weight slice of a distribution point.
    pub fn eval(&self, u: &[f64]) -> Result<f64, EvalError> {
        match self {
            Expr::Num(x) => Ok(*x),
            Expr::Var(i) => Ok(u[*i]),
            Expr::Neg(inner) => Ok(-inner.eval(u)?),
            Expr::Bin(op, lhs, rhs) => {
                let a = lhs.eval(u)?;
                let b = rhs.eval(u)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(self.domain_error(EvalErrorKind::DivisionByZero))
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => {
                        if (a == 0.0 && b < 0.0) || (a < 0.0 && b.fract() != 0.0) {
                            Err(self.domain_error(EvalErrorKind::PowDomain))
                        } else {
                            Ok(a.powf(b))
                        }
                    }
                }
            }
            Expr::Call(func, args) => {
                let a = args[0].eval(u)?;
                match func {
                    Func::Min => Ok(a.min(args[1].eval(u)?)),
                    Func::Max => Ok(a.max(args[1].eval(u)?)),
                    Func::Abs => Ok(a.abs()),
                    Func::Exp => Ok(a.exp()),
                    Func::Log => {
                        if a <= 0.0 {
                            Err(self.domain_error(EvalErrorKind::LogNonPositive))
                        } else {
                            Ok(a.ln())
                        }
                    }
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                }
            }
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(inner) => inner.max_var(),
            Expr::Bin(_, lhs, rhs) => lhs.max_var().max(rhs.max_var()),
            Expr::Call(_, args) => args.iter().filter_map(Expr::max_var).max(),
        }
    }

    fn domain_error(&self, kind: EvalErrorKind) -> EvalError {
        EvalError {
            kind,
            subexpr: self.to_string(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }
}

/// Pretty-printer emitting a string that re-parses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, needs: bool) -> fmt::Result {
            if needs {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Var(i) => write!(f, "u{i}"),
            Expr::Neg(inner) => {
                write!(f, "-")?;
                paren(f, inner, inner.precedence() < self.precedence())
            }
            Expr::Bin(op, lhs, rhs) => {
                let prec = self.precedence();
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                if *op == BinOp::Pow {
                    // power's left operand must be an atom; its right is a unary
                    paren(f, lhs, lhs.precedence() < 5)?;
                    write!(f, "{sym}")?;
                    paren(f, rhs, rhs.precedence() < 3)
                } else {
                    // left-associative: equal-precedence right operands keep parens
                    paren(f, lhs, lhs.precedence() < prec)?;
                    write!(f, " {sym} ")?;
                    paren(f, rhs, rhs.precedence() <= prec)
                }
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, arg) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    d: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let found = match self.src.get(self.pos) {
            Some(&b) => format!("{:?}", b as char),
            None => "end of input".to_string(),
        };
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_vec(),
            found,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            let op = match c {
                b'+' => BinOp::Add,
                b'-' => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            let op = match c {
                b'*' => BinOp::Mul,
                b'/' => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected(&["')'"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.unexpected(&["number", "variable", "function", "'('"])),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                return Err(self.unexpected(&["digit after '.'"]));
            }
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                return Err(self.unexpected(&["digit in exponent"]));
            }
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let value: f64 = text
            .parse()
            .map_err(|_| ParseError::LiteralOverflow { offset: start })?;
        if !value.is_finite() {
            return Err(ParseError::LiteralOverflow { offset: start });
        }
        Ok(Expr::Num(value))
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");

        // variable: 'u' followed by exactly one digit
        if name.len() == 2 && name.starts_with('u') {
            if let Some(digit) = name[1..].chars().next().and_then(|c| c.to_digit(10)) {
                let index = digit as usize;
                if index > self.d {
                    return Err(ParseError::VarOutOfRange {
                        offset: start,
                        index,
                        d: self.d,
                    });
                }
                return Ok(Expr::Var(index));
            }
        }

        let Some(func) = Func::from_name(name) else {
            return Err(ParseError::UnknownIdent {
                offset: start,
                name: name.to_string(),
            });
        };

        if self.peek() != Some(b'(') {
            return Err(self.unexpected(&["'('"]));
        }
        self.pos += 1;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            args.push(self.expr()?);
        }
        if self.peek() != Some(b')') {
            return Err(self.unexpected(&["','", "')'"]));
        }
        self.pos += 1;

        if args.len() != func.arity() {
            return Err(ParseError::Arity {
                offset: start,
                name: func.name(),
                expected: func.arity(),
                got: args.len(),
            });
        }
        Ok(Expr::Call(func, args))
    }
}
