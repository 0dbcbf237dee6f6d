//! A small arithmetic expression language for defining kernels and right-hand
//! sides in config files.
//!
//! Grammar (EBNF, also documented in the repository README):
//!
//! ```text
//! expr    := term { ("+" | "-") term }
//! term    := factor { ("*" | "/") factor }
//! factor  := "-" factor | power
//! power   := atom [ "^" factor ]            (right-associative)
//! atom    := NUMBER | NAME | NAME "(" [ expr { "," expr } ] ")" | "(" expr ")"
//! NUMBER  := digits [ "." digits ] [ ("e"|"E") [ "+"|"-" ] digits ]
//! ```
//!
//! `^` binds tighter than unary minus, so `-2^2` is `-4`. There is no
//! implicit multiplication. Known functions: `sqrt`, `sin`, `cos`, `exp`,
//! `log`, `abs` (one argument) and `pi` (zero arguments). Any other name
//! followed by `(` is rejected; a bare name is a variable or parameter.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    /// Binding strength used by the printer; mirrors the grammar.
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Pi,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Pi => "pi",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Pi => 0,
            _ => 1,
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "abs" => Func::Abs,
            "pi" => Func::Pi,
            _ => return None,
        })
    }
}

/// Abstract syntax tree of one expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: found {found}, expected {expected}")]
    Syntax {
        offset: usize,
        found: String,
        expected: &'static str,
    },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("domain error: {function}({argument}) is undefined")]
    Domain { function: &'static str, argument: f64 },
}

/// Values available while evaluating: the two canonical variables plus a
/// named parameter map.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bindings<'a> {
    pub t: Option<f64>,
    pub tau: Option<f64>,
    pub params: Option<&'a BTreeMap<String, f64>>,
}

impl<'a> Bindings<'a> {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_params(mut self, params: &'a BTreeMap<String, f64>) -> Self {
        self.params = Some(params);
        self
    }

    fn lookup(&self, name: &str) -> Option<f64> {
        match name {
            "t" => self.t,
            "tau" => self.tau,
            _ => None,
        }
        .or_else(|| self.params.and_then(|p| p.get(name).copied()))
    }
}

impl Expr {
    /// Parse UTF-8 source into an AST.
    pub fn parse(source: &str) -> Result<Expr, ParseError> {
        let mut parser = Parser {
            src: source.as_bytes(),
            pos: 0,
        };
        parser.skip_ws();
        let expr = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.unexpected("end of input"));
        }
        Ok(expr)
    }

    /// IEEE double evaluation. `sqrt`/`log` of a negative argument is a
    /// domain error rather than a NaN.
    pub fn eval(&self, bindings: &Bindings) -> Result<f64, EvalError> {
        match self {
            Expr::Number(v) => Ok(*v),
            Expr::Var(name) => bindings
                .lookup(name)
                .ok_or_else(|| EvalError::UnboundName(name.clone())),
            Expr::Neg(inner) => Ok(-inner.eval(bindings)?),
            Expr::Bin(op, lhs, rhs) => {
                let a = lhs.eval(bindings)?;
                let b = rhs.eval(bindings)?;
                Ok(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                })
            }
            Expr::Call(func, args) => {
                let arg = match func.arity() {
                    0 => 0.0,
                    _ => args[0].eval(bindings)?,
                };
                match func {
                    Func::Pi => Ok(std::f64::consts::PI),
                    Func::Sqrt => {
                        if arg < 0.0 {
                            Err(EvalError::Domain {
                                function: "sqrt",
                                argument: arg,
                            })
                        } else {
                            Ok(arg.sqrt())
                        }
                    }
                    Func::Log => {
                        if arg < 0.0 {
                            Err(EvalError::Domain {
                                function: "log",
                                argument: arg,
                            })
                        } else {
                            Ok(arg.ln())
                        }
                    }
                    Func::Sin => Ok(arg.sin()),
                    Func::Cos => Ok(arg.cos()),
                    Func::Exp => Ok(arg.exp()),
                    Func::Abs => Ok(arg.abs()),
                }
            }
        }
    }

    /// Free variable and parameter names, in first-appearance order.
    pub fn free_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        self.collect_names(&mut names);
        names
    }

    fn collect_names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Number(_) => {}
            Expr::Var(name) => {
                if !out.iter().any(|n| n == name) {
                    out.push(name.clone());
                }
            }
            Expr::Neg(inner) => inner.collect_names(out),
            Expr::Bin(_, lhs, rhs) => {
                lhs.collect_names(out);
                rhs.collect_names(out);
            }
            Expr::Call(_, args) => {
                for a in args {
                    a.collect_names(out);
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            _ => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, need: bool) -> fmt::Result {
            if need {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Number(v) => write!(f, "{v}"),
            Expr::Var(name) => write!(f, "{name}"),
            Expr::Neg(inner) => {
                write!(f, "-")?;
                paren(f, inner, inner.precedence() < 3)
            }
            Expr::Bin(op, lhs, rhs) => {
                let p = op.precedence();
                // Left operand may share the operator's level except under ^
                // (right-associative); a right operand at the same level
                // always needs parens, since reparsing associates left and
                // float addition is order-sensitive.
                let lhs_paren = match op {
                    BinOp::Pow => lhs.precedence() <= p,
                    _ => lhs.precedence() < p,
                };
                let rhs_paren = match op {
                    BinOp::Pow => rhs.precedence() < 3,
                    _ => rhs.precedence() <= p,
                };
                paren(f, lhs, lhs_paren)?;
                write!(f, " {} ", op.symbol())?;
                paren(f, rhs, rhs_paren)
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(c) => format!("`{}`", c as char),
        };
        ParseError::Syntax {
            offset: self.pos,
            found,
            expected,
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'/') {
                let rhs = self.factor()?;
                lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.factor()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.unexpected("`)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.name(),
            _ => Err(self.unexpected("a number, a name, `(` or `-`")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return Err(self.unexpected("a digit after `.`"));
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                // Not an exponent after all; `1e` would be `1` then name `e`,
                // which the grammar rejects at the expression level anyway.
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            found: format!("`{text}`"),
            expected: "a number",
        })?;
        self.skip_ws();
        Ok(Expr::Number(value))
    }

    fn name(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii name")
            .to_string();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            let func = Func::lookup(&name).ok_or(ParseError::UnknownFunction {
                name: name.clone(),
                offset: start,
            })?;
            self.pos += 1;
            self.skip_ws();
            let mut args = Vec::new();
            if !self.eat(b')') {
                loop {
                    args.push(self.expr()?);
                    if self.eat(b')') {
                        break;
                    }
                    if !self.eat(b',') {
                        return Err(self.unexpected("`,` or `)`"));
                    }
                }
            }
            if args.len() != func.arity() {
                return Err(ParseError::Syntax {
                    offset: start,
                    found: format!("{} argument(s)", args.len()),
                    expected: "the function's arity",
                });
            }
            return Ok(Expr::Call(func, args));
        }
        Ok(Expr::Var(name))
    }
}
