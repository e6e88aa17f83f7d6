//! A small closed expression grammar for metric perturbation coefficients.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | var | 'bump' '(' expr ')' | '(' expr ')'
//! var   := 'rho' | 'rho0' | 'rhoplus' | 'x'
//! ```
//!
//! `rho` is the chart's own boundary defining function; `rho0` and `rhoplus`
//! evaluate to 1 in the chart that does not contain their face.
//! `bump(z) = exp(1 - 1/(1 - z^2))` for `|z| < 1` and 0 otherwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Bump(Box<Node>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Var {
    Rho,
    Rho0,
    RhoPlus,
    X,
}

/// Values of the variables at an evaluation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExprEnv {
    pub rho: f64,
    pub rho0: f64,
    pub rhoplus: f64,
    pub x: f64,
}

/// A parsed expression together with its source text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Expr {
    source: String,
    root: Node,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let root = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in `{src}`")));
        }
        Ok(Self { source: src.to_string(), root })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, env: &ExprEnv) -> f64 {
        eval(&self.root, env)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl TryFrom<String> for Expr {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Expr::parse(&s)
    }
}

impl From<Expr> for String {
    fn from(e: Expr) -> String {
        e.source
    }
}

pub fn bump(z: f64) -> f64 {
    if z.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - z * z)).exp()
    } else {
        0.0
    }
}

fn eval(n: &Node, env: &ExprEnv) -> f64 {
    match n {
        Node::Num(v) => *v,
        Node::Var(Var::Rho) => env.rho,
        Node::Var(Var::Rho0) => env.rho0,
        Node::Var(Var::RhoPlus) => env.rhoplus,
        Node::Var(Var::X) => env.x,
        Node::Neg(a) => -eval(a, env),
        Node::Add(a, b) => eval(a, env) + eval(b, env),
        Node::Sub(a, b) => eval(a, env) - eval(b, env),
        Node::Mul(a, b) => eval(a, env) * eval(b, env),
        Node::Pow(a, b) => eval(a, env).powf(eval(b, env)),
        Node::Bump(a) => bump(eval(a, env)),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek_op() {
            if op != '+' && op != '-' {
                break;
            }
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' { Node::Add(lhs.into(), rhs.into()) } else { Node::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while self.peek_op() == Some('*') {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Mul(lhs.into(), rhs.into());
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Node::Neg(self.unary()?.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Pow(base.into(), exp.into()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let tok = self.tokens.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "rho" => Ok(Node::Var(Var::Rho)),
                "rho0" => Ok(Node::Var(Var::Rho0)),
                "rhoplus" => Ok(Node::Var(Var::RhoPlus)),
                "x" => Ok(Node::Var(Var::X)),
                "bump" => {
                    self.expect('(')?;
                    let inner = self.expr()?;
                    self.expect(')')?;
                    Ok(Node::Bump(inner.into()))
                }
                other => Err(Error::Parse(format!("unknown identifier `{other}`"))),
            },
            Tok::Op(c) => Err(Error::Parse(format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(rho: f64, x: f64) -> ExprEnv {
        ExprEnv { rho, rho0: rho, rhoplus: 1.0, x }
    }

    #[test]
    fn precedence_and_powers() {
        let e = Expr::parse("1e-3 * x^0.5 * bump(rho) - 2*x^2^0.5 + -(3)").unwrap();
        let v = e.eval(&env(0.5, 0.25));
        let want = 1e-3 * 0.5 * bump(0.5) - 2.0 * 0.25f64.powf(2f64.powf(0.5)) - 3.0;
        assert!((v - want).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_tokens() {
        assert!(Expr::parse("sin(x)").is_err());
        assert!(Expr::parse("x / 2").is_err());
        assert!(Expr::parse("(x").is_err());
    }
}
