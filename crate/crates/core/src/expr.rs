//! A small arithmetic expression language.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' power)?          right associative
//! atom    := integer | decimal | ident | '(' sum ')'
//! ```
//!
//! Exponents must fold to a non-negative integer constant. Decimal literals
//! are only accepted when [`ParseOptions::allow_decimals`] is set.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Var(String),
    Const(BigRational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// An evaluation target for expressions: a commutative ring with unit,
/// possibly carrying context (such as a tangent-algebra label).
pub trait Algebra {
    type Elem: Clone;

    fn constant(&self, q: &BigRational) -> Result<Self::Elem>;
    fn integer(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn pow(&self, a: &Self::Elem, exp: u32) -> Result<Self::Elem> {
        let mut acc = self.integer(&BigInt::one());
        for _ in 0..exp {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }
}

/// The scalar ring itself as an [`Algebra`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ScalarRing<S>(PhantomData<S>);

impl<S> ScalarRing<S> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<S: Scalar> Algebra for ScalarRing<S> {
    type Elem = S;

    fn constant(&self, q: &BigRational) -> Result<S> {
        S::from_rational(q)
    }
    fn integer(&self, n: &BigInt) -> S {
        S::from_integer(n)
    }
    fn add(&self, a: &S, b: &S) -> Result<S> {
        Ok(a.clone() + b.clone())
    }
    fn sub(&self, a: &S, b: &S) -> Result<S> {
        Ok(a.clone() - b.clone())
    }
    fn mul(&self, a: &S, b: &S) -> Result<S> {
        Ok(a.clone() * b.clone())
    }
    fn neg(&self, a: &S) -> S {
        -a.clone()
    }
    fn invert(&self, a: &S) -> Result<S> {
        a.try_invert()
    }
}

impl Expr {
    pub fn var(name: &str) -> Self {
        Expr::Var(name.to_string())
    }

    pub fn int(n: i64) -> Self {
        Expr::Const(BigRational::from_integer(n.into()))
    }

    /// Evaluates the expression in `alg`, looking variables up in `env`.
    pub fn eval<A: Algebra>(&self, alg: &A, env: &HashMap<String, A::Elem>) -> Result<A::Elem> {
        match self {
            Expr::Var(name) => env.get(name).cloned().ok_or_else(|| Error::UnboundVariable(name.clone())),
            Expr::Const(q) => {
                if q.is_integer() {
                    Ok(alg.integer(q.numer()))
                } else {
                    alg.constant(q)
                }
            }
            Expr::Add(a, b) => alg.add(&a.eval(alg, env)?, &b.eval(alg, env)?),
            Expr::Sub(a, b) => alg.sub(&a.eval(alg, env)?, &b.eval(alg, env)?),
            Expr::Mul(a, b) => alg.mul(&a.eval(alg, env)?, &b.eval(alg, env)?),
            Expr::Div(a, b) => {
                let num = a.eval(alg, env)?;
                let den = alg.invert(&b.eval(alg, env)?)?;
                alg.mul(&num, &den)
            }
            Expr::Neg(a) => Ok(alg.neg(&a.eval(alg, env)?)),
            Expr::Pow(a, k) => alg.pow(&a.eval(alg, env)?, *k),
        }
    }

    /// Variable names in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_vars(&mut seen, &mut out);
        out
    }

    fn collect_vars(&self, seen: &mut HashSet<String>, out: &mut Vec<String>) {
        match self {
            Expr::Var(name) => {
                if seen.insert(name.clone()) {
                    out.push(name.clone());
                }
            }
            Expr::Const(_) => {}
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(seen, out);
                b.collect_vars(seen, out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(seen, out),
        }
    }

    /// Replaces variables by expressions; unmapped variables are kept.
    pub fn substitute(&self, map: &HashMap<String, Expr>) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(map));
        match self {
            Expr::Var(name) => map.get(name).cloned().unwrap_or_else(|| self.clone()),
            Expr::Const(_) => self.clone(),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Pow(a, k) => Expr::Pow(sub(a), *k),
        }
    }

    /// Symbolic partial derivative with respect to `var`.
    ///
    /// Uses the sum, product, power and quotient rules, folding constant
    /// zeros and ones as it goes.
    pub fn derivative(&self, var: &str) -> Expr {
        match self {
            Expr::Var(name) => Expr::int(i64::from(name == var)),
            Expr::Const(_) => Expr::int(0),
            Expr::Add(a, b) => add(a.derivative(var), b.derivative(var)),
            Expr::Sub(a, b) => sub(a.derivative(var), b.derivative(var)),
            Expr::Mul(a, b) => add(
                mul(a.derivative(var), (**b).clone()),
                mul((**a).clone(), b.derivative(var)),
            ),
            Expr::Div(a, b) => {
                let db = b.derivative(var);
                if is_zero(&db) {
                    div(a.derivative(var), (**b).clone())
                } else {
                    let num = sub(
                        mul(a.derivative(var), (**b).clone()),
                        mul((**a).clone(), db),
                    );
                    div(num, pow((**b).clone(), 2))
                }
            }
            Expr::Neg(a) => neg(a.derivative(var)),
            Expr::Pow(_, 0) => Expr::int(0),
            Expr::Pow(a, k) => mul(
                mul(Expr::int(i64::from(*k)), pow((**a).clone(), k - 1)),
                a.derivative(var),
            ),
        }
    }
}

fn as_const(e: &Expr) -> Option<&BigRational> {
    match e {
        Expr::Const(q) => Some(q),
        _ => None,
    }
}

fn is_zero(e: &Expr) -> bool {
    as_const(e).is_some_and(Zero::is_zero)
}

fn is_one(e: &Expr) -> bool {
    as_const(e).is_some_and(One::is_one)
}

fn add(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        _ if is_zero(&a) => b,
        _ if is_zero(&b) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        _ if is_zero(&b) => a,
        _ if is_zero(&a) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        _ if is_zero(&a) || is_zero(&b) => Expr::int(0),
        _ if is_one(&a) => b,
        _ if is_one(&b) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        Expr::int(0)
    } else if is_one(&b) {
        a
    } else {
        Expr::Div(Box::new(a), Box::new(b))
    }
}

fn neg(a: Expr) -> Expr {
    match as_const(&a) {
        Some(x) => Expr::Const(-x),
        None => Expr::Neg(Box::new(a)),
    }
}

fn pow(a: Expr, k: u32) -> Expr {
    match k {
        0 => Expr::int(1),
        1 => a,
        _ => match as_const(&a) {
            Some(x) => Expr::Const(Pow::pow(x, k)),
            None => Expr::Pow(Box::new(a), k),
        },
    }
}

/// Canonical, fully parenthesized form that parses back to the same tree
/// for integer or decimal constants.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(name) => f.write_str(name),
            Expr::Const(q) => write_const(q, f),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, k) => write!(f, "({a} ^ {k})"),
        }
    }
}

fn write_const(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q < &BigRational::zero() {
        f.write_str("(-")?;
        write_const(&-q, f)?;
        return f.write_str(")");
    }
    if q.is_integer() {
        return write!(f, "{}", q.numer());
    }
    // Terminating decimals print exactly; anything else prints as a quotient.
    let ten = BigInt::from(10);
    let mut scale = BigInt::one();
    for digits in 1..=64usize {
        scale *= &ten;
        let scaled = q * BigRational::from_integer(scale.clone());
        if scaled.is_integer() {
            let s = format!("{:0>width$}", scaled.numer(), width = digits + 1);
            let (int, frac) = s.split_at(s.len() - digits);
            return write!(f, "{int}.{frac}");
        }
    }
    write!(f, "({} / {})", q.numer(), q.denom())
}

/// Parser configuration.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept literals such as `0.25` (converted exactly to `1/4`).
    pub allow_decimals: bool,
}

/// Parses in rational mode: decimal literals are rejected.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<Expr> {
    let tokens = tokenize(text, options)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.sum()?;
    match parser.peek() {
        Tok::End => Ok(expr),
        tok => Err(parser.error(format!("unexpected {}", tok.describe()))),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
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

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("number `{q}`"),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Tokens paired with their 1-based column.
fn tokenize(text: &str, options: ParseOptions) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, column));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut value = BigRational::from_integer(int.parse::<BigInt>().expect("digits"));
            if i < chars.len() && chars[i] == '.' {
                if !options.allow_decimals {
                    return Err(Error::Syntax {
                        column,
                        message: "decimal literals are not allowed in rational mode".into(),
                    });
                }
                i += 1;
                let fstart = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if fstart == i {
                    return Err(Error::Syntax {
                        column: i + 1,
                        message: "expected digits after the decimal point".into(),
                    });
                }
                let frac: String = chars[fstart..i].iter().collect();
                let den = Pow::pow(BigInt::from(10), (i - fstart) as u32);
                value += BigRational::new(frac.parse::<BigInt>().expect("digits"), den);
            }
            out.push((Tok::Num(value), column));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), column));
        } else {
            return Err(Error::Syntax {
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn column(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        if tok != Tok::End {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax {
            column: self.column(),
            message,
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let column = self.column();
        let exponent = self.power()?;
        let k = fold_exponent(&exponent).ok_or(Error::Syntax {
            column,
            message: "exponent must be a non-negative integer constant".into(),
        })?;
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr> {
        let column = self.column();
        match self.bump() {
            Tok::Num(q) => Ok(Expr::Const(q)),
            Tok::Ident(name) => Ok(Expr::Var(name)),
            Tok::LParen => {
                let inner = self.sum()?;
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    _ => Err(Error::Syntax {
                        column: self.tokens[self.pos.saturating_sub(1)].1.max(column),
                        message: "expected `)`".into(),
                    }),
                }
            }
            tok => Err(Error::Syntax {
                column,
                message: format!("expected an operand, found {}", tok.describe()),
            }),
        }
    }
}

fn fold_exponent(e: &Expr) -> Option<u32> {
    match e {
        Expr::Const(q) if q.is_integer() => q.numer().to_u32(),
        Expr::Pow(base, k) => fold_exponent(base)?.checked_pow(*k),
        _ => None,
    }
}
