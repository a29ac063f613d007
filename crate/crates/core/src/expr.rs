//! Text form of algebra elements, module vectors and polynomials.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' nat)?
//! atom     := 'd' int | 'z' | 'w' | rational | '(' expr ')'
//! rational := int ('/' nat)?
//! ```
//!
//! A generator index is part of its token (`d-3`), so no whitespace may
//! appear inside it. Everything else is whitespace-insensitive. The optional
//! leading `-` lets printed output such as `-4*d0 + z` parse back.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{Poly, Rational};
use crate::virasoro::{GeneratorIndex, Uea};
use crate::whittaker::{act, ModuleContext, ModuleElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
    Syntax { offset: usize, expected: Vec<String>, found: String },
    #[error("at byte {offset}: {message}")]
    Semantic { offset: usize, message: String },
}

impl ExprError {
    pub fn offset(&self) -> usize {
        match self {
            ExprError::Syntax { offset, .. } | ExprError::Semantic { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Generator(GeneratorIndex),
    Z,
    W,
    Number(Rational),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Parsed expression; `offset` is the byte position where the node starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub node: Node,
    pub offset: usize,
}

impl Expr {
    fn new(node: Node, offset: usize) -> Self {
        Expr { node, offset }
    }

    /// Flattened factors of a product, left to right.
    pub fn factors(&self) -> Vec<&Expr> {
        match &self.node {
            Node::Mul(a, b) => {
                let mut out = a.factors();
                out.extend(b.factors());
                out
            }
            _ => vec![self],
        }
    }

    pub fn contains_w(&self) -> bool {
        match &self.node {
            Node::W => true,
            Node::Generator(_) | Node::Z | Node::Number(_) => false,
            Node::Neg(a) | Node::Pow(a, _) => a.contains_w(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => a.contains_w() || b.contains_w(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Generator(k) => write!(f, "d{k}"),
            Node::Z => write!(f, "z"),
            Node::W => write!(f, "w"),
            Node::Number(r) => write!(f, "({r})"),
            Node::Neg(a) => write!(f, "-({a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "{a}*{b}"),
            Node::Pow(a, n) => write!(f, "({a})^{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Gen(GeneratorIndex),
    Z,
    W,
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Gen(k) => format!("'d{k}'"),
            Tok::Z => "'z'".into(),
            Tok::W => "'w'".into(),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, expected: &[&str], found: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        offset,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_end = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'd' => {
                let mut j = i + 1;
                let negative = bytes.get(j) == Some(&b'-');
                if negative {
                    j += 1;
                }
                let end = digits_end(j);
                if end == j {
                    let found = text[j..].chars().next().map_or("end of input".to_string(), |c| format!("'{c}'"));
                    return Err(syntax(j, &["integer"], found));
                }
                let value: GeneratorIndex = text[j..end]
                    .parse()
                    .map_err(|_| ExprError::Semantic { offset: j, message: "generator index out of range".into() })?;
                i = end;
                Tok::Gen(if negative { -value } else { value })
            }
            b'z' => {
                i += 1;
                Tok::Z
            }
            b'w' => {
                i += 1;
                Tok::W
            }
            b'0'..=b'9' => {
                let end = digits_end(i);
                let n: BigInt = text[i..end].parse().expect("ascii digits");
                i = end;
                Tok::Int(n)
            }
            b'+' | b'-' | b'*' | b'^' | b'/' | b'(' | b')' => {
                i += 1;
                match c {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'^' => Tok::Caret,
                    b'/' => Tok::Slash,
                    b'(' => Tok::LParen,
                    _ => Tok::RParen,
                }
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(syntax(i, &["'d'<int>", "'z'", "'w'", "number", "'('", "operator"], format!("'{ch}'")));
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

const ATOM_START: &[&str] = &["'d'<int>", "'z'", "'w'", "number", "'('"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let start = self.offset();
        let mut lhs = if *self.peek() == Tok::Minus {
            self.bump();
            let t = self.term()?;
            Expr::new(Node::Neg(Box::new(t)), start)
        } else {
            self.term()?
        };
        loop {
            let node: fn(Box<Expr>, Box<Expr>) -> Node = match self.peek() {
                Tok::Plus => Node::Add,
                Tok::Minus => Node::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::new(node(Box::new(lhs), Box::new(rhs)), start);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let start = self.offset();
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::new(Node::Mul(Box::new(lhs), Box::new(rhs)), start);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let start = self.offset();
        let atom = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(atom);
        }
        self.bump();
        let (tok, off) = self.bump();
        let Tok::Int(n) = tok else {
            return Err(syntax(off, &["exponent"], tok.describe()));
        };
        let e = u32::try_from(&n)
            .map_err(|_| ExprError::Semantic { offset: off, message: format!("exponent {n} is too large") })?;
        Ok(Expr::new(Node::Pow(Box::new(atom), e), start))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (tok, off) = self.bump();
        let node = match tok {
            Tok::Gen(k) => Node::Generator(k),
            Tok::Z => Node::Z,
            Tok::W => Node::W,
            Tok::Int(num) => {
                let den = if *self.peek() == Tok::Slash {
                    self.bump();
                    let (t, o) = self.bump();
                    match t {
                        Tok::Int(d) if d.is_zero() => {
                            return Err(ExprError::Semantic { offset: o, message: "zero denominator".into() })
                        }
                        Tok::Int(d) => d,
                        other => return Err(syntax(o, &["natural number"], other.describe())),
                    }
                } else {
                    BigInt::one()
                };
                Node::Number(Rational::new(num, den))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let (t, o) = self.bump();
                if t != Tok::RParen {
                    return Err(syntax(o, &["')'", "'+'", "'-'", "'*'"], t.describe()));
                }
                return Ok(Expr::new(inner.node, off));
            }
            other => return Err(syntax(off, ATOM_START, other.describe())),
        };
        Ok(Expr::new(node, off))
    }
}

/// Parses the whole of `text` into an expression tree.
pub fn parse_expression(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(syntax(p.offset(), &["'+'", "'-'", "'*'", "'^'", "end of input"], t.describe())),
    }
}

/// Value of an expression: an element of `U(V)` or a vector `u·w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Algebra(Uea),
    Vector(Uea),
}

fn semantic(offset: usize, message: &str) -> ExprError {
    ExprError::Semantic { offset, message: message.to_string() }
}

fn eval(e: &Expr) -> Result<Value, ExprError> {
    use Value::*;
    Ok(match &e.node {
        Node::Generator(k) => Algebra(Uea::generator(*k)),
        Node::Z => Algebra(Uea::z_power(1)),
        Node::W => Vector(Uea::one()),
        Node::Number(r) => Algebra(Uea::constant(r.clone())),
        Node::Neg(a) => match eval(a)? {
            Algebra(u) => Algebra(-&u),
            Vector(u) => Vector(-&u),
        },
        Node::Add(a, b) | Node::Sub(a, b) => {
            let plus = matches!(e.node, Node::Add(..));
            let combine = |x: &Uea, y: &Uea| if plus { x + y } else { x - y };
            match (eval(a)?, eval(b)?) {
                (Algebra(x), Algebra(y)) => Algebra(combine(&x, &y)),
                (Vector(x), Vector(y)) => Vector(combine(&x, &y)),
                _ => return Err(semantic(b.offset, "cannot add an algebra element to a vector")),
            }
        }
        Node::Mul(a, b) => match (eval(a)?, eval(b)?) {
            (Algebra(x), Algebra(y)) => Algebra(x.multiply(&y)),
            (Algebra(x), Vector(y)) => Vector(x.multiply(&y)),
            (Vector(_), _) => return Err(semantic(b.offset, "'w' must be the rightmost factor")),
        },
        Node::Pow(a, n) => match eval(a)? {
            Algebra(x) => Algebra((0..*n).fold(Uea::one(), |acc, _| acc.multiply(&x))),
            Vector(x) if *n == 1 => Vector(x),
            Vector(_) => return Err(semantic(e.offset, "'w' cannot be raised to a power")),
        },
    })
}

/// Evaluates `text` to a vector or an algebra element.
pub fn parse_value(text: &str) -> Result<Value, ExprError> {
    eval(&parse_expression(text)?)
}

/// Parses an element of `U(V)`; `w` is rejected.
pub fn parse_uea(text: &str) -> Result<Uea, ExprError> {
    let e = parse_expression(text)?;
    match eval(&e)? {
        Value::Algebra(u) => Ok(u),
        Value::Vector(_) => Err(semantic(w_offset(&e).unwrap_or(0), "'w' is not allowed in an algebra element")),
    }
}

fn w_offset(e: &Expr) -> Option<usize> {
    match &e.node {
        Node::W => Some(e.offset),
        Node::Generator(_) | Node::Z | Node::Number(_) => None,
        Node::Neg(a) | Node::Pow(a, _) => w_offset(a),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => w_offset(a).or_else(|| w_offset(b)),
    }
}

/// Parses `u*w` (or a bare `u`, read as `u*w`) and evaluates it in `ctx`.
pub fn parse_vector(text: &str, ctx: &Arc<ModuleContext>) -> Result<ModuleElement, ExprError> {
    let u = match parse_value(text)? {
        Value::Algebra(u) | Value::Vector(u) => u,
    };
    Ok(act(&u, &ModuleElement::cyclic(ctx)))
}

/// Parses a polynomial in `z`, e.g. `(z-1)^2*(z+3)`.
pub fn parse_poly(text: &str) -> Result<Poly, ExprError> {
    fn go(e: &Expr) -> Result<Poly, ExprError> {
        Ok(match &e.node {
            Node::Z => Poly::z(),
            Node::Number(r) => Poly::constant(r.clone()),
            Node::Generator(_) | Node::W => {
                return Err(semantic(e.offset, "only 'z' and numbers may appear in a polynomial"))
            }
            Node::Neg(a) => -&go(a)?,
            Node::Add(a, b) => &go(a)? + &go(b)?,
            Node::Sub(a, b) => &go(a)? - &go(b)?,
            Node::Mul(a, b) => &go(a)? * &go(b)?,
            Node::Pow(a, n) => go(a)?.pow(*n),
        })
    }
    go(&parse_expression(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::Pseudopartition;
    use crate::scalar::{rat, ratio};
    use crate::whittaker::WhittakerHom;

    #[test]
    fn parses_spec_shapes() {
        let e = parse_expression("d2*d-1*w").unwrap();
        let f: Vec<_> = e.factors().iter().map(|x| x.node.clone()).collect();
        assert_eq!(f, vec![Node::Generator(2), Node::Generator(-1), Node::W]);
        let e = parse_expression("(3/4)*z^2*w + d-1*w").unwrap();
        assert!(matches!(e.node, Node::Add(..)));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_expression("d").unwrap_err() {
            ExprError::Syntax { offset, expected, .. } => {
                assert_eq!(offset, 1);
                assert_eq!(expected, vec!["integer".to_string()]);
            }
            e => panic!("{e:?}"),
        }
        assert_eq!(parse_expression("d- 3").unwrap_err().offset(), 2);
        assert_eq!(parse_expression("z +").unwrap_err().offset(), 3);
        assert_eq!(parse_expression("(z").unwrap_err().offset(), 2);
        assert_eq!(parse_expression("z z").unwrap_err().offset(), 2);
        assert_eq!(parse_expression("z^x").unwrap_err().offset(), 2);
        assert_eq!(parse_expression("z # 1").unwrap_err().offset(), 2);
        assert!(matches!(parse_expression("1/0"), Err(ExprError::Semantic { offset: 2, .. })));
    }

    #[test]
    fn w_placement_is_semantic() {
        assert!(matches!(parse_value("w*d1"), Err(ExprError::Semantic { offset: 2, .. })));
        assert!(matches!(parse_value("w + d1"), Err(ExprError::Semantic { .. })));
        assert!(matches!(parse_value("w^2"), Err(ExprError::Semantic { .. })));
        assert!(matches!(parse_uea("d1*w"), Err(ExprError::Semantic { offset: 3, .. })));
        assert!(parse_value("(d1 + z)*w").is_ok());
    }

    #[test]
    fn evaluates_in_pbw_order() {
        let u = parse_uea("d2*d-2").unwrap();
        assert_eq!(u.to_string(), "d-2*d2 - 4*d0 + (1/2)*z");
        assert_eq!(parse_uea(&u.to_string()).unwrap(), u);
        assert_eq!(parse_uea("-(1/2)*z^2 + 3").unwrap().to_string(), "3 - (1/2)*z^2");
        assert_eq!(parse_uea("-z").unwrap().to_string(), "-z");
    }

    #[test]
    fn vectors_round_trip() {
        let psi = WhittakerHom::new(rat(2), ratio(-3, 2)).unwrap();
        let ctx = crate::whittaker::ModuleContext::universal(psi);
        let v = parse_vector("d-1*d1*w", &ctx).unwrap();
        assert_eq!(v, ModuleElement::basis(&ctx, 0, &Pseudopartition::from_parts(&[1])).scale(&rat(2)));
        let text = "d-3^2*d0*w + (3/4)*z^2*w";
        let v = parse_vector(text, &ctx).unwrap();
        assert_eq!(v.to_string(), text);
    }

    #[test]
    fn polynomials() {
        let p = parse_poly("(z-1)^2*(z+3)").unwrap();
        assert_eq!(p, Poly::from_roots(&[(rat(1), 2), (rat(-3), 1)]));
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        let q = parse_poly("-(1/16)*z + (5/16)").unwrap();
        assert_eq!(q, Poly::new(vec![ratio(5, 16), ratio(-1, 16)]));
        assert!(matches!(parse_poly("z*d1"), Err(ExprError::Semantic { offset: 2, .. })));
    }
}
