//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := base ('^' exponent)?
//! base     := number | ident | '(' expr ')' | 'sqrt' '(' expr ')' | '-' factor
//! exponent := signed integer | '(' integer '/' integer ')'
//! ```

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::ast::Node;
use crate::error::ExprError;
use crate::expr::Expr;
use crate::var::{Coordinates, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, ExprError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let mut digits = text[start..i].to_string();
                let mut scale = 0usize;
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let fs = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    digits.push_str(&text[fs..i]);
                    scale = i - fs;
                }
                let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().expect("digits") };
                let d = num_traits::pow(BigInt::from(10), scale);
                toks.push((Tok::Num(BigRational::new(n, d)), start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Op(c), i));
                i += 1;
            } else {
                return Err(ExprError::Syntax {
                    position: i,
                    expected: vec!["operator".into(), "number".into(), "identifier".into()],
                });
            }
        }
        toks.push((Tok::End, text.len()));
        Ok(Lexer { toks })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    coords: &'a Coordinates,
}

fn expected(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

const BASE_START: &[&str] = &["number", "identifier", "'('", "'sqrt'", "'-'"];

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn position(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ExprError::Syntax { position: self.position(), expected: vec![format!("'{c}'")] })
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                let t = self.term()?;
                terms.push(Node::Product(vec![Node::int(-1), t]));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { Node::Sum(terms) })
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat('*') {
                factors.push(self.factor()?);
            } else if self.eat('/') {
                let f = self.factor()?;
                factors.push(Node::Pow(Box::new(f), -1, 1));
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 { factors.pop().expect("one factor") } else { Node::Product(factors) })
    }

    fn factor(&mut self) -> Result<Node, ExprError> {
        let base = self.base()?;
        if self.eat('^') {
            let (p, q) = self.exponent()?;
            return Ok(Node::Pow(Box::new(base), p, q));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Node, ExprError> {
        let position = self.position();
        match self.bump() {
            Tok::Num(r) => Ok(Node::Const(r)),
            Tok::Ident(name) if name == "sqrt" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(Node::Sqrt(Box::new(inner)))
            }
            Tok::Ident(name) => match self.coords.lookup(&name) {
                Some(v) => Ok(Node::Coord(v)),
                None => Err(ExprError::UnknownIdentifier(name)),
            },
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Op('-') => {
                let f = self.factor()?;
                Ok(Node::Product(vec![Node::int(-1), f]))
            }
            _ => Err(ExprError::Syntax { position, expected: expected(BASE_START) }),
        }
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        let position = self.position();
        let negative = self.eat('-');
        match self.bump() {
            Tok::Num(r) if r.is_integer() => {
                let n: i64 = r
                    .numer()
                    .try_into()
                    .map_err(|_| ExprError::Syntax { position, expected: expected(&["small integer"]) })?;
                Ok(if negative { -n } else { n })
            }
            _ => Err(ExprError::Syntax { position, expected: expected(&["integer"]) }),
        }
    }

    fn exponent(&mut self) -> Result<(i64, u32), ExprError> {
        if self.eat('(') {
            let p = self.integer()?;
            self.expect('/')?;
            let position = self.position();
            let q = self.integer()?;
            self.expect(')')?;
            if q <= 0 {
                return Err(ExprError::Syntax { position, expected: expected(&["positive integer"]) });
            }
            return Ok((p, q as u32));
        }
        Ok((self.integer()?, 1))
    }
}

/// Parses `text` into an unevaluated tree.
pub fn parse_node(text: &str, coords: &Coordinates) -> Result<Node, ExprError> {
    let lexer = Lexer::new(text)?;
    let mut p = Parser { toks: lexer.toks, pos: 0, coords };
    if *p.peek() == Tok::End {
        return Err(ExprError::Syntax { position: 0, expected: expected(BASE_START) });
    }
    let node = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(ExprError::Syntax {
            position: p.position(),
            expected: expected(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]),
        });
    }
    Ok(node)
}

/// Parses `text` and returns its canonical form.
pub fn parse(text: &str, coords: &Coordinates) -> Result<Expr, ExprError> {
    parse_node(text, coords)?.canonicalize()
}

/// Parses with explicit dimension and coordinate names.
pub fn parse_with_names(
    text: &str,
    dim: usize,
    coord_names: &[String],
    fiber_names: &[String],
) -> Result<Expr, ExprError> {
    let coords = Coordinates::new(coord_names, fiber_names)?;
    if coords.dim() != dim {
        return Err(ExprError::InvalidCoordinates(format!(
            "dimension {dim} but {} coordinate names",
            coords.dim()
        )));
    }
    parse(text, &coords)
}

/// Substitutes expressions given by coordinate name.
pub fn substitute_named(
    e: &Expr,
    bindings: &[(&str, Expr)],
    coords: &Coordinates,
) -> Result<Expr, ExprError> {
    let mut map: HashMap<Var, Expr> = HashMap::new();
    for (name, value) in bindings {
        let v = coords.lookup(name).ok_or_else(|| ExprError::UnknownIdentifier(name.to_string()))?;
        map.insert(v, value.clone());
    }
    e.substitute(&map)
}
