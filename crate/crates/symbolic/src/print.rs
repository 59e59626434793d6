//! Text and LaTeX rendering of expressions.
//!
//! Text output is accepted by the parser, so `parse(print(e)) == e`.

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::ast::Node;
use crate::expr::Expr;
use crate::var::{Coordinates, Var};

fn var_name(v: Var, coords: Option<&Coordinates>) -> String {
    match coords {
        Some(c) if c.contains(v) => c.name(v).to_string(),
        _ => match v {
            Var::Base(i) => format!("x{}", i + 1),
            Var::Fiber(i) => format!("y{}", i + 1),
        },
    }
}

/// Plain-text form using the given coordinate names (default `x1.., y1..`).
pub fn to_text(e: &Expr, coords: Option<&Coordinates>) -> String {
    node_text(&Node::from_expr(e), coords)
}

/// LaTeX form.
pub fn to_latex(e: &Expr, coords: Option<&Coordinates>) -> String {
    node_latex(&Node::from_expr(e), coords)
}

fn rational_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn node_text(n: &Node, coords: Option<&Coordinates>) -> String {
    match n {
        Node::Const(r) => rational_text(r),
        Node::Coord(v) => var_name(*v, coords),
        Node::Sum(ts) => join_sum(ts.iter().map(|t| node_text(t, coords))),
        Node::Product(fs) => product_text(fs, coords),
        Node::Pow(_, p, _) if *p < 0 => product_text(std::slice::from_ref(n), coords),
        Node::Pow(b, p, q) => power_text(b, *p, *q, coords),
        Node::Sqrt(b) => format!("sqrt({})", node_text(b, coords)),
    }
}

fn join_sum(parts: impl Iterator<Item = String>) -> String {
    let mut out = String::new();
    for (i, s) in parts.enumerate() {
        if i == 0 {
            out.push_str(&s);
        } else if let Some(rest) = s.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&s);
        }
    }
    out
}

fn power_text(b: &Node, p: i64, q: u32, coords: Option<&Coordinates>) -> String {
    if p == 1 && q == 1 {
        return factor_text(b, coords);
    }
    let base = match b {
        Node::Coord(_) | Node::Sqrt(_) => node_text(b, coords),
        Node::Const(r) if !r.is_negative() && r.denom().is_one() => node_text(b, coords),
        _ => format!("({})", node_text(b, coords)),
    };
    if q == 1 {
        format!("{base}^{p}")
    } else {
        format!("{base}^({p}/{q})")
    }
}

fn factor_text(f: &Node, coords: Option<&Coordinates>) -> String {
    match f {
        Node::Sum(_) | Node::Product(_) => format!("({})", node_text(f, coords)),
        Node::Pow(b, p, q) => power_text(b, *p, *q, coords),
        _ => node_text(f, coords),
    }
}

struct Split<'a> {
    negative: bool,
    numer_const: Option<String>,
    denom_const: Option<String>,
    numer: Vec<&'a Node>,
    denom: Vec<(&'a Node, i64, u32)>,
}

fn split_product(fs: &[Node]) -> Split<'_> {
    let mut s = Split { negative: false, numer_const: None, denom_const: None, numer: Vec::new(), denom: Vec::new() };
    for f in fs {
        match f {
            Node::Const(r) => {
                if r.is_negative() {
                    s.negative = !s.negative;
                }
                let n = r.numer().abs();
                if !n.is_one() {
                    s.numer_const = Some(n.to_string());
                }
                if !r.denom().is_one() {
                    s.denom_const = Some(r.denom().to_string());
                }
            }
            Node::Pow(b, p, q) if *p < 0 => s.denom.push((b, -p, *q)),
            _ => s.numer.push(f),
        }
    }
    s
}

fn product_text(fs: &[Node], coords: Option<&Coordinates>) -> String {
    let s = split_product(fs);
    let mut numer: Vec<String> = s.numer_const.into_iter().collect();
    numer.extend(s.numer.iter().map(|f| factor_text(f, coords)));
    let mut denom: Vec<String> = s.denom_const.into_iter().collect();
    denom.extend(s.denom.iter().map(|(b, p, q)| power_text(b, *p, *q, coords)));
    let mut out = String::new();
    if s.negative {
        out.push('-');
    }
    if numer.is_empty() {
        out.push('1');
    } else {
        out.push_str(&numer.join("*"));
    }
    match denom.len() {
        0 => {}
        1 => {
            out.push('/');
            out.push_str(&denom[0]);
        }
        _ => {
            out.push_str("/(");
            out.push_str(&denom.join("*"));
            out.push(')');
        }
    }
    out
}

fn node_latex(n: &Node, coords: Option<&Coordinates>) -> String {
    match n {
        Node::Const(r) => {
            if r.denom().is_one() {
                r.numer().to_string()
            } else {
                let sign = if r.is_negative() { "-" } else { "" };
                format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
            }
        }
        Node::Coord(v) => var_name(*v, coords),
        Node::Sum(ts) => join_sum(ts.iter().map(|t| node_latex(t, coords))),
        Node::Product(fs) => product_latex(fs, coords),
        Node::Pow(_, p, _) if *p < 0 => product_latex(std::slice::from_ref(n), coords),
        Node::Pow(b, p, q) => power_latex(b, *p, *q, coords),
        Node::Sqrt(b) => format!("\\sqrt{{{}}}", node_latex(b, coords)),
    }
}

fn power_latex(b: &Node, p: i64, q: u32, coords: Option<&Coordinates>) -> String {
    if q == 1 {
        if p == 1 {
            return factor_latex(b, coords);
        }
        let base = match b {
            Node::Coord(_) | Node::Sqrt(_) => node_latex(b, coords),
            Node::Const(r) if !r.is_negative() && r.denom().is_one() => node_latex(b, coords),
            _ => format!("\\left({}\\right)", node_latex(b, coords)),
        };
        return format!("{base}^{{{p}}}");
    }
    let root = format!("\\sqrt[{q}]{{{}}}", node_latex(b, coords));
    if p == 1 {
        root
    } else {
        format!("{root}^{{{p}}}")
    }
}

fn factor_latex(f: &Node, coords: Option<&Coordinates>) -> String {
    match f {
        Node::Sum(_) => format!("\\left({}\\right)", node_latex(f, coords)),
        Node::Pow(b, p, q) => power_latex(b, *p, *q, coords),
        _ => node_latex(f, coords),
    }
}

fn product_latex(fs: &[Node], coords: Option<&Coordinates>) -> String {
    let s = split_product(fs);
    let mut numer: Vec<String> = s.numer_const.into_iter().collect();
    numer.extend(s.numer.iter().map(|f| factor_latex(f, coords)));
    let mut denom: Vec<String> = s.denom_const.into_iter().collect();
    denom.extend(s.denom.iter().map(|(b, p, q)| power_latex(b, *p, *q, coords)));
    let sign = if s.negative { "-" } else { "" };
    let top = if numer.is_empty() { "1".to_string() } else { numer.join(" ") };
    if denom.is_empty() {
        format!("{sign}{top}")
    } else {
        format!("{sign}\\frac{{{top}}}{{{}}}", denom.join(" "))
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&to_text(self, None))
    }
}
