//! Expression trees: the parser's output and the display form of canonical expressions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::atom;
use crate::error::ExprError;
use crate::expr::Expr;
use crate::gcd::squarefree_cached;
use crate::poly::{Mono, Poly, VarId};
use crate::var::{is_atom_id, Var};

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(BigRational),
    Coord(Var),
    Sum(Vec<Node>),
    Product(Vec<Node>),
    /// `base^(p/q)`; `q == 1` for integer powers.
    Pow(Box<Node>, i64, u32),
    Sqrt(Box<Node>),
}

impl Node {
    pub fn int(n: i64) -> Node {
        Node::Const(BigRational::from_integer(BigInt::from(n)))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Node::Const(_) | Node::Coord(_) => 1,
            Node::Sum(xs) | Node::Product(xs) => 1 + xs.iter().map(Node::size).sum::<usize>(),
            Node::Pow(b, _, _) | Node::Sqrt(b) => 1 + b.size(),
        }
    }

    /// Evaluates the tree into canonical form.
    pub fn canonicalize(&self) -> Result<Expr, ExprError> {
        Ok(match self {
            Node::Const(r) => Expr::from_rational(r),
            Node::Coord(v) => Expr::var(*v),
            Node::Sum(xs) => {
                let mut acc = Expr::zero();
                for x in xs {
                    acc = acc.add(&x.canonicalize()?);
                }
                acc
            }
            Node::Product(xs) => {
                let mut acc = Expr::one();
                for x in xs {
                    acc = acc.mul(&x.canonicalize()?);
                }
                acc
            }
            Node::Pow(b, p, q) => b.canonicalize()?.rational_pow(*p, *q)?,
            Node::Sqrt(b) => b.canonicalize()?.sqrt()?,
        })
    }

    /// Display tree of a canonical expression: a constant, then numerator
    /// factors, then denominator factors with negative exponents.
    pub fn from_expr(e: &Expr) -> Node {
        if e.is_zero() {
            return Node::int(0);
        }
        let (kn, mut factors) = display_factors(e.num());
        let (kd, den_factors) = display_factors(e.den());
        let k = BigRational::new(kn, kd);
        for (f, m) in den_factors {
            factors.push((f, -m));
        }
        let mut nodes = Vec::with_capacity(factors.len() + 1);
        if !k.is_one() {
            nodes.push(Node::Const(k.clone()));
        }
        for (f, m) in factors {
            nodes.push(if m == 1 { f } else { Node::Pow(Box::new(f), m, 1) });
        }
        match nodes.len() {
            0 => Node::Const(k),
            1 => nodes.pop().expect("one node"),
            _ => Node::Product(nodes),
        }
    }
}

fn coord_node(v: VarId) -> Node {
    Node::Coord(Var::from_id(v).expect("coordinate id"))
}

fn atom_node(a: VarId, e: u32) -> Node {
    let info = atom::info(a);
    let r = Node::from_expr(&info.radicand);
    if info.q == 2 {
        let s = Node::Sqrt(Box::new(r));
        if e == 1 {
            s
        } else {
            Node::Pow(Box::new(s), e as i64, 1)
        }
    } else {
        Node::Pow(Box::new(r), e as i64, info.q)
    }
}

fn power_node(v: VarId, e: u32) -> Node {
    if is_atom_id(v) {
        atom_node(v, e)
    } else if e == 1 {
        coord_node(v)
    } else {
        Node::Pow(Box::new(coord_node(v)), e as i64, 1)
    }
}

fn mono_factors(m: &Mono) -> Vec<Node> {
    let mut coords: Vec<Node> = Vec::new();
    let mut atoms: Vec<(String, Node)> = Vec::new();
    for &(v, e) in m.factors() {
        let n = power_node(v, e);
        if is_atom_id(v) {
            atoms.push((crate::print::node_text(&n, None), n));
        } else {
            coords.push(n);
        }
    }
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    coords.extend(atoms.into_iter().map(|(_, n)| n));
    coords
}

fn term_node(m: &Mono, c: &BigInt) -> Node {
    let mut fs = mono_factors(m);
    if fs.is_empty() {
        return Node::Const(BigRational::from_integer(c.clone()));
    }
    if !c.is_one() {
        fs.insert(0, Node::Const(BigRational::from_integer(c.clone())));
    }
    if fs.len() == 1 {
        fs.pop().expect("one factor")
    } else {
        Node::Product(fs)
    }
}

/// Splits a monomial into its coordinate part and its atom part.
fn split_atoms(m: &Mono) -> (Mono, Mono) {
    let (atoms, coords): (Vec<_>, Vec<_>) = m.factors().iter().partition(|&&(v, _)| is_atom_id(v));
    (Mono::from_pairs(coords), Mono::from_pairs(atoms))
}

/// Sum node with a deterministic term order that does not depend on atom ids.
fn sum_node(p: &Poly) -> Node {
    let mut terms: Vec<(Mono, String, &BigInt, &Mono)> = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let (cm, am) = split_atoms(m);
            let key = crate::print::node_text(&term_node(&am, &BigInt::one()), None);
            (cm, key, c, m)
        })
        .collect();
    terms.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    Node::Sum(terms.into_iter().map(|(_, _, c, m)| term_node(m, c)).collect())
}

fn first_display_coeff(p: &Poly) -> BigInt {
    match sum_node(p) {
        Node::Sum(ts) => match ts.first() {
            Some(Node::Const(c)) => c.numer().clone(),
            Some(Node::Product(fs)) => match fs.first() {
                Some(Node::Const(c)) => c.numer().clone(),
                _ => BigInt::one(),
            },
            _ => BigInt::one(),
        },
        _ => BigInt::one(),
    }
}

/// Returns a signed integer constant and `(factor, multiplicity)` pairs whose
/// product is `p`.
fn display_factors(p: &Poly) -> (BigInt, Vec<(Node, i64)>) {
    let mut k = p.content();
    if p.lc().is_negative() {
        k = -k;
    }
    let prim = p.div_int(&k);
    if let Some(c) = prim.constant_value() {
        return (k * c, Vec::new());
    }
    if prim.len() == 1 {
        let (m, c) = &prim.terms()[0];
        return (k * c, mono_factors(m).into_iter().map(|n| (n, 1)).collect());
    }
    let has_atoms = prim.vars().last().is_some_and(|&v| is_atom_id(v));
    if has_atoms {
        let (prim, k) = if first_display_coeff(&prim).is_negative() { (prim.neg(), -k) } else { (prim, k) };
        return (k, vec![(sum_node(&prim), 1)]);
    }
    let mono = prim.mono_content();
    let rest = prim.div_mono(&mono);
    let mut factors: Vec<(Node, i64)> = mono_factors(&mono).into_iter().map(|n| (n, 1)).collect();
    if rest.is_constant() {
        let c = rest.constant_value().expect("constant");
        return (k * c, factors);
    }
    let parts: Vec<(Poly, u32)> =
        squarefree_cached(&rest).iter().map(|(f, m)| (f.clone().with_positive_lc(), *m)).collect();
    let product = parts.iter().fold(Poly::one(), |acc, (f, m)| acc.mul(&f.pow(*m)));
    let sign = if product == rest {
        BigInt::one()
    } else if product == rest.neg() {
        -BigInt::one()
    } else {
        factors.push((sum_node(&rest), 1));
        return (k, factors);
    };
    for (f, m) in parts {
        let node = if f.len() == 1 { term_node(&f.terms()[0].0, &f.terms()[0].1) } else { sum_node(&f) };
        factors.push((node, m as i64));
    }
    (k * sign, factors)
}
