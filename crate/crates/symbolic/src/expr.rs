//! Canonical symbolic expressions.
//!
//! Every [`Expr`] is stored in canonical form: a quotient `num / den` of
//! integer polynomials where
//!
//! * `den` mentions only coordinates (radicals never appear in denominators),
//! * `num` may mention radical atoms, each with exponent below its index,
//! * `gcd(num, den) = 1` and the leading coefficient of `den` is positive.
//!
//! Perfect `q`-th power factors of radicands are pulled out of the root,
//! assuming the extracted factors are positive on the domain. With that
//! convention two expressions that are equal as functions get identical
//! canonical forms, provided their radicals are multiplicatively independent.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::atom;
use crate::error::ExprError;
use crate::gcd::{extract_int_power, gcd, gcd_by_parts, squarefree, squarefree_cached};
use crate::poly::{Mono, Poly, VarId};
use crate::var::{is_atom_id, Var};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Frac>);

#[derive(PartialEq, Eq, Hash)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Expr {
    fn raw(num: Poly, den: Poly) -> Expr {
        Expr(Arc::new(Frac { num, den }))
    }

    fn from_poly(p: Poly) -> Expr {
        Expr::raw(p, Poly::one())
    }

    pub fn zero() -> Expr {
        Expr::from_poly(Poly::zero())
    }

    pub fn one() -> Expr {
        Expr::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> Expr {
        Expr::from_poly(Poly::constant(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Expr {
        Expr::from_poly(Poly::constant(n))
    }

    pub fn from_rational(r: &BigRational) -> Expr {
        Expr::raw(Poly::constant(r.numer().clone()), Poly::constant(r.denom().clone()))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn var(v: Var) -> Expr {
        Expr::from_poly(Poly::var(v.id()))
    }

    pub(crate) fn atom(id: VarId) -> Expr {
        Expr::from_poly(Poly::var(id))
    }

    pub(crate) fn num(&self) -> &Poly {
        &self.0.num
    }

    pub(crate) fn den(&self) -> &Poly {
        &self.0.den
    }

    /// True iff the canonical form is the constant 0.
    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.0.num.is_constant() && self.0.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        let n = self.0.num.constant_value()?;
        let d = self.0.den.constant_value()?;
        Some(BigRational::new(n, d))
    }

    /// True iff the expression contains a radical atom.
    pub fn has_radicals(&self) -> bool {
        self.0.num.vars().iter().any(|&v| is_atom_id(v))
    }

    /// Polynomial variable ids appearing directly in numerator or denominator.
    pub(crate) fn raw_vars(&self) -> Vec<VarId> {
        let mut v = self.0.num.vars();
        v.extend(self.0.den.vars());
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Coordinates the expression depends on, looking through radicals.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for id in self.raw_vars() {
            if is_atom_id(id) {
                out.extend(atom::info(id).coord_vars.iter().filter_map(|&v| Var::from_id(v)));
            } else if let Some(v) = Var::from_id(id) {
                out.push(v);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.free_vars().contains(&v)
    }

    /// Builds a canonical expression from an arbitrary numerator (possibly with
    /// unreduced atom powers) and an atom-free nonzero denominator.
    fn normalize(num: Poly, den: Poly) -> Expr {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Expr::zero();
        }
        let (num, mult) = reduce_atoms(num);
        let den = if mult.is_one() { den } else { den.mul(&mult) };
        Expr::reduce_fraction(num, den)
    }

    fn reduce_fraction(num: Poly, den: Poly) -> Expr {
        if num.is_zero() {
            return Expr::zero();
        }
        let g = gcd_with_den(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Expr::with_sign(num, den)
    }

    fn with_sign(num: Poly, den: Poly) -> Expr {
        if den.lc().is_negative() {
            Expr::raw(num.neg(), den.neg())
        } else {
            Expr::raw(num, den)
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&*self.0, &*other.0);
        if a.den == b.den {
            let num = a.num.add(&b.num);
            if a.den.is_one() {
                return Expr::from_poly(num);
            }
            return Expr::reduce_fraction(num, a.den.clone());
        }
        let g = gcd_with_den(&a.den, &b.den);
        if g.is_one() {
            let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
            return Expr::with_sign(num, a.den.mul(&b.den));
        }
        let da = a.den.div_exact(&g).expect("gcd divides");
        let db = b.den.div_exact(&g).expect("gcd divides");
        let num = a.num.mul(&db).add(&b.num.mul(&da));
        if num.is_zero() {
            return Expr::zero();
        }
        let den = a.den.mul(&db);
        let g2 = gcd_with_den(&num, &g);
        if g2.is_one() {
            Expr::with_sign(num, den)
        } else {
            Expr::with_sign(
                num.div_exact(&g2).expect("gcd divides"),
                den.div_exact(&g2).expect("gcd divides"),
            )
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr::raw(self.0.num.neg(), self.0.den.clone())
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (a, b) = (&*self.0, &*other.0);
        let g1 = gcd_with_den(&a.num, &b.den);
        let g2 = gcd_with_den(&b.num, &a.den);
        let an = divide(&a.num, &g1);
        let bd = divide(&b.den, &g1);
        let bn = divide(&b.num, &g2);
        let ad = divide(&a.den, &g2);
        let num = an.mul(&bn);
        let den = ad.mul(&bd);
        if needs_reduction(&num) {
            Expr::normalize(num, den)
        } else {
            Expr::with_sign(num, den)
        }
    }

    pub fn scale(&self, c: &BigRational) -> Expr {
        self.mul(&Expr::from_rational(c))
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Expr, ExprError> {
        Expr::one().checked_div(self)
    }

    pub fn checked_div(&self, other: &Expr) -> Result<Expr, ExprError> {
        if other.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        let b = &*other.0;
        let inv_num = inverse_poly(&b.num)?;
        Ok(self.mul(&Expr::from_poly(b.den.clone())).mul(&inv_num))
    }

    pub fn powi(&self, n: i64) -> Result<Expr, ExprError> {
        if n < 0 {
            return self.inv()?.powi(-n);
        }
        let mut result = Expr::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    pub fn sqrt(&self) -> Result<Expr, ExprError> {
        self.root(2)
    }

    /// Real `q`-th root. Perfect `q`-th power factors are extracted.
    pub fn root(&self, q: u32) -> Result<Expr, ExprError> {
        if q == 0 {
            return Err(ExprError::Domain("zeroth root".into()));
        }
        if q == 1 || self.is_zero() || self.is_one() {
            return Ok(self.clone());
        }
        let mut n = self.0.num.clone();
        let d = self.0.den.clone();
        let atom_free = !has_atoms(&n);
        let mut negate = false;
        if atom_free && n.lc().is_negative() {
            if q % 2 == 1 {
                n = n.neg();
                negate = true;
            } else if n.is_constant() {
                return Err(ExprError::Domain("even root of a negative number".into()));
            }
        }
        let (outer_n, inner_n) = extract_power(&n, q);
        let (outer_d, inner_d) = extract_power(&d, q);
        let radicand = Expr::with_sign(inner_n, inner_d);
        let outer = Expr::raw(outer_n, outer_d);
        let result = if radicand.is_one() {
            outer
        } else {
            let id = atom::intern(q, radicand);
            outer.mul(&Expr::atom(id))
        };
        Ok(if negate { result.neg() } else { result })
    }

    /// `self^(p/q)` with real roots.
    pub fn rational_pow(&self, p: i64, q: u32) -> Result<Expr, ExprError> {
        if q == 0 {
            return Err(ExprError::Domain("zero exponent denominator".into()));
        }
        let g = (p.unsigned_abs()).gcd(&(q as u64));
        let (p, q) = if g > 1 { (p / g as i64, q / g as u32) } else { (p, q) };
        if q == 1 {
            return self.powi(p);
        }
        if p < 0 {
            return self.inv()?.root(q)?.powi(-p);
        }
        self.root(q)?.powi(p)
    }

    /// Partial derivative with respect to a coordinate.
    pub fn diff(&self, v: Var) -> Expr {
        self.diff_id(v.id())
    }

    pub(crate) fn diff_id(&self, v: VarId) -> Expr {
        let Frac { num, den } = &*self.0;
        let mut dnum = Expr::from_poly(num.derivative(v));
        for a in num.vars().into_iter().filter(|&a| is_atom_id(a)) {
            let da = atom::derivative(a, v);
            if !da.is_zero() {
                dnum = dnum.add(&Expr::from_poly(num.derivative(a)).mul(&da));
            }
        }
        if den.is_one() {
            return dnum;
        }
        let dden = den.derivative(v);
        if dden.is_zero() {
            return dnum.mul(&Expr::raw(Poly::one(), den.clone()));
        }
        // with g = gcd(den, den') and s = den/g:
        // (num' den - num den') / den^2 = (num' s - num den'/g) / (den s)
        let g = gcd_with_den(&dden, den);
        let s = divide(den, &g);
        let top = dnum.mul(&Expr::from_poly(s.clone())).sub(&Expr::from_poly(num.mul(&divide(&dden, &g))));
        top.mul(&Expr::with_sign(Poly::one(), den.mul(&s)))
    }

    /// Simultaneous substitution of coordinates.
    pub fn substitute(&self, bindings: &HashMap<Var, Expr>) -> Result<Expr, ExprError> {
        let mut atom_cache: HashMap<VarId, Expr> = HashMap::new();
        let num = substitute_poly(&self.0.num, bindings, &mut atom_cache)?;
        let den = substitute_poly(&self.0.den, bindings, &mut atom_cache)?;
        num.checked_div(&den)
    }

    /// Number of nodes in the display tree.
    pub fn node_count(&self) -> usize {
        crate::ast::Node::from_expr(self).size()
    }
}

/// `gcd(p, den)` for a denominator `den`, through its cached square-free parts.
fn gcd_with_den(p: &Poly, den: &Poly) -> Poly {
    if den.is_constant() || p.is_constant() || has_atoms(den) {
        return gcd(p, den);
    }
    gcd_by_parts(p, den, &squarefree_cached(den))
}

fn divide(a: &Poly, b: &Poly) -> Poly {
    if b.is_one() {
        a.clone()
    } else {
        a.div_exact(b).expect("gcd divides")
    }
}

fn has_atoms(p: &Poly) -> bool {
    p.vars().last().is_some_and(|&v| is_atom_id(v))
}

fn needs_reduction(p: &Poly) -> bool {
    p.vars()
        .into_iter()
        .filter(|&v| is_atom_id(v))
        .any(|a| p.degree_in(a) >= atom::info(a).q)
}

/// Rewrites `A^q -> N/D` for every atom `A = (N/D)^(1/q)`, highest atom first.
/// Returns the reduced numerator and the factor the denominator must be multiplied by.
fn reduce_atoms(mut num: Poly) -> (Poly, Poly) {
    let mut mult = Poly::one();
    let mut upper = VarId::MAX;
    loop {
        let next = num.vars().into_iter().filter(|&v| is_atom_id(v) && v < upper).max();
        let Some(a) = next else { break };
        upper = a;
        let info = atom::info(a);
        let q = info.q as usize;
        let deg = num.degree_in(a) as usize;
        if deg < q {
            continue;
        }
        let rn = info.radicand.num();
        let rd = info.radicand.den();
        let coeffs = num.coeffs_in(a);
        let kmax = deg / q;
        let rn_pows: Vec<Poly> = (0..=kmax).map(|k| rn.pow(k as u32)).collect();
        let rd_pows: Vec<Poly> = (0..=kmax).map(|k| rd.pow(k as u32)).collect();
        let mut reduced: Vec<Poly> = vec![Poly::zero(); q];
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (k, r) = (e / q, e % q);
            let term = c.mul(&rn_pows[k]).mul(&rd_pows[kmax - k]);
            reduced[r] = reduced[r].add(&term);
        }
        num = Poly::from_coeffs_in(a, &reduced);
        mult = mult.mul(&rd_pows[kmax]);
    }
    (num, mult)
}

/// Splits `p` into `(outer, inner)` with `p = outer^q * inner` and `outer` as large
/// as the square-free decomposition allows; `outer` has positive leading coefficient.
fn extract_power(p: &Poly, q: u32) -> (Poly, Poly) {
    let mut outer = Poly::one();
    let mut inner = p.clone();
    if !has_atoms(p) && !p.is_constant() {
        for (f, m) in squarefree(p) {
            if m >= q {
                outer = outer.mul(&f.with_positive_lc().pow(m / q));
            }
        }
        if !outer.is_one() {
            match p.div_exact(&outer.pow(q)) {
                Some(rest) => inner = rest,
                None => outer = Poly::one(),
            }
        }
    }
    let content = inner.content();
    let (s, _) = extract_int_power(&content, q);
    if !s.is_one() {
        inner = inner.div_int(&num_traits::pow(s.clone(), q as usize));
        outer = outer.scale(&s);
    }
    (outer, inner)
}

/// Inverse of a nonzero polynomial that may contain atoms, as a canonical expression.
fn inverse_poly(p: &Poly) -> Result<Expr, ExprError> {
    let Some(a) = p.vars().into_iter().filter(|&v| is_atom_id(v)).max() else {
        return Ok(Expr::with_sign(Poly::one(), p.clone()));
    };
    let info = atom::info(a);
    let q = info.q as usize;
    let coeffs: Vec<Expr> = p.coeffs_in(a).into_iter().map(Expr::from_poly).collect();
    let nonzero: Vec<usize> = (0..coeffs.len()).filter(|&i| !coeffs[i].is_zero()).collect();
    if nonzero.len() == 1 {
        // 1/(c A^e) = A^(q-e) / (c R)
        let e = nonzero[0];
        let c = &coeffs[e];
        let denom = c.mul(&info.radicand);
        let apow = Expr::from_poly(Poly::monomial(Mono::var(a, (q - e) as u32), BigInt::one()));
        return apow.checked_div(&denom);
    }
    // extended Euclid in K[A] modulo A^q - R
    let mut modulus = vec![Expr::zero(); q + 1];
    modulus[0] = info.radicand.neg();
    modulus[q] = Expr::one();
    let mut r0 = modulus;
    let mut r1 = coeffs;
    let mut s0: Vec<Expr> = Vec::new();
    let mut s1: Vec<Expr> = vec![Expr::one()];
    while r1.len() > 1 {
        let (quo, rem) = upoly_divmod(&r0, &r1)?;
        let s_next = upoly_sub(&s0, &upoly_mul(&quo, &s1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s_next;
        if r1.is_empty() {
            return Err(ExprError::NotInvertible);
        }
    }
    let c = &r1[0];
    let mut result = Expr::zero();
    for (i, s) in s1.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        let apow = Expr::from_poly(Poly::monomial(Mono::var(a, i as u32), BigInt::one()));
        result = result.add(&s.checked_div(c)?.mul(&apow));
    }
    Ok(result)
}

fn upoly_trim(p: &mut Vec<Expr>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn upoly_divmod(a: &[Expr], b: &[Expr]) -> Result<(Vec<Expr>, Vec<Expr>), ExprError> {
    let mut rem = a.to_vec();
    upoly_trim(&mut rem);
    let db = b.len() - 1;
    let lb = &b[db];
    let mut quo = vec![Expr::zero(); rem.len().saturating_sub(db).max(1)];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = rem[dr].checked_div(lb)?;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            rem[i + shift] = rem[i + shift].sub(&c.mul(bc));
        }
        quo[shift] = c;
        rem[dr] = Expr::zero();
        upoly_trim(&mut rem);
    }
    upoly_trim(&mut quo);
    Ok((quo, rem))
}

fn upoly_mul(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Expr::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    upoly_trim(&mut out);
    out
}

fn upoly_sub(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    let n = a.len().max(b.len());
    let mut out: Vec<Expr> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Expr::zero);
            match b.get(i) {
                Some(y) => x.sub(y),
                None => x,
            }
        })
        .collect();
    upoly_trim(&mut out);
    out
}

fn substitute_poly(
    p: &Poly,
    bindings: &HashMap<Var, Expr>,
    atom_cache: &mut HashMap<VarId, Expr>,
) -> Result<Expr, ExprError> {
    let mut acc = Expr::zero();
    for (m, c) in p.terms() {
        let mut term = Expr::from_bigint(c.clone());
        for &(v, e) in m.factors() {
            let base = if is_atom_id(v) {
                match atom_cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let info = atom::info(v);
                        let r = info.radicand.substitute(bindings)?;
                        let x = r.root(info.q)?;
                        atom_cache.insert(v, x.clone());
                        x
                    }
                }
            } else {
                let var = Var::from_id(v).expect("coordinate id");
                bindings.get(&var).cloned().unwrap_or_else(|| Expr::var(var))
            };
            term = term.mul(&base.powi(e as i64)?);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::print::to_text(self, None))
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::from_int(n)
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Self {
        Expr::var(v)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::$method(self, rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |acc, x| acc.add(&x))
    }
}

impl<'a> std::iter::Sum<&'a Expr> for Expr {
    fn sum<I: Iterator<Item = &'a Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |acc, x| acc.add(x))
    }
}
