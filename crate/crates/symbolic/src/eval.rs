//! Numeric evaluation, domain constraints and the sampled zero test.
//!
//! Polynomials are evaluated exactly on the binary expansions of the input
//! doubles; only radical values and the final quotient are rounded.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atom;
use crate::error::ExprError;
use crate::expr::Expr;
use crate::parse::parse;
use crate::poly::{Poly, VarId};
use crate::var::{is_atom_id, Coordinates, Var};

/// A point of the tangent bundle chart: base and fiber coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl NumericPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        NumericPoint { x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn get(&self, v: Var) -> Option<f64> {
        match v {
            Var::Base(i) => self.x.get(i).copied(),
            Var::Fiber(i) => self.y.get(i).copied(),
        }
    }
}

/// Exact binary fraction `m * 2^e`.
#[derive(Clone, Debug)]
struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    fn from_f64(v: f64) -> Dyadic {
        if v == 0.0 {
            return Dyadic { m: BigInt::zero(), e: 0 };
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let mant = if exp == 0 { (bits & 0xf_ffff_ffff_ffff) << 1 } else { (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000 };
        Dyadic { m: BigInt::from(sign) * BigInt::from(mant), e: exp - 1075 }
    }

    fn from_int(c: &BigInt) -> Dyadic {
        Dyadic { m: c.clone(), e: 0 }
    }

    fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { m: &self.m * &o.m, e: self.e + o.e }
    }

    fn add(&self, o: &Dyadic) -> Dyadic {
        if self.m.is_zero() {
            return o.clone();
        }
        if o.m.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &o.m << (o.e - e) as usize;
        Dyadic { m: a + b, e }
    }

    fn abs(&self) -> Dyadic {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    /// Leading 62 bits as an f64 mantissa plus a binary exponent.
    fn split(&self) -> (f64, i64) {
        let bits = self.m.bits() as i64;
        let shift = (bits - 62).max(0);
        let top = (&self.m >> shift as usize).to_i64().expect("62-bit value") as f64;
        (top, self.e + shift)
    }
}

fn ldexp(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

fn ratio(n: &Dyadic, d: &Dyadic) -> f64 {
    let (nm, ne) = n.split();
    let (dm, de) = d.split();
    ldexp(nm / dm, ne - de)
}

struct Evaluator<'a> {
    point: &'a NumericPoint,
    atoms: HashMap<VarId, f64>,
}

impl Evaluator<'_> {
    fn var_value(&mut self, v: VarId) -> Result<f64, ExprError> {
        if is_atom_id(v) {
            if let Some(&a) = self.atoms.get(&v) {
                return Ok(a);
            }
            let info = atom::info(v);
            let r = self.eval(&info.radicand)?.0;
            let q = info.q;
            let a = if r < 0.0 {
                if q % 2 == 0 {
                    return Err(ExprError::Domain(format!("negative radicand ({r}) under an even root")));
                }
                -(-r).powf(1.0 / q as f64)
            } else if q == 2 {
                r.sqrt()
            } else if q == 3 {
                r.cbrt()
            } else {
                r.powf(1.0 / q as f64)
            };
            self.atoms.insert(v, a);
            return Ok(a);
        }
        let var = Var::from_id(v).expect("coordinate id");
        self.point
            .get(var)
            .ok_or_else(|| ExprError::Domain(format!("point has no value for coordinate {var:?}")))
    }

    /// Exact value of the polynomial on the dyadic inputs, and the sum of absolute term values.
    fn poly(&mut self, p: &Poly) -> Result<(Dyadic, Dyadic), ExprError> {
        let mut powers: HashMap<(VarId, u32), Dyadic> = HashMap::new();
        let mut total = Dyadic::from_int(&BigInt::zero());
        let mut magnitude = Dyadic::from_int(&BigInt::zero());
        for (m, c) in p.terms() {
            let mut t = Dyadic::from_int(c);
            for &(v, e) in m.factors() {
                let key = (v, e);
                if !powers.contains_key(&key) {
                    let base = Dyadic::from_f64(self.var_value(v)?);
                    let mut acc = Dyadic::from_int(&BigInt::from(1));
                    for _ in 0..e {
                        acc = acc.mul(&base);
                    }
                    powers.insert(key, acc);
                }
                t = t.mul(&powers[&key]);
            }
            magnitude = magnitude.add(&t.abs());
            total = total.add(&t);
        }
        Ok((total, magnitude))
    }

    /// Value and scale (sum of absolute numerator term values over |den|).
    fn eval(&mut self, e: &Expr) -> Result<(f64, f64), ExprError> {
        let (n, nmag) = self.poly(e.num())?;
        let (d, _) = self.poly(e.den())?;
        if d.m.is_zero() {
            return Err(ExprError::Domain("zero denominator".into()));
        }
        let value = if n.m.is_zero() { 0.0 } else { ratio(&n, &d) };
        let scale = if nmag.m.is_zero() { 0.0 } else { ratio(&nmag, &d.abs()) };
        Ok((value, scale))
    }
}

/// Value of `e` at `p`.
pub fn eval_at(e: &Expr, p: &NumericPoint) -> Result<f64, ExprError> {
    Ok(eval_with_scale(e, p)?.0)
}

/// Value of `e` at `p` together with the magnitude of its largest cancellation.
pub fn eval_with_scale(e: &Expr, p: &NumericPoint) -> Result<(f64, f64), ExprError> {
    let mut ev = Evaluator { point: p, atoms: HashMap::new() };
    let (v, s) = ev.eval(e)?;
    if !v.is_finite() {
        return Err(ExprError::Domain("non-finite value".into()));
    }
    Ok((v, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    NotEqual,
    Greater,
    Less,
    GreaterEq,
    LessEq,
}

/// A predicate `expr REL 0` restricting the sampling domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub expr: Expr,
    pub relation: Relation,
    pub text: String,
}

impl Constraint {
    /// Parses `lhs OP rhs` with `OP` one of `!=`, `>`, `<`, `>=`, `<=`.
    pub fn parse(text: &str, coords: &Coordinates) -> Result<Self, ExprError> {
        const OPS: [(&str, Relation); 5] = [
            ("!=", Relation::NotEqual),
            (">=", Relation::GreaterEq),
            ("<=", Relation::LessEq),
            (">", Relation::Greater),
            ("<", Relation::Less),
        ];
        let (at, op, relation) = OPS
            .iter()
            .filter_map(|&(op, rel)| text.find(op).map(|i| (i, op, rel)))
            .min_by_key(|&(i, op, _)| (i, std::cmp::Reverse(op.len())))
            .ok_or_else(|| ExprError::InvalidConstraint(text.to_string()))?;
        let lhs = parse(&text[..at], coords)?;
        let rhs = parse(&text[at + op.len()..], coords)?;
        Ok(Constraint { expr: lhs.sub(&rhs), relation, text: text.trim().to_string() })
    }

    pub fn holds(&self, p: &NumericPoint) -> bool {
        match eval_at(&self.expr, p) {
            Ok(v) => match self.relation {
                Relation::NotEqual => v != 0.0,
                Relation::Greater => v > 0.0,
                Relation::Less => v < 0.0,
                Relation::GreaterEq => v >= 0.0,
                Relation::LessEq => v <= 0.0,
            },
            Err(_) => false,
        }
    }
}

/// Parses a comma-separated constraint list such as `"x3!=0,y2>0"`.
pub fn parse_constraints(text: &str, coords: &Coordinates) -> Result<Vec<Constraint>, ExprError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Constraint::parse(s, coords))
        .collect()
}

/// Uniform sampling of points in a box, rejecting points that violate constraints.
#[derive(Clone, Debug)]
pub struct Sampler {
    pub dim: usize,
    pub lo: f64,
    pub hi: f64,
    pub constraints: Vec<Constraint>,
    pub retry_cap: usize,
}

impl Sampler {
    pub fn new(dim: usize) -> Self {
        Sampler { dim, lo: 1.0, hi: 2.0, constraints: Vec::new(), retry_cap: 100 }
    }

    pub fn with_box(mut self, lo: f64, hi: f64) -> Self {
        self.lo = lo;
        self.hi = hi;
        self
    }

    pub fn with_constraints(mut self, constraints: Vec<Constraint>) -> Self {
        self.constraints = constraints;
        self
    }

    fn raw_point(&self, rng: &mut ChaCha8Rng) -> NumericPoint {
        let mut coord = || if self.hi > self.lo { rng.gen_range(self.lo..self.hi) } else { self.lo };
        let x: Vec<f64> = (0..self.dim).map(|_| coord()).collect();
        let y: Vec<f64> = (0..self.dim).map(|_| coord()).collect();
        NumericPoint { x, y }
    }

    /// Draws one point satisfying the constraints and `accept`, within the retry cap.
    pub fn draw(
        &self,
        rng: &mut ChaCha8Rng,
        mut accept: impl FnMut(&NumericPoint) -> bool,
    ) -> Option<NumericPoint> {
        for _ in 0..self.retry_cap.max(1) {
            let p = self.raw_point(rng);
            if self.constraints.iter().all(|c| c.holds(&p)) && accept(&p) {
                return Some(p);
            }
        }
        None
    }

    /// `n` points from a generator seeded with `seed`.
    pub fn points(&self, n: usize, seed: u64) -> Option<Vec<NumericPoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.draw(&mut rng, |_| true)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroStatus {
    /// The canonical form is 0.
    Zero,
    NonZero,
    /// Not canonically 0 but vanishing at every sampled point.
    NumericallyZero,
}

impl ZeroStatus {
    pub fn is_nonzero(self) -> bool {
        self != ZeroStatus::Zero
    }
}

/// Settings for the sampled part of the zero test.
#[derive(Clone, Debug)]
pub struct ZeroTest {
    pub sampler: Sampler,
    pub points: usize,
    pub tol: f64,
    pub seed: u64,
}

impl ZeroTest {
    pub fn new(dim: usize) -> Self {
        ZeroTest { sampler: Sampler::new(dim), points: 8, tol: 1e-9, seed: 0x5eed }
    }

    pub fn check(&self, e: &Expr) -> ZeroStatus {
        if e.is_zero() {
            return ZeroStatus::Zero;
        }
        if !e.has_radicals() {
            return ZeroStatus::NonZero;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.points {
            let mut value = None;
            let drawn = self.sampler.draw(&mut rng, |p| match eval_with_scale(e, p) {
                Ok(v) => {
                    value = Some(v);
                    true
                }
                Err(_) => false,
            });
            if drawn.is_none() {
                log::warn!("zero test could not draw a valid point for {e}; treating as nonzero");
                return ZeroStatus::NonZero;
            }
            let (v, scale) = value.expect("value recorded for accepted point");
            if v.abs() > self.tol * scale.max(1.0) {
                return ZeroStatus::NonZero;
            }
        }
        log::warn!("{e} is not canonically zero but vanishes at {} sampled points", self.points);
        ZeroStatus::NumericallyZero
    }
}

/// Zero test with default sampling (box `[1, 2]`, 8 points, tolerance 1e-9).
pub fn is_zero(e: &Expr) -> ZeroStatus {
    let dim = e.free_vars().iter().map(|v| v.index() + 1).max().unwrap_or(1);
    ZeroTest::new(dim).check(e)
}
