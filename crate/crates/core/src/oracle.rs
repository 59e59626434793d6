//! Independent numeric re-derivation of every object at sample points.
//!
//! `F²` is evaluated as a Taylor jet straight from the tree the user wrote
//! and every object is rebuilt from jets with its defining formula, so no
//! symbolic derivative is involved. The spray is taken from `½ γ^i_jk y^j y^k`
//! rather than the closed form the symbolic side uses.

use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use finsler_symbolic::{eval_at, Node, NumericPoint, Var};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{GeometryError, Result};
use crate::geometry::{ConnectionKind, CurvatureKind, FinslerStructure, Geometry};
use crate::jet::{Jet, JetSpace};
use crate::registry::ObjectId;
use crate::tensor::{Tensor, Variance};

use Variance::{Down, Up};

/// Component values of one object at one point, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTable {
    pub dim: usize,
    pub signature: Vec<Variance>,
    pub values: Vec<f64>,
}

impl NumericTable {
    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[index.iter().fold(0, |acc, &i| acc * self.dim + i)]
    }
}

/// Derivative orders consumed on the way from `F²` to the object.
fn order_needed(id: &ObjectId) -> usize {
    match id {
        ObjectId::SupportUp => 0,
        ObjectId::Metric | ObjectId::InverseMetric | ObjectId::SupportDown | ObjectId::Angular => 2,
        ObjectId::Cartan | ObjectId::CartanMixed | ObjectId::Christoffel | ObjectId::Spray => 3,
        ObjectId::Barthel | ObjectId::CartanCoefficients => 4,
        ObjectId::Berwald | ObjectId::RTorsion | ObjectId::PTorsion => 5,
        ObjectId::Curvature(CurvatureKind::V, _) => 4,
        // these differentiate `G^i_jk` once more
        ObjectId::Curvature(_, kind) if kind.uses_berwald_coefficients() => 6,
        ObjectId::Curvature(_, _) => 5,
        ObjectId::Classify => 6,
        ObjectId::HCov(inner, kind) | ObjectId::VCov(inner, kind) => {
            let coeffs = if kind.uses_berwald_coefficients() { 5 } else { 4 };
            (order_needed(inner) + 1).max(coeffs)
        }
    }
}

#[derive(Clone, Debug)]
struct NT {
    dim: usize,
    sig: Vec<Variance>,
    data: Vec<Jet>,
}

impl NT {
    fn from_fn(dim: usize, sig: &[Variance], mut f: impl FnMut(&[usize]) -> Jet) -> NT {
        let len = dim.pow(sig.len() as u32);
        let mut idx = vec![0; sig.len()];
        let data = (0..len)
            .map(|mut flat| {
                for slot in (0..sig.len()).rev() {
                    idx[slot] = flat % dim;
                    flat /= dim;
                }
                f(&idx)
            })
            .collect();
        NT { dim, sig: sig.to_vec(), data }
    }

    fn get(&self, idx: &[usize]) -> &Jet {
        &self.data[idx.iter().fold(0, |acc, &i| acc * self.dim + i)]
    }

    fn table(&self) -> NumericTable {
        NumericTable { dim: self.dim, signature: self.sig.clone(), values: self.data.iter().map(Jet::value).collect() }
    }
}

/// Jet of the user's `F²` tree.
fn eval_node(node: &Node, n: usize, p: &NumericPoint, space: &Arc<JetSpace>) -> Result<Jet> {
    let domain = |what: &str| GeometryError::Domain(format!("{what} at {p:?}"));
    Ok(match node {
        Node::Const(r) => Jet::constant(space, r.to_f64().ok_or_else(|| domain("constant out of range"))?),
        Node::Coord(Var::Base(i)) => Jet::variable(space, *i, p.x[*i]),
        Node::Coord(Var::Fiber(i)) => Jet::variable(space, n + i, p.y[*i]),
        Node::Sum(xs) => {
            let mut acc = Jet::zero(space);
            for x in xs {
                acc = acc.add(&eval_node(x, n, p, space)?);
            }
            acc
        }
        Node::Product(xs) => {
            let mut acc = Jet::constant(space, 1.0);
            for x in xs {
                acc = acc.mul(&eval_node(x, n, p, space)?);
            }
            acc
        }
        Node::Pow(b, e, q) => {
            let base = eval_node(b, n, p, space)?;
            if *q == 1 { base.powi(*e) } else { base.pow_rational(*e, *q) }.ok_or_else(|| domain("singular power"))?
        }
        Node::Sqrt(b) => eval_node(b, n, p, space)?.pow_rational(1, 2).ok_or_else(|| domain("square root"))?,
    })
}

/// All objects of one structure at one point, memoized.
struct NumericGeometry {
    n: usize,
    space: Arc<JetSpace>,
    ys: Vec<Jet>,
    f2: Jet,
    g: Rc<NT>,
    ginv: Rc<NT>,
    memo: HashMap<ObjectId, Rc<NT>>,
    ptorsion: HashMap<ConnectionKind, Rc<NT>>,
}

impl NumericGeometry {
    fn new(fs: &FinslerStructure, p: &NumericPoint, order: usize) -> Result<Self> {
        let n = fs.dim();
        let space = JetSpace::new(2 * n, order.max(2));
        let f2 = eval_node(fs.source(), n, p, &space)?;
        let ys: Vec<Jet> = (0..n).map(|i| Jet::variable(&space, n + i, p.y[i])).collect();
        let g = NT::from_fn(n, &[Down, Down], |i| f2.diff(n + i[0]).diff(n + i[1]).scale(0.5));
        let ginv = invert(&g, &space).ok_or_else(|| GeometryError::SingularMetricAt(format!("{p:?}")))?;
        Ok(NumericGeometry {
            n,
            space,
            ys,
            f2,
            g: Rc::new(g),
            ginv: Rc::new(ginv),
            memo: HashMap::new(),
            ptorsion: HashMap::new(),
        })
    }

    fn dx(&self, e: &Jet, k: usize) -> Jet {
        e.diff(k)
    }

    fn dy(&self, e: &Jet, k: usize) -> Jet {
        e.diff(self.n + k)
    }

    /// `δ_k e` with the given `N`.
    fn delta(&self, nl: &NT, e: &Jet, k: usize) -> Jet {
        let mut acc = self.dx(e, k);
        for r in 0..self.n {
            acc = acc.sub(&nl.get(&[r, k]).mul(&self.dy(e, r)));
        }
        acc
    }

    fn raise_first(&self, lowered: &NT) -> NT {
        let n = self.n;
        let mut sig = lowered.sig.clone();
        sig[0] = Up;
        NT::from_fn(n, &sig, |i| {
            let mut src = i.to_vec();
            let mut acc = Jet::zero(&self.space);
            for r in 0..n {
                src[0] = r;
                acc = acc.add(&self.ginv.get(&[i[0], r]).mul(lowered.get(&src)));
            }
            acc
        })
    }

    fn horizontal(&mut self, kind: ConnectionKind) -> Result<Rc<NT>> {
        self.object(&if kind.uses_berwald_coefficients() { ObjectId::Berwald } else { ObjectId::CartanCoefficients })
    }

    fn vertical(&mut self, kind: ConnectionKind) -> Result<Option<Rc<NT>>> {
        Ok(if kind.has_vertical_coefficients() { Some(self.object(&ObjectId::CartanMixed)?) } else { None })
    }

    fn p_torsion(&mut self, kind: ConnectionKind) -> Result<Rc<NT>> {
        if let Some(t) = self.ptorsion.get(&kind) {
            return Ok(t.clone());
        }
        let gb = self.object(&ObjectId::Berwald)?;
        let f = self.horizontal(kind)?;
        let t = Rc::new(NT::from_fn(self.n, &[Up, Down, Down], |i| gb.get(i).sub(f.get(i))));
        self.ptorsion.insert(kind, t.clone());
        Ok(t)
    }

    fn object(&mut self, id: &ObjectId) -> Result<Rc<NT>> {
        if let Some(t) = self.memo.get(id) {
            return Ok(t.clone());
        }
        let t = Rc::new(self.compute(id)?);
        self.memo.insert(id.clone(), t.clone());
        Ok(t)
    }

    fn compute(&mut self, id: &ObjectId) -> Result<NT> {
        let n = self.n;
        let sig3 = [Up, Down, Down];
        let sig4 = [Up, Down, Down, Down];
        Ok(match id {
            ObjectId::Metric => (*self.g).clone(),
            ObjectId::InverseMetric => (*self.ginv).clone(),
            ObjectId::SupportUp => {
                let f = self.f2.pow_rational(1, 2).ok_or_else(|| GeometryError::Domain("F^2 <= 0".into()))?;
                let inv = f.recip().ok_or_else(|| GeometryError::Domain("F = 0".into()))?;
                NT::from_fn(n, &[Up], |i| self.ys[i[0]].mul(&inv))
            }
            ObjectId::SupportDown => {
                let lup = self.object(&ObjectId::SupportUp)?;
                NT::from_fn(n, &[Down], |i| sum(&self.space, n, |j| self.g.get(&[i[0], j]).mul(lup.get(&[j]))))
            }
            ObjectId::Angular => {
                let l = self.object(&ObjectId::SupportDown)?;
                NT::from_fn(n, &[Down, Down], |i| self.g.get(i).sub(&l.get(&[i[0]]).mul(l.get(&[i[1]]))))
            }
            ObjectId::Cartan => NT::from_fn(n, &[Down, Down, Down], |i| self.dy(self.g.get(&[i[0], i[1]]), i[2]).scale(0.5)),
            ObjectId::CartanMixed => {
                let c = self.object(&ObjectId::Cartan)?;
                self.raise_first(&c)
            }
            ObjectId::Christoffel => {
                let g = self.g.clone();
                let lowered = NT::from_fn(n, &[Down, Down, Down], |i| {
                    let (r, j, k) = (i[0], i[1], i[2]);
                    self.dx(g.get(&[k, r]), j).add(&self.dx(g.get(&[j, r]), k)).sub(&self.dx(g.get(&[j, k]), r)).scale(0.5)
                });
                self.raise_first(&lowered)
            }
            ObjectId::Spray => {
                let gamma = self.object(&ObjectId::Christoffel)?;
                NT::from_fn(n, &[Up], |i| {
                    sum(&self.space, n * n, |jk| {
                        let (j, k) = (jk / n, jk % n);
                        gamma.get(&[i[0], j, k]).mul(&self.ys[j]).mul(&self.ys[k])
                    })
                    .scale(0.5)
                })
            }
            ObjectId::Barthel => {
                let spray = self.object(&ObjectId::Spray)?;
                NT::from_fn(n, &[Up, Down], |i| self.dy(spray.get(&[i[0]]), i[1]))
            }
            ObjectId::Berwald => {
                let nl = self.object(&ObjectId::Barthel)?;
                NT::from_fn(n, &sig3, |i| self.dy(nl.get(&[i[0], i[1]]), i[2]))
            }
            ObjectId::CartanCoefficients => {
                let nl = self.object(&ObjectId::Barthel)?;
                let g = self.g.clone();
                let dg = NT::from_fn(n, &[Down, Down, Down], |i| self.delta(&nl, g.get(&[i[0], i[1]]), i[2]));
                let lowered = NT::from_fn(n, &[Down, Down, Down], |i| {
                    let (r, j, k) = (i[0], i[1], i[2]);
                    dg.get(&[k, r, j]).add(dg.get(&[j, r, k])).sub(dg.get(&[j, k, r])).scale(0.5)
                });
                self.raise_first(&lowered)
            }
            ObjectId::RTorsion => {
                let nl = self.object(&ObjectId::Barthel)?;
                NT::from_fn(n, &sig3, |i| {
                    self.delta(&nl, nl.get(&[i[0], i[1]]), i[2]).sub(&self.delta(&nl, nl.get(&[i[0], i[2]]), i[1]))
                })
            }
            ObjectId::PTorsion => (*self.p_torsion(ConnectionKind::Cartan)?).clone(),
            ObjectId::Curvature(CurvatureKind::H, kind) => {
                let f = self.horizontal(*kind)?;
                let c = self.vertical(*kind)?;
                let nl = self.object(&ObjectId::Barthel)?;
                let rt = if c.is_some() { Some(self.object(&ObjectId::RTorsion)?) } else { None };
                NT::from_fn(n, &sig4, |idx| {
                    let (i, h, j, k) = (idx[0], idx[1], idx[2], idx[3]);
                    let mut acc = self.delta(&nl, f.get(&[i, h, j]), k).sub(&self.delta(&nl, f.get(&[i, h, k]), j));
                    for m in 0..n {
                        acc = acc.add(&f.get(&[m, h, j]).mul(f.get(&[i, m, k])));
                        acc = acc.sub(&f.get(&[m, h, k]).mul(f.get(&[i, m, j])));
                        if let (Some(c), Some(rt)) = (&c, &rt) {
                            acc = acc.add(&c.get(&[i, h, m]).mul(rt.get(&[m, j, k])));
                        }
                    }
                    acc
                })
            }
            ObjectId::Curvature(CurvatureKind::Hv, kind) => {
                let f = self.horizontal(*kind)?;
                let c = self.vertical(*kind)?;
                let nl = self.object(&ObjectId::Barthel)?;
                let pt = self.p_torsion(*kind)?;
                NT::from_fn(n, &sig4, |idx| {
                    let (i, h, j, k) = (idx[0], idx[1], idx[2], idx[3]);
                    let mut acc = self.dy(f.get(&[i, h, j]), k);
                    if let Some(c) = &c {
                        // C^i_{hk|j}
                        let mut cd = self.delta(&nl, c.get(&[i, h, k]), j);
                        for m in 0..n {
                            cd = cd.add(&f.get(&[i, m, j]).mul(c.get(&[m, h, k])));
                            cd = cd.sub(&f.get(&[m, h, j]).mul(c.get(&[i, m, k])));
                            cd = cd.sub(&f.get(&[m, k, j]).mul(c.get(&[i, h, m])));
                        }
                        acc = acc.sub(&cd);
                        for m in 0..n {
                            acc = acc.add(&c.get(&[i, h, m]).mul(pt.get(&[m, j, k])));
                        }
                    }
                    acc
                })
            }
            ObjectId::Curvature(CurvatureKind::V, kind) => match self.vertical(*kind)? {
                None => NT::from_fn(n, &sig4, |_| Jet::zero(&self.space)),
                Some(c) => NT::from_fn(n, &sig4, |idx| {
                    let (i, h, j, k) = (idx[0], idx[1], idx[2], idx[3]);
                    let mut acc = self.dy(c.get(&[i, h, j]), k).sub(&self.dy(c.get(&[i, h, k]), j));
                    for m in 0..n {
                        acc = acc.add(&c.get(&[m, h, j]).mul(c.get(&[i, m, k])));
                        acc = acc.sub(&c.get(&[m, h, k]).mul(c.get(&[i, m, j])));
                    }
                    acc
                }),
            },
            ObjectId::HCov(inner, kind) => {
                let t = self.object(inner)?;
                let f = self.horizontal(*kind)?;
                let nl = self.object(&ObjectId::Barthel)?;
                self.covariant(&t, Some(&f), |e, k| self.delta(&nl, e, k))
            }
            ObjectId::VCov(inner, kind) => {
                let t = self.object(inner)?;
                let c = self.vertical(*kind)?;
                self.covariant(&t, c.as_deref(), |e, k| self.dy(e, k))
            }
            ObjectId::Classify => return Err(GeometryError::UnsupportedObject("classify is not a tensor".into())),
        })
    }

    fn covariant(&self, t: &NT, coeffs: Option<&NT>, base: impl Fn(&Jet, usize) -> Jet) -> NT {
        let n = self.n;
        let rank = t.sig.len();
        let mut sig = t.sig.clone();
        sig.push(Down);
        NT::from_fn(n, &sig, |idx| {
            let (k, rest) = idx.split_last().expect("rank >= 1");
            let mut acc = base(t.get(rest), *k);
            if let Some(f) = coeffs {
                let mut src = rest.to_vec();
                for s in 0..rank {
                    for r in 0..n {
                        src[s] = r;
                        acc = match t.sig[s] {
                            Up => acc.add(&t.get(&src).mul(f.get(&[rest[s], r, *k]))),
                            Down => acc.sub(&t.get(&src).mul(f.get(&[r, rest[s], *k]))),
                        };
                    }
                    src[s] = rest[s];
                }
            }
            acc
        })
    }
}

fn sum(space: &Arc<JetSpace>, count: usize, f: impl Fn(usize) -> Jet) -> Jet {
    (0..count).fold(Jet::zero(space), |acc, i| acc.add(&f(i)))
}

/// Gauss-Jordan with partial pivoting on the point values.
fn invert(g: &NT, space: &Arc<JetSpace>) -> Option<NT> {
    let n = g.dim;
    let mut a: Vec<Vec<Jet>> = (0..n).map(|i| (0..n).map(|j| g.get(&[i, j]).clone()).collect()).collect();
    let mut inv: Vec<Vec<Jet>> =
        (0..n).map(|i| (0..n).map(|j| Jet::constant(space, if i == j { 1.0 } else { 0.0 })).collect()).collect();
    let scale = a.iter().flatten().map(|e| e.value().abs()).fold(0.0, f64::max).max(1e-300);
    for c in 0..n {
        let pivot = (c..n).max_by(|&r, &s| a[r][c].value().abs().total_cmp(&a[s][c].value().abs()))?;
        if a[pivot][c].value().abs() < 1e-12 * scale {
            return None;
        }
        a.swap(c, pivot);
        inv.swap(c, pivot);
        let p = a[c][c].recip()?;
        a[c] = a[c].iter().map(|e| e.mul(&p)).collect();
        inv[c] = inv[c].iter().map(|e| e.mul(&p)).collect();
        for r in 0..n {
            if r == c {
                continue;
            }
            let factor = a[r][c].clone();
            a[r] = a[r].iter().zip(&a[c]).map(|(e, pc)| e.sub(&factor.mul(pc))).collect();
            inv[r] = inv[r].iter().zip(&inv[c]).map(|(e, pc)| e.sub(&factor.mul(pc))).collect();
        }
    }
    Some(NT::from_fn(n, &[Up, Up], |i| inv[i[0]][i[1]].clone()))
}

/// Numeric values of `id` at `p`, computed from jets of `F²` only.
pub fn numeric_object(fs: &FinslerStructure, id: &ObjectId, p: &NumericPoint) -> Result<NumericTable> {
    if *id == ObjectId::Classify {
        return Err(GeometryError::UnsupportedObject("classify is not a tensor".into()));
    }
    let mut ng = NumericGeometry::new(fs, p, order_needed(id))?;
    Ok(ng.object(id)?.table())
}

/// `(max |C_ijk|, max |∂̇_m G^i_jk|)` at `p`.
pub fn numeric_classification_residuals(fs: &FinslerStructure, p: &NumericPoint) -> Result<(f64, f64)> {
    let mut ng = NumericGeometry::new(fs, p, order_needed(&ObjectId::Classify))?;
    let c = ng.object(&ObjectId::Cartan)?;
    let gb = ng.object(&ObjectId::Berwald)?;
    let n = ng.n;
    let max_c = c.data.iter().map(|j| j.value().abs()).fold(0.0, f64::max);
    let mut max_d: f64 = 0.0;
    for jet in &gb.data {
        for m in 0..n {
            max_d = max_d.max(jet.diff(n + m).value().abs());
        }
    }
    Ok((max_c, max_d))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub points: usize,
    pub tol: f64,
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { points: 8, tol: 1e-9, seed: 42, lo: 1.0, hi: 2.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentCheck {
    pub index: Vec<usize>,
    pub max_abs: f64,
    /// Largest `|symbolic - numeric| / max(1, |numeric|)`.
    pub max_rel: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub object: String,
    pub seed: u64,
    pub tol: f64,
    pub points: Vec<NumericPoint>,
    pub components: Vec<ComponentCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.components.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ComponentCheck> {
        self.components.iter().filter(|c| !c.pass)
    }

    pub fn max_rel(&self) -> f64 {
        self.components.iter().map(|c| c.max_rel).fold(0.0, f64::max)
    }
}

/// Compares the symbolic object against the oracle at seeded sample points.
pub fn verify(geom: &Geometry, id: &ObjectId, opts: &VerifyOptions) -> Result<VerificationReport> {
    if *id == ObjectId::Classify {
        return verify_classification(geom, opts);
    }
    let t = geom.tensor(id)?;
    verify_tensor(geom.structure(), &t, id, opts)
}

/// Compares an explicit tensor against the oracle's values for `id`.
pub fn verify_tensor(fs: &FinslerStructure, t: &Tensor, id: &ObjectId, opts: &VerifyOptions) -> Result<VerificationReport> {
    if opts.points == 0 {
        return Err(GeometryError::Domain("verification needs at least one point".into()));
    }
    let sampler = fs.sampler().with_box(opts.lo, opts.hi);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut points = Vec::with_capacity(opts.points);
    let mut samples: Vec<(Vec<f64>, NumericTable)> = Vec::with_capacity(opts.points);
    for _ in 0..opts.points {
        let mut found = None;
        sampler
            .draw(&mut rng, |p| {
                let Ok(numeric) = numeric_object(fs, id, p) else { return false };
                let symbolic: std::result::Result<Vec<f64>, _> =
                    t.components().par_iter().map(|e| eval_at(e, p)).collect();
                match symbolic {
                    Ok(s) => {
                        found = Some((s, numeric));
                        true
                    }
                    Err(_) => false,
                }
            })
            .map(|p| points.push(p))
            .ok_or(GeometryError::SamplingExhausted(sampler.retry_cap))?;
        samples.push(found.expect("accepted point has values"));
    }
    let components = t
        .indices()
        .enumerate()
        .map(|(f, index)| {
            let (mut max_abs, mut max_rel) = (0.0f64, 0.0f64);
            for (s, num) in &samples {
                let d = (s[f] - num.values[f]).abs();
                max_abs = max_abs.max(d);
                max_rel = max_rel.max(d / num.values[f].abs().max(1.0));
            }
            let pass = max_rel <= opts.tol && max_rel.is_finite();
            ComponentCheck { index, max_abs, max_rel, pass }
        })
        .collect();
    Ok(VerificationReport { object: id.to_string(), seed: opts.seed, tol: opts.tol, points, components })
}

fn verify_classification(geom: &Geometry, opts: &VerifyOptions) -> Result<VerificationReport> {
    let cls = geom.classify()?;
    let fs = geom.structure();
    let sampler = fs.sampler().with_box(opts.lo, opts.hi);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut points = Vec::new();
    let (mut max_c, mut max_d) = (0.0f64, 0.0f64);
    for _ in 0..opts.points {
        let mut res = None;
        let p = sampler
            .draw(&mut rng, |p| {
                res = numeric_classification_residuals(fs, p).ok();
                res.is_some()
            })
            .ok_or(GeometryError::SamplingExhausted(sampler.retry_cap))?;
        let (c, d) = res.expect("accepted point has residuals");
        max_c = max_c.max(c);
        max_d = max_d.max(d);
        points.push(p);
    }
    let flag = |symbolic: bool, residual: f64| {
        let numeric = residual <= opts.tol;
        let dev = if symbolic == numeric { 0.0 } else { 1.0 };
        ComponentCheck { index: Vec::new(), max_abs: dev, max_rel: dev, pass: dev == 0.0 }
    };
    let components = vec![flag(cls.riemannian, max_c), flag(cls.berwaldian, max_d)];
    Ok(VerificationReport { object: "classify".into(), seed: opts.seed, tol: opts.tol, points, components })
}
