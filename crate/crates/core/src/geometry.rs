//! From `F²` to the fundamental tensors, the spray and nonlinear connection,
//! the four fundamental Finsler connections, their torsions, covariant
//! derivatives and curvatures.
//!
//! Everything is computed from `F²`; the only radical introduced by the
//! geometry itself is `F = sqrt(F²)` in the supporting element.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use finsler_symbolic::{
    parse_constraints, parse_node, Constraint, Coordinates, Expr, Node, Sampler, Var, ZeroStatus, ZeroTest,
};

use crate::error::{GeometryError, Result};
use crate::registry::ObjectId;
use crate::tensor::{Symmetry, Tensor, Variance};

use Variance::{Down, Up};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnectionKind {
    Cartan,
    Berwald,
    Chern,
    Hashiguchi,
}

impl ConnectionKind {
    pub const ALL: [ConnectionKind; 4] =
        [ConnectionKind::Cartan, ConnectionKind::Berwald, ConnectionKind::Chern, ConnectionKind::Hashiguchi];

    pub fn name(self) -> &'static str {
        match self {
            ConnectionKind::Cartan => "cartan",
            ConnectionKind::Berwald => "berwald",
            ConnectionKind::Chern => "chern",
            ConnectionKind::Hashiguchi => "hashiguchi",
        }
    }

    /// Whether the horizontal coefficients are the Berwald `G^i_jk` (else `Γ^i_jk`).
    pub fn uses_berwald_coefficients(self) -> bool {
        matches!(self, ConnectionKind::Berwald | ConnectionKind::Hashiguchi)
    }

    /// Whether the vertical coefficients are `C^i_jk` (else zero).
    pub fn has_vertical_coefficients(self) -> bool {
        matches!(self, ConnectionKind::Cartan | ConnectionKind::Hashiguchi)
    }
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConnectionKind {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        ConnectionKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| GeometryError::UnknownObject(format!("connection kind `{s}`")))
    }
}

/// h-, hv- and v-curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvatureKind {
    H,
    Hv,
    V,
}

impl CurvatureKind {
    pub fn symbol(self) -> &'static str {
        match self {
            CurvatureKind::H => "R",
            CurvatureKind::Hv => "P",
            CurvatureKind::V => "S",
        }
    }
}

/// A Finsler function given through `F²`, with coordinate names and the
/// domain constraints used for numeric sampling.
#[derive(Clone, Debug)]
pub struct FinslerStructure {
    coords: Coordinates,
    f_squared: Expr,
    source: Node,
    constraints: Vec<Constraint>,
}

impl FinslerStructure {
    /// Parses `F²`.
    pub fn new(coords: Coordinates, f_squared: &str) -> Result<Self> {
        let source = parse_node(f_squared, &coords)?;
        Self::from_node(coords, source)
    }

    /// Parses `F` and squares it.
    pub fn from_f(coords: Coordinates, f: &str) -> Result<Self> {
        let source = Node::Pow(Box::new(parse_node(f, &coords)?), 2, 1);
        Self::from_node(coords, source)
    }

    /// `F²` given as an unevaluated tree.
    pub fn from_node(coords: Coordinates, source: Node) -> Result<Self> {
        if coords.dim() < 2 {
            return Err(GeometryError::BadDimension(coords.dim()));
        }
        let f_squared = source.canonicalize()?;
        Ok(FinslerStructure { coords, f_squared, source, constraints: Vec::new() })
    }

    pub fn with_constraints(mut self, constraints: Vec<Constraint>) -> Self {
        self.constraints = constraints;
        self
    }

    /// Adds constraints written as `"x3!=0,y2>0"`.
    pub fn with_constraint_text(mut self, text: &str) -> Result<Self> {
        self.constraints.extend(parse_constraints(text, &self.coords)?);
        Ok(self)
    }

    pub fn coords(&self) -> &Coordinates {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.dim()
    }

    pub fn f_squared(&self) -> &Expr {
        &self.f_squared
    }

    /// The tree `F²` was built from, as the user wrote it.
    pub fn source(&self) -> &Node {
        &self.source
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Sampler over the default box `[1, 2]` honouring the constraints.
    pub fn sampler(&self) -> Sampler {
        Sampler::new(self.dim()).with_constraints(self.constraints.clone())
    }

    pub fn zero_test(&self) -> ZeroTest {
        ZeroTest { sampler: self.sampler(), ..ZeroTest::new(self.dim()) }
    }
}

/// The `(F^i_jk, N^i_j, C^i_jk)` coefficients of a Finsler connection.
/// `vertical` is `None` when the vertical coefficients vanish.
#[derive(Clone, Debug)]
pub struct ConnectionTriple {
    pub kind: ConnectionKind,
    pub horizontal: Arc<Tensor>,
    pub nonlinear: Arc<Tensor>,
    pub vertical: Option<Arc<Tensor>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub riemannian: bool,
    pub berwaldian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Object(ObjectId),
    /// `δ_k g_ij`
    DeltaMetric,
    /// `∂̇_k N^i_j - F^i_jk` of the given connection.
    PTorsionOf(ConnectionKind),
}

type Slot = Arc<OnceLock<Result<Arc<Tensor>>>>;

pub struct Geometry {
    fs: FinslerStructure,
    zt: ZeroTest,
    /// `∂̇_i F²`
    f2_grad: Vec<Expr>,
    g: Arc<Tensor>,
    g_inv: Arc<Tensor>,
    cache: Mutex<HashMap<Key, Slot>>,
    classification: OnceLock<Result<Classification>>,
}

fn x(i: usize) -> Var {
    Var::Base(i)
}

fn y(i: usize) -> Var {
    Var::Fiber(i)
}

impl Geometry {
    /// Validates homogeneity and nondegeneracy and computes `g_ij` and `g^ij`.
    pub fn build(fs: FinslerStructure) -> Result<Geometry> {
        let n = fs.dim();
        if n < 2 {
            return Err(GeometryError::BadDimension(n));
        }
        let zt = fs.zero_test();
        let f2 = fs.f_squared().clone();
        let f2_grad: Vec<Expr> = (0..n).map(|i| f2.diff(y(i))).collect();
        let euler = (0..n)
            .map(|k| Expr::var(y(k)).mul(&f2_grad[k]))
            .sum::<Expr>()
            .sub(&f2.add(&f2));
        if zt.check(&euler) == ZeroStatus::NonZero {
            return Err(GeometryError::NotHomogeneous);
        }
        let half = Expr::rational(1, 2);
        let g = Tensor::define("g", n, &[Down, Down], vec![Symmetry::symmetric(&[0, 1])], |i| {
            Ok(f2_grad[i[0]].diff(y(i[1])).mul(&half))
        })?;
        let g_inv = invert(&g, &zt)?;
        let geom = Geometry {
            fs,
            zt,
            f2_grad,
            g: Arc::new(g),
            g_inv: Arc::new(g_inv),
            cache: Mutex::new(HashMap::new()),
            classification: OnceLock::new(),
        };
        geom.check_inverse()?;
        log::debug!("built geometry of dimension {n}");
        Ok(geom)
    }

    fn check_inverse(&self) -> Result<()> {
        let prod = self.g.contract_product(&self.g_inv, &[(1, 0)])?;
        let delta = Tensor::kronecker(self.dim());
        for (a, b) in prod.components().iter().zip(delta.components()) {
            if self.zt.check(&a.sub(b)) == ZeroStatus::NonZero {
                return Err(GeometryError::DegenerateMetric);
            }
        }
        Ok(())
    }

    pub fn structure(&self) -> &FinslerStructure {
        &self.fs
    }

    pub fn dim(&self) -> usize {
        self.fs.dim()
    }

    pub fn coords(&self) -> &Coordinates {
        self.fs.coords()
    }

    /// Zero test using the structure's sampling domain.
    pub fn zero_test(&self) -> &ZeroTest {
        &self.zt
    }

    pub fn metric(&self) -> Arc<Tensor> {
        self.g.clone()
    }

    pub fn inverse_metric(&self) -> Arc<Tensor> {
        self.g_inv.clone()
    }

    fn cached(&self, key: Key, compute: impl FnOnce() -> Result<Tensor>) -> Result<Arc<Tensor>> {
        let slot = {
            let mut cache = self.cache.lock().expect("geometry cache poisoned");
            cache.entry(key).or_default().clone()
        };
        slot.get_or_init(|| compute().map(Arc::new)).clone()
    }

    /// Any registered tensor object.
    pub fn tensor(&self, id: &ObjectId) -> Result<Arc<Tensor>> {
        match id {
            ObjectId::Metric => Ok(self.metric()),
            ObjectId::InverseMetric => Ok(self.inverse_metric()),
            ObjectId::Classify => Err(GeometryError::UnsupportedObject("classify is not a tensor".into())),
            _ => self.cached(Key::Object(id.clone()), || self.compute(id)),
        }
    }

    fn compute(&self, id: &ObjectId) -> Result<Tensor> {
        let named = |t: Tensor| t.with_name(&id.to_string());
        Ok(match id {
            ObjectId::Metric | ObjectId::InverseMetric | ObjectId::Classify => unreachable!("handled by tensor()"),
            ObjectId::SupportUp => self.compute_l_up()?,
            ObjectId::SupportDown => {
                let lup = self.tensor(&ObjectId::SupportUp)?;
                named(self.g.contract_product(&lup, &[(1, 0)])?)
            }
            ObjectId::Angular => self.compute_angular()?,
            ObjectId::Cartan => self.compute_cartan()?,
            ObjectId::CartanMixed => {
                let c = self.tensor(&ObjectId::Cartan)?;
                named(c.move_index(0, &self.g, &self.g_inv)?.assume_symmetry(Symmetry::symmetric(&[1, 2])))
            }
            ObjectId::Christoffel => self.compute_christoffel()?,
            ObjectId::Spray => self.compute_spray()?,
            ObjectId::Barthel => {
                let spray = self.tensor(&ObjectId::Spray)?;
                Tensor::from_fn("N", self.dim(), &[Up, Down], |i| Ok(spray.get(&[i[0]]).diff(y(i[1]))))?
            }
            ObjectId::Berwald => {
                let nl = self.tensor(&ObjectId::Barthel)?;
                Tensor::define("Gberwald", self.dim(), &[Up, Down, Down], vec![Symmetry::symmetric(&[1, 2])], |i| {
                    Ok(nl.get(&[i[0], i[1]]).diff(y(i[2])))
                })?
            }
            ObjectId::CartanCoefficients => self.compute_gamma()?,
            ObjectId::RTorsion => {
                let nl = self.tensor(&ObjectId::Barthel)?;
                Tensor::define("Rtorsion", self.dim(), &[Up, Down, Down], vec![Symmetry::antisymmetric(&[1, 2])], |i| {
                    let a = self.delta_with(&nl, nl.get(&[i[0], i[1]]), i[2]);
                    let b = self.delta_with(&nl, nl.get(&[i[0], i[2]]), i[1]);
                    Ok(a.sub(&b))
                })?
            }
            ObjectId::PTorsion => named((*self.p_torsion(ConnectionKind::Cartan)?).clone()),
            ObjectId::Curvature(which, kind) => named(self.compute_curvature(*kind, *which)?),
            ObjectId::HCov(inner, kind) => {
                let t = self.tensor(inner)?;
                named(self.h_cov_derivative(&t, &self.triple(*kind)?)?)
            }
            ObjectId::VCov(inner, kind) => {
                let t = self.tensor(inner)?;
                named(self.v_cov_derivative(&t, &self.triple(*kind)?)?)
            }
        })
    }

    fn compute_l_up(&self) -> Result<Tensor> {
        let f = self.fs.f_squared().sqrt()?;
        let inv_f = f.inv()?;
        Tensor::from_fn("lup", self.dim(), &[Up], |i| Ok(Expr::var(y(i[0])).mul(&inv_f)))
    }

    fn compute_angular(&self) -> Result<Tensor> {
        let l = self.tensor(&ObjectId::SupportDown)?;
        Tensor::define("h", self.dim(), &[Down, Down], vec![Symmetry::symmetric(&[0, 1])], |i| {
            Ok(self.g.get(i).sub(&l.get(&[i[0]]).mul(l.get(&[i[1]]))))
        })
    }

    fn compute_cartan(&self) -> Result<Tensor> {
        let half = Expr::rational(1, 2);
        Tensor::define("C", self.dim(), &[Down, Down, Down], vec![Symmetry::symmetric(&[0, 1, 2])], |i| {
            Ok(self.g.get(&[i[0], i[1]]).diff(y(i[2])).mul(&half))
        })
    }

    /// `γ^i_jk = ½ g^ir (∂_j g_kr + ∂_k g_jr - ∂_r g_jk)`
    fn compute_christoffel(&self) -> Result<Tensor> {
        let n = self.dim();
        let half = Expr::rational(1, 2);
        let lowered = Tensor::define("gamma_lowered", n, &[Down, Down, Down], vec![Symmetry::symmetric(&[1, 2])], |i| {
            let (r, j, k) = (i[0], i[1], i[2]);
            let s = self.g.get(&[k, r]).diff(x(j)).add(&self.g.get(&[j, r]).diff(x(k))).sub(&self.g.get(&[j, k]).diff(x(r)));
            Ok(s.mul(&half))
        })?;
        Ok(lowered.move_index(0, &self.g, &self.g_inv)?.assume_symmetry(Symmetry::symmetric(&[1, 2])).with_name("gamma"))
    }

    /// `G^i = ¼ g^ir (y^j ∂_j ∂̇_r F² - ∂_r F²)`, equal to `½ γ^i_jk y^j y^k`.
    fn compute_spray(&self) -> Result<Tensor> {
        let n = self.dim();
        let f2 = self.fs.f_squared();
        let quarter = Expr::rational(1, 4);
        let w: Vec<Expr> = (0..n)
            .map(|r| {
                let a: Expr = (0..n).map(|j| Expr::var(y(j)).mul(&self.f2_grad[r].diff(x(j)))).sum();
                a.sub(&f2.diff(x(r)))
            })
            .collect();
        Tensor::from_fn("Gspray", n, &[Up], |i| {
            let s: Expr = (0..n).map(|r| self.g_inv.get(&[i[0], r]).mul(&w[r])).sum();
            Ok(s.mul(&quarter))
        })
    }

    /// `δ_k e = ∂_k e - N^r_k ∂̇_r e`
    pub fn horizontal_derivative(&self, e: &Expr, k: usize) -> Result<Expr> {
        let nl = self.tensor(&ObjectId::Barthel)?;
        Ok(self.delta_with(&nl, e, k))
    }

    fn delta_with(&self, nl: &Tensor, e: &Expr, k: usize) -> Expr {
        let mut acc = e.diff(x(k));
        for r in 0..self.dim() {
            let c = nl.get(&[r, k]);
            if !c.is_zero() {
                acc = acc.sub(&c.mul(&e.diff(y(r))));
            }
        }
        acc
    }

    /// `δ_k T`, the new slot last.
    pub fn horizontal_gradient(&self, t: &Tensor) -> Result<Tensor> {
        let nl = self.tensor(&ObjectId::Barthel)?;
        let mut sig = t.signature().to_vec();
        sig.push(Down);
        Tensor::from_fn(&format!("d{}", t.name()), self.dim(), &sig, |i| {
            let (k, rest) = i.split_last().expect("rank >= 1");
            Ok(self.delta_with(&nl, t.get(rest), *k))
        })
    }

    /// `∂̇_k T`, the new slot last.
    pub fn vertical_gradient(&self, t: &Tensor) -> Result<Tensor> {
        let mut sig = t.signature().to_vec();
        sig.push(Down);
        Tensor::from_fn(&format!("dy{}", t.name()), self.dim(), &sig, |i| {
            let (k, rest) = i.split_last().expect("rank >= 1");
            Ok(t.get(rest).diff(y(*k)))
        })
    }

    fn delta_metric(&self) -> Result<Arc<Tensor>> {
        self.cached(Key::DeltaMetric, || {
            let nl = self.tensor(&ObjectId::Barthel)?;
            Tensor::define("dg", self.dim(), &[Down, Down, Down], vec![Symmetry::symmetric(&[0, 1])], |i| {
                Ok(self.delta_with(&nl, self.g.get(&[i[0], i[1]]), i[2]))
            })
        })
    }

    /// `Γ^i_jk = ½ g^ir (δ_j g_kr + δ_k g_jr - δ_r g_jk)`
    fn compute_gamma(&self) -> Result<Tensor> {
        let dg = self.delta_metric()?;
        let half = Expr::rational(1, 2);
        let lowered = Tensor::define("Gamma_lowered", self.dim(), &[Down, Down, Down], vec![Symmetry::symmetric(&[1, 2])], |i| {
            let (r, j, k) = (i[0], i[1], i[2]);
            Ok(dg.get(&[k, r, j]).add(dg.get(&[j, r, k])).sub(dg.get(&[j, k, r])).mul(&half))
        })?;
        Ok(lowered.move_index(0, &self.g, &self.g_inv)?.assume_symmetry(Symmetry::symmetric(&[1, 2])).with_name("Gamma"))
    }

    pub fn supporting_and_angular(&self) -> Result<(Arc<Tensor>, Arc<Tensor>, Arc<Tensor>)> {
        Ok((
            self.tensor(&ObjectId::SupportDown)?,
            self.tensor(&ObjectId::SupportUp)?,
            self.tensor(&ObjectId::Angular)?,
        ))
    }

    /// `C_ijk` and `C^i_jk`.
    pub fn cartan_tensor(&self) -> Result<(Arc<Tensor>, Arc<Tensor>)> {
        Ok((self.tensor(&ObjectId::Cartan)?, self.tensor(&ObjectId::CartanMixed)?))
    }

    pub fn spray(&self) -> Result<Arc<Tensor>> {
        self.tensor(&ObjectId::Spray)
    }

    pub fn nonlinear_connection(&self) -> Result<Arc<Tensor>> {
        self.tensor(&ObjectId::Barthel)
    }

    pub fn berwald_coefficients(&self) -> Result<Arc<Tensor>> {
        self.tensor(&ObjectId::Berwald)
    }

    pub fn cartan_coefficients(&self) -> Result<Arc<Tensor>> {
        self.tensor(&ObjectId::CartanCoefficients)
    }

    pub fn triple(&self, kind: ConnectionKind) -> Result<ConnectionTriple> {
        let horizontal = if kind.uses_berwald_coefficients() {
            self.tensor(&ObjectId::Berwald)?
        } else {
            self.tensor(&ObjectId::CartanCoefficients)?
        };
        let vertical =
            if kind.has_vertical_coefficients() { Some(self.tensor(&ObjectId::CartanMixed)?) } else { None };
        Ok(ConnectionTriple { kind, horizontal, nonlinear: self.tensor(&ObjectId::Barthel)?, vertical })
    }

    /// `(R^i_jk, P^i_jk)` of the Cartan connection.
    pub fn torsions(&self) -> Result<(Arc<Tensor>, Arc<Tensor>)> {
        Ok((self.tensor(&ObjectId::RTorsion)?, self.tensor(&ObjectId::PTorsion)?))
    }

    /// `P^i_jk = ∂̇_k N^i_j - F^i_jk` for the given connection.
    pub fn p_torsion(&self, kind: ConnectionKind) -> Result<Arc<Tensor>> {
        self.cached(Key::PTorsionOf(kind), || {
            let gb = self.tensor(&ObjectId::Berwald)?;
            let triple = self.triple(kind)?;
            Ok(gb.sub(&triple.horizontal)?.with_name(&format!("Ptorsion:{kind}")))
        })
    }

    fn covariant(&self, t: &Tensor, coeffs: Option<&Tensor>, base: impl Fn(&Expr, usize) -> Expr + Sync, label: &str) -> Result<Tensor> {
        let rank = t.rank();
        let mut sig = t.signature().to_vec();
        sig.push(Down);
        let n = self.dim();
        Tensor::from_fn(&format!("{label}({})", t.name()), n, &sig, |idx| {
            let (k, rest) = idx.split_last().expect("rank >= 1");
            let k = *k;
            let mut acc = base(t.get(rest), k);
            let Some(f) = coeffs else { return Ok(acc) };
            let mut src = rest.to_vec();
            for s in 0..rank {
                for r in 0..n {
                    src[s] = r;
                    let v = t.get(&src);
                    if v.is_zero() {
                        continue;
                    }
                    match t.signature()[s] {
                        Up => acc = acc.add(&v.mul(f.get(&[rest[s], r, k]))),
                        Down => acc = acc.sub(&v.mul(f.get(&[r, rest[s], k]))),
                    }
                }
                src[s] = rest[s];
            }
            Ok(acc)
        })
    }

    /// h-covariant derivative: `δ_k` plus one `F`-term per slot, new slot last.
    pub fn h_cov_derivative(&self, t: &Tensor, triple: &ConnectionTriple) -> Result<Tensor> {
        let nl = triple.nonlinear.clone();
        self.covariant(t, Some(&triple.horizontal), |e, k| self.delta_with(&nl, e, k), "hcov")
    }

    /// v-covariant derivative: `∂̇_k` plus one `C`-term per slot, new slot last.
    pub fn v_cov_derivative(&self, t: &Tensor, triple: &ConnectionTriple) -> Result<Tensor> {
        self.covariant(t, triple.vertical.as_deref(), |e, k| e.diff(y(k)), "vcov")
    }

    pub fn curvature(&self, kind: ConnectionKind, which: CurvatureKind) -> Result<Arc<Tensor>> {
        self.tensor(&ObjectId::Curvature(which, kind))
    }

    fn compute_curvature(&self, kind: ConnectionKind, which: CurvatureKind) -> Result<Tensor> {
        let triple = self.triple(kind)?;
        let f = &triple.horizontal;
        let n = self.dim();
        let sig = [Up, Down, Down, Down];
        match which {
            CurvatureKind::H => {
                // alt_(j,k){δ_k F^i_hj + F^m_hj F^i_mk} + C^i_hm R^m_jk
                let ff = f.contract_product(f, &[(0, 1)])?.permute(&[2, 0, 1, 3])?;
                let mut r = self.horizontal_gradient(f)?.add(&ff)?.alternate(2, 3)?;
                if let Some(c) = &triple.vertical {
                    let rt = self.tensor(&ObjectId::RTorsion)?;
                    r = r.add(&c.contract_product(&rt, &[(2, 0)])?)?;
                }
                Ok(r)
            }
            CurvatureKind::Hv => {
                // ∂̇_k F^i_hj - C^i_{hk|j} + C^i_hm P^m_jk
                let mut p = self.vertical_gradient(f)?;
                if let Some(c) = &triple.vertical {
                    let c_hk_j = self.h_cov_derivative(c, &triple)?.permute(&[0, 1, 3, 2])?;
                    let pt = self.p_torsion(kind)?;
                    p = p.sub(&c_hk_j)?.add(&c.contract_product(&pt, &[(2, 0)])?)?;
                }
                Ok(p)
            }
            CurvatureKind::V => match &triple.vertical {
                // alt_(j,k){∂̇_k C^i_hj + C^m_hj C^i_mk}
                Some(c) => {
                    let cc = c.contract_product(c, &[(0, 1)])?.permute(&[2, 0, 1, 3])?;
                    self.vertical_gradient(c)?.add(&cc)?.alternate(2, 3)
                }
                None => Ok(Tensor::zero("S", n, &sig).assume_symmetry(Symmetry::antisymmetric(&[2, 3]))),
            },
        }
    }

    /// Riemannian iff `C ≡ 0`; Berwaldian iff `∂̇_m G^i_jk ≡ 0`.
    pub fn classify(&self) -> Result<Classification> {
        self.classification
            .get_or_init(|| {
                let vanishes = |t: &Tensor| t.components().iter().all(|e| self.zt.check(e) != ZeroStatus::NonZero);
                let riemannian = vanishes(&*self.tensor(&ObjectId::Cartan)?);
                let gb = self.tensor(&ObjectId::Berwald)?;
                let berwaldian = vanishes(&self.vertical_gradient(&gb)?);
                Ok(Classification { riemannian, berwaldian })
            })
            .clone()
    }
}

/// Gauss-Jordan inversion over canonical expressions.
fn invert(g: &Tensor, zt: &ZeroTest) -> Result<Tensor> {
    let n = g.dim();
    let mut a: Vec<Vec<Expr>> = (0..n).map(|i| (0..n).map(|j| g.get(&[i, j]).clone()).collect()).collect();
    let mut inv: Vec<Vec<Expr>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect()).collect();
    for c in 0..n {
        let pivot = (c..n)
            .filter(|&r| !a[r][c].is_zero())
            .min_by_key(|&r| (zt.check(&a[r][c]) != ZeroStatus::NonZero, a[r][c].node_count()))
            .filter(|&r| zt.check(&a[r][c]) == ZeroStatus::NonZero)
            .ok_or(GeometryError::DegenerateMetric)?;
        a.swap(c, pivot);
        inv.swap(c, pivot);
        let p = a[c][c].inv()?;
        a[c] = a[c].iter().map(|e| e.mul(&p)).collect();
        inv[c] = inv[c].iter().map(|e| e.mul(&p)).collect();
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let factor = a[r][c].clone();
            a[r] = a[r].iter().zip(&a[c]).map(|(e, pc)| e.sub(&factor.mul(pc))).collect();
            inv[r] = inv[r].iter().zip(&inv[c]).map(|(e, pc)| e.sub(&factor.mul(pc))).collect();
        }
    }
    Tensor::define("ginv", n, &[Up, Up], vec![Symmetry::symmetric(&[0, 1])], |i| Ok(inv[i[0]][i[1]].clone()))
}
