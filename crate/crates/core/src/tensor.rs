//! Dense tensor component tables with variance signatures and declared
//! pairwise symmetries.
//!
//! Components are stored row-major over `[0, dim)^rank`. Index positions
//! ("slots") are zero-based throughout.

use std::collections::HashMap;
use std::fmt;

use finsler_symbolic::{Expr, ZeroStatus, ZeroTest};
use rayon::prelude::*;

use crate::error::{GeometryError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Up,
    Down,
}

impl Variance {
    pub fn flip(self) -> Variance {
        match self {
            Variance::Up => Variance::Down,
            Variance::Down => Variance::Up,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variance::Up => "up",
            Variance::Down => "down",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryKind {
    Symmetric,
    Antisymmetric,
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryKind::Symmetric => "symmetric",
            SymmetryKind::Antisymmetric => "antisymmetric",
        })
    }
}

/// (Anti)symmetry under every transposition of the listed slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub kind: SymmetryKind,
    pub slots: Vec<usize>,
}

impl Symmetry {
    pub fn symmetric(slots: &[usize]) -> Self {
        Symmetry { kind: SymmetryKind::Symmetric, slots: sorted(slots) }
    }

    pub fn antisymmetric(slots: &[usize]) -> Self {
        Symmetry { kind: SymmetryKind::Antisymmetric, slots: sorted(slots) }
    }

    fn involves(&self, slot: usize) -> bool {
        self.slots.contains(&slot)
    }
}

fn sorted(slots: &[usize]) -> Vec<usize> {
    let mut s = slots.to_vec();
    s.sort_unstable();
    s
}

/// One entry of [`Tensor::nonzero_components`].
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub index: Vec<usize>,
    pub expr: Expr,
    /// Set when the entry is not canonically zero but vanished at every sample.
    pub numerically_zero: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    name: String,
    dim: usize,
    sig: Vec<Variance>,
    symmetries: Vec<Symmetry>,
    components: Vec<Expr>,
}

/// Number of orbit members checked against the generator in [`Tensor::define`].
const SYMMETRY_CHECKS: usize = 6;

impl Tensor {
    /// Builds a tensor from a generator, evaluating it once per symmetry orbit
    /// and checking a sample of the other orbit members.
    pub fn define<G>(name: &str, dim: usize, sig: &[Variance], symmetries: Vec<Symmetry>, generator: G) -> Result<Tensor>
    where
        G: Fn(&[usize]) -> Result<Expr> + Sync,
    {
        validate_symmetries(name, sig, &symmetries)?;
        let shape = Shape::new(dim, sig.len());
        let reps: Vec<usize> =
            (0..shape.len()).filter(|&f| orbit_rep(&shape.unflatten(f), &symmetries) == Some((shape.unflatten(f), false))).collect();
        let values: Vec<Expr> = reps.par_iter().map(|&f| generator(&shape.unflatten(f))).collect::<Result<_>>()?;
        let table: HashMap<usize, Expr> = reps.into_iter().zip(values).collect();
        let components: Vec<Expr> = (0..shape.len())
            .map(|f| match orbit_rep(&shape.unflatten(f), &symmetries) {
                None => Expr::zero(),
                Some((r, neg)) => {
                    let v = &table[&shape.flatten(&r)];
                    if neg {
                        v.neg()
                    } else {
                        v.clone()
                    }
                }
            })
            .collect();
        let t = Tensor { name: name.to_string(), dim, sig: sig.to_vec(), symmetries, components };
        t.check_orbits(&shape, &generator)?;
        Ok(t)
    }

    fn check_orbits<G>(&self, shape: &Shape, generator: &G) -> Result<()>
    where
        G: Fn(&[usize]) -> Result<Expr> + Sync,
    {
        if self.symmetries.is_empty() {
            return Ok(());
        }
        let members: Vec<usize> = (0..shape.len())
            .filter(|&f| {
                let idx = shape.unflatten(f);
                orbit_rep(&idx, &self.symmetries).map_or(true, |(r, _)| r != idx)
            })
            .collect();
        let step = (members.len() / SYMMETRY_CHECKS).max(1);
        let sample: Vec<usize> = members.iter().copied().step_by(step).take(SYMMETRY_CHECKS).collect();
        let zt = ZeroTest::new(self.dim);
        sample.par_iter().try_for_each(|&f| {
            let idx = shape.unflatten(f);
            let direct = generator(&idx)?;
            let diff = direct.sub(&self.components[f]);
            if zt.check(&diff) == ZeroStatus::NonZero {
                let kind = self
                    .symmetries
                    .iter()
                    .find(|s| s.slots.windows(2).any(|w| idx[w[0]] >= idx[w[1]]))
                    .map_or("declared".to_string(), |s| s.kind.to_string());
                return Err(GeometryError::SymmetryViolation { tensor: self.name.clone(), index: idx, kind });
            }
            Ok(())
        })
    }

    /// Builds a tensor from a generator evaluated on every multi-index.
    pub fn from_fn<G>(name: &str, dim: usize, sig: &[Variance], generator: G) -> Result<Tensor>
    where
        G: Fn(&[usize]) -> Result<Expr> + Sync,
    {
        let shape = Shape::new(dim, sig.len());
        let components =
            (0..shape.len()).into_par_iter().map(|f| generator(&shape.unflatten(f))).collect::<Result<Vec<_>>>()?;
        Ok(Tensor { name: name.to_string(), dim, sig: sig.to_vec(), symmetries: Vec::new(), components })
    }

    pub fn zero(name: &str, dim: usize, sig: &[Variance]) -> Tensor {
        let len = dim.pow(sig.len() as u32);
        Tensor { name: name.to_string(), dim, sig: sig.to_vec(), symmetries: Vec::new(), components: vec![Expr::zero(); len] }
    }

    /// Kronecker delta `δ^i_j`.
    pub fn kronecker(dim: usize) -> Tensor {
        let components =
            (0..dim * dim).map(|f| if f / dim == f % dim { Expr::one() } else { Expr::zero() }).collect();
        Tensor {
            name: "delta".into(),
            dim,
            sig: vec![Variance::Up, Variance::Down],
            symmetries: Vec::new(),
            components,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Tensor {
        self.name = name.to_string();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.sig.len()
    }

    pub fn signature(&self) -> &[Variance] {
        &self.sig
    }

    pub fn symmetries(&self) -> &[Symmetry] {
        &self.symmetries
    }

    /// Declares an additional symmetry without checking it.
    pub(crate) fn assume_symmetry(mut self, s: Symmetry) -> Tensor {
        self.symmetries.push(s);
        self
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    fn shape(&self) -> Shape {
        Shape::new(self.dim, self.rank())
    }

    pub fn get(&self, index: &[usize]) -> &Expr {
        &self.components[self.shape().flatten(index)]
    }

    /// All multi-indices in lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> {
        let shape = self.shape();
        (0..shape.len()).map(move |f| shape.unflatten(f))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    /// Whether `index` is the representative of its symmetry orbit.
    pub fn is_orbit_rep(&self, index: &[usize]) -> bool {
        orbit_rep(index, &self.symmetries).is_some_and(|(r, _)| r == index)
    }

    /// Entries that are not canonically zero, in lexicographic index order.
    /// Only orbit representatives are listed unless `full_table` is set.
    pub fn nonzero_components(&self, full_table: bool, zt: &ZeroTest) -> Vec<Component> {
        let shape = self.shape();
        let candidates: Vec<usize> = (0..shape.len())
            .filter(|&f| !self.components[f].is_zero())
            .filter(|&f| full_table || self.is_orbit_rep(&shape.unflatten(f)))
            .collect();
        candidates
            .par_iter()
            .filter_map(|&f| {
                let e = &self.components[f];
                match zt.check(e) {
                    ZeroStatus::Zero => None,
                    status => Some(Component {
                        index: shape.unflatten(f),
                        expr: e.clone(),
                        numerically_zero: status == ZeroStatus::NumericallyZero,
                    }),
                }
            })
            .collect()
    }

    fn check_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.dim != other.dim || self.sig != other.sig {
            return Err(GeometryError::ShapeMismatch(format!(
                "{} {:?} vs {} {:?}",
                self.name, self.sig, other.name, other.sig
            )));
        }
        Ok(())
    }

    fn common_symmetries(&self, other: &Tensor) -> Vec<Symmetry> {
        self.symmetries.iter().filter(|s| other.symmetries.contains(s)).cloned().collect()
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        let components = self.components.par_iter().zip(&other.components).map(|(a, b)| a.add(b)).collect();
        Ok(Tensor { components, symmetries: self.common_symmetries(other), ..self.clone() })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        let components = self.components.par_iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect();
        Ok(Tensor { components, symmetries: self.common_symmetries(other), ..self.clone() })
    }

    pub fn scale(&self, c: &Expr) -> Tensor {
        let components = self.components.par_iter().map(|a| a.mul(c)).collect();
        Tensor { components, ..self.clone() }
    }

    pub fn map<F>(&self, f: F) -> Result<Tensor>
    where
        F: Fn(&Expr) -> Result<Expr> + Sync + Send,
    {
        let components = self.components.par_iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Tensor { components, ..self.clone() })
    }

    /// Reorders slots: slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Tensor> {
        let rank = self.rank();
        let mut seen = vec![false; rank];
        if perm.len() != rank || perm.iter().any(|&p| p >= rank || std::mem::replace(&mut seen[p], true)) {
            return Err(GeometryError::ShapeMismatch(format!("{perm:?} is not a permutation of {rank} slots")));
        }
        let sig: Vec<Variance> = perm.iter().map(|&p| self.sig[p]).collect();
        let mut inverse = vec![0; rank];
        for (s, &p) in perm.iter().enumerate() {
            inverse[p] = s;
        }
        let symmetries = self
            .symmetries
            .iter()
            .map(|s| Symmetry { kind: s.kind, slots: sorted(&s.slots.iter().map(|&p| inverse[p]).collect::<Vec<_>>()) })
            .collect();
        let shape = self.shape();
        let components = (0..shape.len())
            .map(|f| {
                let idx = shape.unflatten(f);
                let mut src = vec![0; rank];
                for (s, &p) in perm.iter().enumerate() {
                    src[p] = idx[s];
                }
                self.components[shape.flatten(&src)].clone()
            })
            .collect();
        Ok(Tensor { name: self.name.clone(), dim: self.dim, sig, symmetries, components })
    }

    /// Raises (Down slot) or lowers (Up slot) the index at `pos`.
    pub fn move_index(&self, pos: usize, g: &Tensor, g_inv: &Tensor) -> Result<Tensor> {
        let down = [Variance::Down, Variance::Down];
        let up = [Variance::Up, Variance::Up];
        if g.sig != down || g_inv.sig != up || g.dim != self.dim || g_inv.dim != self.dim {
            return Err(GeometryError::VarianceMismatch("move_index needs g (down, down) and g_inv (up, up)".into()));
        }
        if pos >= self.rank() {
            return Err(GeometryError::ShapeMismatch(format!("slot {pos} out of range for {}", self.name)));
        }
        let metric = if self.sig[pos] == Variance::Up { g } else { g_inv };
        let mut sig = self.sig.clone();
        sig[pos] = sig[pos].flip();
        let mut t = Tensor::from_fn(&self.name, self.dim, &sig, |idx| {
            let mut src = idx.to_vec();
            let mut acc = Expr::zero();
            for m in 0..self.dim {
                let c = metric.get(&[idx[pos], m]);
                if c.is_zero() {
                    continue;
                }
                src[pos] = m;
                acc = acc.add(&c.mul(self.get(&src)));
            }
            Ok(acc)
        })?;
        t.symmetries = self.symmetries.iter().filter(|s| !s.involves(pos)).cloned().collect();
        Ok(t)
    }

    /// Contracts slot pairs `(a, b)` of `self` and `other`. The result carries
    /// the free slots of `self`, then those of `other`, in order.
    pub fn contract_product(&self, other: &Tensor, pairs: &[(usize, usize)]) -> Result<Tensor> {
        if self.dim != other.dim {
            return Err(GeometryError::ShapeMismatch(format!("{} and {} differ in dimension", self.name, other.name)));
        }
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if a >= self.rank() || b >= other.rank() {
                return Err(GeometryError::ShapeMismatch(format!("pair ({a}, {b}) out of range")));
            }
            if pairs[..i].iter().any(|&(a2, b2)| a2 == a || b2 == b) {
                return Err(GeometryError::ShapeMismatch(format!("slot reused in pair ({a}, {b})")));
            }
            if self.sig[a] == other.sig[b] {
                return Err(GeometryError::VarianceMismatch(format!(
                    "cannot contract slot {a} of {} with slot {b} of {}: both {}",
                    self.name,
                    other.name,
                    self.sig[a].as_str()
                )));
            }
        }
        let free_a: Vec<usize> = (0..self.rank()).filter(|s| !pairs.iter().any(|p| p.0 == *s)).collect();
        let free_b: Vec<usize> = (0..other.rank()).filter(|s| !pairs.iter().any(|p| p.1 == *s)).collect();
        let sig: Vec<Variance> =
            free_a.iter().map(|&s| self.sig[s]).chain(free_b.iter().map(|&s| other.sig[s])).collect();
        let dummies = Shape::new(self.dim, pairs.len());
        let name = format!("{}*{}", self.name, other.name);
        let mut t = Tensor::from_fn(&name, self.dim, &sig, |idx| {
            let mut ia = vec![0; self.rank()];
            let mut ib = vec![0; other.rank()];
            for (k, &s) in free_a.iter().enumerate() {
                ia[s] = idx[k];
            }
            for (k, &s) in free_b.iter().enumerate() {
                ib[s] = idx[free_a.len() + k];
            }
            let mut acc = Expr::zero();
            for d in 0..dummies.len() {
                let m = dummies.unflatten(d);
                for (k, &(a, b)) in pairs.iter().enumerate() {
                    ia[a] = m[k];
                    ib[b] = m[k];
                }
                let x = self.get(&ia);
                if x.is_zero() {
                    continue;
                }
                let y = other.get(&ib);
                if !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
            }
            Ok(acc)
        })?;
        let remap = |syms: &[Symmetry], free: &[usize], offset: usize| -> Vec<Symmetry> {
            syms.iter()
                .filter(|s| s.slots.iter().all(|p| free.contains(p)))
                .map(|s| Symmetry {
                    kind: s.kind,
                    slots: s.slots.iter().map(|p| offset + free.iter().position(|f| f == p).expect("free slot")).collect(),
                })
                .collect()
        };
        t.symmetries = remap(&self.symmetries, &free_a, 0);
        t.symmetries.extend(remap(&other.symmetries, &free_b, free_a.len()));
        Ok(t)
    }

    /// `T - T` with slots `j` and `k` exchanged; the result is antisymmetric in `(j, k)`.
    pub fn alternate(&self, j: usize, k: usize) -> Result<Tensor> {
        if j >= self.rank() || k >= self.rank() || j == k {
            return Err(GeometryError::ShapeMismatch(format!("cannot alternate slots {j} and {k} of {}", self.name)));
        }
        if self.sig[j] != self.sig[k] {
            return Err(GeometryError::VarianceMismatch(format!(
                "alternation over slots {j} and {k} of {} with different variance",
                self.name
            )));
        }
        let mut perm: Vec<usize> = (0..self.rank()).collect();
        perm.swap(j, k);
        let swapped = self.permute(&perm)?;
        let mut t = Tensor::from_fn(&self.name, self.dim, &self.sig, |idx| {
            let f = self.shape().flatten(idx);
            Ok(self.components[f].sub(&swapped.components[f]))
        })?;
        t.symmetries = self.symmetries.iter().filter(|s| !s.involves(j) && !s.involves(k)).cloned().collect();
        t.symmetries.push(Symmetry::antisymmetric(&[j, k]));
        Ok(t)
    }
}

fn validate_symmetries(name: &str, sig: &[Variance], symmetries: &[Symmetry]) -> Result<()> {
    let err = |reason: String| Err(GeometryError::InvalidSymmetry { tensor: name.to_string(), reason });
    let mut used = vec![false; sig.len()];
    for s in symmetries {
        if s.slots.len() < 2 {
            return err(format!("{:?} needs at least two slots", s.slots));
        }
        for (i, &p) in s.slots.iter().enumerate() {
            if p >= sig.len() {
                return err(format!("slot {p} out of range"));
            }
            if s.slots[..i].contains(&p) {
                return err(format!("slot {p} repeated"));
            }
            if used[p] {
                return err(format!("slot {p} appears in two symmetries"));
            }
            used[p] = true;
            if sig[p] != sig[s.slots[0]] {
                return err(format!("slots {:?} differ in variance", s.slots));
            }
        }
    }
    Ok(())
}

/// Representative of the orbit of `index` (entries sorted within each
/// symmetry) and whether the value flips sign. `None` when an antisymmetry
/// forces the entry to vanish.
fn orbit_rep(index: &[usize], symmetries: &[Symmetry]) -> Option<(Vec<usize>, bool)> {
    let mut rep = index.to_vec();
    let mut negate = false;
    for s in symmetries {
        let mut vals: Vec<usize> = s.slots.iter().map(|&p| index[p]).collect();
        if s.kind == SymmetryKind::Antisymmetric {
            let inversions =
                (0..vals.len()).flat_map(|a| (a + 1..vals.len()).map(move |b| (a, b))).filter(|&(a, b)| vals[a] > vals[b]).count();
            negate ^= inversions % 2 == 1;
        }
        vals.sort_unstable();
        if s.kind == SymmetryKind::Antisymmetric && vals.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        for (&p, v) in s.slots.iter().zip(vals) {
            rep[p] = v;
        }
    }
    Some((rep, negate))
}

#[derive(Clone, Copy, Debug)]
struct Shape {
    dim: usize,
    rank: usize,
}

impl Shape {
    fn new(dim: usize, rank: usize) -> Self {
        Shape { dim, rank }
    }

    fn len(&self) -> usize {
        self.dim.pow(self.rank as u32)
    }

    fn flatten(&self, index: &[usize]) -> usize {
        index.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    fn unflatten(&self, mut f: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank];
        for slot in (0..self.rank).rev() {
            idx[slot] = f % self.dim;
            f /= self.dim;
        }
        idx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use finsler_symbolic::Var;

    fn y(i: usize) -> Expr {
        Expr::var(Var::Fiber(i))
    }

    #[test]
    fn orbit_representatives_are_sorted() {
        let sym = [Symmetry::antisymmetric(&[1, 2])];
        assert_eq!(orbit_rep(&[0, 2, 1], &sym), Some((vec![0, 1, 2], true)));
        assert_eq!(orbit_rep(&[0, 1, 1], &sym), None);
        let sym = [Symmetry::symmetric(&[0, 1, 2])];
        assert_eq!(orbit_rep(&[2, 0, 1], &sym), Some((vec![0, 1, 2], false)));
    }

    #[test]
    fn define_propagates_and_checks() {
        let down = [Variance::Down, Variance::Down];
        let t = Tensor::define("yy", 3, &down, vec![Symmetry::symmetric(&[0, 1])], |i| Ok(y(i[0]).mul(&y(i[1])))).unwrap();
        assert_eq!(t.get(&[2, 0]), &y(0).mul(&y(2)));
        let bad = Tensor::define("bad", 3, &down, vec![Symmetry::antisymmetric(&[0, 1])], |i| Ok(y(i[0]).mul(&y(i[1]))));
        assert!(matches!(bad, Err(GeometryError::SymmetryViolation { .. })));
    }

    #[test]
    fn rejects_mixed_variance_symmetry() {
        let sig = [Variance::Up, Variance::Down];
        let r = Tensor::define("t", 2, &sig, vec![Symmetry::symmetric(&[0, 1])], |_| Ok(Expr::one()));
        assert!(matches!(r, Err(GeometryError::InvalidSymmetry { .. })));
    }
}
