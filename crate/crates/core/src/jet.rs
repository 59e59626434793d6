//! Truncated multivariate Taylor series ("jets") in double precision.
//!
//! A jet of order `K` holds every Taylor coefficient of total degree `≤ K`
//! around a point. Arithmetic on jets is forward-mode differentiation of all
//! orders at once: derivatives read off a jet are exact up to rounding, with
//! no finite-difference truncation. Differentiating a jet lowers its order by
//! one, so each jet tracks how many orders remain valid.

use std::collections::HashMap;
use std::sync::Arc;

/// Monomial layout for jets in `nvars` variables up to total degree `order`.
#[derive(Debug)]
pub struct JetSpace {
    nvars: usize,
    order: usize,
    exps: Vec<Vec<u8>>,
    degree: Vec<usize>,
    /// `(a, b, c)` with `mono[a] * mono[b] = mono[c]`, sorted by degree of `c`.
    products: Vec<(u32, u32, u32)>,
    /// `products[..product_end[d]]` are the entries with result degree `≤ d`.
    product_end: Vec<usize>,
    /// `shift[v][c]`: index of `mono[c] * x_v`, if within the order.
    shift: Vec<Vec<Option<usize>>>,
    /// Monomials with degree `≤ d` occupy `[0, mono_end[d])`.
    mono_end: Vec<usize>,
}

impl JetSpace {
    pub fn new(nvars: usize, order: usize) -> Arc<JetSpace> {
        let mut exps: Vec<Vec<u8>> = Vec::new();
        let mut mono_end = Vec::with_capacity(order + 1);
        for d in 0..=order {
            let mut current = vec![0u8; nvars];
            push_degree(&mut exps, &mut current, 0, d);
            mono_end.push(exps.len());
        }
        let index: HashMap<Vec<u8>, usize> = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let degree: Vec<usize> = exps.iter().map(|e| e.iter().map(|&x| x as usize).sum()).collect();
        let mut products = Vec::new();
        let mut product_end = Vec::with_capacity(order + 1);
        for d in 0..=order {
            for c in if d == 0 { 0 } else { mono_end[d - 1] }..mono_end[d] {
                for a in 0..=c {
                    if degree[a] > degree[c] || exps[a].iter().zip(&exps[c]).any(|(x, y)| x > y) {
                        continue;
                    }
                    let rest: Vec<u8> = exps[c].iter().zip(&exps[a]).map(|(y, x)| y - x).collect();
                    products.push((a as u32, index[&rest] as u32, c as u32));
                }
            }
            product_end.push(products.len());
        }
        let shift = (0..nvars)
            .map(|v| {
                exps.iter()
                    .map(|e| {
                        let mut s = e.clone();
                        s[v] += 1;
                        index.get(&s).copied()
                    })
                    .collect()
            })
            .collect();
        Arc::new(JetSpace { nvars, order, exps, degree, products, product_end, shift, mono_end })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }
}

fn push_degree(out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, var: usize, remaining: usize) {
    if var + 1 == current.len() {
        current[var] = remaining as u8;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e as u8;
        push_degree(out, current, var + 1, remaining - e);
    }
    current[var] = 0;
}

#[derive(Clone, Debug)]
pub struct Jet {
    space: Arc<JetSpace>,
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, c: f64) -> Jet {
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = c;
        Jet { space: space.clone(), order: space.order, coeffs }
    }

    /// The variable `v` expanded around `value`.
    pub fn variable(space: &Arc<JetSpace>, v: usize, value: f64) -> Jet {
        let mut j = Jet::constant(space, value);
        if let Some(i) = space.shift[v][0] {
            j.coeffs[i] = 1.0;
        }
        j
    }

    pub fn zero(space: &Arc<JetSpace>) -> Jet {
        Jet::constant(space, 0.0)
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Number of derivative orders still exact.
    pub fn order(&self) -> usize {
        self.order
    }

    fn live(&self) -> usize {
        self.space.mono_end[self.order]
    }

    fn truncated(mut self, order: usize) -> Jet {
        let end = self.space.mono_end[order];
        self.coeffs[end..].iter_mut().for_each(|c| *c = 0.0);
        self.order = order;
        self
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let order = self.order.min(other.order);
        let mut coeffs = self.coeffs.clone();
        coeffs.iter_mut().zip(&other.coeffs).for_each(|(a, b)| *a += b);
        Jet { space: self.space.clone(), order, coeffs }.truncated(order)
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|a| a * c).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let order = self.order.min(other.order);
        let mut coeffs = vec![0.0; self.space.len()];
        for &(a, b, c) in &self.space.products[..self.space.product_end[order]] {
            coeffs[c as usize] += self.coeffs[a as usize] * other.coeffs[b as usize];
        }
        Jet { space: self.space.clone(), order, coeffs }
    }

    /// `Σ c_k h^k` where `h` is the non-constant part of `self`.
    fn compose_series(&self, series: &[f64]) -> Jet {
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut acc = Jet::constant(&self.space, series[0]).truncated(self.order);
        let mut power = Jet::constant(&self.space, 1.0).truncated(self.order);
        for &c in &series[1..] {
            power = power.mul(&h);
            acc = acc.add(&power.scale(c));
        }
        acc
    }

    /// `self^(p/q)`; for odd `q` negative values follow the real branch.
    pub fn pow_rational(&self, p: i64, q: u32) -> Option<Jet> {
        let a = self.value();
        if a == 0.0 || (a < 0.0 && q % 2 == 0) {
            return None;
        }
        let r = p as f64 / q as f64;
        let lead = if a < 0.0 && p % 2 != 0 { -a.abs().powf(r) } else { a.abs().powf(r) };
        let mut series = Vec::with_capacity(self.order + 1);
        let mut binom = 1.0;
        for k in 0..=self.order {
            series.push(lead * binom / a.powi(k as i32));
            binom *= (r - k as f64) / (k as f64 + 1.0);
        }
        Some(self.compose_series(&series))
    }

    pub fn powi(&self, p: i64) -> Option<Jet> {
        if p >= 0 {
            let mut acc = Jet::constant(&self.space, 1.0).truncated(self.order);
            for _ in 0..p {
                acc = acc.mul(self);
            }
            Some(acc)
        } else {
            self.recip()?.powi(-p)
        }
    }

    pub fn recip(&self) -> Option<Jet> {
        self.pow_rational(-1, 1)
    }

    pub fn div(&self, other: &Jet) -> Option<Jet> {
        Some(self.mul(&other.recip()?))
    }

    /// Partial derivative in variable `v`; one order is lost.
    pub fn diff(&self, v: usize) -> Jet {
        assert!(self.order > 0, "jet has no derivative orders left");
        let mut coeffs = vec![0.0; self.space.len()];
        let order = self.order - 1;
        for (i, c) in coeffs.iter_mut().enumerate().take(self.space.mono_end[order]) {
            if let Some(s) = self.space.shift[v][i] {
                *c = self.coeffs[s] * (self.space.exps[i][v] as f64 + 1.0);
            }
        }
        Jet { space: self.space.clone(), order, coeffs }
    }

    /// Coefficient of the monomial with the given exponents, if stored.
    pub fn coefficient(&self, exps: &[u8]) -> f64 {
        self.space.exps[..self.live()].iter().position(|e| e == exps).map_or(0.0, |i| self.coeffs[i])
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.space.degree[i]
    }
}
