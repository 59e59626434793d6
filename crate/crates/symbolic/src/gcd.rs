//! Multivariate polynomial gcd over the integers and square-free decomposition.
//!
//! The gcd strips monomial factors and eliminates variables that occur in only
//! one operand through contents. It then tries the heuristic gcd (evaluate one
//! variable at a large integer, recurse, reconstruct ξ-adically, confirm by
//! division) and falls back to a primitive remainder sequence in one main
//! variable with coefficients in the remaining ones.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Mono, Poly, VarId};

/// Greatest common divisor with positive leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone().with_positive_lc();
    }
    if b.is_zero() {
        return a.clone().with_positive_lc();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::constant(a.content().gcd(&b.content()));
    }
    if a == b {
        return a.clone().with_positive_lc();
    }
    let ma = a.mono_content();
    let mb = b.mono_content();
    let m = ma.gcd(&mb);
    let a1 = a.div_mono(&ma);
    let b1 = b.div_mono(&mb);
    gcd_without_monomials(&a1, &b1).mul_mono(&m).with_positive_lc()
}

fn gcd_without_monomials(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::constant(a.content().gcd(&b.content()));
    }
    if a == b || a == &b.neg() {
        return a.clone().with_positive_lc();
    }
    let va = a.vars();
    let vb = b.vars();
    if coprime_images(a, b, &va, &vb) {
        return Poly::constant(a.content().gcd(&b.content()));
    }
    if let Some(&v) = va.iter().find(|v| vb.binary_search(v).is_err()) {
        return gcd(&content_in(a, v), b);
    }
    if let Some(&v) = vb.iter().find(|v| va.binary_search(v).is_err()) {
        return gcd(a, &content_in(b, v));
    }
    // cheap divisibility checks catch the common case of one operand dividing the other
    if a.len() <= b.len() {
        if b.div_exact(a).is_some() {
            return a.clone().with_positive_lc();
        }
    } else if a.div_exact(b).is_some() {
        return b.clone().with_positive_lc();
    }
    match heuristic_gcd(a, b) {
        Some(h) => h.with_positive_lc(),
        None => prs_gcd(a, b),
    }
}

/// Gcd through a primitive remainder sequence in the variable of lowest degree.
fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    let v = *a
        .vars()
        .iter()
        .min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant polynomial has variables");
    let ca = a.coeffs_in(v);
    let cb = b.coeffs_in(v);
    let conta = content_of(&ca);
    let contb = content_of(&cb);
    let c = gcd(&conta, &contb);
    let ppa: Vec<Poly> = ca.iter().map(|x| divide(x, &conta)).collect();
    let ppb: Vec<Poly> = cb.iter().map(|x| divide(x, &contb)).collect();
    let g = primitive_prs(ppa, ppb);
    Poly::from_coeffs_in(v, &g).mul(&c)
}

/// Mersenne prime 2^61 - 1.
const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

fn to_mod(c: &BigInt) -> u64 {
    let r = c.mod_floor(&BigInt::from(P));
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

/// Image of `p` in `F_P[v]` with every other variable replaced by `point(var)`,
/// low degree first.
fn univariate_image(p: &Poly, v: VarId, point: impl Fn(VarId) -> u64) -> Vec<u64> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = to_mod(c);
        let mut e_v = 0;
        for &(w, e) in m.factors() {
            if w == v {
                e_v = e as usize;
            } else {
                t = mul_mod(t, pow_mod(point(w), e as u64));
            }
        }
        out[e_v] = (out[e_v] + t) % P;
    }
    out
}

fn trim_mod(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd of two nonzero polynomials over `F_P`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let inv = pow_mod(*b.last().expect("nonempty"), P - 2);
        while a.len() >= b.len() {
            let q = mul_mod(*a.last().expect("nonempty"), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + P - mul_mod(q, bc)) % P;
            }
            trim_mod(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Fixed pseudo-random evaluation point per variable (splitmix64).
fn point_for(v: VarId) -> u64 {
    let mut z = (v as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31)) % P
}

/// True when `a` and `b` provably share no non-constant factor.
///
/// A common factor `h` that involves `v` keeps its degree in `v` under any
/// evaluation that preserves the degrees of `a` and `b` in `v`, so coprime
/// univariate images in every shared variable rule it out. `false` means
/// "unknown", never "not coprime".
fn coprime_images(a: &Poly, b: &Poly, va: &[VarId], vb: &[VarId]) -> bool {
    for &v in va.iter().filter(|v| vb.binary_search(v).is_ok()) {
        let ia = univariate_image(a, v, point_for);
        let ib = univariate_image(b, v, point_for);
        if ia.last() == Some(&0) || ib.last() == Some(&0) {
            return false;
        }
        if gcd_degree_mod(ia, ib) > 0 {
            return false;
        }
    }
    true
}

const HEURISTIC_ATTEMPTS: usize = 6;

fn max_norm(p: &Poly) -> BigInt {
    p.terms().iter().map(|(_, c)| c.abs()).max().unwrap_or_else(BigInt::zero)
}

/// `p` with `v` replaced by the integer `xi`.
fn eval_var(p: &Poly, v: VarId, xi: &BigInt) -> Poly {
    Poly::from_terms(p.terms().iter().map(|(m, c)| {
        let (e, rest) = m.split(v);
        (rest, c * num_traits::pow(xi.clone(), e as usize))
    }))
}

/// Inverse of [`eval_var`] for polynomials whose coefficients are small
/// relative to `xi`: reads the ξ-adic digits with symmetric remainders.
fn interpolate(p: &Poly, v: VarId, xi: &BigInt) -> Poly {
    let half = xi / 2;
    let mut terms = Vec::new();
    let mut rest = p.clone();
    let mut e = 0u32;
    while !rest.is_zero() {
        let digit = Poly::from_terms(rest.terms().iter().map(|(m, c)| {
            let r = c.mod_floor(xi);
            (m.clone(), if r > half { r - xi } else { r })
        }));
        let vm = crate::poly::Mono::var(v, e);
        terms.extend(digit.terms().iter().map(|(m, c)| (m.mul(&vm), c.clone())));
        rest = rest.sub(&digit).div_int(xi);
        e += 1;
    }
    Poly::from_terms(terms)
}

fn primitive_int(p: Poly) -> Poly {
    let c = p.content();
    p.div_int(&c)
}

/// Heuristic gcd of two non-constant polynomials; `None` when every
/// evaluation point fails, which leaves the decision to the remainder sequence.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let ga = a.content();
    let gb = b.content();
    let gc = ga.gcd(&gb);
    let f = a.div_int(&gc);
    let g = b.div_int(&gc);
    let v = *f.vars().first()?;
    let (fnorm, gnorm) = (max_norm(&f), max_norm(&g));
    let bound: BigInt = 2 * fnorm.clone().min(gnorm.clone()) + 29u32;
    let lc_ratio = (&fnorm / f.lc().abs()).min(&gnorm / g.lc().abs());
    let mut xi = bound.clone().min(99 * bound.sqrt()).max(2 * lc_ratio + 2u32);
    let accept = |h: Poly| {
        let h = primitive_int(h);
        (f.div_exact(&h).is_some() && g.div_exact(&h).is_some()).then(|| h.scale(&gc))
    };
    for _ in 0..HEURISTIC_ATTEMPTS {
        let ff = eval_var(&f, v, &xi);
        let gg = eval_var(&g, v, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            let h = gcd(&ff, &gg);
            if let Some(r) = accept(interpolate(&h, v, &xi)) {
                return Some(r);
            }
            // the cofactors may reconstruct when the gcd itself does not
            for (own, other, image) in [(&f, &g, &ff), (&g, &f, &gg)] {
                let cof = interpolate(&divide(image, &h), v, &xi);
                if let Some(h) = own.div_exact(&cof) {
                    if other.div_exact(&h).is_some() {
                        return Some(primitive_int(h).scale(&gc));
                    }
                }
            }
        }
        xi = &xi * 73794u32 * xi.sqrt().sqrt() / 27011u32;
    }
    None
}

fn divide(a: &Poly, b: &Poly) -> Poly {
    a.div_exact(b).expect("exact division by a known divisor")
}

/// Gcd of the coefficients of `p` seen as a polynomial in `v`.
pub fn content_in(p: &Poly, v: VarId) -> Poly {
    content_of(&p.coeffs_in(v))
}

/// Gcd of a list of polynomials (zero entries ignored).
pub fn content_of(polys: &[Poly]) -> Poly {
    let mut nonzero: Vec<&Poly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Poly::zero();
    }
    nonzero.sort_by_key(|p| p.len());
    let mut g = nonzero[0].clone().with_positive_lc();
    for p in &nonzero[1..] {
        if g.is_one() {
            break;
        }
        if g.is_constant() {
            let k = nonzero
                .iter()
                .fold(BigInt::zero(), |acc, q| acc.gcd(&q.content()));
            return Poly::constant(k);
        }
        if p.div_exact(&g).is_some() {
            continue;
        }
        g = gcd(&g, p);
    }
    g
}

fn upoly_trim(p: &mut Vec<Poly>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn primitive_part(p: &[Poly]) -> Vec<Poly> {
    let c = content_of(p);
    if c.is_one() {
        return p.to_vec();
    }
    let c = if p.last().is_some_and(|l| l.lc() < BigInt::zero()) { c.neg() } else { c };
    p.iter().map(|x| divide(x, &c)).collect()
}

/// Pseudo-remainder of `a` by `b` (both dense in the main variable, low degree first).
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    upoly_trim(&mut r);
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&lr.mul(bc));
        }
        debug_assert!(r[dr].is_zero());
        upoly_trim(&mut r);
    }
    r
}

fn primitive_prs(a: Vec<Poly>, b: Vec<Poly>) -> Vec<Poly> {
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    loop {
        if b.len() == 1 {
            return vec![Poly::one()];
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return primitive_part(&b);
        }
        if r.len() == 1 {
            return vec![Poly::one()];
        }
        a = b;
        b = primitive_part(&r);
    }
}

/// `gcd(num, den)` from the square-free decomposition `parts` of `den`.
///
/// For pairwise coprime square-free `s` with multiplicity `k`, the gcd with
/// `s^k` is `t_1 t_2 ... t_k` where `t_j = gcd(num / (t_1 ... t_{j-1}), t_{j-1})`
/// and `t_0 = s`. Each step works against the small factor rather than the
/// full denominator, and exact division often settles it without a gcd.
pub fn gcd_by_parts(num: &Poly, den: &Poly, parts: &[(Poly, u32)]) -> Poly {
    let mut g = Poly::constant(num.content().gcd(&den.content()));
    let mut rest = num.clone();
    for (s, k) in parts {
        let mut t = primitive_int(s.clone()).with_positive_lc();
        for _ in 0..*k {
            if let Some(q) = rest.div_exact(&t) {
                rest = q;
            } else {
                t = gcd(&rest, &t);
                if t.is_constant() {
                    break;
                }
                rest = divide(&rest, &t);
            }
            g = g.mul(&t);
        }
    }
    g
}

/// Square-free decomposition: returns `(factor, multiplicity)` pairs whose
/// product (with multiplicities) equals `p` up to an integer constant.
pub fn squarefree(p: &Poly) -> Vec<(Poly, u32)> {
    let mut out: Vec<(Poly, u32)> = Vec::new();
    collect_squarefree(p, &mut out);
    // merge factors of equal multiplicity
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (f, m) in out {
        if let Some(entry) = merged.iter_mut().find(|(_, k)| *k == m) {
            entry.0 = entry.0.mul(&f);
        } else {
            merged.push((f, m));
        }
    }
    merged.sort_by_key(|(_, m)| *m);
    merged
}

const SQUAREFREE_CACHE_LIMIT: usize = 1 << 12;

thread_local! {
    static SQUAREFREE_CACHE: RefCell<HashMap<Poly, Arc<Vec<(Poly, u32)>>>> =
        RefCell::new(HashMap::new());
}

/// [`squarefree`] memoized per thread. Tensor sums and display meet the same
/// few denominators over and over.
pub fn squarefree_cached(p: &Poly) -> Arc<Vec<(Poly, u32)>> {
    if let Some(parts) = SQUAREFREE_CACHE.with(|c| c.borrow().get(p).cloned()) {
        return parts;
    }
    let parts = Arc::new(squarefree(p));
    SQUAREFREE_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= SQUAREFREE_CACHE_LIMIT {
            c.clear();
        }
        c.insert(p.clone(), parts.clone());
    });
    parts
}

fn collect_squarefree(p: &Poly, out: &mut Vec<(Poly, u32)>) {
    if p.is_constant() {
        return;
    }
    let m = p.mono_content();
    for &(v, e) in m.factors() {
        out.push((Poly::var(v), e));
    }
    let p = p.div_mono(&m);
    if p.is_constant() {
        return;
    }
    if let Some((q, k)) = perfect_power(&p) {
        let start = out.len();
        collect_squarefree(&q, out);
        for entry in &mut out[start..] {
            entry.1 *= k;
        }
        return;
    }
    let v = p.vars()[0];
    let cont = content_in(&p, v);
    let pp = divide(&p, &cont);
    yun(&pp, v, out);
    collect_squarefree(&cont, out);
}

/// `(q, k)` with `p = c·q^k` for the largest `k > 1`, if any. Denominators
/// are mostly powers of one polynomial, where Yun's gcds are needlessly slow.
fn perfect_power(p: &Poly) -> Option<(Poly, u32)> {
    let mut g = p.total_degree();
    for v in p.vars() {
        g = g.gcd(&p.degree_in(v));
    }
    let p = primitive_int(p.clone()).with_positive_lc();
    (2..=g).rev().filter(|k| g % k == 0).find_map(|k| poly_root(&p, k).map(|q| (q, k)))
}

/// Exact `k`-th root of a primitive polynomial, built term by term: the
/// leading term of `p - q^k` is `k·lt(q)^(k-1)` times the next term of `q`.
fn poly_root(p: &Poly, k: u32) -> Option<Poly> {
    let (lm, lc) = p.leading()?;
    let c = lc.nth_root(k);
    if c.pow(k) != *lc {
        return None;
    }
    let mut q = Poly::monomial(mono_root(lm, k)?, c);
    let (head_m, head_c) = q.leading()?.clone();
    let step_m = Mono::from_pairs(head_m.factors().iter().map(|&(v, e)| (v, e * (k - 1))).collect());
    let step_c = head_c.pow(k - 1) * k;
    for _ in 0..p.len() {
        let r = p.sub(&q.pow(k));
        let Some((rm, rc)) = r.leading() else {
            return Some(q);
        };
        let m = rm.div(&step_m)?;
        let (c, rem) = rc.div_rem(&step_c);
        let last = q.terms().last().map(|(m, _)| m)?;
        if !rem.is_zero() || m >= *last {
            return None;
        }
        q = q.add(&Poly::monomial(m, c));
    }
    None
}

fn mono_root(m: &Mono, k: u32) -> Option<Mono> {
    m.factors().iter().all(|&(_, e)| e % k == 0).then(|| Mono::from_pairs(m.factors().iter().map(|&(v, e)| (v, e / k)).collect()))
}

fn yun(f: &Poly, v: VarId, out: &mut Vec<(Poly, u32)>) {
    let df = f.derivative(v);
    let a0 = gcd(f, &df);
    let mut b = divide(f, &a0);
    let mut c = divide(&df, &a0);
    let mut d = c.sub(&b.derivative(v));
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = divide(&b, &a);
        c = divide(&d, &a);
        d = c.sub(&b.derivative(v));
        i += 1;
    }
}

/// Largest `s` with `s^k` dividing `n > 0`, found by trial division; returns `(s, n / s^k)`.
pub fn extract_int_power(n: &BigInt, k: u32) -> (BigInt, BigInt) {
    if n.is_zero() || k <= 1 {
        return (BigInt::one(), n.clone());
    }
    let mut scan = n.clone();
    let mut outer = BigInt::one();
    let mut inner = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while &p * &p <= scan && p < limit {
        let mut count = 0u32;
        while (&scan % &p).is_zero() {
            scan /= &p;
            count += 1;
        }
        outer *= num_traits::pow(p.clone(), (count / k) as usize);
        inner *= num_traits::pow(p.clone(), (count % k) as usize);
        p += 1u32;
    }
    // what is left may still be a perfect power of a large prime
    let r = scan.nth_root(k);
    if scan > BigInt::one() && num_traits::pow(r.clone(), k as usize) == scan {
        outer *= r;
    } else {
        inner *= scan;
    }
    (outer, inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: u32) -> Poly {
        Poly::var(v)
    }

    fn int(c: i64) -> Poly {
        Poly::constant(BigInt::from(c))
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let (x, y, z) = (var(0), var(1), var(2));
        let f = x.mul(&y).add(&z.mul(&z)).add(&int(3));
        let a = f.mul(&x.add(&y));
        let b = f.mul(&x.sub(&z)).mul(&int(6));
        assert_eq!(gcd(&a, &b), f.clone().with_positive_lc());
        let c = f.mul(&f).mul(&y);
        let d = f.mul(&y).mul(&y).scale(&BigInt::from(-4));
        assert_eq!(gcd(&c, &d), f.mul(&y).with_positive_lc());
    }

    fn random_poly(rng: &mut rand_chacha::ChaCha8Rng, vars: u32, terms: usize) -> Poly {
        use rand::Rng;
        Poly::from_terms((0..terms).map(|_| {
            let m = crate::poly::Mono::from_pairs((0..vars).map(|v| (v, rng.gen_range(0..3))).filter(|&(_, e)| e > 0).collect());
            (m, BigInt::from(rng.gen_range(-9i64..=9)))
        }))
    }

    #[test]
    fn heuristic_and_remainder_sequence_agree() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let c = random_poly(&mut rng, 3, 3);
            let a = random_poly(&mut rng, 3, 4).mul(&c);
            let b = random_poly(&mut rng, 3, 4).mul(&c);
            if a.is_constant() || b.is_constant() {
                continue;
            }
            let expected = prs_gcd(&a, &b).with_positive_lc();
            assert_eq!(gcd(&a, &b), expected, "{a:?} / {b:?}");
            if let Some(h) = heuristic_gcd(&a, &b) {
                assert_eq!(h.with_positive_lc(), expected);
            }
        }
    }

    #[test]
    fn coprime_images_never_claim_a_shared_factor_away() {
        let (x, y, z) = (var(0), var(1), var(2));
        let f = x.mul(&y).add(&z).add(&int(2));
        let a = f.mul(&x.add(&int(1)));
        let b = f.mul(&y.sub(&z));
        assert!(!coprime_images(&a, &b, &a.vars(), &b.vars()));
        let c = x.mul(&x).add(&y);
        let d = y.mul(&y).add(&z);
        assert!(coprime_images(&c, &d, &c.vars(), &d.vars()));
    }

    #[test]
    fn perfect_powers_are_recognised_exactly() {
        let (x, y, z) = (var(0), var(1), var(2));
        let q = x.mul(&x).scale(&BigInt::from(3)).add(&x.mul(&y)).sub(&z.mul(&z).scale(&BigInt::from(4))).add(&int(2));
        let (root, k) = perfect_power(&q.pow(6).scale(&BigInt::from(-5))).unwrap();
        assert_eq!((root, k), (q.clone(), 6));
        assert!(perfect_power(&q.pow(2).mul(&x.add(&y))).is_none());
        assert!(perfect_power(&q.pow(3).add(&int(1))).is_none());
        assert_eq!(squarefree(&q.pow(4).mul(&x.add(&int(1)).pow(2))), vec![(x.add(&int(1)), 2), (q, 4)]);
    }

    #[test]
    fn gcd_by_parts_matches_plain_gcd() {
        let (x, y) = (var(0), var(1));
        let s = x.add(&y);
        let t = x.mul(&y).add(&int(3));
        let den = s.pow(3).mul(&t).mul(&x.pow(2)).scale(&BigInt::from(6));
        let num = s.pow(2).mul(&x).mul(&y.add(&int(5))).scale(&BigInt::from(4));
        let parts = squarefree(&den);
        assert_eq!(gcd_by_parts(&num, &den, &parts).with_positive_lc(), gcd(&num, &den));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let (x, y) = (var(0), var(1));
        let a = x.mul(&x).add(&y);
        let b = y.mul(&y).add(&x);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_keeps_integer_content() {
        let x = var(0);
        let a = x.scale(&BigInt::from(4)).add(&int(6));
        let b = x.scale(&BigInt::from(6)).add(&int(9));
        assert_eq!(gcd(&a, &b), x.scale(&BigInt::from(2)).add(&int(3)));
    }

    #[test]
    fn squarefree_splits_multiplicities() {
        let (x, y) = (var(0), var(1));
        let f = x.add(&y);
        let g = x.mul(&y).add(&int(1));
        let p = f.pow(2).mul(&g).mul(&y.pow(3)).scale(&BigInt::from(5));
        let parts = squarefree(&p);
        let find = |m: u32| parts.iter().find(|(_, k)| *k == m).map(|(f, _)| f.clone().with_positive_lc());
        assert_eq!(find(1), Some(g.with_positive_lc()));
        assert_eq!(find(2), Some(f.with_positive_lc()));
        assert_eq!(find(3), Some(y));
        let _ = Mono::one();
    }

    #[test]
    fn integer_power_extraction() {
        let (s, r) = extract_int_power(&BigInt::from(72), 2);
        assert_eq!((s, r), (BigInt::from(6), BigInt::from(2)));
        let (s, r) = extract_int_power(&BigInt::from(54), 3);
        assert_eq!((s, r), (BigInt::from(3), BigInt::from(2)));
        let (s, r) = extract_int_power(&(BigInt::from(1_000_003) * BigInt::from(1_000_003)), 2);
        assert_eq!((s, r), (BigInt::from(1_000_003), BigInt::one()));
    }
}
