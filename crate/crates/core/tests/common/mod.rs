//! Shared fixtures: the reference structures, the printed component tables
//! with their triage, and the coincidences between the four connections.
#![allow(dead_code)]

pub mod checks;
pub mod riemann;

use std::collections::HashMap;

use finsler_core::oracle::{numeric_object, verify, NumericTable, VerifyOptions};
use finsler_core::{ConnectionKind, CurvatureKind, FinslerStructure, Geometry, ObjectId, Tensor};
use finsler_symbolic::{eval_at, parse, Coordinates, Expr, NumericPoint};

pub const REFERENCE_F2: &str = "x3*y1^3/y2+y3^2";
pub const CUBIC_F: &str = "(x1*y2^3+y1^2*y3)^(1/3)";
pub const BERWALD_F2: &str = "x1*y4*sqrt(y1^2+y2^2+y3^2)";

/// `F² = x3·y1³/y2 + y3²` in dimension 3.
pub fn reference() -> FinslerStructure {
    FinslerStructure::new(Coordinates::standard(3), REFERENCE_F2)
        .unwrap()
        .with_constraint_text("x3>0,y1>0,y2>0")
        .unwrap()
}

/// `F = (x1·y2³ + y1²·y3)^(1/3)` in dimension 3.
pub fn cubic() -> FinslerStructure {
    FinslerStructure::from_f(Coordinates::standard(3), CUBIC_F)
        .unwrap()
        .with_constraint_text("x1>0,y1>0,y2>0,y3>0")
        .unwrap()
}

/// `F² = x1·y4·sqrt(y1²+y2²+y3²)` in dimension 4, a Berwald space.
pub fn berwald_example() -> FinslerStructure {
    FinslerStructure::new(Coordinates::standard(4), BERWALD_F2).unwrap().with_constraint_text("x1>0,y4>0").unwrap()
}

pub fn idx(digits: &str) -> Vec<usize> {
    digits.chars().map(|c| c.to_digit(10).expect("digit") as usize - 1).collect()
}

pub struct Entry {
    pub index: Vec<usize>,
    pub printed: Expr,
}

pub struct Table {
    pub object: ObjectId,
    /// Printed as identically zero.
    pub zero: bool,
    pub entries: Vec<Entry>,
}

impl Table {
    pub fn printed(&self, index: &[usize]) -> Option<&Expr> {
        self.entries.iter().find(|e| e.index == index).map(|e| &e.printed)
    }
}

const REFERENCE_TABLES: &str = include_str!("../data/reference_tables.txt");

pub fn reference_tables() -> Vec<Table> {
    let coords = Coordinates::standard(3);
    let mut tables: Vec<Table> = Vec::new();
    for line in REFERENCE_TABLES.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut parts = line.splitn(3, ' ');
        let (name, second) = (parts.next().unwrap(), parts.next().unwrap());
        let object: ObjectId = name.parse().unwrap();
        if tables.last().map_or(true, |t| t.object != object) {
            tables.push(Table { object: object.clone(), zero: false, entries: Vec::new() });
        }
        let table = tables.last_mut().unwrap();
        if second == "zero" {
            table.zero = true;
        } else {
            let printed = parse(parts.next().unwrap(), &coords).unwrap();
            table.entries.push(Entry { index: idx(second), printed });
        }
    }
    tables
}

/// Degree of positive homogeneity in `y` each object must have.
pub fn expected_y_degree(id: &ObjectId) -> i64 {
    match id {
        ObjectId::Cartan | ObjectId::CartanMixed => -1,
        ObjectId::Spray => 2,
        ObjectId::Barthel | ObjectId::RTorsion => 1,
        ObjectId::Curvature(CurvatureKind::Hv, _) => -1,
        ObjectId::Curvature(CurvatureKind::V, _) => -2,
        _ => 0,
    }
}

/// Homogeneity degree of `e` in `y`, read off `e(x, 2y) / e(x, y)`.
pub fn y_degree(e: &Expr, p: &NumericPoint) -> Option<i64> {
    let v1 = eval_at(e, p).ok()?;
    let scaled = NumericPoint { x: p.x.clone(), y: p.y.iter().map(|v| 2.0 * v).collect() };
    let v2 = eval_at(e, &scaled).ok()?;
    let ratio = v2 / v1;
    if v1 == 0.0 || ratio <= 0.0 {
        return None;
    }
    let d = ratio.log2();
    ((d - d.round()).abs() < 1e-9).then_some(d.round() as i64)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Suspicion {
    /// The printed value has the wrong homogeneity degree in `y`.
    Degree { printed: Option<i64>, expected: i64 },
    /// The printed Hashiguchi h-curvature contradicts `R* = R° + C·R`.
    HashiguchiIdentity,
    /// The printed value is the computed value at another index that differs
    /// in one label and is missing from the printed table, while the computed
    /// value at the printed index vanishes.
    MisplacedLabel(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Match,
    Suspect(Suspicion),
    Mismatch,
}

pub struct Outcome {
    pub object: ObjectId,
    pub index: Vec<usize>,
    pub computed: Expr,
    pub printed: Expr,
    pub verdict: Verdict,
}

fn c_times_r(geom: &Geometry) -> Tensor {
    let c = geom.tensor(&ObjectId::CartanMixed).unwrap();
    let rt = geom.tensor(&ObjectId::RTorsion).unwrap();
    c.contract_product(&rt, &[(2, 0)]).unwrap()
}

/// Compares every printed entry with the computed table and triages mismatches.
pub fn triage(geom: &Geometry, tables: &[Table]) -> Vec<Outcome> {
    let point = geom.structure().sampler().points(1, 7).unwrap().remove(0);
    let by_object: HashMap<&ObjectId, &Table> = tables.iter().map(|t| (&t.object, t)).collect();
    let cr = c_times_r(geom);
    let mut out = Vec::new();
    for table in tables {
        let t = geom.tensor(&table.object).unwrap();
        for entry in &table.entries {
            let computed = t.get(&entry.index).clone();
            let verdict = if computed.sub(&entry.printed).is_zero() {
                Verdict::Match
            } else {
                let expected = expected_y_degree(&table.object);
                let printed_degree = y_degree(&entry.printed, &point);
                if printed_degree != Some(expected) {
                    Verdict::Suspect(Suspicion::Degree { printed: printed_degree, expected })
                } else if table.object == ObjectId::Curvature(CurvatureKind::H, ConnectionKind::Hashiguchi)
                    && hashiguchi_conflict(&by_object, &cr, entry)
                {
                    Verdict::Suspect(Suspicion::HashiguchiIdentity)
                } else if let Some(alt) = misplaced_label(&t, table, entry) {
                    Verdict::Suspect(Suspicion::MisplacedLabel(alt))
                } else {
                    Verdict::Mismatch
                }
            };
            out.push(Outcome { object: table.object.clone(), index: entry.index.clone(), computed, printed: entry.printed.clone(), verdict });
        }
    }
    out
}

fn hashiguchi_conflict(tables: &HashMap<&ObjectId, &Table>, cr: &Tensor, entry: &Entry) -> bool {
    let berwald = ObjectId::Curvature(CurvatureKind::H, ConnectionKind::Berwald);
    let rb = tables.get(&berwald).and_then(|t| t.printed(&entry.index)).cloned().unwrap_or_else(Expr::zero);
    !rb.add(cr.get(&entry.index)).sub(&entry.printed).is_zero()
}

fn misplaced_label(t: &Tensor, table: &Table, entry: &Entry) -> Option<Vec<usize>> {
    if !t.get(&entry.index).is_zero() {
        return None;
    }
    for pos in 0..entry.index.len() {
        for v in (0..t.dim()).filter(|&v| v != entry.index[pos]) {
            let mut alt = entry.index.clone();
            alt[pos] = v;
            if table.printed(&alt).is_none() && t.get(&alt).sub(&entry.printed).is_zero() {
                return Some(alt);
            }
        }
    }
    None
}

/// Whether the oracle confirms the computed component at `index`.
pub fn oracle_confirms(geom: &Geometry, id: &ObjectId, index: &[usize]) -> bool {
    let report = verify(geom, id, &VerifyOptions::default()).unwrap();
    report.components.iter().any(|c| c.index == index && c.pass)
}

#[derive(Clone, Debug)]
pub enum Term {
    Object(ObjectId),
    /// `C^i_hm R^m_jk`
    CTimesR,
    /// `G^i_jk - Γ^i_jk`: the hv-torsion of the Chern connection.
    ChernPTorsion,
}

pub struct Coincidence {
    pub name: &'static str,
    pub lhs: Term,
    pub rhs: Vec<Term>,
}

fn curv(which: CurvatureKind, kind: ConnectionKind) -> Term {
    Term::Object(ObjectId::Curvature(which, kind))
}

pub fn coincidences() -> Vec<Coincidence> {
    use ConnectionKind::*;
    use CurvatureKind::*;
    vec![
        Coincidence { name: "chern hv-torsion = cartan hv-torsion", lhs: Term::ChernPTorsion, rhs: vec![Term::Object(ObjectId::PTorsion)] },
        Coincidence { name: "hashiguchi v-curvature = cartan v-curvature", lhs: curv(V, Hashiguchi), rhs: vec![curv(V, Cartan)] },
        Coincidence { name: "cartan h-curvature = chern h-curvature + C.R", lhs: curv(H, Cartan), rhs: vec![curv(H, Chern), Term::CTimesR] },
        Coincidence {
            name: "hashiguchi h-curvature = berwald h-curvature + C.R",
            lhs: curv(H, Hashiguchi),
            rhs: vec![curv(H, Berwald), Term::CTimesR],
        },
    ]
}

fn symbolic_term(geom: &Geometry, term: &Term) -> Tensor {
    match term {
        Term::Object(id) => (*geom.tensor(id).unwrap()).clone(),
        Term::CTimesR => c_times_r(geom),
        Term::ChernPTorsion => (*geom.p_torsion(ConnectionKind::Chern).unwrap()).clone(),
    }
}

/// `lhs - Σ rhs` computed symbolically.
pub fn symbolic_residual(geom: &Geometry, c: &Coincidence) -> Tensor {
    c.rhs.iter().fold(symbolic_term(geom, &c.lhs), |acc, t| acc.sub(&symbolic_term(geom, t)).unwrap())
}

fn numeric_term(fs: &FinslerStructure, term: &Term, p: &NumericPoint) -> Vec<f64> {
    let table = |id: ObjectId| -> NumericTable { numeric_object(fs, &id, p).unwrap() };
    match term {
        Term::Object(id) => table(id.clone()).values,
        Term::ChernPTorsion => {
            let gb = table(ObjectId::Berwald);
            let gamma = table(ObjectId::CartanCoefficients);
            gb.values.iter().zip(&gamma.values).map(|(a, b)| a - b).collect()
        }
        Term::CTimesR => {
            let n = fs.dim();
            let c = table(ObjectId::CartanMixed);
            let r = table(ObjectId::RTorsion);
            let mut out = Vec::with_capacity(n.pow(4));
            for i in 0..n {
                for h in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            out.push((0..n).map(|m| c.get(&[i, h, m]) * r.get(&[m, j, k])).sum());
                        }
                    }
                }
            }
            out
        }
    }
}

/// Largest `|lhs - Σ rhs| / max(1, |lhs|)` over seeded oracle points.
pub fn numeric_residual(fs: &FinslerStructure, c: &Coincidence, points: usize, seed: u64) -> f64 {
    let mut worst: f64 = 0.0;
    for p in fs.sampler().points(points, seed).unwrap() {
        let lhs = numeric_term(fs, &c.lhs, &p);
        let mut res = lhs.clone();
        for t in &c.rhs {
            res.iter_mut().zip(numeric_term(fs, t, &p)).for_each(|(r, v)| *r -= v);
        }
        for (r, l) in res.iter().zip(&lhs) {
            worst = worst.max(r.abs() / l.abs().max(1.0));
        }
    }
    worst
}

/// Whether every coincidence holds canonically and numerically at 8 points.
pub fn coincidences_hold(geom: &Geometry) -> bool {
    coincidences().iter().all(|c| {
        symbolic_residual(geom, c).components().iter().all(Expr::is_zero)
            && numeric_residual(geom.structure(), c, 8, 42) <= 1e-9
    })
}

/// `Σ y_i² + x1·y1³/y2`: a Euclidean norm perturbed by a cubic rational term.
pub fn smoke_rational_f2(n: usize) -> String {
    let squares: Vec<String> = (1..=n).map(|i| format!("y{i}^2")).collect();
    format!("{} + x1*y1^3/y2", squares.join(" + "))
}

pub fn smoke_rational(n: usize) -> FinslerStructure {
    FinslerStructure::new(Coordinates::standard(n), &smoke_rational_f2(n))
        .unwrap()
        .with_constraint_text("x1>0,y1>0,y2>0")
        .unwrap()
}

pub fn euclidean(n: usize) -> FinslerStructure {
    let squares: Vec<String> = (1..=n).map(|i| format!("y{i}^2")).collect();
    FinslerStructure::new(Coordinates::standard(n), &squares.join(" + ")).unwrap()
}

/// `F² = y1² + x1²·y2²`, the metric `diag(1, x1²)` of the flat plane in polar form.
pub fn polar_surface() -> FinslerStructure {
    FinslerStructure::new(Coordinates::standard(2), "y1^2 + x1^2*y2^2").unwrap()
}

/// Structures the identity suite runs on.
pub fn test_structures() -> Vec<(&'static str, FinslerStructure)> {
    vec![
        ("reference", reference()),
        ("cubic", cubic()),
        ("berwald", berwald_example()),
        ("rational-2", smoke_rational(2)),
        ("rational-3", smoke_rational(3)),
        ("polar", polar_surface()),
    ]
}
