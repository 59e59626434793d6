//! Structural identities as checks returning the first violation found.
//! Every identity is tested canonically and at seeded oracle points.

use finsler_core::oracle::numeric_object;
use finsler_core::{ConnectionKind, CurvatureKind, FinslerStructure, Geometry, ObjectId, Tensor, Variance};
use finsler_symbolic::{eval_at, Expr, NumericPoint, Var};

use super::{coincidences, numeric_residual, symbolic_residual};

pub const POINTS: usize = 8;
pub const SEED: u64 = 42;
pub const TOL: f64 = 1e-9;

pub type Check = Result<(), String>;

fn y(i: usize) -> Expr {
    Expr::var(Var::Fiber(i))
}

fn zero(t: &Tensor, what: &str) -> Check {
    match t.indices().zip(t.components()).find(|(_, e)| !e.is_zero()) {
        Some((index, e)) => Err(format!("{what} nonzero at {index:?}: {e:?}")),
        None => Ok(()),
    }
}

fn small(v: f64, scale: f64, what: &str) -> Check {
    if v.abs() <= TOL * scale.abs().max(1.0) {
        Ok(())
    } else {
        Err(format!("{what}: numeric deviation {v:e}"))
    }
}

/// `Σ_k t[.., k] y^k` over the last slot.
pub fn transvect_last(t: &Tensor) -> Tensor {
    let lup = Tensor::from_fn("y", t.dim(), &[Variance::Up], |i| Ok(y(i[0]))).unwrap();
    t.contract_product(&lup, &[(t.rank() - 1, 0)]).unwrap()
}

fn points(fs: &FinslerStructure) -> Vec<NumericPoint> {
    fs.sampler().points(POINTS, SEED).unwrap()
}

fn numeric(fs: &FinslerStructure, id: &ObjectId, p: &NumericPoint) -> Vec<f64> {
    numeric_object(fs, id, p).unwrap().values
}

/// `g_ij y^i y^j = F²`, `h_ij y^j = 0`, `C_ijk y^k = 0`, `N^i_j y^j = 2G^i`,
/// `G^i_jk y^k = N^i_j` and `l_i l^i = 1`.
pub fn euler_chains(geom: &Geometry) -> Check {
    let fs = geom.structure();
    let n = fs.dim();
    let g = geom.metric();
    let spray = geom.tensor(&ObjectId::Spray).unwrap();
    let nl = geom.tensor(&ObjectId::Barthel).unwrap();
    let gb = geom.tensor(&ObjectId::Berwald).unwrap();
    let gyy: Expr = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| g.get(&[i, j]).mul(&y(i)).mul(&y(j))).sum();
    if !gyy.sub(fs.f_squared()).is_zero() {
        return Err("g y y differs from F^2".into());
    }
    zero(&transvect_last(&geom.tensor(&ObjectId::Angular).unwrap()), "h y")?;
    zero(&transvect_last(&geom.tensor(&ObjectId::Cartan).unwrap()), "C y")?;
    zero(&transvect_last(&nl).sub(&spray.scale(&Expr::from_int(2))).unwrap(), "N y - 2G")?;
    zero(&transvect_last(&gb).sub(&nl).unwrap(), "Gb y - N")?;
    let l = geom.tensor(&ObjectId::SupportDown).unwrap();
    let lup = geom.tensor(&ObjectId::SupportUp).unwrap();
    if !l.contract_product(&lup, &[(0, 0)]).unwrap().components()[0].sub(&Expr::one()).is_zero() {
        return Err("l l differs from 1".into());
    }
    for p in points(fs) {
        let f2 = eval_at(fs.f_squared(), &p).unwrap();
        let gn = numeric(fs, &ObjectId::Metric, &p);
        let gyy: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| gn[i * n + j] * p.y[i] * p.y[j]).sum();
        small(gyy - f2, f2, "g y y - F^2")?;
        let c = numeric(fs, &ObjectId::Cartan, &p);
        let h = numeric(fs, &ObjectId::Angular, &p);
        let sp = numeric(fs, &ObjectId::Spray, &p);
        let nn = numeric(fs, &ObjectId::Barthel, &p);
        let gbn = numeric(fs, &ObjectId::Berwald, &p);
        for i in 0..n {
            small((0..n).map(|j| h[i * n + j] * p.y[j]).sum(), 1.0, "h y")?;
            small((0..n).map(|j| nn[i * n + j] * p.y[j]).sum::<f64>() - 2.0 * sp[i], sp[i], "N y - 2G")?;
            for j in 0..n {
                small((0..n).map(|k| c[(i * n + j) * n + k] * p.y[k]).sum(), 1.0, "C y")?;
                let gby: f64 = (0..n).map(|k| gbn[(i * n + j) * n + k] * p.y[k]).sum();
                small(gby - nn[i * n + j], nn[i * n + j], "Gb y - N")?;
            }
        }
    }
    Ok(())
}

/// `g_ij|k = 0` and `g_ij||k = 0` for the Cartan connection.
pub fn cartan_metricity(geom: &Geometry) -> Check {
    let triple = geom.triple(ConnectionKind::Cartan).unwrap();
    let g = geom.metric();
    zero(&geom.h_cov_derivative(&g, &triple).unwrap(), "g_ij|k")?;
    zero(&geom.v_cov_derivative(&g, &triple).unwrap(), "g_ij||k")?;
    for kind in ["hcov", "vcov"] {
        let id: ObjectId = format!("{kind}:g:cartan").parse().unwrap();
        for p in points(geom.structure()) {
            for v in numeric(geom.structure(), &id, &p) {
                small(v, 1.0, &id.to_string())?;
            }
        }
    }
    Ok(())
}

/// Alternation of every h-curvature, the Cartan v-curvature and `R^i_jk` in
/// their last two slots, and of the lowered v-curvature in its first pair.
pub fn curvature_antisymmetries(geom: &Geometry) -> Check {
    let fs = geom.structure();
    let n = fs.dim();
    let mut ids: Vec<ObjectId> = ConnectionKind::ALL.iter().map(|&k| ObjectId::Curvature(CurvatureKind::H, k)).collect();
    ids.push(ObjectId::Curvature(CurvatureKind::V, ConnectionKind::Cartan));
    ids.push(ObjectId::RTorsion);
    let pts = points(fs);
    for id in ids {
        let t = geom.tensor(&id).unwrap();
        let last = t.rank() - 1;
        let mut perm: Vec<usize> = (0..t.rank()).collect();
        perm.swap(last - 1, last);
        zero(&t.add(&t.permute(&perm).unwrap()).unwrap(), &format!("{id} alternation"))?;
        for p in &pts {
            let v = numeric(fs, &id, p);
            for (flat, index) in t.indices().enumerate() {
                let mut swapped = index.clone();
                swapped.swap(last - 1, last);
                let other = swapped.iter().fold(0, |acc, &i| acc * n + i);
                small(v[flat] + v[other], v[flat], &format!("{id} alternation"))?;
            }
        }
    }
    let s = geom.tensor(&ObjectId::Curvature(CurvatureKind::V, ConnectionKind::Cartan)).unwrap();
    let lowered = s.move_index(0, &geom.metric(), &geom.inverse_metric()).unwrap();
    zero(&lowered.add(&lowered.permute(&[1, 0, 2, 3]).unwrap()).unwrap(), "S_ihjk + S_hijk")?;
    let g = |p: &NumericPoint| numeric(fs, &ObjectId::Metric, p);
    let sid = ObjectId::Curvature(CurvatureKind::V, ConnectionKind::Cartan);
    for p in &pts {
        let (gn, sn) = (g(p), numeric(fs, &sid, p));
        let low = |i: usize, h: usize, j: usize, k: usize| -> f64 { (0..n).map(|m| gn[i * n + m] * sn[((m * n + h) * n + j) * n + k]).sum() };
        for i in 0..n {
            for h in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        small(low(i, h, j, k) + low(h, i, j, k), low(i, h, j, k), "S_ihjk + S_hijk")?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// The four coincidences between the connections.
pub fn connection_coincidences(geom: &Geometry) -> Check {
    for c in coincidences() {
        zero(&symbolic_residual(geom, &c), c.name)?;
        let worst = numeric_residual(geom.structure(), &c, POINTS, SEED);
        if worst > TOL {
            return Err(format!("{}: numeric deviation {worst:e}", c.name));
        }
    }
    Ok(())
}

/// Every identity, labelled.
pub fn all(geom: &Geometry) -> Vec<(&'static str, Check)> {
    vec![
        ("euler chains", euler_chains(geom)),
        ("cartan metricity", cartan_metricity(geom)),
        ("curvature antisymmetries", curvature_antisymmetries(geom)),
        ("connection coincidences", connection_coincidences(geom)),
    ]
}
