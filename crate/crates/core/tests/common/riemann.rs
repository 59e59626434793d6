//! Brute-force Christoffel symbols and Riemann tensor of a two-dimensional
//! metric `a_ij(x)`, computed on jets of its coefficients.

use std::sync::Arc;

use finsler_core::jet::{Jet, JetSpace};
use finsler_core::oracle::numeric_object;
use finsler_core::{ConnectionKind, CurvatureKind, FinslerStructure, Geometry, ObjectId};
use finsler_symbolic::eval_at;

pub type Metric = fn(&Arc<JetSpace>, &[Jet]) -> [[Jet; 2]; 2];

pub fn polar(s: &Arc<JetSpace>, x: &[Jet]) -> [[Jet; 2]; 2] {
    [[Jet::constant(s, 1.0), Jet::zero(s)], [Jet::zero(s), x[0].mul(&x[0])]]
}

pub fn half_plane(s: &Arc<JetSpace>, x: &[Jet]) -> [[Jet; 2]; 2] {
    let w = x[1].mul(&x[1]).recip().unwrap();
    [[w.clone(), Jet::zero(s)], [Jet::zero(s), w]]
}

/// `(Γ^i_jk, R^i_hjk)` at `x`, with `R^i_hjk = ∂_k Γ^i_hj - ∂_j Γ^i_hk + Γ^i_mk Γ^m_hj - Γ^i_mj Γ^m_hk`.
pub fn brute_force(metric: Metric, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let space = JetSpace::new(2, 3);
    let xs: Vec<Jet> = x.iter().enumerate().map(|(v, &a)| Jet::variable(&space, v, a)).collect();
    let g = metric(&space, &xs);
    let det = g[0][0].mul(&g[1][1]).sub(&g[0][1].mul(&g[1][0]));
    let inv_det = det.recip().unwrap();
    let ginv = [
        [g[1][1].mul(&inv_det), g[0][1].mul(&inv_det).scale(-1.0)],
        [g[1][0].mul(&inv_det).scale(-1.0), g[0][0].mul(&inv_det)],
    ];
    let mut gamma = vec![vec![vec![Jet::zero(&space); 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let bracket = g[l][k].diff(j).add(&g[l][j].diff(k)).sub(&g[j][k].diff(l));
                    gamma[i][j][k] = gamma[i][j][k].add(&ginv[i][l].mul(&bracket).scale(0.5));
                }
            }
        }
    }
    let mut christoffel = Vec::new();
    let mut riemann = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                christoffel.push(gamma[i][j][k].value());
            }
        }
    }
    for i in 0..2 {
        for h in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut r = gamma[i][h][j].diff(k).value() - gamma[i][h][k].diff(j).value();
                    for m in 0..2 {
                        r += gamma[i][m][k].value() * gamma[m][h][j].value() - gamma[i][m][j].value() * gamma[m][h][k].value();
                    }
                    riemann.push(r);
                }
            }
        }
    }
    (christoffel, riemann)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

/// For `F² = a_ij(x) y^i y^j`: `C ≡ 0`, the four h-curvatures coincide, the
/// hv-curvatures vanish, and Γ and the h-curvature (symbolic and oracle)
/// match the brute-force values at eight seeded points.
pub fn degeneration(fs: FinslerStructure, metric: Metric) -> Result<(), String> {
    let geom = Geometry::build(fs.clone()).map_err(|e| e.to_string())?;
    if !geom.tensor(&ObjectId::Cartan).unwrap().is_zero() {
        return Err("C does not vanish".into());
    }
    let h = |k| geom.curvature(k, CurvatureKind::H).unwrap();
    let cartan = h(ConnectionKind::Cartan);
    for kind in ConnectionKind::ALL {
        if h(kind).components() != cartan.components() {
            return Err(format!("{kind} h-curvature differs from the cartan one"));
        }
        if !geom.curvature(kind, CurvatureKind::Hv).unwrap().is_zero() {
            return Err(format!("{kind} hv-curvature does not vanish"));
        }
    }
    let gamma = geom.tensor(&ObjectId::CartanCoefficients).unwrap();
    for p in fs.sampler().points(8, 42).unwrap() {
        let (christoffel, riemann) = brute_force(metric, &p.x);
        for (e, want) in gamma.components().iter().zip(&christoffel) {
            let got = eval_at(e, &p).unwrap();
            if !close(got, *want) {
                return Err(format!("Gamma {got} vs brute force {want}"));
            }
        }
        for kind in ConnectionKind::ALL {
            let id = ObjectId::Curvature(CurvatureKind::H, kind);
            let numeric = numeric_object(&fs, &id, &p).unwrap().values;
            for ((e, v), want) in cartan.components().iter().zip(&numeric).zip(&riemann) {
                let got = eval_at(e, &p).unwrap();
                if !close(got, *want) || !close(*v, *want) {
                    return Err(format!("{id}: symbolic {got}, oracle {v}, brute force {want}"));
                }
            }
        }
    }
    Ok(())
}
