//! Structural identities of the Finsler objects, checked canonically and
//! against the oracle at seeded points.

mod common;

use common::*;
use finsler_core::{ConnectionKind, CurvatureKind, Geometry, ObjectId, Tensor};
use finsler_symbolic::Expr;

fn assert_zero(t: &Tensor, what: &str, name: &str) {
    for (index, e) in t.indices().zip(t.components()) {
        assert!(e.is_zero(), "{name}: {what} nonzero at {index:?}: {e:?}");
    }
}

fn for_each_structure(check: fn(&Geometry) -> checks::Check) {
    for (name, fs) in test_structures() {
        let geom = Geometry::build(fs).unwrap();
        if let Err(e) = check(&geom) {
            panic!("{name}: {e}");
        }
    }
}

#[test]
fn euler_chains_hold() {
    for_each_structure(checks::euler_chains);
}

#[test]
fn cartan_connection_is_metric_in_both_directions() {
    for_each_structure(checks::cartan_metricity);
}

#[test]
fn curvatures_have_their_antisymmetries() {
    for_each_structure(checks::curvature_antisymmetries);
}

#[test]
fn connection_coincidences_hold_canonically_and_numerically() {
    for_each_structure(checks::connection_coincidences);
}

#[test]
fn v_curvature_agrees_with_the_quadratic_formula() {
    // S^i_hjk = C^m_hk C^i_mj - C^m_hj C^i_mk
    for (name, fs) in test_structures() {
        let geom = Geometry::build(fs).unwrap();
        let c = geom.tensor(&ObjectId::CartanMixed).unwrap();
        let cc = c.contract_product(&c, &[(0, 1)]).unwrap();
        let quadratic = cc.permute(&[2, 0, 3, 1]).unwrap().sub(&cc.permute(&[2, 0, 1, 3]).unwrap()).unwrap();
        for kind in [ConnectionKind::Cartan, ConnectionKind::Hashiguchi] {
            let s = geom.curvature(kind, CurvatureKind::V).unwrap();
            assert_zero(&s.sub(&quadratic).unwrap(), "S - (CC - CC)", name);
        }
    }
}

#[test]
fn unalternated_product_sign_would_triple_the_v_curvature() {
    // 𝔄{∂̇_k C^i_hj + C^m_hk C^i_mj} = 3 (C^m_hk C^i_mj - C^m_hj C^i_mk)
    let geom = Geometry::build(cubic()).unwrap();
    let c = geom.tensor(&ObjectId::CartanMixed).unwrap();
    let cc = c.contract_product(&c, &[(0, 1)]).unwrap();
    let literal = geom.vertical_gradient(&c).unwrap().add(&cc.permute(&[2, 0, 3, 1]).unwrap()).unwrap().alternate(2, 3).unwrap();
    let s = geom.curvature(ConnectionKind::Cartan, CurvatureKind::V).unwrap();
    assert!(!s.is_zero());
    assert_zero(&literal.sub(&s.scale(&Expr::from_int(3))).unwrap(), "literal - 3 S", "cubic");
}

#[test]
fn torsion_of_berwald_and_hashiguchi_vanishes() {
    for (name, fs) in test_structures() {
        let geom = Geometry::build(fs).unwrap();
        for kind in [ConnectionKind::Berwald, ConnectionKind::Hashiguchi] {
            assert_zero(&geom.p_torsion(kind).unwrap(), "hv-torsion", name);
        }
    }
}

#[test]
fn cold_and_warm_cache_agree() {
    let warm = Geometry::build(reference()).unwrap();
    for id in ObjectId::all_basic() {
        warm.tensor(&id).unwrap();
    }
    for id in ObjectId::all_basic().into_iter().rev() {
        let cold = Geometry::build(reference()).unwrap();
        assert_eq!(*cold.tensor(&id).unwrap(), *warm.tensor(&id).unwrap(), "{id}");
    }
}
