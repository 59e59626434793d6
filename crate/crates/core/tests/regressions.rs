//! The four-dimensional Berwald example and the registry across dimensions.

mod common;

use common::*;
use finsler_core::oracle::numeric_object;
use finsler_core::{ConnectionKind, CurvatureKind, FinslerStructure, Geometry, ObjectId};
use finsler_symbolic::{parse, Coordinates};

#[test]
fn berwald_coefficients_of_the_four_dimensional_example_are_exact() {
    let geom = Geometry::build(berwald_example()).unwrap();
    let gb = geom.tensor(&ObjectId::Berwald).unwrap();
    let coords = Coordinates::standard(4);
    let expected = |i: &[usize]| -> &str {
        match i {
            [0, 0, 0] | [1, 0, 1] | [1, 1, 0] | [2, 0, 2] | [2, 2, 0] => "1/x1",
            [0, 1, 1] | [0, 2, 2] => "-1/x1",
            _ => "0",
        }
    };
    for index in gb.indices() {
        let want = parse(expected(&index), &coords).unwrap();
        assert_eq!(*gb.get(&index), want, "G^{}_{}{}", index[0] + 1, index[1] + 1, index[2] + 1);
    }
}

#[test]
fn berwald_example_is_classified_berwaldian_with_vanishing_hv_curvature() {
    let fs = berwald_example();
    let geom = Geometry::build(fs.clone()).unwrap();
    let class = geom.classify().unwrap();
    assert!(class.berwaldian && !class.riemannian);
    let p = geom.curvature(ConnectionKind::Cartan, CurvatureKind::Hv).unwrap();
    assert!(p.is_zero());
    let id = ObjectId::Curvature(CurvatureKind::Hv, ConnectionKind::Cartan);
    for point in fs.sampler().points(8, 1).unwrap() {
        assert!(numeric_object(&fs, &id, &point).unwrap().values.iter().all(|v| v.abs() <= 1e-9));
    }
}

/// Every registry id, derivative ids included, spelled as a user would.
fn registry_ids() -> Vec<ObjectId> {
    let mut ids = ObjectId::all_basic();
    ids.push(ObjectId::Classify);
    for kind in ["cartan", "berwald", "chern", "hashiguchi"] {
        for text in [format!("hcov:g:{kind}"), format!("vcov:g:{kind}"), format!("hcov:l:{kind}"), format!("vcov:C:{kind}")] {
            ids.push(text.parse().unwrap());
        }
    }
    ids
}

fn compute_all(fs: FinslerStructure) {
    let geom = Geometry::build(fs).unwrap();
    for id in registry_ids() {
        match id {
            ObjectId::Classify => {
                geom.classify().unwrap();
            }
            _ => {
                let t = geom.tensor(&id).unwrap_or_else(|e| panic!("dim {}: {id}: {e}", geom.dim()));
                assert_eq!(t.dim(), geom.dim());
            }
        }
    }
}

#[test]
fn every_object_computes_in_dimensions_two_to_five() {
    for n in 2..=5 {
        compute_all(euclidean(n));
        compute_all(smoke_rational(n));
    }
}

#[test]
fn smoke_structures_classify_as_expected() {
    for n in 2..=5 {
        let flat = Geometry::build(euclidean(n)).unwrap().classify().unwrap();
        assert!(flat.riemannian && flat.berwaldian, "dim {n}");
        let rational = Geometry::build(smoke_rational(n)).unwrap().classify().unwrap();
        assert!(!rational.riemannian && !rational.berwaldian, "dim {n}");
    }
}

#[test]
fn v_curvature_of_berwald_and_chern_is_refused_in_every_dimension() {
    for text in ["S:berwald", "S:chern"] {
        let err = text.parse::<ObjectId>().unwrap_err().to_string();
        assert!(!err.contains("dimension"), "{err}");
    }
}
