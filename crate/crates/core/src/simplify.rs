//! Simplification by lowering: compute the all-covariant form of a curvature
//! from a formula whose metric factors sit at lowering-safe places, then
//! raise the first slot for display.
//!
//! The metric never moves through a derivative of a connection coefficient:
//! `g_im ∂̇_k Γ^m_hj` and `∂̇_k (g_im Γ^m_hj)` differ by `∂̇_k g_im Γ^m_hj`.

use std::fmt;
use std::sync::Arc;

use finsler_symbolic::ZeroStatus;

use crate::error::{GeometryError, Result};
use crate::geometry::{ConnectionKind, CurvatureKind, Geometry};
use crate::registry::ObjectId;
use crate::tensor::Tensor;

/// Objects with a registered lowering plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoweredObject {
    /// Cartan v-curvature `S^i_hjk`.
    VCurvatureCartan,
    /// Cartan hv-curvature `P^i_hjk`.
    HvCurvatureCartan,
}

impl LoweredObject {
    pub fn from_id(id: &ObjectId) -> Result<Self> {
        match id {
            ObjectId::Curvature(CurvatureKind::V, ConnectionKind::Cartan) => Ok(LoweredObject::VCurvatureCartan),
            ObjectId::Curvature(CurvatureKind::Hv, ConnectionKind::Cartan) => Ok(LoweredObject::HvCurvatureCartan),
            other => Err(GeometryError::UnsupportedObject(format!("{other} has no lowering plan"))),
        }
    }

    pub fn id(self) -> ObjectId {
        match self {
            LoweredObject::VCurvatureCartan => ObjectId::Curvature(CurvatureKind::V, ConnectionKind::Cartan),
            LoweredObject::HvCurvatureCartan => ObjectId::Curvature(CurvatureKind::Hv, ConnectionKind::Cartan),
        }
    }
}

impl fmt::Display for LoweredObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Where the metric factor enters a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricSite {
    /// Contracted with the whole term after every derivative is taken.
    AfterDerivative,
    /// Absorbed into an undifferentiated factor, e.g. `C_imj = g_ir C^r_mj`.
    Factor,
    /// Pushed inside a derivative.
    InsideDerivative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanTerm {
    pub sign: i8,
    pub label: &'static str,
    /// The term differentiates a connection coefficient.
    pub differentiates_connection: bool,
    pub site: MetricSite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoweringPlan {
    pub object: LoweredObject,
    pub terms: Vec<PlanTerm>,
}

const S_CC_LOWERED_K: &str = "C^m_hk C_imj";
const S_CC_LOWERED_J: &str = "C^m_hj C_imk";
const P_DGAMMA: &str = "g_im dy_k Gamma^m_hj";
const P_HCOV_C: &str = "g_im C^m_hk|j";
const P_C_PTORSION: &str = "C_ihm P^m_jk";

impl LoweringPlan {
    pub fn for_object(object: LoweredObject) -> LoweringPlan {
        let term = |sign, label, differentiates_connection, site| PlanTerm { sign, label, differentiates_connection, site };
        let terms = match object {
            LoweredObject::VCurvatureCartan => vec![
                term(1, S_CC_LOWERED_K, false, MetricSite::Factor),
                term(-1, S_CC_LOWERED_J, false, MetricSite::Factor),
            ],
            LoweredObject::HvCurvatureCartan => vec![
                term(1, P_DGAMMA, true, MetricSite::AfterDerivative),
                term(-1, P_HCOV_C, false, MetricSite::AfterDerivative),
                term(1, P_C_PTORSION, false, MetricSite::Factor),
            ],
        };
        LoweringPlan { object, terms }
    }

    /// Rejects plans that move the metric through a derivative of a connection coefficient.
    pub fn check(&self) -> Result<()> {
        match self.terms.iter().find(|t| t.differentiates_connection && t.site == MetricSite::InsideDerivative) {
            Some(t) => Err(GeometryError::UnsupportedObject(format!(
                "{}: term `{}` would commute the metric with a derivative of a connection coefficient",
                self.object, t.label
            ))),
            None => Ok(()),
        }
    }
}

fn term_tensor(geom: &Geometry, label: &str) -> Result<Tensor> {
    let g = geom.metric();
    let g_inv = geom.inverse_metric();
    let (c_down, c_mixed) = geom.cartan_tensor()?;
    // contractions below produce slots in a formula-specific order; `permute`
    // brings them to (i, h, j, k)
    match label {
        S_CC_LOWERED_K => c_mixed.contract_product(&c_down, &[(0, 1)])?.permute(&[2, 0, 3, 1]),
        S_CC_LOWERED_J => c_mixed.contract_product(&c_down, &[(0, 1)])?.permute(&[2, 0, 1, 3]),
        P_DGAMMA => {
            let gamma = geom.cartan_coefficients()?;
            geom.vertical_gradient(&gamma)?.move_index(0, &g, &g_inv)
        }
        P_HCOV_C => {
            let triple = geom.triple(ConnectionKind::Cartan)?;
            geom.h_cov_derivative(&c_mixed, &triple)?.move_index(0, &g, &g_inv)?.permute(&[0, 1, 3, 2])
        }
        P_C_PTORSION => {
            let pt = geom.p_torsion(ConnectionKind::Cartan)?;
            c_down.contract_product(&pt, &[(2, 0)])
        }
        other => Err(GeometryError::UnsupportedObject(format!("unknown plan term `{other}`"))),
    }
}

/// The all-covariant form of `object`, computed term by term per its plan.
pub fn lowered_form(geom: &Geometry, object: LoweredObject) -> Result<Tensor> {
    let plan = LoweringPlan::for_object(object);
    plan.check()?;
    let mut acc: Option<Tensor> = None;
    for term in &plan.terms {
        let t = term_tensor(geom, term.label)?;
        acc = Some(match acc {
            None if term.sign > 0 => t,
            None => t.scale(&finsler_symbolic::Expr::from_int(-1)),
            Some(a) if term.sign > 0 => a.add(&t)?,
            Some(a) => a.sub(&t)?,
        });
    }
    Ok(acc.expect("plans have terms").with_name(&format!("{object}:lowered")))
}

/// Result of [`simplify_via_lowering`].
#[derive(Clone, Debug)]
pub struct Simplified {
    pub object: LoweredObject,
    /// First slot raised again; canonically equal to `direct`.
    pub tensor: Tensor,
    pub lowered: Tensor,
    pub direct: Arc<Tensor>,
}

impl Simplified {
    /// `(direct, via lowering)` node counts of one component.
    pub fn node_counts(&self, index: &[usize]) -> (usize, usize) {
        (self.direct.get(index).node_count(), self.tensor.get(index).node_count())
    }

    /// `(direct, via lowering)` node counts summed over all components.
    pub fn total_node_counts(&self) -> (usize, usize) {
        let total = |t: &Tensor| t.components().iter().map(|e| e.node_count()).sum::<usize>();
        (total(&self.direct), total(&self.tensor))
    }
}

/// Raises the first slot of [`lowered_form`] and checks it against the
/// directly computed curvature.
pub fn simplify_via_lowering(geom: &Geometry, object: LoweredObject) -> Result<Simplified> {
    let lowered = lowered_form(geom, object)?;
    let tensor = lowered.move_index(0, &geom.metric(), &geom.inverse_metric())?.with_name(&object.to_string());
    let direct = geom.tensor(&object.id())?;
    for (index, (a, b)) in tensor.indices().zip(tensor.components().iter().zip(direct.components())) {
        if a != b && geom.zero_test().check(&a.sub(b)) == ZeroStatus::NonZero {
            return Err(GeometryError::EquivalenceFailure { object: object.to_string(), index });
        }
    }
    // equal componentwise, so the direct tensor's symmetries hold as well
    let missing: Vec<_> = direct.symmetries().iter().filter(|s| !tensor.symmetries().contains(s)).cloned().collect();
    let tensor = missing.into_iter().fold(tensor, Tensor::assume_symmetry);
    log::debug!("{object}: node counts direct/lowered {:?}", {
        let total = |t: &Tensor| t.components().iter().map(|e| e.node_count()).sum::<usize>();
        (total(&direct), total(&tensor))
    });
    Ok(Simplified { object, tensor, lowered, direct })
}
