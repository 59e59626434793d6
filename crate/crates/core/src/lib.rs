//! Finsler geometry on top of exact symbolic expressions: tensors, the four
//! fundamental connections with their torsions and curvatures, the
//! lowered-index simplification route, and an independent numeric oracle.

pub mod error;
pub mod geometry;
pub mod jet;
pub mod oracle;
pub mod registry;
pub mod simplify;
pub mod tensor;

pub use error::{GeometryError, Result};
pub use geometry::{Classification, ConnectionKind, ConnectionTriple, CurvatureKind, FinslerStructure, Geometry};
pub use oracle::{ComponentCheck, NumericTable, VerificationReport, VerifyOptions};
pub use registry::ObjectId;
pub use simplify::{LoweringPlan, LoweredObject, MetricSite, PlanTerm, Simplified};
pub use tensor::{Component, Symmetry, SymmetryKind, Tensor, Variance};
