//! Rendering of computed objects as text, LaTeX or JSON documents.
//!
//! Index labels use the base coordinate names, grouped by variance:
//! `C^{x1}_{x1 x1}`. Expressions are printed in canonical form.

use finsler_core::{Classification, Component, ConnectionKind, CurvatureKind, ObjectId, Tensor, VerificationReport, Variance};
use finsler_symbolic::{to_latex, to_text, Coordinates};
use serde_json::{json, Value};

use crate::config::Format;

/// Display symbol of an object (text form).
pub fn symbol(id: &ObjectId) -> String {
    match id {
        ObjectId::Metric | ObjectId::InverseMetric => "g".into(),
        ObjectId::SupportDown | ObjectId::SupportUp => "l".into(),
        ObjectId::Angular => "h".into(),
        ObjectId::Cartan | ObjectId::CartanMixed => "C".into(),
        ObjectId::Christoffel => "gamma".into(),
        ObjectId::Spray | ObjectId::Berwald => "G".into(),
        ObjectId::Barthel => "N".into(),
        ObjectId::CartanCoefficients => "Gamma".into(),
        ObjectId::RTorsion => "R".into(),
        ObjectId::PTorsion => "P".into(),
        ObjectId::Curvature(which, kind) => format!("{}{}", which.symbol(), kind_suffix(*kind)),
        ObjectId::HCov(inner, kind) => format!("{}|{}", symbol(inner), kind_suffix(*kind)),
        ObjectId::VCov(inner, kind) => format!("{}||{}", symbol(inner), kind_suffix(*kind)),
        ObjectId::Classify => "classify".into(),
    }
}

/// One-letter connection marks: `RC`, `RB`, `Rchern`, `RH`.
fn kind_suffix(kind: ConnectionKind) -> &'static str {
    match kind {
        ConnectionKind::Cartan => "C",
        ConnectionKind::Berwald => "B",
        ConnectionKind::Chern => "chern",
        ConnectionKind::Hashiguchi => "H",
    }
}

fn latex_symbol(id: &ObjectId) -> String {
    let kind = |k: ConnectionKind| format!("\\mathrm{{{}}}", kind_suffix(k));
    match id {
        ObjectId::Christoffel => "\\gamma".into(),
        ObjectId::CartanCoefficients => "\\Gamma".into(),
        ObjectId::Curvature(which, k) => {
            let base = match which {
                CurvatureKind::H => "R",
                CurvatureKind::Hv => "P",
                CurvatureKind::V => "S",
            };
            format!("{base}{}", kind(*k))
        }
        ObjectId::HCov(inner, k) => format!("\\nabla^{{h}}_{{{}}}{}", kind(*k), latex_symbol(inner)),
        ObjectId::VCov(inner, k) => format!("\\nabla^{{v}}_{{{}}}{}", kind(*k), latex_symbol(inner)),
        other => symbol(other),
    }
}

/// `^{x1}_{x1 x2}`: consecutive slots of equal variance share one group.
pub fn index_label(sig: &[Variance], index: &[usize], coords: &Coordinates) -> String {
    let mut out = String::new();
    let mut start = 0;
    while start < sig.len() {
        let end = (start..sig.len()).find(|&s| sig[s] != sig[start]).unwrap_or(sig.len());
        let names: Vec<&str> = index[start..end].iter().map(|&i| coords.index_label(i)).collect();
        let mark = if sig[start] == Variance::Up { '^' } else { '_' };
        out.push_str(&format!("{mark}{{{}}}", names.join(" ")));
        start = end;
    }
    out
}

fn signature_names(sig: &[Variance]) -> Vec<&'static str> {
    sig.iter().map(|v| if *v == Variance::Up { "up" } else { "down" }).collect()
}

fn check_text(report: &VerificationReport, coords: &Coordinates) -> String {
    if report.passed() {
        format!(
            "check: pass ({} points, seed {}, tol {:e}, max deviation {:.3e})",
            report.points.len(),
            report.seed,
            report.tol,
            report.max_rel()
        )
    } else {
        let failed: Vec<String> = report.failures().map(|c| format!("[{}] {:.3e}", label_names(&c.index, coords).join(" "), c.max_rel)).collect();
        format!("check: FAIL ({} points, seed {}, tol {:e}) at {}", report.points.len(), report.seed, report.tol, failed.join(", "))
    }
}

fn label_names(index: &[usize], coords: &Coordinates) -> Vec<String> {
    index.iter().map(|&i| coords.index_label(i).to_string()).collect()
}

fn check_json(report: &VerificationReport, coords: &Coordinates) -> Value {
    json!({
        "passed": report.passed(),
        "points": report.points.len(),
        "seed": report.seed,
        "tol": report.tol,
        "max_rel": report.max_rel(),
        "failures": report.failures().map(|c| json!(label_names(&c.index, coords))).collect::<Vec<_>>(),
    })
}

/// Everything one tensor document shows.
pub struct TensorDoc<'a> {
    pub id: &'a ObjectId,
    pub tensor: &'a Tensor,
    pub components: &'a [Component],
    pub coords: &'a Coordinates,
    pub symmetry_reduced: bool,
    pub check: Option<&'a VerificationReport>,
}

pub fn tensor_document(doc: &TensorDoc, format: Format) -> String {
    let sig = doc.tensor.signature();
    match format {
        Format::Json => {
            let components: Vec<Value> = doc
                .components
                .iter()
                .map(|c| json!({"index": label_names(&c.index, doc.coords), "expr": to_text(&c.expr, Some(doc.coords))}))
                .collect();
            let mut v = json!({
                "name": doc.id.to_string(),
                "signature": signature_names(sig),
                "dim": doc.tensor.dim(),
                "coords": doc.coords.base_names(),
                "components": components,
                "symmetry_reduced": doc.symmetry_reduced,
            });
            if let Some(report) = doc.check {
                v["check"] = check_json(report, doc.coords);
            }
            serde_json::to_string_pretty(&v).expect("json values serialize")
        }
        Format::Text | Format::Latex => {
            let mut lines = vec![format!("# {}", doc.id)];
            if doc.components.is_empty() {
                lines.push("no nonvanishing components".into());
            }
            for c in doc.components {
                let label = index_label(sig, &c.index, doc.coords);
                lines.push(if format == Format::Text {
                    format!("{}{label} = {}", symbol(doc.id), to_text(&c.expr, Some(doc.coords)))
                } else {
                    format!("{}{label} = {}", latex_symbol(doc.id), to_latex(&c.expr, Some(doc.coords)))
                });
            }
            if let Some(report) = doc.check {
                lines.push(check_text(report, doc.coords));
            }
            lines.join("\n")
        }
    }
}

pub fn classification_document(class: &Classification, coords: &Coordinates, check: Option<&VerificationReport>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut v = json!({
                "name": "classify",
                "dim": coords.dim(),
                "coords": coords.base_names(),
                "riemannian": class.riemannian,
                "berwaldian": class.berwaldian,
            });
            if let Some(report) = check {
                v["check"] = check_json(report, coords);
            }
            serde_json::to_string_pretty(&v).expect("json values serialize")
        }
        Format::Text | Format::Latex => {
            let mut lines = vec!["# classify".to_string()];
            lines.push(format!("riemannian = {}", class.riemannian));
            lines.push(format!("berwaldian = {}", class.berwaldian));
            if let Some(report) = check {
                lines.push(check_text(report, coords));
            }
            lines.join("\n")
        }
    }
}
