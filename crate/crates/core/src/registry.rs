//! Identifiers of every object the geometry can compute.
//!
//! ```text
//! id := g | ginv | l | lup | h | C | Cmixed | gamma | Gspray | N | Gberwald
//!     | Gamma | Rtorsion | Ptorsion | classify
//!     | (R | P | S) [':' kind]
//!     | (hcov | vcov) ':' id ':' kind
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::GeometryError;
use crate::geometry::{ConnectionKind, CurvatureKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjectId {
    /// `g_ij`
    Metric,
    /// `g^ij`
    InverseMetric,
    /// `l_i`
    SupportDown,
    /// `l^i`
    SupportUp,
    /// `h_ij`
    Angular,
    /// `C_ijk`
    Cartan,
    /// `C^i_jk`
    CartanMixed,
    /// `γ^i_jk`, Christoffel symbols with respect to `∂_i`.
    Christoffel,
    /// `G^i`
    Spray,
    /// `N^i_j`
    Barthel,
    /// `G^i_jk`
    Berwald,
    /// `Γ^i_jk`, Christoffel symbols with respect to `δ_i`.
    CartanCoefficients,
    /// `R^i_jk`
    RTorsion,
    /// `P^i_jk` of the Cartan connection.
    PTorsion,
    Curvature(CurvatureKind, ConnectionKind),
    HCov(Box<ObjectId>, ConnectionKind),
    VCov(Box<ObjectId>, ConnectionKind),
    Classify,
}

const SIMPLE: [(&str, ObjectId); 15] = [
    ("g", ObjectId::Metric),
    ("ginv", ObjectId::InverseMetric),
    ("l", ObjectId::SupportDown),
    ("lup", ObjectId::SupportUp),
    ("h", ObjectId::Angular),
    ("C", ObjectId::Cartan),
    ("Cmixed", ObjectId::CartanMixed),
    ("gamma", ObjectId::Christoffel),
    ("Gspray", ObjectId::Spray),
    ("N", ObjectId::Barthel),
    ("Gberwald", ObjectId::Berwald),
    ("Gamma", ObjectId::CartanCoefficients),
    ("Rtorsion", ObjectId::RTorsion),
    ("Ptorsion", ObjectId::PTorsion),
    ("classify", ObjectId::Classify),
];

impl ObjectId {
    /// Every non-derivative object, with curvatures for each supported kind.
    pub fn all_basic() -> Vec<ObjectId> {
        let mut ids: Vec<ObjectId> = SIMPLE.iter().map(|(_, id)| id.clone()).filter(|id| *id != ObjectId::Classify).collect();
        for kind in ConnectionKind::ALL {
            ids.push(ObjectId::Curvature(CurvatureKind::H, kind));
            ids.push(ObjectId::Curvature(CurvatureKind::Hv, kind));
        }
        ids.push(ObjectId::Curvature(CurvatureKind::V, ConnectionKind::Cartan));
        ids.push(ObjectId::Curvature(CurvatureKind::V, ConnectionKind::Hashiguchi));
        ids
    }

    /// Whether the object is a tensor table (everything except `classify`).
    pub fn is_tensor(&self) -> bool {
        *self != ObjectId::Classify
    }

    fn parse_tokens(tokens: &[&str], whole: &str) -> Result<ObjectId, GeometryError> {
        let unknown = || GeometryError::UnknownObject(whole.to_string());
        let kind = |t: &str| t.parse::<ConnectionKind>().map_err(|_| unknown());
        match tokens {
            [] => Err(unknown()),
            [head, rest @ ..] if *head == "hcov" || *head == "vcov" => {
                let (last, inner) = rest.split_last().ok_or_else(unknown)?;
                let inner = ObjectId::parse_tokens(inner, whole)?;
                if !inner.is_tensor() {
                    return Err(unknown());
                }
                let k = kind(last)?;
                Ok(if *head == "hcov" { ObjectId::HCov(Box::new(inner), k) } else { ObjectId::VCov(Box::new(inner), k) })
            }
            [head, rest @ ..] if matches!(*head, "R" | "P" | "S") => {
                let which = match *head {
                    "R" => CurvatureKind::H,
                    "P" => CurvatureKind::Hv,
                    _ => CurvatureKind::V,
                };
                let k = match rest {
                    [] => ConnectionKind::Cartan,
                    [k] => kind(k)?,
                    _ => return Err(unknown()),
                };
                if which == CurvatureKind::V && matches!(k, ConnectionKind::Berwald | ConnectionKind::Chern) {
                    return Err(GeometryError::UnsupportedObject(format!(
                        "{whole}: the v-curvature is defined for cartan and hashiguchi only"
                    )));
                }
                Ok(ObjectId::Curvature(which, k))
            }
            [name] => SIMPLE.iter().find(|(n, _)| n == name).map(|(_, id)| id.clone()).ok_or_else(unknown),
            _ => Err(unknown()),
        }
    }
}

impl FromStr for ObjectId {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let tokens: Vec<&str> = s.split(':').map(str::trim).collect();
        ObjectId::parse_tokens(&tokens, s)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectId::Curvature(which, kind) => write!(f, "{}:{}", which.symbol(), kind),
            ObjectId::HCov(inner, kind) => write!(f, "hcov:{inner}:{kind}"),
            ObjectId::VCov(inner, kind) => write!(f, "vcov:{inner}:{kind}"),
            simple => {
                let name = SIMPLE.iter().find(|(_, id)| id == simple).map(|(n, _)| *n).expect("simple id");
                f.write_str(name)
            }
        }
    }
}
