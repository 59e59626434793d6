//! Coordinate variables and their names.

use std::collections::HashSet;

use crate::error::ExprError;
use crate::poly::VarId;

pub(crate) const FIBER_OFFSET: VarId = 1 << 12;
pub(crate) const ATOM_OFFSET: VarId = 1 << 13;

/// A base coordinate `x^i` or a fiber coordinate `y^i` (0-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Base(usize),
    Fiber(usize),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::Base(i) | Var::Fiber(i) => i,
        }
    }

    pub fn is_fiber(self) -> bool {
        matches!(self, Var::Fiber(_))
    }

    pub(crate) fn id(self) -> VarId {
        match self {
            Var::Base(i) => i as VarId,
            Var::Fiber(i) => FIBER_OFFSET + i as VarId,
        }
    }

    pub(crate) fn from_id(id: VarId) -> Option<Var> {
        if id < FIBER_OFFSET {
            Some(Var::Base(id as usize))
        } else if id < ATOM_OFFSET {
            Some(Var::Fiber((id - FIBER_OFFSET) as usize))
        } else {
            None
        }
    }
}

pub(crate) fn is_atom_id(id: VarId) -> bool {
    id >= ATOM_OFFSET
}

/// Names of the `n` base and `n` fiber coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    base: Vec<String>,
    fiber: Vec<String>,
}

impl Coordinates {
    /// Default names `x1..xn`, `y1..yn`.
    pub fn standard(dim: usize) -> Self {
        Coordinates {
            base: (1..=dim).map(|i| format!("x{i}")).collect(),
            fiber: (1..=dim).map(|i| format!("y{i}")).collect(),
        }
    }

    pub fn new<S: AsRef<str>>(base: &[S], fiber: &[S]) -> Result<Self, ExprError> {
        if base.len() != fiber.len() {
            return Err(ExprError::InvalidCoordinates(format!(
                "{} base names but {} fiber names",
                base.len(),
                fiber.len()
            )));
        }
        if base.is_empty() {
            return Err(ExprError::InvalidCoordinates("no coordinates".into()));
        }
        let mut seen = HashSet::new();
        for name in base.iter().chain(fiber.iter()) {
            let name = name.as_ref();
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || name == "sqrt" {
                return Err(ExprError::InvalidCoordinates(format!("invalid name `{name}`")));
            }
            if !seen.insert(name.to_string()) {
                return Err(ExprError::InvalidCoordinates(format!("duplicate name `{name}`")));
            }
        }
        Ok(Coordinates {
            base: base.iter().map(|s| s.as_ref().to_string()).collect(),
            fiber: fiber.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn fiber_names(&self) -> &[String] {
        &self.fiber
    }

    pub fn name(&self, v: Var) -> &str {
        match v {
            Var::Base(i) => &self.base[i],
            Var::Fiber(i) => &self.fiber[i],
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        if let Some(i) = self.base.iter().position(|n| n == name) {
            return Some(Var::Base(i));
        }
        self.fiber.iter().position(|n| n == name).map(Var::Fiber)
    }

    pub fn contains(&self, v: Var) -> bool {
        v.index() < self.dim()
    }

    /// Name used for index labels (the base coordinate name), e.g. `x1`.
    pub fn index_label(&self, i: usize) -> &str {
        &self.base[i]
    }
}
