//! Process-wide registry of radical atoms `R^(1/q)`.
//!
//! An atom is identified by its index `q >= 2` and its canonical radicand.
//! Radicands only mention atoms registered earlier, so atom ids order the
//! atoms by nesting depth. Ids depend on creation order; nothing observable
//! (printing, equality of canonical forms within a process) depends on them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use crate::expr::Expr;
use crate::poly::VarId;
use crate::var::ATOM_OFFSET;

#[derive(Debug)]
pub(crate) struct AtomInfo {
    pub q: u32,
    pub radicand: Expr,
    /// Coordinate ids the radicand depends on, transitively through nested atoms.
    pub coord_vars: Vec<VarId>,
}

#[derive(Default)]
struct Registry {
    atoms: Vec<Arc<AtomInfo>>,
    index: HashMap<(u32, Expr), VarId>,
}

fn registry() -> &'static RwLock<Registry> {
    static REGISTRY: OnceLock<RwLock<Registry>> = OnceLock::new();
    REGISTRY.get_or_init(Default::default)
}

fn derivative_memo() -> &'static Mutex<HashMap<(VarId, VarId), Expr>> {
    static MEMO: OnceLock<Mutex<HashMap<(VarId, VarId), Expr>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Returns the id of the atom `radicand^(1/q)`, registering it if new.
pub(crate) fn intern(q: u32, radicand: Expr) -> VarId {
    let key = (q, radicand);
    if let Some(&id) = registry().read().expect("atom registry poisoned").index.get(&key) {
        return id;
    }
    let coord_vars = radicand_coord_vars(&key.1);
    let mut reg = registry().write().expect("atom registry poisoned");
    if let Some(&id) = reg.index.get(&key) {
        return id;
    }
    let id = ATOM_OFFSET + reg.atoms.len() as VarId;
    reg.atoms.push(Arc::new(AtomInfo { q: key.0, radicand: key.1.clone(), coord_vars }));
    reg.index.insert(key, id);
    id
}

fn radicand_coord_vars(e: &Expr) -> Vec<VarId> {
    let mut out = Vec::new();
    for v in e.raw_vars() {
        if crate::var::is_atom_id(v) {
            out.extend(info(v).coord_vars.iter().copied());
        } else {
            out.push(v);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub(crate) fn info(id: VarId) -> Arc<AtomInfo> {
    let reg = registry().read().expect("atom registry poisoned");
    reg.atoms[(id - ATOM_OFFSET) as usize].clone()
}

/// `d(atom)/d(v) = atom * R' / (q R)`, memoized.
pub(crate) fn derivative(id: VarId, v: VarId) -> Expr {
    if let Some(d) = derivative_memo().lock().expect("memo poisoned").get(&(id, v)) {
        return d.clone();
    }
    let a = info(id);
    let d = if a.coord_vars.binary_search(&v).is_err() {
        Expr::zero()
    } else {
        let dr = a.radicand.diff_id(v);
        let denom = a.radicand.mul(&Expr::from_int(a.q as i64));
        Expr::atom(id)
            .mul(&dr)
            .checked_div(&denom)
            .expect("radicand of a registered atom is nonzero")
    };
    derivative_memo().lock().expect("memo poisoned").insert((id, v), d.clone());
    d
}
