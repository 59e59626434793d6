//! Exact symbolic expressions over base coordinates `x^i` and fiber
//! coordinates `y^i`, extended by real radicals.
//!
//! Expressions are always held in a canonical form (see [`Expr`]), so equality
//! of canonical forms decides equality of expressions in the supported
//! fragment.

pub mod ast;
mod atom;
pub mod error;
pub mod eval;
pub mod expr;
pub mod gcd;
pub mod parse;
pub mod poly;
pub mod print;
pub mod var;

pub use ast::Node;
pub use error::ExprError;
pub use eval::{eval_at, eval_with_scale, is_zero, parse_constraints, Constraint, NumericPoint, Relation, Sampler, ZeroStatus, ZeroTest};
pub use expr::Expr;
pub use parse::{parse, parse_node, parse_with_names, substitute_named};
pub use print::{to_latex, to_text};
pub use var::{Coordinates, Var};
