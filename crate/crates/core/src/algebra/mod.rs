//! Graded Lie conformal algebras, their modules, and axiom audits.

mod audit;
mod guard;
mod json;
mod report;
mod spec;

pub use audit::{audit_jacobi, audit_module, audit_skew, skew_image};

pub use json::parse_param_value;
pub use guard::{Atom, Cmp, Guard, Lin};
pub use report::{CheckEntry, Locus, Report, Status};
pub use spec::{
    lambda_bracket, n_products, AlgebraSpec, Branch, Bracket, Element, ModuleSpec, ParamValue,
    PiecewiseRule, Support,
};
