//! Built-in field theories and their verification report.

mod builtin;
mod params;
mod roster;
mod theory;
mod verify;

pub use builtin::{
    builtin, chern_simons, free_scalar, gravitation, maxwell, minkowski, su2_constants, yang_mills,
    BUILTIN_NAMES,
};
pub use params::{ParamKind, ParamTensor};
pub use roster::{FieldDecl, Role, Roster, RosterError};
pub use theory::TheoryModel;
pub use verify::{verify_model, CheckResult, ModelReport, Outcome, Status};
