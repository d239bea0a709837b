//! Brute-force oracle over small matrix groups `GL_n(F_q)`, `SL_n(F_q)`:
//! double cosets, principal series and exact q-parameters.

pub mod cyclotomic;
mod field;
mod group;
mod induced;

pub use field::Field;
pub use group::{
    build_group, build_group_bounded, det, group_order, DoubleCoset, Family, FiniteMatrixGroup, Mat, Subgroup,
    DEFAULT_GROUP_BOUND,
};
pub use induced::{
    check_transfer, generating_set, induced_module, principal_series, q_parameter, InducedModule, QParameterResult,
    TorusCharacter, TransferReport,
};
