//! Smooth test functions with exact derivatives, and sup-norm estimation.

mod oracle;
mod sup_norm;

pub use oracle::{
    flat_polynomial, make_oracle, DerivativeOracle, DerivativeRange, FunctionKind, OracleParams, OracleSpec,
    FLAT_MAX_ORDER,
};
pub use sup_norm::{
    class_membership_fit, pringsheim_ratio, refine_sup_norms, sup_norms, uniform_grid, MembershipFit,
    PringsheimReport, SupNormEstimate, MEMBERSHIP_FIT_TOL,
};
