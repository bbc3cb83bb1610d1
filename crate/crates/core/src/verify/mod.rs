//! Independent checks of the series machinery: tracked roots, integrality,
//! the power transform of two-term bases and the combinatorial identities
//! the closed form rests on.

mod consistency;
mod convergence;
mod identities;
mod integrality;
mod newton;
mod report;
mod transform;

pub use crate::branch::branch_pow;
pub use consistency::{
    check_closed_form_exact, check_closed_form_numeric, check_twoterm_consistency,
};
pub use convergence::{
    convergence_order_fit, fit_line, geometric_grid, TrackReport, TrackSample, MIN_SAMPLES,
};
pub use identities::{
    check_deriv_set, check_f_prod, check_f_prod_range, check_newton_series, check_nu,
    check_nu_range, check_vandermonde, deriv_set_sides, newton_series, nu_sides,
};
pub use integrality::{
    corrupt, integer_gammas, integrality_check, integrality_check_value, integrality_defect,
    integrality_sweep,
};
pub use newton::{newton_track, BaseEval, NewtonProblem, Root, HOMOTOPY_STEPS, MAX_ITERATIONS};
pub use report::{IdentityReport, Instance};
pub use transform::{
    standard_transform_cases, transform_check, transform_check_exact, transform_check_numeric,
    TransformCase,
};
