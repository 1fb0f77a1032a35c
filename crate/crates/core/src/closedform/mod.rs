mod cf;
mod elliptic;
mod forms;

pub use cf::{ClosedForm, ClosedFormTerm, Monomial};
pub use elliptic::{elliptic_expr_for, EllipticExpr, EllipticFamily, ExprKey};
pub use forms::{
    assembled_c_coefficients, berndt_closed_form, closed_form_at_pi, closed_form_cosh3, closed_form_cosh3_elliptic, formula_c_coefficients,
    CCoefficients,
};
