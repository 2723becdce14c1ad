//! Verification suites built on the kernels, diagrams and quadrature.

pub mod appendix;
pub mod eigen;
pub mod kernels;
pub mod measure;
pub mod operators;
pub mod rules;

pub use eigen::{exchange_symmetry, psi_a_scaling, psi_b_eigenvalue, EigenCheck, EigenDraw};
pub use appendix::{a1_chain_value, a1_printed_value, r1_projection_check, ProjectionDraw, ProjectionReport};
pub use measure::{measure_agreement, random_point, MeasureDraw};
pub use kernels::{baxter_difference, baxter_natural, intertwining, kernel_binding, kernel_of, KernelCheck, KERNEL_TOL};
pub use operators::{hkk_check, stop_check, twoform_check, OperatorCheck};
pub use rules::{check_case, check_rule, rule_case, RuleCase, RuleCheck, RuleKind};
