//! Linear stability theory of the MoC schemes.

pub mod amplification;
pub mod closed_form;
pub mod lf_scan;
pub mod matrices;
pub mod modes;

pub use amplification::{
    assemble_amplification_matrix, assemble_amplification_matrix_with_bc, stack_state, von_neumann_factors,
    AmplificationMatrix, DENSE_MAX_M,
};
pub use closed_form::{rho_hat_power, se_lambda_predictions, z_roots, RhoHatPower, SeLambdaPrediction};
pub use lf_scan::{lf_alpha_scan, lf_betas, lf_first_order_matrix, lf_phi, lf_xi, LfPhi, LfScan};
pub use matrices::{assemble_gamma_omega, euler_parts, SchemeMatrices};
pub use modes::{
    characteristic_poly, mode_matrix, phi_matrix, rho_of_lambda, xi_eigenvector, xi_perturbative, Branch, LogDet,
    ModeSolution, PERTURBATIVE_GUARD,
};
