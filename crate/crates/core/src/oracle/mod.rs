//! Dense reference machinery for desk-scale problems.

pub mod dense;
pub mod kron;
pub mod report;
pub mod transfer;

pub use dense::{closed_loop_matrices, dense_nare_solve, dense_residual, CompositeSpectralMatrix, DenseNareSolution};
pub use kron::{kron_generalized_sylvester, kron_sylvester_solve, KRON_CAP};
pub use report::{
    multiset_distance, spectral_identity, verify_report, verify_report_with_oracle, Check, CheckStatus, Overall,
    VerificationReport,
};
pub use transfer::{reduced_transfer_eval, resolvent_solve, transfer_eval};
