//! Consumers of prepared states: moment-based energies, VQE, QCELS phase
//! extraction and the excited-state M matrix.

mod moments;
mod qcels;
mod sceom;
mod vqe;

pub use moments::{cmx2, cumulants, qcm4, CumulantSet, EIGENSTATE_VARIANCE};
pub use qcels::{hadamard_test_series, qcels_estimate, qcels_series, tau_bound, QcelsSeries};
pub use sceom::{sceom_energies, sceom_m_matrix, ElementReport, MMatrix, SceomOptions};
pub use vqe::{vqe_minimize, VqeOptions, VqeResult};
