//! Dense real linear algebra used by every metric.

mod decomp;
mod matrix;
mod rotation;
mod svd;

pub use decomp::{determinant, qr, symmetric_eigen, Cholesky, Lu};
pub use matrix::Matrix;
pub use rotation::{
    fractional_orthogonal_power, matrix_exp, plane_rotation, sample_haar_special_orthogonal,
    sample_haar_special_orthogonal_with, so_log, OrthogonalMatrix, DETERMINANT_TOL,
    ORTHOGONALITY_TOL, PI_BRANCH_TOL,
};
pub use svd::{nuclear_norm, svd, SvdResult, JACOBI_TOL, MAX_SWEEPS};
