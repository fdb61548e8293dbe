//! The orthogonal group: Haar sampling, exponential, logarithm and
//! fractional powers of rotations.

use serde::{Deserialize, Serialize};

use super::decomp::{determinant, qr, symmetric_eigen, Lu};
use super::Matrix;
use crate::error::{Error, Result};
use crate::rng::{self, SeededRng};

/// Tolerance on `qᵀq = I` accepted by [`OrthogonalMatrix::new`].
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Tolerance on `det = +1` for special orthogonal matrices.
pub const DETERMINANT_TOL: f64 = 1e-8;
/// Rotation angles closer than this to π have no unambiguous real logarithm.
pub const PI_BRANCH_TOL: f64 = 1e-9;

/// A square matrix with orthonormal columns, together with its determinant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalMatrix {
    q: Matrix,
    det: f64,
}

impl OrthogonalMatrix {
    pub fn new(q: Matrix) -> Result<Self> {
        if !q.is_square() {
            return Err(Error::Dimension(format!("orthogonal matrix must be square, got {:?}", q.shape())));
        }
        let defect = q.t_matmul(&q)?.max_abs_diff(&Matrix::identity(q.rows()));
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::Numerical(format!("matrix is not orthogonal (|QᵀQ - I| = {defect:.3e})")));
        }
        let det = determinant(&q)?;
        Ok(Self { q, det })
    }

    /// Like [`new`](Self::new) but additionally requires `det = +1`.
    pub fn special(q: Matrix) -> Result<Self> {
        let o = Self::new(q)?;
        if (o.det - 1.0).abs() > DETERMINANT_TOL {
            return Err(Error::Numerical(format!("determinant {} is not +1", o.det)));
        }
        Ok(o)
    }

    pub fn identity(n: usize) -> Self {
        Self { q: Matrix::identity(n), det: 1.0 }
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`
    /// (so `x · P` reorders columns as `(x·P)[:, perm[j]] = x[:, j]`).
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut q = Matrix::zeros(n, n);
        let mut seen = vec![false; n];
        for (j, &p) in perm.iter().enumerate() {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
            q[(j, p)] = 1.0;
        }
        Self::new(q)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.q
    }

    pub fn into_matrix(self) -> Matrix {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    pub fn determinant(&self) -> f64 {
        self.det
    }

    pub fn is_special(&self) -> bool {
        (self.det - 1.0).abs() <= DETERMINANT_TOL
    }

    pub fn transpose(&self) -> Self {
        Self { q: self.q.transpose(), det: self.det }
    }

    pub fn compose(&self, other: &OrthogonalMatrix) -> Result<Self> {
        Ok(Self { q: self.q.matmul(&other.q)?, det: self.det * other.det })
    }
}

/// Haar-distributed rotation in SO(n) from a fresh generator seeded with `seed`.
pub fn sample_haar_special_orthogonal(n: usize, seed: u64) -> Result<OrthogonalMatrix> {
    sample_haar_special_orthogonal_with(n, &mut rng::seeded(seed))
}

/// Haar-distributed rotation in SO(n).
///
/// QR of an i.i.d. standard normal matrix with the signs of `diag(R)`
/// absorbed into `Q` gives a Haar sample on O(n); flipping the last column
/// when the determinant is −1 maps it onto SO(n).
pub fn sample_haar_special_orthogonal_with(n: usize, rng: &mut SeededRng) -> Result<OrthogonalMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("rotation dimension must be at least 1".into()));
    }
    let g = rng::standard_normal_matrix(n, n, rng);
    let (mut q, r) = qr(&g);
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    let det = determinant(&q)?;
    if det < 0.0 {
        for i in 0..n {
            q[(i, n - 1)] = -q[(i, n - 1)];
        }
    }
    OrthogonalMatrix::special(q)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring around a degree-13 Padé
/// approximant.
pub fn matrix_exp(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("exp needs a square matrix, got {:?}", a.shape())));
    }
    if !a.is_finite() {
        return Err(Error::Numerical("exp input has non-finite entries".into()));
    }
    let n = a.rows();
    let norm = a.norm_one();
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.scale(0.5f64.powi(squarings));

    let b = &PADE13;
    let ident = Matrix::identity(n);
    let a2 = a.matmul(&a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;
    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| -> Matrix {
        Matrix::from_fn(n, n, |i, j| {
            c6 * a6[(i, j)] + c4 * a4[(i, j)] + c2 * a2[(i, j)] + c0 * ident[(i, j)]
        })
    };
    let u_inner = a6.matmul(&lin(b[13], b[11], b[9], 0.0))?.add(&lin(b[7], b[5], b[3], b[1]))?;
    let u = a.matmul(&u_inner)?;
    let v = a6.matmul(&lin(b[12], b[10], b[8], 0.0))?.add(&lin(b[6], b[4], b[2], b[0]))?;

    let mut r = Lu::new(&v.sub(&u)?)?.solve(&v.add(&u)?)?;
    for _ in 0..squarings {
        r = r.matmul(&r)?;
    }
    Ok(r)
}

/// Principal real logarithm of a rotation: a skew-symmetric `A` with
/// `exp(A) = q` and every rotation angle in (−π, π).
///
/// With `S = (Q + Qᵀ)/2` and `K = (Q − Qᵀ)/2`, normality of `Q` makes `S`
/// and `K` commute; on each invariant plane `S` acts as `cos θ` and `K` as
/// `sin θ` times a quarter turn, so `log Q = K · g(S)` with `g = θ / sin θ`.
pub fn so_log(q: &OrthogonalMatrix) -> Result<Matrix> {
    if !q.is_special() {
        return Err(Error::InvalidArgument(format!(
            "logarithm requires det = +1, got {}",
            q.determinant()
        )));
    }
    let m = q.matrix();
    let n = m.rows();
    let mt = m.transpose();
    let s = m.add(&mt)?.scale(0.5);
    let k = m.sub(&mt)?.scale(0.5);
    let (cosines, w) = symmetric_eigen(&s)?;

    let kw = k.matmul(&w)?;
    let mut gains = Vec::with_capacity(n);
    for (j, &c) in cosines.iter().enumerate() {
        let sin = (0..n).map(|i| kw[(i, j)] * kw[(i, j)]).sum::<f64>().sqrt();
        let theta = sin.atan2(c);
        if std::f64::consts::PI - theta < PI_BRANCH_TOL {
            return Err(Error::BranchAmbiguity { tolerance: PI_BRANCH_TOL });
        }
        let gain = if sin < 1e-8 { 1.0 + theta * theta / 6.0 } else { theta / sin };
        gains.push(gain);
    }
    let g = Matrix::from_fn(n, n, |i, j| (0..n).map(|l| w[(i, l)] * gains[l] * w[(j, l)]).sum());
    let a = k.matmul(&g)?;
    Ok(a.sub(&a.transpose())?.scale(0.5))
}

/// `q^alpha = exp(alpha · log q)`, the point a fraction `alpha` of the way
/// from the identity to `q` along the one-parameter subgroup through `q`.
pub fn fractional_orthogonal_power(q: &OrthogonalMatrix, alpha: f64) -> Result<OrthogonalMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(OrthogonalMatrix::identity(q.dim()));
    }
    if alpha == 1.0 {
        return Ok(q.clone());
    }
    let log = so_log(q)?;
    OrthogonalMatrix::special(matrix_exp(&log.scale(alpha))?)
}

/// 2×2 rotation by `theta` radians.
pub fn plane_rotation(theta: f64) -> OrthogonalMatrix {
    let (s, c) = theta.sin_cos();
    OrthogonalMatrix {
        q: Matrix::from_rows(&[[c, -s], [s, c]]).expect("finite"),
        det: 1.0,
    }
}
