use crate::linalg::Matrix;
use crate::preprocess::{preprocess, ActivationMatrix, Preprocessing};

/// Number of stimuli in the counterexample fixture.
pub const FIG3A_STIMULI: usize = 6;

/// Three toy networks where `x` and `y` are mutually uncorrelated while `z`
/// contains the tuning curves of both.
///
/// Tuning curves are standard basis vectors of a six-stimulus space:
/// `x = (e1, e2, e3)`, `y = (e4, e5, e6)`, `z = (e1, …, e6)`. Curves have
/// unit length and are not mean-centered.
pub fn build_fig3a_networks() -> (ActivationMatrix, ActivationMatrix, ActivationMatrix) {
    let basis = |units: std::ops::Range<usize>| {
        let cols: Vec<usize> = units.collect();
        let m = Matrix::from_fn(FIG3A_STIMULI, cols.len(), |i, j| if i == cols[j] { 1.0 } else { 0.0 });
        preprocess(&ActivationMatrix::raw(m), Preprocessing::UnitColumnsUncentered)
            .expect("basis vectors have unit norm")
    };
    (basis(0..3), basis(3..6), basis(0..6))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure() {
        let (x, y, z) = build_fig3a_networks();
        assert_eq!((x.units(), y.units(), z.units()), (3, 3, 6));
        assert_eq!(x.data().t_matmul(y.data()).unwrap().max_abs(), 0.0);
        assert_eq!(x.data().t_matmul(x.data()).unwrap(), Matrix::identity(3));
        for k in 0..3 {
            assert_eq!(z.data().column(k), x.data().column(k));
            assert_eq!(z.data().column(k + 3), y.data().column(k));
        }
        assert_eq!(x.preprocessing(), Preprocessing::UnitColumnsUncentered);
    }
}
