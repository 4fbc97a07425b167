//! Dense Hermitian eigendecomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, in the order of `values`.
    pub vectors: DMatrix<Complex64>,
}

/// Diagonalizes a Hermitian matrix. Only the lower triangle is trusted.
pub fn hermitian_eigen(matrix: &DMatrix<Complex64>) -> HermitianEigen {
    assert!(matrix.is_square(), "hermitian_eigen needs a square matrix");
    let n = matrix.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let eig = matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Largest entry of `|V†V − I|`.
pub fn orthonormality_error(vectors: &DMatrix<Complex64>) -> f64 {
    let gram = vectors.adjoint() * vectors;
    let mut worst = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_y_spectrum() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let e = hermitian_eigen(&m);
        assert_relative_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(e.values[1], 1.0, epsilon = 1e-14);
        assert!(orthonormality_error(&e.vectors) < 1e-14);
    }

    #[test]
    fn reconstructs_random_hermitian() {
        // deterministic pseudo-random fill
        let n = 40;
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let raw = DMatrix::from_fn(n, n, |_, _| c(next(), next()));
        let h = &raw + raw.adjoint();
        let e = hermitian_eigen(&h);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(orthonormality_error(&e.vectors) < 1e-11);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            e.values.iter().map(|&v| c(v, 0.0)),
        ));
        let back = &e.vectors * d * e.vectors.adjoint();
        assert!((back - h).iter().all(|z| z.norm() < 1e-11));
    }

    #[test]
    fn empty_matrix() {
        let e = hermitian_eigen(&DMatrix::zeros(0, 0));
        assert!(e.values.is_empty());
    }
}
