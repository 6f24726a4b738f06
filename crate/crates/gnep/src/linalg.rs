//! Small dense helpers on `f64` slices.

use nalgebra::{DMatrix, SymmetricEigen};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|v| v.is_finite())
}

/// Dense row-major matrix-vector product.
pub fn matvec(m: &[f64], rows: usize, cols: usize, x: &[f64]) -> Vec<f64> {
    (0..rows).map(|i| dot(&m[i * cols..(i + 1) * cols], x)).collect()
}

/// Largest singular value of a dense row-major matrix.
pub fn spectral_norm(m: &[f64], rows: usize, cols: usize) -> f64 {
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let mat = DMatrix::from_row_slice(rows, cols, m);
    // Gram matrix of the smaller side keeps the eigenproblem tiny.
    let gram = if rows <= cols {
        &mat * mat.transpose()
    } else {
        mat.transpose() * &mat
    };
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v)).max(0.0).sqrt()
}

/// Eigenvalues of the symmetric part of a square row-major matrix.
pub fn sym_eigenvalues(m: &[f64], n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let mat = DMatrix::from_row_slice(n, n, m);
    let sym = (&mat + mat.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().copied().collect()
}
