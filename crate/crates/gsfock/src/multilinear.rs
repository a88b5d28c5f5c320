//! Dense multilinear algebra on tensor powers of C^N.
//!
//! Tensor legs are ordered left to right with the leftmost leg most
//! significant: the basis vector `e_{i1} (x) ... (x) e_{in}` of `(C^N)^(x n)`
//! has flat index `i1*N^(n-1) + i2*N^(n-2) + ... + in`. Matrices are
//! output-index by row, input-index by column throughout.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the working representation for every operator.
pub type CMatrix = DMatrix<Complex64>;

/// Largest dense dimension the crate will allocate. Operators on `(C^N)^(x n)`
/// have `N^n` rows; beyond this the quadratic storage is no longer reasonable.
pub const MAX_DENSE_DIM: usize = 8192;

/// Checks a dense dimension against [`MAX_DENSE_DIM`].
pub fn guard_dim(dim: usize) -> Result<()> {
    if dim > MAX_DENSE_DIM {
        Err(Error::SizeLimit { dim, max: MAX_DENSE_DIM })
    } else {
        Ok(())
    }
}

/// `N^n` with the same size guard applied to the result.
pub fn guarded_pow(n: usize, exp: u32) -> Result<usize> {
    let dim = n
        .checked_pow(exp)
        .ok_or(Error::SizeLimit { dim: usize::MAX, max: MAX_DENSE_DIM })?;
    guard_dim(dim)?;
    Ok(dim)
}

/// Kronecker product, leftmost factor most significant.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    guard_dim(a.nrows().saturating_mul(b.nrows()))?;
    guard_dim(a.ncols().saturating_mul(b.ncols()))?;
    Ok(a.kronecker(b))
}

/// Identity on `(C^N)^(x k)`.
pub fn identity_pow(n: usize, k: usize) -> Result<CMatrix> {
    let dim = guarded_pow(n, k as u32)?;
    Ok(CMatrix::identity(dim, dim))
}

/// Embeds a two-leg operator `a` (an `N^2 x N^2` matrix) as
/// `id^(x (i-1)) (x) a (x) id^(x (n-1-i))` acting on legs `i, i+1` of
/// `(C^N)^(x n)`. Positions are 1-based and require `1 <= i <= n-1`.
pub fn place(a: &CMatrix, i: usize, n: usize, leg_dim: usize) -> Result<CMatrix> {
    let n2 = leg_dim * leg_dim;
    if a.nrows() != n2 || a.ncols() != n2 {
        return Err(Error::InvalidArgument(format!(
            "place expects a {n2}x{n2} two-leg operator, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if i == 0 || n < 2 || i > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "place position must satisfy 1 <= i <= n-1, got i={i}, n={n}"
        )));
    }
    let left = identity_pow(leg_dim, i - 1)?;
    let right = identity_pow(leg_dim, n - 1 - i)?;
    kron(&kron(&left, a)?, &right)
}

/// Conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// Hermitian part `(a + a^+)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// Smallest singular value.
pub fn min_singular_value(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().min()
}

/// Entrywise max modulus; the residual norm used by every check.
pub fn max_modulus(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max_modulus(a - b)`.
pub fn max_modulus_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Deviation from hermiticity, `max_modulus(a - a^+)`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    max_modulus_diff(a, &a.adjoint())
}

/// The flip `tau(x (x) y) = y (x) x` on `C^N (x) C^N`.
pub fn flip_matrix(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m[(j * n + i, i * n + j)] = Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// Standard basis column vector.
pub fn basis_vector(dim: usize, index: usize) -> CMatrix {
    let mut v = CMatrix::zeros(dim, 1);
    v[(index, 0)] = Complex64::new(1.0, 0.0);
    v
}

/// Flat index of the word `letters` over an alphabet of size `n`,
/// leftmost letter most significant.
pub fn flat_index(letters: &[usize], n: usize) -> usize {
    letters.iter().fold(0, |acc, &l| {
        debug_assert!(l < n);
        acc * n + l
    })
}

/// Inverse of [`flat_index`]: the length-`len` word with the given flat index.
pub fn letters_from_flat(mut flat: usize, len: usize, n: usize) -> Vec<usize> {
    let mut letters = vec![0; len];
    for slot in letters.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    letters
}

/// All words of length `len` over `{0, .., n-1}` in flat-index order.
pub fn all_words(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(len as u32);
    (0..total).map(move |flat| letters_from_flat(flat, len, n))
}

/// Order-independent fingerprint of exact entry bit patterns, used as a
/// memoization key. Equal fingerprints are only trusted together with equal
/// shapes and bitwise-equal entries.
pub fn fingerprint(a: &CMatrix) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    a.nrows().hash(&mut h);
    a.ncols().hash(&mut h);
    for z in a.iter() {
        z.re.to_bits().hash(&mut h);
        z.im.to_bits().hash(&mut h);
    }
    h.finish()
}
