//! Fock space levels: symmetrization operators, Gram matrices, positivity,
//! and braid quotients.
//!
//! Level `n` of the deformed Fock space over `E = C^N` is `E^(x n)` equipped
//! with the sesquilinear form `<s, t>_T = <s, P_n t>` in the orthonormal
//! monomial basis, where
//!
//! ```text
//! R_n = id + Ttilde^(1) + Ttilde^(1) Ttilde^(2) + ... + Ttilde^(1)...Ttilde^(n-1)
//! P_1 = id,    P_n = (id (x) P_(n-1)) R_n
//! ```
//!
//! so the level-`n` Gram matrix is `G_n = P_n`. For `||Ttilde|| <= 1` with
//! self-adjoint `Ttilde` the form is positive semidefinite (Bozejko-Speicher);
//! its kernel is what the quotient by a consistent braid removes. The braid
//! ideal at level `n` is `I_n = sum_i Im(place(id - B, i, n))`, computed here
//! as the range of the positive operator `sum_i place((id-B)(id-B)^+, i, n)`
//! so that one Hermitian eigendecomposition yields an orthonormal ideal basis
//! and an orthonormal complement at once.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::multilinear::{
    fingerprint, guarded_pow, hermitian_part, kron, max_modulus, place, CMatrix,
};
use crate::statistics_ops::{BraidOperator, TildeOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum OpKind {
    R,
    P,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    fingerprint: u64,
    dim: usize,
    level: usize,
    kind: OpKind,
}

struct CacheEntry {
    tilde: Arc<CMatrix>,
    value: Arc<CMatrix>,
}

const CACHE_CAP: usize = 64;

fn cache() -> &'static Mutex<HashMap<CacheKey, CacheEntry>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, CacheEntry>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Looks up a cached operator; a fingerprint hit counts only when the stored
/// tilde matrix is bitwise equal, so hash collisions cannot alias results.
fn cache_get(key: &CacheKey, tilde: &CMatrix) -> Option<Arc<CMatrix>> {
    let guard = cache().lock().expect("fock cache poisoned");
    guard.get(key).and_then(|entry| {
        if entry.tilde.as_ref() == tilde {
            Some(Arc::clone(&entry.value))
        } else {
            None
        }
    })
}

fn cache_put(key: CacheKey, tilde: Arc<CMatrix>, value: Arc<CMatrix>) {
    let mut guard = cache().lock().expect("fock cache poisoned");
    if guard.len() >= CACHE_CAP {
        guard.clear();
    }
    guard.insert(key, CacheEntry { tilde, value });
}

fn cached_r(tilde: &TildeOperator, n: usize) -> Result<Arc<CMatrix>> {
    let key = CacheKey { fingerprint: fingerprint(tilde.matrix()), dim: tilde.dim(), level: n, kind: OpKind::R };
    if let Some(hit) = cache_get(&key, tilde.matrix()) {
        return Ok(hit);
    }
    let dim = guarded_pow(tilde.dim(), n as u32)?;
    let value = if n <= 1 {
        Arc::new(CMatrix::identity(dim, dim))
    } else {
        // R_n = id + Ttilde^(1) (id (x) R_(n-1)).
        let prev = cached_r(tilde, n - 1)?;
        let shifted = kron(&CMatrix::identity(tilde.dim(), tilde.dim()), prev.as_ref())?;
        let t1 = place(tilde.matrix(), 1, n, tilde.dim())?;
        Arc::new(CMatrix::identity(dim, dim) + t1 * shifted)
    };
    cache_put(key, Arc::new(tilde.matrix().clone()), Arc::clone(&value));
    Ok(value)
}

fn cached_p(tilde: &TildeOperator, n: usize) -> Result<Arc<CMatrix>> {
    let key = CacheKey { fingerprint: fingerprint(tilde.matrix()), dim: tilde.dim(), level: n, kind: OpKind::P };
    if let Some(hit) = cache_get(&key, tilde.matrix()) {
        return Ok(hit);
    }
    let dim = guarded_pow(tilde.dim(), n as u32)?;
    let value = if n <= 1 {
        Arc::new(CMatrix::identity(dim, dim))
    } else {
        let prev = cached_p(tilde, n - 1)?;
        let block = kron(&CMatrix::identity(tilde.dim(), tilde.dim()), prev.as_ref())?;
        let r = cached_r(tilde, n)?;
        Arc::new(block * r.as_ref())
    };
    cache_put(key, Arc::new(tilde.matrix().clone()), Arc::clone(&value));
    Ok(value)
}

/// The symmetrization operator `R_n` on `(C^N)^(x n)`; `R_0` and `R_1` are
/// identities. Results are memoized per (tilde, n).
pub fn r_operator(tilde: &TildeOperator, n: usize) -> Result<CMatrix> {
    Ok(cached_r(tilde, n)?.as_ref().clone())
}

/// The full symmetrizer `P_n`, equal to the level-`n` Gram matrix in the
/// orthonormal monomial basis. Memoized per (tilde, n).
pub fn p_operator(tilde: &TildeOperator, n: usize) -> Result<CMatrix> {
    Ok(cached_p(tilde, n)?.as_ref().clone())
}

pub(crate) fn p_operator_arc(tilde: &TildeOperator, n: usize) -> Result<Arc<CMatrix>> {
    cached_p(tilde, n)
}

pub(crate) fn r_operator_arc(tilde: &TildeOperator, n: usize) -> Result<Arc<CMatrix>> {
    cached_r(tilde, n)
}

/// Level-`n` Gram matrix `G_n = P_n`.
pub fn gram(tilde: &TildeOperator, n: usize) -> Result<CMatrix> {
    p_operator(tilde, n)
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix,
/// accumulating the (real) rotations into the complex column basis `z`.
/// The classic EISPACK `tql2` routine; `d` holds the diagonal, `e` the
/// subdiagonal (`e[dim-1]` is scratch).
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut CMatrix) -> Result<()> {
    let n = d.len();
    let rows = z.nrows();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 50 {
                return Err(Error::Inconsistent(format!(
                    "eigensolver failed to converge on a {n}-dimensional block"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..rows {
                    let zi1 = z[(k, i + 1)];
                    let zi = z[(k, i)];
                    z[(k, i + 1)] = zi * s + zi1 * c;
                    z[(k, i)] = zi * c - zi1 * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match. The input is symmetrized first.
///
/// Householder tridiagonalization (nalgebra) followed by [`tql2`]:
/// nalgebra's own QR iteration emits NaN eigenvalues on strongly degenerate
/// spectra such as the fermion Gram matrices.
pub(crate) fn sorted_eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let dim = m.nrows();
    if dim == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let hermitian = hermitian_part(m);
    if dim == 1 {
        return Ok((vec![hermitian[(0, 0)].re], CMatrix::identity(1, 1)));
    }
    let (mut q, diag, off) = hermitian.symmetric_tridiagonalize().unpack();
    let mut d: Vec<f64> = diag.iter().copied().collect();
    let mut e: Vec<f64> = off.iter().copied().chain(std::iter::once(0.0)).collect();
    tql2(&mut d, &mut e, &mut q)?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        d[a].partial_cmp(&d[b]).expect("eigenvalue comparison").then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = CMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &q.column(src));
    }
    Ok((eigenvalues, vectors))
}

/// Positivity and kernel summary of one Fock level.
#[derive(Debug, Clone)]
pub struct FockLevel {
    pub level: usize,
    /// Ambient dimension `N^level`.
    pub dim: usize,
    pub gram: CMatrix,
    pub hermiticity_residual: f64,
    /// Eigenvalues of the Hermitian part, ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub kernel_dim: usize,
    /// Orthonormal basis of the numerical kernel, one column per vector.
    pub kernel_basis: CMatrix,
    pub positive_semidefinite: bool,
    pub positive_definite: bool,
}

/// Builds the level-`n` Gram matrix and summarizes its spectrum.
///
/// Fails with [`Error::Inconsistent`] when the Gram matrix is not Hermitian
/// within `tol` (relative to its magnitude): positivity talk is meaningless
/// for such input.
pub fn positivity_report(tilde: &TildeOperator, n: usize, tol: f64) -> Result<FockLevel> {
    let gram_arc = cached_p(tilde, n)?;
    let gram = gram_arc.as_ref();
    let scale = max_modulus(gram).max(1.0);
    let herm = crate::multilinear::hermiticity_residual(gram);
    if herm > tol * scale {
        return Err(Error::Inconsistent(format!(
            "level-{n} Gram matrix is not Hermitian: residual {herm:.3e} exceeds {:.3e}",
            tol * scale
        )));
    }
    let (eigenvalues, vectors) = sorted_eigh(gram)?;
    let dim = gram.nrows();
    let max_abs = eigenvalues.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let cut = tol * max_abs.max(1.0);
    let kernel_dim = eigenvalues.iter().filter(|&&x| x.abs() <= cut).count();
    let mut kernel_basis = CMatrix::zeros(dim, kernel_dim);
    let mut slot = 0;
    for (idx, &lambda) in eigenvalues.iter().enumerate() {
        if lambda.abs() <= cut {
            kernel_basis.set_column(slot, &vectors.column(idx));
            slot += 1;
        }
    }
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    let max_eigenvalue = eigenvalues.last().copied().unwrap_or(0.0);
    Ok(FockLevel {
        level: n,
        dim,
        gram: gram.clone(),
        hermiticity_residual: herm,
        min_eigenvalue,
        max_eigenvalue,
        kernel_dim,
        kernel_basis,
        positive_semidefinite: min_eigenvalue >= -cut,
        positive_definite: min_eigenvalue > cut,
        eigenvalues,
    })
}

/// Positivity reports for levels `0..=n_max`.
pub fn fock_levels(tilde: &TildeOperator, n_max: usize, tol: f64) -> Result<Vec<FockLevel>> {
    (0..=n_max).map(|n| positivity_report(tilde, n, tol)).collect()
}

/// Orthonormal bases splitting `(C^N)^(x n)` into braid ideal and complement.
#[derive(Debug, Clone)]
pub struct IdealComponent {
    pub level: usize,
    pub dim: usize,
    /// Orthonormal basis of `I_n = sum_i Im(place(id - B, i, n))`.
    pub ideal_basis: CMatrix,
    /// Orthonormal basis of the orthogonal complement of `I_n`.
    pub complement: CMatrix,
}

impl IdealComponent {
    pub fn ideal_dim(&self) -> usize {
        self.ideal_basis.ncols()
    }

    pub fn quotient_dim(&self) -> usize {
        self.complement.ncols()
    }
}

/// Computes the braid ideal and its orthogonal complement at level `n`.
///
/// The ideal is recovered as the span of eigenvectors of
/// `S = sum_i place(W, i, n)`, `W = (id-B)(id-B)^+`, with eigenvalue above
/// `tol * max(1, lambda_max)`; the remaining eigenvectors form the
/// complement. Both bases are orthonormal and deterministic.
pub fn ideal_component(b: &BraidOperator, n: usize, tol: f64) -> Result<IdealComponent> {
    let dim = guarded_pow(b.dim(), n as u32)?;
    if n < 2 {
        return Ok(IdealComponent {
            level: n,
            dim,
            ideal_basis: CMatrix::zeros(dim, 0),
            complement: CMatrix::identity(dim, dim),
        });
    }
    let n2 = b.dim() * b.dim();
    let id2 = CMatrix::identity(n2, n2);
    let one_minus_b = &id2 - b.matrix();
    let w = &one_minus_b * one_minus_b.adjoint();
    let mut s = CMatrix::zeros(dim, dim);
    for i in 1..n {
        s += place(&w, i, n, b.dim())?;
    }
    let (eigenvalues, vectors) = sorted_eigh(&s)?;
    let max_abs = eigenvalues.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let cut = tol * max_abs.max(1.0);
    let quotient_dim = eigenvalues.iter().filter(|&&x| x <= cut).count();
    let ideal_dim = dim - quotient_dim;
    // Ascending order puts the near-kernel (complement) eigenvectors first.
    let complement = vectors.columns(0, quotient_dim).into_owned();
    let ideal_basis = vectors.columns(quotient_dim, ideal_dim).into_owned();
    Ok(IdealComponent { level: n, dim, ideal_basis, complement })
}

/// Quotient data of one level: dimensions, induced Gram matrix, and the
/// well-definedness residual.
#[derive(Debug, Clone)]
pub struct QuotientLevel {
    pub level: usize,
    pub dim: usize,
    pub ideal_dim: usize,
    pub quotient_dim: usize,
    pub ideal_basis: CMatrix,
    pub complement: CMatrix,
    /// Gram matrix compressed to the complement, `Qc^+ G Qc`.
    pub induced_gram: CMatrix,
    /// Eigenvalues of the induced Gram matrix, ascending.
    pub induced_eigenvalues: Vec<f64>,
    /// `max_v ||G v||_inf` over ideal basis vectors: how far the deformed
    /// inner product is from vanishing on the ideal.
    pub gram_on_ideal: f64,
    /// True when the quotient inner product is well defined, i.e. the ideal
    /// sits inside the Gram kernel within tolerance.
    pub well_defined: bool,
}

/// Combines the level-`n` Gram matrix with the braid ideal: checks that the
/// ideal is null for the deformed inner product and compresses the Gram
/// matrix onto the complement.
pub fn quotient_structure(
    tilde: &TildeOperator,
    b: &BraidOperator,
    n: usize,
    tol: f64,
) -> Result<QuotientLevel> {
    if tilde.dim() != b.dim() {
        return Err(Error::InvalidArgument(format!(
            "quotient: leg dimensions differ ({} vs {})",
            tilde.dim(),
            b.dim()
        )));
    }
    let component = ideal_component(b, n, tol)?;
    let gram_arc = cached_p(tilde, n)?;
    let gram = gram_arc.as_ref();
    let scale = max_modulus(gram).max(1.0);

    let gram_on_ideal = if component.ideal_dim() == 0 {
        0.0
    } else {
        max_modulus(&(gram * &component.ideal_basis))
    };
    let induced_gram = component.complement.adjoint() * gram * &component.complement;
    let (induced_eigenvalues, _) = sorted_eigh(&induced_gram)?;
    Ok(QuotientLevel {
        level: n,
        dim: component.dim,
        ideal_dim: component.ideal_dim(),
        quotient_dim: component.quotient_dim(),
        well_defined: gram_on_ideal <= tol * scale,
        ideal_basis: component.ideal_basis,
        complement: component.complement,
        induced_gram,
        induced_eigenvalues,
        gram_on_ideal,
    })
}

/// Quotient reports for levels `0..=n_max`.
pub fn quotient_levels(
    tilde: &TildeOperator,
    b: &BraidOperator,
    n_max: usize,
    tol: f64,
) -> Result<Vec<QuotientLevel>> {
    (0..=n_max).map(|n| quotient_structure(tilde, b, n, tol)).collect()
}
