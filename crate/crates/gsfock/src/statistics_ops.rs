//! Cross operators, braid operators, and their structural checks.
//!
//! A cross operator `T : E* (x) E -> E (x) E*` on `E = C^N` is stored through
//! its coefficients `T(x*^i (x) x^j) = sum_kl T^{ij}_{kl} x^k (x) x*^l`, laid
//! out as the `N^2 x N^2` matrix with `T^{ij}_{kl}` at row `k*N + l`, column
//! `i*N + j`. The derived operator `Ttilde : E (x) E -> E (x) E` has entries
//! `(Ttilde)^{ij}_{kl} = T^{ki}_{lj}` and drives the Fock construction. A
//! braid operator `B` acts on `E (x) E` and, when present, must satisfy the
//! braid relation and the two consistency conditions
//!
//! ```text
//! B^(1) Ttilde^(2) Ttilde^(1) = Ttilde^(2) Ttilde^(1) B^(2)
//! (id + Ttilde)(id - B) = 0
//! ```
//!
//! Every check reports an entrywise max-modulus residual and passes when the
//! residual stays below the tolerance scaled by `max(1, input magnitude)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multilinear::{
    self, adjoint, guarded_pow, max_modulus, max_modulus_diff, min_singular_value, operator_norm,
    place, CMatrix,
};

/// Validates that `matrix` is the `N^2 x N^2` square for leg dimension `dim`.
fn check_two_leg(dim: usize, matrix: &CMatrix, what: &str) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument(format!("{what}: leg dimension must be positive")));
    }
    let n2 = guarded_pow(dim, 2)?;
    if matrix.nrows() != n2 || matrix.ncols() != n2 {
        return Err(Error::InvalidArgument(format!(
            "{what}: expected a {n2}x{n2} matrix for leg dimension {dim}, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    Ok(())
}

/// Cross operator `T : E* (x) E -> E (x) E*`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossOperator {
    dim: usize,
    matrix: CMatrix,
}

impl CrossOperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        check_two_leg(dim, &matrix, "cross operator")?;
        Ok(Self { dim, matrix })
    }

    /// One-particle dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Coefficient `T^{ij}_{kl}`.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.matrix[(k * self.dim + l, i * self.dim + j)]
    }
}

/// The operator `Ttilde : E (x) E -> E (x) E` derived from a cross operator.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeOperator {
    dim: usize,
    matrix: CMatrix,
}

impl TildeOperator {
    /// Wraps an explicit two-leg matrix as a tilde operator.
    pub fn from_matrix(dim: usize, matrix: CMatrix) -> Result<Self> {
        check_two_leg(dim, &matrix, "tilde operator")?;
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Coefficient `(Ttilde)^{ij}_{kl}`.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.matrix[(k * self.dim + l, i * self.dim + j)]
    }
}

/// Braid operator `B` on `E (x) E`.
#[derive(Debug, Clone, PartialEq)]
pub struct BraidOperator {
    dim: usize,
    matrix: CMatrix,
}

impl BraidOperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        check_two_leg(dim, &matrix, "braid operator")?;
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `sigma_max / sigma_min`, infinite for singular braids.
    pub fn condition_number(&self) -> f64 {
        let smin = min_singular_value(&self.matrix);
        if smin == 0.0 {
            f64::INFINITY
        } else {
            operator_norm(&self.matrix) / smin
        }
    }
}

/// Evaluation pairing `g : E* (x) E -> C`, `g(x*^i (x) x^j) = delta^i_j`.
#[derive(Debug, Clone, Copy)]
pub struct Pairing {
    dim: usize,
}

impl Pairing {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The pairing as a `1 x N^2` row.
    pub fn row(&self) -> CMatrix {
        let mut g = CMatrix::zeros(1, self.dim * self.dim);
        for i in 0..self.dim {
            g[(0, i * self.dim + i)] = Complex64::new(1.0, 0.0);
        }
        g
    }
}

/// Builds `Ttilde` from `T` by the index relabeling `(Ttilde)^{ij}_{kl} = T^{ki}_{lj}`.
///
/// The relabeling permutes matrix entries, so Frobenius norm and max entry
/// modulus are always preserved; the operator norm is preserved on the
/// twisted-flip families but not for arbitrary `T`. Applying `tilde` four
/// times is the identity; twice is the identity on flip-symmetric operators.
pub fn tilde(t: &CrossOperator) -> TildeOperator {
    let n = t.dim;
    let mut m = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    m[(k * n + l, i * n + j)] = t.matrix[(l * n + j, k * n + i)];
                }
            }
        }
    }
    TildeOperator { dim: n, matrix: m }
}

/// Threshold for a residual check: `tol` relative to the largest input scale.
fn threshold(tol: f64, scale: f64) -> f64 {
    tol * scale.max(1.0)
}

/// Structural summary of a cross operator: hermiticity and invertibility.
#[derive(Debug, Clone)]
pub struct CrossStructure {
    pub hermiticity_residual: f64,
    pub hermitian: bool,
    pub min_singular_value: f64,
    pub invertible: bool,
    pub operator_norm: f64,
}

/// Checks hermiticity and invertibility of `T`. Both are expected for a
/// physical statistics but are reported as warnings, not hard failures.
pub fn check_cross_structure(t: &CrossOperator, tol: f64) -> CrossStructure {
    let herm = multilinear::hermiticity_residual(&t.matrix);
    let smin = min_singular_value(&t.matrix);
    let norm = operator_norm(&t.matrix);
    CrossStructure {
        hermiticity_residual: herm,
        hermitian: herm <= threshold(tol, norm),
        min_singular_value: smin,
        invertible: smin > tol,
        operator_norm: norm,
    }
}

/// Result of the norm bound `||Ttilde|| <= 1` required by the
/// Bozejko-Speicher positivity theorem.
#[derive(Debug, Clone)]
pub struct NormBound {
    pub norm: f64,
    pub within_unit_ball: bool,
}

pub fn check_norm_bound(tilde: &TildeOperator, tol: f64) -> NormBound {
    let norm = operator_norm(&tilde.matrix);
    NormBound { norm, within_unit_ball: norm <= 1.0 + tol }
}

/// Outcome of a residual check.
#[derive(Debug, Clone)]
pub struct ResidualCheck {
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn residual_check(residual: f64, tol: f64, scale: f64) -> ResidualCheck {
    let threshold = threshold(tol, scale);
    ResidualCheck { residual, threshold, pass: residual <= threshold }
}

/// Yang-Baxter residual `||A^(1) A^(2) A^(1) - A^(2) A^(1) A^(1)(2)||` for a
/// two-leg operator on three legs, `A^(i) = place(A, i, 3)`.
pub fn check_yang_baxter(a: &CMatrix, leg_dim: usize, tol: f64) -> Result<ResidualCheck> {
    check_two_leg(leg_dim, a, "yang-baxter operand")?;
    let a1 = place(a, 1, 3, leg_dim)?;
    let a2 = place(a, 2, 3, leg_dim)?;
    let lhs = &a1 * &a2 * &a1;
    let rhs = &a2 * &a1 * &a2;
    let scale = max_modulus(a).powi(3);
    Ok(residual_check(max_modulus_diff(&lhs, &rhs), tol, scale))
}

/// Braid relation `B^(1) B^(2) B^(1) = B^(2) B^(1) B^(2)`; the Yang-Baxter
/// relation specialized to the braid operator.
pub fn check_braid_relation(b: &BraidOperator, tol: f64) -> Result<ResidualCheck> {
    check_yang_baxter(&b.matrix, b.dim, tol)
}

/// Residuals of the two consistency conditions tying `Ttilde` to `B`.
#[derive(Debug, Clone)]
pub struct ConsistencyCheck {
    pub mixed_yang_baxter: ResidualCheck,
    pub projector: ResidualCheck,
    pub pass: bool,
}

/// Checks `B^(1) Ttilde^(2) Ttilde^(1) = Ttilde^(2) Ttilde^(1) B^(2)` on three
/// legs and `(id + Ttilde)(id - B) = 0` on two.
pub fn check_consistency(
    tilde: &TildeOperator,
    b: &BraidOperator,
    tol: f64,
) -> Result<ConsistencyCheck> {
    if tilde.dim != b.dim {
        return Err(Error::InvalidArgument(format!(
            "consistency check: leg dimensions differ ({} vs {})",
            tilde.dim, b.dim
        )));
    }
    let n = tilde.dim;
    let t1 = place(&tilde.matrix, 1, 3, n)?;
    let t2 = place(&tilde.matrix, 2, 3, n)?;
    let b1 = place(&b.matrix, 1, 3, n)?;
    let b2 = place(&b.matrix, 2, 3, n)?;
    let mixed_lhs = &b1 * &t2 * &t1;
    let mixed_rhs = &t2 * &t1 * &b2;
    let mixed_scale = max_modulus(&b.matrix) * max_modulus(&tilde.matrix).powi(2);
    let mixed = residual_check(max_modulus_diff(&mixed_lhs, &mixed_rhs), tol, mixed_scale);

    let n2 = n * n;
    let id = CMatrix::identity(n2, n2);
    let proj = (&id + &tilde.matrix) * (&id - &b.matrix);
    let proj_scale = (1.0 + max_modulus(&tilde.matrix)) * (1.0 + max_modulus(&b.matrix));
    let projector = residual_check(max_modulus(&proj), tol, proj_scale);

    let pass = mixed.pass && projector.pass;
    Ok(ConsistencyCheck { mixed_yang_baxter: mixed, projector, pass })
}

/// Hermiticity residual of a braid candidate's unitarity `B B^+ = id`;
/// informational, used by reports for warnings only.
pub fn unitarity_residual(b: &BraidOperator) -> f64 {
    let n2 = b.dim * b.dim;
    let id = CMatrix::identity(n2, n2);
    max_modulus_diff(&(&b.matrix * adjoint(&b.matrix)), &id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::flip_matrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn flip_cross(n: usize) -> CrossOperator {
        CrossOperator::new(n, flip_matrix(n)).unwrap()
    }

    #[test]
    fn tilde_entry_formula_matches_index_oracle() {
        // Independent oracle: read entries through the typed accessors and
        // compare against the definition (Ttilde)^{ij}_{kl} = T^{ki}_{lj}.
        let n = 3;
        let mut m = CMatrix::zeros(9, 9);
        for (idx, z) in m.iter_mut().enumerate() {
            *z = c(idx as f64, (idx % 4) as f64 - 1.5);
        }
        let t = CrossOperator::new(n, m).unwrap();
        let tt = tilde(&t);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        assert_eq!(tt.entry(i, j, k, l), t.entry(k, i, l, j));
                    }
                }
            }
        }
    }

    #[test]
    fn tilde_of_flip_is_flip() {
        for n in 1..=4 {
            let t = flip_cross(n);
            assert_eq!(tilde(&t).matrix, flip_matrix(n));
        }
    }

    #[test]
    fn tilde_is_involutive_on_twisted_flips() {
        // Twisted flip: T^{ij}_{kl} = phi_{ij} delta^j_k delta^i_l.
        let n = 2;
        let phis = [c(1.0, 0.0), c(-0.5, 0.5), c(0.25, -1.0), c(0.0, 1.0)];
        let mut m = CMatrix::zeros(4, 4);
        for i in 0..n {
            for j in 0..n {
                m[(j * n + i, i * n + j)] = phis[i * n + j];
            }
        }
        let t = CrossOperator::new(n, m).unwrap();
        let back = tilde(&CrossOperator::new(n, tilde(&t).matrix.clone()).unwrap());
        assert_eq!(back.matrix, t.matrix.clone());
    }

    #[test]
    fn tilde_has_order_four_and_permutes_entries() {
        let n = 2;
        let mut m = CMatrix::zeros(4, 4);
        for (idx, z) in m.iter_mut().enumerate() {
            *z = c((idx as f64).sin(), (idx as f64).cos());
        }
        let t0 = CrossOperator::new(n, m.clone()).unwrap();
        let mut cur = t0.clone();
        for _ in 0..4 {
            cur = CrossOperator::new(n, tilde(&cur).matrix.clone()).unwrap();
        }
        assert_eq!(cur.matrix, m);

        let tt = tilde(&t0);
        let mut orig: Vec<u64> = m.iter().map(|z| z.re.to_bits() ^ z.im.to_bits()).collect();
        let mut relabeled: Vec<u64> =
            tt.matrix.iter().map(|z| z.re.to_bits() ^ z.im.to_bits()).collect();
        orig.sort_unstable();
        relabeled.sort_unstable();
        assert_eq!(orig, relabeled);
        assert_eq!(m.norm(), tt.matrix.norm());
        assert_eq!(max_modulus(&m), max_modulus(&tt.matrix));
    }

    #[test]
    fn pairing_row_contracts_matching_letters() {
        let g = Pairing::new(3).row();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(g[(0, i * 3 + j)].re, want);
            }
        }
    }

    #[test]
    fn yang_baxter_passes_for_flip_and_scaled_flip() {
        for n in 2..=3 {
            let tau = flip_matrix(n);
            assert!(check_yang_baxter(&tau, n, 1e-12).unwrap().pass);
            let q_tau = tau.scale(0.5);
            assert!(check_yang_baxter(&q_tau, n, 1e-12).unwrap().pass);
        }
    }

    #[test]
    fn yang_baxter_rejects_perturbed_flip() {
        let mut pert = flip_matrix(2);
        pert[(1, 1)] += c(0.1, 0.0);
        let check = check_yang_baxter(&pert, 2, 1e-10).unwrap();
        assert!(!check.pass);
        assert!(check.residual > 1e-3, "residual {}", check.residual);
    }

    #[test]
    fn braid_relation_for_signed_flip() {
        let minus_tau = flip_matrix(2).scale(-1.0);
        let b = BraidOperator::new(2, minus_tau).unwrap();
        assert!(check_braid_relation(&b, 1e-12).unwrap().pass);
        assert!((b.condition_number() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn consistency_holds_for_boson_pair() {
        let t = flip_cross(2);
        let b = BraidOperator::new(2, flip_matrix(2)).unwrap();
        let check = check_consistency(&tilde(&t), &b, 1e-12).unwrap();
        assert!(check.pass);
        assert!(check.mixed_yang_baxter.residual <= 1e-14);
        assert!(check.projector.residual <= 1e-14);
    }

    #[test]
    fn consistency_projector_fails_for_quon_with_flip_braid() {
        // (id + q tau)(id - tau) = (1 - q)(id - tau): residual 1 - q.
        let q = 0.5;
        let t = CrossOperator::new(2, flip_matrix(2).scale(q)).unwrap();
        let b = BraidOperator::new(2, flip_matrix(2)).unwrap();
        let check = check_consistency(&tilde(&t), &b, 1e-10).unwrap();
        assert!(check.mixed_yang_baxter.pass);
        assert!(!check.projector.pass);
        assert!((check.projector.residual - (1.0 - q)).abs() < 1e-14);
    }

    #[test]
    fn consistency_trivial_for_zero_cross_with_identity_braid() {
        let t = CrossOperator::new(2, CMatrix::zeros(4, 4)).unwrap();
        let b = BraidOperator::new(2, CMatrix::identity(4, 4)).unwrap();
        let check = check_consistency(&tilde(&t), &b, 1e-12).unwrap();
        assert!(check.pass);
    }

    #[test]
    fn norm_bound_accepts_contractions_and_rejects_expansions() {
        let t = TildeOperator::from_matrix(2, flip_matrix(2).scale(0.9)).unwrap();
        assert!(check_norm_bound(&t, 1e-10).within_unit_ball);
        assert!((check_norm_bound(&t, 1e-10).norm - 0.9).abs() < 1e-12);
        let t = TildeOperator::from_matrix(2, flip_matrix(2).scale(1.5)).unwrap();
        assert!(!check_norm_bound(&t, 1e-10).within_unit_ball);
    }

    #[test]
    fn cross_structure_flags_non_hermitian_and_singular() {
        let mut m = flip_matrix(2);
        m[(0, 1)] = c(0.0, 0.3);
        let t = CrossOperator::new(2, m).unwrap();
        let s = check_cross_structure(&t, 1e-10);
        assert!(!s.hermitian);
        assert!(s.invertible);

        let zero = CrossOperator::new(2, CMatrix::zeros(4, 4)).unwrap();
        let s = check_cross_structure(&zero, 1e-10);
        assert!(s.hermitian);
        assert!(!s.invertible);
    }
}
