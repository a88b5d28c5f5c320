//! Preset statistics families and the bicharacter machinery behind them.
//!
//! A *color statistics* is built from a finite abelian group `G`, a grading
//! `| . | : {0, .., N-1} -> G` of the one-particle basis, and a bicharacter
//! `eps : G x G -> C*`:
//!
//! ```text
//! T^{ij}_{kl} = eps(|j|, |i|) delta^j_k delta^i_l      (twisted flip)
//! B^{ij}_{kl} = eps(|i|, |j|) delta^j_k delta^i_l
//! ```
//!
//! Bosons are the trivial-group case, fermions the Z2 case with every letter
//! odd, anyons on Z_k interpolate phases. Boltzmann statistics has `T = 0`
//! (free Fock space, no exchange), and quons scale the flip by `q` without
//! imposing any braid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multilinear::{flip_matrix, CMatrix};
use crate::statistics_ops::{BraidOperator, CrossOperator};

/// Largest supported group order for bicharacter tables.
pub const MAX_GROUP_ORDER: usize = 64;

/// A finite abelian group presented as a product of cyclic factors
/// `Z_(k1) x ... x Z_(km)`. Elements are tuples, one residue per factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<u32>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "abelian group needs at least one cyclic factor (use [1] for the trivial group)"
                    .into(),
            ));
        }
        if factors.iter().any(|&k| k == 0) {
            return Err(Error::InvalidArgument("cyclic factor orders must be positive".into()));
        }
        let order: usize = factors.iter().map(|&k| k as usize).product();
        if order > MAX_GROUP_ORDER {
            return Err(Error::InvalidArgument(format!(
                "group order {order} exceeds the supported maximum {MAX_GROUP_ORDER}"
            )));
        }
        Ok(Self { factors })
    }

    pub fn trivial() -> Self {
        Self { factors: vec![1] }
    }

    pub fn cyclic(k: u32) -> Result<Self> {
        Self::new(vec![k])
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().map(|&k| k as usize).product()
    }

    /// The element with the given mixed-radix index, leftmost factor most
    /// significant.
    pub fn element(&self, mut index: usize) -> Vec<u32> {
        let mut e = vec![0u32; self.factors.len()];
        for (slot, &k) in e.iter_mut().zip(&self.factors).rev() {
            *slot = (index % k as usize) as u32;
            index /= k as usize;
        }
        e
    }

    pub fn index_of(&self, element: &[u32]) -> Result<usize> {
        if element.len() != self.factors.len() {
            return Err(Error::InvalidArgument(format!(
                "element has {} coordinates, group has {} factors",
                element.len(),
                self.factors.len()
            )));
        }
        let mut index = 0usize;
        for (&coord, &k) in element.iter().zip(&self.factors) {
            if coord >= k {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {coord} out of range for Z_{k}"
                )));
            }
            index = index * k as usize + coord as usize;
        }
        Ok(index)
    }

    /// Sum of two elements given by index.
    pub fn add(&self, a: usize, b: usize) -> usize {
        let ea = self.element(a);
        let eb = self.element(b);
        let sum: Vec<u32> =
            ea.iter().zip(&eb).zip(&self.factors).map(|((&x, &y), &k)| (x + y) % k).collect();
        self.index_of(&sum).expect("sum of valid elements is valid")
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }
}

/// `exp(2 pi i num/den)` with quarter turns returned exactly.
fn unit_root(num: u64, den: u64) -> Complex64 {
    if num == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * num == den {
        Complex64::new(-1.0, 0.0)
    } else if 4 * num == den {
        Complex64::new(0.0, 1.0)
    } else if 4 * num == 3 * den {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * num as f64 / den as f64)
    }
}

/// A map `eps : G x G -> C*` stored as a full table over element indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Bicharacter {
    group: AbelianGroup,
    /// Row-major `order x order`; entry `(a, b)` is `eps(a, b)`.
    table: Vec<Complex64>,
}

impl Bicharacter {
    /// Builds the table from a closure on group elements.
    pub fn from_fn(
        group: AbelianGroup,
        eps: impl Fn(&[u32], &[u32]) -> Complex64,
    ) -> Self {
        let order = group.order();
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            let ea = group.element(a);
            for b in 0..order {
                let eb = group.element(b);
                table.push(eps(&ea, &eb));
            }
        }
        Self { group, table }
    }

    /// Builds the table from explicit row-major values.
    pub fn from_table(group: AbelianGroup, table: Vec<Complex64>) -> Result<Self> {
        let order = group.order();
        if table.len() != order * order {
            return Err(Error::InvalidArgument(format!(
                "bicharacter table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        Ok(Self { group, table })
    }

    /// `eps = 1` identically.
    pub fn trivial(group: AbelianGroup) -> Self {
        Self::from_fn(group, |_, _| Complex64::new(1.0, 0.0))
    }

    /// The standard pairing `eps(a, b) = exp(2 pi i sum_t a_t b_t / k_t)`;
    /// on Z_2 this is the sign `(-1)^(ab)`. The phase is accumulated as an
    /// exact fraction of a turn so that quarter-turn values come out exactly
    /// as `1, i, -1, -i`.
    pub fn standard(group: AbelianGroup) -> Self {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        let factors = group.factors().to_vec();
        let den: u64 = factors.iter().fold(1u64, |acc, &k| {
            let k = u64::from(k);
            acc / gcd(acc, k) * k
        });
        Self::from_fn(group, move |a, b| {
            let num: u64 = a
                .iter()
                .zip(b)
                .zip(&factors)
                .map(|((&x, &y), &k)| {
                    let k = u64::from(k);
                    u64::from(x) * u64::from(y) % k * (den / k)
                })
                .sum::<u64>()
                % den;
            unit_root(num, den)
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// `eps(a, b)` by element index.
    pub fn eval(&self, a: usize, b: usize) -> Complex64 {
        self.table[a * self.group.order() + b]
    }
}

/// Outcome of checking the bicharacter laws.
#[derive(Debug, Clone)]
pub struct BicharacterCheck {
    /// Residual of multiplicativity in both arguments over all triples.
    pub multiplicativity_residual: f64,
    pub multiplicative: bool,
    /// Residual of the symmetry law `eps(a,b) eps(b,a) = 1` over all pairs.
    pub symmetry_residual: f64,
    pub symmetric: bool,
}

/// Checks `eps(a+b, c) = eps(a,c) eps(b,c)`, `eps(a, b+c) = eps(a,b) eps(a,c)`
/// for all triples and `eps(a,b) eps(b,a) = 1` for all pairs. Symmetry is
/// what makes the color Gram matrices Hermitian; a multiplicative but
/// non-symmetric table (such as the standard pairing on Z_3) is reported as
/// `{multiplicative: true, symmetric: false}`.
pub fn check_bicharacter(eps: &Bicharacter, tol: f64) -> BicharacterCheck {
    let order = eps.group.order();
    let mut mult: f64 = 0.0;
    for a in 0..order {
        for b in 0..order {
            for c in 0..order {
                let left = eps.eval(eps.group.add(a, b), c);
                let right = eps.eval(a, c) * eps.eval(b, c);
                mult = mult.max((left - right).norm());
                let left = eps.eval(a, eps.group.add(b, c));
                let right = eps.eval(a, b) * eps.eval(a, c);
                mult = mult.max((left - right).norm());
            }
        }
    }
    let mut symm: f64 = 0.0;
    for a in 0..order {
        for b in 0..order {
            symm = symm.max((eps.eval(a, b) * eps.eval(b, a) - Complex64::new(1.0, 0.0)).norm());
        }
    }
    BicharacterCheck {
        multiplicativity_residual: mult,
        multiplicative: mult <= tol,
        symmetry_residual: symm,
        symmetric: symm <= tol,
    }
}

/// Assignment of a group degree to each basis letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    /// Degree of letter `i`, as a group element index.
    degrees: Vec<usize>,
}

impl Grading {
    pub fn new(group: &AbelianGroup, degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidArgument("grading needs at least one letter".into()));
        }
        let order = group.order();
        if let Some(&bad) = degrees.iter().find(|&&d| d >= order) {
            return Err(Error::InvalidArgument(format!(
                "degree index {bad} out of range for group of order {order}"
            )));
        }
        Ok(Self { degrees })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Degree of letter `i` as a group element index.
    pub fn degree(&self, letter: usize) -> usize {
        self.degrees[letter]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }
}

/// A named statistics: one-particle dimension, cross operator, optional
/// braid, and the deformation parameter when one exists.
#[derive(Debug, Clone)]
pub struct StatisticsSpec {
    pub name: String,
    pub dim: usize,
    pub cross: CrossOperator,
    pub braid: Option<BraidOperator>,
    pub q: Option<f64>,
}

/// Boltzmann (infinite) statistics: `T = 0`, free Fock space, no braid.
pub fn family_boltzmann(dim: usize) -> Result<StatisticsSpec> {
    let n2 = dim * dim;
    Ok(StatisticsSpec {
        name: "boltzmann".into(),
        dim,
        cross: CrossOperator::new(dim, CMatrix::zeros(n2, n2))?,
        braid: None,
        q: None,
    })
}

/// Bosons: trivial group color statistics, `T = B = tau`.
pub fn family_boson(dim: usize) -> Result<StatisticsSpec> {
    let eps = Bicharacter::trivial(AbelianGroup::trivial());
    let grading = Grading::new(eps.group(), vec![0; dim])?;
    let mut spec = family_color(&eps, &grading)?;
    spec.name = "boson".into();
    Ok(spec)
}

/// Fermions: Z_2 color statistics with every letter odd, `T = B = -tau`.
pub fn family_fermion(dim: usize) -> Result<StatisticsSpec> {
    let eps = Bicharacter::standard(AbelianGroup::cyclic(2)?);
    let grading = Grading::new(eps.group(), vec![1; dim])?;
    let mut spec = family_color(&eps, &grading)?;
    spec.name = "fermion".into();
    Ok(spec)
}

/// Quons: `T = q tau`, interpolating Boltzmann (q=0), bosons (q=1) and
/// fermions (q=-1). No braid is imposed; the Fock space stays unquotiented.
pub fn family_quon(dim: usize, q: f64) -> Result<StatisticsSpec> {
    if !q.is_finite() {
        return Err(Error::InvalidArgument("quon parameter must be finite".into()));
    }
    Ok(StatisticsSpec {
        name: "quon".into(),
        dim,
        cross: CrossOperator::new(dim, flip_matrix(dim).scale(q))?,
        braid: None,
        q: Some(q),
    })
}

/// Color statistics from a bicharacter and a grading:
/// `T^{ij}_{kl} = eps(|j|, |i|) delta^j_k delta^i_l`,
/// `B^{ij}_{kl} = eps(|i|, |j|) delta^j_k delta^i_l`.
pub fn family_color(eps: &Bicharacter, grading: &Grading) -> Result<StatisticsSpec> {
    let dim = grading.dim();
    let order = eps.group().order();
    if let Some(&bad) = grading.degrees().iter().find(|&&d| d >= order) {
        return Err(Error::InvalidArgument(format!(
            "grading degree {bad} out of range for group of order {order}"
        )));
    }
    let n2 = dim * dim;
    let mut t = CMatrix::zeros(n2, n2);
    let mut b = CMatrix::zeros(n2, n2);
    for i in 0..dim {
        for j in 0..dim {
            let di = grading.degree(i);
            let dj = grading.degree(j);
            t[(j * dim + i, i * dim + j)] = eps.eval(dj, di);
            b[(j * dim + i, i * dim + j)] = eps.eval(di, dj);
        }
    }
    Ok(StatisticsSpec {
        name: "color".into(),
        dim,
        cross: CrossOperator::new(dim, t)?,
        braid: Some(BraidOperator::new(dim, b)?),
        q: None,
    })
}

/// A custom statistics from explicit matrices.
pub fn load_custom(
    dim: usize,
    cross: CMatrix,
    braid: Option<CMatrix>,
) -> Result<StatisticsSpec> {
    Ok(StatisticsSpec {
        name: "custom".into(),
        dim,
        cross: CrossOperator::new(dim, cross)?,
        braid: braid.map(|m| BraidOperator::new(dim, m)).transpose()?,
        q: None,
    })
}
