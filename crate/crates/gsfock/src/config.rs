//! Run configuration: the JSON schema consumed by the `gsfock` binary.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "nmax": 4,
//!   "tolerance": 1e-10,
//!   "statistics": {
//!     "family": "quon",
//!     "q": 0.5
//!   }
//! }
//! ```
//!
//! Families: `boltzmann`, `boson`, `fermion`, `quon` (needs `q`), `color`
//! (needs `group`, a list of cyclic factor orders, and `degrees`, one group
//! element per letter; optional `epsilon` table overrides the standard
//! bicharacter), and `custom` (needs `cross`, an `N^2 x N^2` row-major
//! matrix). Complex entries are written `[re, im]`; bare numbers are taken
//! as real. Any family may carry an explicit `"braid"` matrix; presets with
//! a canonical braid (boson, fermion, color) use theirs unless overridden.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multilinear::{fingerprint, CMatrix};
use crate::statistics_ops::BraidOperator;
use crate::statistics_zoo::{
    family_boltzmann, family_boson, family_color, family_fermion, family_quon, load_custom,
    AbelianGroup, Bicharacter, Grading, StatisticsSpec,
};

/// Largest `dimension^nmax` accepted at parse time; the engine applies its
/// own dense-dimension guard on top.
pub const MAX_TOP_LEVEL_DIM: usize = 65536;

fn default_nmax() -> usize {
    4
}

fn default_tolerance() -> f64 {
    1e-10
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ComplexEntry {
    Real(f64),
    Pair(f64, f64),
}

impl ComplexEntry {
    fn value(&self) -> Complex64 {
        match *self {
            ComplexEntry::Real(re) => Complex64::new(re, 0.0),
            ComplexEntry::Pair(re, im) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DegreeEntry {
    Scalar(u32),
    Tuple(Vec<u32>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStatistics {
    family: String,
    q: Option<f64>,
    group: Option<Vec<u32>>,
    degrees: Option<Vec<DegreeEntry>>,
    epsilon: Option<Vec<Vec<ComplexEntry>>>,
    cross: Option<Vec<Vec<ComplexEntry>>>,
    braid: Option<Vec<Vec<ComplexEntry>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dimension: usize,
    #[serde(default = "default_nmax")]
    nmax: usize,
    #[serde(default = "default_tolerance")]
    tolerance: f64,
    statistics: RawStatistics,
}

/// Validated statistics selection.
#[derive(Debug, Clone)]
pub enum FamilyConfig {
    Boltzmann,
    Boson,
    Fermion,
    Quon { q: f64 },
    Color { group: AbelianGroup, degrees: Vec<usize>, epsilon: Option<Vec<Complex64>> },
    Custom { cross: CMatrix },
}

impl FamilyConfig {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyConfig::Boltzmann => "boltzmann",
            FamilyConfig::Boson => "boson",
            FamilyConfig::Fermion => "fermion",
            FamilyConfig::Quon { .. } => "quon",
            FamilyConfig::Color { .. } => "color",
            FamilyConfig::Custom { .. } => "custom",
        }
    }
}

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dimension: usize,
    pub n_max: usize,
    pub tolerance: f64,
    pub family: FamilyConfig,
    /// Explicit braid matrix, overriding any preset braid.
    pub braid_override: Option<CMatrix>,
}

/// Scalar echo of the configuration, embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub dimension: usize,
    pub nmax: usize,
    pub tolerance: f64,
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub group: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degrees: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cross_fingerprint: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub braid_fingerprint: Option<String>,
}

/// The statistics built from a configuration, with the color machinery kept
/// alongside when applicable.
#[derive(Debug, Clone)]
pub struct BuiltStatistics {
    pub spec: StatisticsSpec,
    pub bicharacter: Option<Bicharacter>,
    pub grading: Option<Grading>,
    pub echo: ConfigEcho,
}

fn matrix_from_rows(rows: &[Vec<ComplexEntry>], side: usize, what: &str) -> Result<CMatrix> {
    if rows.len() != side {
        return Err(Error::Config(format!(
            "{what}: expected {side} rows, got {}",
            rows.len()
        )));
    }
    let mut m = CMatrix::zeros(side, side);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != side {
            return Err(Error::Config(format!(
                "{what}: row {r} has {} entries, expected {side}",
                row.len()
            )));
        }
        for (c, entry) in row.iter().enumerate() {
            let z = entry.value();
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Config(format!("{what}: entry ({r}, {c}) is not finite")));
            }
            m[(r, c)] = z;
        }
    }
    Ok(m)
}

fn forbid(field: Option<&str>, family: &str) -> Result<()> {
    if let Some(name) = field {
        return Err(Error::Config(format!(
            "field \"{name}\" is not accepted by family \"{family}\""
        )));
    }
    Ok(())
}

/// Parses and validates a configuration from JSON text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    if raw.dimension < 1 || raw.dimension > 6 {
        return Err(Error::Config(format!(
            "dimension must be between 1 and 6, got {}",
            raw.dimension
        )));
    }
    if raw.nmax < 1 || raw.nmax > 8 {
        return Err(Error::Config(format!("nmax must be between 1 and 8, got {}", raw.nmax)));
    }
    let top = raw.dimension.checked_pow(raw.nmax as u32).unwrap_or(usize::MAX);
    if top > MAX_TOP_LEVEL_DIM {
        return Err(Error::Config(format!(
            "dimension^nmax = {top} exceeds the supported maximum {MAX_TOP_LEVEL_DIM}"
        )));
    }
    if !raw.tolerance.is_finite() || raw.tolerance <= 0.0 {
        return Err(Error::Config("tolerance must be a positive finite number".into()));
    }

    let stats = &raw.statistics;
    let n2 = raw.dimension * raw.dimension;
    let family = match stats.family.as_str() {
        "boltzmann" | "boson" | "fermion" => {
            forbid(stats.q.map(|_| "q"), &stats.family)?;
            forbid(stats.group.as_ref().map(|_| "group"), &stats.family)?;
            forbid(stats.degrees.as_ref().map(|_| "degrees"), &stats.family)?;
            forbid(stats.epsilon.as_ref().map(|_| "epsilon"), &stats.family)?;
            forbid(stats.cross.as_ref().map(|_| "cross"), &stats.family)?;
            match stats.family.as_str() {
                "boltzmann" => FamilyConfig::Boltzmann,
                "boson" => FamilyConfig::Boson,
                _ => FamilyConfig::Fermion,
            }
        }
        "quon" => {
            forbid(stats.group.as_ref().map(|_| "group"), "quon")?;
            forbid(stats.degrees.as_ref().map(|_| "degrees"), "quon")?;
            forbid(stats.epsilon.as_ref().map(|_| "epsilon"), "quon")?;
            forbid(stats.cross.as_ref().map(|_| "cross"), "quon")?;
            let q = stats.q.ok_or_else(|| Error::Config("family \"quon\" needs \"q\"".into()))?;
            if !q.is_finite() {
                return Err(Error::Config("q must be finite".into()));
            }
            FamilyConfig::Quon { q }
        }
        "color" => {
            forbid(stats.q.map(|_| "q"), "color")?;
            forbid(stats.cross.as_ref().map(|_| "cross"), "color")?;
            let factors = stats
                .group
                .clone()
                .ok_or_else(|| Error::Config("family \"color\" needs \"group\"".into()))?;
            let group = AbelianGroup::new(factors).map_err(|e| Error::Config(e.to_string()))?;
            let entries = stats
                .degrees
                .as_ref()
                .ok_or_else(|| Error::Config("family \"color\" needs \"degrees\"".into()))?;
            if entries.len() != raw.dimension {
                return Err(Error::Config(format!(
                    "degrees has {} entries, expected dimension {}",
                    entries.len(),
                    raw.dimension
                )));
            }
            let degrees: Vec<usize> = entries
                .iter()
                .map(|entry| match entry {
                    DegreeEntry::Scalar(v) => {
                        if group.factors().len() == 1 {
                            group.index_of(&[*v])
                        } else {
                            Err(Error::InvalidArgument(format!(
                                "degree {v} is scalar but the group has {} factors",
                                group.factors().len()
                            )))
                        }
                    }
                    DegreeEntry::Tuple(coords) => group.index_of(coords),
                })
                .collect::<Result<_>>()
                .map_err(|e| Error::Config(e.to_string()))?;
            let epsilon = match &stats.epsilon {
                None => None,
                Some(rows) => {
                    let order = group.order();
                    if rows.len() != order {
                        return Err(Error::Config(format!(
                            "epsilon: expected {order} rows, got {}",
                            rows.len()
                        )));
                    }
                    let mut flat = Vec::with_capacity(order * order);
                    for (r, row) in rows.iter().enumerate() {
                        if row.len() != order {
                            return Err(Error::Config(format!(
                                "epsilon: row {r} has {} entries, expected {order}",
                                row.len()
                            )));
                        }
                        for (c, entry) in row.iter().enumerate() {
                            let z = entry.value();
                            if !z.re.is_finite() || !z.im.is_finite() {
                                return Err(Error::Config(format!(
                                    "epsilon: entry ({r}, {c}) is not finite"
                                )));
                            }
                            flat.push(z);
                        }
                    }
                    Some(flat)
                }
            };
            FamilyConfig::Color { group, degrees, epsilon }
        }
        "custom" => {
            forbid(stats.q.map(|_| "q"), "custom")?;
            forbid(stats.group.as_ref().map(|_| "group"), "custom")?;
            forbid(stats.degrees.as_ref().map(|_| "degrees"), "custom")?;
            forbid(stats.epsilon.as_ref().map(|_| "epsilon"), "custom")?;
            let rows = stats
                .cross
                .as_ref()
                .ok_or_else(|| Error::Config("family \"custom\" needs \"cross\"".into()))?;
            FamilyConfig::Custom { cross: matrix_from_rows(rows, n2, "cross")? }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown family \"{other}\" (expected boltzmann, boson, fermion, quon, color, custom)"
            )));
        }
    };

    let braid_override = match &stats.braid {
        None => None,
        Some(rows) => Some(matrix_from_rows(rows, n2, "braid")?),
    };

    Ok(RunConfig {
        dimension: raw.dimension,
        n_max: raw.nmax,
        tolerance: raw.tolerance,
        family,
        braid_override,
    })
}

/// Reads and parses a configuration file.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Builds the statistics a configuration describes.
pub fn build_statistics(config: &RunConfig) -> Result<BuiltStatistics> {
    let mut bicharacter = None;
    let mut grading = None;
    let mut spec = match &config.family {
        FamilyConfig::Boltzmann => family_boltzmann(config.dimension)?,
        FamilyConfig::Boson => family_boson(config.dimension)?,
        FamilyConfig::Fermion => family_fermion(config.dimension)?,
        FamilyConfig::Quon { q } => family_quon(config.dimension, *q)?,
        FamilyConfig::Color { group, degrees, epsilon } => {
            let eps = match epsilon {
                None => Bicharacter::standard(group.clone()),
                Some(table) => Bicharacter::from_table(group.clone(), table.clone())
                    .map_err(|e| Error::Config(e.to_string()))?,
            };
            let grad = Grading::new(group, degrees.clone()).map_err(|e| Error::Config(e.to_string()))?;
            let spec = family_color(&eps, &grad)?;
            bicharacter = Some(eps);
            grading = Some(grad);
            spec
        }
        FamilyConfig::Custom { cross } => load_custom(config.dimension, cross.clone(), None)?,
    };
    if let Some(braid) = &config.braid_override {
        spec.braid = Some(BraidOperator::new(config.dimension, braid.clone())?);
    }

    let (group, degrees) = match &config.family {
        FamilyConfig::Color { group, degrees, .. } => {
            (Some(group.factors().to_vec()), Some(degrees.clone()))
        }
        _ => (None, None),
    };
    let cross_fingerprint = match &config.family {
        FamilyConfig::Custom { cross } => Some(format!("{:016x}", fingerprint(cross))),
        _ => None,
    };
    let braid_fingerprint =
        config.braid_override.as_ref().map(|b| format!("{:016x}", fingerprint(b)));
    let echo = ConfigEcho {
        dimension: config.dimension,
        nmax: config.n_max,
        tolerance: config.tolerance,
        family: config.family.name().to_string(),
        q: match &config.family {
            FamilyConfig::Quon { q } => Some(*q),
            _ => None,
        },
        group,
        degrees,
        cross_fingerprint,
        braid_fingerprint,
    };
    Ok(BuiltStatistics { spec, bicharacter, grading, echo })
}
