//! Assembles verification sections into a [`Report`] for each CLI mode.
//!
//! Check names are stable identifiers: structural checks carry fixed names
//! (`tilde_yang_baxter`, `consistency_projector`, ...), per-level checks are
//! suffixed `_L{n}`. Error-severity checks decide the verdict; warnings are
//! informational.

use crate::config::{build_statistics, BuiltStatistics, RunConfig};
use crate::error::{Error, Result};
use crate::fock_space;
use crate::multilinear::{hermiticity_residual, max_modulus, min_singular_value, CMatrix};
use crate::report::{
    Check, ConventionReport, LevelReport, NumberReport, OperatorReport, QuotientReport, Report,
    Severity,
};
use crate::statistics_ops::{
    check_braid_relation, check_consistency, check_cross_structure, check_norm_bound,
    check_yang_baxter, tilde, unitarity_residual, BraidOperator, TildeOperator,
};
use crate::statistics_zoo::check_bicharacter;
use crate::wick_ops::{
    number_operator_spectra, number_operator_spectra_quotient, verify_adjointness_of,
    verify_brel_of, verify_crel_of, NumberSpectrum, QuotientRepresentation, WickRepresentation,
};

/// Flags shared by the gram/fock/report modes.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Highest Fock level to analyze; defaults to `nmax`.
    pub level: Option<usize>,
    /// Attach the top analyzed level's Gram matrix to the report.
    pub emit_matrix: bool,
    /// Keep going past failed structural checks in `fock` mode.
    pub allow_inconsistent: bool,
}

fn structural_checks(
    built: &BuiltStatistics,
    tilde_op: &TildeOperator,
    tol: f64,
    checks: &mut Vec<Check>,
    warnings: &mut Vec<String>,
) -> Result<()> {
    let t = &built.spec.cross;
    let cs = check_cross_structure(t, tol);
    checks.push(Check::status(
        "cross_hermitian",
        cs.hermiticity_residual,
        tol * cs.operator_norm.max(1.0),
        cs.hermitian,
        Severity::Warning,
    ));
    checks.push(Check::status(
        "cross_invertible",
        cs.min_singular_value,
        tol,
        cs.invertible,
        Severity::Warning,
    ));

    let nb = check_norm_bound(tilde_op, tol);
    checks.push(Check::status(
        "tilde_norm_bound",
        nb.norm,
        1.0 + tol,
        nb.within_unit_ball,
        Severity::Warning,
    ));

    let yb = check_yang_baxter(tilde_op.matrix(), tilde_op.dim(), tol)?;
    checks.push(Check::status("tilde_yang_baxter", yb.residual, yb.threshold, yb.pass, Severity::Error));

    match &built.spec.braid {
        Some(b) => {
            let br = check_braid_relation(b, tol)?;
            checks.push(Check::status("braid_relation", br.residual, br.threshold, br.pass, Severity::Error));
            let smin = min_singular_value(b.matrix());
            checks.push(Check::status("braid_invertible", smin, tol, smin > tol, Severity::Warning));
            let unitary = unitarity_residual(b);
            let uscale = max_modulus(b.matrix()).powi(2).max(1.0);
            checks.push(Check::status(
                "braid_unitary",
                unitary,
                tol * uscale,
                unitary <= tol * uscale,
                Severity::Warning,
            ));
            let cons = check_consistency(tilde_op, b, tol)?;
            checks.push(Check::status(
                "consistency_mixed_yang_baxter",
                cons.mixed_yang_baxter.residual,
                cons.mixed_yang_baxter.threshold,
                cons.mixed_yang_baxter.pass,
                Severity::Error,
            ));
            checks.push(Check::status(
                "consistency_projector",
                cons.projector.residual,
                cons.projector.threshold,
                cons.projector.pass,
                Severity::Error,
            ));
        }
        None => warnings.push(
            "no braid operator configured; consistency and quotient sections skipped".into(),
        ),
    }

    if let Some(eps) = &built.bicharacter {
        let bc = check_bicharacter(eps, tol);
        checks.push(Check::status(
            "bicharacter_multiplicative",
            bc.multiplicativity_residual,
            tol,
            bc.multiplicative,
            Severity::Warning,
        ));
        checks.push(Check::status(
            "bicharacter_symmetric",
            bc.symmetry_residual,
            tol,
            bc.symmetric,
            Severity::Warning,
        ));
    }
    Ok(())
}

fn matrix_entries(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn gram_section(
    tilde_op: &TildeOperator,
    max_level: usize,
    emit_level: Option<usize>,
    tol: f64,
    checks: &mut Vec<Check>,
    warnings: &mut Vec<String>,
) -> Result<Vec<LevelReport>> {
    let mut levels = Vec::with_capacity(max_level + 1);
    for n in 0..=max_level {
        let gram = fock_space::gram(tilde_op, n)?;
        let herm = hermiticity_residual(&gram);
        let scale = max_modulus(&gram).max(1.0);
        let hermitian = herm <= tol * scale;
        checks.push(Check::status(
            format!("gram_hermitian_L{n}"),
            herm,
            tol * scale,
            hermitian,
            Severity::Error,
        ));
        if !hermitian {
            warnings.push(format!("level {n}: Gram matrix is not Hermitian; spectrum omitted"));
            continue;
        }
        let fl = fock_space::positivity_report(tilde_op, n, tol)?;
        let eig_scale = fl.eigenvalues.iter().fold(1.0f64, |acc, &x| acc.max(x.abs()));
        checks.push(Check::status(
            format!("gram_positive_semidefinite_L{n}"),
            (-fl.min_eigenvalue).max(0.0),
            tol * eig_scale,
            fl.positive_semidefinite,
            Severity::Warning,
        ));
        levels.push(LevelReport {
            level: fl.level,
            dim: fl.dim,
            hermiticity_residual: fl.hermiticity_residual,
            min_eigenvalue: fl.min_eigenvalue,
            max_eigenvalue: fl.max_eigenvalue,
            kernel_dim: fl.kernel_dim,
            positive_semidefinite: fl.positive_semidefinite,
            positive_definite: fl.positive_definite,
            eigenvalues: fl.eigenvalues,
            matrix: (emit_level == Some(n)).then(|| matrix_entries(&gram)),
        });
    }
    Ok(levels)
}

fn quotient_section(
    tilde_op: &TildeOperator,
    b: &BraidOperator,
    n_max: usize,
    tol: f64,
    checks: &mut Vec<Check>,
) -> Result<Vec<QuotientReport>> {
    let mut out = Vec::with_capacity(n_max + 1);
    for q in fock_space::quotient_levels(tilde_op, b, n_max, tol)? {
        let scale = max_modulus(fock_space::p_operator_arc(tilde_op, q.level)?.as_ref()).max(1.0);
        checks.push(Check::status(
            format!("quotient_well_defined_L{}", q.level),
            q.gram_on_ideal,
            tol * scale,
            q.well_defined,
            Severity::Error,
        ));
        out.push(QuotientReport {
            level: q.level,
            dim: q.dim,
            ideal_dim: q.ideal_dim,
            quotient_dim: q.quotient_dim,
            gram_on_ideal: q.gram_on_ideal,
            well_defined: q.well_defined,
            induced_eigenvalues: q.induced_eigenvalues,
        });
    }
    Ok(out)
}

fn number_reports(spectra: &[NumberSpectrum]) -> (Vec<NumberReport>, f64) {
    let reports = spectra
        .iter()
        .map(|s| NumberReport {
            level: s.level,
            eigenvalues: s.eigenvalues.clone(),
            max_integer_deviation: s.max_integer_deviation,
        })
        .collect();
    let deviation = spectra.iter().map(|s| s.max_integer_deviation).fold(0.0, f64::max);
    (reports, deviation)
}

fn operators_section(
    built: &BuiltStatistics,
    tilde_op: &TildeOperator,
    n_max: usize,
    tol: f64,
    checks: &mut Vec<Check>,
    warnings: &mut Vec<String>,
) -> Result<(OperatorReport, Option<Vec<NumberReport>>)> {
    let t = &built.spec.cross;
    let rep = WickRepresentation::from_tilde(tilde_op.clone(), n_max)?;

    let adj = verify_adjointness_of(&rep, tol)?;
    checks.push(Check::status(
        "adjointness",
        adj.max_residual,
        adj.threshold,
        adj.pass,
        Severity::Error,
    ));

    let crel = verify_crel_of(&rep, t, tol)?;
    checks.push(Check::status(
        "commutation_relation",
        crel.residual,
        crel.threshold,
        crel.pass,
        Severity::Error,
    ));

    let mut operators = OperatorReport {
        adjointness_residual: adj.max_residual,
        adjointness_per_level: adj.per_level,
        commutation: ConventionReport {
            derived: crel.residuals.derived,
            paper_literal: crel.residuals.paper_literal,
        },
        commutation_convention: crel.convention.as_str().to_string(),
        braid_creation_line: None,
        braid_annihilation_line: None,
        braid_commutation_line: None,
        braid_convention: None,
    };

    let spectra = match &built.spec.braid {
        Some(b) => {
            let quo = QuotientRepresentation::from_rep(&rep, b, tol)?;
            let brel = verify_brel_of(&quo, t, b, tol)?;
            checks.push(Check::status(
                "braid_relations_quotient",
                brel.residual,
                brel.threshold,
                brel.pass,
                Severity::Error,
            ));
            operators.braid_creation_line = Some(ConventionReport {
                derived: brel.creation_line.derived,
                paper_literal: brel.creation_line.paper_literal,
            });
            operators.braid_annihilation_line = Some(ConventionReport {
                derived: brel.annihilation_line.derived,
                paper_literal: brel.annihilation_line.paper_literal,
            });
            operators.braid_commutation_line = Some(ConventionReport {
                derived: brel.commutation_line.derived,
                paper_literal: brel.commutation_line.paper_literal,
            });
            operators.braid_convention = Some(brel.convention.as_str().to_string());
            number_operator_spectra_quotient(&quo, tol)
        }
        None => number_operator_spectra(t, n_max, tol),
    };
    let number = match spectra {
        Ok(spectra) => {
            let (reports, deviation) = number_reports(&spectra);
            checks.push(Check::warning(
                "number_operator_integer",
                deviation,
                tol * (n_max as f64).max(1.0),
            ));
            Some(reports)
        }
        Err(Error::Inconsistent(msg)) => {
            warnings.push(format!("number operator spectra unavailable: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    Ok((operators, number))
}

fn prepare(config: &RunConfig, mode: &str) -> Result<(BuiltStatistics, TildeOperator, Report)> {
    let built = build_statistics(config)?;
    let tilde_op = tilde(&built.spec.cross);
    let report = Report::new(built.echo.clone(), mode);
    Ok((built, tilde_op, report))
}

fn top_level(config: &RunConfig, opts: &RunOptions) -> Result<usize> {
    let level = opts.level.unwrap_or(config.n_max);
    if level > config.n_max {
        return Err(Error::InvalidArgument(format!(
            "--level {level} exceeds nmax {}",
            config.n_max
        )));
    }
    Ok(level)
}

fn has_error_failure(report: &Report) -> bool {
    report.checks.iter().any(|c| c.severity == Severity::Error && !c.pass)
}

/// `check`: structural checks only.
pub fn run_check(config: &RunConfig) -> Result<Report> {
    let (built, tilde_op, mut report) = prepare(config, "check")?;
    structural_checks(&built, &tilde_op, config.tolerance, &mut report.checks, &mut report.warnings)?;
    report.finalize();
    Ok(report)
}

/// `gram`: structural checks plus Gram spectra for levels `0..=level`.
pub fn run_gram(config: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let (built, tilde_op, mut report) = prepare(config, "gram")?;
    let tol = config.tolerance;
    structural_checks(&built, &tilde_op, tol, &mut report.checks, &mut report.warnings)?;
    let level = top_level(config, opts)?;
    let emit = opts.emit_matrix.then_some(level);
    report.levels =
        Some(gram_section(&tilde_op, level, emit, tol, &mut report.checks, &mut report.warnings)?);
    report.finalize();
    Ok(report)
}

/// `fock`: the full analysis, stopping after the Gram section when a
/// structural or Gram check fails (unless `allow_inconsistent`).
pub fn run_fock(config: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let (built, tilde_op, mut report) = prepare(config, "fock")?;
    let tol = config.tolerance;
    structural_checks(&built, &tilde_op, tol, &mut report.checks, &mut report.warnings)?;
    let emit = opts.emit_matrix.then_some(top_level(config, opts)?);
    report.levels = Some(gram_section(
        &tilde_op,
        config.n_max,
        emit,
        tol,
        &mut report.checks,
        &mut report.warnings,
    )?);
    if has_error_failure(&report) && !opts.allow_inconsistent {
        report.warnings.push(
            "structural checks failed; operator sections skipped (pass --allow-inconsistent to force)"
                .into(),
        );
        report.finalize();
        return Ok(report);
    }
    finish_full(&built, &tilde_op, config, opts, &mut report)?;
    report.finalize();
    Ok(report)
}

/// `report`: everything `fock` computes, never gated.
pub fn run_report(config: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let (built, tilde_op, mut report) = prepare(config, "report")?;
    let tol = config.tolerance;
    structural_checks(&built, &tilde_op, tol, &mut report.checks, &mut report.warnings)?;
    let emit = opts.emit_matrix.then_some(top_level(config, opts)?);
    report.levels = Some(gram_section(
        &tilde_op,
        config.n_max,
        emit,
        tol,
        &mut report.checks,
        &mut report.warnings,
    )?);
    finish_full(&built, &tilde_op, config, opts, &mut report)?;
    report.finalize();
    Ok(report)
}

fn finish_full(
    built: &BuiltStatistics,
    tilde_op: &TildeOperator,
    config: &RunConfig,
    _opts: &RunOptions,
    report: &mut Report,
) -> Result<()> {
    let tol = config.tolerance;
    if let Some(b) = &built.spec.braid {
        report.quotient =
            Some(quotient_section(tilde_op, b, config.n_max, tol, &mut report.checks)?);
    }
    let (operators, number) = operators_section(
        built,
        tilde_op,
        config.n_max,
        tol,
        &mut report.checks,
        &mut report.warnings,
    )?;
    report.operators = Some(operators);
    report.number_spectra = number;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn config(json: &str) -> RunConfig {
        parse_config(json).unwrap()
    }

    fn check<'a>(report: &'a Report, name: &str) -> &'a Check {
        report
            .checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("missing check {name}"))
    }

    #[test]
    fn boson_report_passes_everything() {
        let cfg = config(r#"{"dimension": 2, "nmax": 4, "statistics": {"family": "boson"}}"#);
        let report = run_report(&cfg, &RunOptions::default()).unwrap();
        assert!(report.passed(), "{:#?}", report.checks);
        assert!(check(&report, "number_operator_integer").pass);
        let quotient = report.quotient.as_ref().unwrap();
        let dims: Vec<usize> = quotient.iter().map(|q| q.quotient_dim).collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 5]);
        assert_eq!(report.operators.as_ref().unwrap().commutation_convention, "derived");
        let number = report.number_spectra.as_ref().unwrap();
        assert_eq!(number.len(), 5);
        for n in number {
            assert!(n.eigenvalues.iter().all(|&x| (x - n.level as f64).abs() < 1e-9));
        }
    }

    #[test]
    fn fermion_report_has_vanishing_top_level() {
        let cfg = config(r#"{"dimension": 3, "nmax": 4, "statistics": {"family": "fermion"}}"#);
        let report = run_report(&cfg, &RunOptions::default()).unwrap();
        assert!(report.passed());
        let dims: Vec<usize> =
            report.quotient.as_ref().unwrap().iter().map(|q| q.quotient_dim).collect();
        assert_eq!(dims, vec![1, 3, 3, 1, 0]);
    }

    #[test]
    fn shared_levels_agree_across_nmax() {
        // Raising nmax by one must leave every level <= 3 section untouched.
        let small = config(r#"{"dimension": 2, "nmax": 3, "statistics": {"family": "boson"}}"#);
        let large = config(r#"{"dimension": 2, "nmax": 4, "statistics": {"family": "boson"}}"#);
        let a = run_report(&small, &RunOptions::default()).unwrap();
        let b = run_report(&large, &RunOptions::default()).unwrap();
        assert_eq!(a.levels.as_deref().unwrap(), &b.levels.as_deref().unwrap()[..4]);
        assert_eq!(a.quotient.as_deref().unwrap(), &b.quotient.as_deref().unwrap()[..4]);
        assert_eq!(
            a.number_spectra.as_deref().unwrap(),
            &b.number_spectra.as_deref().unwrap()[..4]
        );
    }

    const QUON_FLIP: &str = r#"{
        "dimension": 2, "nmax": 3,
        "statistics": {
            "family": "quon", "q": 0.5,
            "braid": [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
        }
    }"#;

    #[test]
    fn quon_with_flip_braid_fails_consistency() {
        let cfg = config(QUON_FLIP);
        let report = run_check(&cfg).unwrap();
        assert!(!report.passed());
        let projector = check(&report, "consistency_projector");
        assert!(!projector.pass);
        assert!((projector.residual - 0.5).abs() < 1e-12);
        assert!(check(&report, "tilde_yang_baxter").pass);
    }

    #[test]
    fn fock_mode_gates_on_structural_failure() {
        let cfg = config(QUON_FLIP);
        let gated = run_fock(&cfg, &RunOptions::default()).unwrap();
        assert!(gated.operators.is_none());
        assert!(gated.warnings.iter().any(|w| w.contains("allow-inconsistent")));

        let opts = RunOptions { allow_inconsistent: true, ..Default::default() };
        let forced = run_fock(&cfg, &opts).unwrap();
        assert!(forced.operators.is_some());
        assert!(!forced.passed());
    }

    #[test]
    fn gram_mode_emits_matrix_at_requested_level() {
        let cfg = config(r#"{"dimension": 2, "nmax": 4, "statistics": {"family": "quon", "q": 0.3}}"#);
        let opts = RunOptions { level: Some(2), emit_matrix: true, ..Default::default() };
        let report = run_gram(&cfg, &opts).unwrap();
        let levels = report.levels.as_ref().unwrap();
        assert_eq!(levels.len(), 3);
        let top = &levels[2];
        let matrix = top.matrix.as_ref().unwrap();
        assert_eq!(matrix.len(), 4);
        assert_eq!(matrix[0].len(), 4);
        assert_eq!(matrix[0][0], [1.3, 0.0]);
        assert!(levels[1].matrix.is_none());

        let plain = run_gram(&cfg, &RunOptions::default()).unwrap();
        assert!(plain.levels.as_ref().unwrap().iter().all(|l| l.matrix.is_none()));
        assert_eq!(plain.levels.as_ref().unwrap().len(), 5);
    }

    #[test]
    fn level_beyond_nmax_is_rejected() {
        let cfg = config(r#"{"dimension": 2, "nmax": 3, "statistics": {"family": "boson"}}"#);
        let opts = RunOptions { level: Some(7), ..Default::default() };
        let err = run_gram(&cfg, &opts).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn boltzmann_check_skips_braid_sections() {
        let cfg = config(r#"{"dimension": 3, "nmax": 4, "statistics": {"family": "boltzmann"}}"#);
        let report = run_check(&cfg).unwrap();
        assert!(report.passed());
        assert!(report.checks.iter().all(|c| !c.name.starts_with("braid")));
        assert!(report.warnings.iter().any(|w| w.contains("no braid")));

        let full = run_report(&cfg, &RunOptions::default()).unwrap();
        assert!(full.passed());
        assert!(full.quotient.is_none());
        let number = full.number_spectra.as_ref().unwrap();
        assert_eq!(number[4].eigenvalues.len(), 81);
        assert!(check(&full, "number_operator_integer").pass);
    }

    #[test]
    fn color_report_includes_bicharacter_checks() {
        let cfg = config(
            r#"{
                "dimension": 3, "nmax": 3,
                "statistics": {"family": "color", "group": [2, 2], "degrees": [[0, 0], [1, 0], [0, 1]]}
            }"#,
        );
        let report = run_report(&cfg, &RunOptions::default()).unwrap();
        assert!(report.passed(), "{:#?}", report.checks);
        assert!(check(&report, "bicharacter_multiplicative").pass);
        assert!(check(&report, "bicharacter_symmetric").pass);
        assert!(report.quotient.is_some());
    }
}
