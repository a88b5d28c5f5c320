//! Acceptance suite: one test per acceptance criterion, each printing a
//! single pass line (with timing where the criterion bounds runtime).
//!
//! Oracles are independent of the library internals: Gram matrices are
//! checked against brute-force permutation enumeration, quotient dimensions
//! against binomial counts, and the CLI against fixture subprocess runs.

use std::time::Instant;

use gsfock::config::parse_config;
use gsfock::fock_space::{gram, positivity_report, quotient_structure};
use gsfock::multilinear::{all_words, flat_index, flip_matrix, max_modulus_diff, CMatrix};
use gsfock::runner::{run_report, RunOptions};
use gsfock::statistics_ops::{check_consistency, check_yang_baxter, tilde, BraidOperator};
use gsfock::statistics_zoo::{
    family_boltzmann, family_boson, family_color, family_fermion, family_quon, AbelianGroup,
    Bicharacter, Grading,
};
use gsfock::wick_ops::{verify_adjointness, verify_brel, verify_crel};
use gsfock::Complex64;

const TOL: f64 = 1e-10;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, arr: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(arr.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, arr, out);
            if k % 2 == 0 {
                arr.swap(i, k - 1);
            } else {
                arr.swap(0, k - 1);
            }
        }
    }
    let mut arr: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut arr, &mut out);
    out
}

fn inversions(sigma: &[usize]) -> u32 {
    let mut count = 0;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] {
                count += 1;
            }
        }
    }
    count
}

/// `sum_sigma q^inv(sigma) M_sigma` assembled word by word.
fn oracle_gram(dim: usize, q: f64, n: usize) -> CMatrix {
    let size = dim.pow(n as u32);
    let mut g = CMatrix::zeros(size, size);
    for sigma in permutations(n) {
        let weight = Complex64::new(q.powi(inversions(&sigma) as i32), 0.0);
        for word in all_words(dim, n) {
            let permuted: Vec<usize> = (0..n).map(|k| word[sigma[k]]).collect();
            g[(flat_index(&permuted, dim), flat_index(&word, dim))] += weight;
        }
    }
    g
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn color_z2_mixed() -> gsfock::statistics_zoo::StatisticsSpec {
    let group = AbelianGroup::cyclic(2).unwrap();
    let eps = Bicharacter::standard(group.clone());
    let grading = Grading::new(&group, vec![0, 1, 1]).unwrap();
    family_color(&eps, &grading).unwrap()
}

fn color_z2z2() -> gsfock::statistics_zoo::StatisticsSpec {
    let group = AbelianGroup::new(vec![2, 2]).unwrap();
    let eps = Bicharacter::standard(group.clone());
    let grading = Grading::new(&group, vec![0, 1, 2]).unwrap();
    family_color(&eps, &grading).unwrap()
}

#[test]
fn criterion_1_boltzmann_free_fock_is_exact() {
    let start = Instant::now();
    let spec = family_boltzmann(3).unwrap();
    let tilde_op = tilde(&spec.cross);
    for n in 0..=4 {
        let g = gram(&tilde_op, n).unwrap();
        let size = 3usize.pow(n as u32);
        assert_eq!(
            max_modulus_diff(&g, &CMatrix::identity(size, size)),
            0.0,
            "level {n} Gram must equal the identity exactly"
        );
    }
    let crel = verify_crel(&spec.cross, 4, TOL).unwrap();
    assert_eq!(crel.residuals.derived, 0.0);
    assert_eq!(crel.residuals.paper_literal, 0.0);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (boltzmann exactness): pass in {elapsed:?}");
}

#[test]
fn criterion_2_boson_suite() {
    let spec = family_boson(2).unwrap();
    let tilde_op = tilde(&spec.cross);
    let braid = spec.braid.as_ref().unwrap();

    let yb = check_yang_baxter(tilde_op.matrix(), 2, TOL).unwrap();
    assert!(yb.residual <= 1e-12);
    let cons = check_consistency(&tilde_op, braid, TOL).unwrap();
    assert!(cons.mixed_yang_baxter.residual <= 1e-12);
    assert!(cons.projector.residual <= 1e-12);

    for n in 1..=4 {
        let q = quotient_structure(&tilde_op, braid, n, TOL).unwrap();
        assert_eq!(q.quotient_dim, binomial(2 + n - 1, n), "symmetric power at level {n}");
    }

    let brel = verify_brel(&spec.cross, braid, 4, TOL).unwrap();
    assert!(brel.quotient_well_defined);
    assert!(brel.residual <= 1e-10, "brel residual {}", brel.residual);

    let cfg = parse_config(r#"{"dimension": 2, "nmax": 4, "statistics": {"family": "boson"}}"#)
        .unwrap();
    let report = run_report(&cfg, &RunOptions::default()).unwrap();
    assert!(report.passed());
    let number = report.number_spectra.as_ref().unwrap();
    let deviation = number.iter().map(|l| l.max_integer_deviation).fold(0.0, f64::max);
    assert!(deviation <= 1e-10, "number spectrum deviation {deviation}");
    println!("criterion 2 (boson suite): pass");
}

#[test]
fn criterion_3_fermion_suite() {
    let spec = family_fermion(3).unwrap();
    let tilde_op = tilde(&spec.cross);
    let braid = spec.braid.as_ref().unwrap();

    for n in 1..=4 {
        let q = quotient_structure(&tilde_op, braid, n, TOL).unwrap();
        assert_eq!(q.quotient_dim, binomial(3, n), "exterior power at level {n}");
        if q.quotient_dim > 0 {
            let min = q.induced_eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(min > 1e-6, "induced Gram not positive definite at level {n}: {min}");
        }
    }

    let brel = verify_brel(&spec.cross, braid, 4, TOL).unwrap();
    assert!(brel.quotient_well_defined);
    assert!(brel.residual <= 1e-10, "anticommutation residual {}", brel.residual);
    println!("criterion 3 (fermion suite): pass");
}

#[test]
fn criterion_4_quon_gram_matches_permutation_oracle() {
    for &q in &[0.3, 0.5, -0.5] {
        let spec = family_quon(1, q).unwrap();
        let tilde_op = tilde(&spec.cross);
        let g = gram(&tilde_op, 3).unwrap();
        let oracle = oracle_gram(1, q, 3);
        assert!(max_modulus_diff(&g, &oracle) <= 1e-12);
        if q == 0.5 {
            assert!((g[(0, 0)].re - 2.625).abs() <= 1e-12);
        }

        let spec2 = family_quon(2, q).unwrap();
        let tilde2 = tilde(&spec2.cross);
        for n in 0..=4 {
            let g = gram(&tilde2, n).unwrap();
            let oracle = oracle_gram(2, q, n);
            assert!(
                max_modulus_diff(&g, &oracle) <= 1e-12,
                "quon q={q} level {n} disagrees with the oracle"
            );
            let level = positivity_report(&tilde2, n, TOL).unwrap();
            assert!(level.positive_definite, "quon q={q} level {n} must be positive definite");
        }
    }
    println!("criterion 4 (quon permutation oracle): pass");
}

#[test]
fn criterion_5_adjointness_on_every_preset() {
    let presets = vec![
        family_boltzmann(3).unwrap(),
        family_boson(2).unwrap(),
        family_fermion(3).unwrap(),
        family_quon(2, 0.5).unwrap(),
        color_z2_mixed(),
    ];
    for spec in presets {
        let report = verify_adjointness(&spec.cross, 4, TOL).unwrap();
        assert!(
            report.max_residual <= 1e-10,
            "{}: adjointness residual {}",
            spec.name,
            report.max_residual
        );
        assert!(report.pass);
    }
    println!("criterion 5 (adjointness across presets): pass");
}

#[test]
fn criterion_6_consistency_dichotomy_and_kernel_containment() {
    let consistent = vec![
        family_boson(2).unwrap(),
        family_fermion(3).unwrap(),
        color_z2_mixed(),
        color_z2z2(),
    ];
    for spec in &consistent {
        let tilde_op = tilde(&spec.cross);
        let braid = spec.braid.as_ref().unwrap();
        let cons = check_consistency(&tilde_op, braid, TOL).unwrap();
        assert!(cons.mixed_yang_baxter.residual <= 1e-12, "{}", spec.name);
        assert!(cons.projector.residual <= 1e-12, "{}", spec.name);
        for n in 0..=4 {
            let q = quotient_structure(&tilde_op, braid, n, TOL).unwrap();
            assert!(
                q.gram_on_ideal <= 1e-10,
                "{} level {n}: ideal escapes the Gram kernel ({})",
                spec.name,
                q.gram_on_ideal
            );
        }
    }

    let quon = family_quon(2, 0.5).unwrap();
    let forced = BraidOperator::new(2, flip_matrix(2)).unwrap();
    let cons = check_consistency(&tilde(&quon.cross), &forced, TOL).unwrap();
    assert!(!cons.pass);
    assert!(
        cons.projector.residual >= 0.4,
        "forced flip braid must fail loudly, got {}",
        cons.projector.residual
    );
    println!("criterion 6 (consistency dichotomy): pass");
}

#[test]
fn criterion_7_yang_baxter_detection() {
    for dim in [2usize, 3] {
        let yb = check_yang_baxter(&flip_matrix(dim), dim, TOL).unwrap();
        assert!(yb.residual <= 1e-12);
    }
    let quon = tilde(&family_quon(2, 0.5).unwrap().cross);
    assert!(check_yang_baxter(quon.matrix(), 2, TOL).unwrap().residual <= 1e-12);
    let color = tilde(&color_z2z2().cross);
    assert!(check_yang_baxter(color.matrix(), 3, TOL).unwrap().residual <= 1e-12);

    let mut perturbed = flip_matrix(2);
    perturbed[(1, 1)] += Complex64::new(0.1, 0.0);
    let yb = check_yang_baxter(&perturbed, 2, TOL).unwrap();
    assert!(!yb.pass);
    assert!(yb.residual > 1e-3, "perturbed flip must be rejected, residual {}", yb.residual);
    println!("criterion 7 (yang-baxter detection): pass");
}

#[test]
fn criterion_8_determinism_and_exit_codes() {
    use std::process::Command;

    let bin = env!("CARGO_BIN_EXE_gsfock");
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);
    let write = |name: &str, text: &str| {
        let p = path(name);
        std::fs::write(&p, text).unwrap();
        p
    };

    let passing = write(
        "passing.json",
        r#"{"dimension": 2, "nmax": 4, "statistics": {"family": "boson"}}"#,
    );
    let failing = write(
        "failing.json",
        r#"{
            "dimension": 2, "nmax": 3,
            "statistics": {
                "family": "quon", "q": 0.5,
                "braid": [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
            }
        }"#,
    );
    let malformed = write("malformed.json", r#"{"dimension": 2,"#);

    let run = |args: &[&str]| {
        Command::new(bin).args(args).output().expect("binary runs")
    };

    let out1 = path("report1.json");
    let out2 = path("report2.json");
    let first = run(&["report", passing.to_str().unwrap(), "-o", out1.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    let second = run(&["report", passing.to_str().unwrap(), "-o", out2.to_str().unwrap()]);
    assert_eq!(second.status.code(), Some(0));
    let bytes1 = std::fs::read(&out1).unwrap();
    let bytes2 = std::fs::read(&out2).unwrap();
    assert!(!bytes1.is_empty());
    assert_eq!(bytes1, bytes2, "identical configs must produce byte-identical reports");

    let fail = run(&["check", failing.to_str().unwrap()]);
    assert_eq!(fail.status.code(), Some(1));
    let bad = run(&["check", malformed.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let usage = run(&["check", passing.to_str().unwrap(), "--no-such-flag"]);
    assert_eq!(usage.status.code(), Some(2));
    println!("criterion 8 (determinism and exit codes): pass");
}

#[test]
fn criterion_9_performance_envelope() {
    let start = Instant::now();
    let cfg = parse_config(r#"{"dimension": 3, "nmax": 4, "statistics": {"family": "fermion"}}"#)
        .unwrap();
    let report = run_report(&cfg, &RunOptions::default()).unwrap();
    assert!(report.passed());
    gsfock::report::to_json(&report).unwrap();
    let small = start.elapsed();
    assert!(small.as_secs_f64() < 10.0, "N=3 nmax=4 took {small:?}");

    let start = Instant::now();
    let cfg = parse_config(r#"{"dimension": 4, "nmax": 5, "statistics": {"family": "fermion"}}"#)
        .unwrap();
    let report = run_report(&cfg, &RunOptions::default()).unwrap();
    assert!(report.passed());
    gsfock::report::to_json(&report).unwrap();
    let large = start.elapsed();
    assert!(large.as_secs_f64() < 120.0, "N=4 nmax=5 took {large:?}");
    println!("criterion 9 (performance): pass, N=3 in {small:?}, N=4 in {large:?}");
}
