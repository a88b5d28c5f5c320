//! Quon statistics: the one-parameter bridge between sign classes.
//!
//! For `-1 < q < 1` the deformed Gram matrices stay positive definite, and
//! the number operator interpolates the occupation spectrum: at level 2 its
//! eigenvalues are `1 + q` and `1 - q` instead of staying integral.

use gsfock::fock_space::positivity_report;
use gsfock::statistics_ops::tilde;
use gsfock::statistics_zoo::family_quon;
use gsfock::wick_ops::number_operator_spectra;

fn main() -> gsfock::Result<()> {
    for &q in &[-0.9, -0.5, 0.0, 0.3, 0.5, 0.9] {
        let spec = family_quon(2, q)?;
        let tilde_op = tilde(&spec.cross);
        let mut min_eigenvalue = f64::INFINITY;
        for n in 0..=4 {
            let level = positivity_report(&tilde_op, n, 1e-10)?;
            min_eigenvalue = min_eigenvalue.min(level.min_eigenvalue);
            assert!(level.positive_definite);
        }

        let spectra = number_operator_spectra(&spec.cross, 3, 1e-10)?;
        let level2: Vec<String> =
            spectra[2].eigenvalues.iter().map(|x| format!("{x:.2}")).collect();
        println!(
            "q = {q:+.1}: min Gram eigenvalue {min_eigenvalue:.4}, \
             number spectrum at level 2: [{}]",
            level2.join(", ")
        );
    }
    println!("every level stayed positive definite");
    Ok(())
}
