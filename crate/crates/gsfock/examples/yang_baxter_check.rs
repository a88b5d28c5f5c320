//! Yang-Baxter and consistency residuals across the statistics zoo.
//!
//! Every preset cross operator satisfies the braid equation on three legs;
//! a small perturbation of the flip is rejected loudly. Forcing the wrong
//! braid onto quon statistics breaks the projector condition
//! `(id + Ttilde)(id - B) = 0` by exactly `1 - q`.

use gsfock::multilinear::flip_matrix;
use gsfock::statistics_ops::{check_consistency, check_yang_baxter, tilde, BraidOperator};
use gsfock::statistics_zoo::{
    family_boson, family_fermion, family_quon, AbelianGroup, Bicharacter, Grading,
};
use gsfock::Complex64;

fn main() -> gsfock::Result<()> {
    let group = AbelianGroup::new(vec![2, 2])?;
    let eps = Bicharacter::standard(group.clone());
    let grading = Grading::new(&group, vec![0, 1, 2])?;
    let color = gsfock::statistics_zoo::family_color(&eps, &grading)?;

    let presets = [family_boson(2)?, family_fermion(3)?, family_quon(2, 0.5)?, color];
    for spec in &presets {
        let tilde_op = tilde(&spec.cross);
        let yb = check_yang_baxter(tilde_op.matrix(), spec.dim, 1e-10)?;
        print!("{:<8} Yang-Baxter residual {:.1e}", spec.name, yb.residual);
        match &spec.braid {
            Some(b) => {
                let cons = check_consistency(&tilde_op, b, 1e-10)?;
                println!(
                    ", consistency (mixed {:.1e}, projector {:.1e})",
                    cons.mixed_yang_baxter.residual, cons.projector.residual
                );
            }
            None => println!(", no canonical braid"),
        }
    }

    let mut perturbed = flip_matrix(2);
    perturbed[(1, 1)] += Complex64::new(0.1, 0.0);
    let yb = check_yang_baxter(&perturbed, 2, 1e-10)?;
    println!("perturbed flip rejected: residual {:.3e}, pass = {}", yb.residual, yb.pass);

    let quon = family_quon(2, 0.5)?;
    let forced = BraidOperator::new(2, flip_matrix(2))?;
    let cons = check_consistency(&tilde(&quon.cross), &forced, 1e-10)?;
    println!(
        "quon with forced flip braid: projector residual {:.3} (expected 1 - q = 0.5)",
        cons.projector.residual
    );
    Ok(())
}
