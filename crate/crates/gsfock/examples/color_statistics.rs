//! Color statistics from bicharacters on finite abelian groups.
//!
//! A grading assigns each letter a group element; the bicharacter twists the
//! flip with phases. Symmetric bicharacters give consistent braided
//! statistics mixing bosonic and fermionic behaviour per color; the standard
//! pairing on Z_3 is multiplicative but not symmetric, which the checker
//! reports.

use gsfock::statistics_ops::tilde;
use gsfock::statistics_zoo::{
    check_bicharacter, family_color, AbelianGroup, Bicharacter, Grading,
};
use gsfock::fock_space::quotient_structure;

fn main() -> gsfock::Result<()> {
    // Two odd letters and one even letter over Z_2.
    let z2 = AbelianGroup::cyclic(2)?;
    let eps = Bicharacter::standard(z2.clone());
    let grading = Grading::new(&z2, vec![0, 1, 1])?;
    let spec = family_color(&eps, &grading)?;
    let tilde_op = tilde(&spec.cross);
    let braid = spec.braid.as_ref().unwrap();

    println!("Z_2 grading {:?} quotient dimensions:", grading.degrees());
    for n in 0..=4 {
        let q = quotient_structure(&tilde_op, braid, n, 1e-10)?;
        println!("  level {n}: {:>2} of {:>2}", q.quotient_dim, q.dim);
    }

    // Z_2 x Z_2 with three mutually anticommuting odd sectors.
    let klein = AbelianGroup::new(vec![2, 2])?;
    let eps = Bicharacter::standard(klein.clone());
    let grading = Grading::new(&klein, vec![1, 2, 3])?;
    let spec = family_color(&eps, &grading)?;
    let check = check_bicharacter(spec.braid.as_ref().map(|_| &eps).unwrap(), 1e-10);
    println!(
        "Z_2 x Z_2: multiplicative = {}, symmetric = {}",
        check.multiplicative, check.symmetric
    );

    // The standard pairing on Z_3 fails symmetry, so it cannot grade a
    // consistent statistics.
    let z3 = AbelianGroup::cyclic(3)?;
    let eps = Bicharacter::standard(z3);
    let check = check_bicharacter(&eps, 1e-10);
    println!(
        "Z_3 standard pairing: multiplicative = {}, symmetric = {} (symmetry residual {:.2})",
        check.multiplicative, check.symmetric, check.symmetry_residual
    );
    Ok(())
}
