//! Free Fock space: the zero cross operator deforms nothing.
//!
//! With `T = 0` the kernel sum collapses to the identity, so every level's
//! Gram matrix is exactly the identity and `a_i a+_j = delta_ij` holds with
//! zero residual.

use gsfock::fock_space::gram;
use gsfock::multilinear::{max_modulus_diff, CMatrix};
use gsfock::statistics_ops::tilde;
use gsfock::statistics_zoo::family_boltzmann;
use gsfock::wick_ops::verify_crel;

fn main() -> gsfock::Result<()> {
    let spec = family_boltzmann(3)?;
    let tilde_op = tilde(&spec.cross);
    for n in 0..=4 {
        let g = gram(&tilde_op, n)?;
        let id = CMatrix::identity(g.nrows(), g.ncols());
        println!(
            "level {n}: dim {:>3}, ||G - id||_max = {:.1e}",
            g.nrows(),
            max_modulus_diff(&g, &id)
        );
    }

    let crel = verify_crel(&spec.cross, 4, 1e-10)?;
    println!(
        "commutation relation residual {:.1e} under the {} convention",
        crel.residual,
        crel.convention.as_str()
    );
    Ok(())
}
