//! Symmetric and antisymmetric Fock spaces as braid quotients.
//!
//! The braid ideal `I_n = sum_i Im place(id - B, i, n)` coincides with the
//! kernel of the deformed Gram matrix, so dividing by it leaves the familiar
//! symmetric powers (boson) and exterior powers (fermion).

use gsfock::fock_space::{positivity_report, quotient_structure};
use gsfock::statistics_ops::tilde;
use gsfock::statistics_zoo::{family_boson, family_fermion, StatisticsSpec};

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn survey(spec: &StatisticsSpec, oracle: impl Fn(usize) -> usize) -> gsfock::Result<()> {
    let tilde_op = tilde(&spec.cross);
    let braid = spec.braid.as_ref().expect("preset carries a braid");
    println!("{} (N = {}):", spec.name, spec.dim);
    for n in 0..=4 {
        let level = positivity_report(&tilde_op, n, 1e-10)?;
        let quotient = quotient_structure(&tilde_op, braid, n, 1e-10)?;
        println!(
            "  level {n}: ambient {:>2}, ideal {:>2}, quotient {:>2} (oracle {:>2}), \
             gram kernel {:>2}, ||G I_n|| = {:.1e}",
            quotient.dim,
            quotient.ideal_dim,
            quotient.quotient_dim,
            oracle(n),
            level.kernel_dim,
            quotient.gram_on_ideal
        );
        assert_eq!(quotient.quotient_dim, oracle(n));
        assert_eq!(quotient.ideal_dim, level.kernel_dim);
    }
    Ok(())
}

fn main() -> gsfock::Result<()> {
    let boson = family_boson(2)?;
    survey(&boson, |n| binomial(2 + n - 1, n))?;

    let fermion = family_fermion(3)?;
    survey(&fermion, |n| binomial(3, n))?;
    Ok(())
}
