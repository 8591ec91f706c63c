//! Minimal vectors and well-roundedness of Hermitian forms, and their
//! behaviour under a change of basis.

use hermlat::field::preset;
use hermlat::hermitian::{HermitianLattice, UnimodularMatrix};
use hermlat::rational::{fmt_rat, rat, ratio};
use hermlat::{Config, FieldElement};

fn main() -> hermlat::Result<()> {
    let f = preset("rational", Config::default())?;
    let a2 = HermitianLattice::from_rational(&f, &[vec![rat(2), rat(1)], vec![rat(1), rat(2)]])?;
    let mv = a2.minimal_vectors()?;
    println!("A2: minimum {} with {} minimal vectors ({} up to sign)", fmt_rat(&mv.minimum), mv.count(), mv.count_mod_sign());

    let g = preset("gaussian", Config::default())?;
    let h = HermitianLattice::from_rational(&g, &[vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), rat(1)]])?.normalize_minimum()?;
    let mv = h.minimal_vectors()?;
    let wr = h.well_roundedness()?;
    println!("\nGaussian form [[1, 1/2], [1/2, 1]] rescaled: minimum {}, {} minimal vectors", fmt_rat(&mv.minimum), mv.count());
    println!("well rounded: {}", wr.well_rounded);
    if let Some(reason) = &wr.reason {
        println!("  {reason}");
    }
    for i in &wr.witness {
        let v: Vec<String> = mv.vectors[*i].iter().map(|x| x.to_string()).collect();
        println!("  witness ({})", v.join(", "));
    }

    let i = FieldElement::from_ints(&[0, 1]);
    let gamma = UnimodularMatrix::new(&g, vec![vec![g.one(), i], vec![g.zero(), g.one()]])?;
    let moved = h.gamma_action(&gamma)?;
    let mv2 = moved.minimal_vectors()?;
    println!("after a unimodular change: minimum {}, {} minimal vectors", fmt_rat(&mv2.minimum), mv2.count());
    Ok(())
}
