//! Short bases of well-rounded Hermitian lattices against the explicit
//! length bound, with the coordinate count that follows from it.

use hermlat::field::preset;
use hermlat::hermitian::{bounded_basis, coefficient_bound_check, phi_enumerate, HermitianLattice, UnimodularMatrix};
use hermlat::rational::{fmt_rat, rat, ratio};
use hermlat::{Config, FieldElement};

fn main() -> hermlat::Result<()> {
    let f = preset("eisenstein", Config::default())?;
    let a2 = HermitianLattice::from_rational(&f, &[vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), rat(1)]])?.normalize_minimum()?;
    let w = FieldElement::from_ints(&[0, 1]);
    let gamma = UnimodularMatrix::new(&f, vec![vec![f.one(), w.clone()], vec![f.zero(), f.one()]])?;
    let lat = a2.gamma_action(&gamma)?;

    let bb = bounded_basis(&lat)?;
    for v in &bb.basis {
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        println!("basis vector ({})", s.join(", "));
    }
    println!("max |b|^2 = {}", fmt_rat(&bb.max_norm));
    if let Some(c) = &bb.certificate {
        println!("general bound {c} (log10 ~ {:.2}), within: {:?}", c.log10_f64(), bb.within_general);
    }

    let report = coefficient_bound_check(&lat, &bb)?;
    println!("{} coordinates checked, max l1 sum {}, {} violations", report.checked, fmt_rat(&report.max_sum), report.violations);

    let phi = phi_enumerate(&f, &bb.basis, &rat(1), 10_000)?;
    println!("coordinates with T = 1: {} (bound applies: {}, within: {})", phi.coordinates.len(), phi.bound_applies, phi.within_bound);
    println!("vectors generated: {}", phi.total);
    Ok(())
}
