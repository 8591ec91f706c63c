//! Trace-form lattices of ideals: determinant, covering radius, closest
//! and shortest vectors.

use hermlat::field::preset;
use hermlat::ideal_lattice::IdealLattice;
use hermlat::rational::fmt_rat;
use hermlat::{Config, FieldElement};

fn main() -> hermlat::Result<()> {
    let f = preset("gaussian", Config::default())?;
    let ideal = f.principal_ideal(&FieldElement::from_ints(&[2, 1]))?;
    let lat = IdealLattice::of_ideal(&f, ideal)?;
    println!("ideal {}", lat.ideal());
    println!("Gram determinant {} (expected {})", fmt_rat(&lat.trace_gram()?.determinant()), lat.expected_determinant());

    let cover = lat.covering_bound();
    println!("covering radius^2 <= {} (~{:.4})", fmt_rat(&cover.r2_upper), cover.approx);

    let target = FieldElement(vec![hermlat::rational::ratio(7, 3), hermlat::rational::ratio(-5, 4)]);
    let cv = lat.closest_to_element(&target)?;
    println!(
        "closest to {target}: {} at distance^2 {} (certified {}, ties {}, covered {})",
        cv.element,
        cv.dist2,
        cv.certified,
        cv.ties,
        cover.covers(&cv.dist2)
    );

    let sv = lat.shortest_vector()?;
    println!("shortest vector {} with length^2 {}", sv.element, sv.len2);

    // a real quadratic field goes through the interval path
    let g = preset("real_quad_5", Config::default())?;
    let lat = IdealLattice::ring_of_integers(&g)?;
    let cv = lat.closest_to_element(&FieldElement(vec![hermlat::rational::ratio(1, 3), hermlat::rational::ratio(2, 5)]))?;
    println!("\n{}: closest {} distance^2 {} exact {}", g.name(), cv.element, cv.dist2, lat.is_exact());
    Ok(())
}
