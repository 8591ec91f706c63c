//! Close integers, scaling multipliers and short residue representatives.

use hermlat::field::preset;
use hermlat::ideal_lattice::{close_integer, residue_representatives, scaling_multiplier};
use hermlat::rational::ratio;
use hermlat::{Config, FieldElement};

fn main() -> hermlat::Result<()> {
    let f = preset("real_quad_2", Config::default())?;
    let x = f.real_point(&[ratio(17, 5), ratio(-22, 7)], &[])?;

    let c = close_integer(&f, &x)?;
    println!("close integer to {:?}: {}", x.to_f64(), c.element);
    println!("  l1 distance {} within: {}, euclidean within: {}", c.l1, c.l1_within, c.euclid_within);

    let m = scaling_multiplier(&f, &x)?;
    println!("scaling multiplier: {}", m.element);
    println!("  sup |a x| = {} within: {}", m.sup, m.sup_within);

    let ideal = f.principal_ideal(&FieldElement::from_ints(&[3, 1]))?;
    let reps = residue_representatives(&f, &ideal, 10_000)?;
    println!("\nresidues modulo {} ({} classes):", ideal, reps.len());
    for r in &reps {
        println!("  {:<12} l1 {}  within {}", r.element.to_string(), r.l1, r.within);
    }
    Ok(())
}
