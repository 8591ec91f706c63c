//! Preset number fields: invariants, arithmetic and embeddings.

use hermlat::field::{preset, PRESETS};
use hermlat::rational::fmt_rat;
use hermlat::{Config, FieldElement};

fn main() -> hermlat::Result<()> {
    for name in PRESETS {
        let f = preset(name, Config::default())?;
        let (r1, r2) = f.signature();
        println!(
            "{name:>12}: degree {} signature ({r1}, {r2}) disc {} class number one: {}",
            f.degree(),
            f.discriminant(),
            f.is_class_number_one()
        );
    }

    let f = preset("eisenstein", Config::default())?;
    let a = FieldElement::from_ints(&[2, 1]);
    let b = FieldElement::from_ints(&[-1, 3]);
    let p = f.mul(&a, &b);
    println!("\nin {}: ({a}) * ({b}) = {p}", f.name());
    println!("N(a) = {}, Tr(a) = {}", fmt_rat(&f.norm(&a)), fmt_rat(&f.trace(&a)));
    println!("1/a = {}", f.inverse(&a).expect("nonzero"));
    println!("conj(a) = {}, |a|^2 summed over embeddings = {}", f.conjugate(&a)?, fmt_rat(&f.q0(&a)?));
    for (k, z) in f.embed_default(&a).to_f64().iter().enumerate() {
        println!("  embedding {k}: {:.6} + {:.6} i", z.0, z.1);
    }
    Ok(())
}
