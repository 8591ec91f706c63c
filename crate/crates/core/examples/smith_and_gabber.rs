//! Smith normal form and the torsion bound for cokernels of integer
//! matrices.

use hermlat::homology::{gabber_check, smith_normal_form, IntMatrix};

fn main() -> hermlat::Result<()> {
    let m: IntMatrix = "2 4 4; -6 6 12; 10 -4 -16".parse()?;
    let s = smith_normal_form(&m);
    println!("M = {m}");
    println!("D = {}", s.d);
    println!("U M V = D: {}", s.u.mul(&m)?.mul(&s.v)? == s.d);
    println!("cokernel {} of torsion order {}", s.divisors, s.divisors.torsion_order());

    for text in ["2 4 4; -6 6 12; 10 -4 -16", "3 0; 0 3", "1 1 1; 1 -1 0"] {
        let m: IntMatrix = text.parse()?;
        let g = gabber_check(&m);
        println!(
            "{m}: torsion {} <= {} (alpha^2 = {}, exponent {}) holds {} equality {}",
            g.torsion, g.bound, g.alpha2, g.exponent, g.holds, g.equality
        );
    }
    Ok(())
}
