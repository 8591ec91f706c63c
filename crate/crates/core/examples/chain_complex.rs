//! Homology of a small chain complex and its torsion bound.

use hermlat::homology::{ChainComplex, IntMatrix};

fn main() -> hermlat::Result<()> {
    // a cell structure on the real projective plane: one cell in each
    // dimension with d1 = 0 and d2 = 2
    let d1: IntMatrix = "0".parse()?;
    let d2: IntMatrix = "2".parse()?;
    let rp2 = ChainComplex::new(vec![d1, d2])?;
    for k in 0..3 {
        let h = rp2.homology(k);
        println!("H_{k}: betti {} torsion {}", h.betti, h.torsion);
    }

    let d1: IntMatrix = "1 -1 0; 0 1 -1".parse()?;
    let d2: IntMatrix = "1; 1; 1".parse()?;
    let cx = ChainComplex::new(vec![d1, d2])?;
    println!("\nranks {:?}", cx.ranks());
    for k in 0..cx.len() {
        let c = cx.torsion_bound_check(k)?;
        println!("degree {k}: torsion {} <= {} (beta {}) holds {}", c.torsion, c.bound, c.beta, c.holds);
    }
    Ok(())
}
