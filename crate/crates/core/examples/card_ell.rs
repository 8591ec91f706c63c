//! Size of the `l`-torsion-free part of finite abelian groups, by closed
//! form and by enumeration.

use hermlat::homology::{abelian_groups_of_order, card_ell, card_ell_brute_force, ElementaryDivisors};

fn main() -> hermlat::Result<()> {
    let g = ElementaryDivisors::from_cyclic_orders(&[4, 6, 35])?;
    for ell in 1..=8 {
        println!("{g}  ell = {ell}: card {}", card_ell(&g, ell));
    }

    println!("\nall groups of order 72, ell = 3:");
    for orders in abelian_groups_of_order(72) {
        let g = ElementaryDivisors::from_cyclic_orders(&orders)?;
        let brute = card_ell_brute_force(&orders, 3)?;
        println!("  {:<20} {} (enumerated {brute})", g.to_string(), card_ell(&g, 3));
    }
    Ok(())
}
