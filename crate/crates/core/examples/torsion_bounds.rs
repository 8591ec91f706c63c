//! Explicit bounds for the torsion of `K_n` of rings of integers.

use hermlat::bounds::{basis_bound, k_bound, FieldParams, KParams};

fn main() -> hermlat::Result<()> {
    let fields =
        [("Q(i)", FieldParams::new(2, 0, 1, 4)?), ("Q(sqrt 5)", FieldParams::new(2, 2, 0, 5)?), ("cubic", FieldParams::new(3, 1, 1, 23)?)];
    for (name, fp) in &fields {
        for n in [2, 3, 5] {
            let kp = KParams::new(n, fp.d)?;
            let kb = k_bound(fp, &kp)?;
            let bb = basis_bound(fp, kp.big_n)?;
            println!(
                "{name:>10} n = {n}: N = {} ell = {} e = {}  basis bound log10 ~ {:.1}  log card_l K_n tors <= 10^{:.1} (closed form 10^{:.1})",
                kp.big_n,
                kp.ell,
                kb.e,
                bb.general.log10_f64(),
                kb.assembled.log10_f64(),
                kb.closed_form.log10_f64()
            );
            assert!(kb.assembled.le(&kb.relaxed)? && kb.relaxed.le(&kb.closed_form)?);
        }
    }
    Ok(())
}
