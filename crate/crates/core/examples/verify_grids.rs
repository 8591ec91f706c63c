//! Runs the parameter grids that check the bound inequalities and prints a
//! summary per grid.

use hermlat::bounds::verify::verify_all;

fn main() {
    for report in verify_all() {
        let (passed, total) = report.count();
        println!("{:<24} {passed}/{total}", report.name);
        for c in report.failures().take(5) {
            println!("  FAIL {} {}: {}", c.group, c.params, c.detail);
        }
    }
}
