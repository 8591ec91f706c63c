//! Grid verification of the bound inequalities.
//!
//! Each grid produces one [`Check`] per grid point and inequality. Work is
//! split across threads but results are returned in grid order.

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::Serialize;

use super::{
    basis_bound_general, basis_bound_intermediate, basis_bound_simplified, exponent_slack, k_bound, log_torsion_bound,
    log_torsion_via_cells, phi_closed, rank_slack, BigBound, FieldParams, KParams,
};
use crate::error::Result;
use crate::rational::{fmt_rat, rat, to_f64, Rat};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub group: String,
    pub params: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(group: &str, params: String, passed: bool, detail: String) -> Self {
        Check { group: group.to_string(), params, passed, detail }
    }
}

/// Checks of one grid, plus the equality cases seen along the way.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GridReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn count(&self) -> (usize, usize) {
        (self.checks.iter().filter(|c| c.passed).count(), self.checks.len())
    }
}

/// Map `f` over `items` on all available cores, keeping the input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(items.len().max(1));
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn verdict(r: Result<Ordering>, want_le: bool) -> (bool, String) {
    match r {
        Ok(o) => {
            let ok = if want_le { o != Ordering::Greater } else { o == Ordering::Equal };
            (ok, format!("{o:?}"))
        }
        Err(e) => (false, format!("undecided: {e}")),
    }
}

/// `e(d,n) + n + 1 <= (15/4) n^2 d` and `2n + 1 <= (5/2) n` on
/// `2 <= d, n <= max`. Equality must occur exactly at `n = 2`.
pub fn slack_grid(max: u64) -> GridReport {
    let mut checks = Vec::new();
    let mut exp_eq = Vec::new();
    let mut bad = 0usize;
    for d in 2..=max {
        for n in 2..=max {
            let s = exponent_slack(d, n);
            if s < Rat::from_integer(0.into()) {
                bad += 1;
                checks.push(Check::new("exponent", format!("d={d} n={n}"), false, format!("slack {}", fmt_rat(&s))));
            }
            if s == rat(0) {
                exp_eq.push((d, n));
            }
        }
    }
    checks.push(Check::new("exponent", format!("2<=d,n<={max}"), bad == 0, format!("{} points, {bad} violations", (max - 1) * (max - 1))));
    let expect: Vec<(u64, u64)> = (2..=max).map(|d| (d, 2)).collect();
    checks.push(Check::new(
        "exponent-equality",
        format!("2<=d,n<={max}"),
        exp_eq == expect,
        format!("equality at n=2 for {} values of d", exp_eq.len()),
    ));
    let rank_bad: Vec<u64> = (2..=max).filter(|&n| rank_slack(n) < rat(0)).collect();
    let rank_eq: Vec<u64> = (2..=max).filter(|&n| rank_slack(n) == rat(0)).collect();
    checks.push(Check::new("rank", format!("2<=n<={max}"), rank_bad.is_empty(), format!("violations {rank_bad:?}")));
    checks.push(Check::new("rank-equality", format!("2<=n<={max}"), rank_eq == vec![2], format!("equality at n in {rank_eq:?}")));
    GridReport { name: "reduction inequalities".into(), checks }
}

/// General basis bound `<=` intermediate form `<=` simplified `B` on the
/// given `(d, N, |D|)` grid.
pub fn basis_grid(ds: &[u32], big_ns: &[u32], discs: &[u64]) -> GridReport {
    let mut pts = Vec::new();
    for &d in ds {
        for &big_n in big_ns {
            for &disc in discs {
                pts.push((d, big_n, disc));
            }
        }
    }
    let rows = par_map(&pts, |&(d, big_n, disc)| {
        let params = format!("d={d} N={big_n} |D|={disc}");
        let fp = match FieldParams::new(d, d, 0, disc) {
            Ok(fp) => fp,
            Err(e) => return vec![Check::new("basis", params, false, e.to_string())],
        };
        let (g, i, s) = match (basis_bound_general(&fp, big_n), basis_bound_intermediate(&fp, big_n), basis_bound_simplified(&fp, big_n)) {
            (Ok(g), Ok(i), Ok(s)) => (g, i, s),
            _ => return vec![Check::new("basis", params, false, "bound undefined".into())],
        };
        let (ok1, d1) = verdict(g.compare(&i), true);
        let (ok2, d2) = verdict(i.compare(&s), true);
        vec![Check::new("general<=intermediate", params.clone(), ok1, d1), Check::new("intermediate<=simplified", params, ok2, d2)]
    });
    GridReport { name: "basis bounds".into(), checks: rows.into_iter().flatten().collect() }
}

/// The default basis grid `{2..4} x {5..9} x {3..100}`.
pub fn basis_grid_default() -> GridReport {
    let discs: Vec<u64> = (3..=100).collect();
    basis_grid(&[2, 3, 4], &[5, 6, 7, 8, 9], &discs)
}

/// Certified log10 enclosure with relative width below `rel`.
fn log10_check(b: &BigBound, rel: f64) -> (bool, String) {
    match b.log10_certified(rel) {
        Ok(iv) => (true, format!("log10 in [{:.9e}, {:.9e}]", to_f64(&iv.lo), to_f64(&iv.hi))),
        Err(e) => (false, e.to_string()),
    }
}

/// Assembled bound `<=` closed form, both routes to the assembled bound
/// agree, and the `card(Phi)` forms are ordered, on a `(d, n, |D|)` grid.
pub fn k_grid(ds: &[u32], ns: &[u32], discs: &[u64]) -> GridReport {
    let mut pts = Vec::new();
    for &d in ds {
        for &n in ns {
            for &disc in discs {
                pts.push((d, n, disc));
            }
        }
    }
    let rows = par_map(&pts, |&(d, n, disc)| {
        let params = format!("d={d} n={n} |D|={disc}");
        let res = FieldParams::new(d, d, 0, disc).and_then(|fp| {
            let kp = KParams::new(n, d)?;
            Ok((k_bound(&fp, &kp)?, fp))
        });
        let (kb, _fp) = match res {
            Ok(v) => v,
            Err(e) => return vec![Check::new("kbound", params, false, e.to_string())],
        };
        let mut out = Vec::new();
        let (ok, det) = verdict(kb.assembled.compare(&kb.closed_form), true);
        out.push(Check::new("assembled<=closed_form", params.clone(), ok, det));
        let (ok, det) = verdict(kb.relaxed.compare(&kb.closed_form), true);
        out.push(Check::new("relaxed<=closed_form", params.clone(), ok, det));
        let closed = kb.phi.closed.clone().expect("N >= 5");
        let (ok, det) = verdict(kb.phi.expanded.compare(&closed), true);
        out.push(Check::new("expanded<=closed", params.clone(), ok, det));
        let direct = log_torsion_bound(&kb.phi.expanded, d as u64, n as u64);
        let cells = log_torsion_via_cells(&kb.phi.expanded, d as u64, n as u64);
        let (ok, det) = match (direct, cells) {
            (Ok(a), Ok(b)) => verdict(a.compare(&b), false),
            (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
        };
        out.push(Check::new("cell-route", params.clone(), ok, det));
        for (label, b) in [("log10(assembled)", &kb.assembled), ("log10(closed_form)", &kb.closed_form)] {
            let (ok, det) = log10_check(b, 1e-6);
            out.push(Check::new(label, params.clone(), ok, det));
        }
        out
    });
    GridReport { name: "torsion bounds".into(), checks: rows.into_iter().flatten().collect() }
}

/// The default grid `{2..5} x {2..4} x {3, 4, 8, 49, 10^6}`.
pub fn k_grid_default() -> GridReport {
    k_grid(&[2, 3, 4, 5], &[2, 3, 4], &[3, 4, 8, 49, 1_000_000])
}

/// The closed `card(Phi)` form at `(d, N, |D|) = (2, 5, 4)` against
/// `5^300 2^10000 4^9000`.
pub fn anchor() -> GridReport {
    let mut checks = Vec::new();
    let params = "d=2 N=5 |D|=4".to_string();
    let fp = FieldParams::new(2, 0, 1, 4).expect("valid");
    let closed = phi_closed(&fp, 5).expect("N >= 5");
    let expect = BigBound::from_int(5)
        .powi(300)
        .mul(&BigBound::from_int(2).powi(10_000))
        .mul(&BigBound::from_biguint(&BigUint::from(4u32)).powi(9000));
    let (ok, det) = verdict(closed.compare(&expect), false);
    checks.push(Check::new("anchor-exact", params.clone(), ok, det));
    match (closed.log10_certified(1e-9), expect.log10_certified(1e-9)) {
        (Ok(a), Ok(b)) => {
            let overlap = a.lo <= b.hi && b.lo <= a.hi;
            checks.push(Check::new("anchor-log10", params, overlap, format!("[{:.6}, {:.6}]", to_f64(&a.lo), to_f64(&a.hi))));
        }
        (Err(e), _) | (_, Err(e)) => checks.push(Check::new("anchor-log10", params, false, e.to_string())),
    }
    GridReport { name: "anchor".into(), checks }
}

/// Every grid at its default size.
pub fn verify_all() -> Vec<GridReport> {
    vec![slack_grid(50), basis_grid_default(), k_grid_default(), anchor()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_equalities_at_n_two() {
        let r = slack_grid(12);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn small_basis_grid() {
        let r = basis_grid(&[2, 3], &[5, 9], &[3, 4, 100]);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.checks.len(), 2 * 2 * 3 * 2);
    }

    #[test]
    fn small_k_grid() {
        let r = k_grid(&[2], &[2], &[3, 1_000_000]);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn anchor_matches_expression() {
        let r = anchor();
        assert!(r.passed(), "{:?}", r.checks);
        let v: f64 = r.checks[1].detail.trim_matches(|c| c == '[' || c == ']').split(',').next().unwrap().parse().unwrap();
        assert!((v - 8638.53).abs() < 0.01);
    }

    #[test]
    fn par_map_keeps_order() {
        let v: Vec<u32> = (0..100).collect();
        assert_eq!(par_map(&v, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
