//! Radial profiles `l`, `k` across dimensions, with the Wronskian check.

use brokenline::specfun::{profile, profile_wronskian};

fn main() -> brokenline::Result<()> {
    println!("{:>4} {:>8} {:>14} {:>14} {:>10}", "d", "r", "l", "k", "W r^(d-1)");
    for d in [1.5, 2.0, 3.0] {
        for r in [0.01, 0.1, 1.0, 10.0] {
            let p = profile(d, r)?;
            let w = profile_wronskian(d, r)? * r.powf(d - 1.0);
            println!("{d:>4} {r:>8} {:>14.6e} {:>14.6e} {w:>10.6}", p.l, p.k);
        }
    }
    Ok(())
}
