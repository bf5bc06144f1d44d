//! Decay of the low-energy operators `T_ij` on a fixed bump and the small-λ
//! slopes of the profile integrals `I_j(λ)`.

use brokenline::broken_line::Dimensions;
use brokenline::probes::{ij_slope_probe, tij_envelope_probe, SlopeCheck};

fn show(c: &SlopeCheck) {
    let kind = if c.two_sided { "±" } else { "≤ +" };
    println!("{:<28} fitted {:>8.4} (r2 {:.4})  predicted {:>7.3} {kind}{}  {}", c.label, c.fitted, c.r2, c.predicted, c.tolerance, if c.pass() { "ok" } else { "MISS" });
}

fn main() -> brokenline::Result<()> {
    show(&tij_envelope_probe(Dimensions::new(1.5, 1.8)?, 1, 2, 2.0, 0.05, 300, 1e-6)?);
    show(&tij_envelope_probe(Dimensions::new(2.5, 3.5)?, 2, 2, 10.0, 0.05, 300, 1e-6)?);
    for (d, q) in [(1.5, 2.0), (3.0, 2.0), (3.0, 6.0)] {
        show(&ij_slope_probe(d, q)?);
    }
    Ok(())
}
