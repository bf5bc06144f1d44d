//! Power-law input whose Riesz ratio grows with the truncation at `p0`.

use brokenline::broken_line::Dimensions;
use brokenline::probes::{riesz_witness_probe, Sweep};

fn main() -> brokenline::Result<()> {
    let dims = Dimensions::new(1.5, 3.0)?;
    let sweep = Sweep::new(vec![1e2, 1e3, 1e4, 1e6], 4000)?;
    let r = riesz_witness_probe(dims, None, &sweep)?;
    println!("p0 = {}", dims.p0());
    for row in &r.rows {
        println!("R={:>8.0e} ratio={:.4}", row.truncation, row.ratio);
    }
    println!("{} (r2 {:.4})", r.verdict.name(), r.fit.map_or(f64::NAN, |f| f.r2));
    Ok(())
}
