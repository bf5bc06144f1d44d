//! Reverse Riesz ratios `‖Δ^{1/2} f‖_p / ‖∇f‖_p` over a family vanishing at
//! the junction.

use brokenline::broken_line::Dimensions;
use brokenline::probes::{reverse_riesz_probe, test_family, FamilySpec, Sweep};

fn main() -> brokenline::Result<()> {
    let sweep = Sweep::new(vec![1250.0, 2500.0, 5000.0, 1e4], 4000)?;
    for (d1, d2, ps) in [(1.5, 3.0, vec![1.2, 2.0, 5.0]), (2.5, 3.5, vec![1.5, 2.0, 4.0])] {
        let dims = Dimensions::new(d1, d2)?;
        let p_min = ps.iter().cloned().fold(f64::INFINITY, f64::min);
        let family = test_family(dims, &FamilySpec::standard(p_min, 1e3).vanishing(), 11)?;
        for r in reverse_riesz_probe(dims, &ps, &family, &sweep, 11)? {
            let ratios: Vec<String> = r.rows.iter().map(|row| format!("{:.6}", row.ratio)).collect();
            println!("({d1}, {d2}) p={:<4} {:<15} drift={:.3}  {}", r.p, r.verdict.name(), r.max_drift, ratios.join(" "));
        }
    }
    Ok(())
}
