//! Hardy ratios `‖f/|x|‖_p / ‖f'‖_p` below the critical exponent and the
//! log-tent witness at it.

use brokenline::broken_line::Dimensions;
use brokenline::probes::{hardy_probe, hardy_witness_probe, test_family, FamilySpec, Sweep};

fn main() -> brokenline::Result<()> {
    let sweep = Sweep::new(vec![1250.0, 2500.0, 5000.0, 1e4], 4000)?;
    for (d1, d2, p) in [(3.0, 3.5, 2.0), (1.5, 3.0, 1.2)] {
        let dims = Dimensions::new(d1, d2)?;
        let family = test_family(dims, &FamilySpec::standard(p, 1e3).vanishing(), 5)?;
        let r = hardy_probe(dims, p, &family, &sweep, 5)?;
        println!("({d1}, {d2}) p={p}: sup={:.4} {} drift={:.3}", r.sup_ratio(), r.verdict.name(), r.max_drift);
    }
    let dims = Dimensions::new(1.5, 3.0)?;
    let r = hardy_witness_probe(dims, 1.5, &Sweep::new(vec![1e2, 1e4, 1e6], 4000)?)?;
    let ratios: Vec<String> = r.rows.iter().map(|row| format!("R={:.0e}:{:.4}", row.truncation, row.ratio)).collect();
    println!("witness p=1.5: {} {}", r.verdict.name(), ratios.join(" "));
    Ok(())
}
