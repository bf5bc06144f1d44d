//! Riesz transform probes: bounded range, counterexample growth and the
//! restricted weak endpoint, for one dimension pair.

use std::time::Instant;

use brokenline::broken_line::Dimensions;
use brokenline::probes::{restricted_weak_probe, riesz_lp_probe, riesz_witness_probe, test_family, FamilySpec, ProbeReport, Sweep};

fn show(r: &ProbeReport) {
    let ratios: Vec<String> = r.rows.iter().map(|row| format!("R={:.0e}:{:.4}", row.truncation, row.ratio)).collect();
    let r2 = r.fit.map(|f| f.r2).unwrap_or(f64::NAN);
    println!("{:<22} p={:<5} {:<15} drift={:.3} r2={:.3}  {}", r.experiment, r.p, r.verdict.name(), r.max_drift, r2, ratios.join(" "));
}

fn main() -> brokenline::Result<()> {
    let dims = Dimensions::new(1.5, 3.0)?;
    let nodes = 4000;

    let t = Instant::now();
    let family = test_family(dims, &FamilySpec::standard(1.3, 1e3), 2024)?;
    let sweep = Sweep::new(vec![1250.0, 2500.0, 5000.0, 1e4], nodes)?;
    for r in riesz_lp_probe(dims, &[1.3, 2.0, 2.5], &family, &sweep, 2024)? {
        show(&r);
    }
    eprintln!("bounded range: {:.1}s", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let sweep = Sweep::new(vec![1e2, 1e3, 1e4, 1e6], nodes)?;
    show(&riesz_witness_probe(dims, None, &sweep)?);
    show(&riesz_witness_probe(Dimensions::new(2.5, 3.5)?, None, &sweep)?);
    eprintln!("witness: {:.1}s", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let sets = test_family(dims, &FamilySpec::indicators_only(30, 1e2), 7)?;
    let sweep = Sweep::new(vec![1e2, 1e4], nodes)?;
    let (weak, strong) = restricted_weak_probe(dims, &sets, &sweep, 7)?;
    show(&weak);
    show(&strong);
    eprintln!("endpoint: {:.1}s", t.elapsed().as_secs_f64());
    Ok(())
}
