//! Hardy-Hilbert pair on a ray: strong-type sweep inside the admissible
//! range, a growth witness outside it, and the Lorentz endpoint ratios.

use brokenline::broken_line::{Dimensions, Side};
use brokenline::model_operators::{HHParams, ThModel};
use brokenline::probes::{hh_endpoint_probe, hh_strong_probe, hh_witness_probe, test_family, th_model_probe, Endpoint, FamilySpec, ProbeReport};

fn show(r: &ProbeReport) {
    let ratios: Vec<String> = r.rows.iter().map(|row| format!("R={:.0e}:{:.4}", row.truncation, row.ratio)).collect();
    println!("{:<20} p={:<5} q={:<6} {:<15} drift={:.3}  {}", r.experiment, r.p, r.q.map(|q| format!("{q:.3}")).unwrap_or_default(), r.verdict.name(), r.max_drift, ratios.join(" "));
}

fn main() -> brokenline::Result<()> {
    let params = HHParams::new(2.0, 1.5, 2.5, 0.5, 2.0, 2.5)?;
    let per_decade = 200;
    let ray = Dimensions::new(params.n1, params.n1)?;
    let family = test_family(ray, &FamilySpec::standard(1.5, 1e3).on(&[Side::Positive]), 3)?;
    let doublings = [1250.0, 2500.0, 5000.0, 1e4];
    for p in [1.5, 2.0, 3.0] {
        assert!(params.strong_type_admissible(p));
    }
    for r in hh_strong_probe(&params, &[1.5, 2.0, 3.0], &family, &doublings, per_decade, 3)? {
        show(&r);
    }
    show(&hh_witness_probe(&params, 5.0, &[1e2, 1e4, 1e6], per_decade)?);

    let sets = test_family(ray, &FamilySpec::indicators_only(30, 1e2).on(&[Side::Positive]), 4)?;
    let wide = [1e2, 1e4, 1e6];
    let p = params.n1 / (params.n1 - params.beta);
    let q = params.r1_weak_target(p).expect("endpoint inside the lemma range");
    show(&hh_endpoint_probe(&params, Endpoint::R1Weak, p, q, &sets, &wide, per_decade, 4)?);
    for p in [1.25, 2.0] {
        let q = params.r2_weak_target(p).expect("R2 threshold defined");
        show(&hh_endpoint_probe(&params, Endpoint::R2Weak, p, q, &sets, &wide, per_decade, 4)?);
    }
    for p in [2.0, 4.0] {
        show(&hh_endpoint_probe(&params, Endpoint::R1Lorentz, p, p, &sets, &wide, per_decade, 4)?);
    }

    let model = ThModel::new(1.0, 1.0, 1.0, 2.0, 2.5)?;
    let family = test_family(Dimensions::new(2.0, 2.0)?, &FamilySpec::standard(1.5, 1e3).on(&[Side::Positive]), 5)?;
    for r in th_model_probe(&model, &[1.5, 2.0, 4.0], &family, &doublings, 40, 5)? {
        show(&r);
    }
    Ok(())
}
