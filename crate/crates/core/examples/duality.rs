//! Discrete half-power duality pairing over random family members.

use brokenline::broken_line::Dimensions;
use brokenline::probes::{duality_identity_probe, test_family, FamilySpec};

fn main() -> brokenline::Result<()> {
    let dims = Dimensions::new(2.5, 3.5)?;
    let family = test_family(dims, &FamilySpec::standard(1.5, 100.0), 11)?;
    let (fs, gs) = family.split_at(family.len() / 2);
    let r = duality_identity_probe(dims, 200.0, 1000, fs, gs, 11)?;
    println!("pairs {} max defect {:.2e} self defect {:.2e} flagged {}", r.pairs, r.max_defect, r.self_defect, r.flagged);
    Ok(())
}
