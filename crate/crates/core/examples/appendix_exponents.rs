//! Fits the low energy exponents in every quadrant and ordering for the
//! four dimension regimes and compares them with the predicted tables.

use brokenline::broken_line::Dimensions;
use brokenline::resolvent::QuadrantTag;
use brokenline::riesz_kernel::{appendix_check, RayLayout, Regime, DEFAULT_EPSILON};

fn main() -> brokenline::Result<()> {
    let cases = [(1.5, 1.8), (1.5, 2.0), (1.5, 3.0), (2.5, 3.5)];
    println!("case        quad regime   pred_x  fit_x   pred_y  fit_y   kind      ok");
    for (d1, d2) in cases {
        let dims = Dimensions::new(d1, d2)?;
        for q in QuadrantTag::ALL {
            for regime in [Regime::XSmall, Regime::XLarge] {
                let c = appendix_check(dims, q, regime, DEFAULT_EPSILON, RayLayout::default(), 1e-8)?;
                println!(
                    "({d1},{d2})  {}   {:8} {:7.3} {:7.3} {:7.3} {:7.3} {:9} {}",
                    q.name(),
                    regime.name(),
                    c.predicted.x,
                    c.x_fit.slope,
                    c.predicted.y,
                    c.y_fit.slope,
                    if c.predicted.two_sided { "two-sided" } else { "envelope" },
                    c.passes()
                );
            }
        }
    }
    Ok(())
}
