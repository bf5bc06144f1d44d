//! Small-λ behaviour of the junction coefficients in the four dimension
//! regimes: fitted slope of `A` and envelope ratios of `|B|`, `|C|`.

use brokenline::broken_line::Dimensions;
use brokenline::resolvent::{coefficient_envelope, coefficient_slope, Coefficient};
use brokenline::riesz_kernel::DimensionCase;

fn main() -> brokenline::Result<()> {
    println!("case,d1,d2,coefficient,exponent,fitted_slope,envelope_10,envelope_40");
    for (d1, d2) in [(1.5, 1.8), (1.5, 2.0), (1.5, 3.0), (2.5, 3.5)] {
        let dims = Dimensions::new(d1, d2)?;
        let case = DimensionCase::classify(dims).expect("distinct dimensions");
        for which in [Coefficient::A, Coefficient::B, Coefficient::C] {
            let gamma = case.small_lambda_exponent(dims, which);
            let fit = coefficient_slope(dims, which, 1e-4, 1e-2, 21)?;
            let coarse = coefficient_envelope(dims, which, gamma, 1e-4, 1.0, 10)?;
            let fine = coefficient_envelope(dims, which, gamma, 1e-4, 1.0, 40)?;
            println!("{},{d1},{d2},{which:?},{gamma:.3},{:.4},{coarse:.5},{fine:.5}", case.name(), fit.slope);
        }
    }
    Ok(())
}
