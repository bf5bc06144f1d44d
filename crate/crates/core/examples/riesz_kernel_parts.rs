//! Low- and high-energy pieces of the Riesz kernel at a few point pairs.

use brokenline::broken_line::{BrokenPoint, Dimensions};
use brokenline::riesz_kernel::riesz_kernel_all;

fn main() -> brokenline::Result<()> {
    let dims = Dimensions::new(1.5, 3.0)?;
    for (x, y) in [(2.0, 5.0), (-3.0, 4.0), (-10.0, -2.0), (20.0, 21.0)] {
        let v = riesz_kernel_all(dims, BrokenPoint::at(x)?, BrokenPoint::at(y)?, 1e-9)?;
        println!("x={x:>6} y={y:>6}  tl={:+.5e} th={:+.5e} kl={:+.5e} full={:+.5e}", v.tl, v.th, v.kl, v.full);
    }
    Ok(())
}
