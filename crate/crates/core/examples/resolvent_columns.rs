//! Discrete resolvent columns against the exact kernel, with refinement.

use brokenline::broken_line::{BrokenPoint, Dimensions, Grid, GridScheme, Side};
use brokenline::discrete_operator::assemble;

fn main() -> brokenline::Result<()> {
    let dims = Dimensions::new(1.5, 3.0)?;
    println!("lambda,source,nodes,max_rel_error,compared");
    for lambda in [0.3, 1.0, 3.0] {
        for source in [BrokenPoint::new(Side::Positive, 5.0)?, BrokenPoint::new(Side::Negative, 5.0)?] {
            for nodes in [1000, 2000, 4000] {
                let op = assemble(Grid::build(dims, 50.0, nodes, GridScheme::Log)?)?;
                let c = op.resolvent_column_check(lambda, source)?;
                println!("{lambda},{:.3},{nodes},{:.3e},{}", c.source.coordinate(), c.max_rel_error, c.compared);
            }
        }
    }
    Ok(())
}
