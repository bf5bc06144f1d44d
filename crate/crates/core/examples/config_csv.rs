//! Config with an environment override, rendered as a manifest-headed CSV.

use brokenline::cli::{list_experiments, riesz_kernel_table, write_table, ExperimentConfig};

fn main() -> brokenline::Result<()> {
    let env = [("BROKENLINE_GRID__NODES_PER_SIDE".to_string(), "2000".to_string())];
    let cfg = ExperimentConfig::from_toml_with_env("seed = 7\n[dims]\nd1 = 1.5\nd2 = 3.0\n", env)?;
    println!("nodes per side {} hash {}", cfg.grid.nodes_per_side, cfg.hash());
    print!("{}", list_experiments());
    let table = riesz_kernel_table(cfg.dimensions(), 2.0, -4.0, cfg.quadrature.tol)?;
    write_table(std::io::stdout().lock(), "riesz-kernel", &cfg, &table)
}
