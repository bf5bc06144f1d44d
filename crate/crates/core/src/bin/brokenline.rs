use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use brokenline::broken_line::Dimensions;
use brokenline::cli::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "brokenline", version, about = "Riesz transform experiments on the broken line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML config; environment variables prefixed BROKENLINE_ override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiments selected by the config (all when none are listed).
    Run(Common),
    /// Print the experiment ids.
    ListExperiments,
    /// Bessel and profile spot values.
    Specfun(Common),
    /// Resolvent column checks and coefficient asymptotics.
    Resolvent(Common),
    /// Riesz kernel parts at one pair of coordinates.
    RieszKernel {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
    },
    /// Low energy exponent fits for every quadrant and ordering.
    FitAppendix(Common),
    /// Hardy-Hilbert strong type, endpoints and the high energy model kernel.
    HhProbe(Common),
    /// T_ij decay envelopes and I_j slopes.
    TijProbe(Common),
    /// Riesz ratio of the truncated unboundedness witness.
    Counterexample(Common),
}

fn load(common: &Common) -> brokenline::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(common.config.as_deref())?;
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if common.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global()
            .map_err(|e| brokenline::Error::Config(e.to_string()))?;
    }
    Ok(cfg)
}

fn batch(common: &Common, ids: Option<&[&str]>) -> brokenline::Result<bool> {
    let cfg = load(common)?;
    let selected = match ids {
        Some(ids) => ids.to_vec(),
        None => cli::selected_ids(&cfg),
    };
    let summary = cli::run(&cfg, &selected)?;
    for path in &summary.written {
        eprintln!("wrote {}", path.display());
    }
    for (id, err) in &summary.failed {
        eprintln!("{id} failed: {err}");
    }
    Ok(summary.success())
}

fn counterexample(common: &Common) -> brokenline::Result<bool> {
    let cfg = load(common)?;
    std::fs::create_dir_all(&cfg.out)?;
    let dims = cfg.dimensions();
    let mut sweep = brokenline::probes::Sweep::new(cfg.probe.witness_truncations.clone(), cfg.grid.nodes_per_side)?;
    sweep.scheme = cfg.grid.scheme.into();
    let report = brokenline::probes::riesz_witness_probe(dims, None, &sweep)?;
    let path = cfg.out.join("counterexample.csv");
    let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
    cli::write_table(file, "counterexample", &cfg, &cli::probe_table(&[report]))?;
    eprintln!("wrote {}", path.display());
    Ok(true)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let result = match &args.command {
        Command::Run(c) => batch(c, None),
        Command::ListExperiments => {
            print!("{}", cli::list_experiments());
            Ok(true)
        }
        Command::Specfun(c) => batch(c, Some(&["specfun"])),
        Command::Resolvent(c) => batch(c, Some(&["resolvent-checks", "coefficient-asymptotics"])),
        Command::FitAppendix(c) => batch(c, Some(&["appendix-exponents"])),
        Command::HhProbe(c) => batch(c, Some(&["hh-strong", "hh-endpoint", "th-model"])),
        Command::TijProbe(c) => batch(c, Some(&["tij-envelopes"])),
        Command::Counterexample(c) => counterexample(c),
        Command::RieszKernel { common, x, y } => load(common).and_then(|cfg| {
            let dims = Dimensions::new(cfg.dims.d1, cfg.dims.d2)?;
            let table = cli::riesz_kernel_table(dims, *x, *y, cfg.quadrature.tol)?;
            cli::write_table(std::io::stdout().lock(), "riesz-kernel", &cfg, &table)?;
            Ok(true)
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
