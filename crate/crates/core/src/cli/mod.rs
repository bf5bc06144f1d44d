//! Batch runner: named experiments driven by an [`ExperimentConfig`], each
//! written as one CSV file with `#` manifest lines.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{ExperimentConfig, ENV_PREFIX};

use crate::broken_line::{BrokenPoint, Dimensions, GridScheme, Side};
use crate::discrete_operator::assemble;
use crate::error::{Error, Result};
use crate::model_operators::{HHParams, ThModel};
use crate::probes::{self, Endpoint, FamilySpec, ProbeReport, SlopeCheck, Sweep};
use crate::resolvent::{coefficient_envelope, coefficient_slope, Coefficient, QuadrantTag};
use crate::riesz_kernel::{appendix_check, riesz_kernel_all, DimensionCase, RayLayout, Regime};
use crate::specfun::{bessel_i, bessel_k, profile, profile_wronskian, BesselOrder};

/// Registered experiment: stable id and the statement it exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Experiment {
    pub id: &'static str,
    pub tests: &'static str,
}

pub const EXPERIMENTS: [Experiment; 13] = [
    Experiment { id: "specfun", tests: "modified Bessel functions and radial profile solutions" },
    Experiment { id: "resolvent-checks", tests: "discrete resolvent columns against the exact kernel" },
    Experiment { id: "appendix-exponents", tests: "low energy exponent tables, all quadrants and orderings" },
    Experiment { id: "coefficient-asymptotics", tests: "small-energy behaviour of the junction coefficients" },
    Experiment { id: "hh-strong", tests: "strong type of the Hardy-Hilbert pair R1 + R2" },
    Experiment { id: "hh-endpoint", tests: "restricted weak type of R1 and R2, Lorentz boundedness of R1" },
    Experiment { id: "th-model", tests: "L^p boundedness of the high energy model kernel" },
    Experiment { id: "tij-envelopes", tests: "decay envelopes of T_ij and slopes of I_j(lambda)" },
    Experiment { id: "hardy", tests: "Hardy inequality below d_* and its endpoint witness" },
    Experiment { id: "riesz-lp", tests: "Riesz transform bounded for p < p0, unbounded at p0" },
    Experiment { id: "riesz-endpoint", tests: "Riesz transform restricted weak type (p0, p0)" },
    Experiment { id: "reverse-riesz", tests: "reverse Riesz inequality range" },
    Experiment { id: "duality", tests: "duality identity between the half Laplacian and the Riesz transform" },
];

/// Text table of experiment ids.
pub fn list_experiments() -> String {
    let mut s = String::new();
    for e in EXPERIMENTS {
        s.push_str(&format!("{:<25} {}\n", e.id, e.tests));
    }
    s
}

/// In-memory CSV body.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

const PROBE_HEADER: [&str; 13] =
    ["experiment", "d1", "d2", "p", "q", "R", "n_nodes", "sup_ratio", "verdict", "fit_slope", "fit_r2", "seed", "wall_ms"];

fn probe_rows(table: &mut Table, report: &ProbeReport, wall_ms: Option<u128>) {
    for row in &report.rows {
        table.push(vec![
            report.experiment.clone(),
            num(report.dims.d1),
            num(report.dims.d2),
            num(report.p),
            opt(report.q),
            num(row.truncation),
            row.nodes.to_string(),
            num(row.ratio),
            report.verdict.name().into(),
            opt(report.fit.map(|f| f.slope)),
            opt(report.fit.map(|f| f.r2)),
            report.seed.to_string(),
            wall_ms.map(|t| t.to_string()).unwrap_or_default(),
        ]);
    }
}

/// Probe reports in the common probe schema.
pub fn probe_table(reports: &[ProbeReport]) -> Table {
    let mut t = Table::new(&PROBE_HEADER);
    for r in reports {
        probe_rows(&mut t, r, None);
    }
    t
}

/// Runs a probe closure and appends its reports, timing it when enabled.
fn timed_probes(table: &mut Table, timing: bool, run: impl FnOnce() -> Result<Vec<ProbeReport>>) -> Result<()> {
    let start = Instant::now();
    let reports = run()?;
    let wall = timing.then(|| start.elapsed().as_millis());
    for r in &reports {
        probe_rows(table, r, wall);
    }
    Ok(())
}

/// Deterministic per-experiment seed.
pub fn experiment_seed(base: u64, id: &str) -> u64 {
    let index = EXPERIMENTS.iter().position(|e| e.id == id).unwrap_or(EXPERIMENTS.len()) as u64;
    base ^ (index + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn scheme(cfg: &ExperimentConfig) -> GridScheme {
    cfg.grid.scheme.into()
}

fn family_spec(cfg: &ExperimentConfig, p_min: f64) -> FamilySpec {
    FamilySpec {
        bumps: cfg.family.bumps,
        power_laws: cfg.family.power_laws,
        indicators: cfg.family.indicators,
        ..FamilySpec::standard(p_min, cfg.family.max_radius)
    }
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn sweep(cfg: &ExperimentConfig, truncations: &[f64]) -> Result<Sweep> {
    let mut s = Sweep::new(truncations.to_vec(), cfg.grid.nodes_per_side)?;
    s.scheme = scheme(cfg);
    Ok(s)
}

fn hh_params(cfg: &ExperimentConfig) -> Result<HHParams> {
    let h = &cfg.hh;
    HHParams::new(h.alpha, h.beta, h.alpha_p, h.beta_p, h.n1, h.n2)
}

fn ray_family(n1: f64, spec: FamilySpec, seed: u64) -> Result<Vec<probes::FamilyMember>> {
    probes::test_family(Dimensions::new(n1, n1)?, &spec.on(&[Side::Positive]), seed)
}

/// Runs one experiment and returns its table.
pub fn run_experiment(id: &str, cfg: &ExperimentConfig) -> Result<Table> {
    let seed = experiment_seed(cfg.seed, id);
    let dims = cfg.dimensions();
    let timing = cfg.timing;
    match id {
        "specfun" => specfun_table(cfg),
        "resolvent-checks" => {
            let mut t = Table::new(&["d1", "d2", "lambda", "source", "R", "n_nodes", "max_rel_error", "compared"]);
            for &lambda in &cfg.resolvent.lambdas {
                for side in [Side::Positive, Side::Negative] {
                    let source = BrokenPoint::new(side, 5.0)?;
                    for &nodes in &cfg.resolvent.nodes {
                        let op = assemble(crate::broken_line::Grid::build(dims, cfg.resolvent.truncation, nodes, scheme(cfg))?)?;
                        let c = op.resolvent_column_check(lambda, source)?;
                        t.push(vec![
                            num(dims.d1),
                            num(dims.d2),
                            num(lambda),
                            num(c.source.coordinate()),
                            num(cfg.resolvent.truncation),
                            nodes.to_string(),
                            num(c.max_rel_error),
                            c.compared.to_string(),
                        ]);
                    }
                }
            }
            Ok(t)
        }
        "appendix-exponents" => {
            let mut t = Table::new(&[
                "case", "d1", "d2", "quadrant", "regime", "predicted_x", "fitted_x", "predicted_y", "fitted_y", "two_sided", "pass",
            ]);
            for [d1, d2] in &cfg.cases {
                let dims = Dimensions::new(*d1, *d2)?;
                for q in QuadrantTag::ALL {
                    for regime in [Regime::XSmall, Regime::XLarge] {
                        let c = appendix_check(dims, q, regime, cfg.tij.epsilon, RayLayout::default(), cfg.quadrature.tol)?;
                        t.push(vec![
                            c.case.name().into(),
                            num(*d1),
                            num(*d2),
                            q.name().into(),
                            regime.name().into(),
                            num(c.predicted.x),
                            num(c.x_fit.slope),
                            num(c.predicted.y),
                            num(c.y_fit.slope),
                            c.predicted.two_sided.to_string(),
                            c.passes().to_string(),
                        ]);
                    }
                }
            }
            Ok(t)
        }
        "coefficient-asymptotics" => {
            let mut t = Table::new(&["case", "d1", "d2", "coefficient", "exponent", "fitted_slope", "envelope_coarse", "envelope_fine"]);
            for [d1, d2] in &cfg.cases {
                let dims = Dimensions::new(*d1, *d2)?;
                let case = DimensionCase::classify(dims).ok_or_else(|| Error::Config("cases need d1 < d2".into()))?;
                for which in [Coefficient::A, Coefficient::B, Coefficient::C] {
                    let gamma = case.small_lambda_exponent(dims, which);
                    let fit = coefficient_slope(dims, which, 1e-4, 1e-2, 21)?;
                    let coarse = coefficient_envelope(dims, which, gamma, 1e-4, 1.0, 10)?;
                    let fine = coefficient_envelope(dims, which, gamma, 1e-4, 1.0, 40)?;
                    t.push(vec![
                        case.name().into(),
                        num(*d1),
                        num(*d2),
                        format!("{which:?}"),
                        num(gamma),
                        num(fit.slope),
                        num(coarse),
                        num(fine),
                    ]);
                }
            }
            Ok(t)
        }
        "hh-strong" => {
            let params = hh_params(cfg)?;
            let mut t = Table::new(&PROBE_HEADER);
            let family = ray_family(params.n1, family_spec(cfg, min_of(&cfg.hh.p)), seed)?;
            timed_probes(&mut t, timing, || probes::hh_strong_probe(&params, &cfg.hh.p, &family, &cfg.grid.truncations, cfg.hh.per_decade, seed))?;
            if !params.strong_type_admissible(cfg.hh.witness_p) {
                timed_probes(&mut t, timing, || {
                    Ok(vec![probes::hh_witness_probe(&params, cfg.hh.witness_p, &cfg.probe.witness_truncations, cfg.hh.per_decade)?])
                })?;
            }
            Ok(t)
        }
        "hh-endpoint" => {
            let params = hh_params(cfg)?;
            let mut t = Table::new(&PROBE_HEADER);
            let sets = ray_family(params.n1, FamilySpec::indicators_only(cfg.family.sets, min_of(&cfg.probe.witness_truncations)), seed)?;
            let rs = &cfg.probe.witness_truncations;
            let per_decade = cfg.hh.per_decade;
            let p_end = params.n1 / (params.n1 - params.beta);
            if let Some(q) = params.r1_weak_target(p_end) {
                timed_probes(&mut t, timing, || Ok(vec![probes::hh_endpoint_probe(&params, Endpoint::R1Weak, p_end, q, &sets, rs, per_decade, seed)?]))?;
            }
            for &p in &cfg.hh.r2_p {
                if let Some(q) = params.r2_weak_target(p) {
                    timed_probes(&mut t, timing, || Ok(vec![probes::hh_endpoint_probe(&params, Endpoint::R2Weak, p, q, &sets, rs, per_decade, seed)?]))?;
                }
            }
            for &p in &cfg.hh.lorentz_p {
                if params.n2 / params.alpha < p && params.r1_weak_target(p).is_some() {
                    timed_probes(&mut t, timing, || Ok(vec![probes::hh_endpoint_probe(&params, Endpoint::R1Lorentz, p, p, &sets, rs, per_decade, seed)?]))?;
                }
            }
            Ok(t)
        }
        "th-model" => {
            let th = &cfg.th;
            let model = ThModel::new(th.a, th.b, th.c, th.n1, th.n2)?;
            let family = ray_family(th.n1, family_spec(cfg, min_of(&th.p)), seed)?;
            let mut t = Table::new(&PROBE_HEADER);
            timed_probes(&mut t, timing, || probes::th_model_probe(&model, &th.p, &family, &cfg.grid.truncations, th.per_decade, seed))?;
            Ok(t)
        }
        "tij-envelopes" => {
            let mut t = Table::new(&["check", "fitted", "r2", "predicted", "tolerance", "kind", "pass"]);
            let mut push = |c: SlopeCheck| {
                t.push(vec![
                    c.label.clone(),
                    num(c.fitted),
                    num(c.r2),
                    num(c.predicted),
                    num(c.tolerance),
                    if c.two_sided { "two-sided" } else { "envelope" }.into(),
                    c.pass().to_string(),
                ])
            };
            let tij = &cfg.tij;
            push(probes::tij_envelope_probe(Dimensions::new(1.5, 1.8)?, 1, 2, 2.0, tij.epsilon, tij.nodes_per_side, tij.tol)?);
            push(probes::tij_envelope_probe(Dimensions::new(2.5, 3.5)?, 2, 2, 10.0, tij.epsilon, tij.nodes_per_side, tij.tol)?);
            for (d, q) in [(1.5, 2.0), (3.0, 2.0), (3.0, 6.0)] {
                push(probes::ij_slope_probe(d, q)?);
            }
            Ok(t)
        }
        "hardy" => {
            let mut t = Table::new(&PROBE_HEADER);
            let family = probes::test_family(dims, &family_spec(cfg, min_of(&cfg.probe.hardy_p)).vanishing(), seed)?;
            let s = sweep(cfg, &cfg.grid.truncations)?;
            for &p in &cfg.probe.hardy_p {
                timed_probes(&mut t, timing, || Ok(vec![probes::hardy_probe(dims, p, &family, &s, seed)?]))?;
            }
            let w = sweep(cfg, &cfg.probe.witness_truncations)?;
            timed_probes(&mut t, timing, || Ok(vec![probes::hardy_witness_probe(dims, dims.d_star(), &w)?]))?;
            Ok(t)
        }
        "riesz-lp" => {
            let mut t = Table::new(&PROBE_HEADER);
            let family = probes::test_family(dims, &family_spec(cfg, min_of(&cfg.probe.p)), seed)?;
            let s = sweep(cfg, &cfg.grid.truncations)?;
            timed_probes(&mut t, timing, || probes::riesz_lp_probe(dims, &cfg.probe.p, &family, &s, seed))?;
            if dims.d_star() != 2.0 {
                let w = sweep(cfg, &cfg.probe.witness_truncations)?;
                timed_probes(&mut t, timing, || Ok(vec![probes::riesz_witness_probe(dims, None, &w)?]))?;
            }
            Ok(t)
        }
        "riesz-endpoint" => {
            let mut t = Table::new(&PROBE_HEADER);
            let rs = &cfg.probe.endpoint_truncations;
            let sets = probes::test_family(dims, &FamilySpec::indicators_only(cfg.family.sets, min_of(rs)), seed)?;
            let s = sweep(cfg, rs)?;
            timed_probes(&mut t, timing, || {
                let (weak, strong) = probes::restricted_weak_probe(dims, &sets, &s, seed)?;
                Ok(vec![weak, strong])
            })?;
            Ok(t)
        }
        "reverse-riesz" => {
            let mut t = Table::new(&PROBE_HEADER);
            let family = probes::test_family(dims, &family_spec(cfg, min_of(&cfg.probe.reverse_p)).vanishing(), seed)?;
            let s = sweep(cfg, &cfg.grid.truncations)?;
            timed_probes(&mut t, timing, || probes::reverse_riesz_probe(dims, &cfg.probe.reverse_p, &family, &s, seed))?;
            Ok(t)
        }
        "duality" => {
            let mut t = Table::new(&["experiment", "d1", "d2", "R", "n_nodes", "pairs", "max_defect", "self_defect", "flagged", "seed"]);
            let n = cfg.family.duality_pairs;
            let spec = FamilySpec { bumps: n, power_laws: 0, indicators: 0, ..FamilySpec::standard(1.5, cfg.family.max_radius) };
            let fs = probes::test_family(dims, &spec, seed)?;
            let gs = probes::test_family(dims, &spec, seed.wrapping_add(1))?;
            let r = min_of(&cfg.grid.truncations);
            let d = probes::duality_identity_probe(dims, r, cfg.grid.nodes_per_side, &fs, &gs, seed)?;
            t.push(vec![
                "duality".into(),
                num(dims.d1),
                num(dims.d2),
                num(r),
                cfg.grid.nodes_per_side.to_string(),
                d.pairs.to_string(),
                num(d.max_defect),
                num(d.self_defect),
                d.flagged.to_string(),
                seed.to_string(),
            ]);
            Ok(t)
        }
        other => Err(Error::Config(format!("unknown experiment id `{other}`"))),
    }
}

fn specfun_table(cfg: &ExperimentConfig) -> Result<Table> {
    let mut t = Table::new(&["kind", "order_or_dim", "x", "value_1", "value_2", "value_3"]);
    for nu in [0.0, 0.25, 0.5, 1.0, 1.5] {
        let order = BesselOrder::new(nu)?;
        for x in [0.01, 0.1, 1.0, 10.0, 50.0] {
            t.push(vec!["bessel_i_k".into(), num(nu), num(x), num(bessel_i(order, x)?), num(bessel_k(order, x)?), String::new()]);
        }
    }
    let mut dims: Vec<f64> = cfg.cases.iter().flatten().cloned().collect();
    dims.sort_by(f64::total_cmp);
    dims.dedup();
    for d in dims {
        for r in [0.01, 0.1, 1.0, 10.0] {
            let p = profile(d, r)?;
            t.push(vec!["profile_k_l_wronskian".into(), num(d), num(r), num(p.k), num(p.l), num(profile_wronskian(d, r)?)]);
        }
    }
    Ok(t)
}

/// Riesz kernel parts at one pair of points, for the `riesz-kernel` command.
pub fn riesz_kernel_table(dims: Dimensions, x: f64, y: f64, tol: f64) -> Result<Table> {
    let v = riesz_kernel_all(dims, BrokenPoint::at(x)?, BrokenPoint::at(y)?, tol)?;
    let mut t = Table::new(&["d1", "d2", "x", "y", "tl", "th", "kl", "full"]);
    t.push(vec![num(dims.d1), num(dims.d2), num(x), num(y), num(v.tl), num(v.th), num(v.kl), num(v.full)]);
    Ok(t)
}

/// Writes a table with manifest lines to `out`.
pub fn write_table<W: Write>(mut out: W, id: &str, cfg: &ExperimentConfig, table: &Table) -> Result<()> {
    write_manifest(&mut out, id, cfg)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn write_manifest<W: Write>(out: &mut W, id: &str, cfg: &ExperimentConfig) -> Result<()> {
    writeln!(out, "# brokenline {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# experiment: {id}")?;
    writeln!(out, "# config_sha256: {}", cfg.hash())?;
    writeln!(out, "# seed: {}", experiment_seed(cfg.seed, id))?;
    for line in cfg.canonical().lines().filter(|l| !l.is_empty()) {
        writeln!(out, "# config: {line}")?;
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Outcome of a batch run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub written: Vec<PathBuf>,
    pub failed: Vec<(String, String)>,
}

impl RunSummary {
    pub fn success(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Runs the selected experiments into `cfg.out`. Failed experiments leave a
/// CSV holding only the manifest and a `# status: failed` line.
pub fn run(cfg: &ExperimentConfig, ids: &[&str]) -> Result<RunSummary> {
    let dir = &cfg.out;
    fs::create_dir_all(dir)?;
    let mut summary = RunSummary { written: Vec::new(), failed: Vec::new() };
    let mut timings = Vec::new();
    for &id in ids {
        let path = dir.join(format!("{id}.csv"));
        let start = Instant::now();
        let result = run_experiment(id, cfg);
        timings.push((id, start.elapsed().as_secs_f64()));
        let file = fs::File::create(&path)?;
        match result {
            Ok(table) => write_table(std::io::BufWriter::new(file), id, cfg, &table)?,
            Err(e) => {
                let mut w = std::io::BufWriter::new(file);
                write_manifest(&mut w, id, cfg)?;
                writeln!(w, "# status: failed: {e}")?;
                summary.failed.push((id.to_string(), e.to_string()));
            }
        }
        summary.written.push(path);
    }
    write_run_manifest(dir, cfg, &timings, &summary)?;
    Ok(summary)
}

fn write_run_manifest(dir: &Path, cfg: &ExperimentConfig, timings: &[(&str, f64)], summary: &RunSummary) -> Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(dir.join("manifest.txt"))?);
    writeln!(w, "brokenline {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "config_sha256 = {}", cfg.hash())?;
    for (id, secs) in timings {
        let status = if summary.failed.iter().any(|(f, _)| f == id) { "failed" } else { "ok" };
        writeln!(w, "{id}: {status} in {secs:.2}s")?;
    }
    writeln!(w, "\n{}", cfg.canonical())?;
    Ok(())
}

/// Ids selected by a config: its list, or every registered experiment.
pub fn selected_ids(cfg: &ExperimentConfig) -> Vec<&'static str> {
    if cfg.experiments.is_empty() {
        EXPERIMENTS.iter().map(|e| e.id).collect()
    } else {
        EXPERIMENTS.iter().map(|e| e.id).filter(|id| cfg.experiments.iter().any(|s| s == id)).collect()
    }
}
