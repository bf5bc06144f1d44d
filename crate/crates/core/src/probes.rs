//! Experiments turning boundedness statements into measured ratios with a
//! deterministic verdict.
//!
//! A sweep records, for each truncation radius `R`, the supremum over a
//! function family of a norm ratio. The verdict is
//! - `growth-witness` when the ratios increase strictly, their total rise
//!   exceeds [`STABILITY_TOL`], and the designated growth regression has
//!   `r2 >= GROWTH_R2`;
//! - otherwise `bounded-stable` when every consecutive relative change is
//!   at most [`STABILITY_TOL`];
//! - otherwise `inconclusive`.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::broken_line::{BrokenPoint, Dimensions, Grid, GridFunction, GridScheme, HalfLine, LorentzExponents, Side};
use crate::discrete_operator::{assemble, FunctionalCalculus, OperatorMatrix, ResolventCalculus};
use crate::error::{invalid, Error, Result};
use crate::fit::{linear_fit, LineFit};
use crate::model_operators::{
    counterexample, hh_apply, hh_full_apply, ij_integral, ij_predicted_exponent, tij_apply, tij_envelope_exponent, CounterexampleSpec, HHParams,
    HHPart, ThModel,
};
use crate::riesz_kernel::glued_distance;

pub const STABILITY_TOL: f64 = 0.10;
pub const GROWTH_R2: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    BoundedStable,
    GrowthWitness,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::BoundedStable => "bounded-stable",
            Verdict::GrowthWitness => "growth-witness",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Abscissa of the growth regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowthLaw {
    /// `log R`
    Log,
    /// `log(1 + log R)`
    LogLog,
}

impl GrowthLaw {
    pub fn abscissa(self, truncation: f64) -> f64 {
        match self {
            GrowthLaw::Log => truncation.ln(),
            GrowthLaw::LogLog => truncation.ln().ln_1p(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub truncation: f64,
    pub nodes: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub experiment: String,
    pub dims: Dimensions,
    pub p: f64,
    pub q: Option<f64>,
    pub rows: Vec<ProbeRow>,
    pub verdict: Verdict,
    pub fit: Option<LineFit>,
    pub max_drift: f64,
    pub seed: u64,
    /// Inputs skipped because the operator could not be applied to them.
    pub flagged: usize,
}

impl ProbeReport {
    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].ratio > w[0].ratio)
    }

    pub fn sup_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }
}

/// Largest relative change between consecutive ratios.
pub fn max_drift(ratios: &[f64]) -> f64 {
    ratios.windows(2).map(|w| (w[1] - w[0]).abs() / w[0].abs()).fold(0.0, f64::max)
}

/// Applies the verdict rules to a sweep.
pub fn classify(rows: &[ProbeRow], law: GrowthLaw) -> (Verdict, Option<LineFit>, f64) {
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let drift = max_drift(&ratios);
    let xs: Vec<f64> = rows.iter().map(|r| law.abscissa(r.truncation)).collect();
    let fit = linear_fit(&xs, &ratios).ok();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let rise = match (ratios.first(), ratios.last()) {
        (Some(a), Some(b)) if *a > 0.0 => b / a - 1.0,
        _ => 0.0,
    };
    let verdict = if rows.len() >= 2 && increasing && rise > STABILITY_TOL && fit.is_some_and(|f| f.r2 >= GROWTH_R2) {
        Verdict::GrowthWitness
    } else if rows.len() >= 2 && drift <= STABILITY_TOL && ratios.iter().all(|r| r.is_finite()) {
        Verdict::BoundedStable
    } else {
        Verdict::Inconclusive
    };
    (verdict, fit, drift)
}

#[allow(clippy::too_many_arguments)]
fn report(experiment: &str, dims: Dimensions, p: f64, q: Option<f64>, rows: Vec<ProbeRow>, law: GrowthLaw, seed: u64, flagged: usize) -> ProbeReport {
    let (verdict, fit, max_drift) = classify(&rows, law);
    ProbeReport { experiment: experiment.into(), dims, p, q, rows, verdict, fit, max_drift, seed, flagged }
}

/// Member of a seeded test family, defined independently of the truncation.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// Smooth compactly supported bump in the glued distance.
    Bump { center: BrokenPoint, width: f64 },
    /// `|x|^{-γ}` on one end, continued by `e^{-4(|x|-1)}` on the other.
    PowerLaw { side: Side, exponent: f64 },
    /// Indicator of a finite union of intervals `[a, b]` on given ends.
    Indicator { intervals: Vec<(Side, f64, f64)> },
    /// Log tent `min(log r, log R - log r)` on one end, for a fixed `R`.
    LogTent { side: Side, truncation: f64 },
}

/// Cutoff vanishing at the junction; makes families vanish at `±1`.
pub fn junction_cutoff(radius: f64) -> f64 {
    (4.0 * (radius - 1.0)).tanh()
}

impl TestFunction {
    pub fn value(&self, x: BrokenPoint) -> f64 {
        match self {
            TestFunction::Bump { center, width } => {
                let s = glued_distance(x, *center) / width;
                if s >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - s * s)).exp()
                }
            }
            TestFunction::PowerLaw { side, exponent } => {
                if x.side == *side {
                    x.radius.powf(-exponent)
                } else {
                    (-4.0 * (x.radius - 1.0)).exp()
                }
            }
            TestFunction::Indicator { intervals } => {
                let inside = intervals.iter().any(|&(s, a, b)| s == x.side && a <= x.radius && x.radius <= b);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::LogTent { side, truncation } => {
                if x.side != *side || x.radius > *truncation {
                    0.0
                } else {
                    let l = x.radius.ln();
                    l.min(truncation.ln() - l)
                }
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TestFunction::Bump { .. } => "bump",
            TestFunction::PowerLaw { .. } => "power-law",
            TestFunction::Indicator { .. } => "indicator",
            TestFunction::LogTent { .. } => "log-tent",
        }
    }
}

/// A test function, optionally multiplied by the junction cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub function: TestFunction,
    pub vanishes_at_junction: bool,
}

impl FamilyMember {
    pub fn value(&self, x: BrokenPoint) -> f64 {
        let v = self.function.value(x);
        if self.vanishes_at_junction {
            v * junction_cutoff(x.radius)
        } else {
            v
        }
    }

    pub fn sample(&self, op: &OperatorMatrix) -> Vec<f64> {
        op.sample(|x| self.value(x))
    }
}

/// Composition and support of a random family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub bumps: usize,
    pub power_laws: usize,
    pub indicators: usize,
    /// Supports stay inside radius `max_radius`.
    pub max_radius: f64,
    /// Power-law exponents exceed `d / p_min` so every member lies in
    /// `L^p` for `p >= p_min`.
    pub p_min: f64,
    pub vanishes_at_junction: bool,
    /// Ends on which members may live.
    pub sides: Vec<Side>,
}

impl FamilySpec {
    pub fn standard(p_min: f64, max_radius: f64) -> Self {
        Self {
            bumps: 20,
            power_laws: 20,
            indicators: 10,
            max_radius,
            p_min,
            vanishes_at_junction: false,
            sides: vec![Side::Negative, Side::Positive],
        }
    }

    pub fn indicators_only(count: usize, max_radius: f64) -> Self {
        Self { bumps: 0, power_laws: 0, indicators: count, ..Self::standard(2.0, max_radius) }
    }

    pub fn vanishing(mut self) -> Self {
        self.vanishes_at_junction = true;
        self
    }

    pub fn on(mut self, sides: &[Side]) -> Self {
        self.sides = sides.to_vec();
        self
    }

    pub fn len(&self) -> usize {
        self.bumps + self.power_laws + self.indicators
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Seeded family; identical seeds give identical members.
pub fn test_family(dims: Dimensions, spec: &FamilySpec, seed: u64) -> Result<Vec<FamilyMember>> {
    if !(spec.max_radius > 4.0) || spec.sides.is_empty() || !(spec.p_min >= 1.0) {
        return Err(invalid("family needs max_radius > 4, p_min >= 1 and at least one end"));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(spec.len());
    let pick_side = |rng: &mut StdRng| spec.sides[rng.gen_range(0..spec.sides.len())];
    for _ in 0..spec.bumps {
        let side = pick_side(&mut rng);
        let radius = log_uniform(&mut rng, 1.0, spec.max_radius / 2.0);
        let width = rng.gen_range(0.1..0.8) * radius.max(2.0);
        let width = width.min(spec.max_radius - radius);
        out.push(TestFunction::Bump { center: BrokenPoint { side, radius }, width });
    }
    for _ in 0..spec.power_laws {
        let side = pick_side(&mut rng);
        let exponent = dims.of(side) / spec.p_min + rng.gen_range(0.3..1.5);
        out.push(TestFunction::PowerLaw { side, exponent });
    }
    for _ in 0..spec.indicators {
        let pieces = rng.gen_range(1..=4);
        let mut intervals = Vec::with_capacity(pieces);
        for _ in 0..pieces {
            let side = pick_side(&mut rng);
            let a = log_uniform(&mut rng, 1.0, spec.max_radius);
            let b = log_uniform(&mut rng, 1.0, spec.max_radius);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            intervals.push((side, a, b.max(a * 1.05).min(spec.max_radius)));
        }
        out.push(TestFunction::Indicator { intervals });
    }
    Ok(out
        .into_iter()
        .map(|function| FamilyMember { function, vanishes_at_junction: spec.vanishes_at_junction })
        .collect())
}

/// Discretization of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub truncations: Vec<f64>,
    pub nodes_per_side: usize,
    pub scheme: GridScheme,
}

impl Sweep {
    pub fn new(truncations: Vec<f64>, nodes_per_side: usize) -> Result<Self> {
        if truncations.is_empty() || truncations.iter().any(|r| !(*r > 1.0)) {
            return Err(invalid("sweep needs truncation radii above 1"));
        }
        Ok(Self { truncations, nodes_per_side, scheme: GridScheme::Log })
    }
}

struct Discretization {
    op: OperatorMatrix,
    calc: ResolventCalculus,
}

fn discretize(dims: Dimensions, truncation: f64, sweep: &Sweep) -> Result<Discretization> {
    let grid = Grid::build(dims, truncation, sweep.nodes_per_side, sweep.scheme)?;
    let op = assemble(grid)?;
    let calc = ResolventCalculus::new(&op);
    Ok(Discretization { op, calc })
}

/// Per-member norm computation shared by the operator probes; errors of
/// kind `Domain` mark the member as flagged.
fn map_members<T: Send>(
    members: &[FamilyMember],
    f: impl Fn(&FamilyMember) -> Result<T> + Sync,
) -> Result<(Vec<T>, usize)> {
    let results: Vec<Result<T>> = members.par_iter().map(&f).collect();
    let mut out = Vec::with_capacity(results.len());
    let mut flagged = 0;
    for r in results {
        match r {
            Ok(v) => out.push(v),
            Err(Error::Domain(_)) => flagged += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((out, flagged))
}

fn sup(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

/// Hardy ratio `‖f/|x|‖_p / ‖f'‖_p`, supremum over the family, per `R`.
pub fn hardy_probe(dims: Dimensions, p: f64, members: &[FamilyMember], sweep: &Sweep, seed: u64) -> Result<ProbeReport> {
    let mut rows = Vec::new();
    for &r in &sweep.truncations {
        let grid = Grid::build(dims, r, sweep.nodes_per_side, sweep.scheme)?;
        let op = assemble(grid)?;
        let (ratios, _) = map_members(members, |m| hardy_ratio(&op, &m.sample(&op), p))?;
        rows.push(ProbeRow { truncation: r, nodes: sweep.nodes_per_side, ratio: sup(ratios.into_iter()) });
    }
    Ok(report("hardy", dims, p, None, rows, GrowthLaw::Log, seed, 0))
}

/// Hardy ratio of a vertex function.
pub fn hardy_ratio(op: &OperatorMatrix, f: &[f64], p: f64) -> Result<f64> {
    let scaled: Vec<f64> = f.iter().zip(&op.points).map(|(v, x)| v / x.radius).collect();
    Ok(op.node_lp_norm(&scaled, p)? / op.edge_lp_norm(&op.gradient(f), p)?)
}

/// Hardy endpoint witness: the log tent on the `d1` end, rebuilt for each `R`.
pub fn hardy_witness_probe(dims: Dimensions, p: f64, sweep: &Sweep) -> Result<ProbeReport> {
    let mut rows = Vec::new();
    for &r in &sweep.truncations {
        let op = assemble(Grid::build(dims, r, sweep.nodes_per_side, sweep.scheme)?)?;
        let tent = TestFunction::LogTent { side: Side::Negative, truncation: r };
        let f = op.sample(|x| tent.value(x));
        rows.push(ProbeRow { truncation: r, nodes: sweep.nodes_per_side, ratio: hardy_ratio(&op, &f, p)? });
    }
    Ok(report("hardy-witness", dims, p, None, rows, GrowthLaw::Log, 0, 0))
}

/// `‖∇Δ^{-1/2} f‖_p / ‖f‖_p`, supremum over the family, one report per `p`.
pub fn riesz_lp_probe(dims: Dimensions, ps: &[f64], members: &[FamilyMember], sweep: &Sweep, seed: u64) -> Result<Vec<ProbeReport>> {
    let mut rows: Vec<Vec<ProbeRow>> = vec![Vec::new(); ps.len()];
    let mut flagged = 0;
    for &r in &sweep.truncations {
        let disc = discretize(dims, r, sweep)?;
        let (per_member, skipped) = map_members(members, |m| {
            let f = m.sample(&disc.op);
            let g = disc.calc.riesz_apply(&f)?;
            ps.iter().map(|&p| Ok(disc.op.edge_lp_norm(&g, p)? / disc.op.node_lp_norm(&f, p)?)).collect::<Result<Vec<f64>>>()
        })?;
        flagged += skipped;
        for (k, row) in rows.iter_mut().enumerate() {
            row.push(ProbeRow { truncation: r, nodes: sweep.nodes_per_side, ratio: sup(per_member.iter().map(|v| v[k])) });
        }
    }
    Ok(ps
        .iter()
        .zip(rows)
        .map(|(&p, rows)| report("riesz-lp", dims, p, None, rows, GrowthLaw::LogLog, seed, flagged))
        .collect())
}

/// Riesz ratio of the truncated unboundedness witness at `p0`, per `R`; the
/// growth regression is against `log(1 + log R)`.
pub fn riesz_witness_probe(dims: Dimensions, beta: Option<f64>, sweep: &Sweep) -> Result<ProbeReport> {
    let mut rows = Vec::new();
    let mut p0 = dims.p0();
    for &r in &sweep.truncations {
        let spec = match beta {
            Some(b) => CounterexampleSpec::with_beta(dims, r, b)?,
            None => CounterexampleSpec::new(dims, r)?,
        };
        p0 = spec.p0;
        let disc = discretize(dims, r, sweep)?;
        let f = disc.op.restrict(&counterexample(&spec, disc.op.grid.clone())?);
        let g = disc.calc.riesz_apply(&f)?;
        let ratio = disc.op.edge_lp_norm(&g, p0)? / disc.op.node_lp_norm(&f, p0)?;
        rows.push(ProbeRow { truncation: r, nodes: sweep.nodes_per_side, ratio });
    }
    Ok(report("riesz-witness", dims, p0, None, rows, GrowthLaw::LogLog, 0, 0))
}

/// `‖Δ^{1/2} f‖_p / ‖∇f‖_p` on a family vanishing at the junction.
pub fn reverse_riesz_probe(dims: Dimensions, ps: &[f64], members: &[FamilyMember], sweep: &Sweep, seed: u64) -> Result<Vec<ProbeReport>> {
    if members.iter().any(|m| !m.vanishes_at_junction) {
        return Err(invalid("reverse Riesz family must vanish at the junction"));
    }
    let mut rows: Vec<Vec<ProbeRow>> = vec![Vec::new(); ps.len()];
    let mut flagged = 0;
    for &r in &sweep.truncations {
        let disc = discretize(dims, r, sweep)?;
        let (per_member, skipped) = map_members(members, |m| {
            let f = m.sample(&disc.op);
            let half = disc.calc.apply_power(0.5, &f)?;
            let grad = disc.op.gradient(&f);
            ps.iter().map(|&p| Ok(disc.op.node_lp_norm(&half, p)? / disc.op.edge_lp_norm(&grad, p)?)).collect::<Result<Vec<f64>>>()
        })?;
        flagged += skipped;
        for (k, row) in rows.iter_mut().enumerate() {
            row.push(ProbeRow { truncation: r, nodes: sweep.nodes_per_side, ratio: sup(per_member.iter().map(|v| v[k])) });
        }
    }
    Ok(ps
        .iter()
        .zip(rows)
        .map(|(&p, rows)| report("reverse-riesz", dims, p, None, rows, GrowthLaw::Log, seed, flagged))
        .collect())
}

/// Restricted weak type at `p0`: `‖∇Δ^{-1/2} χ_E‖_{(p0,∞)} / ‖χ_E‖_{(p0,1)}`
/// over indicator inputs. The second report holds the strong `L^{p0}` ratio
/// of the same sets for comparison.
pub fn restricted_weak_probe(dims: Dimensions, sets: &[FamilyMember], sweep: &Sweep, seed: u64) -> Result<(ProbeReport, ProbeReport)> {
    if sets.iter().any(|m| !matches!(m.function, TestFunction::Indicator { .. })) {
        return Err(invalid("restricted weak type is tested on indicators only"));
    }
    let p0 = dims.p0();
    let weak = LorentzExponents::new(p0, f64::INFINITY)?;
    let one = LorentzExponents::new(p0, 1.0)?;
    let mut weak_rows = Vec::new();
    let mut strong_rows = Vec::new();
    for &r in &sweep.truncations {
        let disc = discretize(dims, r, sweep)?;
        let (per_set, _) = map_members(sets, |m| {
            let f = m.sample(&disc.op);
            let g = disc.calc.riesz_apply(&f)?;
            let weak_ratio = disc.op.edge_lorentz_norm(&g, weak) / disc.op.node_lorentz_norm(&f, one);
            let strong_ratio = disc.op.edge_lp_norm(&g, p0)? / disc.op.node_lp_norm(&f, p0)?;
            Ok((weak_ratio, strong_ratio))
        })?;
        weak_rows.push(ProbeRow { truncation: r, nodes: sweep.nodes_per_side, ratio: sup(per_set.iter().map(|v| v.0)) });
        strong_rows.push(ProbeRow { truncation: r, nodes: sweep.nodes_per_side, ratio: sup(per_set.iter().map(|v| v.1)) });
    }
    Ok((
        report("riesz-endpoint", dims, p0, Some(p0), weak_rows, GrowthLaw::Log, seed, 0),
        report("riesz-endpoint-strong", dims, p0, Some(p0), strong_rows, GrowthLaw::Log, seed, 0),
    ))
}

/// Defects of the duality identity on one discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub dims: Dimensions,
    pub truncation: f64,
    pub pairs: usize,
    /// `max |⟨Δ^{1/2}f, g⟩ - ⟨∇f, ∇Δ^{-1/2}g⟩| / (‖∇f‖₂ ‖∇Δ^{-1/2}g‖₂)`.
    pub max_defect: f64,
    /// `max |⟨Δ^{1/2}f, f⟩ - ‖Δ^{1/4}f‖²| / ‖Δ^{1/4}f‖²`.
    pub self_defect: f64,
    pub flagged: usize,
    pub seed: u64,
}

pub fn duality_identity_probe(
    dims: Dimensions,
    truncation: f64,
    nodes_per_side: usize,
    fs: &[FamilyMember],
    gs: &[FamilyMember],
    seed: u64,
) -> Result<DualityReport> {
    let sweep = Sweep::new(vec![truncation], nodes_per_side)?;
    let disc = discretize(dims, truncation, &sweep)?;
    let (op, calc) = (&disc.op, &disc.calc);
    let pairs: Vec<(&FamilyMember, &FamilyMember)> = fs.iter().zip(gs).collect();
    let results: Vec<Result<(f64, f64)>> = pairs
        .par_iter()
        .map(|(fm, gm)| {
            let f = fm.sample(op);
            let g = gm.sample(op);
            let half_f = calc.apply_power(0.5, &f)?;
            let inv_g = calc.apply_power(-0.5, &g)?;
            let grad_f = op.gradient(&f);
            let grad_inv_g = op.gradient(&inv_g);
            let lhs = op.node_inner(&half_f, &g);
            let rhs = op.edge_inner(&grad_f, &grad_inv_g);
            let scale = op.edge_inner(&grad_f, &grad_f).sqrt() * op.edge_inner(&grad_inv_g, &grad_inv_g).sqrt();
            let quarter = calc.apply_power(0.25, &f)?;
            let q2 = op.node_inner(&quarter, &quarter);
            let self_defect = (op.node_inner(&half_f, &f) - q2).abs() / q2;
            Ok(((lhs - rhs).abs() / scale, self_defect))
        })
        .collect();
    let mut max_defect = 0.0f64;
    let mut self_defect = 0.0f64;
    let mut flagged = 0;
    let mut counted = 0;
    for r in results {
        match r {
            Ok((d, s)) => {
                max_defect = max_defect.max(d);
                self_defect = self_defect.max(s);
                counted += 1;
            }
            Err(Error::Domain(_)) => flagged += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(DualityReport { dims, truncation, pairs: counted, max_defect, self_defect, flagged, seed })
}

/// Ray `[1, R]` with `per_decade` log-spaced nodes per decade.
pub fn model_ray(dim: f64, truncation: f64, per_decade: usize) -> Result<HalfLine> {
    let nodes = ((truncation.log10() * per_decade as f64).ceil() as usize + 1).max(16);
    HalfLine::new(dim, truncation, nodes, GridScheme::Log)
}

fn ray_values(member: &FamilyMember, ray: &HalfLine) -> Vec<f64> {
    ray.radii.iter().map(|&radius| member.value(BrokenPoint { side: Side::Positive, radius })).collect()
}

/// Target-measure twin of a source ray.
fn target_ray(ray: &HalfLine, n2: f64) -> Result<HalfLine> {
    HalfLine::from_radii(n2, ray.radii.clone())
}

/// `‖(R1 + R2) f‖_{p,μ2} / ‖f‖_{p,μ1}` over a family on one ray.
pub fn hh_strong_probe(params: &HHParams, ps: &[f64], members: &[FamilyMember], truncations: &[f64], per_decade: usize, seed: u64) -> Result<Vec<ProbeReport>> {
    let dims = Dimensions::new(params.n1.min(params.n2), params.n1.max(params.n2))?;
    let mut rows: Vec<Vec<ProbeRow>> = vec![Vec::new(); ps.len()];
    for &r in truncations {
        let src = model_ray(params.n1, r, per_decade)?;
        let tgt = target_ray(&src, params.n2)?;
        let (per_member, _) = map_members(members, |m| {
            let f = ray_values(m, &src);
            let kf = hh_full_apply(params, &src, &f)?;
            ps.iter()
                .map(|&p| Ok(crate::broken_line::lp_norm(&kf, &tgt.weights, p)? / crate::broken_line::lp_norm(&f, &src.weights, p)?))
                .collect::<Result<Vec<f64>>>()
        })?;
        for (k, row) in rows.iter_mut().enumerate() {
            row.push(ProbeRow { truncation: r, nodes: src.len(), ratio: sup(per_member.iter().map(|v| v[k])) });
        }
    }
    Ok(ps.iter().zip(rows).map(|(&p, rows)| report("hh-strong", dims, p, None, rows, GrowthLaw::Log, seed, 0)).collect())
}

/// Power law tuned to break `R1` at `p >= n1/(n1-β)`: inside `L^p(μ1)` but
/// with divergent pairing against `y^{-β}`.
pub fn hh_witness(params: &HHParams, p: f64) -> Result<FamilyMember> {
    let (n1, beta) = (params.n1, params.beta);
    let lower = n1 / p;
    let upper = n1 - beta;
    if !(lower < upper) {
        return Err(invalid(format!("no R1 witness at p = {p}: need n1/p < n1 - beta")));
    }
    Ok(FamilyMember {
        function: TestFunction::PowerLaw { side: Side::Positive, exponent: 0.5 * (lower + upper) },
        vanishes_at_junction: false,
    })
}

/// Strong-type ratio of a single witness, regressed against `log R`.
pub fn hh_witness_probe(params: &HHParams, p: f64, truncations: &[f64], per_decade: usize) -> Result<ProbeReport> {
    let dims = Dimensions::new(params.n1.min(params.n2), params.n1.max(params.n2))?;
    let witness = hh_witness(params, p)?;
    let mut rows = Vec::new();
    for &r in truncations {
        let src = model_ray(params.n1, r, per_decade)?;
        let tgt = target_ray(&src, params.n2)?;
        let f = ray_values(&witness, &src);
        let kf = hh_full_apply(params, &src, &f)?;
        let ratio = crate::broken_line::lp_norm(&kf, &tgt.weights, p)? / crate::broken_line::lp_norm(&f, &src.weights, p)?;
        rows.push(ProbeRow { truncation: r, nodes: src.len(), ratio });
    }
    Ok(report("hh-strong-witness", dims, p, None, rows, GrowthLaw::Log, 0, 0))
}

/// Which Lorentz endpoint ratio [`hh_endpoint_probe`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// `‖R1 χ_E‖_{(q,∞)} / ‖χ_E‖_{(p,1)}`
    R1Weak,
    /// `‖R2 χ_E‖_{(q,∞)} / ‖χ_E‖_{(p,1)}`
    R2Weak,
    /// `‖R1 χ_E‖_{(p,1)} / ‖χ_E‖_{(p,1)}`
    R1Lorentz,
}

impl Endpoint {
    pub fn name(self) -> &'static str {
        match self {
            Endpoint::R1Weak => "hh-endpoint-r1",
            Endpoint::R2Weak => "hh-endpoint-r2",
            Endpoint::R1Lorentz => "hh-endpoint-lorentz",
        }
    }
}

/// Lorentz endpoint ratios of `R1`/`R2` over indicator sets on one ray.
#[allow(clippy::too_many_arguments)]
pub fn hh_endpoint_probe(
    params: &HHParams,
    endpoint: Endpoint,
    p: f64,
    q: f64,
    sets: &[FamilyMember],
    truncations: &[f64],
    per_decade: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let dims = Dimensions::new(params.n1.min(params.n2), params.n1.max(params.n2))?;
    let source_norm = LorentzExponents::new(p, 1.0)?;
    let (part, target_norm) = match endpoint {
        Endpoint::R1Weak => (HHPart::R1, LorentzExponents::new(q, f64::INFINITY)?),
        Endpoint::R2Weak => (HHPart::R2, LorentzExponents::new(q, f64::INFINITY)?),
        Endpoint::R1Lorentz => (HHPart::R1, LorentzExponents::new(p, 1.0)?),
    };
    let mut rows = Vec::new();
    for &r in truncations {
        let src = model_ray(params.n1, r, per_decade)?;
        let tgt = target_ray(&src, params.n2)?;
        let (ratios, _) = map_members(sets, |m| {
            let f = ray_values(m, &src);
            let kf = hh_apply(params, part, &src, &f)?;
            Ok(crate::broken_line::lorentz_norm(&kf, &tgt.weights, target_norm)
                / crate::broken_line::lorentz_norm(&f, &src.weights, source_norm))
        })?;
        rows.push(ProbeRow { truncation: r, nodes: src.len(), ratio: sup(ratios.into_iter()) });
    }
    Ok(report(endpoint.name(), dims, p, Some(q), rows, GrowthLaw::Log, seed, 0))
}

/// `‖K f‖_{p,μ2} / ‖f‖_{p,μ1}` for the high-energy model kernel.
pub fn th_model_probe(model: &ThModel, ps: &[f64], members: &[FamilyMember], truncations: &[f64], per_decade: usize, seed: u64) -> Result<Vec<ProbeReport>> {
    let dims = Dimensions::new(model.n1.min(model.n2), model.n1.max(model.n2))?;
    let mut rows: Vec<Vec<ProbeRow>> = vec![Vec::new(); ps.len()];
    for &r in truncations {
        let src = model_ray(model.n1, r, per_decade)?;
        let tgt = target_ray(&src, model.n2)?;
        let matrix = Arc::new(model.matrix(&src)?);
        let (per_member, _) = map_members(members, |m| {
            let f = ray_values(m, &src);
            let kf: Vec<f64> = matrix.iter().map(|row| row.iter().zip(&f).map(|(k, v)| k * v).sum()).collect();
            ps.iter()
                .map(|&p| Ok(crate::broken_line::lp_norm(&kf, &tgt.weights, p)? / crate::broken_line::lp_norm(&f, &src.weights, p)?))
                .collect::<Result<Vec<f64>>>()
        })?;
        for (k, row) in rows.iter_mut().enumerate() {
            row.push(ProbeRow { truncation: r, nodes: src.len(), ratio: sup(per_member.iter().map(|v| v[k])) });
        }
    }
    Ok(ps.iter().zip(rows).map(|(&p, rows)| report("th-model", dims, p, None, rows, GrowthLaw::Log, seed, 0)).collect())
}

/// Fitted exponent compared with a predicted one.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeCheck {
    pub label: String,
    pub fitted: f64,
    pub r2: f64,
    pub predicted: f64,
    pub tolerance: f64,
    /// `false` when the prediction is only an upper envelope.
    pub two_sided: bool,
}

impl SlopeCheck {
    pub fn pass(&self) -> bool {
        if self.two_sided {
            (self.fitted - self.predicted).abs() <= self.tolerance
        } else {
            self.fitted <= self.predicted + self.tolerance
        }
    }
}

/// Bump on end `j` used as the `T_ij` input.
pub fn tij_test_input(side: Side) -> TestFunction {
    TestFunction::Bump { center: BrokenPoint { side, radius: 3.0 }, width: 1.5 }
}

/// Decay slope of `|T_ij g|` in `|x|` over `[10, 10^3]` for a fixed bump
/// `g`, against the envelope exponent plus 0.1.
pub fn tij_envelope_probe(dims: Dimensions, i: usize, j: usize, q: f64, epsilon: f64, nodes_per_side: usize, tol: f64) -> Result<SlopeCheck> {
    let predicted = tij_envelope_exponent(dims, i, j, q, epsilon)?;
    let grid = Grid::build(dims, 2e3, nodes_per_side, GridScheme::Log)?;
    let (si, sj) = (end_side(i)?, end_side(j)?);
    let input = tij_test_input(sj);
    let h = GridFunction::from_fn(grid.clone(), |x| input.value(x));
    let out = tij_apply(i, j, &h, tol)?;
    if !out.converged {
        return Err(Error::Convergence { what: format!("T_{i}{j} quadrature"), residual: out.max_error });
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (r, v) in grid.side(si).radii.iter().zip(out.values.side_values(si)) {
        if (10.0..=1e3).contains(r) && *v != 0.0 {
            xs.push(r.ln());
            ys.push(v.abs().ln());
        }
    }
    let fit = linear_fit(&xs, &ys)?;
    Ok(SlopeCheck {
        label: format!("T_{i}{j} ({}, {}) q={q}", dims.d1, dims.d2),
        fitted: fit.slope,
        r2: fit.r2,
        predicted,
        tolerance: 0.1,
        two_sided: false,
    })
}

fn end_side(index: usize) -> Result<Side> {
    match index {
        1 => Ok(Side::Negative),
        2 => Ok(Side::Positive),
        other => Err(invalid(format!("end index {other} must be 1 or 2"))),
    }
}

/// Small-λ slope of `I_j(λ)` over `[1e-3, 1e-1]`.
pub fn ij_slope_probe(d: f64, q: f64) -> Result<SlopeCheck> {
    let predicted = ij_predicted_exponent(d, q).ok_or_else(|| invalid(format!("q = {q} is the logarithmic threshold for d = {d}")))?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..=20 {
        let lambda = 10f64.powf(-3.0 + 2.0 * k as f64 / 20.0);
        xs.push(lambda.ln());
        ys.push(ij_integral(d, lambda, q)?.ln());
    }
    let fit = linear_fit(&xs, &ys)?;
    Ok(SlopeCheck { label: format!("I(d={d}, q={q})"), fitted: fit.slope, r2: fit.r2, predicted, tolerance: 0.05, two_sided: true })
}
