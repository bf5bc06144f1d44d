//! Kernel of the Riesz transform `∇Δ^{-1/2} = (2/π) ∫_0^∞ ∇(Δ+λ²)^{-1} dλ`
//! and its split into low energy (`TL`), high energy (`TH`) and kl (`KL`)
//! pieces, plus exponent fits of the low energy part.

use std::f64::consts::FRAC_2_PI;

use crate::broken_line::{BrokenPoint, Dimensions, Side};
use crate::error::{invalid, Error, Result};
use crate::fit::linear_fit;
use crate::quadrature::{integrate, integrate_exp_tail, Quad, QuadOptions};
use crate::resolvent::{kernel_dx_parts_with, scaled_coefficient, Coefficient, QuadrantTag};

/// Default relative quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative distance below which the kl and full kernels are not evaluated.
pub const DIAGONAL_GUARD: f64 = 1e-3;

/// Default logarithmic slack for the `d2 = 2` tables.
pub const DEFAULT_EPSILON: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RieszPart {
    TL,
    TH,
    KL,
    FULL,
}

impl RieszPart {
    pub const ALL: [RieszPart; 4] = [RieszPart::TL, RieszPart::TH, RieszPart::KL, RieszPart::FULL];
}

/// All four kernel pieces at one point pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszValues {
    pub tl: f64,
    pub th: f64,
    pub kl: f64,
    pub full: f64,
}

/// Distance along the glued line.
pub fn glued_distance(x: BrokenPoint, y: BrokenPoint) -> f64 {
    if x.side == y.side {
        (x.radius - y.radius).abs()
    } else {
        x.radius + y.radius - 2.0
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(invalid(format!("tolerance {tol} must be positive")));
    }
    Ok(())
}

fn check_off_diagonal(x: BrokenPoint, y: BrokenPoint) -> Result<()> {
    if glued_distance(x, y) < DIAGONAL_GUARD * y.radius {
        return Err(Error::Domain(format!(
            "points {} and {} are within the diagonal guard",
            x.coordinate(),
            y.coordinate()
        )));
    }
    Ok(())
}

/// Breakpoints `0 < 1/max < ... < 1/min` spaced by decades, so that the
/// adaptive rule sees both length scales.
fn low_energy_breaks(x: BrokenPoint, y: BrokenPoint) -> Vec<f64> {
    let lo = 1.0 / x.radius.max(y.radius);
    let hi = 1.0 / x.radius.min(y.radius);
    let mut b = vec![0.0, lo];
    let mut t = lo * 10.0;
    while t < hi * 0.999 {
        b.push(t);
        t *= 10.0;
    }
    if hi > lo {
        b.push(hi);
    }
    b
}

fn integrate_pieces<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: f64) -> Quad {
    let mut total = Quad { value: 0.0, error: 0.0, abs_value: 0.0, evals: 0, converged: true };
    for w in breaks.windows(2) {
        let q = integrate(&mut f, w[0], w[1], QuadOptions::rel(tol));
        total.value += q.value;
        total.error += q.error;
        total.abs_value += q.abs_value;
        total.evals += q.evals;
        total.converged &= q.converged;
    }
    total
}

/// Integral over `[start, ∞)` of an integrand decaying like `e^{-rate λ}`,
/// with an absolute target tied to the low energy piece already computed.
fn tail(f: impl FnMut(f64) -> f64, start: f64, rate: f64, tol: f64, scale: f64) -> Result<Quad> {
    let opts = QuadOptions { rel_tol: tol, abs_tol: tol * scale, ..QuadOptions::default() };
    integrate_exp_tail(f, start, rate, opts)
}

struct Integrands {
    dims: Dimensions,
    x: BrokenPoint,
    y: BrokenPoint,
    coefficient: Coefficient,
}

impl Integrands {
    fn new(dims: Dimensions, x: BrokenPoint, y: BrokenPoint) -> Self {
        let coefficient = Coefficient::for_quadrant(QuadrantTag::of(x, y));
        Self { dims, x, y, coefficient }
    }

    fn parts(&self, lambda: f64) -> (f64, f64) {
        if lambda <= 0.0 {
            return (0.0, 0.0);
        }
        let c = scaled_coefficient(self.dims, lambda, self.coefficient).unwrap_or(f64::NAN);
        let (kk, kl) = kernel_dx_parts_with(self.dims, lambda, c, self.x, self.y).unwrap_or((f64::NAN, f64::NAN));
        (FRAC_2_PI * kk, FRAC_2_PI * kl)
    }

    fn kk(&self, lambda: f64) -> f64 {
        self.parts(lambda).0
    }

    fn kl(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        let (_, kl) = kernel_dx_parts_with(self.dims, lambda, 0.0, self.x, self.y).unwrap_or((0.0, f64::NAN));
        FRAC_2_PI * kl
    }

    fn full(&self, lambda: f64) -> f64 {
        let (kk, kl) = self.parts(lambda);
        kk + kl
    }
}

fn finish(q: Quad, what: &str) -> Result<f64> {
    if !q.value.is_finite() {
        return Err(Error::Convergence { what: format!("{what} integral"), residual: f64::NAN });
    }
    Ok(q.value)
}

/// One piece of the Riesz kernel at `(x, y)` to relative tolerance `tol`.
pub fn riesz_kernel(dims: Dimensions, x: BrokenPoint, y: BrokenPoint, part: RieszPart, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let ig = Integrands::new(dims, x, y);
    let breaks = low_energy_breaks(x, y);
    let split = *breaks.last().expect("at least two breakpoints");
    let kk_rate = x.radius + y.radius - 2.0;
    let same_side = x.side == y.side;
    match part {
        RieszPart::TL => finish(integrate_pieces(|l| ig.kk(l), &breaks, tol), "low energy"),
        RieszPart::TH => {
            if !(kk_rate > 0.0) {
                return Err(Error::Domain("high energy part needs |x| + |y| > 2".into()));
            }
            let low = integrate_pieces(|l| ig.kk(l), &breaks, tol);
            let q = tail(|l| ig.kk(l), split, kk_rate, tol, low.abs_value)?;
            finish(q, "high energy")
        }
        RieszPart::KL => {
            if !same_side {
                return Ok(0.0);
            }
            check_off_diagonal(x, y)?;
            let low = integrate_pieces(|l| ig.kl(l), &breaks, tol);
            let rate = (x.radius - y.radius).abs();
            let q = tail(|l| ig.kl(l), split, rate, tol, low.abs_value)?;
            finish(Quad { value: low.value + q.value, ..q }, "kl")
        }
        RieszPart::FULL => {
            check_off_diagonal(x, y)?;
            let low = integrate_pieces(|l| ig.full(l), &breaks, tol);
            let rate = if same_side { kk_rate.min((x.radius - y.radius).abs()) } else { kk_rate };
            let q = tail(|l| ig.full(l), split, rate, tol, low.abs_value)?;
            finish(Quad { value: low.value + q.value, ..q }, "full kernel")
        }
    }
}

/// All four pieces; `FULL` is integrated independently of the others.
pub fn riesz_kernel_all(dims: Dimensions, x: BrokenPoint, y: BrokenPoint, tol: f64) -> Result<RieszValues> {
    Ok(RieszValues {
        tl: riesz_kernel(dims, x, y, RieszPart::TL, tol)?,
        th: riesz_kernel(dims, x, y, RieszPart::TH, tol)?,
        kl: riesz_kernel(dims, x, y, RieszPart::KL, tol)?,
        full: riesz_kernel(dims, x, y, RieszPart::FULL, tol)?,
    })
}

/// Log-log least-squares fit of kernel magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub window: (f64, f64),
}

/// Fits `log |value| = slope · log coordinate + intercept`.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    if samples.len() < 8 {
        return Err(invalid(format!("exponent fit needs at least 8 samples, got {}", samples.len())));
    }
    if samples.iter().any(|&(t, v)| !(t > 0.0) || !(v > 0.0)) {
        return Err(invalid("exponent fit needs positive coordinates and magnitudes"));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if !(hi > lo) {
        return Err(invalid("exponent fit window is degenerate"));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let f = linear_fit(&xs, &ys)?;
    Ok(ExponentFit { slope: f.slope, intercept: f.intercept, r2: f.r2, window: (lo, hi) })
}

/// Which of the four dimension regimes a pair falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DimensionCase {
    /// `1 < d1 < d2 < 2`
    BothBelowTwo,
    /// `1 < d1 < d2 = 2`
    UpperIsTwo,
    /// `1 < d1 < 2 < d2`
    Straddling,
    /// `2 < d1 < d2`
    BothAboveTwo,
}

impl DimensionCase {
    pub fn classify(dims: Dimensions) -> Option<Self> {
        let (d1, d2) = (dims.d1, dims.d2);
        let two = |d: f64| (d - 2.0).abs() < crate::specfun::DIM_TWO_SNAP;
        if !(d1 < d2) || two(d1) {
            return None;
        }
        Some(if d2 < 2.0 {
            DimensionCase::BothBelowTwo
        } else if two(d2) {
            DimensionCase::UpperIsTwo
        } else if d1 < 2.0 {
            DimensionCase::Straddling
        } else {
            DimensionCase::BothAboveTwo
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            DimensionCase::BothBelowTwo => "d1<d2<2",
            DimensionCase::UpperIsTwo => "d1<d2=2",
            DimensionCase::Straddling => "d1<2<d2",
            DimensionCase::BothAboveTwo => "2<d1<d2",
        }
    }

    /// Small-λ exponent `γ` with `|F(λ)| ≲ λ^γ` for the given coefficient.
    pub fn small_lambda_exponent(self, dims: Dimensions, which: Coefficient) -> f64 {
        let (d1, d2) = (dims.d1, dims.d2);
        match (self, which) {
            (DimensionCase::BothAboveTwo, Coefficient::A) => d1 + d2 - 4.0,
            (DimensionCase::BothAboveTwo, Coefficient::B) => 2.0 * d2 - 4.0,
            (DimensionCase::BothAboveTwo, Coefficient::C) => 2.0 * d1 - 4.0,
            (DimensionCase::UpperIsTwo, Coefficient::A) => 0.0,
            (DimensionCase::UpperIsTwo, Coefficient::B) => 2.0 - d1,
            (_, Coefficient::A) => d2 - 2.0,
            (_, Coefficient::B) => 2.0 * d2 - d1 - 2.0,
            (_, Coefficient::C) => d1 - 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `|x| <= |y|`
    XSmall,
    /// `|x| >= |y|`
    XLarge,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::XSmall => "x_small",
            Regime::XLarge => "x_large",
        }
    }
}

/// Predicted low energy exponents `(x, y)` in `|x|^a |y|^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedExponents {
    pub x: f64,
    pub y: f64,
    /// True where the bound is also a lower bound (coefficient `A > 0`).
    pub two_sided: bool,
}

/// Low energy exponent table, from the small-argument profile asymptotics.
///
/// With `F ~ λ^γ`, `i` the side of `x` and `e = min(2 - d_j, 0)` for the side
/// `j` of `y`: `|x|^{-γ-2-e} |y|^e` when `|x| >= |y|` and
/// `|x|^{1-d_i} |y|^{d_i-γ-3}` when `|x| <= |y|`. When `d_j = 2` the
/// logarithm of `k_j` is absorbed by `(|x|/|y|)^ε`.
pub fn predicted_exponents(dims: Dimensions, quadrant: QuadrantTag, regime: Regime, epsilon: f64) -> Result<PredictedExponents> {
    let case = DimensionCase::classify(dims)
        .ok_or_else(|| invalid(format!("dimensions ({}, {}) fall in no table case", dims.d1, dims.d2)))?;
    let coefficient = Coefficient::for_quadrant(quadrant);
    let gamma = case.small_lambda_exponent(dims, coefficient);
    let (xs, ys) = quadrant.sides();
    let (di, dj) = (dims.of(xs), dims.of(ys));
    let a_positive = coefficient == Coefficient::A;
    Ok(match regime {
        Regime::XLarge => {
            let log_end = case == DimensionCase::UpperIsTwo && ys == Side::Positive;
            let e = (2.0 - dj).min(0.0);
            if log_end {
                PredictedExponents { x: -gamma - 2.0 - e + epsilon, y: e - epsilon, two_sided: false }
            } else {
                PredictedExponents { x: -gamma - 2.0 - e, y: e, two_sided: a_positive }
            }
        }
        Regime::XSmall => PredictedExponents { x: 1.0 - di, y: di - gamma - 3.0, two_sided: a_positive },
    })
}

/// Result of fitting low energy exponents along two rays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixCheck {
    pub case: DimensionCase,
    pub quadrant: QuadrantTag,
    pub regime: Regime,
    pub predicted: PredictedExponents,
    /// Slope in `|x|` at fixed `|y|`.
    pub x_fit: ExponentFit,
    /// Slope in `|y|` at fixed `|x|`.
    pub y_fit: ExponentFit,
}

/// Fit tolerance on exponents.
pub const EXPONENT_TOL: f64 = 0.1;

impl AppendixCheck {
    fn ok(fitted: f64, predicted: f64, two_sided: bool) -> bool {
        if two_sided {
            (fitted - predicted).abs() <= EXPONENT_TOL
        } else {
            fitted <= predicted + EXPONENT_TOL
        }
    }

    pub fn x_passes(&self) -> bool {
        Self::ok(self.x_fit.slope, self.predicted.x, self.predicted.two_sided)
    }

    pub fn y_passes(&self) -> bool {
        Self::ok(self.y_fit.slope, self.predicted.y, self.predicted.two_sided)
    }

    pub fn passes(&self) -> bool {
        self.x_passes() && self.y_passes()
    }
}

/// Ray geometry used by [`appendix_check`]: the fixed coordinate is either
/// `near` or `near · separation · span`, and the moving one sweeps a span of
/// `span` starting `separation` away from the fixed one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayLayout {
    pub near: f64,
    pub separation: f64,
    pub span: f64,
    pub samples: usize,
}

impl Default for RayLayout {
    fn default() -> Self {
        Self { near: 20.0, separation: 1e4, span: 100.0, samples: 10 }
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn tl_magnitudes(
    dims: Dimensions,
    quadrant: QuadrantTag,
    pairs: &[(f64, f64)],
    moving_is_x: bool,
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    use rayon::prelude::*;
    let (xs, ys) = quadrant.sides();
    pairs
        .par_iter()
        .map(|&(xr, yr)| {
            let x = BrokenPoint::new(xs, xr)?;
            let y = BrokenPoint::new(ys, yr)?;
            let v = riesz_kernel(dims, x, y, RieszPart::TL, tol)?;
            Ok((if moving_is_x { xr } else { yr }, v.abs()))
        })
        .collect()
}

/// Fits the `TL` exponents in one quadrant and ordering and pairs them with
/// the table prediction.
pub fn appendix_check(
    dims: Dimensions,
    quadrant: QuadrantTag,
    regime: Regime,
    epsilon: f64,
    layout: RayLayout,
    tol: f64,
) -> Result<AppendixCheck> {
    let case = DimensionCase::classify(dims)
        .ok_or_else(|| invalid(format!("dimensions ({}, {}) fall in no table case", dims.d1, dims.d2)))?;
    let predicted = predicted_exponents(dims, quadrant, regime, epsilon)?;
    let RayLayout { near, separation, span, samples } = layout;
    let far = near * separation * span;
    let sweep_up = log_space(near * separation, near * separation * span, samples);
    let sweep_down = log_space(near, near * span, samples);
    // x-ray at fixed y, y-ray at fixed x
    let (x_pairs, y_pairs): (Vec<_>, Vec<_>) = match regime {
        Regime::XLarge => (
            sweep_up.iter().map(|&x| (x, near)).collect(),
            sweep_down.iter().map(|&y| (far, y)).collect(),
        ),
        Regime::XSmall => (
            sweep_down.iter().map(|&x| (x, far)).collect(),
            sweep_up.iter().map(|&y| (near, y)).collect(),
        ),
    };
    let x_fit = fit_exponent(&tl_magnitudes(dims, quadrant, &x_pairs, true, tol)?)?;
    let y_fit = fit_exponent(&tl_magnitudes(dims, quadrant, &y_pairs, false, tol)?)?;
    Ok(AppendixCheck { case, quadrant, regime, predicted, x_fit, y_fit })
}
