//! Model integral operators on rays `[1, R]`: the separable pair `R1`, `R2`,
//! the homogeneous-kernel integral test, the high-energy model kernel, the
//! low-energy operators `T_ij` and the unboundedness witness.

use crate::broken_line::{BrokenPoint, Dimensions, Grid, GridFunction, HalfLine, Side};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate, integrate_exp_tail, integrate_vec, QuadOptions};
use crate::resolvent::coefficients;
use crate::riesz_kernel::DimensionCase;
use crate::specfun::profile_k_scaled;

/// Exponents of the kernel `x^{-α} y^{-β}` (x ≤ y), `x^{-α'} y^{-β'}` (x > y)
/// between rays with densities `r^{n1-1}` (source) and `r^{n2-1}` (target).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HHParams {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_p: f64,
    pub beta_p: f64,
    pub n1: f64,
    pub n2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HHPart {
    /// `x^{-α} ∫_x^∞ y^{-β} f dμ1`.
    R1,
    /// `x^{-α'} ∫_1^x y^{-β'} f dμ1`.
    R2,
}

impl HHParams {
    pub fn new(alpha: f64, beta: f64, alpha_p: f64, beta_p: f64, n1: f64, n2: f64) -> Result<Self> {
        if [alpha, beta, alpha_p, beta_p].iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(invalid("kernel exponents must be finite and nonnegative"));
        }
        if !(n1 > 1.0) || !(n2 > 1.0) {
            return Err(invalid(format!("measure powers ({n1}, {n2}) must exceed 1")));
        }
        Ok(Self { alpha, beta, alpha_p, beta_p, n1, n2 })
    }

    /// Parameters of the transposed kernel; its `R2` is the adjoint of `R1`
    /// and its `R1` the adjoint of `R2`.
    pub fn adjoint(&self) -> Self {
        Self {
            alpha: self.beta_p,
            beta: self.alpha_p,
            alpha_p: self.beta,
            beta_p: self.alpha,
            n1: self.n2,
            n2: self.n1,
        }
    }

    /// Sufficient condition for `L^p(μ1) → L^p(μ2)` boundedness of `R1 + R2`.
    pub fn strong_type_admissible(&self, p: f64) -> bool {
        let Self { alpha, beta, alpha_p, beta_p, n1, n2 } = *self;
        let lower = n2 / n2.min(alpha_p);
        let upper = if n1 - beta > 0.0 { n1 / (n1 - beta) } else { f64::INFINITY };
        p * (alpha + beta - n1) > n2 - n1 && p * (alpha_p + beta_p - n1) > n2 - n1 && lower < p && p < upper
    }

    /// Smallest target exponent `q` of the restricted weak type bound for
    /// `R1` at source exponent `p`, if the bound applies.
    pub fn r1_weak_target(&self, p: f64) -> Option<f64> {
        let Self { alpha, beta, n1, n2, .. } = *self;
        let ok = beta > 0.0 && beta < n1 && alpha > 0.0 && p > 1.0 && p <= n1 / (n1 - beta) * (1.0 + 1e-12);
        ok.then(|| n2 / alpha)
    }

    /// Smallest target exponent `q` of the restricted weak type bound for
    /// `R2` at source exponent `p`, if the bound applies.
    pub fn r2_weak_target(&self, p: f64) -> Option<f64> {
        let Self { alpha_p, beta_p, n1, n2, .. } = *self;
        if !(alpha_p > 0.0) || !(p > 1.0) {
            return None;
        }
        let dual = p / (p - 1.0);
        if beta_p > 0.0 && dual >= n1 / beta_p {
            return Some(n2 / alpha_p);
        }
        let denom = alpha_p + beta_p - n1 / dual;
        (denom > 0.0).then(|| n2 / denom)
    }
}

fn check_source(params: &HHParams, source: &HalfLine, f: &[f64]) -> Result<()> {
    if (source.dim - params.n1).abs() > 1e-12 {
        return Err(invalid(format!("source ray has dimension {} but n1 = {}", source.dim, params.n1)));
    }
    if f.len() != source.len() {
        return Err(invalid(format!("{} samples for {} nodes", f.len(), source.len())));
    }
    Ok(())
}

/// Applies `R1` or `R2` at the nodes of `source` by suffix/prefix sums.
///
/// The diagonal node contributes half its weight to each part, so that
/// `R1 + R2` is the full kernel sum and the discrete adjoint identity is
/// exact.
pub fn hh_apply(params: &HHParams, part: HHPart, source: &HalfLine, f: &[f64]) -> Result<Vec<f64>> {
    check_source(params, source, f)?;
    let n = f.len();
    let (outer, inner) = match part {
        HHPart::R1 => (params.alpha, params.beta),
        HHPart::R2 => (params.alpha_p, params.beta_p),
    };
    let terms: Vec<f64> =
        (0..n).map(|k| source.radii[k].powf(-inner) * f[k] * source.weights[k]).collect();
    let mut out = vec![0.0; n];
    let mut acc = 0.0;
    let order: Box<dyn Iterator<Item = usize>> = match part {
        HHPart::R1 => Box::new((0..n).rev()),
        HHPart::R2 => Box::new(0..n),
    };
    for i in order {
        out[i] = source.radii[i].powf(-outer) * (acc + 0.5 * terms[i]);
        acc += terms[i];
    }
    Ok(out)
}

/// `R1 f + R2 f`.
pub fn hh_full_apply(params: &HHParams, source: &HalfLine, f: &[f64]) -> Result<Vec<f64>> {
    let a = hh_apply(params, HHPart::R1, source, f)?;
    let b = hh_apply(params, HHPart::R2, source, f)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

/// Value of `∫_0^∞ K(x,1) x^{n2/p-1} dx` with a convergence verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousIntegral {
    pub value: f64,
    /// Partial integrals over `[e^{-T}, e^{T}]` for growing `T`.
    pub partials: Vec<(f64, f64)>,
    pub divergent: bool,
}

/// Half-widths (in `log x`) of the nested windows used for the Cauchy test.
const HOMOGENEOUS_WINDOWS: [f64; 5] = [10.0, 20.0, 40.0, 80.0, 160.0];

/// Integral test for a nonnegative kernel homogeneous of degree `-δ`,
/// `δ = n2/p + n1/p'`. Evaluated in `u = log x`; the integral is declared
/// divergent when the increments of the nested partial integrals fail to
/// shrink geometrically.
pub fn hlp_norm_integral(
    kernel_at_one: impl Fn(f64) -> f64,
    p: f64,
    n1: f64,
    n2: f64,
    delta: f64,
) -> Result<HomogeneousIntegral> {
    if !(p > 1.0) || !(n1 > 1.0) || !(n2 > 1.0) {
        return Err(invalid(format!("need p, n1, n2 > 1, got ({p}, {n1}, {n2})")));
    }
    let expected = n2 / p + n1 * (1.0 - 1.0 / p);
    if (delta - expected).abs() > 1e-12 * expected.max(1.0) {
        return Err(invalid(format!("homogeneity degree {delta} differs from n2/p + n1/p' = {expected}")));
    }
    let s = n2 / p;
    let integrand = |u: f64| {
        let v = kernel_at_one(u.exp()) * (s * u).exp();
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let opts = QuadOptions::rel(1e-12);
    let mut partials = Vec::with_capacity(HOMOGENEOUS_WINDOWS.len());
    let mut total = 0.0;
    let mut prev_t = 0.0;
    for &t in &HOMOGENEOUS_WINDOWS {
        let left = integrate(integrand, -t, -prev_t, opts).value;
        let right = integrate(integrand, prev_t, t, opts).value;
        total += left + right;
        partials.push((t, total));
        prev_t = t;
    }
    let increments: Vec<f64> = partials.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    let last = *increments.last().expect("several windows");
    let shrinking = increments.windows(2).all(|w| w[1] <= 0.5 * w[0] || w[1] <= 1e-14 * total.abs());
    let divergent = !total.is_finite() || !(shrinking && last <= 1e-8 * total.abs().max(f64::MIN_POSITIVE));
    Ok(HomogeneousIntegral { value: total, partials, divergent })
}

/// Parameters of the high-energy model kernel
/// `x^{-a} y^{-b} e^{-c (x+y-2)/(x∧y)} / (x+y-2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThModel {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n1: f64,
    pub n2: f64,
}

impl ThModel {
    pub fn new(a: f64, b: f64, c: f64, n1: f64, n2: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) || !(n1 > 1.0 && n2 > 1.0) {
            return Err(invalid("model kernel needs a, b, c > 0 and n1, n2 > 1"));
        }
        Ok(Self { a, b, c, n1, n2 })
    }

    /// Kernel value; the corner `x = y = 1` is singular and gets `NaN`.
    pub fn kernel(&self, x: f64, y: f64) -> f64 {
        let s = x + y - 2.0;
        if s <= 0.0 {
            return f64::NAN;
        }
        x.powf(-self.a) * y.powf(-self.b) * (-self.c * s / x.min(y)).exp() / s
    }

    /// Dense kernel matrix `K[i][k] w_k` on the nodes of `source`. The
    /// corner entry uses the average of `1/(s+t)` over the first cell
    /// squared, `2 ln 2 / h`.
    pub fn matrix(&self, source: &HalfLine) -> Result<Vec<Vec<f64>>> {
        if (source.dim - self.n1).abs() > 1e-12 {
            return Err(invalid(format!("source ray has dimension {} but n1 = {}", source.dim, self.n1)));
        }
        let r = &source.radii;
        let h = r[1] - r[0];
        Ok((0..r.len())
            .map(|i| {
                (0..r.len())
                    .map(|k| {
                        let kv = if i == 0 && k == 0 { 2.0 * std::f64::consts::LN_2 / h } else { self.kernel(r[i], r[k]) };
                        kv * source.weights[k]
                    })
                    .collect()
            })
            .collect())
    }
}

/// Applies the model kernel to samples on `source`.
pub fn th_model_apply(model: &ThModel, source: &HalfLine, f: &[f64]) -> Result<Vec<f64>> {
    if f.len() != source.len() {
        return Err(invalid(format!("{} samples for {} nodes", f.len(), source.len())));
    }
    let m = model.matrix(source)?;
    Ok(m.iter().map(|row| row.iter().zip(f).map(|(k, v)| k * v).sum()).collect())
}

fn side_of(index: usize) -> Result<Side> {
    match index {
        1 => Ok(Side::Negative),
        2 => Ok(Side::Positive),
        other => Err(invalid(format!("end index {other} must be 1 or 2"))),
    }
}

/// `k(u)`, evaluated through its scaled form so large `u` underflows to 0.
fn decaying_k(d: f64, u: f64) -> Result<f64> {
    let (ks, _) = profile_k_scaled(d, u)?;
    Ok(ks * (-u).exp())
}

/// Output of [`tij_apply`].
#[derive(Debug, Clone)]
pub struct TijOutput {
    pub values: GridFunction,
    pub converged: bool,
    pub max_error: f64,
}

/// Low-energy operator `T_ij`:
/// `|x| ∫_0^1 λ² F(λ) k_i(λ|x|) ∫ k_j(λ|y|) h(y) dμ(y) dλ` on end `i`, with
/// `F` the coefficient linking ends `i` and `j`. The inner integral is the
/// grid quadrature on end `j`; the λ-integral is adaptive for all output
/// nodes at once.
pub fn tij_apply(i: usize, j: usize, h: &GridFunction, tol: f64) -> Result<TijOutput> {
    let (si, sj) = (side_of(i)?, side_of(j)?);
    let grid = &h.grid;
    let dims = grid.dims;
    let (di, dj) = (dims.of(si), dims.of(sj));
    let out_ray = grid.side(si);
    let in_ray = grid.side(sj);
    let source = h.side_values(sj);
    let pick = |c: &crate::resolvent::ResolventCoefficients| match (i, j) {
        (1, 1) => c.c,
        (2, 2) => c.b,
        _ => c.a,
    };
    let mut failure = None;
    let mut breakpoints = vec![0.0];
    breakpoints.extend((-8..=0).map(|e| 10f64.powi(e)));
    let n = out_ray.len();
    let q = integrate_vec(
        |lambda, out: &mut [f64]| {
            let res: Result<()> = (|| {
                let f = pick(&coefficients(dims, lambda)?);
                let mut inner = 0.0;
                for ((y, w), v) in in_ray.radii.iter().zip(&in_ray.weights).zip(source) {
                    if *v != 0.0 {
                        inner += decaying_k(dj, lambda * y)? * v * w;
                    }
                }
                let scale = lambda * lambda * f * inner;
                for (o, x) in out.iter_mut().zip(&out_ray.radii) {
                    *o = if scale == 0.0 { 0.0 } else { scale * x * decaying_k(di, lambda * x)? };
                }
                Ok(())
            })();
            if let Err(e) = res {
                out.iter_mut().for_each(|o| *o = 0.0);
                failure.get_or_insert(e);
            }
        },
        n,
        &breakpoints,
        QuadOptions { rel_tol: tol, abs_tol: 0.0, max_intervals: 400 },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let mut values = GridFunction::zeros(grid.clone());
    let range = grid.range(si);
    values.values[range].copy_from_slice(&q.values);
    let max_error = q.errors.iter().zip(&q.values).map(|(e, v)| e / v.abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
    Ok(TijOutput { values, converged: q.converged, max_error })
}

/// Decay exponent in `|x|` of the pointwise bound for `T_ij g` with
/// `g ∈ L^{q'}`; at the critical `q` the bound carries a logarithm, charged
/// as `|x|^ε`. Cases 3 and 4 enforce the admissible range of `ε`.
pub fn tij_envelope_exponent(dims: Dimensions, i: usize, j: usize, q: f64, epsilon: f64) -> Result<f64> {
    side_of(i)?;
    side_of(j)?;
    if !(q > 1.0) {
        return Err(invalid(format!("q = {q} must exceed 1")));
    }
    let (d1, d2) = (dims.d1, dims.d2);
    let qd = q / (q - 1.0);
    let case = DimensionCase::classify(dims).ok_or_else(|| invalid("envelope needs 1 < d1 < d2"))?;
    let critical = |d: f64| d / (d - 2.0);
    let three_way = |d: f64, below: f64, above: f64| {
        let qc = critical(d);
        if (q - qc).abs() <= 1e-12 * qc {
            below + epsilon
        } else if q < qc {
            below
        } else {
            above
        }
    };
    let check_eps = |limit: f64| {
        if epsilon > 0.0 && epsilon < limit {
            Ok(())
        } else {
            Err(invalid(format!("epsilon {epsilon} must lie in (0, {limit})")))
        }
    };
    Ok(match case {
        DimensionCase::BothBelowTwo | DimensionCase::UpperIsTwo => match (i, j) {
            (1, 1) => -d1 / qd,
            (1, 2) => -d2 / qd,
            (2, 1) => d1 - d2 - d1 / qd,
            _ => d1 - d2 - d2 / qd,
        },
        DimensionCase::Straddling => match (i, j) {
            (1, 1) => -d1 / qd,
            (2, 1) => d1 - d2 - d1 / qd,
            (1, 2) => {
                check_eps((d2 - d1) / qd)?;
                three_way(d2, -d2 / qd, -2.0)
            }
            _ => {
                check_eps(2.0 - d1)?;
                let qc = critical(d2);
                if (q - qc).abs() <= 1e-12 * qc {
                    -2.0 + epsilon + d1 - d2
                } else if q < qc {
                    d1 - d2 - d2 / qd
                } else {
                    d1 - d2 - 2.0
                }
            }
        },
        DimensionCase::BothAboveTwo => {
            check_eps((d2 - d1) / qd)?;
            let (di, dj) = (dims.of(side_of(i)?), dims.of(side_of(j)?));
            three_way(dj, 2.0 - di - dj / qd, -di)
        }
    })
}

/// `I_j(λ) = [∫_1^∞ k(λy)^q y^{d-1} dy]^{1/q}` for an end of dimension `d`,
/// computed as `λ^{-d/q} [∫_λ^∞ k(u)^q u^{d-1} du]^{1/q}` with an
/// exponential tail beyond `u = 1`.
pub fn ij_integral(d: f64, lambda: f64, q: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) || !(q > 1.0) {
        return Err(invalid(format!("need 0 < λ <= 1 and q > 1, got ({lambda}, {q})")));
    }
    let mut failure = None;
    let mut body = |u: f64| match profile_k_scaled(d, u) {
        Ok((ks, _)) => (ks.powf(q) * u.powf(d - 1.0)) * (-q * u).exp(),
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let opts = QuadOptions::rel(1e-11);
    let mut head = 0.0;
    let mut lo = lambda;
    while lo < 1.0 {
        let hi = (lo * 10.0).min(1.0);
        head += integrate(&mut body, lo, hi, opts).value;
        lo = hi;
    }
    let tail = integrate_exp_tail(&mut body, 1.0, q, opts)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(lambda.powf(-d / q) * (head + tail.value).powf(1.0 / q))
}

/// Predicted small-λ exponent of `I_j(λ)`; `None` at the logarithmic
/// threshold `q = d/(d-2)`.
pub fn ij_predicted_exponent(d: f64, q: f64) -> Option<f64> {
    if d <= 2.0 {
        return Some(-d / q);
    }
    let qc = d / (d - 2.0);
    if (q - qc).abs() <= 1e-12 * qc {
        None
    } else if q < qc {
        Some(-d / q)
    } else {
        Some(2.0 - d)
    }
}

/// Truncated witness `y^{β-d1} (1 + log y)^{-1}` on the `d1` end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleSpec {
    pub dims: Dimensions,
    pub truncation: f64,
    pub beta: f64,
    pub p0: f64,
}

impl CounterexampleSpec {
    /// Default `β`: 1 when `d1 < 2`, `d1 - 1` when `d1 > 2`.
    pub fn new(dims: Dimensions, truncation: f64) -> Result<Self> {
        let beta = if dims.d1 < 2.0 {
            1.0
        } else if dims.d1 > 2.0 {
            dims.d1 - 1.0
        } else {
            return Err(invalid("no default witness exponent for d1 = 2"));
        };
        Self::with_beta(dims, truncation, beta)
    }

    pub fn with_beta(dims: Dimensions, truncation: f64, beta: f64) -> Result<Self> {
        if !(beta < dims.d1) || !beta.is_finite() {
            return Err(invalid(format!("witness exponent {beta} must be below d1 = {}", dims.d1)));
        }
        if !(truncation > 1.0) {
            return Err(invalid(format!("truncation {truncation} must exceed 1")));
        }
        Ok(Self { dims, truncation, beta, p0: dims.p0() })
    }

    pub fn value(&self, p: BrokenPoint) -> f64 {
        if p.side != Side::Negative || p.radius > self.truncation {
            return 0.0;
        }
        p.radius.powf(self.beta - self.dims.d1) / (1.0 + p.radius.ln())
    }

    /// `∫_1^R y^{-1} (1 + log y)^{-1} dy = log(1 + log R)`.
    pub fn model_growth(&self) -> f64 {
        self.truncation.ln().ln_1p()
    }
}

/// Samples of the witness on a grid covering `[1, R]` on the `d1` end.
pub fn counterexample(spec: &CounterexampleSpec, grid: std::sync::Arc<Grid>) -> Result<GridFunction> {
    if grid.negative.truncation() < spec.truncation * (1.0 - 1e-12) {
        return Err(invalid(format!(
            "grid reaches {} on the d1 end, witness needs {}",
            grid.negative.truncation(),
            spec.truncation
        )));
    }
    if grid.dims != spec.dims {
        return Err(Error::InvalidParameter("grid and witness dimensions differ".into()));
    }
    Ok(GridFunction::from_fn(grid, |p| spec.value(p)))
}
