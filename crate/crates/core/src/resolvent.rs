//! Exact kernel of `(Δ + λ²)^{-1}` on the broken line, with its split into
//! products of two decaying profiles ("kk") and of a decaying and a growing
//! profile ("kl").
//!
//! All evaluation goes through the exponentially scaled profiles: the
//! coefficients carry a factor `e^{2λ}` and the profile products a factor
//! `e^{-λ(|x| + |y|)}`, which are combined into one `e^{-λ·gap}` with a
//! nonnegative gap before exponentiation.

use crate::broken_line::{BrokenPoint, Dimensions, Side};
use crate::error::{invalid, Error, Result};
use crate::fit::{linear_fit, LineFit};
use crate::specfun::{profile_k_scaled, profile_scaled};

/// Largest spectral parameter for which unscaled coefficients are returned.
pub const COEFFICIENT_GUARD: f64 = 300.0;

/// Kernel values below this magnitude are flushed to zero.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// The junction constants; fixed to one by the jump condition.
pub const JUNCTION_CONSTANT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventCoefficients {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub v1: f64,
    pub v2: f64,
}

/// Coefficients divided by `e^{2λ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCoefficients {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadrantTag {
    /// both points on the positive side
    Q1,
    /// x negative, y positive
    Q2,
    /// both negative
    Q3,
    /// x positive, y negative
    Q4,
}

impl QuadrantTag {
    pub fn of(x: BrokenPoint, y: BrokenPoint) -> Self {
        match (x.side, y.side) {
            (Side::Positive, Side::Positive) => QuadrantTag::Q1,
            (Side::Negative, Side::Positive) => QuadrantTag::Q2,
            (Side::Negative, Side::Negative) => QuadrantTag::Q3,
            (Side::Positive, Side::Negative) => QuadrantTag::Q4,
        }
    }

    pub const ALL: [QuadrantTag; 4] = [QuadrantTag::Q1, QuadrantTag::Q2, QuadrantTag::Q3, QuadrantTag::Q4];

    /// Sides of `(x, y)`.
    pub fn sides(self) -> (Side, Side) {
        match self {
            QuadrantTag::Q1 => (Side::Positive, Side::Positive),
            QuadrantTag::Q2 => (Side::Negative, Side::Positive),
            QuadrantTag::Q3 => (Side::Negative, Side::Negative),
            QuadrantTag::Q4 => (Side::Positive, Side::Negative),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuadrantTag::Q1 => "Q1",
            QuadrantTag::Q2 => "Q2",
            QuadrantTag::Q3 => "Q3",
            QuadrantTag::Q4 => "Q4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Full,
    Kk,
    Kl,
}

/// Which coefficient multiplies the kk term in each quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficient {
    A,
    B,
    C,
}

impl Coefficient {
    pub fn for_quadrant(q: QuadrantTag) -> Self {
        match q {
            QuadrantTag::Q1 => Coefficient::B,
            QuadrantTag::Q3 => Coefficient::C,
            QuadrantTag::Q2 | QuadrantTag::Q4 => Coefficient::A,
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid(format!("spectral parameter {lambda} must be positive and finite")));
    }
    Ok(())
}

/// One scaled coefficient; cheaper than [`scaled_coefficients`] since only
/// the needed growing profile is evaluated.
pub fn scaled_coefficient(dims: Dimensions, lambda: f64, which: Coefficient) -> Result<f64> {
    check_lambda(lambda)?;
    let (k1, dk1) = profile_k_scaled(dims.d1, lambda)?;
    let (k2, dk2) = profile_k_scaled(dims.d2, lambda)?;
    // [k1 k2]' / e^{-2λ}, strictly negative
    let denom = dk1 * k2 + k1 * dk2;
    Ok(match which {
        Coefficient::A => -1.0 / (lambda * denom),
        Coefficient::B => {
            let p2 = profile_scaled(dims.d2, lambda)?;
            let num = dk1 * p2.l + k1 * p2.dl;
            -JUNCTION_CONSTANT * lambda.powf(dims.d2 - 2.0) * num / denom
        }
        Coefficient::C => {
            let p1 = profile_scaled(dims.d1, lambda)?;
            let num = dk2 * p1.l + k2 * p1.dl;
            -JUNCTION_CONSTANT * lambda.powf(dims.d1 - 2.0) * num / denom
        }
    })
}

pub fn scaled_coefficients(dims: Dimensions, lambda: f64) -> Result<ScaledCoefficients> {
    check_lambda(lambda)?;
    let p1 = profile_scaled(dims.d1, lambda)?;
    let p2 = profile_scaled(dims.d2, lambda)?;
    let denom = p1.dk * p2.k + p1.k * p2.dk;
    let num_b = p1.dk * p2.l + p1.k * p2.dl;
    let num_c = p2.dk * p1.l + p2.k * p1.dl;
    Ok(ScaledCoefficients {
        lambda,
        a: -1.0 / (lambda * denom),
        b: -JUNCTION_CONSTANT * lambda.powf(dims.d2 - 2.0) * num_b / denom,
        c: -JUNCTION_CONSTANT * lambda.powf(dims.d1 - 2.0) * num_c / denom,
    })
}

/// `A, B, C` at `λ`, from analytic profile derivatives.
pub fn coefficients(dims: Dimensions, lambda: f64) -> Result<ResolventCoefficients> {
    check_lambda(lambda)?;
    if lambda > COEFFICIENT_GUARD {
        return Err(Error::Overflow(lambda));
    }
    let s = scaled_coefficients(dims, lambda)?;
    let e = (2.0 * lambda).exp();
    Ok(ResolventCoefficients {
        lambda,
        a: s.a * e,
        b: s.b * e,
        c: s.c * e,
        v1: JUNCTION_CONSTANT,
        v2: JUNCTION_CONSTANT,
    })
}

/// Log-log fit of `|F(λ)|` over `[lo, hi]` with `samples` log-spaced points.
pub fn coefficient_slope(dims: Dimensions, which: Coefficient, lo: f64, hi: f64, samples: usize) -> Result<LineFit> {
    if !(lo > 0.0 && hi > lo) || samples < 2 {
        return Err(invalid(format!("bad fit window [{lo}, {hi}] with {samples} samples")));
    }
    let step = (hi / lo).ln() / (samples - 1) as f64;
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for k in 0..samples {
        let lambda = lo * (step * k as f64).exp();
        let v = scaled_coefficient(dims, lambda, which)?.abs() * (2.0 * lambda).exp();
        xs.push(lambda.ln());
        ys.push(v.ln());
    }
    linear_fit(&xs, &ys)
}

/// `sup |F(λ)| / λ^γ` over `λ` in `[lo, hi]`, sampled at `per_decade`
/// log-spaced points per decade.
pub fn coefficient_envelope(dims: Dimensions, which: Coefficient, gamma: f64, lo: f64, hi: f64, per_decade: usize) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) || per_decade == 0 {
        return Err(invalid(format!("bad envelope window [{lo}, {hi}]")));
    }
    let count = ((hi / lo).log10() * per_decade as f64).ceil() as usize;
    let mut sup = 0.0f64;
    for k in 0..=count {
        let lambda = (lo * 10f64.powf(k as f64 / per_decade as f64)).min(hi);
        let v = scaled_coefficient(dims, lambda, which)?.abs() * (2.0 * lambda).exp();
        sup = sup.max(v / lambda.powf(gamma));
    }
    Ok(sup)
}

fn flush(v: f64) -> f64 {
    if v.abs() < UNDERFLOW_FLOOR {
        0.0
    } else {
        v
    }
}

/// Kernel values `(kk, kl)`; `kl` vanishes off the diagonal quadrants.
pub fn kernel_parts(dims: Dimensions, lambda: f64, x: BrokenPoint, y: BrokenPoint) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    let q = QuadrantTag::of(x, y);
    let (xr, yr) = (x.radius, y.radius);
    let f = scaled_coefficient(dims, lambda, Coefficient::for_quadrant(q))?;
    let (dx, dy) = (dims.of(x.side), dims.of(y.side));
    let (kx, _) = profile_k_scaled(dx, lambda * xr)?;
    let (ky, _) = profile_k_scaled(dy, lambda * yr)?;
    let kk = f * kx * ky * (-lambda * (xr + yr - 2.0)).exp();
    let kl = match q {
        QuadrantTag::Q2 | QuadrantTag::Q4 => 0.0,
        QuadrantTag::Q1 | QuadrantTag::Q3 => {
            let d = dx;
            let (near, far) = if xr <= yr { (xr, yr) } else { (yr, xr) };
            let l_near = profile_scaled(d, lambda * near)?.l;
            let k_far = if xr <= yr { ky } else { kx };
            JUNCTION_CONSTANT * lambda.powf(d - 2.0) * l_near * k_far * (-lambda * (far - near)).exp()
        }
    };
    Ok((flush(kk), flush(kl)))
}

pub fn resolvent_kernel(dims: Dimensions, lambda: f64, x: BrokenPoint, y: BrokenPoint, part: Part) -> Result<f64> {
    let (kk, kl) = kernel_parts(dims, lambda, x, y)?;
    Ok(select(part, kk, kl))
}

fn select(part: Part, kk: f64, kl: f64) -> f64 {
    match part {
        Part::Full => kk + kl,
        Part::Kk => kk,
        Part::Kl => kl,
    }
}

/// Derivative in the signed coordinate `x` of the kernel parts `(kk, kl)`.
///
/// At `|x| = |y|` in a diagonal quadrant the kl term uses the branch
/// `|x| >= |y|`, i.e. the one-sided derivative from the far side.
pub fn kernel_dx_parts(dims: Dimensions, lambda: f64, x: BrokenPoint, y: BrokenPoint) -> Result<(f64, f64)> {
    let q = QuadrantTag::of(x, y);
    let f = scaled_coefficient(dims, lambda, Coefficient::for_quadrant(q))?;
    kernel_dx_parts_with(dims, lambda, f, x, y)
}

/// As [`kernel_dx_parts`] with a precomputed scaled coefficient for the
/// quadrant of `(x, y)`.
pub(crate) fn kernel_dx_parts_with(
    dims: Dimensions,
    lambda: f64,
    coeff: f64,
    x: BrokenPoint,
    y: BrokenPoint,
) -> Result<(f64, f64)> {
    let q = QuadrantTag::of(x, y);
    let (xr, yr) = (x.radius, y.radius);
    let sign = x.side.sign();
    let (dx, dy) = (dims.of(x.side), dims.of(y.side));
    let (_, dkx) = profile_k_scaled(dx, lambda * xr)?;
    let (ky, _) = profile_k_scaled(dy, lambda * yr)?;
    let kk = sign * lambda * coeff * dkx * ky * (-lambda * (xr + yr - 2.0)).exp();
    let kl = match q {
        QuadrantTag::Q2 | QuadrantTag::Q4 => 0.0,
        QuadrantTag::Q1 | QuadrantTag::Q3 => {
            let scale = sign * JUNCTION_CONSTANT * lambda.powf(dx - 1.0);
            if xr < yr {
                let dlx = profile_scaled(dx, lambda * xr)?.dl;
                scale * ky * dlx * (-lambda * (yr - xr)).exp()
            } else {
                let ly = profile_scaled(dy, lambda * yr)?.l;
                scale * ly * dkx * (-lambda * (xr - yr)).exp()
            }
        }
    };
    Ok((flush(kk), flush(kl)))
}

pub fn resolvent_kernel_dx(dims: Dimensions, lambda: f64, x: BrokenPoint, y: BrokenPoint, part: Part) -> Result<f64> {
    let (kk, kl) = kernel_dx_parts(dims, lambda, x, y)?;
    Ok(select(part, kk, kl))
}
