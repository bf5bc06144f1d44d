//! Modified Bessel functions of real order and the radial profile pair
//! `l(r) = r^{1-d/2} I_{d/2-1}(r)`, `k(r) = r^{1-d/2} K_{|d/2-1|}(r)`.
//!
//! Evaluation regimes:
//!
//! * `I_nu`: power series for `x <= max(2, nu)`, Hankel expansion for `x >= 30`,
//!   otherwise the continued fraction for `I'/I` combined with the Wronskian.
//! * `K_nu`: Temme's series for `x < 2`, Steed's continued fraction for
//!   `2 <= x < 30`, Hankel expansion for `x >= 30`; orders above 1/2 by forward
//!   recurrence from `|mu| <= 1/2`.
//!
//! Every routine works internally with the scaled quantities `e^{-x} I` and
//! `e^{x} K`, so nothing overflows until the unscaled entry points are asked
//! for arguments beyond [`EXP_GUARD`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest argument accepted by the unscaled entry points.
pub const EXP_GUARD: f64 = 700.0;
/// Orders at or above this value are rejected.
pub const MAX_ORDER: f64 = 12.0;
/// Arguments at or above this value use the Hankel expansion.
const HANKEL_MIN_X: f64 = 30.0;
/// Distance from 2 below which a dimension is treated as exactly 2.
pub const DIM_TWO_SNAP: f64 = 1e-12;

const MAXIT: usize = 20_000;
const EPS: f64 = f64::EPSILON;

/// Taylor coefficients of `1/Gamma(1+z)` about `z = 0`.
const RGAMMA1P: [f64; 31] = [
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
    -2.298_745_684_435_370_206_6e-19,
    1.714_406_321_927_337_433_4e-20,
    1.337_351_730_493_693_114_9e-22,
];

/// A nonnegative Bessel order below [`MAX_ORDER`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 || nu >= MAX_ORDER {
            return Err(Error::Domain(format!("Bessel order {nu} outside [0, {MAX_ORDER})")));
        }
        Ok(Self(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `1/Gamma(1+z)` for `|z| <= 1/2`.
fn rgamma1p(z: f64) -> f64 {
    RGAMMA1P.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// Gamma function for positive arguments of moderate size.
pub fn gamma(t: f64) -> f64 {
    assert!(t > 0.0 && t < 171.0, "gamma argument {t} out of range");
    if t < 0.5 {
        return gamma(t + 1.0) / t;
    }
    let n = (t - 0.5).floor();
    let z = t - 1.0 - n;
    let mut g = 1.0 / rgamma1p(z);
    for j in 1..=(n as usize) {
        g *= z + j as f64;
    }
    g
}

/// Scaled pair `(e^x K_nu(x), e^x K_{nu+1}(x))` for `nu >= 0`, `x > 0`.
fn k_pair_scaled(nu: f64, x: f64) -> (f64, f64) {
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut k0, mut k1) = if x < 2.0 {
        let (a, b) = temme_series(mu, x);
        let ex = x.exp();
        (a * ex, b * ex)
    } else if x < HANKEL_MIN_X {
        steed_cf2_scaled(mu, x)
    } else {
        (hankel_k_scaled(mu, x), hankel_k_scaled(mu + 1.0, x))
    };
    let xi2 = 2.0 / x;
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * xi2 * k1 + k0;
        k0 = k1;
        k1 = next;
    }
    (k0, k1)
}

/// Temme's series for `(K_mu(x), K_{mu+1}(x))`, `|mu| <= 1/2`, `x < 2`.
fn temme_series(mu: f64, x: f64) -> (f64, f64) {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    // gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
    let mu2 = mu * mu;
    let (mut gam1, mut gam2) = (0.0, 0.0);
    let mut pw = 1.0;
    for pair in RGAMMA1P.chunks(2) {
        gam2 += pair[0] * pw;
        if let Some(&odd) = pair.get(1) {
            gam1 -= odd * pw;
        }
        pw *= mu2;
    }
    let gampl = gam2 - mu * gam1;
    let gammi = gam2 + mu * gam1;
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAXIT {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

/// Steed's continued fraction for the scaled pair at `x >= 2`, `|mu| <= 1/2`.
fn steed_cf2_scaled(mu: f64, x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAXIT {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let kmu = (PI / (2.0 * x)).sqrt() / s;
    let k1 = kmu * (mu + x + 0.5 - h) / x;
    (kmu, k1)
}

/// Hankel expansion sum `sum_k sign^k a_k(nu) / x^k`.
fn hankel_sum(nu: f64, x: f64, alternate: bool) -> f64 {
    let m = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        term *= (m - odd * odd) / (k as f64 * 8.0 * x);
        let t = if alternate && k % 2 == 1 { -term } else { term };
        if term.abs() > last && k > 2 * (nu as usize + 2) {
            break;
        }
        sum += t;
        last = term.abs();
        if term.abs() < EPS * 0.1 * sum.abs() {
            break;
        }
    }
    sum
}

fn hankel_k_scaled(nu: f64, x: f64) -> f64 {
    (PI / (2.0 * x)).sqrt() * hankel_sum(nu, x, false)
}

fn hankel_i_scaled(nu: f64, x: f64) -> f64 {
    hankel_sum(nu, x, true) / (2.0 * PI * x).sqrt()
}

/// Power series for `e^{-x} I_nu(x)`, valid for `nu > -1`.
fn series_i_scaled(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    // log of leading term to keep (x/2)^nu / Gamma(nu+1) representable
    let lead = (nu * half.ln() - x).exp() / gamma(nu + 1.0);
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAXIT {
        let fk = k as f64;
        term *= q / (fk * (nu + fk));
        sum += term;
        if term < EPS * 0.1 * sum {
            break;
        }
    }
    lead * sum
}

/// Continued fraction for `I'_nu(x) / I_nu(x)` (modified Lentz).
fn cf1_ratio(nu: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let xi2 = 2.0 / x;
    let mut h = (nu / x).max(tiny);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= EPS {
            break;
        }
    }
    h
}

/// `e^{-x} I_nu(x)` for `nu > -1` (nonnegative orders below [`MAX_ORDER`]).
fn i_scaled_any(nu: f64, x: f64) -> f64 {
    if x <= 2.0_f64.max(nu) {
        return series_i_scaled(nu, x);
    }
    if x >= HANKEL_MIN_X {
        return hankel_i_scaled(nu, x);
    }
    if nu < 0.0 {
        // I_{-m} = I_m + (2/pi) sin(m pi) K_m, all terms positive for 0 < m < 1
        let m = -nu;
        let (km, _) = k_pair_scaled(m, x);
        return i_scaled_any(m, x) + 2.0 / PI * (m * PI).sin() * km * (-2.0 * x).exp();
    }
    let f = cf1_ratio(nu, x);
    let (k0, k1) = k_pair_scaled(nu, x);
    let kp = nu / x * k0 - k1;
    1.0 / (x * (f * k0 - kp))
}

fn check_arg(x: f64) -> Result<()> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::Domain(format!("Bessel argument {x} must be finite and >= 0")));
    }
    Ok(())
}

fn check_pos(x: f64) -> Result<()> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::Domain(format!("Bessel argument {x} must be finite and > 0")));
    }
    Ok(())
}

fn check_guard(x: f64) -> Result<()> {
    if x > EXP_GUARD {
        return Err(Error::Overflow(x));
    }
    Ok(())
}

/// `e^{-x} I_nu(x)`.
pub fn bessel_i_scaled(nu: BesselOrder, x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(i_scaled_any(nu.0, x))
}

/// `I_nu(x)`; `x = 0` is allowed.
pub fn bessel_i(nu: BesselOrder, x: f64) -> Result<f64> {
    check_arg(x)?;
    check_guard(x)?;
    Ok(i_scaled_any(nu.0, x) * x.exp())
}

/// `e^{-x} I'_nu(x)` via `I'_nu = I_{nu+1} + (nu/x) I_nu`.
pub fn bessel_i_deriv_scaled(nu: BesselOrder, x: f64) -> Result<f64> {
    check_pos(x)?;
    let n = nu.0;
    Ok(i_scaled_any(n + 1.0, x) + n / x * i_scaled_any(n, x))
}

/// `I'_nu(x)`.
pub fn bessel_i_deriv(nu: BesselOrder, x: f64) -> Result<f64> {
    check_guard(x)?;
    Ok(bessel_i_deriv_scaled(nu, x)? * x.exp())
}

/// `e^{x} K_nu(x)`.
pub fn bessel_k_scaled(nu: BesselOrder, x: f64) -> Result<f64> {
    check_pos(x)?;
    Ok(k_pair_scaled(nu.0, x).0)
}

/// `K_nu(x)`.
pub fn bessel_k(nu: BesselOrder, x: f64) -> Result<f64> {
    check_pos(x)?;
    check_guard(x)?;
    Ok(k_pair_scaled(nu.0, x).0 * (-x).exp())
}

/// `e^{x} K'_nu(x)` via `K'_nu = -K_{nu+1} + (nu/x) K_nu`.
pub fn bessel_k_deriv_scaled(nu: BesselOrder, x: f64) -> Result<f64> {
    check_pos(x)?;
    let (k0, k1) = k_pair_scaled(nu.0, x);
    Ok(-k1 + nu.0 / x * k0)
}

/// `K'_nu(x)`.
pub fn bessel_k_deriv(nu: BesselOrder, x: f64) -> Result<f64> {
    check_guard(x)?;
    Ok(bessel_k_deriv_scaled(nu, x)? * (-x).exp())
}

/// Values of the profile pair and their derivatives at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValues {
    pub l: f64,
    pub k: f64,
    pub dl: f64,
    pub dk: f64,
}

/// Profile values with the exponential factored out: `l = e^r l_s`,
/// `l' = e^r dl_s`, `k = e^{-r} k_s`, `k' = e^{-r} dk_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledProfile {
    pub l: f64,
    pub k: f64,
    pub dl: f64,
    pub dk: f64,
}

/// The order `d/2 - 1`, snapped to 0 near `d = 2`.
pub fn profile_order(d: f64) -> f64 {
    if (d - 2.0).abs() < DIM_TWO_SNAP {
        0.0
    } else {
        0.5 * d - 1.0
    }
}

fn check_dim(d: f64) -> Result<()> {
    if !(d > 1.0) || d > 20.0 {
        return Err(Error::Domain(format!("dimension {d} outside (1, 20]")));
    }
    Ok(())
}

/// `(k_s, dk_s)` only; cheaper than [`profile_scaled`] since no `I` is needed.
pub fn profile_k_scaled(d: f64, r: f64) -> Result<(f64, f64)> {
    check_dim(d)?;
    check_pos(r)?;
    let nu = profile_order(d);
    let pw = (-nu * r.ln()).exp();
    // k = r^{-nu} K_{|nu|}, k' = -r^{-nu} K_{nu+1}
    let (k, kp1) = if nu >= 0.0 {
        k_pair_scaled(nu, r)
    } else {
        (k_pair_scaled(-nu, r).0, k_pair_scaled(nu + 1.0, r).0)
    };
    Ok((pw * k, -pw * kp1))
}

/// Scaled profile values; valid for every `r > 0`.
pub fn profile_scaled(d: f64, r: f64) -> Result<ScaledProfile> {
    let (k, dk) = profile_k_scaled(d, r)?;
    let nu = profile_order(d);
    let pw = (-nu * r.ln()).exp();
    // l = r^{-nu} I_nu, l' = r^{-nu} I_{nu+1}
    Ok(ScaledProfile {
        l: pw * i_scaled_any(nu, r),
        k,
        dl: pw * i_scaled_any(nu + 1.0, r),
        dk,
    })
}

/// `l, k, l', k'` at `r` for dimension `d`.
pub fn profile(d: f64, r: f64) -> Result<ProfileValues> {
    check_guard(r)?;
    let s = profile_scaled(d, r)?;
    let (ep, em) = (r.exp(), (-r).exp());
    Ok(ProfileValues {
        l: s.l * ep,
        k: s.k * em,
        dl: s.dl * ep,
        dk: s.dk * em,
    })
}

/// `l'k - k'l`, which equals `r^{1-d}`.
pub fn profile_wronskian(d: f64, r: f64) -> Result<f64> {
    let s = profile_scaled(d, r)?;
    Ok(s.dl * s.k - s.dk * s.l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn o(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    #[test]
    fn gamma_matches_factorials_and_half_integers() {
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(11.5), 11_899_423.083_962_249, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.1), 9.513_507_698_668_732, max_relative = 1e-13);
    }

    #[test]
    fn half_order_closed_forms() {
        let i = bessel_i(o(0.5), 1.0).unwrap();
        assert_relative_eq!(i, (2.0 / PI).sqrt() * 1f64.sinh(), max_relative = 1e-12);
        assert_relative_eq!(i, 0.937_674_888_245_488, max_relative = 1e-12);
        let k = bessel_k(o(0.5), 1.0).unwrap();
        assert_relative_eq!(k, 0.461_068_504_447_894_4, max_relative = 1e-12);
    }

    #[test]
    fn value_at_zero() {
        assert_eq!(bessel_i(o(0.0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(o(1.3), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(bessel_i(o(1.0), -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(o(1.0), 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(o(1.0), 701.0), Err(Error::Overflow(_))));
        assert!(bessel_i_scaled(o(1.0), 5000.0).is_ok());
        assert!(BesselOrder::new(-0.1).is_err());
        assert!(BesselOrder::new(12.0).is_err());
        assert!(profile(0.9, 1.0).is_err());
    }

    #[test]
    fn regime_boundaries_are_continuous() {
        for &nu in &[0.0, 0.3, 0.5, 1.7, 4.2, 9.5] {
            for &x in &[2.0, 30.0] {
                let (lo, hi) = (x * (1.0 - 1e-12), x * (1.0 + 1e-12));
                let a = bessel_k_scaled(o(nu), lo).unwrap();
                let b = bessel_k_scaled(o(nu), hi).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-10);
                let a = bessel_i_scaled(o(nu), lo).unwrap();
                let b = bessel_i_scaled(o(nu), hi).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn profile_half_order_closed_forms() {
        let p = profile(3.0, 2.0).unwrap();
        assert_relative_eq!(p.k, (PI / 2.0).sqrt() * (-2f64).exp() / 2.0, max_relative = 1e-12);
        assert_relative_eq!(p.k, 0.084_808_811_879, max_relative = 1e-10);
        let p = profile(3.0, 1.0).unwrap();
        assert_relative_eq!(p.l, (2.0 / PI).sqrt() * 1f64.sinh(), max_relative = 1e-12);
    }

    #[test]
    fn profile_signs() {
        for &d in &[1.2, 1.5, 2.0, 2.5, 3.0, 3.7, 7.0] {
            for &r in &[1e-3, 0.1, 1.0, 5.0, 40.0] {
                let p = profile_scaled(d, r).unwrap();
                assert!(p.l > 0.0 && p.k > 0.0 && p.dl > 0.0 && p.dk < 0.0, "d={d} r={r}");
            }
        }
    }

    #[test]
    fn wronskian_at_unit_radius() {
        for &d in &[1.1, 2.0, 4.4, 9.0] {
            assert_relative_eq!(profile_wronskian(d, 1.0).unwrap(), 1.0, max_relative = 1e-10);
        }
        assert_relative_eq!(profile_wronskian(2.5, 3.0).unwrap(), 3f64.powf(-1.5), max_relative = 1e-10);
        assert_relative_eq!(profile_wronskian(3.0, 2.0).unwrap(), 0.25, max_relative = 1e-10);
    }

    #[test]
    fn dimension_two_snaps() {
        let a = profile(2.0, 0.5).unwrap();
        let b = profile(2.0 + 1e-13, 0.5).unwrap();
        assert_eq!(a, b);
    }
}
