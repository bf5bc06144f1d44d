//! Adaptive Gauss–Kronrod (21-point) quadrature, with helpers for
//! semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_403_170,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 10-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 0.0, max_intervals: 2000 }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    /// Integral of `|f|`, used as the scale for relative tolerances.
    pub abs_value: f64,
    pub evals: usize,
    pub converged: bool,
}

impl Quad {
    fn zero() -> Self {
        Self { value: 0.0, error: 0.0, abs_value: 0.0, evals: 0, converged: true }
    }

    fn add(&mut self, other: &Quad) {
        self.value += other.value;
        self.error += other.error;
        self.abs_value += other.abs_value;
        self.evals += other.evals;
        self.converged &= other.converged;
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel with the QUADPACK error rescaling.
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let habs = h.abs();
    let (value, res_abs, res_asc) = (res_k * h, res_abs * habs, res_asc * habs);
    let mut err = ((res_k - res_g) * h).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error: err, abs_value: res_abs }
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// The relative tolerance is measured against the integral of `|f|`, so
/// integrands with cancellation do not force endless refinement.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Quad {
    if a == b {
        return Quad::zero();
    }
    let first = gk21(&mut f, a, b);
    let mut error = first.error;
    let mut abs_value = first.abs_value;
    let mut evals = 21;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let target = |abs_value: f64| opts.abs_tol.max(opts.rel_tol * abs_value);
    while error > target(abs_value) && heap.len() < opts.max_intervals {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b)) {
            heap.push(worst);
            break;
        }
        let left = gk21(&mut f, worst.a, mid);
        let right = gk21(&mut f, mid, worst.b);
        evals += 42;
        error += left.error + right.error - worst.error;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed accumulated cancellation from the running updates
    let (mut v, mut e, mut s) = (0.0, 0.0, 0.0);
    for p in heap.iter() {
        v += p.value;
        e += p.error;
        s += p.abs_value;
    }
    Quad { value: v, error: e, abs_value: s, evals, converged: e <= target(s) }
}

/// Integral over `[a, inf)` by the map `x = a + t / (1 - t)`; suited to
/// integrands with algebraic decay.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(mut f: F, a: f64, opts: QuadOptions) -> Quad {
    integrate(
        |t: f64| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = f(a + t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        opts,
    )
}

/// Integral over `[a, inf)` of an integrand bounded by `poly(x) e^{-rate x}`.
///
/// Panels of doubling width are integrated adaptively until `rate * x >= 40`
/// and the remainder bound `2 |f(b)| / rate` falls below the tolerance.
/// The returned error includes that remainder bound.
pub fn integrate_exp_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    rate: f64,
    opts: QuadOptions,
) -> Result<Quad> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!("tail decay rate {rate} must be positive")));
    }
    let mut total = Quad::zero();
    let mut lo = a;
    let mut width = (1.0 / rate).max(a.abs() * 1e-3).max(f64::MIN_POSITIVE);
    for _ in 0..400 {
        let hi = lo + width;
        let panel = integrate(&mut f, lo, hi, opts);
        total.add(&panel);
        lo = hi;
        width *= 2.0;
        if rate * lo >= 40.0 {
            let tail = 2.0 * f(lo).abs() / rate;
            let target = opts.abs_tol.max(opts.rel_tol * total.abs_value);
            if tail <= target {
                total.error += tail;
                total.converged &= total.error <= 2.0 * target;
                return Ok(total);
            }
        }
    }
    Err(Error::Convergence { what: "exponential tail integral".into(), residual: f(lo).abs() })
}

/// Result of a vector-valued integration.
#[derive(Debug, Clone, PartialEq)]
pub struct VecQuad {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub evals: usize,
    pub converged: bool,
}

struct VecPanel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
    abs_value: Vec<f64>,
}

fn gk21_vec<F: FnMut(f64, &mut [f64])>(f: &mut F, dim: usize, a: f64, b: f64) -> VecPanel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut buf = vec![0.0; dim];
    let mut kron = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    let mut abs = vec![0.0; dim];
    f(c, &mut buf);
    for k in 0..dim {
        kron[k] = WGK[10] * buf[k];
        abs[k] = WGK[10] * buf[k].abs();
    }
    for j in 0..10 {
        for x in [c - h * XGK[j], c + h * XGK[j]] {
            f(x, &mut buf);
            for k in 0..dim {
                kron[k] += WGK[j] * buf[k];
                abs[k] += WGK[j] * buf[k].abs();
                if j % 2 == 1 {
                    gauss[k] += WG[j / 2] * buf[k];
                }
            }
        }
    }
    let habs = h.abs();
    let error = kron.iter().zip(&gauss).map(|(k, g)| ((k - g) * h).abs()).collect();
    VecPanel {
        a,
        b,
        value: kron.iter().map(|v| v * h).collect(),
        error,
        abs_value: abs.iter().map(|v| v * habs).collect(),
    }
}

/// Adaptive integration of a vector-valued integrand over `[a, b]` with
/// initial panel breakpoints. Every component must meet its own relative
/// tolerance (against the integral of its absolute value); the panel with
/// the largest normalized error is bisected first.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(mut f: F, dim: usize, breakpoints: &[f64], opts: QuadOptions) -> VecQuad {
    let mut panels: Vec<VecPanel> =
        breakpoints.windows(2).filter(|w| w[1] > w[0]).map(|w| gk21_vec(&mut f, dim, w[0], w[1])).collect();
    let mut evals = 21 * panels.len();
    let totals = |panels: &[VecPanel]| {
        let mut err = vec![0.0; dim];
        let mut abs = vec![0.0; dim];
        for p in panels {
            for k in 0..dim {
                err[k] += p.error[k];
                abs[k] += p.abs_value[k];
            }
        }
        (err, abs)
    };
    loop {
        let (err, abs) = totals(&panels);
        let targets: Vec<f64> = abs.iter().map(|a| opts.abs_tol.max(opts.rel_tol * a).max(f64::MIN_POSITIVE)).collect();
        let done = err.iter().zip(&targets).all(|(e, t)| e <= t);
        if done || panels.len() >= opts.max_intervals || panels.is_empty() {
            let mut values = vec![0.0; dim];
            for p in &panels {
                for k in 0..dim {
                    values[k] += p.value[k];
                }
            }
            return VecQuad { values, errors: err, evals, converged: done };
        }
        let score = |p: &VecPanel| p.error.iter().zip(&targets).map(|(e, t)| e / t).fold(0.0, f64::max);
        let (worst, _) = panels
            .iter()
            .enumerate()
            .map(|(i, p)| (i, score(p)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("panels are non-empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            panels.push(p);
            let (err, _) = totals(&panels);
            let mut values = vec![0.0; dim];
            for p in &panels {
                for k in 0..dim {
                    values[k] += p.value[k];
                }
            }
            return VecQuad { values, errors: err, evals, converged: false };
        }
        panels.push(gk21_vec(&mut f, dim, p.a, mid));
        panels.push(gk21_vec(&mut f, dim, mid, p.b));
        evals += 42;
    }
}
