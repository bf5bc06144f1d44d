//! The broken line `(-inf, -1] ∪ [1, inf)` with measure `|r|^{d_i - 1} dr`,
//! truncated sample grids, and the `L^p` / Lorentz `L^{p,q}` norms.
//!
//! Nodes are ordered by side (negative first), then by increasing radius.
//! Node weights are the exact integrals of the piecewise-linear hat
//! functions against the density, so they sum to the exact measure of the
//! truncated line.

use std::io::Write;
use std::sync::Arc;

use crate::error::{invalid, Result};

/// Largest end dimension accepted anywhere in the crate.
pub const MAX_DIMENSION: f64 = 20.0;

/// The pair of end dimensions `(d1, d2)` with `1 < d1 <= d2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimensions {
    pub d1: f64,
    pub d2: f64,
}

impl Dimensions {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        if !(d1 > 1.0 && d1 <= d2 && d2 <= MAX_DIMENSION) {
            return Err(invalid(format!(
                "dimensions must satisfy 1 < d1 <= d2 <= {MAX_DIMENSION}, got ({d1}, {d2})"
            )));
        }
        Ok(Self { d1, d2 })
    }

    pub fn d_star(&self) -> f64 {
        self.d1.min(self.d2)
    }

    /// Critical exponent `max(d*, d*')`.
    pub fn p0(&self) -> f64 {
        let d = self.d_star();
        d.max(d / (d - 1.0))
    }

    pub fn of(&self, side: Side) -> f64 {
        match side {
            Side::Negative => self.d1,
            Side::Positive => self.d2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Negative,
    Positive,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Negative => -1.0,
            Side::Positive => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Negative => "negative",
            Side::Positive => "positive",
        }
    }
}

/// A point of the broken line: a side and a radius `>= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrokenPoint {
    pub side: Side,
    pub radius: f64,
}

impl BrokenPoint {
    pub fn new(side: Side, radius: f64) -> Result<Self> {
        if !(radius >= 1.0) || !radius.is_finite() {
            return Err(invalid(format!("radius {radius} must be a finite number >= 1")));
        }
        Ok(Self { side, radius })
    }

    /// Point with signed coordinate `x`, `|x| >= 1`.
    pub fn at(x: f64) -> Result<Self> {
        let side = if x < 0.0 { Side::Negative } else { Side::Positive };
        Self::new(side, x.abs())
    }

    pub fn coordinate(&self) -> f64 {
        self.side.sign() * self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridScheme {
    Log,
    Uniform,
}

impl std::str::FromStr for GridScheme {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(GridScheme::Log),
            "uniform" => Ok(GridScheme::Uniform),
            other => Err(invalid(format!("unknown grid scheme '{other}' (expected log or uniform)"))),
        }
    }
}

/// `∫_a^b r^{d-1} dr` without cancellation for `b` close to `a`.
pub fn cell_mass(d: f64, a: f64, b: f64) -> f64 {
    a.powf(d) * (d * (b / a).ln()).exp_m1() / d
}

/// `∫_a^b r^d dr`.
fn cell_moment(d: f64, a: f64, b: f64) -> f64 {
    a.powf(d + 1.0) * ((d + 1.0) * (b / a).ln()).exp_m1() / (d + 1.0)
}

/// Measure of `[1, R]` on an end of dimension `d`.
pub fn exact_mass(d: f64, truncation: f64) -> f64 {
    cell_mass(d, 1.0, truncation)
}

/// One sampled ray `[1, R]` carrying the density `r^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLine {
    pub dim: f64,
    pub radii: Vec<f64>,
    /// Hat-function masses, `left_half[k] + right_half[k]`.
    pub weights: Vec<f64>,
    /// Part of `weights[k]` coming from the cell `[r_{k-1}, r_k]`.
    pub left_half: Vec<f64>,
    /// Part of `weights[k]` coming from the cell `[r_k, r_{k+1}]`.
    pub right_half: Vec<f64>,
    /// Exact cell masses `∫_{r_k}^{r_{k+1}} r^{d-1} dr`.
    pub cell_masses: Vec<f64>,
}

impl HalfLine {
    pub fn new(dim: f64, truncation: f64, nodes: usize, scheme: GridScheme) -> Result<Self> {
        let n = nodes;
        let mut radii: Vec<f64> = match scheme {
            GridScheme::Log => {
                let lr = truncation.ln();
                (0..n).map(|k| (lr * k as f64 / (n - 1) as f64).exp()).collect()
            }
            GridScheme::Uniform => {
                (0..n).map(|k| 1.0 + (truncation - 1.0) * k as f64 / (n - 1) as f64).collect()
            }
        };
        radii[0] = 1.0;
        radii[n - 1] = truncation;
        Self::from_radii(dim, radii)
    }

    /// Ray sampled at the given strictly increasing radii, starting at 1.
    pub fn from_radii(dim: f64, radii: Vec<f64>) -> Result<Self> {
        let n = radii.len();
        if n < 2 || radii[0] != 1.0 || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("radii must start at 1 and increase strictly"));
        }
        let mut left_half = vec![0.0; n];
        let mut right_half = vec![0.0; n];
        let mut cell_masses = Vec::with_capacity(n - 1);
        for k in 0..n - 1 {
            let (a, b) = (radii[k], radii[k + 1]);
            let h = b - a;
            let m0 = cell_mass(dim, a, b);
            let m1 = cell_moment(dim, a, b);
            // hat rising towards b: ∫ (r - a)/h r^{d-1}
            let rising = (m1 - a * m0) / h;
            right_half[k] = m0 - rising;
            left_half[k + 1] = rising;
            cell_masses.push(m0);
        }
        let weights = left_half.iter().zip(&right_half).map(|(l, r)| l + r).collect();
        Ok(Self { dim, radii, weights, left_half, right_half, cell_masses })
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn truncation(&self) -> f64 {
        *self.radii.last().expect("half line has at least two nodes")
    }
}

/// A truncated sample grid of `[-R, -1] ∪ [1, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub dims: Dimensions,
    pub truncation: f64,
    pub scheme: GridScheme,
    pub negative: HalfLine,
    pub positive: HalfLine,
}

impl Grid {
    pub fn build(dims: Dimensions, truncation: f64, nodes_per_side: usize, scheme: GridScheme) -> Result<Arc<Self>> {
        if !(truncation > 1.0) || !truncation.is_finite() {
            return Err(invalid(format!("truncation R = {truncation} must be finite and > 1")));
        }
        if nodes_per_side < 16 {
            return Err(invalid(format!("nodes_per_side = {nodes_per_side} must be at least 16")));
        }
        Ok(Arc::new(Self {
            dims,
            truncation,
            scheme,
            negative: HalfLine::new(dims.d1, truncation, nodes_per_side, scheme)?,
            positive: HalfLine::new(dims.d2, truncation, nodes_per_side, scheme)?,
        }))
    }

    pub fn side(&self, side: Side) -> &HalfLine {
        match side {
            Side::Negative => &self.negative,
            Side::Positive => &self.positive,
        }
    }

    pub fn len(&self) -> usize {
        self.negative.len() + self.positive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index range of a side inside the global node order.
    pub fn range(&self, side: Side) -> std::ops::Range<usize> {
        match side {
            Side::Negative => 0..self.negative.len(),
            Side::Positive => self.negative.len()..self.len(),
        }
    }

    pub fn point(&self, index: usize) -> BrokenPoint {
        let n = self.negative.len();
        if index < n {
            BrokenPoint { side: Side::Negative, radius: self.negative.radii[index] }
        } else {
            BrokenPoint { side: Side::Positive, radius: self.positive.radii[index - n] }
        }
    }

    pub fn points(&self) -> impl Iterator<Item = BrokenPoint> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn weights(&self) -> Vec<f64> {
        let mut w = self.negative.weights.clone();
        w.extend_from_slice(&self.positive.weights);
        w
    }

    pub fn total_mass(&self) -> f64 {
        self.negative.weights.iter().chain(&self.positive.weights).sum()
    }

    pub fn exact_mass(&self) -> f64 {
        exact_mass(self.dims.d1, self.truncation) + exact_mass(self.dims.d2, self.truncation)
    }
}

/// Values sampled at the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        Self { grid, values: vec![0.0; n] }
    }

    /// Samples `f(point)` at every node.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(BrokenPoint) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn side_values(&self, side: Side) -> &[f64] {
        &self.values[self.grid.range(side)]
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_norm(&self.values, &self.grid.weights(), p)
    }

    pub fn distribution_function(&self, s: f64) -> f64 {
        distribution_function(&self.values, &self.grid.weights(), s)
    }

    pub fn rearrangement(&self) -> Rearrangement {
        Rearrangement::new(&self.values, &self.grid.weights())
    }

    pub fn lorentz_norm(&self, le: LorentzExponents) -> f64 {
        self.rearrangement().lorentz_norm(le)
    }

    pub fn inner(&self, other: &GridFunction) -> f64 {
        let w = self.grid.weights();
        self.values.iter().zip(&other.values).zip(&w).map(|((a, b), w)| a * b * w).sum()
    }

    /// CSV rows `side,radius,weight,value` with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["side", "radius", "weight", "value"]).map_err(csv_err)?;
        let w = self.grid.weights();
        for (i, p) in self.grid.points().enumerate() {
            wtr.write_record([
                p.side.name().to_string(),
                format!("{:e}", p.radius),
                format!("{:e}", w[i]),
                format!("{:e}", self.values[i]),
            ])
            .map_err(csv_err)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(e.to_string())
}

/// Weighted `p`-norm of `(value, weight)` pairs; `p = inf` gives the max.
pub fn lp_norm(values: &[f64], weights: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid(format!("p = {p} must be >= 1")));
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if p.is_infinite() || scale == 0.0 {
        return Ok(scale);
    }
    let sum: f64 = values.iter().zip(weights).map(|(v, w)| w * (v.abs() / scale).powf(p)).sum();
    Ok(scale * sum.powf(1.0 / p))
}

/// Mass of `{|f| > s}`.
pub fn distribution_function(values: &[f64], weights: &[f64], s: f64) -> f64 {
    values.iter().zip(weights).filter(|(v, _)| v.abs() > s).map(|(_, w)| w).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzExponents {
    pub p: f64,
    pub q: f64,
}

impl LorentzExponents {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0) || !(q > 0.0) {
            return Err(invalid(format!("Lorentz exponents ({p}, {q}) must be positive")));
        }
        Ok(Self { p, q })
    }
}

/// Decreasing rearrangement as a right-continuous step function:
/// `f*(t) = levels[j]` for `t` in `[ends[j-1], ends[j])`, with `ends[-1] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearrangement {
    pub levels: Vec<f64>,
    pub ends: Vec<f64>,
}

impl Rearrangement {
    /// Sorts `|value|` in decreasing order; ties keep node order. Zero
    /// values are dropped since they do not contribute.
    pub fn new(values: &[f64], weights: &[f64]) -> Self {
        let mut idx: Vec<usize> = (0..values.len()).filter(|&i| values[i] != 0.0).collect();
        idx.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()).then(a.cmp(&b)));
        let mut levels = Vec::with_capacity(idx.len());
        let mut ends = Vec::with_capacity(idx.len());
        let mut mass = 0.0;
        for i in idx {
            mass += weights[i];
            let v = values[i].abs();
            if levels.last() == Some(&v) {
                *ends.last_mut().expect("levels and ends have equal length") = mass;
            } else {
                levels.push(v);
                ends.push(mass);
            }
        }
        Self { levels, ends }
    }

    pub fn support_mass(&self) -> f64 {
        self.ends.last().copied().unwrap_or(0.0)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let j = self.ends.partition_point(|&e| e <= t);
        self.levels.get(j).copied().unwrap_or(0.0)
    }

    /// Mass where `f* > s`.
    pub fn distribution(&self, s: f64) -> f64 {
        let j = self.levels.partition_point(|&v| v > s);
        if j == 0 {
            0.0
        } else {
            self.ends[j - 1]
        }
    }

    /// `(∫_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}`, integrated exactly per step.
    pub fn lorentz_norm(&self, le: LorentzExponents) -> f64 {
        let LorentzExponents { p, q } = le;
        if self.levels.is_empty() {
            return 0.0;
        }
        if p.is_infinite() {
            return if q.is_infinite() { self.levels[0] } else { f64::INFINITY };
        }
        if q.is_infinite() {
            return self.levels.iter().zip(&self.ends).map(|(v, m)| v * m.powf(1.0 / p)).fold(0.0, f64::max);
        }
        let r = q / p;
        let top = self.levels[0];
        let mut prev = 0.0;
        let mut sum = 0.0;
        for (v, &m) in self.levels.iter().zip(&self.ends) {
            let mr = m.powf(r);
            sum += (v / top).powf(q) * (mr - prev);
            prev = mr;
        }
        top * (sum / r).powf(1.0 / q)
    }
}

/// Lorentz norm of `(value, weight)` pairs.
pub fn lorentz_norm(values: &[f64], weights: &[f64], le: LorentzExponents) -> f64 {
    Rearrangement::new(values, weights).lorentz_norm(le)
}
