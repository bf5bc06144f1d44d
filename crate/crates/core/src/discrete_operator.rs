//! Truncated matrix model of the broken-line Laplacian.
//!
//! The two radius-1 grid nodes are glued into one junction vertex and the
//! nodes at radius `R` carry a Dirichlet condition, so the unknowns are
//! the interior vertices ordered by signed coordinate. With `G` the
//! difference quotient on edges, `W` the exact cell masses and `M` the
//! lumped vertex masses, the stiffness is `K = Gᵀ W G` and `L = M⁻¹ K`;
//! hence `⟨Lf, g⟩_M = ⟨Gf, Gg⟩_W` holds identically.
//!
//! Two functional calculi are provided: a dense eigendecomposition for
//! small grids and a resolvent quadrature that needs only tridiagonal
//! solves, for grids with thousands of vertices per side.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::broken_line::{lorentz_norm, lp_norm, BrokenPoint, Grid, GridFunction, LorentzExponents, Side};
use crate::error::{invalid, Error, Result};
use crate::resolvent::{resolvent_kernel, Part};

/// Relative floor below which eigenvalues count as numerical zeros.
pub const ZERO_FLOOR: f64 = 1e-12;

/// Relative mass on the excluded span above which a negative power fails.
pub const EXCLUDED_MASS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub grid: Arc<Grid>,
    /// Vertex positions in signed-coordinate order; the junction is stored
    /// as the positive unit point.
    pub points: Vec<BrokenPoint>,
    pub junction: usize,
    /// Lumped vertex masses.
    pub masses: Vec<f64>,
    /// Edge `e` joins vertices `e - 1` and `e`; vertices `-1` and `len` are
    /// the Dirichlet nodes at `-R` and `R`.
    pub edge_weights: Vec<f64>,
    pub edge_lengths: Vec<f64>,
    /// Signed coordinate of each edge midpoint.
    pub edge_midpoints: Vec<f64>,
    /// Diagonal of `K`.
    pub diag: Vec<f64>,
    /// `K[i][i+1]`.
    pub off: Vec<f64>,
}

/// Builds the operator on a grid with at least 3 nodes per side.
pub fn assemble(grid: Arc<Grid>) -> Result<OperatorMatrix> {
    let (neg, pos) = (&grid.negative, &grid.positive);
    let (nn, np) = (neg.len(), pos.len());
    if nn < 3 || np < 3 {
        return Err(invalid("operator assembly needs at least 3 nodes per side"));
    }
    let mut points = Vec::with_capacity(nn + np - 3);
    let mut masses = Vec::with_capacity(nn + np - 3);
    for k in (1..nn - 1).rev() {
        points.push(BrokenPoint { side: Side::Negative, radius: neg.radii[k] });
        masses.push(neg.weights[k]);
    }
    let junction = points.len();
    points.push(BrokenPoint { side: Side::Positive, radius: 1.0 });
    masses.push(neg.weights[0] + pos.weights[0]);
    for k in 1..np - 1 {
        points.push(BrokenPoint { side: Side::Positive, radius: pos.radii[k] });
        masses.push(pos.weights[k]);
    }
    let mut edge_weights = Vec::with_capacity(nn + np - 2);
    let mut edge_lengths = Vec::with_capacity(nn + np - 2);
    let mut edge_midpoints = Vec::with_capacity(nn + np - 2);
    for k in (0..nn - 1).rev() {
        edge_weights.push(neg.cell_masses[k]);
        edge_lengths.push(neg.radii[k + 1] - neg.radii[k]);
        edge_midpoints.push(-0.5 * (neg.radii[k + 1] + neg.radii[k]));
    }
    for k in 0..np - 1 {
        edge_weights.push(pos.cell_masses[k]);
        edge_lengths.push(pos.radii[k + 1] - pos.radii[k]);
        edge_midpoints.push(0.5 * (pos.radii[k + 1] + pos.radii[k]));
    }
    let n = points.len();
    let stiff: Vec<f64> = edge_weights.iter().zip(&edge_lengths).map(|(w, h)| w / (h * h)).collect();
    let diag = (0..n).map(|i| stiff[i] + stiff[i + 1]).collect();
    let off = (0..n - 1).map(|i| -stiff[i + 1]).collect();
    Ok(OperatorMatrix { grid, points, junction, masses, edge_weights, edge_lengths, edge_midpoints, diag, off })
}

impl OperatorMatrix {
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_weights.len()
    }

    /// Vertex values of a grid function: the junction takes the mean of the
    /// two unit-radius samples and the Dirichlet nodes are dropped.
    pub fn restrict(&self, f: &GridFunction) -> Vec<f64> {
        let nn = self.grid.negative.len();
        let neg = f.side_values(Side::Negative);
        let pos = f.side_values(Side::Positive);
        let mut v = Vec::with_capacity(self.len());
        v.extend((1..nn - 1).rev().map(|k| neg[k]));
        v.push(0.5 * (neg[0] + pos[0]));
        v.extend(pos[1..pos.len() - 1].iter().copied());
        v
    }

    /// Grid function with the given vertex values and zeros at `±R`.
    pub fn extend(&self, v: &[f64]) -> GridFunction {
        let nn = self.grid.negative.len();
        let np = self.grid.positive.len();
        let j = self.junction;
        let mut values = vec![0.0; nn + np];
        for k in 1..nn - 1 {
            values[k] = v[j - k];
        }
        values[0] = v[j];
        values[nn] = v[j];
        for k in 1..np - 1 {
            values[nn + k] = v[j + k];
        }
        GridFunction { grid: self.grid.clone(), values }
    }

    /// Vertex function sampled from a closure of the point.
    pub fn sample(&self, f: impl Fn(BrokenPoint) -> f64) -> Vec<f64> {
        self.points.iter().map(|&p| f(p)).collect()
    }

    /// `K f`.
    pub fn stiffness_apply(&self, f: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * f[i];
                if i > 0 {
                    s += self.off[i - 1] * f[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * f[i + 1];
                }
                s
            })
            .collect()
    }

    /// `L f = M⁻¹ K f`.
    pub fn laplacian_apply(&self, f: &[f64]) -> Vec<f64> {
        self.stiffness_apply(f).iter().zip(&self.masses).map(|(k, m)| k / m).collect()
    }

    /// Difference quotients on edges in the signed coordinate.
    pub fn gradient(&self, f: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..=n)
            .map(|e| {
                let right = if e < n { f[e] } else { 0.0 };
                let left = if e > 0 { f[e - 1] } else { 0.0 };
                (right - left) / self.edge_lengths[e]
            })
            .collect()
    }

    /// Gradient averaged from the two edges adjacent to each vertex.
    pub fn gradient_at_vertices(&self, f: &[f64]) -> Vec<f64> {
        let g = self.gradient(f);
        (0..self.len()).map(|i| 0.5 * (g[i] + g[i + 1])).collect()
    }

    pub fn node_inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter().zip(g).zip(&self.masses).map(|((a, b), m)| a * b * m).sum()
    }

    pub fn edge_inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter().zip(g).zip(&self.edge_weights).map(|((a, b), w)| a * b * w).sum()
    }

    pub fn node_lp_norm(&self, f: &[f64], p: f64) -> Result<f64> {
        lp_norm(f, &self.masses, p)
    }

    pub fn edge_lp_norm(&self, f: &[f64], p: f64) -> Result<f64> {
        lp_norm(f, &self.edge_weights, p)
    }

    pub fn node_lorentz_norm(&self, f: &[f64], le: LorentzExponents) -> f64 {
        lorentz_norm(f, &self.masses, le)
    }

    pub fn edge_lorentz_norm(&self, f: &[f64], le: LorentzExponents) -> f64 {
        lorentz_norm(f, &self.edge_weights, le)
    }

    /// Gershgorin upper bound of the spectrum of `L`.
    pub fn spectral_upper_bound(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut r = self.diag[i];
                if i > 0 {
                    r += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    r += self.off[i].abs();
                }
                r / self.masses[i]
            })
            .fold(0.0, f64::max)
    }

    /// Number of eigenvalues of `L` below `sigma` (Sylvester inertia of
    /// `K - σM`).
    pub fn eigenvalues_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.len() {
            let sub = if i > 0 { self.off[i - 1] * self.off[i - 1] / d } else { 0.0 };
            d = self.diag[i] - sigma * self.masses[i] - sub;
            if d == 0.0 {
                d = -f64::EPSILON * self.diag[i].abs();
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// A lower bound within a factor 2 of the smallest eigenvalue of `L`.
    pub fn spectral_lower_bound(&self) -> f64 {
        let mut sigma = self.spectral_upper_bound();
        while sigma > f64::MIN_POSITIVE && self.eigenvalues_below(sigma) > 0 {
            sigma *= 0.5;
        }
        sigma
    }

    /// Solves `(K + μM) u = rhs` by the Thomas algorithm (SPD, no pivoting).
    pub fn shifted_solve(&self, mu: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut u = vec![0.0; n];
        let mut denom = self.diag[0] + mu * self.masses[0];
        u[0] = rhs[0] / denom;
        for i in 1..n {
            c[i - 1] = self.off[i - 1] / denom;
            denom = self.diag[i] + mu * self.masses[i] - self.off[i - 1] * c[i - 1];
            u[i] = (rhs[i] - self.off[i - 1] * u[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            u[i] -= c[i] * u[i + 1];
        }
        u
    }

    /// `(L + λ²)⁻¹ f`.
    pub fn resolvent_apply(&self, lambda: f64, f: &[f64]) -> Vec<f64> {
        let rhs: Vec<f64> = f.iter().zip(&self.masses).map(|(v, m)| v * m).collect();
        self.shifted_solve(lambda * lambda, &rhs)
    }
}

/// Fraction of `|y|` inside which the column comparison skips the diagonal.
pub const COLUMN_DIAGONAL_ZONE: f64 = 0.1;

/// Comparison of a discrete resolvent column with the exact kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnCheck {
    pub lambda: f64,
    pub source: BrokenPoint,
    pub max_rel_error: f64,
    pub compared: usize,
}

impl OperatorMatrix {
    /// `(L + λ²)⁻¹` applied to the unit point mass at `vertex`.
    pub fn point_mass_column(&self, lambda: f64, vertex: usize) -> Vec<f64> {
        let mut rhs = vec![0.0; self.len()];
        rhs[vertex] = 1.0;
        self.shifted_solve(lambda * lambda, &rhs)
    }

    /// Vertex closest to a point of the broken line.
    pub fn nearest_vertex(&self, p: BrokenPoint) -> usize {
        let target = p.coordinate();
        let mut best = 0;
        for (i, q) in self.points.iter().enumerate() {
            if (q.coordinate() - target).abs() < (self.points[best].coordinate() - target).abs() {
                best = i;
            }
        }
        best
    }

    /// Compares a point-mass column with the exact resolvent kernel.
    ///
    /// Vertices within `COLUMN_DIAGONAL_ZONE·|y|` of the source, within the
    /// first cell of the junction, or beyond `R/2` (Dirichlet layer) are
    /// skipped.
    pub fn resolvent_column_check(&self, lambda: f64, source: BrokenPoint) -> Result<ColumnCheck> {
        let v = self.nearest_vertex(source);
        let y = self.points[v];
        let column = self.point_mass_column(lambda, v);
        let half = 0.5 * self.grid.truncation;
        let dims = self.grid.dims;
        let mut worst = 0.0f64;
        let mut compared = 0;
        for (i, x) in self.points.iter().enumerate() {
            let near_source = if x.side == y.side { (x.radius - y.radius).abs() } else { x.radius + y.radius - 2.0 };
            if i == self.junction || near_source < COLUMN_DIAGONAL_ZONE * y.radius || x.radius > half {
                continue;
            }
            let exact = resolvent_kernel(dims, lambda, *x, y, Part::Full)?;
            if exact <= 0.0 {
                continue;
            }
            worst = worst.max((column[i] - exact).abs() / exact);
            compared += 1;
        }
        Ok(ColumnCheck { lambda, source: y, max_rel_error: worst, compared })
    }
}

/// Functions of `L` applied to vertex vectors.
pub trait FunctionalCalculus: Sync {
    fn operator(&self) -> &OperatorMatrix;

    /// `L^s f`.
    fn apply_power(&self, s: f64, f: &[f64]) -> Result<Vec<f64>>;

    /// The Riesz transform `G L^{-1/2} f`, an edge function.
    fn riesz_apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        Ok(self.operator().gradient(&self.apply_power(-0.5, f)?))
    }
}

/// Dense eigensystem of `L`, with eigenvectors orthonormal in the
/// mass-weighted inner product.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    op: OperatorMatrix,
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the `k`-th eigenvector in vertex coordinates.
    pub vectors: DMatrix<f64>,
    /// Eigenvalues below the zero floor, excluded from negative powers.
    pub excluded: usize,
}

/// Symmetric eigensolve of `M^{-1/2} K M^{-1/2}`.
pub fn spectral(op: &OperatorMatrix) -> Result<SpectralDecomposition> {
    let n = op.len();
    let root: Vec<f64> = op.masses.iter().map(|m| m.sqrt()).collect();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = op.diag[i] / op.masses[i];
        if i + 1 < n {
            let v = op.off[i] / (root[i] * root[i + 1]);
            s[(i, i + 1)] = v;
            s[(i + 1, i)] = v;
        }
    }
    let eig = SymmetricEigen::try_new(s, f64::EPSILON, 10_000).ok_or_else(|| Error::Convergence {
        what: "symmetric eigensolve".into(),
        residual: f64::NAN,
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = eig.eigenvectors[(i, k)] / root[i];
        }
    }
    let top = eigenvalues.last().copied().unwrap_or(0.0).abs();
    let excluded = eigenvalues.iter().filter(|&&l| l < ZERO_FLOOR * top).count();
    Ok(SpectralDecomposition { op: op.clone(), eigenvalues, vectors, excluded })
}

impl SpectralDecomposition {
    /// Coefficients `⟨f, φ_k⟩_M`.
    pub fn coefficients(&self, f: &[f64]) -> Vec<f64> {
        let mf: Vec<f64> = f.iter().zip(&self.op.masses).map(|(v, m)| v * m).collect();
        let mf = nalgebra::DVector::from_vec(mf);
        (self.vectors.transpose() * mf).iter().copied().collect()
    }

    fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        (self.vectors.clone() * nalgebra::DVector::from_column_slice(coeffs)).iter().copied().collect()
    }

    /// `V Λ Vᵀ M` as a dense matrix, for reconstruction checks.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.eigenvalues.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            scaled.column_mut(k).scale_mut(self.eigenvalues[k]);
        }
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.op.masses));
        scaled * self.vectors.transpose() * m
    }
}

impl FunctionalCalculus for SpectralDecomposition {
    fn operator(&self) -> &OperatorMatrix {
        &self.op
    }

    fn apply_power(&self, s: f64, f: &[f64]) -> Result<Vec<f64>> {
        if !(s >= -0.5) || !s.is_finite() {
            return Err(invalid(format!("power {s} must be >= -1/2")));
        }
        let mut c = self.coefficients(f);
        if s < 0.0 {
            let dropped: f64 = c[..self.excluded].iter().map(|v| v * v).sum::<f64>().sqrt();
            let total = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if dropped > EXCLUDED_MASS_TOL * total {
                return Err(Error::Domain(format!(
                    "input has relative mass {:e} on the {} excluded eigenvectors",
                    dropped / total,
                    self.excluded
                )));
            }
        }
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = if k < self.excluded && s < 0.0 {
                0.0
            } else if s == 0.0 {
                *ck
            } else {
                *ck * self.eigenvalues[k].max(0.0).powf(s)
            };
        }
        Ok(self.synthesize(&c))
    }
}

/// Functional calculus by quadrature of the resolvent:
/// `L^{-p} = (sin πp / π) ∫ μ^{-p} (L + μ)^{-1} dμ` for `0 < p < 1`, by the
/// trapezoid rule in `log μ`. At `p = 1/2` this is the identity
/// `L^{-1/2} = (2/π) ∫_0^∞ (L + λ²)^{-1} dλ`. Positive powers compose the
/// result with `L`.
#[derive(Debug, Clone)]
pub struct ResolventCalculus {
    op: OperatorMatrix,
    pub spectrum: (f64, f64),
    /// Step in `log μ`.
    pub step: f64,
    /// Decay (in e-folds) at which the quadrature range is truncated.
    pub margin: f64,
}

impl ResolventCalculus {
    pub fn new(op: &OperatorMatrix) -> Self {
        let spectrum = (op.spectral_lower_bound(), op.spectral_upper_bound());
        Self { op: op.clone(), spectrum, step: 0.5, margin: 36.0 }
    }

    fn negative_power(&self, p: f64, f: &[f64]) -> Vec<f64> {
        let (lo, hi) = self.spectrum;
        let u_min = lo.ln() - self.margin / (1.0 - p);
        let u_max = hi.ln() + self.margin / p;
        let count = ((u_max - u_min) / self.step).ceil() as usize + 1;
        let rhs: Vec<f64> = f.iter().zip(&self.op.masses).map(|(v, m)| v * m).collect();
        let weight = self.step * (std::f64::consts::PI * p).sin() / std::f64::consts::PI;
        let terms: Vec<Vec<f64>> = (0..count)
            .into_par_iter()
            .map(|j| {
                let u = u_min + j as f64 * self.step;
                let mu = u.exp();
                let scale = weight * (u * (1.0 - p)).exp();
                let mut x = self.op.shifted_solve(mu, &rhs);
                x.iter_mut().for_each(|v| *v *= scale);
                x
            })
            .collect();
        let mut out = vec![0.0; f.len()];
        for t in &terms {
            for (o, v) in out.iter_mut().zip(t) {
                *o += v;
            }
        }
        out
    }
}

impl FunctionalCalculus for ResolventCalculus {
    fn operator(&self) -> &OperatorMatrix {
        &self.op
    }

    fn apply_power(&self, s: f64, f: &[f64]) -> Result<Vec<f64>> {
        if !(s > -1.0 && s <= 1.0) {
            return Err(invalid(format!("resolvent calculus supports powers in (-1, 1], got {s}")));
        }
        Ok(if s == 0.0 {
            f.to_vec()
        } else if s == 1.0 {
            self.op.laplacian_apply(f)
        } else if s < 0.0 {
            self.negative_power(-s, f)
        } else {
            // L^{s-1} (L f): the error stays relative to the result, while
            // L (L^{s-1} f) amplifies it by the top of the spectrum
            self.negative_power(1.0 - s, &self.op.laplacian_apply(f))
        })
    }
}
