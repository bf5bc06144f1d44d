//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use brokenline::broken_line::{lorentz_norm, lp_norm, BrokenPoint, Dimensions, Grid, GridScheme, LorentzExponents, Side};
use brokenline::discrete_operator::{assemble, spectral, FunctionalCalculus, ResolventCalculus};
use brokenline::fit::linear_fit;
use brokenline::model_operators::{HHParams, ThModel};
use brokenline::probes::{self, Endpoint, FamilySpec, ProbeReport, Sweep, Verdict};
use brokenline::quadrature::{integrate_semi_infinite, QuadOptions};
use brokenline::resolvent::{coefficient_envelope, coefficient_slope, resolvent_kernel, resolvent_kernel_dx, Coefficient, Part, QuadrantTag};
use brokenline::riesz_kernel::{appendix_check, DimensionCase, RayLayout, Regime, DEFAULT_EPSILON};
use brokenline::specfun::{bessel_i, bessel_k, profile, profile_scaled, profile_wronskian, BesselOrder};
use brokenline::Result;

const CASES: [(f64, f64); 4] = [(1.5, 1.8), (1.5, 2.0), (1.5, 3.0), (2.5, 3.5)];
const NODES: usize = 4000;
const DOUBLINGS: [f64; 4] = [1250.0, 2500.0, 5000.0, 1e4];

type Outcome = Result<(bool, String)>;

fn dims(d1: f64, d2: f64) -> Dimensions {
    Dimensions::new(d1, d2).expect("valid dimensions")
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    Ok(linear_fit(&lx, &ly)?.slope)
}

fn summary(r: &ProbeReport) -> String {
    let ratios: Vec<String> = r.rows.iter().map(|row| format!("{:.4}", row.ratio)).collect();
    format!("{} ({}, {}) p={} {} [{}]", r.experiment, r.dims.d1, r.dims.d2, r.p, r.verdict.name(), ratios.join(" "))
}

fn special_functions() -> Outcome {
    let half = BesselOrder::new(0.5)?;
    let mut closed = 0.0f64;
    for x in log_space(0.01, 50.0, 200) {
        closed = closed.max(rel(bessel_i(half, x)?, (2.0 / (PI * x)).sqrt() * x.sinh()));
        closed = closed.max(rel(bessel_k(half, x)?, (PI / (2.0 * x)).sqrt() * (-x).exp()));
    }
    let mut wronskian = 0.0f64;
    for d in [1.2, 1.5, 2.0, 2.5, 3.0, 3.7] {
        for r in log_space(1e-2, 30.0, 60) {
            wronskian = wronskian.max(rel(profile_wronskian(d, r)?, r.powf(1.0 - d)));
        }
    }
    // The first small-argument correction is relative O(r^{|2-d|}), which
    // on [1e-3, 1e-1] biases slopes by up to 0.07 when |2-d| = 1/2; fits
    // use [1e-7, 1e-5] and the wider window is reported alongside.
    let literal = log_space(1e-3, 1e-1, 21);
    let small = log_space(1e-7, 1e-5, 21);
    let large = log_space(5.0, 30.0, 21);
    let far = log_space(50.0, 300.0, 21);
    let mut worst = 0.0f64;
    let mut literal_worst = 0.0f64;
    let mut detail = String::new();
    for d in [1.2, 1.5, 2.0, 2.5, 3.0, 3.7] {
        let at = |rs: &[f64], pick: fn(&brokenline::specfun::ProfileValues) -> f64| -> Result<Vec<f64>> {
            rs.iter().map(|&r| profile(d, r).map(|p| pick(&p))).collect()
        };
        let scaled = |rs: &[f64], pick: fn(&brokenline::specfun::ScaledProfile) -> f64| -> Result<Vec<f64>> {
            rs.iter().map(|&r| profile_scaled(d, r).map(|p| pick(&p))).collect()
        };
        let k_slope = |rs: &[f64]| -> Result<(f64, f64)> {
            Ok(if (d - 2.0).abs() < 1e-12 {
                // logarithmic growth: k against log r has slope -1
                let lx: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
                (linear_fit(&lx, &at(rs, |p| p.k)?)?.slope, -1.0)
            } else {
                (loglog_slope(rs, &at(rs, |p| p.k)?)?, (2.0 - d).min(0.0))
            })
        };
        let k_small = k_slope(&small)?;
        let k_literal = k_slope(&literal)?;
        literal_worst = literal_worst.max((k_literal.0 - k_literal.1).abs());
        let tail = (1.0 - d) / 2.0;
        let fits = [
            ("k small", k_small.0, k_small.1),
            ("l small", loglog_slope(&small, &at(&small, |p| p.l)?)?, 0.0),
            ("k' small", loglog_slope(&small, &at(&small, |p| p.dk)?)?, 1.0 - d),
            ("l' small", loglog_slope(&small, &at(&small, |p| p.dl)?)?, 1.0),
            ("k large", loglog_slope(&large, &scaled(&large, |p| p.k)?)?, tail),
            ("l large", loglog_slope(&large, &scaled(&large, |p| p.l)?)?, tail),
            ("k' large", loglog_slope(&far, &scaled(&far, |p| p.dk)?)?, tail),
            ("l' large", loglog_slope(&far, &scaled(&far, |p| p.dl)?)?, tail),
        ];
        for (name, fitted, predicted) in fits {
            let e = (fitted - predicted).abs();
            if e > worst {
                worst = e;
                detail = format!("{name} d={d}: {fitted:.4} vs {predicted:.4}");
            }
        }
    }
    let ok = closed <= 1e-10 && wronskian <= 1e-8 && worst <= 0.05;
    Ok((
        ok,
        format!(
            "half-order rel err {closed:.1e}; Wronskian rel err {wronskian:.1e}; worst exponent gap {worst:.3} ({detail}); k gap on [1e-3, 1e-1]: {literal_worst:.3}"
        ),
    ))
}

fn resolvent_kernel_checks() -> Outcome {
    let mut rng = StdRng::seed_from_u64(17);
    let mut sym = 0.0f64;
    let mut c0 = 0.0f64;
    let mut c1 = 0.0f64;
    let mut jump = 0.0f64;
    let mut orders = Vec::new();
    let signed = |x: f64| BrokenPoint::at(x).expect("|x| >= 1");
    for (d1, d2) in CASES {
        let dims = dims(d1, d2);
        for lambda in [0.1, 1.0, 3.0] {
            for q in QuadrantTag::ALL {
                let (sx, sy) = q.sides();
                for _ in 0..10 {
                    let x = BrokenPoint::new(sx, (rng.gen_range(0.0..4.0f64)).exp())?;
                    let y = BrokenPoint::new(sy, (rng.gen_range(0.0..4.0f64)).exp())?;
                    let a = resolvent_kernel(dims, lambda, x, y, Part::Full)?;
                    let b = resolvent_kernel(dims, lambda, y, x, Part::Full)?;
                    if a != 0.0 || b != 0.0 {
                        sym = sym.max((a - b).abs() / a.abs().max(b.abs()));
                    }
                }
            }
            for y in [-6.0, -2.0, 2.0, 6.0] {
                let y = signed(y);
                let (m, p) = (BrokenPoint::new(Side::Negative, 1.0)?, BrokenPoint::new(Side::Positive, 1.0)?);
                let (gm, gp) = (resolvent_kernel(dims, lambda, m, y, Part::Full)?, resolvent_kernel(dims, lambda, p, y, Part::Full)?);
                c0 = c0.max(rel(gm, gp));
                let (dm, dp) = (resolvent_kernel_dx(dims, lambda, m, y, Part::Full)?, resolvent_kernel_dx(dims, lambda, p, y, Part::Full)?);
                c1 = c1.max((dm - dp).abs() / dm.abs().max(dp.abs()));
            }
        }
        // derivative jump across the diagonal
        let h = 1e-4;
        for yc in [-10.0, -3.0, 3.0, 10.0] {
            let g = |x: f64| resolvent_kernel(dims, 1.0, signed(x), signed(yc), Part::Full);
            let measured = (g(yc + h)? - 2.0 * g(yc)? + g(yc - h)?) / h;
            let d = dims.of(signed(yc).side);
            jump = jump.max(rel(measured, -(yc.abs()).powf(1.0 - d)));
        }
        // second-order convergence of the ODE residual away from the diagonal
        for (xc, yc) in [(4.0, 9.0), (-4.0, -9.0), (-6.0, 3.0)] {
            let d = dims.of(signed(xc).side);
            let lambda = 0.7;
            let g = |x: f64| resolvent_kernel(dims, lambda, signed(x), signed(yc), Part::Full);
            let residual = |h: f64| -> Result<f64> {
                let (gm, g0, gp) = (g(xc - h)?, g(xc)?, g(xc + h)?);
                Ok(((gp - 2.0 * g0 + gm) / (h * h) + (d - 1.0) / xc * (gp - gm) / (2.0 * h) - lambda * lambda * g0).abs() / g0.abs())
            };
            let (r1, r2, r3) = (residual(0.1)?, residual(0.05)?, residual(0.025)?);
            orders.push((r1 / r2).log2().min((r2 / r3).log2()));
        }
    }
    let order = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    let ok = sym <= 1e-8 && c0 <= 1e-8 && c1 <= 1e-8 && jump <= 1e-3 && order >= 1.8;
    Ok((ok, format!("symmetry {sym:.1e}; junction value {c0:.1e}, slope {c1:.1e}; diagonal jump rel err {jump:.1e}; ODE residual order >= {order:.2}")))
}

fn coefficient_asymptotics() -> Outcome {
    let mut worst = 0.0f64;
    let mut envelopes = true;
    let mut detail = Vec::new();
    for (d1, d2) in CASES {
        let dims = dims(d1, d2);
        let case = DimensionCase::classify(dims).expect("distinct dimensions");
        let gamma = case.small_lambda_exponent(dims, Coefficient::A);
        let fit = coefficient_slope(dims, Coefficient::A, 1e-4, 1e-2, 21)?;
        worst = worst.max((fit.slope - gamma).abs());
        detail.push(format!("{:.3}/{:.3}", fit.slope, gamma));
        for which in [Coefficient::B, Coefficient::C] {
            let g = case.small_lambda_exponent(dims, which);
            let coarse = coefficient_envelope(dims, which, g, 1e-4, 1.0, 10)?;
            let fine = coefficient_envelope(dims, which, g, 1e-4, 1.0, 40)?;
            envelopes &= coarse.is_finite() && fine.is_finite() && rel(fine, coarse) <= 0.10;
        }
    }
    Ok((worst <= 0.05 && envelopes, format!("A slopes fitted/predicted {}; worst gap {worst:.3}; B, C envelopes stable: {envelopes}", detail.join(" "))))
}

fn appendix_exponents() -> Outcome {
    let mut passed = 0;
    let mut total = 0;
    let mut misses = Vec::new();
    for (d1, d2) in CASES {
        let dims = dims(d1, d2);
        for q in QuadrantTag::ALL {
            for regime in [Regime::XSmall, Regime::XLarge] {
                let c = appendix_check(dims, q, regime, DEFAULT_EPSILON, RayLayout::default(), 1e-8)?;
                total += 1;
                if c.passes() {
                    passed += 1;
                } else {
                    misses.push(format!("({d1},{d2}) {} {}", q.name(), regime.name()));
                }
            }
        }
    }
    Ok((passed == total, format!("{passed}/{total} quadrant/ordering fits within 0.1 {}", misses.join(", "))))
}

fn discrete_consistency() -> Outcome {
    let dims = dims(1.5, 3.0);
    let mut worst = 0.0f64;
    let mut min_order = f64::INFINITY;
    let coarse = assemble(Grid::build(dims, 50.0, NODES / 2, GridScheme::Log)?)?;
    let fine = assemble(Grid::build(dims, 50.0, NODES, GridScheme::Log)?)?;
    for lambda in [0.3, 1.0, 3.0] {
        for source in [BrokenPoint::new(Side::Positive, 5.0)?, BrokenPoint::new(Side::Negative, 5.0)?] {
            let e_coarse = coarse.resolvent_column_check(lambda, source)?.max_rel_error;
            let e_fine = fine.resolvent_column_check(lambda, source)?.max_rel_error;
            worst = worst.max(e_fine);
            min_order = min_order.min((e_coarse / e_fine).log2());
        }
    }
    let scalar = integrate_semi_infinite(|l| 1.0 / (4.0 + l * l), 0.0, QuadOptions::rel(1e-13)).value;
    let scalar_err = rel(scalar, PI / 4.0);
    // the operator backend reproduces λ^{-1/2} on eigenvectors
    let small = assemble(Grid::build(dims, 30.0, 60, GridScheme::Log)?)?;
    let eig = spectral(&small)?;
    let calc = ResolventCalculus::new(&small);
    let mut backend = 0.0f64;
    for k in [0, 10, eig.eigenvalues.len() - 1] {
        let v: Vec<f64> = eig.vectors.column(k).iter().cloned().collect();
        let out = calc.apply_power(-0.5, &v)?;
        let s = eig.eigenvalues[k].powf(-0.5);
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) * s;
        backend = backend.max(out.iter().zip(&v).fold(0.0f64, |m, (o, x)| m.max((o - s * x).abs())) / scale);
    }
    let ok = worst <= 0.05 && min_order >= 1.8 && scalar_err <= 1e-10 && backend <= 1e-10;
    Ok((ok, format!("column rel err {worst:.2e} at {NODES} nodes; refinement order >= {min_order:.2}; scalar identity {scalar_err:.1e}; backend eigen-check {backend:.1e}")))
}

fn exact_identities() -> Outcome {
    let dims = dims(1.5, 3.0);
    let op = assemble(Grid::build(dims, 1e3, 2000, GridScheme::Log)?)?;
    let calc = ResolventCalculus::new(&op);
    let family = probes::test_family(dims, &FamilySpec::standard(1.3, 500.0), 23)?;
    let (mut ibp, mut riesz, mut square) = (0.0f64, 0.0f64, 0.0f64);
    for pair in family.chunks(2).take(10) {
        let f = pair[0].sample(&op);
        let g = pair[1].sample(&op);
        let form = op.edge_inner(&op.gradient(&f), &op.gradient(&g));
        let scale = op.edge_inner(&op.gradient(&f), &op.gradient(&f)).sqrt() * op.edge_inner(&op.gradient(&g), &op.gradient(&g)).sqrt();
        ibp = ibp.max((op.node_inner(&op.laplacian_apply(&f), &g) - form).abs() / scale);
        let r = calc.riesz_apply(&f)?;
        riesz = riesz.max(rel(op.edge_inner(&r, &r).sqrt(), op.node_inner(&f, &f).sqrt()));
        let lf = op.laplacian_apply(&f);
        let twice = calc.apply_power(0.5, &calc.apply_power(0.5, &f)?)?;
        let diff: Vec<f64> = twice.iter().zip(&lf).map(|(a, b)| a - b).collect();
        square = square.max((op.node_inner(&diff, &diff) / op.node_inner(&lf, &lf)).sqrt());
    }
    let spec = FamilySpec { bumps: 20, power_laws: 0, indicators: 0, ..FamilySpec::standard(1.5, 500.0) };
    let fs = probes::test_family(dims, &spec, 31)?;
    let gs = probes::test_family(dims, &spec, 32)?;
    let duality = probes::duality_identity_probe(dims, 1e3, 2000, &fs, &gs, 31)?;
    let ok = ibp <= 1e-10 && duality.max_defect <= 1e-10 && duality.self_defect <= 1e-10 && riesz <= 1e-8 && square <= 1e-8;
    Ok((
        ok,
        format!(
            "form identity {ibp:.1e}; duality {:.1e} over {} pairs, self {:.1e}; Riesz L2 isometry {riesz:.1e}; half-power square {square:.1e}",
            duality.max_defect, duality.pairs, duality.self_defect
        ),
    ))
}

fn hardy() -> Outcome {
    let sweep = Sweep::new(DOUBLINGS.to_vec(), NODES)?;
    let high = dims(3.0, 3.5);
    let family = probes::test_family(high, &FamilySpec::standard(2.0, 1e3).vanishing(), 5)?;
    let constant = probes::hardy_probe(high, 2.0, &family, &sweep, 5)?;
    let low = dims(1.5, 3.0);
    let family = probes::test_family(low, &FamilySpec::standard(1.2, 1e3).vanishing(), 6)?;
    let below = probes::hardy_probe(low, 1.2, &family, &sweep, 6)?;
    let witness = probes::hardy_witness_probe(low, 1.5, &Sweep::new(vec![1e2, 1e4, 1e6], NODES)?)?;
    let ok = constant.sup_ratio() <= 2.04 && below.verdict == Verdict::BoundedStable && witness.strictly_increasing();
    Ok((ok, format!("sup {:.4} <= 2.04; {}; {}", constant.sup_ratio(), summary(&below), summary(&witness))))
}

fn riesz_bounded_range() -> Outcome {
    let sweep = Sweep::new(DOUBLINGS.to_vec(), NODES)?;
    let mut reports = Vec::new();
    for (d1, d2, ps) in [(1.5, 3.0, vec![1.3, 2.0, 2.5]), (2.5, 3.5, vec![1.5, 2.0])] {
        let dims = dims(d1, d2);
        let family = probes::test_family(dims, &FamilySpec::standard(ps[0], 1e3), 2024)?;
        reports.extend(probes::riesz_lp_probe(dims, &ps, &family, &sweep, 2024)?);
    }
    let ok = reports.iter().all(|r| r.verdict == Verdict::BoundedStable);
    let worst = reports.iter().map(|r| r.max_drift).fold(0.0, f64::max);
    Ok((ok, format!("{} reports bounded-stable, worst drift {worst:.3}", reports.iter().filter(|r| r.verdict == Verdict::BoundedStable).count())))
}

fn riesz_negative_range() -> Outcome {
    let sweep = Sweep::new(vec![1e2, 1e3, 1e4, 1e6], NODES)?;
    let first = probes::riesz_witness_probe(dims(1.5, 3.0), Some(1.0), &sweep)?;
    let second = probes::riesz_witness_probe(dims(2.5, 3.5), Some(1.5), &sweep)?;
    let r2 = first.fit.map(|f| f.r2).unwrap_or(0.0);
    let ok = first.strictly_increasing() && second.strictly_increasing() && r2 >= 0.9;
    Ok((ok, format!("{}, r2 {r2:.4}; {}", summary(&first), summary(&second))))
}

fn restricted_weak() -> Outcome {
    let dims = dims(1.5, 3.0);
    let sets = probes::test_family(dims, &FamilySpec::indicators_only(30, 1e2), 7)?;
    let (weak, strong) = probes::restricted_weak_probe(dims, &sets, &Sweep::new(vec![1e2, 1e4], NODES)?, 7)?;
    let ok = weak.sup_ratio().is_finite() && weak.max_drift <= 0.10;
    Ok((ok, format!("{}; strong-norm contrast {}", summary(&weak), summary(&strong))))
}

fn reverse_riesz() -> Outcome {
    let sweep = Sweep::new(DOUBLINGS.to_vec(), NODES)?;
    let mut ok = true;
    let mut exact = 0.0f64;
    let mut lines = Vec::new();
    for (d1, d2, ps) in [(1.5, 3.0, vec![1.2, 2.0, 5.0]), (2.5, 3.5, vec![1.5, 2.0, 4.0])] {
        let dims = dims(d1, d2);
        let family = probes::test_family(dims, &FamilySpec::standard(ps[0], 1e3).vanishing(), 11)?;
        for r in probes::reverse_riesz_probe(dims, &ps, &family, &sweep, 11)? {
            ok &= r.verdict == Verdict::BoundedStable;
            if r.p == 2.0 {
                exact = r.rows.iter().map(|row| (row.ratio - 1.0).abs()).fold(exact, f64::max);
            }
            lines.push(format!("p={} {}", r.p, r.verdict.name()));
        }
    }
    Ok((ok && exact <= 1e-8, format!("{}; |ratio - 1| at p=2: {exact:.1e}", lines.join(", "))))
}

fn model_operators() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let params = HHParams::new(2.0, 1.5, 2.5, 0.5, 2.0, 2.5)?;
    let ray = dims(params.n1, params.n1);
    let family = probes::test_family(ray, &FamilySpec::standard(1.5, 1e3).on(&[Side::Positive]), 3)?;
    let strong = probes::hh_strong_probe(&params, &[1.5, 2.0, 3.0], &family, &DOUBLINGS, 200, 3)?;
    ok &= [1.5, 2.0, 3.0].iter().all(|&p| params.strong_type_admissible(p));
    ok &= strong.iter().all(|r| r.verdict == Verdict::BoundedStable);
    let witness = probes::hh_witness_probe(&params, 5.0, &[1e2, 1e4, 1e6], 200)?;
    ok &= witness.strictly_increasing();
    lines.push(format!("strong sweep {}/3 stable, witness increasing {}", strong.iter().filter(|r| r.verdict == Verdict::BoundedStable).count(), witness.strictly_increasing()));

    let sets = probes::test_family(ray, &FamilySpec::indicators_only(30, 1e2).on(&[Side::Positive]), 4)?;
    let rs = [1e2, 1e4, 1e6];
    let p_end = params.n1 / (params.n1 - params.beta);
    let mut endpoint = vec![probes::hh_endpoint_probe(&params, Endpoint::R1Weak, p_end, params.r1_weak_target(p_end).expect("in range"), &sets, &rs, 200, 4)?];
    for p in [1.25, 2.0] {
        endpoint.push(probes::hh_endpoint_probe(&params, Endpoint::R2Weak, p, params.r2_weak_target(p).expect("defined"), &sets, &rs, 200, 4)?);
    }
    for p in [2.0, 4.0] {
        endpoint.push(probes::hh_endpoint_probe(&params, Endpoint::R1Lorentz, p, p, &sets, &rs, 200, 4)?);
    }
    ok &= endpoint.iter().all(|r| r.verdict == Verdict::BoundedStable);
    lines.push(format!("endpoints {}/5 stable", endpoint.iter().filter(|r| r.verdict == Verdict::BoundedStable).count()));

    let model = ThModel::new(1.0, 1.0, 1.0, 2.0, 2.5)?;
    let family = probes::test_family(dims(2.0, 2.0), &FamilySpec::standard(1.5, 1e3).on(&[Side::Positive]), 5)?;
    let th = probes::th_model_probe(&model, &[1.5, 2.0, 4.0], &family, &DOUBLINGS, 40, 5)?;
    ok &= th.iter().all(|r| r.verdict == Verdict::BoundedStable);
    lines.push(format!("model kernel {}/3 stable", th.iter().filter(|r| r.verdict == Verdict::BoundedStable).count()));

    let mut slopes = vec![
        probes::tij_envelope_probe(dims(1.5, 1.8), 1, 2, 2.0, DEFAULT_EPSILON, 300, 1e-6)?,
        probes::tij_envelope_probe(dims(2.5, 3.5), 2, 2, 10.0, DEFAULT_EPSILON, 300, 1e-6)?,
    ];
    for (d, q) in [(1.5, 2.0), (3.0, 2.0), (3.0, 6.0)] {
        slopes.push(probes::ij_slope_probe(d, q)?);
    }
    ok &= slopes.iter().all(|c| c.pass());
    lines.push(
        slopes
            .iter()
            .map(|c| format!("{} {:.3} vs {:.3}", c.label, c.fitted, c.predicted))
            .collect::<Vec<_>>()
            .join("; "),
    );

    let mut rng = StdRng::seed_from_u64(41);
    let mut lorentz = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..30);
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..3.0)).collect();
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let p = rng.gen_range(1.1..5.0);
        let q = rng.gen_range(1.0..6.0);
        let mu: f64 = weights.iter().sum();
        let ones = vec![1.0; n];
        lorentz = lorentz.max(rel(lorentz_norm(&ones, &weights, LorentzExponents::new(p, q)?), (p / q).powf(1.0 / q) * mu.powf(1.0 / p)));
        lorentz = lorentz.max(rel(lorentz_norm(&values, &weights, LorentzExponents::new(p, p)?), lp_norm(&values, &weights, p)?));
    }
    ok &= lorentz <= 1e-6;
    lines.push(format!("Lorentz identities {lorentz:.1e}"));
    Ok((ok, lines.join(" | ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("special functions", special_functions),
        ("resolvent kernel", resolvent_kernel_checks),
        ("coefficient asymptotics", coefficient_asymptotics),
        ("low energy exponent tables", appendix_exponents),
        ("discrete/analytic consistency", discrete_consistency),
        ("exact discrete identities", exact_identities),
        ("Hardy inequality", hardy),
        ("Riesz bounded range", riesz_bounded_range),
        ("Riesz unbounded at p0", riesz_negative_range),
        ("restricted weak endpoint", restricted_weak),
        ("reverse Riesz range", reverse_riesz),
        ("model operators", model_operators),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("{} criterion {:>2} {name} ({:.1}s): {detail}", if ok { "PASS" } else { "FAIL" }, k + 1, t.elapsed().as_secs_f64());
    }
    println!("{} of 12 criteria passed in {:.1}s", 12 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
