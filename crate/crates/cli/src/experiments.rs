//! Experiment runners. Each returns its checks, a JSON summary and CSV tables.

use crate::config::{self, CircleExpectation};
use levy_ou::burgers::{self, BurgersGrid, StochasticBurgersSetup, TimeField};
use levy_ou::cylnoise::{CylindricalWienerSpec, LevyNoiseSpec};
use levy_ou::quad::Quadrature;
use levy_ou::regularity::{self, BlowupSetup, BlowupStatus, CirclePath};
use levy_ou::rng::{derive_seed, stream, tags};
use levy_ou::sine::SineGrid;
use levy_ou::spectral_ou::{
    charfn_oracle, regularity_exponent_bound, sample_convolution, RegularityTarget, SpaceRole, SpaceSpec,
    SpectralOperator,
};
use levy_ou::stats::{par_map, Estimate};
use levy_ou::subordinator::{Scheme, SubordinatorKind};
use levy_ou::Result;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::{PI, SQRT_2};

/// One acceptance assertion.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: &'static str,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: "<=", limit, pass: value <= limit }
    }

    pub fn ge(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: ">=", limit, pass: value >= limit }
    }
}

/// A CSV artifact.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: impl IntoIterator<Item = f64>) {
        self.rows.push(row.into_iter().map(|x| x.to_string()).collect());
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub summary: Value,
    pub tables: Vec<Table>,
}

/// Deviation in standard errors, with exact estimators treated as exact.
fn sigmas(est: Estimate, target: f64) -> f64 {
    let gap = (est.mean - target).abs();
    if est.stderr > 0.0 {
        gap / est.stderr
    } else if gap <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn collect<T>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

pub fn run(experiment: &config::Experiment, seed: u64) -> Result<Outcome> {
    use config::Experiment as E;
    match experiment {
        E::SubordinatorCheck(p) => subordinator_check(p, seed),
        E::CharfnTest(p) => charfn_test(p, seed),
        E::OuSample(p) => ou_sample(p, seed),
        E::Regularity(p) => holder(p, seed),
        E::Blowup(p) => blowup(p, seed),
        E::Circle(p) => circle(p, seed),
        E::Burgers(p) => stochastic_burgers(p, seed),
        E::Bounds(p) => bounds(p, seed),
    }
}

fn subordinator_check(p: &config::SubordinatorCheck, seed: u64) -> Result<Outcome> {
    let scheme = p.scheme();
    let sub = &p.subordinator;
    let first = sub.simulate_path(p.horizon, scheme, derive_seed(seed, tags::PATH, 0))?;
    let z = collect(par_map(p.paths, |i| {
        sub.simulate_path(p.horizon, scheme, derive_seed(seed, tags::PATH, i as u64)).map(|z| z.value(p.horizon))
    }))?;
    let mut table = Table::new("laplace.csv", &["r", "empirical", "stderr", "exact", "deviation_sigmas"]);
    let mut worst = 0.0f64;
    for &r in &p.r {
        let est = Estimate::of(&z.iter().map(|z| (-r * z).exp()).collect::<Vec<_>>());
        let exact = (-p.horizon * sub.laplace_exponent(r)?).exp();
        let k = sigmas(est, exact);
        worst = worst.max(k);
        table.push([r, est.mean, est.stderr, exact, k]);
    }
    let mut path = Table::new("path.csv", &["tau", "jump"]);
    for j in first.jumps() {
        path.push([j.time, j.size]);
    }
    let membership = p
        .sub_p
        .iter()
        .map(|&q| sub.sub_p_membership(q).map(|m| json!({ "p": q, "member": m.member, "certificate": m.certificate })))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        checks: vec![Check::le("max Laplace-transform deviation (sigmas)", worst, p.sigmas)],
        summary: json!({
            "scheme": scheme,
            "finite_variation": sub.finite_variation_diagnostic(),
            "sub_p": membership,
            "exported_path": { "horizon": first.horizon(), "slope": first.slope(), "jumps": first.jumps().len() },
        }),
        tables: vec![table, path],
    })
}

fn random_functionals(weights: &[f64], count: usize, lo: f64, hi: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut r = stream(seed, tags::INSTANCE, 0);
    let n = weights.len() as f64;
    (0..count)
        .map(|_| {
            let scale = lo + (hi - lo) * r.random::<f64>();
            weights
                .iter()
                .map(|w| {
                    let g: f64 = StandardNormal.sample(&mut r);
                    scale * g / (w * n.sqrt())
                })
                .collect()
        })
        .collect()
}

fn charfn_test(p: &config::CharfnTest, seed: u64) -> Result<Outcome> {
    let weights: Vec<f64> = (1..=p.modes).map(|j| (j as f64).powf(p.weight_exponent)).collect();
    let noise = LevyNoiseSpec::new(CylindricalWienerSpec::new(weights.clone())?, p.subordinator.clone());
    let phis = random_functionals(&weights, p.functionals, 0.4, 2.0, seed);
    let horizon = *p.times.last().expect("validated");
    let scheme = p.scheme();
    let mut grid = vec![0.0];
    grid.extend(&p.times);
    // pairings[path][time][functional]
    let pairings = collect(par_map(p.paths, |i| -> Result<Vec<Vec<f64>>> {
        let s = derive_seed(seed, tags::PATH, i as u64);
        let z = noise.subordinator.simulate_path(horizon, scheme, s)?;
        let inc = noise.sample_increments(&z, &grid, s)?;
        let mut y = vec![0.0; p.modes];
        Ok(inc
            .iter()
            .map(|c| {
                y.iter_mut().zip(&c.coefficients).for_each(|(a, b)| *a += b);
                phis.iter().map(|f| noise.wiener.pairing(&y, f)).collect()
            })
            .collect())
    }))?;
    let mut table = Table::new(
        "charfn.csv",
        &["functional", "t", "h_norm_sq", "re", "re_stderr", "im", "im_stderr", "exact", "deviation_sigmas"],
    );
    let mut worst = 0.0f64;
    for (ti, &t) in p.times.iter().enumerate() {
        for (k, phi) in phis.iter().enumerate() {
            let re = Estimate::of(&pairings.iter().map(|s| s[ti][k].cos()).collect::<Vec<_>>());
            let im = Estimate::of(&pairings.iter().map(|s| s[ti][k].sin()).collect::<Vec<_>>());
            let exact = noise.char_functional(phi, t)?;
            let dev = sigmas(re, exact).max(sigmas(im, 0.0));
            worst = worst.max(dev);
            table.push([k as f64, t, noise.wiener.h_norm_sq(phi), re.mean, re.stderr, im.mean, im.stderr, exact, dev]);
        }
    }
    Ok(Outcome {
        checks: vec![Check::le("max characteristic-functional deviation (sigmas)", worst, p.sigmas)],
        summary: json!({ "scheme": scheme, "pairs": p.times.len() * p.functionals }),
        tables: vec![table],
    })
}

fn ou_sample(p: &config::OuSample, seed: u64) -> Result<Outcome> {
    let op = SpectralOperator::fractional_laplacian(p.dim, p.gamma, p.per_axis)?;
    let weights: Vec<f64> = op.mu().iter().map(|m| m.powf(p.weight_exponent)).collect();
    let noise = LevyNoiseSpec::new(CylindricalWienerSpec::new(weights.clone())?, p.subordinator.clone());
    let quad = Quadrature::with_rel_tol(p.quad_tol);
    let scheme = p.scheme();
    let mut r = stream(seed, tags::INSTANCE, 0);
    let mut table = Table::new("charfn.csv", &["pair", "t", "empirical", "stderr", "oracle", "deviation_sigmas"]);
    let mut worst = 0.0f64;
    for pair in 0..p.pairs {
        let t = p.times[pair % p.times.len()];
        let scale = 1.0 + 3.0 * r.random::<f64>();
        let phi: Vec<f64> = weights
            .iter()
            .map(|w| {
                let g: f64 = StandardNormal.sample(&mut r);
                scale * g / (w * (weights.len() as f64).sqrt())
            })
            .collect();
        let oracle = charfn_oracle(&op, &noise, &phi, t, &quad)?;
        let vals = collect(par_map(p.paths, |i| {
            let s = derive_seed(seed ^ pair as u64, tags::PATH, i as u64);
            let z = noise.subordinator.simulate_path(t, scheme, s)?;
            let x = sample_convolution(&op, &noise, &z, t, s)?;
            Ok(noise.wiener.pairing(&x.coefficients, &phi).cos())
        }))?;
        let est = Estimate::of(&vals);
        let k = sigmas(est, oracle);
        worst = worst.max(k);
        table.push([pair as f64, t, est.mean, est.stderr, oracle, k]);
    }
    let mut checks = vec![Check::le("max OU characteristic-functional deviation (sigmas)", worst, p.sigmas)];
    if p.subordinator.kind() == SubordinatorKind::DriftOnly {
        let b = p.subordinator.drift();
        let mut gap = 0.0f64;
        for &t in &p.times {
            let phi: Vec<f64> = (0..op.len()).map(|j| 1.0 / (j + 1) as f64).collect();
            let exact = (-0.5
                * b
                * phi
                    .iter()
                    .zip(&weights)
                    .zip(op.lambda())
                    .map(|((f, w), l)| (w * f).powi(2) * (1.0 - (-2.0 * l * t).exp()) / (2.0 * l))
                    .sum::<f64>())
            .exp();
            let o = charfn_oracle(&op, &noise, &phi, t, &quad)?;
            gap = gap.max(((o - exact) / exact).abs());
        }
        checks.push(Check::le("Gaussian closed-form relative gap", gap, 1e-8));
    }

    let t = *p.times.last().expect("validated");
    let s = derive_seed(seed, tags::FIELD, 0);
    let z = noise.subordinator.simulate_path(t, scheme, s)?;
    let x = sample_convolution(&op, &noise, &z, t, s)?;
    let idx: Vec<String> = (1..=p.dim).map(|i| format!("n{i}")).collect();
    let mut header: Vec<&str> = idx.iter().map(String::as_str).collect();
    header.push("coefficient");
    let mut field = Table::new("field.csv", &header);
    for (j, c) in x.coefficients.iter().enumerate() {
        field.push(op.multi_index(j).iter().map(|&n| n as f64).chain([*c]));
    }
    let mut tables = vec![table, field];
    if p.dim == 1 {
        let mut phys = Table::new("physical.csv", &["x", "value"]);
        for (i, v) in x.physical(&op, p.grid_m)?.into_iter().enumerate() {
            phys.push([PI * i as f64 / p.grid_m as f64, v]);
        }
        tables.push(phys);
    }
    let verdict = regularity_exponent_bound(&op, &noise, RegularityTarget::Holder(0.0))?;
    Ok(Outcome {
        checks,
        summary: json!({ "scheme": scheme, "critical_holder_exponent": verdict.critical, "p_hat": verdict.p_hat }),
        tables,
    })
}

fn holder(p: &config::Regularity, seed: u64) -> Result<Outcome> {
    let op = SpectralOperator::fractional_laplacian(1, p.gamma, p.modes)?;
    let noise = LevyNoiseSpec::new(CylindricalWienerSpec::white(p.modes)?, p.subordinator.clone());
    let scheme = p.scheme();
    let est = collect(par_map(p.paths, |i| {
        let s = derive_seed(seed, tags::PATH, i as u64);
        let z = noise.subordinator.simulate_path(p.time, scheme, s)?;
        let x = sample_convolution(&op, &noise, &z, p.time, s)?;
        regularity::estimate_holder(&x, &op, p.grid_m)
    }))?;
    let mut table = Table::new("holder.csv", &["path", "delta", "ci_low", "ci_high"]);
    for (i, e) in est.iter().enumerate() {
        table.push([i as f64, e.delta, e.ci.0, e.ci.1]);
    }
    let mean = Estimate::of(&est.iter().map(|e| e.delta).collect::<Vec<_>>());
    let verdict = regularity_exponent_bound(&op, &noise, RegularityTarget::Holder(0.0))?;
    let mut checks = vec![Check::le("non-finite estimates", est.iter().filter(|e| !e.delta.is_finite()).count() as f64, 0.0)];
    if let Some(a) = p.accept_min {
        checks.push(Check::ge("mean Hoelder exponent", mean.mean, a));
    }
    if let Some(b) = p.accept_max {
        checks.push(Check::le("mean Hoelder exponent", mean.mean, b));
    }
    Ok(Outcome {
        checks,
        summary: json!({
            "scheme": scheme,
            "mean_delta": mean.mean,
            "stderr": mean.stderr,
            "critical_holder_exponent": verdict.critical,
            "p_hat": verdict.p_hat,
        }),
        tables: vec![table],
    })
}

fn blowup(p: &config::Blowup, seed: u64) -> Result<Outcome> {
    let n = *p.truncations.last().expect("validated");
    let op = SpectralOperator::fractional_laplacian(1, p.gamma, n)?;
    let noise = LevyNoiseSpec::new(CylindricalWienerSpec::white(n)?, p.subordinator.clone());
    let setup = BlowupSetup {
        f: SpaceSpec::sobolev(SpaceRole::E, &op, p.f_order)?,
        u: SpaceSpec::sobolev(SpaceRole::U, &op, p.u_order)?,
        threshold: p.threshold,
        truncations: p.truncations.clone(),
        window: p.window,
        window_points: p.window_points,
    };
    let mut table = Table::new("blowup.csv", &["attempt", "truncation", "sup_f", "sup_u"]);
    let mut per_seed = Vec::new();
    let (mut conclusive, mut success, mut attempt) = (0, 0, 0);
    while conclusive < p.seeds && attempt < p.max_attempts {
        let path = noise.simulate(p.horizon, Scheme::Cutoff { epsilon: p.epsilon }, derive_seed(seed, tags::PATH, attempt as u64))?;
        let rep = regularity::blowup_probe(&op, &path, &setup)?;
        attempt += 1;
        if rep.status == BlowupStatus::Inconclusive {
            continue;
        }
        conclusive += 1;
        let ok = rep.slope >= p.min_slope && rep.u_ratio <= p.max_u_ratio;
        success += usize::from(ok);
        for ((n, f), u) in rep.truncations.iter().zip(&rep.sup_f).zip(&rep.sup_u) {
            table.push([(attempt - 1) as f64, *n as f64, *f, *u]);
        }
        per_seed.push(json!({ "attempt": attempt - 1, "tau1": rep.tau1, "slope": rep.slope, "u_ratio": rep.u_ratio, "status": rep.status }));
    }
    let series = setup.f.weights().iter().map(|w| w * w).sum::<f64>();
    Ok(Outcome {
        checks: vec![
            Check::ge("seeds with a large jump", conclusive as f64, p.seeds as f64),
            Check::ge("seeds with growing F-norm and bounded U-norm", success as f64, p.min_success as f64),
        ],
        summary: json!({ "attempts": attempt, "f_weight_series": series, "seeds": per_seed }),
        tables: vec![table],
    })
}

fn circle(p: &config::Circle, seed: u64) -> Result<Outcome> {
    let noise = regularity::scalar_noise(p.subordinator.clone())?;
    let path = noise.simulate(2.0 * PI, Scheme::Cutoff { epsilon: p.epsilon }, seed)?;
    let cp = CirclePath::from_noise(&p.profile, &path, p.cells)?;
    let sweep = regularity::circle_refinement(&cp, &p.grids)?;
    let mut table = Table::new("circle.csv", &["grid", "sup"]);
    for (g, s) in sweep.grids.iter().zip(&sweep.sups) {
        table.push([*g as f64, *s]);
    }
    let m = *p.grids.last().expect("validated");
    let mut conv = Table::new("convolution.csv", &["z", "value"]);
    for (i, v) in regularity::circle_convolution(&cp, m)?.into_iter().enumerate() {
        conv.push([2.0 * PI * i as f64 / m as f64, v]);
    }
    let checks = match p.expect {
        Some(CircleExpectation::Grows) => vec![Check::ge("log-log slope of sup", sweep.slope, regularity::GROWTH_SLOPE)],
        Some(CircleExpectation::Bounded) => vec![Check::le("log-log slope of sup", sweep.slope, regularity::GROWTH_SLOPE)],
        None => Vec::new(),
    };
    Ok(Outcome {
        checks,
        summary: json!({
            "slope": sweep.slope,
            "grows": sweep.grows,
            "finite_variation": p.subordinator.finite_variation_diagnostic(),
        }),
        tables: vec![table, conv],
    })
}

fn stochastic_burgers(p: &config::Burgers, seed: u64) -> Result<Outcome> {
    let setup = StochasticBurgersSetup {
        theta: p.theta,
        subordinator: p.subordinator.clone(),
        scheme: Scheme::Cutoff { epsilon: p.epsilon },
        grid: BurgersGrid::new(p.horizon, p.steps, p.modes)?,
    };
    let forcing = |_: f64| p.forcing.clone();
    let sol = burgers::solve_stochastic_burgers(&p.u0, TimeField::Func(&forcing), &setup, seed)?;
    let residuals = (1..=p.test_modes)
        .map(|k| sol.weak_residual(&p.u0, TimeField::Func(&forcing), k))
        .collect::<Result<Vec<_>>>()?;
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let grid = SineGrid::new(p.grid_m);
    let mut snaps = Table::new("snapshots.csv", &["t", "x", "u"]);
    let last = sol.times.len() - 1;
    for s in 0..p.snapshots {
        let i = (s * last) / (p.snapshots - 1);
        for (k, v) in grid.synthesize_sine(&sol.u[i]).into_iter().enumerate() {
            snaps.push([sol.times[i], k as f64 / p.grid_m as f64, SQRT_2 * v]);
        }
    }
    let mut res = Table::new("residuals.csv", &["mode", "residual"]);
    for (k, r) in residuals.iter().enumerate() {
        res.push([(k + 1) as f64, *r]);
    }
    Ok(Outcome {
        checks: vec![Check::le("max weak-form residual", worst, p.residual_tol)],
        summary: json!({ "certificate": sol.certificate, "dt": setup.grid.dt() }),
        tables: vec![snaps, res],
    })
}

type Modes = Vec<(f64, f64, f64)>;

fn instance(p: &config::Bounds, seed: u64, i: u64) -> (Vec<f64>, Modes, Modes, f64) {
    let mut r = stream(seed, tags::INSTANCE, i);
    let horizon = p.horizons[r.random_range(0..p.horizons.len())];
    let norm = p.v0_norm.0 + (p.v0_norm.1 - p.v0_norm.0) * r.random::<f64>();
    let mut v0: Vec<f64> = (1..=6.min(p.modes))
        .map(|k| {
            let g: f64 = StandardNormal.sample(&mut r);
            g / k as f64
        })
        .collect();
    let s = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
    v0.iter_mut().for_each(|x| *x *= norm / s);
    let mut modes = |amp: f64| -> Modes {
        (1..=4.min(p.modes))
            .map(|k| (amp * (2.0 * r.random::<f64>() - 1.0) / k as f64, 1.0 + 6.0 * r.random::<f64>(), 6.3 * r.random::<f64>()))
            .collect()
    };
    let z = modes(p.z_amplitude);
    let g = modes(p.g_amplitude);
    (v0, z, g, horizon)
}

fn bounds(p: &config::Bounds, seed: u64) -> Result<Outcome> {
    let eval = |m: &Modes, t: f64| -> Vec<f64> { m.iter().map(|(a, w, ph)| a * (w * t + ph).cos()).collect() };
    let reports = collect(par_map(p.instances, |i| {
        let (v0, z, g, horizon) = instance(p, seed, i as u64);
        let zf = |t: f64| eval(&z, t);
        let gf = |t: f64| eval(&g, t);
        let steps = ((p.steps_per_unit as f64 * horizon).round() as usize).max(1);
        let grid = BurgersGrid::new(horizon, steps, p.modes)?;
        let tr = burgers::solve_modified_burgers(&v0, TimeField::Func(&zf), TimeField::Func(&gf), grid)?;
        let norm = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok((horizon, norm, burgers::check_apriori(&tr, &v0)))
    }))?;
    let mut table = Table::new(
        "bounds.csv",
        &[
            "instance", "horizon", "v0_norm", "energy_lhs", "energy_rhs", "gradient_lhs", "gradient_rhs", "derivative_lhs",
            "derivative_rhs", "l4_lhs", "l4_rhs", "holds",
        ],
    );
    let mut worst = [0.0f64; 4];
    for (i, (h, norm, r)) in reports.iter().enumerate() {
        let b = [r.energy, r.gradient, r.derivative, r.l4];
        for (w, c) in worst.iter_mut().zip(&b) {
            *w = w.max(c.lhs / c.rhs);
        }
        table.push(
            [i as f64, *h, *norm]
                .into_iter()
                .chain(b.iter().flat_map(|c| [c.lhs, c.rhs]))
                .chain([f64::from(u8::from(r.all_hold()))]),
        );
    }
    let failures = reports.iter().filter(|r| !r.2.all_hold()).count();
    Ok(Outcome {
        checks: vec![Check::le("instances violating a bound", failures as f64, 0.0)],
        summary: json!({
            "slack": burgers::APRIORI_SLACK,
            "max_ratio": { "energy": worst[0], "gradient": worst[1], "derivative": worst[2], "l4": worst[3] },
        }),
        tables: vec![table],
    })
}
