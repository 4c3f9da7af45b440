//! The work behind each subcommand. Every function returns records in a
//! fixed order; parallel sections collect in input order.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rhaudit_core::fields;
use rhaudit_core::fresnel::{
    derivative_identity, exp_closed_form, fresnel_classic, fresnel_classic_exact, fresnel_cos, fresnel_sin,
    lemma_positivity_audit, AmplitudeSpec, Family,
};
use rhaudit_core::laplace_reps::{
    bernstein_rep, cm_scan, gram_psd_check, lhpd_falsify, moment_b2, rep_green_complex, rep_green_fresnel,
    rep_inverse_z, CmGrid, GramSample,
};
use rhaudit_core::quad::{integrate_finite_with_breaks, QuadSpec};
use rhaudit_core::report::{classify, complex_json, ClaimReport, Value};
use rhaudit_core::rhfe::{
    decomposition_audit, im_j_direct, im_j_n, j_tail_bound, newton_leibnitz, newton_leibnitz_period, race_report,
    rhfe_residual,
};
use rhaudit_core::specfun::{theta, zeta_star, EvalPrecision};
use rhaudit_core::traces::{
    bridge_check, cross_path_check, hausdorff_moment_audit, poisson_coarse_bound_check, poisson_decay_audit,
    poisson_reduction_check, poisson_vanishing_audit, polar_term_check, tr_cg_total, trace_decomposition_check,
    TraceParams,
};
use rhaudit_core::{Complex, Result};

use crate::config::{RunConfig, Suite};
use crate::record::{timed, timed_many, Record};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// With `--tol` the band is the given tolerance alone.
fn retol(mut r: ClaimReport, tol: Option<f64>) -> ClaimReport {
    if let Some(t) = tol {
        r.status = classify(r.abs_residual, 0.0, t);
    }
    r
}

fn one(cfg: &RunConfig, id: &str, inputs: rhaudit_core::report::Fields, f: impl FnOnce() -> Result<ClaimReport>) -> Record {
    let tol = cfg.tol;
    timed(id, inputs, cfg.timing, || f().map(|r| retol(r, tol)))
}

fn many(cfg: &RunConfig, id: &str, f: impl FnOnce() -> Result<Vec<ClaimReport>>) -> Vec<Record> {
    let tol = cfg.tol;
    timed_many(id, fields! {}, cfg.timing, || Ok(f()?.into_iter().map(|r| retol(r, tol)).collect()))
}

pub const RACE_RE: [f64; 5] = [0.2, 0.35, 0.5, 0.65, 0.8];
pub const RACE_IM: [f64; 5] = [2.0, 6.5, 11.0, 15.5, 20.0];
pub const LEDGER_RE: [f64; 5] = [0.55, 0.65, 0.75, 0.85, 0.95];
pub const LEDGER_IM: [f64; 5] = [-2.0, -4.0, -6.0, -8.0, -10.0];

fn grid(re: &[f64], im: &[f64]) -> Vec<Complex> {
    re.iter().flat_map(|&x| im.iter().map(move |&y| c(x, y))).collect()
}

pub fn race(cfg: &RunConfig) -> Vec<Record> {
    let spec = QuadSpec::default();
    grid(&RACE_RE, &RACE_IM)
        .into_par_iter()
        .map(|s| one(cfg, "rhfe.race", fields! { "s" => complex_json(s) }, || race_report(s, &spec, 1e-8)))
        .collect()
}

pub fn reflection(cfg: &RunConfig) -> Vec<Record> {
    let prec = EvalPrecision::default();
    let mut out: Vec<Record> = grid(&RACE_RE, &[2.0, 11.0, 20.0])
        .into_iter()
        .map(|s| {
            let inputs = fields! { "s" => complex_json(s) };
            one(cfg, "specfun.reflection", inputs.clone(), || {
                let a = zeta_star(s, prec)?;
                let b = zeta_star(1.0 - s, prec)?;
                Ok(ClaimReport::compare("specfun.reflection", inputs, a.into(), b.into(), 0.0, 1e-9))
            })
        })
        .collect();
    for t in [2.0, 5.0, 10.0, 14.0] {
        let s = c(0.5, t);
        let inputs = fields! { "s" => complex_json(s) };
        out.push(one(cfg, "specfun.critical_line_real", inputs.clone(), || {
            let z = zeta_star(s, prec)?;
            Ok(ClaimReport::compare("specfun.critical_line_real", inputs, Value::Real(z.im), Value::Real(0.0), 0.0, 1e-9))
        }));
    }
    out
}

/// Sample points with `re(z) ≥ 0.25`.
pub const LAPLACE_POINTS: [(f64, f64); 10] = [
    (0.25, 0.5),
    (0.25, -2.0),
    (0.5, 1.0),
    (0.75, -0.3),
    (1.0, 0.0),
    (1.0, 2.5),
    (1.5, -1.5),
    (2.0, 0.7),
    (3.0, -3.0),
    (4.0, 1.0),
];

pub fn laplace(cfg: &RunConfig) -> Vec<Record> {
    let spec = QuadSpec::default();
    let mut out: Vec<Record> = LAPLACE_POINTS
        .par_iter()
        .flat_map_iter(|&(x, y)| {
            let z = c(x, y);
            let inputs = fields! { "z" => complex_json(z) };
            [
                one(cfg, "laplace.inverse_z", inputs.clone(), || rep_inverse_z(z, &spec)),
                one(cfg, "laplace.green_complex", inputs, || rep_green_complex(z, &spec)),
            ]
        })
        .collect();
    for (x, y) in [(1.0, 1.0), (0.5, -2.0)] {
        out.extend(many(cfg, "laplace.f22_direct", || Ok(rep_green_fresnel(c(x, y), &spec)?.to_vec())));
    }
    for j in 0..5u32 {
        let inputs = fields! { "j" => j };
        out.push(one(cfg, "laplace.moment_b2", inputs.clone(), || {
            let q = moment_b2(j, &spec)?;
            let exact = 1.0 / (4 * j + 1) as f64;
            Ok(ClaimReport::compare("laplace.moment_b2", inputs, Value::Real(q.value), Value::Real(exact), q.error_estimate, 1e-12))
        }));
    }
    out
}

pub fn fresnel(cfg: &RunConfig) -> Vec<Record> {
    let spec = QuadSpec::default();
    let mut out = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        for nu in [0.5, 1.0, 2.0, 5.0] {
            let inputs = fields! { "a" => a, "nu" => nu };
            out.push(one(cfg, "fresnel.exp_closed_form", inputs.clone(), || {
                let amp = AmplitudeSpec::exp(a)?;
                let s = fresnel_sin(&amp, nu, &spec)?;
                let co = fresnel_cos(&amp, nu, &spec)?;
                let (es, ec) = exp_closed_form(a, nu);
                Ok(ClaimReport::compare(
                    "fresnel.exp_closed_form",
                    inputs,
                    Complex::new(s.value, co.value).into(),
                    Complex::new(es, ec).into(),
                    s.error_estimate + co.error_estimate,
                    1e-9,
                ))
            }));
        }
    }
    for nu in [0.5, 1.0, 2.0] {
        let inputs = fields! { "nu" => nu };
        out.push(one(cfg, "fresnel.dirichlet", inputs.clone(), || {
            let r = fresnel_sin(&AmplitudeSpec::Reciprocal, nu, &spec)?;
            Ok(ClaimReport::compare("fresnel.dirichlet", inputs, Value::Real(r.value), Value::Real(PI / 2.0), r.error_estimate, 1e-6))
        }));
        let inputs = fields! { "nu" => nu };
        out.push(one(cfg, "fresnel.classic", inputs.clone(), || {
            let r = fresnel_classic(nu, &spec)?;
            Ok(ClaimReport::compare(
                "fresnel.classic",
                inputs,
                Value::Real(r.value),
                Value::Real(fresnel_classic_exact(nu)),
                r.error_estimate,
                1e-6,
            ))
        }));
    }
    let amps = [AmplitudeSpec::Exp { a: 1.0 }, AmplitudeSpec::Gauss { a: 1.0 }, AmplitudeSpec::Rational { p: 2.0 }];
    for amp in amps {
        for nu in [0.5, 2.0] {
            out.push(one(cfg, "fresnel.derivative_identity", fields! { "amplitude" => amp, "nu" => nu }, || {
                derivative_identity(&amp, nu, &spec)
            }));
        }
    }
    out.push(positivity(cfg, 200));
    out
}

pub fn positivity(cfg: &RunConfig, samples: usize) -> Record {
    let spec = QuadSpec::default();
    one(cfg, "fresnel.lemma_positivity", fields! { "samples" => samples, "seed" => cfg.seed }, || {
        lemma_positivity_audit(samples, &Family::ALL, cfg.seed, &spec)
    })
}

pub fn theta_suite(cfg: &RunConfig) -> Vec<Record> {
    (0..20)
        .map(|k| {
            let x = 0.1 * 100f64.powf(k as f64 / 19.0);
            let inputs = fields! { "x" => x };
            one(cfg, "specfun.theta_jacobi", inputs.clone(), || {
                let lhs = 2.0 * theta(x)? + 1.0;
                let rhs = (2.0 * theta(1.0 / x)? + 1.0) / x.sqrt();
                Ok(ClaimReport::compare("specfun.theta_jacobi", inputs, Value::Real(lhs), Value::Real(rhs), 0.0, 1e-12))
            })
        })
        .collect()
}

pub fn newton(cfg: &RunConfig) -> Vec<Record> {
    let spec = QuadSpec::with_tol(1e-14, 1e-14).expect("valid tolerances");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draws: Vec<(f64, f64, f64)> = (0..100)
        .map(|_| {
            let w = rng.random_range(-2.0..2.0);
            let v = rng.random_range(0.5..5.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            let n = rng.random_range(0.0..5.0);
            (w, v, n)
        })
        .collect();
    let mut out: Vec<Record> = draws
        .par_iter()
        .map(|&(w, v, n)| {
            let inputs = fields! { "w" => w, "v" => v, "N" => n };
            one(cfg, "rhfe.newton_leibnitz", inputs.clone(), || {
                let closed = newton_leibnitz(w, v, n)?;
                let step = PI / v.abs();
                let mut pts: Vec<f64> = (0..).map(|k| k as f64 * step).take_while(|&t| t < n).collect();
                pts.push(n);
                let q = integrate_finite_with_breaks(|r: f64| (w * r).exp() * (v * r).sin(), &pts, &spec)?;
                Ok(ClaimReport::compare("rhfe.newton_leibnitz", inputs, Value::Real(closed), Value::Real(q.value), 0.0, 1e-9))
            })
        })
        .collect();
    for (w, v, l) in [(-1.0, 2.0, 3u32), (0.5, 3.0, 1), (0.25, 1.0, 2)] {
        let inputs = fields! { "w" => w, "v" => v, "L" => l };
        out.push(one(cfg, "rhfe.newton_leibnitz_period", inputs.clone(), || {
            let a = newton_leibnitz(w, v, 2.0 * PI * l as f64 / v)?;
            let b = newton_leibnitz_period(w, v, l)?;
            Ok(ClaimReport::compare("rhfe.newton_leibnitz_period", inputs, Value::Real(a), Value::Real(b), 0.0, 1e-12))
        }));
    }
    out
}

pub fn imj(cfg: &RunConfig) -> Vec<Record> {
    let spec = QuadSpec::default();
    grid(&[0.55, 0.75, 0.95], &[-2.0, -6.0, -10.0])
        .into_par_iter()
        .flat_map_iter(|s| {
            let inputs = fields! { "s" => complex_json(s) };
            let consistency = one(cfg, "rhfe.im_j_consistency", inputs.clone(), || {
                let z = zeta_star(s, EvalPrecision::default())?;
                let polar = (s * (s - 1.0)).inv().im;
                let d = im_j_direct(s, &spec)?;
                Ok(ClaimReport::compare(
                    "rhfe.im_j_consistency",
                    inputs.clone(),
                    Value::Real(z.im),
                    Value::Real(polar + d.value),
                    d.error_estimate,
                    1e-7,
                ))
            });
            let series = one(cfg, "rhfe.im_j_series", inputs.clone(), || {
                let d = im_j_direct(s, &spec)?;
                let parts = (1..=3).map(|n| im_j_n(n, s, &spec)).collect::<Result<Vec<_>>>()?;
                let sum: f64 = parts.iter().map(|q| 2.0 * q.value).sum();
                let err = d.error_estimate + parts.iter().map(|q| 2.0 * q.error_estimate).sum::<f64>();
                let tail = 2.0 * j_tail_bound(s.re, 8, 4)?;
                Ok(ClaimReport::compare("rhfe.im_j_series", inputs.clone(), Value::Real(d.value), Value::Real(sum), err, tail + 1e-11)
                    .with_detail("tailBound", tail))
            });
            [consistency, series]
        })
        .collect()
}

pub const CROSS_PATH_POINTS: [(f64, f64); 3] = [(0.75, -1.0), (0.6, -2.0), (0.9, -4.0)];

pub fn trace_identities(cfg: &RunConfig) -> Vec<Record> {
    let spec = QuadSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draws: Vec<(usize, Complex)> = (0..200)
        .map(|_| {
            let j = rng.random_range(0..=100usize);
            let v = rng.random_range(0.1..20.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            (j, c(rng.random_range(0.0..1.0), v))
        })
        .collect();
    let mut out: Vec<Record> = draws
        .iter()
        .flat_map(|&(j, s)| {
            let inputs = fields! { "j" => j, "s" => complex_json(s) };
            [
                one(cfg, "traces.decomposition", inputs.clone(), || trace_decomposition_check(j, s)),
                one(cfg, "traces.bridge", inputs, || bridge_check(j, s)),
            ]
        })
        .collect();
    let digits = cfg.digits.max(TraceParams::required_digits(3));
    let cases: Vec<(usize, Complex)> =
        CROSS_PATH_POINTS.iter().flat_map(|&(x, y)| (1..=3).map(move |n| (n, c(x, y)))).collect();
    out.extend(cases.into_par_iter().map(|(n, s)| {
        one(cfg, "traces.cross_path", fields! { "n" => n, "s" => complex_json(s) }, || {
            cross_path_check(n, &TraceParams::new(s, 3, 1, digits)?, &spec)
        })
    }).collect::<Vec<_>>());
    let z = c(0.75, 2.0);
    for l in [0, 1] {
        out.push(one(cfg, "traces.poisson_reduction", fields! { "n" => 1, "L" => l, "z" => complex_json(z) }, || {
            poisson_reduction_check(1, l, z, &spec)
        }));
    }
    out
}

pub fn verify(cfg: &RunConfig) -> Vec<Record> {
    let suites: &[Suite] = match cfg.suite {
        Suite::All => &[
            Suite::Race,
            Suite::Reflection,
            Suite::Laplace,
            Suite::Fresnel,
            Suite::Theta,
            Suite::Newton,
            Suite::Imj,
            Suite::Traces,
        ],
        ref s => std::slice::from_ref(s),
    };
    suites
        .iter()
        .flat_map(|s| match s {
            Suite::Race => race(cfg),
            Suite::Reflection => reflection(cfg),
            Suite::Laplace => laplace(cfg),
            Suite::Fresnel => fresnel(cfg),
            Suite::Theta => theta_suite(cfg),
            Suite::Newton => newton(cfg),
            Suite::Imj => imj(cfg),
            Suite::Traces => trace_identities(cfg),
            Suite::All => Vec::new(),
        })
        .collect()
}

fn poisson_z(s: Complex) -> Complex {
    c(s.re, s.im.abs())
}

/// Trace, moment and Poisson audits at the configured point.
pub fn traces_point(cfg: &RunConfig) -> Vec<Record> {
    let spec = QuadSpec::default();
    let s = c(cfg.re, cfg.im);
    let inputs = fields! { "s" => complex_json(s), "nMax" => cfg.n_max, "digits" => cfg.digits };
    let params = TraceParams::new(s, cfg.n_max, 5, cfg.digits);
    let with_params = |id: &str, f: &dyn Fn(&TraceParams) -> Result<ClaimReport>| {
        one(cfg, id, inputs.clone(), || f(params.as_ref().map_err(Clone::clone)?))
    };
    let mut out: Vec<Record> = (1..=cfg.n_max)
        .into_par_iter()
        .map(|n| with_params("traces.cross_path", &|p| cross_path_check(n, p, &spec)))
        .collect();
    out.push(with_params("traces.tr_cg_positivity", &|p| tr_cg_total(p)));
    out.push(one(cfg, "traces.hausdorff_moments", inputs.clone(), || {
        hausdorff_moment_audit(s, 20, 20, cfg.digits, cfg.allow_outside)
    }));
    out.push(one(cfg, "traces.polar_term", inputs.clone(), || polar_term_check(s)));
    for n in 1..=cfg.n_max {
        out.push(with_params("rhfe.decomposition", &|p| decomposition_audit(n, s, 5, p, &spec)));
    }
    out.push(one(cfg, "traces.poisson_vanishing", inputs.clone(), || poisson_vanishing_audit(1, s, 5, &spec)));
    let z = poisson_z(s);
    out.push(one(cfg, "traces.poisson_decay", inputs.clone(), || poisson_decay_audit(1, z, &[1, 2, 3, 4, 5], &spec)));
    out.push(one(cfg, "traces.poisson_coarse_bound", inputs.clone(), || poisson_coarse_bound_check(1, 5, z, 1, &spec)));
    for l in [0, 1] {
        out.push(one(cfg, "traces.poisson_reduction", inputs.clone(), || poisson_reduction_check(1, l, z, &spec)));
    }
    out
}

pub fn rhfe_point(cfg: &RunConfig) -> Vec<Record> {
    let s = c(cfg.re, cfg.im);
    let inputs = fields! { "s" => complex_json(s), "nMax" => cfg.n_max, "digits" => cfg.digits };
    vec![one(cfg, "rhfe.functional_equation", inputs, || {
        rhfe_residual(s, &TraceParams::new(s, cfg.n_max, 5, cfg.digits)?, cfg.allow_outside)
    })]
}

pub fn gram(cfg: &RunConfig) -> Vec<Record> {
    let inputs = fields! { "points" => cfg.points, "seed" => cfg.seed };
    vec![
        one(cfg, "laplace.gram_psd", inputs.clone(), || gram_psd_check(&GramSample::random(cfg.points, cfg.seed)?)),
        one(cfg, "laplace.gram_psd", fields! {}, || {
            gram_psd_check(&GramSample::new(vec![(1.0, 0.1), (0.1, 1.0)], vec![1.0, -1.0])?)
        }),
        one(cfg, "laplace.lhpd_falsify", inputs, || lhpd_falsify(cfg.budget, cfg.points, cfg.seed)),
    ]
}

pub fn cm(cfg: &RunConfig) -> Vec<Record> {
    let h = cfg.cm_step();
    let grid = CmGrid { x: (0.5, 3.0), y: (0.5, 3.0), nx: 6, ny: 6 };
    vec![
        one(cfg, "laplace.cm_scan", fields! { "order" => cfg.order, "h" => h }, || cm_scan(&grid, cfg.order, h)),
        one(cfg, "laplace.cm_scan", fields! { "order" => 2, "h" => 0.01 }, || cm_scan(&CmGrid::point(1.0, 2.0), 2, 0.01)),
    ]
}

/// Every audited claim: the grid sweep plus one instance of each
/// point-independent audit.
pub fn ledger(cfg: &RunConfig) -> Vec<Record> {
    let spec = QuadSpec::default();
    let mut out: Vec<Record> = grid(&LEDGER_RE, &LEDGER_IM)
        .into_par_iter()
        .flat_map_iter(|s| {
            let inputs = fields! { "s" => complex_json(s), "nMax" => cfg.n_max, "digits" => cfg.digits };
            let params = TraceParams::new(s, cfg.n_max, 5, cfg.digits);
            let p = || params.clone();
            [
                one(cfg, "rhfe.functional_equation", inputs.clone(), || rhfe_residual(s, &p()?, false)),
                one(cfg, "rhfe.decomposition", inputs.clone(), || decomposition_audit(1, s, 5, &p()?, &spec)),
                one(cfg, "traces.hausdorff_moments", inputs.clone(), || hausdorff_moment_audit(s, 20, 20, cfg.digits, false)),
                one(cfg, "traces.poisson_vanishing", inputs.clone(), || poisson_vanishing_audit(1, s, 5, &spec)),
                one(cfg, "traces.tr_cg_positivity", inputs.clone(), || tr_cg_total(&p()?)),
                one(cfg, "traces.polar_term", inputs, || polar_term_check(s)),
            ]
        })
        .collect();
    let z = c(0.75, 2.0);
    out.extend(gram(cfg));
    out.extend(cm(cfg));
    out.extend(many(cfg, "laplace.f22_factored", || Ok(rep_green_fresnel(c(1.0, 1.0), &spec)?.to_vec())));
    out.push(one(cfg, "laplace.bernstein", fields! { "r" => 1.0, "l" => 0 }, || bernstein_rep(1.0, 0, &spec)));
    out.push(one(cfg, "laplace.bernstein", fields! { "r" => 1.0, "l" => 2 }, || bernstein_rep(1.0, 2, &spec)));
    out.push(one(cfg, "traces.poisson_decay", fields! {}, || poisson_decay_audit(1, z, &[1, 2, 3, 4, 5], &spec)));
    out.push(one(cfg, "traces.poisson_coarse_bound", fields! {}, || poisson_coarse_bound_check(1, 5, z, 1, &spec)));
    out.push(positivity(cfg, 200));
    out
}
