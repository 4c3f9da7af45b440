//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the verdicts always print. Criterion 9
//! has a sub-check that cannot hold: `|P₁⁰(L)|` at `z = 0.75+2i` is constant
//! for `L ≥ 1` (it already equals its closed-form limit). That sub-check is
//! printed as FAIL and is expected to fail; the binary exits nonzero only when
//! anything else fails or when that sub-check stops matching the limit.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rhaudit::config::{CommandKind, RunConfig};
use rhaudit::manifest::claim_ids;
use rhaudit::record::{write_records, Format, Record};
use rhaudit::suites;
use rhaudit_core::laplace_reps::{cm_scan, green, mixed_difference, CmGrid};
use rhaudit_core::quad::QuadSpec;
use rhaudit_core::report::ClaimStatus;
use rhaudit_core::rhfe::rhfe_residual;
use rhaudit_core::traces::{poisson_decay_audit, poisson_limit, TraceParams};
use rhaudit_core::Complex;

struct Verdict {
    pass: bool,
    expected_failure: bool,
    note: String,
}

impl Verdict {
    fn new(pass: bool, note: impl Into<String>) -> Self {
        Verdict { pass, expected_failure: false, note: note.into() }
    }
}

fn config(command: CommandKind) -> RunConfig {
    RunConfig { timing: false, ..RunConfig::defaults(command) }
}

fn max_residual<'a>(records: impl IntoIterator<Item = &'a Record>, id: &str) -> (f64, usize) {
    records
        .into_iter()
        .filter(|r| r.claim_id == id)
        .fold((0.0f64, 0), |(m, n), r| (if r.abs_residual.is_nan() { f64::NAN } else { m.max(r.abs_residual) }, n + 1))
}

fn within(records: &[Record], id: &str, tol: f64, count: usize) -> (bool, String) {
    let (m, n) = max_residual(records, id);
    (m <= tol && n >= count, format!("{id}: {n} cases, max residual {m:.2e} (≤ {tol:.0e})"))
}

fn race() -> Verdict {
    let start = Instant::now();
    let r = suites::race(&config(CommandKind::Verify));
    let secs = start.elapsed().as_secs_f64();
    let (ok, note) = within(&r, "rhfe.race", 1e-8, 25);
    Verdict::new(ok && secs <= 60.0, format!("{note}, {secs:.1} s"))
}

fn reflection() -> Verdict {
    let r = suites::reflection(&config(CommandKind::Verify));
    let (a, na) = within(&r, "specfun.reflection", 1e-9, 10);
    let (b, nb) = within(&r, "specfun.critical_line_real", 1e-9, 4);
    Verdict::new(a && b, format!("{na}; {nb}"))
}

fn laplace() -> Verdict {
    let r = suites::laplace(&config(CommandKind::Verify));
    let (a, na) = within(&r, "laplace.inverse_z", 1e-8, 10);
    let (b, nb) = within(&r, "laplace.green_complex", 1e-6, 10);
    Verdict::new(a && b, format!("{na}; {nb}"))
}

fn fresnel() -> Verdict {
    let r = suites::fresnel(&config(CommandKind::Verify));
    let checks = [
        within(&r, "fresnel.exp_closed_form", 1e-9, 1),
        within(&r, "fresnel.dirichlet", 1e-6, 3),
        within(&r, "fresnel.classic", 1e-6, 3),
        within(&r, "fresnel.derivative_identity", 1e-7, 1),
    ];
    let positivity = r.iter().find(|x| x.claim_id == "fresnel.lemma_positivity");
    let pos_ok = positivity.is_some_and(|p| p.status == ClaimStatus::Confirmed && p.inputs["samples"] == 200);
    let mut note: Vec<String> = checks.iter().map(|c| c.1.clone()).collect();
    note.push(format!("positivity over 200 samples {}", positivity.map_or("missing".into(), |p| p.status.to_string())));
    Verdict::new(checks.iter().all(|c| c.0) && pos_ok, note.join("; "))
}

fn theta() -> Verdict {
    let (ok, note) = within(&suites::theta_suite(&config(CommandKind::Verify)), "specfun.theta_jacobi", 1e-12, 20);
    Verdict::new(ok, note)
}

fn newton() -> Verdict {
    let (ok, note) = within(&suites::newton(&config(CommandKind::Verify)), "rhfe.newton_leibnitz", 1e-9, 100);
    Verdict::new(ok, note)
}

fn trace_algebra() -> Verdict {
    let r = suites::trace_identities(&config(CommandKind::Verify));
    let (a, na) = within(&r, "traces.decomposition", 1e-11, 200);
    let (b, nb) = within(&r, "traces.bridge", 1e-12, 200);
    Verdict::new(a && b, format!("{na}; {nb}"))
}

fn cross_path() -> Verdict {
    let start = Instant::now();
    let cfg = RunConfig { digits: 80, ..config(CommandKind::Verify) };
    let r = suites::trace_identities(&cfg);
    let secs = start.elapsed().as_secs_f64();
    let digits_ok = r.iter().filter(|x| x.claim_id == "traces.cross_path").all(|x| x.inputs["digits"] == 80);
    let (ok, note) = within(&r, "traces.cross_path", 1e-8, 9);
    Verdict::new(ok && digits_ok && secs <= 120.0, format!("{note}, digits 80, {secs:.1} s"))
}

fn poisson() -> Verdict {
    let r = suites::trace_identities(&config(CommandKind::Verify));
    let (reduction, note) = within(&r, "traces.poisson_reduction", 1e-6, 2);
    let z = Complex::new(0.75, 2.0);
    let spec = QuadSpec::default();
    let decay = poisson_decay_audit(1, z, &[1, 2, 3, 4, 5], &spec).expect("decay audit");
    let values: Vec<f64> = serde_json::from_value(decay.details["values"].clone()).expect("values");
    let limit = poisson_limit(1, z).expect("limit");
    let decreasing = decay.details["strictlyDecreasing"] == true;
    let at_limit = values.iter().all(|v| (v - limit).abs() < 1e-10);
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.15}")).collect();
    Verdict {
        pass: reduction && decreasing,
        expected_failure: reduction && !decreasing && at_limit,
        note: format!(
            "{note}; decay |P₁⁰(L)|, L=1..5 = [{}] strictly decreasing: {decreasing} (closed-form limit {limit:.15})",
            shown.join(", ")
        ),
    }
}

fn ledger() -> Verdict {
    let cfg = config(CommandKind::Ledger);
    let a = suites::ledger(&cfg);
    let b = suites::ledger(&cfg);
    let bytes = |r: &[Record]| {
        let mut v = Vec::new();
        write_records(r, Format::Json, &mut v).expect("serialize");
        v
    };
    let deterministic = bytes(&a) == bytes(&b);
    let seen: BTreeSet<&str> = a.iter().map(|r| r.claim_id.as_str()).collect();
    let missing: Vec<&str> = claim_ids().into_iter().filter(|id| !seen.contains(id)).collect();
    let finite = a.iter().all(|r| r.abs_residual.is_finite() && r.error_estimate.is_finite());
    Verdict::new(
        deterministic && missing.is_empty() && finite,
        format!("{} reports, missing claims {missing:?}, finite {finite}, deterministic {deterministic}", a.len()),
    )
}

fn cm_sign() -> Verdict {
    let (x, y, h): (f64, f64, f64) = (1.0, 2.0, 1e-4);
    let symbolic = (6.0 * x * x - 2.0 * y * y) / (x * x + y * y).powi(3);
    let fd = mixed_difference(green, x, y, 2, 0, h);
    let r = cm_scan(&CmGrid::point(x, y), 2, 0.01).expect("scan");
    let alpha = r.details["witness"]["alpha"].clone();
    let ok = fd < 0.0 && symbolic < 0.0 && (fd - symbolic).abs() < 1e-3 && alpha == serde_json::json!([2, 0])
        && r.status == ClaimStatus::Violated;
    Verdict::new(ok, format!("∂²f/∂x² at (1,2): difference {fd:.6}, symbolic {symbolic:.6}, scan witness {alpha}, {}", r.status))
}

fn rhfe_critical() -> Verdict {
    let s = Complex::new(0.5, -5.0);
    let r = TraceParams::new(s, 3, 5, 60).and_then(|p| rhfe_residual(s, &p, false)).expect("rhfe");
    let ok = r.lhs.abs() <= 1e-9 && r.rhs.abs() <= 1e-9 && r.status == ClaimStatus::Confirmed;
    Verdict::new(ok, format!("lhs {:.2e}, rhs {:.2e}, {}", r.lhs.abs(), r.rhs.abs(), r.status))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("race identity", race),
        ("reflection", reflection),
        ("Laplace representations", laplace),
        ("Fresnel suite", fresnel),
        ("theta transformation", theta),
        ("Newton-Leibnitz closed form", newton),
        ("trace algebra", trace_algebra),
        ("cross-path traces", cross_path),
        ("Poisson reduction and decay", poisson),
        ("claim ledger completeness", ledger),
        ("complete-monotonicity sign", cm_sign),
        ("functional equation on the critical line", rhfe_critical),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{tag}] {name}: {}", i + 1, v.note);
        if v.pass {
            passed += 1;
        } else if !v.expected_failure {
            unexpected += 1;
        }
    }
    println!("{passed}/12 criteria pass, {} expected failure(s), {unexpected} unexpected", 12 - passed - unexpected);
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
