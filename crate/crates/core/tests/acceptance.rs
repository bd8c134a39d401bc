//! Acceptance criteria, one verdict line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use gpchain::chain::{mixing_angle, Field};
use gpchain::decoherence::{decoherence_modulus, DecoherenceKernel};
use gpchain::geophase::{eigen_spectrum, geometric_phase, geometric_phase_general, unperturbed_phase, wrapped_difference};
use gpchain::output::render_csv;
use gpchain::stats::{find_extrema, log_log_slope, quadratic_fit};
use gpchain::sweep::{run_sweep, FigureId, FigurePreset, SweepTable};
use gpchain::verify::{equivalence_gap, equivalence_params, phase_shifts, scaling_params};
use gpchain::ModelParams;

const UNITARY_TOL: f64 = 1e-9;
const EQUIVALENCE_TOL: f64 = 1e-10;
const EQUIVALENCE_POINTS: usize = 64;
const PEAK_WINDOW: f64 = 0.05;
/// Extrema closer than this are one feature.
const PEAK_SEPARATION: f64 = 0.3;
const G_SLOPE: (f64, f64) = (2.0, 0.05);
const G_SCAN: [f64; 4] = [1e-3, 2e-3, 5e-3, 1e-2];
const ETA_SLOPE: (f64, f64) = (-2.0, 0.1);
const ETA_SCAN: [f64; 4] = [PI / 5.0, PI / 3.0, 2.0 * PI / 3.0, PI];
/// Weak coupling of the eta scan.
const ETA_SCAN_G: f64 = 0.01;
const SIGN_FLIP_G: f64 = 0.03;
const PRECISION_TOL: f64 = 1e-12;
const CROSS_BOUND: f64 = 1e-5;
const CROSS_STEPS: usize = 4096;
const CROSS_ALPHAS: [f64; 3] = [-0.3, 0.2, 0.7];
const CROSS_BETAS: [f64; 3] = [PI / 5.0, PI / 2.0, 4.0 * PI / 5.0];
/// Offset from the critical line of the short-time fit.
const SHORT_TIME_OFFSET: f64 = 0.05;
const SHORT_TIME_SAMPLES: usize = 201;
const SHORT_TIME_RATIO: f64 = 1e-3;
const SPECTRUM_ATOL: f64 = 1e-15;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

type Criterion = fn() -> gpchain::Result<Verdict>;

fn fig1_base(g: f64) -> ModelParams {
    ModelParams { g, ..scaling_params() }
}

fn unitary_limit() -> gpchain::Result<Verdict> {
    let mut worst: f64 = 0.0;
    for j in 0..=8 {
        let beta = PI * j as f64 / 8.0;
        let p = ModelParams { beta, ..fig1_base(0.0) };
        let phi = geometric_phase(&p, PRECISION_TOL)?.raw_phi;
        worst = worst.max((phi - unperturbed_phase(beta)).abs());
    }
    Ok(verdict(
        worst < UNITARY_TOL,
        format!("max |phi - pi(1+cos beta)| = {worst:.3e} over 9 beta values (< {UNITARY_TOL:e})"),
    ))
}

fn oracle_equivalence() -> gpchain::Result<Verdict> {
    let direct = |p: &ModelParams, t: f64| decoherence_modulus(p, t);
    let mut parts = Vec::new();
    let mut passed = true;
    for n in [8, 10, 100] {
        let gap = equivalence_gap(&equivalence_params(n), EQUIVALENCE_POINTS, &direct)?;
        passed &= gap < EQUIVALENCE_TOL;
        parts.push(format!("N={n}: {gap:.3e}"));
    }
    Ok(verdict(
        passed,
        format!("max gap {} over {EQUIVALENCE_POINTS} points (< {EQUIVALENCE_TOL:e})", parts.join(", ")),
    ))
}

fn strongest_extrema(table: &SweepTable, overlay: Option<f64>, reference: f64, count: usize) -> Vec<f64> {
    let (xs, ys) = table.curve(overlay);
    find_extrema(&xs, &ys, reference, count, PEAK_SEPARATION)
        .into_iter()
        .map(|e| e.x)
        .collect()
}

fn critical_point_shift() -> gpchain::Result<Verdict> {
    let spec = FigurePreset::new(FigureId::Fig3).spec;
    let table = run_sweep(&spec)?;
    let reference = unperturbed_phase(spec.base.beta);
    let mut passed = true;
    let mut parts = Vec::new();
    for (alpha, expected) in [(0.0, 1.0), (0.2, 1.4)] {
        let at = strongest_extrema(&table, Some(alpha), reference, 1);
        let x = at.first().copied().unwrap_or(f64::NAN);
        passed &= (x - expected).abs() <= PEAK_WINDOW;
        parts.push(format!("alpha={alpha}: lambda={x:.3} (expected {expected} +- {PEAK_WINDOW})"));
    }
    Ok(verdict(passed, parts.join("; ")))
}

fn zero_field_critical_points() -> gpchain::Result<Verdict> {
    let mut spec = FigurePreset::new(FigureId::Fig1).spec;
    spec.overlay = None;
    let table = run_sweep(&spec)?;
    let mut at = strongest_extrema(&table, None, unperturbed_phase(spec.base.beta), 2);
    at.sort_by(f64::total_cmp);
    let hit = |target: f64| at.iter().any(|x| (x - target).abs() <= PEAK_WINDOW);
    Ok(verdict(
        at.len() == 2 && hit(-0.5) && hit(0.5),
        format!("two strongest extrema at alpha = {at:.3?} (expected -0.5 and 0.5 +- {PEAK_WINDOW})"),
    ))
}

fn coupling_scaling() -> gpchain::Result<Verdict> {
    let shifts = phase_shifts(&scaling_params(), &G_SCAN, PRECISION_TOL)?;
    let slope = log_log_slope(&G_SCAN, &shifts).unwrap_or(f64::NAN);
    let (target, window) = G_SLOPE;
    Ok(verdict(
        (slope - target).abs() <= window,
        format!("slope of ln|phi - phi0| vs ln g = {slope:.4} (expected {target} +- {window})"),
    ))
}

fn sign_flip() -> gpchain::Result<Verdict> {
    let shift = |beta: f64| -> gpchain::Result<f64> {
        let p = ModelParams { beta, ..fig1_base(SIGN_FLIP_G) };
        Ok(geometric_phase(&p, PRECISION_TOL)?.raw_phi - unperturbed_phase(beta))
    };
    let low = shift(PI / 5.0)?;
    let high = shift(4.0 * PI / 5.0)?;
    Ok(verdict(
        low > 0.0 && high < 0.0,
        format!("phi - phi0 = {low:.5e} at beta=pi/5, {high:.5e} at beta=4pi/5"),
    ))
}

fn eta_scaling() -> gpchain::Result<Verdict> {
    let base = fig1_base(ETA_SCAN_G);
    let phi0 = unperturbed_phase(base.beta);
    let shifts = ETA_SCAN
        .iter()
        .map(|&eta| Ok((geometric_phase(&ModelParams { eta, ..base }, PRECISION_TOL)?.raw_phi - phi0).abs()))
        .collect::<gpchain::Result<Vec<f64>>>()?;
    let slope = log_log_slope(&ETA_SCAN, &shifts).unwrap_or(f64::NAN);
    let (target, window) = ETA_SLOPE;
    Ok(verdict(
        (slope - target).abs() <= window,
        format!(
            "slope of ln|phi - phi0| vs ln eta = {slope:.4} (expected {target} +- {window}); shifts {}",
            shifts.iter().map(|s| format!("{s:.3e}")).collect::<Vec<_>>().join(" ")
        ),
    ))
}

fn cross_definition() -> gpchain::Result<Verdict> {
    let mut worst_diff: f64 = 0.0;
    let mut worst_estimate: f64 = 0.0;
    let mut passed = true;
    for &alpha in &CROSS_ALPHAS {
        for &beta in &CROSS_BETAS {
            let p = ModelParams { alpha, beta, ..fig1_base(0.03) };
            let closed = geometric_phase(&p, PRECISION_TOL)?;
            let general = geometric_phase_general(&p, CROSS_STEPS)?;
            let diff = wrapped_difference(closed.phi, general.phi).abs();
            let estimate = closed.quadrature_error + general.quadrature_error;
            passed &= diff <= CROSS_BOUND && estimate <= CROSS_BOUND;
            worst_diff = worst_diff.max(diff);
            worst_estimate = worst_estimate.max(estimate);
        }
    }
    Ok(verdict(
        passed,
        format!(
            "max |difference| = {worst_diff:.3e}, max combined estimate = {worst_estimate:.3e} on 3x3 (alpha, beta) (both <= {CROSS_BOUND:e})"
        ),
    ))
}

fn short_time_gaussian() -> gpchain::Result<Verdict> {
    let mut passed = true;
    let mut parts = Vec::new();
    for alpha in [0.0, 0.2] {
        let p = ModelParams {
            alpha,
            lambda: 1.0 + 2.0 * alpha + SHORT_TIME_OFFSET,
            ..FigurePreset::new(FigureId::Fig3).spec.base
        };
        let kernel = DecoherenceKernel::new(&p)?;
        let h = p.period() / 20.0;
        let ts: Vec<f64> = (0..SHORT_TIME_SAMPLES)
            .map(|i| h * i as f64 / (SHORT_TIME_SAMPLES - 1) as f64)
            .collect();
        let ys = ts
            .iter()
            .map(|&t| Ok(kernel.modulus(t)?.value.ln()))
            .collect::<gpchain::Result<Vec<f64>>>()?;
        let [_, c1, c2] = quadratic_fit(&ts, &ys).unwrap_or([f64::NAN; 3]);
        let ratio = (c1 * h).abs() / (c2 * h * h).abs();
        passed &= ratio < SHORT_TIME_RATIO;
        parts.push(format!("alpha={alpha}: |c1 h| / |c2 h^2| = {ratio:.3e}"));
    }
    Ok(verdict(passed, format!("{} (< {SHORT_TIME_RATIO:e})", parts.join(", "))))
}

fn property_suite() -> gpchain::Result<Verdict> {
    let mut failures = Vec::new();
    let grid: Vec<ModelParams> = [
        (1.0, 0.0, 0.0, 0.03, 501),
        (1.0, 0.2, 1.45, 0.03, 501),
        (0.4, -0.3, 0.2, 0.1, 100),
        (0.7, 0.5, 2.0, 0.5, 37),
        (0.0, 0.0, -1.0, 0.05, 12),
    ]
    .into_iter()
    .map(|(gamma, alpha, lambda, g, n)| ModelParams {
        gamma,
        alpha,
        lambda,
        g,
        n,
        ..ModelParams::default()
    })
    .collect();

    for p in &grid {
        if decoherence_modulus(p, 0.0)? != 1.0 {
            failures.push(format!("|F(0)| != 1 at {p:?}"));
        }
        for i in 0..=200 {
            let t = p.period() * i as f64 / 200.0;
            let f = decoherence_modulus(p, t)?;
            if !(0.0..=1.0).contains(&f) {
                failures.push(format!("|F({t})| = {f} out of [0, 1]"));
            }
        }
        let free = ModelParams { g: 0.0, ..*p };
        for k in free.mode_grid()?.momenta() {
            for which in Field::BOTH {
                let a = mixing_angle(&free, which, k)?.value;
                if a != 0.0 {
                    failures.push(format!("mixing angle {a} at g=0, k={k}"));
                }
            }
        }
    }
    for i in 0..=32 {
        let beta = PI * i as f64 / 32.0;
        if eigen_spectrum(beta, 1.0).eps_minus != 0.0 {
            failures.push(format!("eps_minus(0) != 0 at beta={beta}"));
        }
        for j in 0..=20 {
            let s = eigen_spectrum(beta, j as f64 / 20.0);
            if (s.eps_plus + s.eps_minus - 1.0).abs() > SPECTRUM_ATOL {
                failures.push(format!("eps sum {} at beta={beta}", s.eps_plus + s.eps_minus));
            }
        }
    }

    let mut spec = FigurePreset::new(FigureId::Fig3).spec;
    spec.workers = Some(1);
    let serial = render_csv(&run_sweep(&spec)?);
    spec.workers = Some(4);
    let parallel = render_csv(&run_sweep(&spec)?);
    // the worker count is not part of the file
    if serial != parallel {
        failures.push("CSV differs between 1 and 4 workers".into());
    }

    Ok(verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "|F(0)|=1, |F| in [0,1], mixing angles 0 at g=0 on {} parameter sets; eps sum and eps_minus(0) on a beta/f grid; fig3 CSV identical with 1 and 4 workers ({} bytes)",
                grid.len(),
                serial.len()
            )
        } else {
            failures.join("; ")
        },
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("unitary limit", unitary_limit),
        ("oracle equivalence", oracle_equivalence),
        ("critical-point shift", critical_point_shift),
        ("zero-field critical points", zero_field_critical_points),
        ("g^2 scaling", coupling_scaling),
        ("sign flip at beta=pi/2", sign_flip),
        ("eta dependence", eta_scaling),
        ("cross-definition phase", cross_definition),
        ("short-time Gaussian form", short_time_gaussian),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let v = run().unwrap_or_else(|e| verdict(false, format!("error: {e}")));
        let secs = clock.elapsed().as_secs_f64();
        let mark = if v.passed { "PASS" } else { "FAIL" };
        println!("{mark} criterion {:>2} {name}: {} [{secs:.2} s]", i + 1, v.detail);
        if !v.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
