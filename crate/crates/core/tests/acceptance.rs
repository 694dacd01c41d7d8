//! Acceptance suite: each test exercises one numbered criterion at its
//! stated tolerance and prints one PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`).

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use phaselag::analysis::{
    analyticity_indicator, gevrey_fit, growth_bound, growth_time_grid, log_time_grid,
    resolvent_sweep, smoothing_rate, spectral_abscissa, verify_imaginary_axis, SweepGrid,
};
use phaselag::cli::{self, Command};
use phaselag::linalg::{
    eigenvalues, lu_solve, weighted_resolvent_norm, ComplexMatrix, GramMatrix, IterationConfig,
};
use phaselag::modal::{
    assemble_block, assemble_full, DirichletMode, GeneratorForm, ModalSystem, ModeIndex,
};
use phaselag::model::{DomainSpec, PhaseLagModel};
use phaselag::operator::PhaseSpaceOperator;
use phaselag::radial::{assemble_transmission, radial_laplacian, Closure, RadialGrid, Span};
use phaselag::timeevo::{
    energy_identity_residual, evolve_modal, evolve_radial, modal_initial, quasi_contraction_check,
    radial_initial, InitialPreset,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> IterationConfig {
    IterationConfig::default()
}

fn case1_model() -> PhaseLagModel {
    PhaseLagModel::new(1, vec![1.0, 0.5], vec![1.0, 0.25], 1.0, None, 1.0)
}

fn case2_model() -> PhaseLagModel {
    PhaseLagModel::new(1, vec![1.0, 0.5], vec![1.0, 0.25], 1.0, Some(2.0), 0.5)
}

fn unit_square() -> DomainSpec {
    DomainSpec::Rectangle { l1: 1.0, l2: 1.0 }
}

fn case1_system(k: usize) -> ModalSystem {
    ModalSystem::build(&case1_model(), &unit_square(), k, GeneratorForm::Equivalent).unwrap()
}

fn case2_operator(h: f64) -> phaselag::radial::TransmissionOperator {
    let grid = RadialGrid::new(0.5, 1.0, h).unwrap();
    assemble_transmission(&case2_model(), &grid, GeneratorForm::Equivalent).unwrap()
}

fn shift_for<T: PhaseSpaceOperator>(op: &T) -> f64 {
    op.numerical_abscissa().unwrap().max(0.0)
}

/// Criterion 1 — analyticity surrogate (Case 1): sup of gamma*norm finite,
/// < 1% drift under K = 200 -> 400, top-decade slope in [-0.1, 0.1],
/// runtime <= 60 s.
#[test]
fn criterion_1_analyticity_surrogate() {
    let started = Instant::now();
    let grid = SweepGrid::new(0.0, 6.0, 20);
    let sup_of = |k: usize| -> (f64, f64) {
        let sys = case1_system(k);
        let c0 = shift_for(&sys);
        let sweep = resolvent_sweep(&sys, &grid, Some(c0), &cfg()).unwrap();
        let ind = analyticity_indicator(&sweep).unwrap();
        (ind.sup_gamma_norm, ind.tail_slope)
    };
    let (sup200, slope200) = sup_of(200);
    let (sup400, _) = sup_of(400);
    let drift = (sup400 - sup200).abs() / sup200;
    let elapsed = started.elapsed().as_secs_f64();
    let pass =
        sup200.is_finite() && drift < 0.01 && (-0.1..=0.1).contains(&slope200) && elapsed <= 60.0;
    println!(
        "criterion 1 (analyticity surrogate): {} — sup(K=200) = {sup200:.6}, \
         sup(K=400) = {sup400:.6}, drift = {:.4}%, tail slope = {slope200:.4}, {elapsed:.1} s",
        if pass { "PASS" } else { "FAIL" },
        100.0 * drift
    );
    assert!(sup200.is_finite(), "sup gamma*norm not finite");
    assert!(drift < 0.01, "sup drift {drift} >= 1%");
    assert!(
        (-0.1..=0.1).contains(&slope200),
        "top-decade slope {slope200} outside [-0.1, 0.1]"
    );
    assert!(elapsed <= 60.0, "runtime {elapsed:.1}s exceeds 60s");
}

/// Criterion 2 — Gevrey surrogate (Case 2): fitted varsigma >= 0.20 over the
/// top 3 decades with R^2 >= 0.95, varsigma drift < 0.05 under h -> 1/128,
/// runtime <= 120 s.
#[test]
fn criterion_2_gevrey_surrogate() {
    let started = Instant::now();
    // preset sweep window [10^0.5, 10^3.5]; the top 3 decades are the grid
    let grid = SweepGrid::new(0.5, 3.5, 20);
    let window = (0.5, 3.5);
    let fit_of = |h: f64| {
        let op = case2_operator(h);
        let c0 = shift_for(&op.op);
        let sweep = resolvent_sweep(&op.op, &grid, Some(c0), &cfg()).unwrap();
        gevrey_fit(&sweep, window).unwrap()
    };
    let f64_ = fit_of(1.0 / 64.0);
    let f128 = fit_of(1.0 / 128.0);
    let drift = (f128.varsigma - f64_.varsigma).abs();
    let elapsed = started.elapsed().as_secs_f64();
    let pass = f64_.varsigma >= 0.20 && f64_.r_squared >= 0.95 && drift < 0.05 && elapsed <= 120.0;
    println!(
        "criterion 2 (Gevrey surrogate): {} — varsigma(1/64) = {:.4}, varsigma(1/128) = {:.4}, \
         drift = {:.4}, R^2 = {:.4}, {elapsed:.1} s",
        if pass { "PASS" } else { "FAIL" },
        f64_.varsigma,
        f128.varsigma,
        drift,
        f64_.r_squared
    );
    assert!(
        f64_.varsigma >= 0.20,
        "fitted varsigma {} below the one-sided bound 0.20",
        f64_.varsigma
    );
    assert!(
        drift < 0.05,
        "varsigma drift {drift} under refinement >= 0.05"
    );
    assert!(elapsed <= 120.0, "runtime {elapsed:.1}s exceeds 120s");
    // Known-red clause: the sampled resolvent of the transmission plate is a
    // resonance comb (weakly damped elastic-disc modes), so no 3-decade
    // window attains R^2 >= 0.95 on this preset; see the project notes.
    assert!(
        f64_.r_squared >= 0.95,
        "R^2 = {} below 0.95 (resonance-comb scatter; varsigma and drift clauses hold)",
        f64_.r_squared
    );
}

/// Criterion 3 — imaginary-axis inclusion on both presets: every sampled
/// smallest singular value exceeds 1e-12 * ||A||.
#[test]
fn criterion_3_imaginary_axis_inclusion() {
    // Case 1
    let sys = case1_system(200);
    let c0 = shift_for(&sys);
    let grid = SweepGrid::new(0.0, 6.0, 20);
    let sweep = resolvent_sweep(&sys, &grid, Some(c0), &cfg()).unwrap();
    let norm1 = sys.operator_norm(&cfg()).unwrap();
    let rep1 = verify_imaginary_axis(&sweep, norm1);
    // Case 2
    let op = case2_operator(1.0 / 64.0);
    let c0 = shift_for(&op.op);
    let grid2 = SweepGrid::new(0.5, 3.5, 20);
    let sweep2 = resolvent_sweep(&op.op, &grid2, Some(c0), &cfg()).unwrap();
    let norm2 = op.op.operator_norm(&cfg()).unwrap();
    let rep2 = verify_imaginary_axis(&sweep2, norm2);
    let pass = rep1.pass && rep2.pass;
    println!(
        "criterion 3 (imaginary-axis inclusion): {} — case 1 min distance {:.3e} \
         (threshold {:.3e}), case 2 min distance {:.3e} (threshold {:.3e})",
        if pass { "PASS" } else { "FAIL" },
        rep1.min_distance,
        rep1.threshold,
        rep2.min_distance,
        rep2.threshold
    );
    assert!(rep1.pass, "case 1 axis check failed: {rep1:?}");
    assert!(rep2.pass, "case 2 axis check failed: {rep2:?}");
}

/// Criterion 4 — energy identity: coupled Case 1 coefficients, dt = 1e-3,
/// T = 1, max relative residual <= 1e-5, falling by a factor in [3.5, 4.5]
/// at dt/2. Runs on the interval evolution preset (see configs).
#[test]
fn criterion_4_energy_identity() {
    let model = case1_model();
    let domain = DomainSpec::Interval { l: 4.0 };
    let sys = ModalSystem::build(&model, &domain, 8, GeneratorForm::Equivalent).unwrap();
    let u0 = modal_initial(&sys, InitialPreset::Plate, 0).unwrap();
    let c0 = shift_for(&sys);
    let residual = |dt: f64| {
        let trace = evolve_modal(&sys, &u0, dt, 1.0).unwrap();
        energy_identity_residual(&trace, &sys, c0)
    };
    let r1 = residual(1e-3);
    let r2 = residual(5e-4);
    let factor = r1.max_residual / r2.max_residual;
    let pass = r1.max_residual <= 1e-5 && (3.5..=4.5).contains(&factor) && r1.inequality_holds;
    println!(
        "criterion 4 (energy identity): {} — residual(dt=1e-3) = {:.3e}, \
         residual(dt/2) = {:.3e}, factor = {factor:.3}, inequality holds: {}",
        if pass { "PASS" } else { "FAIL" },
        r1.max_residual,
        r2.max_residual,
        r1.inequality_holds
    );
    assert!(
        r1.max_residual <= 1e-5,
        "residual {} exceeds 1e-5",
        r1.max_residual
    );
    assert!(
        (3.5..=4.5).contains(&factor),
        "halving factor {factor} outside [3.5, 4.5]"
    );
}

/// Criterion 5 — quasi-contraction along all preset traces of both cases
/// with c0 = max(0, numerical abscissa).
#[test]
fn criterion_5_quasi_contraction() {
    let mut worst: f64 = 0.0;
    // Case 1 (interval evolution preset)
    let model = case1_model();
    let domain = DomainSpec::Interval { l: 4.0 };
    let sys = ModalSystem::build(&model, &domain, 8, GeneratorForm::Equivalent).unwrap();
    let c0 = shift_for(&sys);
    for preset in [
        InitialPreset::Plate,
        InitialPreset::Thermal,
        InitialPreset::Random,
    ] {
        let u0 = modal_initial(&sys, preset, 1).unwrap();
        let trace = evolve_modal(&sys, &u0, 1e-3, 1.0).unwrap();
        let rep = quasi_contraction_check(&trace, c0);
        worst = worst.max(rep.max_ratio);
        assert!(
            rep.pass,
            "case 1 {preset:?} trace violates quasi-contraction: {rep:?}"
        );
    }
    // Case 2
    let op = case2_operator(1.0 / 64.0);
    let c0 = shift_for(&op.op);
    for preset in [
        InitialPreset::Plate,
        InitialPreset::Thermal,
        InitialPreset::Random,
    ] {
        let u0 = radial_initial(&op, preset, 1);
        let trace = evolve_radial(&op, &u0, 1e-3, 1.0).unwrap();
        let rep = quasi_contraction_check(&trace, c0);
        worst = worst.max(rep.max_ratio);
        assert!(
            rep.pass,
            "case 2 {preset:?} trace violates quasi-contraction: {rep:?}"
        );
    }
    println!(
        "criterion 5 (quasi-contraction): PASS — max ratio over six preset traces = {:.12}",
        worst
    );
}

/// Criterion 6 — spectrum-determined growth: Case 1 preset,
/// |omega_0 - omega_spec| <= 0.05 |omega_spec|, omega_spec != 0.
#[test]
fn criterion_6_sdg() {
    let sys = case1_system(200);
    let c0 = shift_for(&sys);
    let shifted = sys.shifted(c0);
    let (omega_spec, _) = spectral_abscissa(&shifted).unwrap();
    let times = growth_time_grid(4.0, 25);
    let fit = growth_bound(&shifted, &times, &cfg()).unwrap();
    let err = (fit.omega0 - omega_spec).abs();
    let pass = omega_spec != 0.0 && err <= 0.05 * omega_spec.abs();
    println!(
        "criterion 6 (SDG): {} — omega_spec = {omega_spec:.6}, omega_0 = {:.6}, \
         relative gap = {:.4e}",
        if pass { "PASS" } else { "FAIL" },
        fit.omega0,
        err / omega_spec.abs()
    );
    assert!(
        omega_spec != 0.0,
        "omega_spec vanished on the shifted operator"
    );
    assert!(
        err <= 0.05 * omega_spec.abs(),
        "|omega_0 - omega_spec| = {err} exceeds 5% of {omega_spec}"
    );
    // K = 200 abscissa must match K = 100 (attained at low modes)
    let sys100 = case1_system(100);
    let (w100, _) = spectral_abscissa(&sys100.shifted(shift_for(&sys100))).unwrap();
    assert!(
        (w100 - omega_spec).abs() <= 1e-6 * omega_spec.abs(),
        "abscissa drifted between K=100 and K=200: {w100} vs {omega_spec}"
    );
}

/// Dense SVD oracle for the weighted resolvent norm, built from public
/// pieces only: sigma_min of L^H (lambda I - A) L^{-H} via eigenvalues of
/// M^H M. Independent of the LU + inverse-iteration implementation path.
fn resolvent_norm_svd_oracle(a: &ComplexMatrix, g: &GramMatrix, lambda: Complex64) -> f64 {
    let n = a.rows();
    let l = g.cholesky().unwrap();
    let linv_h = lu_solve(&l.adjoint(), &ComplexMatrix::identity(n)).unwrap();
    let s = a.scale(c(-1.0, 0.0)).shift_diag(-lambda); // lambda I - A
    let m = l.adjoint().mul(&s).mul(&linv_h);
    let mhm = m.adjoint().mul(&m);
    let sigma_min_sq = eigenvalues(&mhm)
        .unwrap()
        .into_iter()
        .map(|e| e.re.max(0.0))
        .fold(f64::INFINITY, f64::min);
    1.0 / sigma_min_sq.sqrt()
}

/// Criterion 7 — oracle equivalence: 30 random (A, G, lambda) instances of
/// dimension <= 25 agree with the dense SVD oracle to 1e-8 relative, and the
/// block-set resolvent equals the assembled-operator resolvent for K <= 10
/// to 1e-10.
#[test]
fn criterion_7_oracle_equivalence() {
    let mut max_rel: f64 = 0.0;
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed as usize % 24);
        let mut a = ComplexMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        for i in 0..n {
            a[(i, i)] -= c(1.5, 0.0);
        }
        let m = ComplexMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let spd = m.mul(&m.adjoint()).add(&ComplexMatrix::identity(n));
        let sym = ComplexMatrix::from_fn(n, n, |i, j| (spd[(i, j)] + spd[(j, i)].conj()) * 0.5);
        let g = GramMatrix::new(sym).unwrap();
        let lambda = c(rng.gen_range(-0.5..0.5), rng.gen_range(-3.0..3.0));
        let got = weighted_resolvent_norm(&a, &g, lambda, &cfg()).unwrap();
        let want = resolvent_norm_svd_oracle(&a, &g, lambda);
        let rel = (got - want).abs() / want;
        max_rel = max_rel.max(rel);
        assert!(
            rel <= 1e-8,
            "instance {seed} (dim {n}): implementation {got} vs oracle {want} (rel {rel:.3e})"
        );
    }
    // block set vs assembled operator
    let model = case1_model();
    let domain = unit_square();
    let k = 10;
    let sys = ModalSystem::build(&model, &domain, k, GeneratorForm::Equivalent).unwrap();
    let full = assemble_full(&model, &domain, k, GeneratorForm::Equivalent).unwrap();
    let mut max_block_rel: f64 = 0.0;
    for lambda in [c(0.0, 3.0), c(0.0, 40.0), c(0.0, 500.0)] {
        let from_blocks = sys.resolvent_norm(lambda, &cfg()).unwrap();
        let from_full = full.resolvent_norm(lambda, &cfg()).unwrap();
        let rel = (from_blocks - from_full).abs() / from_full;
        max_block_rel = max_block_rel.max(rel);
        assert!(
            rel <= 1e-10,
            "block-set vs assembled at {lambda}: {from_blocks} vs {from_full}"
        );
    }
    println!(
        "criterion 7 (oracle equivalence): PASS — max oracle deviation {:.3e}, \
         max block-vs-assembled deviation {:.3e}",
        max_rel, max_block_rel
    );
}

/// Durand-Kerner roots of a polynomial given in ascending-degree
/// coefficients (test-only oracle).
fn poly_roots(ascending: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = ascending.to_vec();
    while coeffs.last().map(|z| z.norm() == 0.0).unwrap_or(false) {
        coeffs.pop();
    }
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|z| z / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = c(0.0, 0.0);
        for k in (0..=deg).rev() {
            acc = acc * z + monic[k];
        }
        acc
    };
    let mut roots: Vec<Complex64> = (0..deg).map(|k| c(0.4, 0.9).powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = c(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots
}

fn assert_spectrum_close(got: &[Complex64], expected: &[Complex64], tol: f64) {
    assert_eq!(got.len(), expected.len());
    let mut remaining: Vec<Complex64> = got.to_vec();
    for e in expected {
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, g)| (i, (g - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!(dist < tol, "eigenvalue {e} unmatched (distance {dist:.3e})");
        remaining.swap_remove(idx);
    }
}

/// Criterion 8 — closed forms: decoupled block spectra match the polynomial
/// oracle to 1e-10 for n <= 3; the radial Laplacian is exact on r^2 and
/// second order on smooth radial tests.
#[test]
fn criterion_8_closed_forms() {
    // beta = 0 spectra: {+-i sqrt(kappa) d} union roots of s a(s) + d b(s)
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for n in 0..=3usize {
        let a: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.3..1.5)).collect();
        let b: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.3..1.5)).collect();
        let kappa = rng.gen_range(0.5..2.0);
        let d = rng.gen_range(1.0..6.0);
        let model = PhaseLagModel::new(n, a.clone(), b.clone(), kappa, None, 0.0);
        let mode = DirichletMode {
            index: ModeIndex::Single(1),
            eigenvalue: d,
        };
        let block = assemble_block(&model, &mode, GeneratorForm::Equivalent);
        let ev = eigenvalues(&block.m).unwrap();
        let mut poly = vec![c(0.0, 0.0); n + 2];
        for j in 0..=n {
            poly[j + 1] += c(a[j], 0.0);
            poly[j] += c(d * b[j], 0.0);
        }
        let mut expected = vec![c(0.0, kappa.sqrt() * d), c(0.0, -kappa.sqrt() * d)];
        expected.extend(poly_roots(&poly));
        assert_spectrum_close(&ev, &expected, 1e-10 * block.m.max_abs().max(1.0));
    }

    // radial Laplacian exact on r^2
    let grid = RadialGrid::new(0.5, 1.0, 1.0 / 64.0).unwrap();
    let l = radial_laplacian(&grid, Span::Full, (Closure::Natural, Closure::Natural));
    let f: Vec<Complex64> = (0..grid.cells())
        .map(|i| c(grid.node(i).powi(2), 0.0))
        .collect();
    let lf = l.mul_vec(&f);
    let mut worst: f64 = 0.0;
    for i in 0..grid.cells() - 1 {
        worst = worst.max((lf[i] - c(4.0, 0.0)).norm());
    }
    assert!(worst < 1e-10, "Lap_h r^2 deviates from 4 by {worst:.3e}");

    // second-order convergence on cos(alpha r)
    let alpha = 2.3;
    let mut errs = Vec::new();
    let mut g = RadialGrid::new(0.5, 1.0, 1.0 / 32.0).unwrap();
    for _ in 0..3 {
        let l = radial_laplacian(&g, Span::Full, (Closure::Natural, Closure::Natural));
        let f: Vec<Complex64> = (0..g.cells())
            .map(|i| c((alpha * g.node(i)).cos(), 0.0))
            .collect();
        let lf = l.mul_vec(&f);
        let mut err = 0.0f64;
        for i in 1..g.cells() - 1 {
            let r = g.node(i);
            let exact = -alpha * alpha * (alpha * r).cos() - alpha * (alpha * r).sin() / r;
            err = err.max((lf[i].re - exact).abs());
        }
        errs.push(err);
        g = g.refine();
    }
    let mut orders = Vec::new();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(
            (1.9..=2.1).contains(&order),
            "convergence order {order} outside [1.9, 2.1]"
        );
        orders.push(order);
    }
    println!(
        "criterion 8 (closed forms): PASS — spectra match polynomial oracle (n <= 3), \
         Lap_h r^2 = 4 to {worst:.1e}, observed orders {orders:.2?}"
    );
}

/// Criterion 9 — smoothing slope: Case 1 fitted small-time slope of
/// log||B e^{tB}|| vs log t is >= -1.1; the Case 2 slope is reported only.
#[test]
fn criterion_9_smoothing_slope() {
    let sys = case1_system(200);
    let shifted = sys.shifted(shift_for(&sys));
    let times = log_time_grid(1e-3, 1e-1, 25);
    let fit1 = smoothing_rate(&shifted, &times, &cfg()).unwrap();

    let op = case2_operator(1.0 / 64.0);
    let shifted2 = op.op.shifted(shift_for(&op.op));
    let fit2 = smoothing_rate(&shifted2, &times, &cfg()).unwrap();

    let pass = fit1.slope >= -1.1;
    println!(
        "criterion 9 (smoothing slope): {} — case 1 slope = {:.4} (bound -1.1), \
         case 2 slope = {:.4} (reported, not asserted)",
        if pass { "PASS" } else { "FAIL" },
        fit1.slope,
        fit2.slope
    );
    assert!(
        fit1.slope >= -1.1,
        "case 1 smoothing slope {} below the analytic-class bound -1.1",
        fit1.slope
    );
}

/// Criterion 10 — reproducibility: identical config + seed produce
/// byte-identical CSV, SVG and JSON artifacts across two runs.
#[test]
fn criterion_10_reproducibility() {
    let config_text = r#"
[model]
n = 1
a = [1.0, 0.5]
b = [1.0, 0.25]
kappa1 = 1.0
beta = 1.0

[domain]
kind = "rectangle"
l1 = 1.0
l2 = 1.0

[sweep]
decades = [0.0, 3.0]
points_per_decade = 10
modes = 16

[evolve]
preset = "random"
dt = 1e-2
t_final = 0.5
"#;
    let run_into = |command: Command, dir: &std::path::Path| {
        let cfg_path = dir.join("run.toml");
        std::fs::write(&cfg_path, config_text).unwrap();
        cli::execute(command, Some(&cfg_path), Some(dir), Some(11), None, false).unwrap();
    };
    let mut compared = Vec::new();
    for command in [Command::ResolventSweep, Command::Evolve, Command::Abscissa] {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        run_into(command, d1.path());
        run_into(command, d2.path());
        for entry in std::fs::read_dir(d1.path()).unwrap() {
            let name = entry.unwrap().file_name();
            let name = name.to_string_lossy().to_string();
            if name.ends_with(".csv") || name.ends_with(".svg") || name.ends_with(".json") {
                let a = std::fs::read(d1.path().join(&name)).unwrap();
                let b = std::fs::read(d2.path().join(&name)).unwrap();
                assert_eq!(a, b, "artifact {name} differs between identical runs");
                compared.push(name);
            }
        }
    }
    println!(
        "criterion 10 (reproducibility): PASS — byte-identical artifacts: {}",
        compared.join(", ")
    );
}
