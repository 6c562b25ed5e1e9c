//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use respond::curves::{cgbz_curve, fgbz_points};
use respond::disorder::relative_error_ensemble;
use respond::greens::analytic::{closed_form, critical_scales, expansion_sum, localization_length};
use respond::greens::crossover::crossover_detect;
use respond::greens::numeric::{
    frequency_sweep, green_entry, linspace, relative_residual, resolvent_column, site_profile, size_sweep,
    SolveOptions,
};
use respond::greens::EndpointRule;
use respond::lattice::build_hamiltonian;
use respond::roots::bloch_roots;
use respond::spectra::{char_poly, pobc_spectrum};
use respond::winding::{regime_boundary_scan, winding_number, winding_oracle, Ray};
use respond::{BoundaryKind, DisorderSpec, DisorderTarget, ModelParams, Result, C64, OMEGA_1, OMEGA_2};

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn fmt_list(v: &[f64], digits: usize) -> String {
    let s: Vec<String> = v.iter().map(|x| format!("{x:.digits$}")).collect();
    format!("[{}]", s.join(", "))
}

fn amplification() -> Result<Outcome> {
    let mut scaled = Vec::new();
    let mut arg_err: f64 = 0.0;
    for n in [40, 60, 80, 100] {
        let p = ModelParams::baseline(n);
        let g = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_1, n, 1)?.value;
        scaled.push(g.norm() * p.delta.norm());
        arg_err = arg_err.max((g.arg().abs() - PI).abs());
    }
    let pass = scaled.iter().all(|s| (0.999..=1.001).contains(s)) && arg_err < 1e-3;
    outcome(
        pass,
        format!(
            "|G_N1| delta at N = 40..100: {}, max |arg - pi| {arg_err:.1e}",
            fmt_list(&scaled, 5)
        ),
    )
}

fn suppression() -> Result<Outcome> {
    let target = -1.14424e-5;
    let mut errs = Vec::new();
    for n in [60, 80, 100] {
        let p = ModelParams::baseline(n);
        let g = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_2, 1, n)?.value;
        errs.push((g - target).norm() / target.abs());
    }
    let pass = errs.iter().all(|e| *e < 0.01);
    outcome(
        pass,
        format!(
            "relative error of G_1N(0.4i) at N = 60, 80, 100: {}",
            fmt_list(&errs, 4)
        ),
    )
}

fn winding_regimes() -> Result<Outcome> {
    let p = ModelParams::baseline(60);
    let c = cgbz_curve(&p, 1, 512)?;
    let w1 = winding_number(&c, &p, OMEGA_1)?.value;
    let w2 = winding_number(&c, &p, OMEGA_2)?.value;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut agree, mut total) = (0, 0);
    while total < 200 {
        let w = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0));
        // points on the image of the contour have no winding number
        let Ok(a) = winding_number(&c, &p, w) else {
            continue;
        };
        total += 1;
        if winding_oracle(&c, &p, w)? == a.value {
            agree += 1;
        }
    }
    let pass = w1 == -1 && w2 == 0 && agree == total;
    outcome(
        pass,
        format!("W(0.1i) = {w1}, W(0.4i) = {w2}, oracle agreement {agree}/{total}"),
    )
}

fn omega_c() -> Result<Outcome> {
    let p = ModelParams::baseline(60);
    let wc = regime_boundary_scan(&p, &Ray::imaginary_axis(1.0, 1000))?.omega_c;
    let omegas = linspace(C64::new(0.0, 0.01), C64::new(0.0, 0.5), 246);
    let mut steepest = Vec::new();
    for rule in [EndpointRule::LastFirst, EndpointRule::FirstLast] {
        let s = frequency_sweep(&p, BoundaryKind::Pobc, &omegas, rule, &SolveOptions::default())?;
        steepest.push(s.steepest.map_or(f64::NAN, |w| w.im));
    }
    let pass = (wc.im - 0.233).abs() <= 0.01
        && wc.re.abs() < 1e-12
        && steepest.iter().all(|s| (s - wc.im).abs() <= 0.02);
    outcome(
        pass,
        format!(
            "omega_c = {:.5}i, steepest slope at {}i",
            wc.im,
            fmt_list(&steepest, 3)
        ),
    )
}

fn bifurcation() -> Result<Outcome> {
    let p = ModelParams::baseline(60);
    let n_c = p.critical_length()?;
    let r = p.r().norm();
    let short = pobc_spectrum(&p.with_sites(20))?;
    let f20 = fgbz_points(&short);
    let dev20 = f20.fgbz1.iter().map(|b| (b.norm() - r).abs()).fold(0.0, f64::max);
    let im20 = short.max_abs_imag();
    let long = pobc_spectrum(&p)?;
    let f60 = fgbz_points(&long);
    let max1 = f60.fgbz1.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let min2 = f60.fgbz2.iter().map(|b| b.norm()).fold(f64::INFINITY, f64::min);
    let im60 = long.max_abs_imag();
    let pass = (n_c - 33.22).abs() < 0.005 && dev20 < 1e-3 && im20 < 1e-6 && min2 - max1 > 0.1 && im60 > 0.05;
    outcome(
        pass,
        format!(
            "N_c = {n_c:.4}; N = 20: max ||beta1| - r| {dev20:.1e}, max |Im E| {im20:.1e}; \
             N = 60: modulus gap {:.4}, max |Im E| {im60:.4}",
            min2 - max1
        ),
    )
}

fn analytic_agreement() -> Result<Outcome> {
    let n = 60;
    let p = ModelParams::baseline(n);
    let mut worst_1: f64 = 0.0;
    for k in 1..=n {
        let exact = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_1, k, 1)?.value;
        worst_1 = worst_1.max(rel(closed_form(&p, OMEGA_1, k, 1)?.value, exact));
    }
    let kink_k = n as f64 - critical_scales(&p, OMEGA_2)?.n_0;
    let mut worst_2: f64 = 0.0;
    for k in (1..=n).filter(|&k| (k as f64 - kink_k).abs() > 2.0) {
        let exact = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_2, k, n)?.value;
        worst_2 = worst_2.max(rel(closed_form(&p, OMEGA_2, k, n)?.value, exact));
    }
    let pass = worst_1 < 0.05 && worst_2 < 0.05;
    outcome(
        pass,
        format!("max relative error G_k1(0.1i) {worst_1:.2e}, G_kN(0.4i) {worst_2:.2e} (kink at k = {kink_k:.1} excluded)"),
    )
}

fn kink_distance(
    p: &ModelParams,
    omega: C64,
    l: usize,
    k_from: usize,
    k_to: usize,
    toward_l: bool,
) -> Result<f64> {
    let prof = site_profile(p, BoundaryKind::Pobc, omega, l, &SolveOptions::default())?;
    let ks: Vec<usize> = if toward_l {
        (k_from..=k_to).rev().collect()
    } else {
        (k_from..=k_to).collect()
    };
    let x: Vec<f64> = ks.iter().map(|&k| (k as f64 - l as f64).abs()).collect();
    let y: Vec<f64> = ks.iter().map(|&k| prof[k - 1].log10_abs()).collect();
    Ok(crossover_detect(&x, &y)?.position)
}

fn crossovers() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut pass = true;
    for n in [60, 80, 100] {
        let p = ModelParams::baseline(n);
        let formula = critical_scales(&p, OMEGA_2)?.n_0;
        let kink = kink_distance(&p, OMEGA_2, n, 1, n, true)?;
        pass &= (kink - formula).abs() <= 3.0;
        parts.push(format!("N = {n}: N_0 {formula:.2} kink {kink:.2}"));
    }
    let p = ModelParams::baseline(100);
    let w = C64::new(0.0, 2.8);
    let formula = critical_scales(&p, w)?.n_1;
    let kink = kink_distance(&p, w, 10, 10, 100, false)?;
    pass &= (kink - 66.0).abs() <= 3.0 && (kink - formula).abs() <= 3.0;
    parts.push(format!("2.8i: N_1 {formula:.2} kink {kink:.2}"));
    outcome(pass, parts.join("; "))
}

fn obc_law() -> Result<Outcome> {
    let p = ModelParams::baseline(60).with_delta(0.0);
    let sizes: Vec<usize> = (40..=100).step_by(10).collect();
    // the largest OBC solves have condition numbers near 1e13
    let opts = SolveOptions::with_cond_limit(1e16);
    let rows = size_sweep(
        &p,
        BoundaryKind::Obc,
        OMEGA_1,
        &sizes,
        EndpointRule::LastFirst,
        &opts,
    )?;
    let x: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let y: Vec<f64> = rows.iter().map(|g| g.log10_abs()).collect();
    let (mx, my) = (
        x.iter().sum::<f64>() / x.len() as f64,
        y.iter().sum::<f64>() / y.len() as f64,
    );
    let slope = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
        / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    let expected = bloch_roots(&p, OMEGA_1)?.beta_a.norm().log10();
    let err = (slope / expected - 1.0).abs();
    outcome(
        err < 0.01,
        format!("slope {slope:.5}, log10|beta_a(0.1i)| = {expected:.5}, relative error {err:.1e}"),
    )
}

fn disorder_robustness() -> Result<Outcome> {
    let p = ModelParams::baseline(60);
    let mut parts = Vec::new();
    let mut pass = true;
    for target in [DisorderTarget::Hoppings, DisorderTarget::Onsite] {
        let spec = DisorderSpec::new(target, 0.05, 1);
        let lo = relative_error_ensemble(&p, BoundaryKind::Pobc, C64::new(0.0, 0.25), 60, 1, &spec, 100)?;
        let hi = relative_error_ensemble(&p, BoundaryKind::Pobc, OMEGA_2, 60, 1, &spec, 100)?;
        pass &= lo.median_abs_err < 0.05 && hi.median_abs_err >= 10.0 * lo.median_abs_err;
        parts.push(format!(
            "{}: median 0.25i {:.4}, 0.4i {:.4}",
            target.as_str(),
            lo.median_abs_err,
            hi.median_abs_err
        ));
    }
    outcome(pass, parts.join("; "))
}

fn oracles() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_det: f64 = 0.0;
    for i in 0..100 {
        let n = [5, 12, 20, 33, 40][i % 5];
        let p = ModelParams::real(
            rng.random_range(0.2..0.8),
            rng.random_range(0.9..1.5),
            rng.random_range(0.0..0.2),
            n,
        );
        let w = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0));
        let h = build_hamiltonian(&p, BoundaryKind::Pobc, None)?;
        let det = (DMatrix::from_diagonal_element(n, n, w) - h).determinant();
        worst_det = worst_det.max(rel(char_poly(&p, w), det));
    }

    let p = ModelParams::baseline(60);
    let queries = [
        (30, 1, OMEGA_1),
        (60, 1, OMEGA_1),
        (45, 10, OMEGA_1),
        (10, 50, OMEGA_1),
        (1, 60, OMEGA_1),
        (30, 1, OMEGA_2),
        (60, 1, OMEGA_2),
        (1, 60, OMEGA_2),
        (40, 60, OMEGA_2),
        (20, 20, OMEGA_2),
    ];
    let mut worst_sum: f64 = 0.0;
    for (k, l, w) in queries {
        let exact = green_entry(&p, BoundaryKind::Pobc, None, w, k, l)?.value;
        worst_sum = worst_sum.max(rel(expansion_sum(&p, w, k, l, -2..=2, 256)?, exact));
    }

    let ratio =
        localization_length(&ModelParams::baseline(200))? / localization_length(&ModelParams::baseline(100))?;

    let mut worst_res: f64 = 0.0;
    for n in [20, 60, 100] {
        let p = ModelParams::baseline(n);
        let h = build_hamiltonian(&p, BoundaryKind::Pobc, None)?;
        for w in [OMEGA_1, OMEGA_2, C64::new(0.5, 0.3)] {
            for l in [1, n / 2, n] {
                worst_res = worst_res.max(relative_residual(&h, w, &resolvent_column(&h, w, l)?));
            }
        }
    }
    let pass = worst_det < 1e-8 && worst_sum < 0.01 && (ratio - 2.0).abs() <= 0.1 && worst_res < 1e-10;
    outcome(
        pass,
        format!(
            "char_poly vs det {worst_det:.1e}; contour sum vs resolvent {worst_sum:.1e}; \
             L_c(200)/L_c(100) = {ratio:.4}; resolvent residual {worst_res:.1e}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("scale-free amplification", amplification),
        ("scale-free suppression", suppression),
        ("winding regimes", winding_regimes),
        ("omega_c localization", omega_c),
        ("fGBZ bifurcation", bifurcation),
        ("analytic vs numeric", analytic_agreement),
        ("crossover distances", crossovers),
        ("OBC exponential law", obc_law),
        ("disorder robustness", disorder_robustness),
        ("oracle suite", oracles),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} {:2} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
