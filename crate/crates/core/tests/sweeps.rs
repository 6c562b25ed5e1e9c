use respond::disorder::{error_profile, mann_kendall, Trend};
use respond::greens::numeric::{frequency_sweep, green_entry, linspace, SolveOptions};
use respond::greens::EndpointRule;
use respond::winding::{regime_boundary_scan, Ray};
use respond::{BoundaryKind, DisorderSpec, DisorderTarget, ModelParams, C64};

fn log_g(p: &ModelParams, omega: f64, rule: EndpointRule) -> f64 {
    let (k, l) = rule.sites(p.n_sites);
    green_entry(p, BoundaryKind::Pobc, None, C64::new(0.0, omega), k, l)
        .unwrap()
        .log10_abs()
}

#[test]
fn amplified_plateau_below_transition() {
    let p = ModelParams::baseline(60);
    let omegas = linspace(C64::new(0.0, 0.01), C64::new(0.0, 0.5), 246);
    let s = frequency_sweep(
        &p,
        BoundaryKind::Pobc,
        &omegas,
        EndpointRule::LastFirst,
        &SolveOptions::default(),
    )
    .unwrap();
    for row in &s.rows {
        let g = row.result.unwrap().log10_abs();
        if row.omega.im < 0.15 {
            assert!((g - 5.0).abs() < 0.02, "{}: {g}", row.omega.im);
        }
        if row.omega.im > 0.35 {
            assert!(g < 3.5, "{}: {g}", row.omega.im);
        }
    }
}

#[test]
fn endpoint_rules_mirror_about_transition() {
    let p = ModelParams::baseline(60);
    let wc = regime_boundary_scan(&p, &Ray::imaginary_axis(1.0, 1000))
        .unwrap()
        .omega_c
        .im;
    let shift = 2.0 * p.delta.norm().log10();
    let mut checked = 0;
    for s in linspace(C64::new(0.03, 0.0), C64::new(0.2, 0.0), 18)
        .iter()
        .map(|z| z.re)
    {
        let a = log_g(&p, wc - s, EndpointRule::FirstLast);
        let b = log_g(&p, wc + s, EndpointRule::LastFirst) + shift;
        if a < -12.0 || b < -12.0 {
            continue;
        }
        checked += 1;
        assert!((a - b).abs() <= 0.1 * a.abs().max(b.abs()), "s = {s}: {a} vs {b}");
    }
    assert!(checked >= 10);
}

#[test]
fn nontrivial_error_decays_toward_far_end() {
    let p = ModelParams::baseline(60);
    for target in [DisorderTarget::Hoppings, DisorderTarget::Onsite] {
        let spec = DisorderSpec::new(target, 0.05, 1);
        let prof = error_profile(&p, BoundaryKind::Pobc, C64::new(0.0, 0.1), 1, &spec, 100).unwrap();
        let end = prof[59].median_abs_err;
        assert!(end < 0.01, "{}: {end}", target.as_str());
        let medians: Vec<f64> = prof.iter().map(|s| s.median_abs_err).collect();
        assert_eq!(
            mann_kendall(&medians).trend,
            Trend::Decreasing,
            "{}",
            target.as_str()
        );
    }
}
