//! `|G_{N,1}|` and `|G_{1,N}|` along the imaginary axis at N = 60.

use respond::greens::numeric::{frequency_sweep, linspace, SolveOptions};
use respond::greens::EndpointRule;
use respond::lattice::BoundaryKind;
use respond::winding::{regime_boundary_scan, Ray};
use respond::{ModelParams, C64};

fn main() -> respond::Result<()> {
    let p = ModelParams::baseline(60);
    let omegas = linspace(C64::new(0.0, 0.01), C64::new(0.0, 0.5), 246);
    let opts = SolveOptions::default();
    let a = frequency_sweep(&p, BoundaryKind::Pobc, &omegas, EndpointRule::LastFirst, &opts)?;
    let b = frequency_sweep(&p, BoundaryKind::Pobc, &omegas, EndpointRule::FirstLast, &opts)?;
    println!("   omega   log10|G_N1|  log10|G_1N|");
    for (ra, rb) in a.rows.iter().zip(&b.rows).step_by(15) {
        let f = |r: &respond::greens::numeric::FrequencyRow| {
            r.result
                .map_or("  singular".to_string(), |g| format!("{:10.4}", g.log10_abs()))
        };
        println!("{:7.3}i  {}  {}", ra.omega.im, f(ra), f(rb));
    }
    let wc = regime_boundary_scan(&p, &Ray::imaginary_axis(1.0, 1000))?.omega_c;
    println!(
        "steepest slope: G_N1 at {:.3}i, G_1N at {:.3}i",
        a.steepest.unwrap().im,
        b.steepest.unwrap().im
    );
    println!("omega_c from the winding scan: {:.4}i", wc.im);
    Ok(())
}
