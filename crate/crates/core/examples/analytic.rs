//! Closed forms, contour expansion terms and crossover distances.

use respond::greens::analytic::{closed_form, closed_form_terms, critical_scales, expansion_term};
use respond::greens::crossover::crossover_detect;
use respond::greens::numeric::{green_entry, site_profile, SolveOptions};
use respond::lattice::BoundaryKind;
use respond::{ModelParams, C64, OMEGA_1, OMEGA_2};

fn main() -> respond::Result<()> {
    for n in [60, 80, 100] {
        let p = ModelParams::baseline(n);
        let cf = closed_form(&p, OMEGA_1, n, 1)?;
        let num = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_1, n, 1)?;
        println!(
            "N = {n}: closed form G_N1 = {:.6e}, numeric {:.6e}",
            cf.value, num.value
        );
        let cf = closed_form(&p, OMEGA_2, 1, n)?;
        let num = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_2, 1, n)?;
        println!(
            "        closed form G_1N = {:.6e}, numeric {:.6e}",
            cf.value, num.value
        );
    }

    let p = ModelParams::baseline(60);
    println!("contour terms for G_{{30,1}}(omega_1), N = 60:");
    let mut total = C64::new(0.0, 0.0);
    for q in -2..=2 {
        let t = expansion_term(&p, OMEGA_1, 30, 1, q, 256)?;
        total += t.value;
        println!("  q = {q:2}: {:.6e} ({} samples)", t.value, t.samples_used);
    }
    let exact = green_entry(&p, BoundaryKind::Pobc, None, OMEGA_1, 30, 1)?.value;
    println!("  sum {total:.6e}, resolvent {exact:.6e}");

    let t = closed_form_terms(&p, OMEGA_2, 40, 60)?;
    for (term, v) in &t.terms {
        println!("G_{{40,60}}(omega_2) term {term}: {v:.6e}");
    }
    println!("dominant {}", t.dominant());

    for (n, w, l) in [(60, OMEGA_2, 60), (80, OMEGA_2, 80), (100, OMEGA_2, 100)] {
        let p = ModelParams::baseline(n);
        let prof = site_profile(&p, BoundaryKind::Pobc, w, l, &SolveOptions::default())?;
        let x: Vec<f64> = (0..n).map(|d| d as f64).collect();
        let y: Vec<f64> = (0..n).map(|d| prof[n - 1 - d].log10_abs()).collect();
        let kink = crossover_detect(&x, &y)?;
        let s = critical_scales(&p, w)?;
        println!("N = {n}: N_0 formula {:.2}, kink at {:.2}", s.n_0, kink.position);
    }
    let p = ModelParams::baseline(100);
    let w = C64::new(0.0, 2.8);
    let prof = site_profile(&p, BoundaryKind::Pobc, w, 10, &SolveOptions::default())?;
    let x: Vec<f64> = (0..=90).map(|d| d as f64).collect();
    let y: Vec<f64> = (10..=100).map(|k| prof[k - 1].log10_abs()).collect();
    let s = critical_scales(&p, w)?;
    println!(
        "omega = 2.8i, N = 100: N_1 formula {:.2}, kink at {:.2}; L_c = {:.3}",
        s.n_1,
        crossover_detect(&x, &y)?.position,
        s.l_c
    );
    Ok(())
}
