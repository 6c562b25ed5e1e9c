//! PBC and OBC spectra, and the pOBC spectrum below and above `N_c`.

use respond::curves::fgbz_points;
use respond::spectra::{obc_spectrum, pbc_spectrum, pobc_spectrum};
use respond::ModelParams;

fn main() -> respond::Result<()> {
    let p = ModelParams::baseline(60);
    println!("N_c = {:.4}", p.critical_length()?);

    let pbc = pbc_spectrum(&p, 8)?;
    let obc = obc_spectrum(&p, 8)?;
    println!(
        "PBC at theta = 0, pi/2: {:.6}, {:.6}",
        pbc.points[0].energy, pbc.points[2].energy
    );
    println!(
        "OBC at theta = 0, pi/2: {:.6}, {:.6}",
        obc.points[0].energy, obc.points[2].energy
    );

    for n in [20, 60] {
        let s = pobc_spectrum(&p.with_sites(n))?;
        let f = fgbz_points(&s);
        let (m1, m2): (Vec<f64>, Vec<f64>) = (
            f.fgbz1.iter().map(|b| b.norm()).collect(),
            f.fgbz2.iter().map(|b| b.norm()).collect(),
        );
        let worst = s.points.iter().map(|pt| pt.residual).fold(0.0, f64::max);
        println!(
            "N = {n:3}: {} eigenvalues, max |Im E| = {:.3e}, |beta1| in [{:.4}, {:.4}], |beta2| in [{:.4}, {:.4}], max residual {:.1e}",
            s.points.len(),
            s.max_abs_imag(),
            m1.iter().cloned().fold(f64::INFINITY, f64::min),
            m1.iter().cloned().fold(0.0, f64::max),
            m2.iter().cloned().fold(f64::INFINITY, f64::min),
            m2.iter().cloned().fold(0.0, f64::max),
            worst,
        );
    }
    Ok(())
}
