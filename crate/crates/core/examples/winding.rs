//! Winding numbers on cGBZ1 and the regime boundary on the imaginary axis.

use respond::curves::cgbz_curve;
use respond::winding::{regime_boundary_scan, winding_number, winding_oracle, Ray};
use respond::{ModelParams, C64, OMEGA_1, OMEGA_2};

fn main() -> respond::Result<()> {
    let p = ModelParams::baseline(60);
    let c = cgbz_curve(&p, 1, 512)?;
    for w in [OMEGA_1, OMEGA_2, C64::new(0.5, -0.1), C64::new(0.0, 2.8)] {
        let r = winding_number(&c, &p, w)?;
        println!(
            "omega = {w:.3}: W = {:2} (oracle {:2}), {} samples, max step {:.3}",
            r.value,
            winding_oracle(&c, &p, w)?,
            r.samples_used,
            r.max_step
        );
    }
    let b = regime_boundary_scan(&p, &Ray::imaginary_axis(1.0, 1000))?;
    println!(
        "omega_c = {:.5}i (W {} -> {})",
        b.omega_c.im, b.winding_before, b.winding_after
    );
    Ok(())
}
