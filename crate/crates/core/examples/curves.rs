//! The contour families in the beta plane and point classification.

use std::f64::consts::FRAC_PI_2;

use respond::curves::{cgbz1_point, cgbz_curve, point_inside, rgbz_radii, standard_curves};
use respond::roots::bloch_roots;
use respond::{ModelParams, OMEGA_1, OMEGA_2};

fn main() -> respond::Result<()> {
    let p = ModelParams::baseline(60);
    let (bz, gbz) = standard_curves(&p, 256)?;
    println!(
        "BZ radius {:.6}, GBZ radius {:.6}",
        bz.max_modulus(),
        gbz.max_modulus()
    );

    let (r1, r2) = rgbz_radii(&p)?;
    println!("rGBZ radii {r1:.7}, {r2:.7} (product {:.6})", r1 * r2);

    println!("cGBZ1 at theta = 0:    {:.7}", cgbz1_point(&p, 0.0)?);
    println!("cGBZ1 at theta = pi/2: {:.7}", cgbz1_point(&p, FRAC_PI_2)?);

    let c1 = cgbz_curve(&p, 1, 512)?;
    let c2 = cgbz_curve(&p, 2, 512)?;
    println!(
        "cGBZ1 modulus in [{:.4}, {:.4}], cGBZ2 in [{:.4}, {:.4}]",
        c1.min_modulus(),
        c1.max_modulus(),
        c2.min_modulus(),
        c2.max_modulus()
    );
    for (name, w) in [("omega_1", OMEGA_1), ("omega_2", OMEGA_2)] {
        let r = bloch_roots(&p, w)?;
        println!(
            "{name}: beta_a = {:.6} inside cGBZ1: {}, beta_b = {:.6} inside: {}",
            r.beta_a,
            point_inside(&c1, r.beta_a)?,
            r.beta_b,
            point_inside(&c1, r.beta_b)?
        );
    }
    Ok(())
}
