//! Relative error of `G_{k,1}` under uniform disorder.

use respond::disorder::{error_profile, mann_kendall, relative_error_ensemble};
use respond::lattice::BoundaryKind;
use respond::{DisorderSpec, DisorderTarget, ModelParams, C64};

fn main() -> respond::Result<()> {
    let p = ModelParams::baseline(60);
    for target in [DisorderTarget::Hoppings, DisorderTarget::Onsite] {
        let spec = DisorderSpec::new(target, 0.05, 1);
        for im in [0.1, 0.25, 0.4] {
            let w = C64::new(0.0, im);
            let s = relative_error_ensemble(&p, BoundaryKind::Pobc, w, 60, 1, &spec, 100)?;
            let prof = error_profile(&p, BoundaryKind::Pobc, w, 1, &spec, 100)?;
            let tail: Vec<f64> = prof[45..].iter().map(|s| s.median_abs_err).collect();
            println!(
                "{:8} omega = {im:.2}i: |dG_N1| median {:.4} mean {:.4} p90 {:.4}; tail trend {:?}",
                target.as_str(),
                s.median_abs_err,
                s.mean_abs_err,
                s.p90_abs_err,
                mann_kendall(&tail).trend
            );
        }
    }
    Ok(())
}
