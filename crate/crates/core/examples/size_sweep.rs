//! End-to-end Green's functions against chain length, pOBC and OBC.

use respond::greens::numeric::{size_sweep, SolveOptions};
use respond::greens::EndpointRule;
use respond::lattice::BoundaryKind;
use respond::roots::bloch_roots;
use respond::{ModelParams, OMEGA_1, OMEGA_2};

fn main() -> respond::Result<()> {
    let p = ModelParams::baseline(60);
    let sizes = [40, 60, 80, 100];
    // OBC at N = 100 has a condition number near 1e13
    let opts = SolveOptions::with_cond_limit(1e16);
    for (bc, q) in [(BoundaryKind::Pobc, p), (BoundaryKind::Obc, p.with_delta(0.0))] {
        for (name, w) in [("omega_1", OMEGA_1), ("omega_2", OMEGA_2)] {
            for rule in [EndpointRule::LastFirst, EndpointRule::FirstLast] {
                let rows = size_sweep(&q, bc, w, &sizes, rule, &opts)?;
                let logs: Vec<String> = rows.iter().map(|g| format!("{:8.4}", g.log10_abs())).collect();
                println!(
                    "{bc:4} {name} G_{{{}}}: log10|G| = {}",
                    rule.as_str(),
                    logs.join(" ")
                );
            }
        }
    }
    let slope = bloch_roots(&p, OMEGA_1)?.beta_a.norm().log10();
    println!("OBC slope expected from |beta_a(omega_1)|: {slope:.5} per site");
    Ok(())
}
