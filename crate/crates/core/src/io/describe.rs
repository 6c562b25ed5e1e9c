//! Help text for each task: options, defaults and output schemas.

use std::fmt::Write;

use super::config::Task;
use super::run::{analytic_columns, defaults, MANIFEST_NAME};
use super::tables;

const PARAMS: &str = "\
CONFIG
  {\"name\": str, \"task\": str,
   \"params\": {\"t1\": [re, im], \"t2\": [re, im], \"delta\": [re, im], \"n_sites\": int,
              \"boundary\": \"obc\" | \"pbc\" | \"pobc\"},
   \"options\": {...}, \"output_dir\": path (default \"out\")}
  Unknown fields are rejected. Site options accept an integer or \"N\".";

fn schema(out: &mut String, file: &str, cols: &[&str]) {
    let _ = writeln!(out, "  {file}: {}", cols.join(", "));
}

fn c(z: crate::C64) -> String {
    format!("[{}, {}]", z.re, z.im)
}

type Schema<'a> = (&'a str, Vec<&'a str>);

/// Help text for `task`.
pub fn describe(task: Task) -> String {
    let mut s = String::new();
    let greens = tables::GREENS_COLUMNS;
    let analytic = analytic_columns();
    let (summary, options, files): (&str, Vec<String>, Vec<Schema>) = match task {
        Task::Spectrum => (
            "PBC and OBC spectra sampled on the BZ and GBZ, and the pOBC eigenvalues with their root pairs.",
            vec![
                format!("sizes: [int] chain lengths for the pOBC spectrum (default [params.n_sites])"),
                format!("samples: int points on the BZ/GBZ (default {})", defaults::SPECTRUM_SAMPLES),
            ],
            vec![("spectrum.csv", tables::SPECTRUM_COLUMNS.to_vec())],
        ),
        Task::Curves => (
            "BZ, GBZ, rGBZ1/2, cGBZ1/2 and the fGBZ point sets of the pOBC spectrum. fGBZ rows have an empty theta.",
            vec![format!("samples: int points per curve (default {})", defaults::CURVE_SAMPLES)],
            vec![("curves.csv", tables::CURVE_COLUMNS.to_vec())],
        ),
        Task::WindingMap => (
            "Winding number of E(beta) - omega over a frequency grid, and the first winding change along a ray \
             (manifest summary: omega_c). Unresolved points have an empty winding.",
            vec![
                format!(
                    "grid: {{\"re\": [lo, hi], \"im\": [lo, hi], \"n_re\": int, \"n_im\": int}} (default re {:?}, im {:?}, {} x {})",
                    defaults::WINDING_GRID.0,
                    defaults::WINDING_GRID.1,
                    defaults::WINDING_GRID.2,
                    defaults::WINDING_GRID.3
                ),
                "contours: [\"BZ\" | \"GBZ\" | \"RGBZ1\" | \"RGBZ2\" | \"CGBZ1\" | \"CGBZ2\"] (default [\"CGBZ1\"])".into(),
                format!("samples: int contour points (default {})", crate::winding::SCAN_SAMPLES),
                format!(
                    "ray: {{\"origin\": [re, im], \"direction\": [re, im], \"t_max\": float, \"steps\": int}} (default 0 -> {}i, {} steps)",
                    defaults::SCAN_TOP,
                    defaults::SCAN_STEPS
                ),
            ],
            vec![("winding_map.csv", tables::WINDING_COLUMNS.to_vec())],
        ),
        Task::GreensSweep => (
            "Exact end-to-end Green's function against chain length.",
            vec![
                format!("sizes: [int] (default {:?})", defaults::SWEEP_SIZES),
                format!("omegas: [[re, im]] (default [{}])", c(crate::OMEGA_1)),
                "rules: [\"N,1\" | \"1,N\"] (default [\"N,1\"])".into(),
                "cond_limit: float, solves above it are flagged near_singular (default 1e12)".into(),
            ],
            vec![("greens_sweep.csv", greens.to_vec())],
        ),
        Task::FreqSweep => (
            "Exact end-to-end Green's function along a frequency ray; manifest summary records the steepest \
             log-slope point per rule and omega_c.",
            vec![
                format!(
                    "ray: {{\"origin\", \"direction\", \"t_max\", \"steps\"}} (default {} + t i, t in [0, {}], {} steps)",
                    c(defaults::FREQ_ORIGIN),
                    defaults::FREQ_T_MAX,
                    defaults::FREQ_STEPS
                ),
                "rules: [\"N,1\" | \"1,N\"] (default both)".into(),
                "cond_limit: float (default 1e12)".into(),
            ],
            vec![("freq_sweep.csv", greens.to_vec())],
        ),
        Task::AnalyticCompare => (
            "Numeric against closed-form G_{k,l} for k = 1..N, with each retained closed-form term, and \
             optionally contour-expansion terms for one (k, l).",
            vec![
                "sizes: [int] (default [params.n_sites])".into(),
                format!("omegas: [[re, im]] (default [{}, {}])", c(crate::OMEGA_1), c(crate::OMEGA_2)),
                "l: int | \"N\" excitation site (default 1)".into(),
                "q_range: [lo, hi] contour orders to evaluate (default none)".into(),
                "k: int | \"N\" response site for contour terms (default \"N\")".into(),
                format!("quadrature_samples: int starting samples (default {})", defaults::QUADRATURE_SAMPLES),
            ],
            vec![("analytic_compare.csv", analytic.clone())],
        ),
        Task::Disorder => (
            "Relative error |(G_disordered - G)/G| over a disorder ensemble for every response site k; \
             manifest summary holds a Mann-Kendall trend of the last quarter of the median profile.",
            vec![
                format!("omegas: [[re, im]] (default [{}])", c(defaults::DISORDER_OMEGA)),
                "targets: [\"hoppings\" | \"onsite\" | \"corner\"] (default [\"hoppings\"])".into(),
                format!("half_width: float w of U(-w, w) (default {})", defaults::HALF_WIDTH),
                format!("trials: int (default {})", defaults::TRIALS),
                format!("seed: int (default {})", defaults::SEED),
                "l: int | \"N\" excitation site (default 1)".into(),
                "single_trial: int, also write one realization (default none)".into(),
            ],
            vec![
                ("disorder.csv", tables::DISORDER_COLUMNS.to_vec()),
                ("disorder_single.csv (with single_trial)", tables::DISORDER_SINGLE_COLUMNS.to_vec()),
            ],
        ),
        Task::Fig1 => (
            "Spectra (PBC, OBC, pOBC at N = 20, 60), BZ/GBZ/fGBZ at N = 60, end-to-end size sweeps at \
             omega_1 and omega_2 for pOBC and OBC, and frequency sweeps at N = 60.",
            vec![
                format!("sizes: [int] for the size sweep (default {:?})", defaults::FIG1_SIZES),
                "ray: frequency ray (default as freq-sweep)".into(),
                "cond_limit: float (default 1e12)".into(),
            ],
            vec![
                ("fig1_spectra.csv", tables::SPECTRUM_COLUMNS.to_vec()),
                ("fig1_curves.csv", tables::CURVE_COLUMNS.to_vec()),
                ("fig1_size_sweep.csv", greens.to_vec()),
                ("fig1_freq_sweep.csv", greens.to_vec()),
            ],
        ),
        Task::Fig2 => (
            "cGBZ1 with fGBZ1 at N = 60, numeric against closed-form profiles G_{k,1}(omega_1) and \
             G_{k,N}(omega_2), and the N_0 kink table.",
            vec![format!("sizes: [int] (default {:?})", defaults::FIG2_SIZES)],
            vec![
                ("fig2_cgbz1.csv", tables::CURVE_COLUMNS.to_vec()),
                ("fig2_profiles.csv", analytic.clone()),
                ("fig2_kinks.csv", tables::KINK_COLUMNS.to_vec()),
            ],
        ),
        Task::Fig3 => (
            "Disorder error profiles G_{k,1} for hopping and on-site disorder at two frequencies, plus one \
             realization each.",
            vec![
                format!("omegas: [[re, im]] (default [{}, {}])", c(defaults::DISORDER_OMEGA), c(crate::OMEGA_2)),
                "targets, half_width, trials, seed, l: as for disorder".into(),
                "single_trial: int (default 0)".into(),
            ],
            vec![
                ("fig3_disorder.csv", tables::DISORDER_COLUMNS.to_vec()),
                ("fig3_disorder_single.csv", tables::DISORDER_SINGLE_COLUMNS.to_vec()),
            ],
        ),
        Task::FigS1 => (
            "Profiles G_{k,10} and G_{k,90} with their closed-form terms, and the N_1 / N_0 kink table.",
            vec![
                format!("sizes: [int], first entry is N (default {})", defaults::FIGS1_SIZE),
                format!("omegas: [[re, im]], first entry is omega (default {})", c(defaults::FIGS1_OMEGA)),
            ],
            vec![
                ("figS1_profiles.csv", analytic.clone()),
                ("figS1_kinks.csv", tables::KINK_COLUMNS.to_vec()),
            ],
        ),
    };
    let _ = writeln!(s, "{task}: {summary}\n");
    let _ = writeln!(s, "{PARAMS}\n");
    let _ = writeln!(s, "OPTIONS");
    for o in options {
        let _ = writeln!(s, "  {o}");
    }
    let _ = writeln!(s, "\nOUTPUT SCHEMA");
    for (f, cols) in files {
        schema(&mut s, f, &cols);
    }
    let _ = writeln!(
        s,
        "  {MANIFEST_NAME}: name, task, version, inputs, wall_time, threads, status, error, \
         files[path, sha256, rows], summary"
    );
    let _ = writeln!(
        s,
        "\nFloats use 17 significant digits; files end lines with LF. Exit codes: 0 ok, 2 bad config \
         (nothing written), 3 numerical failure (partial manifest)."
    );
    s
}
