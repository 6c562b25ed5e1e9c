//! CSV tables with fixed column orders. Floats are written with 17
//! significant digits, rows end in LF, and every file starts with a header.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::curves::{Curve, CurveLabel};
use crate::disorder::ErrorStats;
use crate::greens::crossover::Kink;
use crate::greens::GreenResult;
use crate::lattice::BoundaryKind;
use crate::spectra::SpectrumSet;
use crate::C64;

pub const SPECTRUM_COLUMNS: [&str; 9] = [
    "n_sites", "boundary", "e_re", "e_im", "beta1_re", "beta1_im", "beta2_re", "beta2_im", "residual",
];
pub const CURVE_COLUMNS: [&str; 5] = ["label", "theta", "beta_re", "beta_im", "n_sites"];
pub const WINDING_COLUMNS: [&str; 4] = ["omega_re", "omega_im", "contour", "winding"];
pub const GREENS_COLUMNS: [&str; 12] = [
    "n_sites",
    "k",
    "l",
    "omega_re",
    "omega_im",
    "g_re",
    "g_im",
    "abs_g",
    "log10_abs_g",
    "method",
    "boundary",
    "cond_estimate",
];
pub const ANALYTIC_EXTRA_COLUMNS: [&str; 4] = ["dominant_q", "regime", "n0", "n1"];
pub const DISORDER_COLUMNS: [&str; 11] = [
    "k",
    "l",
    "omega_re",
    "omega_im",
    "target",
    "half_width",
    "trials",
    "median_abs_err",
    "mean_abs_err",
    "p90_abs_err",
    "dropped_trials",
];
pub const DISORDER_SINGLE_COLUMNS: [&str; 8] = [
    "k",
    "l",
    "omega_re",
    "omega_im",
    "target",
    "half_width",
    "trial",
    "abs_err",
];
pub const KINK_COLUMNS: [&str; 10] = [
    "n_sites",
    "omega_re",
    "omega_im",
    "l",
    "scale",
    "formula",
    "kink",
    "slope_left",
    "slope_right",
    "status",
];

/// Fixed float format: 17 significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// In-memory CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "{}", self.name);
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = ::csv::WriterBuilder::new()
            .terminator(::csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    /// Writes `<dir>/<name>` and returns its manifest entry.
    pub fn write(&self, dir: &Path) -> std::io::Result<FileEntry> {
        let bytes = self.to_bytes();
        std::fs::write(dir.join(&self.name), &bytes)?;
        Ok(FileEntry {
            path: self.name.clone(),
            sha256: hex::encode(Sha256::digest(&bytes)),
            rows: self.rows.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    /// Data rows, header excluded.
    pub rows: usize,
}

pub fn spectrum_rows(t: &mut Table, s: &SpectrumSet) {
    let n = s.n_sites.map(|n| n.to_string()).unwrap_or_default();
    for p in &s.points {
        t.push(vec![
            n.clone(),
            s.boundary.to_string(),
            num(p.energy.re),
            num(p.energy.im),
            num(p.beta1.re),
            num(p.beta1.im),
            num(p.beta2.re),
            num(p.beta2.im),
            num(p.residual),
        ]);
    }
}

pub fn curve_rows(t: &mut Table, c: &Curve) {
    let n = c.n_sites.map(|n| n.to_string()).unwrap_or_default();
    for (b, th) in c.samples.iter().zip(&c.thetas) {
        t.push(vec![
            c.label.to_string(),
            num(*th),
            num(b.re),
            num(b.im),
            n.clone(),
        ]);
    }
}

/// Finite point sets (fGBZ) carry no angle; `theta` is left empty.
pub fn point_rows(t: &mut Table, label: CurveLabel, points: &[C64], n_sites: Option<usize>) {
    let n = n_sites.map(|n| n.to_string()).unwrap_or_default();
    for b in points {
        t.push(vec![
            label.to_string(),
            String::new(),
            num(b.re),
            num(b.im),
            n.clone(),
        ]);
    }
}

pub fn winding_row(t: &mut Table, omega: C64, contour: CurveLabel, winding: Option<i64>) {
    t.push(vec![
        num(omega.re),
        num(omega.im),
        contour.to_string(),
        winding.map(|w| w.to_string()).unwrap_or_default(),
    ]);
}

pub fn greens_fields(g: &GreenResult) -> Vec<String> {
    vec![
        g.n_sites.to_string(),
        g.query.k.to_string(),
        g.query.l.to_string(),
        num(g.query.omega.re),
        num(g.query.omega.im),
        num(g.value.re),
        num(g.value.im),
        num(g.abs()),
        num(g.log10_abs()),
        g.method.to_string(),
        g.boundary.to_string(),
        opt_num(g.cond_estimate),
    ]
}

pub fn greens_row(t: &mut Table, g: &GreenResult) {
    t.push(greens_fields(g));
}

/// A solve that was flagged near-singular: value columns stay empty.
#[allow(clippy::too_many_arguments)]
pub fn near_singular_row(
    t: &mut Table,
    n_sites: usize,
    k: usize,
    l: usize,
    omega: C64,
    bc: BoundaryKind,
    cond: f64,
) {
    t.push(vec![
        n_sites.to_string(),
        k.to_string(),
        l.to_string(),
        num(omega.re),
        num(omega.im),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        "near_singular".into(),
        bc.to_string(),
        num(cond),
    ]);
}

pub fn analytic_row(t: &mut Table, g: &GreenResult, n0: Option<f64>, n1: Option<f64>) {
    let mut row = greens_fields(g);
    row.push(g.dominant.map(|d| d.to_string()).unwrap_or_default());
    row.push(g.regime.map(|r| r.as_str().to_string()).unwrap_or_default());
    row.push(opt_num(n0));
    row.push(opt_num(n1));
    t.push(row);
}

pub fn disorder_row(t: &mut Table, s: &ErrorStats) {
    t.push(vec![
        s.query.k.to_string(),
        s.query.l.to_string(),
        num(s.query.omega.re),
        num(s.query.omega.im),
        s.target.as_str().into(),
        num(s.half_width),
        s.trials.to_string(),
        num(s.median_abs_err),
        num(s.mean_abs_err),
        num(s.p90_abs_err),
        s.dropped_trials.to_string(),
    ]);
}

/// One kink-table row. `kink` is `None` when detection reported no kink.
#[allow(clippy::too_many_arguments)]
pub fn kink_row(
    t: &mut Table,
    n_sites: usize,
    omega: C64,
    l: usize,
    scale: &str,
    formula: f64,
    kink: Option<&Kink>,
) {
    t.push(vec![
        n_sites.to_string(),
        num(omega.re),
        num(omega.im),
        l.to_string(),
        scale.into(),
        num(formula),
        opt_num(kink.map(|k| k.position)),
        opt_num(kink.map(|k| k.slope_left)),
        opt_num(kink.map(|k| k.slope_right)),
        if kink.is_some() { "ok" } else { "no_kink" }.into(),
    ]);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-1e5), "-1.0000000000000000e5");
        assert_eq!(opt_num(None), "");
    }

    #[test]
    fn bytes_are_lf_with_header() {
        let mut t = Table::new("x.csv", &["a", "b"]);
        t.push(vec!["1".into(), num(2.0)]);
        let s = String::from_utf8(t.to_bytes()).unwrap();
        assert_eq!(s, "a,b\n1,2.0000000000000000e0\n");
    }

    #[test]
    fn write_hashes_contents() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new("x.csv", &["a"]);
        t.push(vec!["1".into()]);
        let e = t.write(dir.path()).unwrap();
        assert_eq!(e.rows, 1);
        let bytes = std::fs::read(dir.path().join("x.csv")).unwrap();
        assert_eq!(e.sha256, hex::encode(Sha256::digest(&bytes)));
        assert_eq!(e.sha256.len(), 64);
    }
}
