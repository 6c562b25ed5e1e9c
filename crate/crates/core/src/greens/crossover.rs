//! Kink location in a `log|G|` profile by a two-segment least-squares fit.

use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum number of points on each side of a candidate breakpoint.
pub const MIN_SIDE: usize = 10;
/// A two-line fit must cut the single-line residual to below this fraction.
pub const MAX_SSE_RATIO: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kink {
    /// Intersection of the two fitted lines, or the midpoint of the split
    /// when the lines cross outside the sampled range.
    pub position: f64,
    /// Number of points in the left segment.
    pub split: usize,
    pub slope_left: f64,
    pub slope_right: f64,
    pub sse_one: f64,
    pub sse_two: f64,
}

#[derive(Debug, Clone, Copy)]
struct Line {
    slope: f64,
    intercept: f64,
    sse: f64,
}

fn fit(x: &[f64], y: &[f64]) -> Line {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    Line {
        slope,
        intercept,
        sse,
    }
}

/// Breakpoint of the best two-segment piecewise-linear fit of `y` against
/// increasing `x`.
///
/// Returns `NoKink` when one line already fits to round-off or when two
/// lines do not reduce the residual below [`MAX_SSE_RATIO`] of one line.
pub fn crossover_detect(x: &[f64], y: &[f64]) -> Result<Kink> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "x has {} points, y has {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 * MIN_SIDE {
        return Err(Error::InvalidArgument(format!(
            "need at least {} points, got {}",
            2 * MIN_SIDE,
            x.len()
        )));
    }
    if x.windows(2).any(|w| w[1] <= w[0]) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "x must increase and y must be finite".into(),
        ));
    }

    let one = fit(x, y);
    let spread = y.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    if one.sse <= 1e-20 * spread * spread * x.len() as f64 {
        return Err(Error::NoKink);
    }

    let mut best: Option<(f64, usize, Line, Line)> = None;
    for s in MIN_SIDE..=x.len() - MIN_SIDE {
        let (a, b) = (fit(&x[..s], &y[..s]), fit(&x[s..], &y[s..]));
        let sse = a.sse + b.sse;
        if best.as_ref().is_none_or(|(e, ..)| sse < *e) {
            best = Some((sse, s, a, b));
        }
    }
    let (sse_two, split, a, b) = best.expect("at least one split");
    if sse_two / one.sse > MAX_SSE_RATIO {
        return Err(Error::NoKink);
    }
    let cross = (b.intercept - a.intercept) / (a.slope - b.slope);
    let position = if cross.is_finite() && cross >= x[0] && cross <= x[x.len() - 1] {
        cross
    } else {
        0.5 * (x[split - 1] + x[split])
    };
    Ok(Kink {
        position,
        split,
        slope_left: a.slope,
        slope_right: b.slope,
        sse_one: one.sse,
        sse_two,
    })
}
