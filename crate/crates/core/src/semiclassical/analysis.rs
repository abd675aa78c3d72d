//! Shape measures for sampled curves.

/// Samples within this fraction of the largest magnitude count as zeros.
const ZERO_FRACTION: f64 = 1e-9;

/// Abscissae of the zeros of a sampled curve: samples that are zero to
/// within `1e-9` of the peak magnitude, plus linearly interpolated sign
/// changes between nonzero samples.
pub fn zero_crossings(x: &[f64], y: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), y.len(), "abscissa and ordinate lengths differ");
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = ZERO_FRACTION * scale;
    let mut zeros = Vec::new();
    let mut last_nonzero: Option<usize> = None;
    for k in 0..y.len() {
        if y[k].abs() <= tol {
            zeros.push(x[k]);
            last_nonzero = None;
            continue;
        }
        if let Some(j) = last_nonzero {
            if y[j].signum() != y[k].signum() {
                let t = y[j] / (y[j] - y[k]);
                zeros.push(x[j] + t * (x[k] - x[j]));
            }
        }
        last_nonzero = Some(k);
    }
    zeros
}

/// Angular frequency `π (n−1) / (x_last − x_first)` implied by `n` zeros,
/// or `None` with fewer than two.
pub fn zero_crossing_frequency(x: &[f64], y: &[f64]) -> Option<f64> {
    let zeros = zero_crossings(x, y);
    if zeros.len() < 2 {
        return None;
    }
    let span = (zeros[zeros.len() - 1] - zeros[0]).abs();
    Some(std::f64::consts::PI * (zeros.len() - 1) as f64 / span)
}

/// Slopes of `ln|y|` against `ln|x|` between neighbouring samples.
pub fn local_log_log_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| (ys[1].abs().ln() - ys[0].abs().ln()) / (xs[1].abs().ln() - xs[0].abs().ln()))
        .collect()
}

/// Least-squares slope of `ln|y|` against `ln|x|`; `None` for fewer than
/// two points or a degenerate abscissa.
pub fn fit_log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.abs().ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
