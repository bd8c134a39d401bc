//! Small fitting helpers and the extremum finder used on sweep output.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Slope of `ln|y|` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    linear_fit(&lx, &ly).map(|f| f.slope)
}

/// Least-squares quadratic `c0 + c1 x + c2 x^2`, returned as `[c0, c1, c2]`.
///
/// The abscissae are rescaled to `[-1, 1]` before forming the normal
/// equations, then the coefficients are mapped back.
pub fn quadratic_fit(xs: &[f64], ys: &[f64]) -> Option<[f64; 3]> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return None;
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return None;
    }
    let mid = 0.5 * (hi + lo);
    let half = 0.5 * (hi - lo);
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let u = (x - mid) / half;
        let basis = [1.0, u, u * u];
        for i in 0..3 {
            aty[i] += basis[i] * y;
            for j in 0..3 {
                ata[i][j] += basis[i] * basis[j];
            }
        }
    }
    let [b0, b1, b2] = solve3(ata, aty)?;
    // y = b0 + b1 (x - m)/h + b2 (x - m)^2/h^2
    let c2 = b2 / (half * half);
    let c1 = b1 / half - 2.0 * mid * c2;
    let c0 = b0 - b1 * mid / half + b2 * mid * mid / (half * half);
    Some([c0, c1, c2])
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// A local extremum of `y - reference`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub y: f64,
    /// `y - reference`; positive for a peak, negative for a dip.
    pub deviation: f64,
}

/// The `count` largest local extrema of `|y - reference|`, at least
/// `min_separation` apart in `x`, ordered by decreasing magnitude.
///
/// Endpoints count as extrema when they exceed their single neighbour.
/// Non-finite samples are skipped.
pub fn find_extrema(xs: &[f64], ys: &[f64], reference: f64, count: usize, min_separation: f64) -> Vec<Extremum> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(&x, &y)| (x, y))
        .collect();
    let dev = |i: usize| (pts[i].1 - reference).abs();
    let mut candidates: Vec<Extremum> = (0..pts.len())
        .filter(|&i| {
            let left = i == 0 || dev(i) >= dev(i - 1);
            let right = i + 1 == pts.len() || dev(i) >= dev(i + 1);
            left && right && pts.len() > 1
        })
        .map(|i| Extremum {
            x: pts[i].0,
            y: pts[i].1,
            deviation: pts[i].1 - reference,
        })
        .collect();
    candidates.sort_by(|a, b| b.deviation.abs().total_cmp(&a.deviation.abs()));
    let mut picked: Vec<Extremum> = Vec::new();
    for c in candidates {
        if picked.len() == count {
            break;
        }
        if picked.iter().all(|p| (p.x - c.x).abs() >= min_separation) {
            picked.push(c);
        }
    }
    picked
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_fit_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-14 && (f.intercept + 1.0).abs() < 1e-14);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
        assert!(linear_fit(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn power_law_slope() {
        let xs = [1e-3, 2e-3, 5e-3, 1e-2];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| -7.0 * x.powi(2)).collect();
        assert!((log_log_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_fit_recovers_parabola() {
        let xs: Vec<f64> = (0..50).map(|i| 0.15 * i as f64 / 49.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 - 0.01 * x - 3.0 * x * x).collect();
        let [c0, c1, c2] = quadratic_fit(&xs, &ys).unwrap();
        assert!((c0 - 0.5).abs() < 1e-12);
        assert!((c1 + 0.01).abs() < 1e-10);
        assert!((c2 + 3.0).abs() < 1e-9);
    }

    #[test]
    fn extrema_by_magnitude() {
        let xs: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 * 0.01).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x: &f64| 1.0 + (-(x + 0.5).powi(2) / 0.001).exp() - 0.8 * (-(x - 0.5).powi(2) / 0.001).exp())
            .collect();
        let e = find_extrema(&xs, &ys, 1.0, 2, 0.1);
        assert_eq!(e.len(), 2);
        assert!((e[0].x + 0.5).abs() < 1e-9 && e[0].deviation > 0.0);
        assert!((e[1].x - 0.5).abs() < 1e-9 && e[1].deviation < 0.0);
    }

    #[test]
    fn extrema_skip_nan() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [0.0, f64::NAN, 2.0, 1.0];
        let e = find_extrema(&xs, &ys, 0.0, 1, 0.0);
        assert_eq!(e[0].x, 2.0);
    }
}
