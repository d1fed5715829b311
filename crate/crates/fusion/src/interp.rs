//! Shape-preserving piecewise cubic Hermite interpolation
//! (Fritsch-Carlson slope limiting).

use serde::{Deserialize, Serialize};

/// Monotone-safe cubic Hermite interpolant over strictly ascending knots.
/// Queries outside the knot range evaluate at the nearest knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PchipSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl PchipSpline {
    /// Fits the spline. Requires `x` strictly ascending and at least one
    /// knot; a single knot yields a constant interpolant.
    pub fn fit(x: &[f64], y: &[f64]) -> PchipSpline {
        assert_eq!(x.len(), y.len());
        assert!(!x.is_empty(), "need at least one knot");
        assert!(
            x.windows(2).all(|w| w[0] < w[1]),
            "knot abscissae must be strictly ascending"
        );
        let d = pchip_slopes(x, y);
        PchipSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            d,
        }
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.x, &self.y)
    }

    pub fn eval(&self, q: f64) -> f64 {
        let n = self.x.len();
        if n == 1 || q <= self.x[0] {
            return self.y[0];
        }
        if q >= self.x[n - 1] {
            return self.y[n - 1];
        }
        // rightmost interval with x[i] <= q
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&q).unwrap()) {
            Ok(i) => return self.y[i],
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let t = (q - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (d0, d1) = (self.d[i], self.d[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    }
}

/// Fritsch-Carlson derivative estimates. Slopes are limited so the
/// interpolant never overshoots the data between monotone knots.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 1 {
        return vec![0.0];
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }

    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] == 0.0 || delta[i] == 0.0 || delta[i - 1].signum() != delta[i].signum() {
            d[i] = 0.0;
        } else {
            // weighted harmonic mean of the adjacent secants
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// One-sided three-point slope estimate with the standard monotone limits.
fn edge_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        d = 0.0;
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        d = 3.0 * del0;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn interpolates_knots_exactly() {
        let x = [0.1, 0.3, 0.5, 0.8];
        let y = [0.9, 0.4, 0.45, 0.1];
        let s = PchipSpline::fit(&x, &y);
        for (xi, yi) in x.iter().zip(y.iter()) {
            assert_abs_diff_eq!(s.eval(*xi), *yi, epsilon = 1e-14);
        }
    }

    #[test]
    fn constant_extrapolation_outside_range() {
        let s = PchipSpline::fit(&[0.2, 0.6], &[0.3, 0.7]);
        assert_eq!(s.eval(-5.0), 0.3);
        assert_eq!(s.eval(5.0), 0.7);
    }

    #[test]
    fn single_knot_is_constant() {
        let s = PchipSpline::fit(&[0.4], &[0.25]);
        assert_eq!(s.eval(0.0), 0.25);
        assert_eq!(s.eval(0.4), 0.25);
        assert_eq!(s.eval(1.0), 0.25);
    }

    #[test]
    fn linear_data_reproduces_line() {
        let x: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
        let s = PchipSpline::fit(&x, &y);
        for i in 0..=100 {
            let q = i as f64 / 100.0;
            assert_abs_diff_eq!(s.eval(q), 1.0 - q, epsilon = 1e-12);
        }
    }

    #[test]
    fn monotone_data_gives_monotone_interpolant() {
        let x = [0.0, 0.1, 0.4, 0.45, 0.9, 1.0];
        let y = [0.05, 0.1, 0.12, 0.6, 0.61, 0.95];
        let s = PchipSpline::fit(&x, &y);
        let mut prev = s.eval(0.0);
        for i in 1..=1000 {
            let q = i as f64 / 1000.0;
            let v = s.eval(q);
            assert!(v >= prev - 1e-12, "not monotone at {q}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn no_overshoot_between_monotone_knots() {
        // data inside [0,1] must stay inside [0,1]
        let x = [0.0, 0.2, 0.21, 0.8, 1.0];
        let y = [0.0, 0.01, 0.99, 0.995, 1.0];
        let s = PchipSpline::fit(&x, &y);
        for i in 0..=2000 {
            let q = i as f64 / 2000.0;
            let v = s.eval(q);
            assert!((-1e-12..=1.0 + 1e-12).contains(&v), "overshoot at {q}: {v}");
        }
    }
}
