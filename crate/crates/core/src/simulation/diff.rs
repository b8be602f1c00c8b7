//! Finite differences on a uniform grid.

use crate::scalar::Real;

/// Time derivative of uniformly sampled values.
///
/// Five-point centered stencil in the interior, three-point centered next to
/// the ends and three-point one-sided at the ends (all at least second order).
pub fn derivative<T: Real>(v: &[T], dt: T) -> Vec<T> {
    let n = v.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![T::zero()],
        2 => {
            let d = (v[1] - v[0]) / dt;
            return vec![d, d];
        }
        _ => {}
    }
    let two = T::lit(2.0);
    let mut out = vec![T::zero(); n];
    out[0] = (-T::lit(3.0) * v[0] + T::lit(4.0) * v[1] - v[2]) / (two * dt);
    out[n - 1] = (T::lit(3.0) * v[n - 1] - T::lit(4.0) * v[n - 2] + v[n - 3]) / (two * dt);
    for k in 1..n - 1 {
        out[k] = if k >= 2 && k + 2 < n {
            (v[k - 2] - T::lit(8.0) * v[k - 1] + T::lit(8.0) * v[k + 1] - v[k + 2]) / (T::lit(12.0) * dt)
        } else {
            (v[k + 1] - v[k - 1]) / (two * dt)
        };
    }
    out
}

/// Largest `|v'''|` estimated from third differences.
pub fn max_third_derivative<T: Real>(v: &[T], dt: T) -> T {
    if v.len() < 4 {
        return T::zero();
    }
    let three = T::lit(3.0);
    v.windows(4)
        .map(|w| ((w[3] - three * w[2] + three * w[1] - w[0]) / (dt * dt * dt)).abs())
        .fold(T::zero(), |a, b| a.max(b))
}

/// Absolute floor of every dissipation tolerance.
pub const TOL_FLOOR: f64 = 1e-6;

/// `1e-6 + C·dt²` with `C` bounding the second-order stencil error of
/// [`derivative`] for this series.
pub fn tolerance<T: Real>(v: &[T], dt: T) -> T {
    T::lit(TOL_FLOOR) + T::lit(0.5) * max_third_derivative(v, dt) * dt * dt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        let dt = 0.1;
        let v: Vec<f64> = (0..20).map(|k| (k as f64 * dt).powi(2) * 3.0 - k as f64 * dt).collect();
        let d = derivative(&v, dt);
        for (k, dk) in d.iter().enumerate() {
            let t = k as f64 * dt;
            assert!((dk - (6.0 * t - 1.0)).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn interior_is_fourth_order() {
        let err = |dt: f64| {
            let v: Vec<f64> = (0..=(2.0 / dt).round() as usize).map(|k| (k as f64 * dt).sin()).collect();
            let d = derivative(&v, dt);
            let mid = v.len() / 2;
            (d[mid] - (mid as f64 * dt).cos()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    #[test]
    fn tolerance_covers_edge_error() {
        let dt = 0.05;
        let v: Vec<f64> = (0..100).map(|k| (3.0 * k as f64 * dt).sin()).collect();
        let d = derivative(&v, dt);
        let tol = tolerance(&v, dt);
        for (k, dk) in d.iter().enumerate() {
            let exact = 3.0 * (3.0 * k as f64 * dt).cos();
            assert!((dk - exact).abs() <= tol, "k = {k}");
        }
    }
}
