use crate::scalar::Real;

/// One classical fourth-order Runge–Kutta step of `ẋ = f(t, x)`.
pub fn rk4_step<T, F>(f: F, t: T, x: &[T], h: T) -> Vec<T>
where
    T: Real,
    F: Fn(T, &[T]) -> Vec<T>,
{
    let half = h * T::lit(0.5);
    let axpy = |k: &[T], s: T| -> Vec<T> { x.iter().zip(k).map(|(&xi, &ki)| xi + s * ki).collect() };
    let k1 = f(t, x);
    let k2 = f(t + half, &axpy(&k1, half));
    let k3 = f(t + half, &axpy(&k2, half));
    let k4 = f(t + h, &axpy(&k3, h));
    let sixth = h / T::lit(6.0);
    (0..x.len())
        .map(|i| x[i] + sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut x = vec![1.0];
        let h = 0.1;
        for k in 0..10 {
            x = rk4_step(|_, x: &[f64]| vec![-x[0]], k as f64 * h, &x, h);
        }
        assert!((x[0] - (-1.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn fourth_order_on_time_dependent_rhs() {
        // ẋ = cos t, exact x = sin t
        let run = |h: f64| {
            let n = (1.0 / h).round() as usize;
            let mut x = vec![0.0];
            for k in 0..n {
                x = rk4_step(|t, _: &[f64]| vec![t.cos()], k as f64 * h, &x, h);
            }
            (x[0] - 1f64.sin()).abs()
        };
        let ratio = run(0.1) / run(0.05);
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }
}
