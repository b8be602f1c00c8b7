//! Building blocks of the interconnections: first-order linear lags, a cubic
//! output-strictly-passive family and static sector nonlinearities.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Memoryless shape `s(u)` with `s(0) = 0` and `0 ≤ u·s(u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SectorShape<T> {
    /// `s(u) = u`.
    Linear,
    /// `s(u) = u / (1 + |u|)`.
    SoftSat,
    /// `s(u) = h(offset) − h(u + offset)` with the repression curve
    /// `h(x) = 1 / (1 + xᵖ)`, evaluated at `max(x, 0)`.
    ShiftedHill { p: u32, offset: T },
    /// Piecewise-linear through `(u, y)` samples, constant beyond the ends.
    Table(Vec<(T, T)>),
}

fn hill<T: Real>(x: T, p: u32) -> T {
    let x = x.max(T::zero());
    T::one() / (T::one() + x.powi(p as i32))
}

impl<T: Real> SectorShape<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Linear | Self::SoftSat => Ok(()),
            Self::ShiftedHill { p, offset } => {
                if *p == 0 {
                    return Err(Error::InvalidSpec("hill exponent p must be at least 1".into()));
                }
                if !(*offset >= T::zero()) || !offset.is_finite() {
                    return Err(Error::InvalidSpec("hill offset must be nonnegative".into()));
                }
                Ok(())
            }
            Self::Table(samples) => {
                if samples.len() < 2 {
                    return Err(Error::InvalidSpec("table needs at least two samples".into()));
                }
                if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(Error::InvalidSpec("table inputs must be strictly increasing".into()));
                }
                if !samples.iter().any(|&(u, y)| u == T::zero() && y == T::zero()) {
                    return Err(Error::InvalidSpec("table must contain the sample (0, 0)".into()));
                }
                if samples.iter().any(|&(u, y)| !u.is_finite() || !y.is_finite() || u * y < T::zero()) {
                    return Err(Error::InvalidSpec(
                        "table samples must be finite and satisfy u*y >= 0".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, u: T) -> T {
        match self {
            Self::Linear => u,
            Self::SoftSat => u / (T::one() + u.abs()),
            Self::ShiftedHill { p, offset } => hill(*offset, *p) - hill(u + *offset, *p),
            Self::Table(samples) => table_eval(samples, u),
        }
    }

    /// `sup_{u≠0} s(u)/u`.
    pub fn max_slope(&self) -> T {
        match self {
            Self::Linear | Self::SoftSat => T::one(),
            Self::Table(samples) => samples
                .iter()
                .filter(|(u, _)| *u != T::zero())
                .map(|&(u, y)| y / u)
                .fold(T::zero(), |a, b| a.max(b)),
            Self::ShiftedHill { p, offset } => hill_max_slope(*p, *offset),
        }
    }
}

fn table_eval<T: Real>(samples: &[(T, T)], u: T) -> T {
    let first = samples[0];
    let last = samples[samples.len() - 1];
    if u <= first.0 {
        return first.1;
    }
    if u >= last.0 {
        return last.1;
    }
    let idx = samples.partition_point(|s| s.0 <= u);
    let (u0, y0) = samples[idx - 1];
    let (u1, y1) = samples[idx];
    y0 + (y1 - y0) * (u - u0) / (u1 - u0)
}

fn hill_max_slope<T: Real>(p: u32, offset: T) -> T {
    let shape = SectorShape::ShiftedHill { p, offset };
    let ratio = |u: T| shape.eval(u) / u;
    // Slope at the origin: -h'(offset).
    let at_zero = if offset > T::zero() {
        let pp = T::lit(p as f64);
        pp * offset.powi(p as i32 - 1) / (T::one() + offset.powi(p as i32)).powi(2)
    } else if p == 1 {
        T::one()
    } else {
        T::zero()
    };
    let mut best = (at_zero, T::zero());
    let scale = T::one() + offset;
    let mut consider = |u: T| {
        if u != T::zero() {
            let v = ratio(u);
            if v > best.0 {
                best = (v, u);
            }
        }
    };
    // Left of -offset the shape is constant, so the ratio peaks at -offset.
    let steps = 2000;
    for k in 1..=steps {
        consider(-offset * T::usize(k) / T::usize(steps));
    }
    for k in 0..=4000 {
        // log grid from 1e-6·scale to 1e6·scale
        let e = T::lit(-6.0 + 12.0 * k as f64 / 4000.0);
        consider(scale * T::lit(10.0).powf(e));
    }
    if best.1 == T::zero() {
        return best.0;
    }
    // Golden-section refinement around the best grid point.
    let (mut lo, mut hi) = if best.1 > T::zero() {
        (best.1 * T::lit(0.99), best.1 * T::lit(1.01))
    } else {
        ((best.1 - offset / T::usize(steps)).max(-offset), (best.1 + offset / T::usize(steps)).min(-offset * T::lit(1e-12)))
    };
    let g = T::lit(0.618_033_988_749_894_8);
    for _ in 0..100 {
        let a = hi - (hi - lo) * g;
        let b = lo + (hi - lo) * g;
        if ratio(a) > ratio(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    best.0.max(ratio((lo + hi) * T::lit(0.5)))
}

/// A static block `y = gain · s(u)` lying in the sector `[0, gain·sup s(u)/u]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBlock<T> {
    pub gain: T,
    pub shape: SectorShape<T>,
    bound: T,
}

impl<T: Real> SectorBlock<T> {
    pub fn new(gain: T, shape: SectorShape<T>) -> Result<Self> {
        if !(gain > T::zero()) || !gain.is_finite() {
            return Err(Error::NonPositive { name: "sector gain", value: gain.f64() });
        }
        shape.validate()?;
        // Inflate slightly so the numerically found supremum is never undercut.
        let bound = gain * shape.max_slope() * (T::one() + T::lit(1e-9));
        Ok(Self { gain, shape, bound })
    }

    pub fn eval(&self, u: T) -> T {
        self.gain * self.shape.eval(u)
    }

    /// The `γ` (or `κ`) with `0 ≤ -y² + γ·u·y` for all `u`; zero for a
    /// shape that is identically zero.
    pub fn sector_bound(&self) -> T {
        self.bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockSpec<T> {
    /// `τ·ẏ = -y + γ·u`, storage `τy²/2`.
    LinearFirstOrder { tau: T, gamma: T },
    /// `ẋ = -x - a·x³ + γ·u`, `y = x`, storage `x²/2`.
    NonlinearOfp { gamma: T, cubic: T },
    StaticSector(SectorBlock<T>),
}

impl<T: Real> BlockSpec<T> {
    pub fn linear(tau: T, gamma: T) -> Result<Self> {
        if !(tau > T::zero()) || !tau.is_finite() {
            return Err(Error::NonPositive { name: "tau", value: tau.f64() });
        }
        positive_gain(gamma)?;
        Ok(Self::LinearFirstOrder { tau, gamma })
    }

    pub fn ofp_cubic(gamma: T, cubic: T) -> Result<Self> {
        positive_gain(gamma)?;
        if !(cubic >= T::zero()) || !cubic.is_finite() {
            return Err(Error::InvalidSpec("cubic coefficient must be nonnegative".into()));
        }
        Ok(Self::NonlinearOfp { gamma, cubic })
    }

    pub fn sector(gain: T, shape: SectorShape<T>) -> Result<Self> {
        Ok(Self::StaticSector(SectorBlock::new(gain, shape)?))
    }

    pub fn is_dynamic(&self) -> bool {
        !matches!(self, Self::StaticSector(_))
    }

    /// Passivity gain `γ` entering the cyclic matrix.
    pub fn gamma(&self) -> T {
        match self {
            Self::LinearFirstOrder { gamma, .. } | Self::NonlinearOfp { gamma, .. } => *gamma,
            Self::StaticSector(s) => s.sector_bound(),
        }
    }

    /// Time constant bounding the admissible integration step.
    pub fn time_constant(&self) -> Option<T> {
        match self {
            Self::LinearFirstOrder { tau, .. } => Some(*tau),
            Self::NonlinearOfp { .. } => Some(T::one()),
            Self::StaticSector(_) => None,
        }
    }

    /// State derivative of a dynamic block; zero for static ones.
    pub fn derivative(&self, x: T, u: T) -> T {
        match self {
            Self::LinearFirstOrder { tau, gamma } => (-x + *gamma * u) / *tau,
            Self::NonlinearOfp { gamma, cubic } => -x - *cubic * x * x * x + *gamma * u,
            Self::StaticSector(_) => T::zero(),
        }
    }

    pub fn storage(&self, x: T) -> T {
        match self {
            Self::LinearFirstOrder { tau, .. } => *tau * x * x * T::lit(0.5),
            Self::NonlinearOfp { .. } => x * x * T::lit(0.5),
            Self::StaticSector(_) => T::zero(),
        }
    }

    /// Supply rate `-y² + γ·u·y`.
    pub fn supply(&self, u: T, y: T) -> T {
        -y * y + self.gamma() * u * y
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::LinearFirstOrder { .. } => "linear",
            Self::NonlinearOfp { .. } => "ofp_cubic",
            Self::StaticSector(_) => "sector",
        }
    }
}

fn positive_gain<T: Real>(gamma: T) -> Result<()> {
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(Error::NonPositive { name: "gamma", value: gamma.f64() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> impl Iterator<Item = f64> {
        (0..10_000).map(|k| -100.0 + 200.0 * k as f64 / 9_999.0)
    }

    #[test]
    fn builtin_shapes_stay_in_sector() {
        let blocks = [
            SectorBlock::new(2.0, SectorShape::Linear).unwrap(),
            SectorBlock::new(1.5, SectorShape::SoftSat).unwrap(),
            SectorBlock::new(1.0, SectorShape::ShiftedHill { p: 2, offset: 1.0 }).unwrap(),
            SectorBlock::new(3.0, SectorShape::ShiftedHill { p: 4, offset: 0.5 }).unwrap(),
            SectorBlock::new(1.0, SectorShape::ShiftedHill { p: 1, offset: 0.0 }).unwrap(),
            SectorBlock::new(
                1.0,
                SectorShape::Table(vec![(-2.0, -1.0), (0.0, 0.0), (1.0, 2.0), (3.0, 2.5)]),
            )
            .unwrap(),
        ];
        for b in &blocks {
            let gamma = b.sector_bound();
            for u in grid() {
                let y = b.eval(u);
                assert!(y * (gamma * u - y) >= -1e-12, "{b:?} at u = {u}");
            }
        }
    }

    #[test]
    fn softsat_sector_expression() {
        let b = SectorBlock::new(2.0, SectorShape::SoftSat).unwrap();
        for u in [-3.0f64, -0.1, 0.0, 0.5, 40.0] {
            let y = b.eval(u);
            let expected = 4.0 * u * u * u.abs() / (1.0 + u.abs()).powi(2);
            assert_abs_diff_eq!(y * (2.0 * u - y), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn hill_passes_through_origin() {
        let s = SectorShape::ShiftedHill { p: 2, offset: 1.0 };
        assert_eq!(s.eval(0.0), 0.0);
        assert!(s.eval(1.0) > 0.0);
        assert!(s.eval(-0.5) < 0.0);
        // Clamped below -offset.
        assert_abs_diff_eq!(s.eval(-5.0), 0.5 - 1.0);
    }

    #[test]
    fn hill_slope_is_tight() {
        let s = SectorShape::ShiftedHill { p: 2, offset: 1.0 };
        let k = s.max_slope();
        let brute = (1..2_000_000)
            .map(|i| -1.0 + 1e-6 * i as f64)
            .filter(|u| *u != 0.0)
            .map(|u| s.eval(u) / u)
            .fold(0.0, f64::max);
        assert!(k >= brute - 1e-12);
        assert!(k <= brute + 1e-6);
    }

    #[test]
    fn table_interpolates_and_clamps() {
        let s = SectorShape::Table(vec![(-1.0, -2.0), (0.0, 0.0), (2.0, 1.0)]);
        s.validate().unwrap();
        assert_abs_diff_eq!(s.eval(1.0), 0.5);
        assert_abs_diff_eq!(s.eval(-0.5), -1.0);
        assert_abs_diff_eq!(s.eval(10.0), 1.0);
        assert_abs_diff_eq!(s.eval(-10.0), -2.0);
        assert_abs_diff_eq!(s.max_slope(), 2.0);
    }

    #[test]
    fn table_validation() {
        let no_origin = SectorShape::Table(vec![(-1.0, -1.0), (1.0, 1.0)]);
        assert!(no_origin.validate().is_err());
        let wrong_sign = SectorShape::Table(vec![(-1.0, 1.0), (0.0, 0.0)]);
        assert!(wrong_sign.validate().is_err());
        let unsorted = SectorShape::Table(vec![(0.0, 0.0), (0.0, 0.0)]);
        assert!(unsorted.validate().is_err());
    }

    #[test]
    fn linear_storage_is_exact() {
        // V = τy²/2 along τẏ = -y + γu gives V̇ = -y² + γuy identically.
        let b = BlockSpec::linear(0.7, 1.3).unwrap();
        for (x, u) in [(0.4f64, -1.0f64), (-2.0, 0.3), (1.0, 1.0)] {
            let vdot = 0.7 * x * b.derivative(x, u);
            assert_abs_diff_eq!(vdot, b.supply(u, x), epsilon = 1e-14);
        }
    }

    #[test]
    fn cubic_storage_has_slack() {
        let b = BlockSpec::ofp_cubic(1.0, 1.0).unwrap();
        for (x, u) in [(0.4f64, -1.0f64), (-2.0, 0.3), (1.0, 1.0)] {
            let vdot = x * b.derivative(x, u);
            assert_abs_diff_eq!(vdot - b.supply(u, x), -x.powi(4), epsilon = 1e-14);
        }
    }

    #[test]
    fn constructors_validate() {
        assert!(BlockSpec::linear(0.0, 1.0).is_err());
        assert!(BlockSpec::linear(1.0, -1.0).is_err());
        assert!(BlockSpec::ofp_cubic(1.0, -0.5).is_err());
        assert!(BlockSpec::sector(0.0, SectorShape::<f64>::Linear).is_err());
        assert!(BlockSpec::sector(1.0, SectorShape::ShiftedHill { p: 0, offset: 1.0 }).is_err());
    }
}
