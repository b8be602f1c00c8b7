use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::integrate::rk4_step;
use super::lyapunov::{dissipation_monitor, popov_storage, BlockDissipation};
use super::spec::{InterconnectionSpec, Topology};

/// States beyond this norm count as divergence.
const DIVERGENCE_NORM: f64 = 1e100;

/// Sampled run of an interconnection on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub spec: InterconnectionSpec<T>,
    pub dt: T,
    pub times: Vec<T>,
    /// `[sample][dynamic block]`.
    pub states: Vec<Vec<T>>,
    /// `[sample][block]`.
    pub inputs: Vec<Vec<T>>,
    pub outputs: Vec<Vec<T>>,
    /// `[sample][dynamic block]`.
    pub storages: Vec<Vec<T>>,
    /// Weights used for `composite_v`.
    pub weights: Vec<T>,
    pub composite_v: Vec<T>,
    pub dissipation_residuals: Vec<BlockDissipation<T>>,
    /// Set when the run was cut short by a non-finite or exploding state.
    pub diverged: bool,
}

pub fn simulate<T: Real>(
    spec: &InterconnectionSpec<T>,
    x0: &[T],
    dt: T,
    t_end: T,
) -> Result<Trajectory<T>> {
    spec.validate()?;
    let ndyn = spec.dynamic_count();
    if x0.len() != ndyn {
        return Err(Error::InitialState { expected: ndyn, actual: x0.len() });
    }
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::NonPositive { name: "dt", value: dt.f64() });
    }
    if !(t_end > T::zero()) || !t_end.is_finite() {
        return Err(Error::NonPositive { name: "t_end", value: t_end.f64() });
    }
    if let Some(tau) = spec
        .blocks
        .iter()
        .filter_map(|b| b.time_constant())
        .reduce(|a, b| a.min(b))
    {
        let limit = tau / T::lit(10.0);
        if !(dt < limit) {
            return Err(Error::StepTooLarge { dt: dt.f64(), limit: limit.f64() });
        }
    }

    let steps = (t_end / dt).round().f64() as usize;
    let dyn_idx = spec.dynamic_indices();
    let weights = spec.resolved_weights();
    let mut traj = Trajectory {
        spec: spec.clone(),
        dt,
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        inputs: Vec::with_capacity(steps + 1),
        outputs: Vec::with_capacity(steps + 1),
        storages: Vec::with_capacity(steps + 1),
        weights,
        composite_v: Vec::with_capacity(steps + 1),
        dissipation_residuals: Vec::new(),
        diverged: false,
    };

    let field = |t: T, x: &[T]| spec.vector_field(t, x);
    let mut x = x0.to_vec();
    for k in 0..=steps {
        let t = T::usize(k) * dt;
        let norm = x.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
        if !norm.is_finite() || norm > T::lit(DIVERGENCE_NORM) {
            traj.diverged = true;
            break;
        }
        let (u, y) = spec.signals(t, &x);
        let storages: Vec<T> = dyn_idx.iter().zip(&x).map(|(&i, &xi)| spec.blocks[i].storage(xi)).collect();
        traj.composite_v.push(traj.composite_at(&y, &storages));
        traj.times.push(t);
        traj.states.push(x.clone());
        traj.inputs.push(u);
        traj.outputs.push(y);
        traj.storages.push(storages);
        if k < steps {
            x = rk4_step(field, t, &x, dt);
        }
    }
    traj.dissipation_residuals = dissipation_monitor(&traj);
    Ok(traj)
}

impl<T: Real> Trajectory<T> {
    fn composite_at(&self, y: &[T], storages: &[T]) -> T {
        let dyn_idx = self.spec.dynamic_indices();
        match self.spec.topology {
            Topology::Popov => {
                let n = self.spec.blocks.len();
                let psi = self.spec.popov_nonlinearity().expect("validated popov loop");
                let tau = match self.spec.blocks[n - 2] {
                    super::block::BlockSpec::LinearFirstOrder { tau, .. } => tau,
                    _ => unreachable!("validated popov loop"),
                };
                let mut v = T::zero();
                for (s, &i) in dyn_idx.iter().enumerate() {
                    if i < n - 2 {
                        v += self.weights[i] * storages[s];
                    }
                }
                v + self.weights[n - 2]
                    * popov_storage(|z| psi.eval(z), psi.sector_bound(), tau, y[n - 2])
            }
            _ => dyn_idx
                .iter()
                .zip(storages)
                .fold(T::zero(), |acc, (&i, &s)| acc + self.weights[i] * s),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state_norm(&self, k: usize) -> T {
        self.states[k].iter().fold(T::zero(), |a, &v| a + v * v).sqrt()
    }

    pub fn terminal_state_norm(&self) -> T {
        self.state_norm(self.len() - 1)
    }

    /// Decay verdict: not diverged, and either the terminal state is below
    /// `1e-3` or the envelope over the last quarter of the run is below the
    /// envelope over the quarter before it.
    pub fn converged(&self) -> bool {
        if self.diverged || self.is_empty() {
            return false;
        }
        if self.terminal_state_norm() < T::lit(1e-3) {
            return true;
        }
        let n = self.len();
        if n < 8 {
            return false;
        }
        let envelope = |r: std::ops::Range<usize>| r.map(|k| self.state_norm(k)).fold(T::zero(), |a, b| a.max(b));
        let last = envelope(3 * n / 4..n);
        let prev = envelope(n / 2..3 * n / 4);
        last < prev * (T::one() - T::lit(1e-3))
    }

    /// Largest increase of the composite storage between consecutive samples.
    pub fn max_composite_increment(&self) -> T {
        self.composite_v
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::min_value().unwrap(), |a, b| a.max(b))
    }

    /// CSV with header `t,x_i..,u_i..,y_i..,V_i..,V`; state and storage columns
    /// are labelled by the (1-based) index of their dynamic block.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let dyn_idx = self.spec.dynamic_indices();
        let n = self.spec.blocks.len();
        let mut header = vec!["t".to_string()];
        header.extend(dyn_idx.iter().map(|i| format!("x_{}", i + 1)));
        header.extend((1..=n).map(|i| format!("u_{i}")));
        header.extend((1..=n).map(|i| format!("y_{i}")));
        header.extend(dyn_idx.iter().map(|i| format!("V_{}", i + 1)));
        header.push("V".into());
        writeln!(w, "{}", header.join(","))?;
        for k in 0..self.len() {
            let row = std::iter::once(self.times[k])
                .chain(self.states[k].iter().copied())
                .chain(self.inputs[k].iter().copied())
                .chain(self.outputs[k].iter().copied())
                .chain(self.storages[k].iter().copied())
                .chain(std::iter::once(self.composite_v[k]))
                .map(|v| format!("{:.16e}", v.f64()))
                .collect::<Vec<_>>();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}
