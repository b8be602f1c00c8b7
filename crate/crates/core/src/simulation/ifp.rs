//! Running check of the input-feedforward passivity inequality
//! `V̇ ≤ −ε|y|² + δu² + u·yₙ` on a simulated cascade.

use crate::certificate::{ifp_certificate, IfpReport, DEFAULT_TOLERANCE};
use crate::error::Result;
use crate::matrix::GainVector;
use crate::scalar::Real;

use super::block::BlockSpec;
use super::diff;
use super::spec::{ExternalInput, InterconnectionSpec, Topology};
use super::trajectory::{simulate, Trajectory};

#[derive(Debug, Clone, PartialEq)]
pub struct IfpExperiment<T> {
    pub delta: T,
    pub epsilon: T,
    pub weights: Vec<T>,
    pub trajectory: Trajectory<T>,
    pub vdot: Vec<T>,
    /// `−ε|y|² + δu² + u·yₙ` per sample.
    pub rhs: Vec<T>,
    pub tolerance: T,
}

impl<T: Real> IfpExperiment<T> {
    /// `max_t (V̇ − rhs)`.
    pub fn max_violation(&self) -> T {
        self.vdot
            .iter()
            .zip(&self.rhs)
            .map(|(&a, &b)| a - b)
            .fold(T::min_value().unwrap(), |a, b| a.max(b))
    }

    pub fn holds(&self) -> bool {
        self.max_violation() <= self.tolerance
    }
}

/// Cascade of unit-time-constant linear lags realizing `gains`.
pub fn linear_cascade<T: Real>(gains: &GainVector<T>, input: ExternalInput<T>) -> InterconnectionSpec<T> {
    let blocks = gains
        .as_slice()
        .iter()
        .map(|&g| BlockSpec::LinearFirstOrder { tau: T::one(), gamma: g })
        .collect();
    InterconnectionSpec::new(Topology::Cascade, blocks).with_input(input)
}

/// Certifies `δ` with [`ifp_certificate`], then checks the inequality along a
/// simulated linear cascade with the certificate's storage weights.
pub fn ifp_experiment<T: Real>(
    gains: &GainVector<T>,
    delta: T,
    input: ExternalInput<T>,
    x0: &[T],
    dt: T,
    t_end: T,
) -> Result<(IfpReport<T>, IfpExperiment<T>)> {
    let report = ifp_certificate(gains, delta, T::lit(DEFAULT_TOLERANCE))?;
    let spec = linear_cascade(gains, input);
    let exp = ifp_check(&spec, delta, report.weights(), report.epsilon, x0, dt, t_end)?;
    Ok((report, exp))
}

/// The inequality check for an arbitrary cascade and arbitrary weights.
pub fn ifp_check<T: Real>(
    spec: &InterconnectionSpec<T>,
    delta: T,
    weights: &[T],
    epsilon: T,
    x0: &[T],
    dt: T,
    t_end: T,
) -> Result<IfpExperiment<T>> {
    let spec = spec.clone().with_weights(weights.to_vec());
    let trajectory = simulate(&spec, x0, dt, t_end)?;
    let v = &trajectory.composite_v;
    let vdot = diff::derivative(v, dt);
    let tolerance = diff::tolerance(v, dt);
    let last = spec.blocks.len() - 1;
    let rhs = (0..trajectory.len())
        .map(|k| {
            let y = &trajectory.outputs[k];
            let u = trajectory.inputs[k][0];
            let y2 = y.iter().fold(T::zero(), |a, &x| a + x * x);
            -epsilon * y2 + delta * u * u + u * y[last]
        })
        .collect();
    Ok(IfpExperiment {
        delta,
        epsilon,
        weights: weights.to_vec(),
        trajectory,
        vdot,
        rhs,
        tolerance,
    })
}
