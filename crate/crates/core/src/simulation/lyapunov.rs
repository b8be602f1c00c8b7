//! Composite storage functions evaluated along simulated trajectories.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::block::BlockSpec;
use super::diff;
use super::quadrature::adaptive_simpson;
use super::spec::Topology;
use super::trajectory::Trajectory;

/// Quadrature tolerance for the Popov integral term.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// `κ·τ·∫₀^y ψ(σ) dσ`, the storage of a linear lag merged with a following
/// sector nonlinearity.
pub fn popov_storage<T: Real, F: Fn(T) -> T>(psi: F, kappa: T, tau: T, y: T) -> T {
    kappa * tau * adaptive_simpson(psi, T::zero(), y, T::lit(QUADRATURE_TOL))
}

/// Composite storage `V(t)` with its finite-difference derivative and the
/// weighted supply bound it must stay under.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovTrace<T> {
    pub times: Vec<T>,
    pub v: Vec<T>,
    pub vdot: Vec<T>,
    /// `Σ dᵢ(-ỹᵢ² + γᵢũᵢỹᵢ)`; equals `ỹᵀDAỹ` for an unforced loop.
    pub supply: Vec<T>,
    /// `|ỹ|²` of the loop outputs entering the decay bound.
    pub output_norm_sq: Vec<T>,
    /// Finite-difference tolerance for this run.
    pub tolerance: T,
}

impl<T: Real> LyapunovTrace<T> {
    pub fn max_increment(&self) -> T {
        self.v
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::min_value().unwrap(), |a, b| a.max(b))
    }

    /// Whether `V(tₖ₊₁) ≤ V(tₖ) + tol` at every step.
    pub fn is_nonincreasing(&self, tol: T) -> bool {
        self.max_increment() <= tol
    }

    /// `max_t (V̇ − supply)`; nonpositive up to the tolerance when every block
    /// satisfies its dissipation inequality.
    pub fn max_supply_excess(&self) -> T {
        self.vdot
            .iter()
            .zip(&self.supply)
            .map(|(&a, &b)| a - b)
            .fold(T::min_value().unwrap(), |a, b| a.max(b))
    }

    /// `max_t (V̇ + ε|ỹ|²)`.
    pub fn decay_violation(&self, epsilon: T) -> T {
        self.vdot
            .iter()
            .zip(&self.output_norm_sq)
            .map(|(&vd, &y2)| vd + epsilon * y2)
            .fold(T::min_value().unwrap(), |a, b| a.max(b))
    }

    /// `V̇ ≤ -ε|ỹ|² + tolerance` at every sample.
    pub fn satisfies_decay(&self, epsilon: T) -> bool {
        self.decay_violation(epsilon) <= self.tolerance
    }

    /// Whether some sample has `V̇ > tolerance`.
    pub fn has_positive_derivative(&self) -> bool {
        self.vdot.iter().any(|&v| v > self.tolerance)
    }
}

fn finish<T: Real>(traj: &Trajectory<T>, v: Vec<T>, supply: Vec<T>, output_norm_sq: Vec<T>) -> LyapunovTrace<T> {
    let vdot = diff::derivative(&v, traj.dt);
    let tolerance = diff::tolerance(&v, traj.dt);
    LyapunovTrace { times: traj.times.clone(), v, vdot, supply, output_norm_sq, tolerance }
}

/// `V = Σ dᵢVᵢ` over the dynamic blocks, one weight per block (static block
/// weights only enter the supply bound).
pub fn lyapunov_trace<T: Real>(traj: &Trajectory<T>, d: &[T]) -> Result<LyapunovTrace<T>> {
    let blocks = &traj.spec.blocks;
    if d.len() != blocks.len() {
        return Err(Error::DimensionMismatch { expected: blocks.len(), actual: d.len() });
    }
    let dyn_idx = traj.spec.dynamic_indices();
    let mut v = Vec::with_capacity(traj.len());
    let mut supply = Vec::with_capacity(traj.len());
    let mut norm = Vec::with_capacity(traj.len());
    for k in 0..traj.len() {
        let (u, y) = (&traj.inputs[k], &traj.outputs[k]);
        v.push(
            dyn_idx
                .iter()
                .zip(&traj.storages[k])
                .fold(T::zero(), |acc, (&i, &s)| acc + d[i] * s),
        );
        supply.push(
            blocks
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (i, b)| acc + d[i] * b.supply(u[i], y[i])),
        );
        norm.push(y.iter().fold(T::zero(), |a, &x| a + x * x));
    }
    Ok(finish(traj, v, supply, norm))
}

/// Popov-form storage `Σ_{i<n} dᵢVᵢ + dₙ·κτₙ∫₀^{yₙ}ψ` on a Popov-loop run,
/// where block `n` is the linear lag feeding `ψ`.
pub fn popov_lyapunov_trace<T: Real, F: Fn(T) -> T>(
    traj: &Trajectory<T>,
    d: &[T],
    kappa: T,
    tau_n: T,
    psi: F,
) -> Result<LyapunovTrace<T>> {
    if traj.spec.topology != Topology::Popov {
        return Err(Error::InvalidSpec("popov trace needs a popov-loop trajectory".into()));
    }
    let blocks = &traj.spec.blocks;
    let last = blocks.len() - 2;
    if d.len() != last + 1 {
        return Err(Error::DimensionMismatch { expected: last + 1, actual: d.len() });
    }
    if !(kappa > T::zero()) {
        return Err(Error::NonPositive { name: "kappa", value: kappa.f64() });
    }
    if !(tau_n > T::zero()) {
        return Err(Error::NonPositive { name: "tau_n", value: tau_n.f64() });
    }
    let dyn_idx = traj.spec.dynamic_indices();
    let gamma_n = blocks[last].gamma();
    let mut v = Vec::with_capacity(traj.len());
    let mut supply = Vec::with_capacity(traj.len());
    let mut norm = Vec::with_capacity(traj.len());
    for k in 0..traj.len() {
        let (u, y) = (&traj.inputs[k], &traj.outputs[k]);
        let mut vk = T::zero();
        for (s, &i) in dyn_idx.iter().enumerate() {
            if i < last {
                vk += d[i] * traj.storages[k][s];
            }
        }
        vk += d[last] * popov_storage(&psi, kappa, tau_n, y[last]);
        v.push(vk);

        let p = psi(y[last]);
        let mut sk = T::zero();
        let mut nk = p * p;
        for i in 0..last {
            sk += d[i] * blocks[i].supply(u[i], y[i]);
            nk += y[i] * y[i];
        }
        sk += d[last] * (-p * p + kappa * gamma_n * u[last] * p);
        supply.push(sk);
        norm.push(nk);
    }
    Ok(finish(traj, v, supply, norm))
}

/// Worst-case dissipation check of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDissipation<T> {
    pub index: usize,
    pub dynamic: bool,
    /// Dynamic: `max_t (V̇ᵢ − (−yᵢ² + γᵢuᵢyᵢ))`. Static: `min_t (−yᵢ² + γᵢuᵢyᵢ)`.
    pub worst: T,
    pub tolerance: T,
    pub satisfied: bool,
}

pub fn dissipation_monitor<T: Real>(traj: &Trajectory<T>) -> Vec<BlockDissipation<T>> {
    let mut out = Vec::with_capacity(traj.spec.blocks.len());
    let mut s = 0;
    for (i, b) in traj.spec.blocks.iter().enumerate() {
        let supply: Vec<T> = (0..traj.len())
            .map(|k| b.supply(traj.inputs[k][i], traj.outputs[k][i]))
            .collect();
        if let BlockSpec::StaticSector(_) = b {
            let worst = supply.iter().copied().fold(T::max_value().unwrap(), |a, v| a.min(v));
            let tolerance = T::lit(diff::TOL_FLOOR);
            out.push(BlockDissipation { index: i, dynamic: false, worst, tolerance, satisfied: worst >= -tolerance });
        } else {
            let v: Vec<T> = traj.storages.iter().map(|row| row[s]).collect();
            s += 1;
            let vdot = diff::derivative(&v, traj.dt);
            let worst = vdot
                .iter()
                .zip(&supply)
                .map(|(&a, &b)| a - b)
                .fold(T::min_value().unwrap(), |a, v| a.max(v));
            let tolerance = diff::tolerance(&v, traj.dt);
            out.push(BlockDissipation { index: i, dynamic: true, worst, tolerance, satisfied: worst <= tolerance });
        }
    }
    out
}
