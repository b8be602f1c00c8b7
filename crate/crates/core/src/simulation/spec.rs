use crate::certificate::{build_certificate, popov_gains, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::matrix::GainVector;
use crate::scalar::Real;

use super::block::{BlockSpec, SectorBlock};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// `u₁ = u_ext − yₙ`, `uᵢ = yᵢ₋₁`.
    Cyclic,
    /// `u₁ = u_ext`, `uᵢ = yᵢ₋₁`.
    Cascade,
    /// Cyclic loop whose last block is a time-invariant sector nonlinearity
    /// fed by a first-order linear block.
    Popov,
}

/// External input `u_ext(t)` entering the first summing junction.
#[derive(Debug, Clone, PartialEq)]
pub enum ExternalInput<T> {
    Zero,
    Step { height: T },
    /// `amplitude · sin(frequency · t)`, frequency in rad per time unit.
    Sinusoid { amplitude: T, frequency: T },
    /// Uniformly spaced samples, linearly interpolated and held after the end.
    Samples { dt: T, values: Vec<T> },
}

impl<T: Real> ExternalInput<T> {
    pub fn eval(&self, t: T) -> T {
        match self {
            Self::Zero => T::zero(),
            Self::Step { height } => {
                if t >= T::zero() {
                    *height
                } else {
                    T::zero()
                }
            }
            Self::Sinusoid { amplitude, frequency } => *amplitude * (*frequency * t).sin(),
            Self::Samples { dt, values } => {
                if values.is_empty() {
                    return T::zero();
                }
                let pos = (t / *dt).max(T::zero());
                let k = pos.floor();
                let i = k.f64() as usize;
                if i + 1 >= values.len() {
                    return values[values.len() - 1];
                }
                let frac = pos - k;
                values[i] + (values[i + 1] - values[i]) * frac
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Samples { dt, values } => {
                if !(*dt > T::zero()) {
                    return Err(Error::InvalidSpec("input.dt must be positive".into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidSpec("input.values must be finite".into()));
                }
                Ok(())
            }
            Self::Step { height } if !height.is_finite() => {
                Err(Error::InvalidSpec("input.height must be finite".into()))
            }
            Self::Sinusoid { amplitude, frequency }
                if !amplitude.is_finite() || !frequency.is_finite() =>
            {
                Err(Error::InvalidSpec("input amplitude and frequency must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterconnectionSpec<T> {
    pub topology: Topology,
    pub blocks: Vec<BlockSpec<T>>,
    pub input: ExternalInput<T>,
    /// Weights `dᵢ` of the composite storage; derived from the diagonal
    /// certificate when absent.
    pub weights: Option<Vec<T>>,
}

impl<T: Real> InterconnectionSpec<T> {
    pub fn new(topology: Topology, blocks: Vec<BlockSpec<T>>) -> Self {
        Self { topology, blocks, input: ExternalInput::Zero, weights: None }
    }

    pub fn with_input(mut self, input: ExternalInput<T>) -> Self {
        self.input = input;
        self
    }

    pub fn with_weights(mut self, weights: Vec<T>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidSpec("at least one block required".into()));
        }
        let dynamic = self.blocks.iter().filter(|b| b.is_dynamic()).count();
        if self.topology != Topology::Cascade && dynamic == 0 {
            return Err(Error::InvalidSpec(
                "a feedback loop needs at least one dynamic block (algebraic loop)".into(),
            ));
        }
        if self.topology == Topology::Popov {
            let n = self.blocks.len();
            if n < 2 {
                return Err(Error::InvalidSpec(
                    "popov loop needs a linear block followed by a sector block".into(),
                ));
            }
            if self.blocks[n - 1].is_dynamic() {
                return Err(Error::InvalidSpec("popov loop must end with a sector block".into()));
            }
            if !matches!(self.blocks[n - 2], BlockSpec::LinearFirstOrder { .. }) {
                return Err(Error::InvalidSpec(
                    "the block feeding the popov nonlinearity must be linear first-order".into(),
                ));
            }
        }
        self.input.validate()?;
        if let Some(w) = &self.weights {
            let expected = self.weight_len();
            if w.len() != expected {
                return Err(Error::DimensionMismatch { expected, actual: w.len() });
            }
            if let Some(&bad) = w.iter().find(|&&x| !(x > T::zero())) {
                return Err(Error::NonPositive { name: "weight", value: bad.f64() });
            }
        }
        Ok(())
    }

    /// Number of weights the composite storage takes: one per block, or one
    /// per block of the composite loop for the Popov topology.
    pub fn weight_len(&self) -> usize {
        match self.topology {
            Topology::Popov => self.blocks.len() - 1,
            _ => self.blocks.len(),
        }
    }

    pub fn dynamic_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.is_dynamic()).count()
    }

    /// Block indices carrying state, in order.
    pub fn dynamic_indices(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&i| self.blocks[i].is_dynamic()).collect()
    }

    pub fn block_gains(&self) -> Vec<T> {
        self.blocks.iter().map(BlockSpec::gamma).collect()
    }

    /// The Popov nonlinearity, when the topology has one.
    pub fn popov_nonlinearity(&self) -> Option<&SectorBlock<T>> {
        match (self.topology, self.blocks.last()) {
            (Topology::Popov, Some(BlockSpec::StaticSector(s))) => Some(s),
            _ => None,
        }
    }

    /// Gains of the cyclic matrix governing the loop: all block gains for a
    /// cyclic loop, the composite `(γ₁, …, κγₙ)` for a Popov loop, `None`
    /// for a cascade.
    pub fn loop_gains(&self) -> Result<Option<GainVector<T>>> {
        match self.topology {
            Topology::Cascade => Ok(None),
            Topology::Cyclic => GainVector::new(self.block_gains()).map(Some),
            Topology::Popov => {
                let psi = self.popov_nonlinearity().ok_or_else(|| {
                    Error::InvalidSpec("popov loop must end with a sector block".into())
                })?;
                let head = self.block_gains()[..self.blocks.len() - 1].to_vec();
                popov_gains(&GainVector::new(head)?, psi.sector_bound()).map(Some)
            }
        }
    }

    /// Explicit weights, else the diagonal certificate of the loop, else ones.
    pub fn resolved_weights(&self) -> Vec<T> {
        if let Some(w) = &self.weights {
            return w.clone();
        }
        let n = self.weight_len();
        match self.loop_gains() {
            Ok(Some(g)) => build_certificate(&g, T::lit(DEFAULT_TOLERANCE))
                .map(|c| c.d)
                .unwrap_or_else(|_| vec![T::one(); n]),
            _ => vec![T::one(); n],
        }
    }

    /// Block inputs and outputs at time `t` for dynamic states `x`.
    pub fn signals(&self, t: T, x: &[T]) -> (Vec<T>, Vec<T>) {
        let n = self.blocks.len();
        let mut y = vec![T::zero(); n];
        let mut u = vec![T::zero(); n];
        let mut s = 0;
        let mut first_dynamic = None;
        for (i, b) in self.blocks.iter().enumerate() {
            if b.is_dynamic() {
                y[i] = x[s];
                s += 1;
                first_dynamic.get_or_insert(i);
            }
        }
        let ext = self.input.eval(t);
        let start = match self.topology {
            Topology::Cascade => n - 1,
            // Walk the ring starting right after a dynamic block so every
            // static block sees an already-known input.
            _ => first_dynamic.expect("validated loop has a dynamic block"),
        };
        for k in 1..=n {
            let i = (start + k) % n;
            u[i] = if i == 0 {
                match self.topology {
                    Topology::Cascade => ext,
                    _ => ext - y[n - 1],
                }
            } else {
                y[i - 1]
            };
            if let BlockSpec::StaticSector(sb) = &self.blocks[i] {
                y[i] = sb.eval(u[i]);
            }
        }
        (u, y)
    }

    /// Right-hand side of the state equation.
    pub fn vector_field(&self, t: T, x: &[T]) -> Vec<T> {
        let (u, _) = self.signals(t, x);
        self.blocks
            .iter()
            .zip(&u)
            .filter(|(b, _)| b.is_dynamic())
            .zip(x)
            .map(|((b, &ui), &xi)| b.derivative(xi, ui))
            .collect()
    }
}
