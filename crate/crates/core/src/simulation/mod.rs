//! Fixed-step simulation of cyclic, cascade and Popov interconnections with
//! storage-function monitoring.

pub mod block;
pub mod diff;
pub mod ifp;
pub mod integrate;
pub mod lyapunov;
pub mod quadrature;
pub mod spec;
pub mod trajectory;

pub use block::{BlockSpec, SectorBlock, SectorShape};
pub use ifp::{ifp_check, ifp_experiment, linear_cascade, IfpExperiment};
pub use lyapunov::{
    dissipation_monitor, lyapunov_trace, popov_lyapunov_trace, popov_storage, BlockDissipation,
    LyapunovTrace,
};
pub use spec::{ExternalInput, InterconnectionSpec, Topology};
pub use trajectory::{simulate, Trajectory};
