//! Simulator for two coupled, independently ac-driven, dissipative qubits.
//!
//! The state is the 15-component Bloch tensor of the joint density matrix;
//! [`model`] holds the parameter types and the hand-coded equations of
//! motion, [`oracle`] the dense-matrix reference they are audited against,
//! [`integrate`] the fixed-step Euler/Heun drivers with compensated
//! long-window averaging, and [`sweep`] the frequency-ratio, phase, and
//! detuning scan harnesses used to map out harmonic-mixing responses.

pub mod integrate;
pub mod model;
pub(crate) mod pauli;
pub mod oracle;
pub mod sweep;

pub use integrate::{
    euler_step, heun_step, run, IntegrateError, IntegratorKind, Observer, RunSummary,
    SimulationConfig, TimeAverager,
};
pub use model::{
    occupation_probability, reconstruct_density_matrix, rhs, tensor_from_product, Axis,
    BiHarmonicDrive, BlochTensor, BlochVector, Level, ModelError, SystemParams,
    PHYSICALITY_SLACK,
};
pub use oracle::{
    commutator_rhs, hamiltonian_matrix, pauli_decompose, propagate_piecewise_constant, DenseState,
    OracleError,
};
pub use sweep::{
    parallel_map, sweep_detuning, sweep_phase, sweep_ratio, SweepError, SweepKind, SweepRecord,
    SweepSpec,
};
