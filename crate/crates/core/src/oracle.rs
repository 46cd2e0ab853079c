//! Dense-matrix reference implementation used to cross-check the hand-coded
//! component equations and the fixed-step integrators.
//!
//! Everything here goes through explicit 4×4 complex matrices: the
//! Hamiltonian is assembled from Kronecker products, the coherent part of
//! the master equation is a literal commutator, and short-time propagation
//! uses the exact unitary of the Hamiltonian frozen at the step midpoint.
//! None of it is performance-sensitive; it exists so that the fast path in
//! [`crate::model`] has an independent route to compare against.

use nalgebra::{Complex, Matrix4, SymmetricEigen};
use thiserror::Error;

use crate::model::{Axis, BiHarmonicDrive, BlochTensor, SystemParams};
use crate::pauli;

type C64 = Complex<f64>;

/// Imaginary residue above this size on any Pauli coefficient means the
/// input was not Hermitian; anything below is rounding noise and dropped.
pub const IMAG_ERROR_THRESHOLD: f64 = 1e-9;

const HERMITICITY_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    /// A Pauli coefficient of the input matrix had an imaginary part too
    /// large to be rounding noise; the matrix is not Hermitian.
    #[error("non-Hermitian input: coefficient {name} has imaginary part {imag:e}")]
    NonHermitianInput { name: &'static str, imag: f64 },
    /// A matrix offered as a density matrix fails its defining invariants.
    #[error("not a density matrix: {reason} (residual {residual:e})")]
    InvalidDensityMatrix { reason: &'static str, residual: f64 },
}

/// A two-qubit density matrix in dense form, basis ordered
/// |+z,+z⟩, |+z,−z⟩, |−z,+z⟩, |−z,−z⟩ (qubit 1 major).
///
/// Construction checks Hermiticity and unit trace; evolution routines keep
/// both up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    rho: Matrix4<C64>,
}

impl DenseState {
    pub fn new(rho: Matrix4<C64>) -> Result<Self, OracleError> {
        let herm = (rho - rho.adjoint()).norm();
        if herm > HERMITICITY_TOL {
            return Err(OracleError::InvalidDensityMatrix {
                reason: "matrix is not Hermitian",
                residual: herm,
            });
        }
        let trace_err = (rho.trace() - C64::new(1.0, 0.0)).norm();
        if trace_err > TRACE_TOL {
            return Err(OracleError::InvalidDensityMatrix {
                reason: "trace differs from one",
                residual: trace_err,
            });
        }
        Ok(Self { rho })
    }

    /// Dense form of a Bloch tensor.
    pub fn from_tensor(state: &BlochTensor) -> Self {
        Self { rho: crate::model::reconstruct_density_matrix(state) }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.rho
    }

    /// trace(ρ²), conserved under unitary evolution.
    pub fn purity(&self) -> f64 {
        (self.rho * self.rho).trace().re
    }
}

/// Dense two-qubit Hamiltonian
/// H = −½ Σ_j [Δ_j σ_z^j + ε_j(t) σ_x^j] + g σ_x¹ σ_x².
/// Hermitian (in fact real symmetric: no σy term appears) for all inputs.
pub fn hamiltonian_matrix(t: f64, params: &SystemParams, drive: &BiHarmonicDrive) -> Matrix4<C64> {
    let (e1, e2) = drive.values(t);
    let id = pauli::sigma(Axis::I);
    let sx = pauli::sigma(Axis::X);
    let sz = pauli::sigma(Axis::Z);

    let mut h = Matrix4::zeros();
    h += pauli::kron(&sz, &id) * C64::new(-0.5 * params.delta1, 0.0);
    h += pauli::kron(&sx, &id) * C64::new(-0.5 * e1, 0.0);
    h += pauli::kron(&id, &sz) * C64::new(-0.5 * params.delta2, 0.0);
    h += pauli::kron(&id, &sx) * C64::new(-0.5 * e2, 0.0);
    h += pauli::kron(&sx, &sx) * C64::new(params.g, 0.0);
    h
}

/// Coherent part of the master equation, −i[H(t), ρ]. The result is
/// traceless and Hermitian.
pub fn commutator_rhs(
    t: f64,
    state: &DenseState,
    params: &SystemParams,
    drive: &BiHarmonicDrive,
) -> Matrix4<C64> {
    let h = hamiltonian_matrix(t, params, drive);
    (h * state.rho - state.rho * h) * C64::new(0.0, -1.0)
}

/// Projection of a Hermitian 4×4 matrix onto the Pauli ⊗ Pauli basis:
/// Π_ab = trace(m · σ¹_a ⊗ σ²_b). Returns the (I, I) coefficient (the trace
/// of `m`) alongside the 15 tensor components.
///
/// Imaginary parts above [`IMAG_ERROR_THRESHOLD`] report the input as
/// corrupted; smaller residues are rounding noise and are discarded.
pub fn pauli_decompose(m: &Matrix4<C64>) -> Result<(f64, BlochTensor), OracleError> {
    let mut pi00 = 0.0;
    let mut components = [0.0; 15];
    let mut idx = 0;
    for a in Axis::ALL {
        for b in Axis::ALL {
            let op = pauli::kron(&pauli::sigma(a), &pauli::sigma(b));
            // trace(m · op), written out to avoid a full matrix product
            let mut coeff = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    coeff += m[(i, j)] * op[(j, i)];
                }
            }
            if coeff.im.abs() > IMAG_ERROR_THRESHOLD {
                let name = component_name(a, b);
                return Err(OracleError::NonHermitianInput { name, imag: coeff.im });
            }
            if (a, b) == (Axis::I, Axis::I) {
                pi00 = coeff.re;
            } else {
                components[idx] = coeff.re;
                idx += 1;
            }
        }
    }
    Ok((pi00, BlochTensor::from_array(components)))
}

fn component_name(a: Axis, b: Axis) -> &'static str {
    const NAMES: [[&str; 4]; 4] = [
        ["pi_00", "pi_0x", "pi_0y", "pi_0z"],
        ["pi_x0", "pi_xx", "pi_xy", "pi_xz"],
        ["pi_y0", "pi_yx", "pi_yy", "pi_yz"],
        ["pi_z0", "pi_zx", "pi_zy", "pi_zz"],
    ];
    let i = |ax: Axis| Axis::ALL.iter().position(|&v| v == ax).unwrap();
    NAMES[i(a)][i(b)]
}

/// One step of the reference propagator: ρ(t0 + dt) = U ρ U† with
/// U = exp(−i H(t0 + dt/2) dt), the Hamiltonian frozen at the midpoint.
/// Coherent evolution only; valid as a comparison for undamped runs.
///
/// The Hamiltonian of this model is real symmetric, so U comes from a real
/// eigendecomposition and the evolution is unitary to rounding for any dt.
pub fn propagate_piecewise_constant(
    state: &DenseState,
    params: &SystemParams,
    drive: &BiHarmonicDrive,
    t0: f64,
    dt: f64,
) -> DenseState {
    let h = hamiltonian_matrix(t0 + 0.5 * dt, params, drive);
    let h_re = h.map(|c| c.re);
    debug_assert!(h.map(|c| c.im).norm() < 1e-14, "model Hamiltonian must be real");

    let eig = SymmetricEigen::new(h_re);
    // U = Q diag(exp(-i λ dt)) Qᵀ
    let q = eig.eigenvectors.map(|x| C64::new(x, 0.0));
    let mut phases = Matrix4::zeros();
    for k in 0..4 {
        let theta = -eig.eigenvalues[k] * dt;
        phases[(k, k)] = C64::new(theta.cos(), theta.sin());
    }
    let u = q * phases * q.adjoint();
    DenseState { rho: u * state.rho * u.adjoint() }
}
