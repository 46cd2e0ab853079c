//! Physical model of two coupled, independently driven, dissipative qubits.
//!
//! The joint density matrix is parameterized by the 15 real coefficients of
//! its Pauli ⊗ Pauli expansion (the Bloch tensor); the identity ⊗ identity
//! coefficient is the normalization and is fixed at 1, never stored. The
//! equations of motion are the coherent commutator dynamics of the
//! σx–σx-coupled two-qubit Hamiltonian plus phenomenological dephasing and
//! relaxation, hand-written per component for speed in the integrator's
//! inner loop. The dense-matrix cross-check lives in [`crate::oracle`].

use nalgebra::{Complex, Matrix2, Matrix4};
use thiserror::Error;

use crate::pauli;

type C64 = Complex<f64>;

/// Slack allowed on the physical range [-1, 1] of tensor components before a
/// trajectory is considered suspect. Diagnostic only: the phenomenological
/// damping is not guaranteed completely positive and explicit integrators
/// drift, so violations are reported, never fatal.
pub const PHYSICALITY_SLACK: f64 = 1e-3;

/// Parameter validation failure.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid parameter {name} = {value}: {reason}")]
pub struct ModelError {
    pub name: &'static str,
    pub value: f64,
    pub reason: &'static str,
}

fn check_finite(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ModelError { name, value, reason: "must be finite" })
    }
}

fn check_rate(name: &'static str, value: f64) -> Result<(), ModelError> {
    check_finite(name, value)?;
    if value < 0.0 {
        return Err(ModelError { name, value, reason: "rates must be non-negative" });
    }
    Ok(())
}

fn check_equilibrium(name: &'static str, value: f64) -> Result<(), ModelError> {
    check_finite(name, value)?;
    if !(-1.0..=1.0).contains(&value) {
        return Err(ModelError { name, value, reason: "equilibrium z-value must lie in [-1, 1]" });
    }
    Ok(())
}

/// Static parameters of the coupled-qubit system, in units with ħ = 1.
///
/// Energies (`delta*`, `g`) and rates (`gamma_*`) are dimensionless; the
/// tunneling splitting sets the energy scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Tunneling splitting of qubit 1.
    pub delta1: f64,
    /// Tunneling splitting of qubit 2.
    pub delta2: f64,
    /// σx–σx coupling strength.
    pub g: f64,
    /// Dephasing rate of qubit 1.
    pub gamma_phi1: f64,
    /// Dephasing rate of qubit 2.
    pub gamma_phi2: f64,
    /// Relaxation rate of qubit 1.
    pub gamma_r1: f64,
    /// Relaxation rate of qubit 2.
    pub gamma_r2: f64,
    /// Equilibrium z-component of qubit 1.
    pub z_t1: f64,
    /// Equilibrium z-component of qubit 2.
    pub z_t2: f64,
}

impl SystemParams {
    /// Two identical qubits with a common dephasing/relaxation rate and
    /// equilibrium z-value, the configuration used throughout the presets.
    pub fn symmetric(delta: f64, g: f64, gamma_phi: f64, gamma_r: f64, z_t: f64) -> Self {
        Self {
            delta1: delta,
            delta2: delta,
            g,
            gamma_phi1: gamma_phi,
            gamma_phi2: gamma_phi,
            gamma_r1: gamma_r,
            gamma_r2: gamma_r,
            z_t1: z_t,
            z_t2: z_t,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        check_finite("delta1", self.delta1)?;
        check_finite("delta2", self.delta2)?;
        check_finite("g", self.g)?;
        check_rate("gamma_phi1", self.gamma_phi1)?;
        check_rate("gamma_phi2", self.gamma_phi2)?;
        check_rate("gamma_r1", self.gamma_r1)?;
        check_rate("gamma_r2", self.gamma_r2)?;
        check_equilibrium("z_t1", self.z_t1)?;
        check_equilibrium("z_t2", self.z_t2)?;
        Ok(())
    }
}

/// Bi-harmonic drive: qubit 1 sees `a1 sin(omega1 t)`, qubit 2 sees
/// `a2 sin(omega2 t + phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiHarmonicDrive {
    pub a1: f64,
    pub a2: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Relative phase of the second drive, radians.
    pub phi: f64,
}

impl BiHarmonicDrive {
    pub fn validate(&self) -> Result<(), ModelError> {
        check_finite("a1", self.a1)?;
        check_finite("a2", self.a2)?;
        check_finite("phi", self.phi)?;
        for (name, omega) in [("omega1", self.omega1), ("omega2", self.omega2)] {
            check_finite(name, omega)?;
            if omega <= 0.0 {
                return Err(ModelError { name, value: omega, reason: "drive frequency must be positive" });
            }
        }
        Ok(())
    }

    /// Instantaneous bias pair `(eps1, eps2)` at time `t`.
    #[inline]
    pub fn values(&self, t: f64) -> (f64, f64) {
        (
            self.a1 * (self.omega1 * t).sin(),
            self.a2 * (self.omega2 * t + self.phi).sin(),
        )
    }
}

/// Pauli index on one qubit: identity or one of the three axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::I, Axis::X, Axis::Y, Axis::Z];
}

/// Single-qubit Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// The 15 stored coefficients Π_ab of the two-qubit density matrix in the
/// Pauli ⊗ Pauli basis. The first index belongs to the first tensor factor
/// (qubit 1), the second to qubit 2; `o` denotes the identity slot, so e.g.
/// `ox` is the coefficient of I ⊗ σx. The (identity, identity) coefficient
/// is 1 by normalization and is not part of the state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochTensor {
    pub ox: f64,
    pub oy: f64,
    pub oz: f64,
    pub xo: f64,
    pub xx: f64,
    pub xy: f64,
    pub xz: f64,
    pub yo: f64,
    pub yx: f64,
    pub yy: f64,
    pub yz: f64,
    pub zo: f64,
    pub zx: f64,
    pub zy: f64,
    pub zz: f64,
}

/// Canonical component order used by [`BlochTensor::to_array`]: row-major in
/// (first index, second index) over {o, x, y, z} × {o, x, y, z}, with the
/// (o, o) slot skipped.
pub const COMPONENT_NAMES: [&str; 15] = [
    "pi_0x", "pi_0y", "pi_0z", "pi_x0", "pi_xx", "pi_xy", "pi_xz", "pi_y0", "pi_yx", "pi_yy",
    "pi_yz", "pi_z0", "pi_zx", "pi_zy", "pi_zz",
];

impl BlochTensor {
    pub const ZERO: Self = Self {
        ox: 0.0,
        oy: 0.0,
        oz: 0.0,
        xo: 0.0,
        xx: 0.0,
        xy: 0.0,
        xz: 0.0,
        yo: 0.0,
        yx: 0.0,
        yy: 0.0,
        yz: 0.0,
        zo: 0.0,
        zx: 0.0,
        zy: 0.0,
        zz: 0.0,
    };

    #[inline]
    pub fn to_array(self) -> [f64; 15] {
        [
            self.ox, self.oy, self.oz, self.xo, self.xx, self.xy, self.xz, self.yo, self.yx,
            self.yy, self.yz, self.zo, self.zx, self.zy, self.zz,
        ]
    }

    #[inline]
    pub fn from_array(c: [f64; 15]) -> Self {
        Self {
            ox: c[0],
            oy: c[1],
            oz: c[2],
            xo: c[3],
            xx: c[4],
            xy: c[5],
            xz: c[6],
            yo: c[7],
            yx: c[8],
            yy: c[9],
            yz: c[10],
            zo: c[11],
            zx: c[12],
            zy: c[13],
            zz: c[14],
        }
    }

    /// Component by Pauli index pair; `(I, I)` is the constant 1.
    pub fn component(&self, a: Axis, b: Axis) -> f64 {
        use Axis::*;
        match (a, b) {
            (I, I) => 1.0,
            (I, X) => self.ox,
            (I, Y) => self.oy,
            (I, Z) => self.oz,
            (X, I) => self.xo,
            (X, X) => self.xx,
            (X, Y) => self.xy,
            (X, Z) => self.xz,
            (Y, I) => self.yo,
            (Y, X) => self.yx,
            (Y, Y) => self.yy,
            (Y, Z) => self.yz,
            (Z, I) => self.zo,
            (Z, X) => self.zx,
            (Z, Y) => self.zy,
            (Z, Z) => self.zz,
        }
    }

    /// Tensor with the two qubit indices exchanged (Π_ab ↦ Π_ba).
    pub fn transposed(&self) -> Self {
        Self {
            ox: self.xo,
            oy: self.yo,
            oz: self.zo,
            xo: self.ox,
            xx: self.xx,
            xy: self.yx,
            xz: self.zx,
            yo: self.oy,
            yx: self.xy,
            yy: self.yy,
            yz: self.zy,
            zo: self.oz,
            zx: self.xz,
            zy: self.yz,
            zz: self.zz,
        }
    }

    /// Thermal product state: each qubit at its equilibrium z-value, no
    /// transverse components.
    pub fn thermal_product(z_t1: f64, z_t2: f64) -> Self {
        tensor_from_product(
            BlochVector::new(0.0, 0.0, z_t1),
            BlochVector::new(0.0, 0.0, z_t2),
        )
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Largest component magnitude.
    #[inline]
    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// How far the largest component magnitude exceeds the physical bound 1;
    /// zero for states inside the bound. Compare against
    /// [`PHYSICALITY_SLACK`] when deciding whether to warn.
    #[inline]
    pub fn physicality_violation(&self) -> f64 {
        (self.max_abs() - 1.0).max(0.0)
    }

    /// `self + k * d`, component-wise.
    #[inline]
    pub fn scaled_add(&self, k: f64, d: &Self) -> Self {
        let a = self.to_array();
        let b = d.to_array();
        Self::from_array(std::array::from_fn(|i| a[i] + k * b[i]))
    }

    /// `self + k * (d1 + d2)`, component-wise.
    #[inline]
    pub fn scaled_add2(&self, k: f64, d1: &Self, d2: &Self) -> Self {
        let a = self.to_array();
        let b = d1.to_array();
        let c = d2.to_array();
        Self::from_array(std::array::from_fn(|i| a[i] + k * (b[i] + c[i])))
    }
}

/// Time derivative of the Bloch tensor under the coupled-qubit master
/// equation with bi-harmonic driving, dephasing, and relaxation toward the
/// equilibrium z-values. Pure function of its arguments.
///
/// Qubit 1 quantities (delta1, eps1, gamma_*1) act on the first index,
/// qubit 2 quantities on the second.
#[inline]
pub fn rhs(t: f64, s: &BlochTensor, p: &SystemParams, drive: &BiHarmonicDrive) -> BlochTensor {
    let (e1, e2) = drive.values(t);
    let g2 = 2.0 * p.g;
    let gp12 = p.gamma_phi1 + p.gamma_phi2;
    BlochTensor {
        ox: p.delta2 * s.oy - p.gamma_phi2 * s.ox,
        oy: -p.delta2 * s.ox + e2 * s.oz - g2 * s.xz - p.gamma_phi2 * s.oy,
        oz: -e2 * s.oy + g2 * s.xy - p.gamma_r2 * (s.oz - p.z_t2),
        xo: p.delta1 * s.yo - p.gamma_phi1 * s.xo,
        yo: -p.delta1 * s.xo + e1 * s.zo - g2 * s.zx - p.gamma_phi1 * s.yo,
        zo: -e1 * s.yo + g2 * s.yx - p.gamma_r1 * (s.zo - p.z_t1),
        xx: p.delta2 * s.xy + p.delta1 * s.yx - gp12 * s.xx,
        xy: -g2 * s.oz - p.delta2 * s.xx + p.delta1 * s.yy + e2 * s.xz - gp12 * s.xy,
        yx: -g2 * s.zo - p.delta1 * s.xx + p.delta2 * s.yy + e1 * s.zx - gp12 * s.yx,
        xz: g2 * s.oy - e2 * s.xy + p.delta1 * s.yz - (p.gamma_phi1 + p.gamma_r2) * s.xz,
        zx: g2 * s.yo - e1 * s.yx + p.delta2 * s.zy - (p.gamma_phi2 + p.gamma_r1) * s.zx,
        yy: -p.delta1 * s.xy - p.delta2 * s.yx + e2 * s.yz + e1 * s.zy - gp12 * s.yy,
        yz: -p.delta1 * s.xz - e2 * s.yy + e1 * s.zz - (p.gamma_phi1 + p.gamma_r2) * s.yz,
        zy: -p.delta2 * s.zx - e1 * s.yy + e2 * s.zz - (p.gamma_r1 + p.gamma_phi2) * s.zy,
        zz: -e1 * s.yz - e2 * s.zy - (p.gamma_r1 + p.gamma_r2) * (s.zz - p.z_t1 * p.z_t2),
    }
}

/// Dense 4×4 density matrix for a Bloch tensor:
/// ρ = (1/4) Σ_ab Π_ab σ¹_a ⊗ σ²_b, with the (I, I) coefficient fixed at 1.
/// Basis order is |+z,+z⟩, |+z,−z⟩, |−z,+z⟩, |−z,−z⟩ (qubit 1 major).
pub fn reconstruct_density_matrix(state: &BlochTensor) -> Matrix4<C64> {
    let mut rho = Matrix4::zeros();
    for a in Axis::ALL {
        for b in Axis::ALL {
            let coeff = state.component(a, b);
            if coeff != 0.0 {
                rho += pauli::kron(&pauli::sigma(a), &pauli::sigma(b)) * C64::new(0.25 * coeff, 0.0);
            }
        }
    }
    rho
}

/// Bloch tensor of the product state ρ₁ ⊗ ρ₂ with the given single-qubit
/// Bloch vectors (qubit 1 first).
pub fn tensor_from_product(q1: BlochVector, q2: BlochVector) -> BlochTensor {
    BlochTensor {
        ox: q2.x,
        oy: q2.y,
        oz: q2.z,
        xo: q1.x,
        yo: q1.y,
        zo: q1.z,
        xx: q1.x * q2.x,
        xy: q1.x * q2.y,
        xz: q1.x * q2.z,
        yx: q1.y * q2.x,
        yy: q1.y * q2.y,
        yz: q1.y * q2.z,
        zx: q1.z * q2.x,
        zy: q1.z * q2.y,
        zz: q1.z * q2.z,
    }
}

/// Energy level selector for [`occupation_probability`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Upper,
    Lower,
}

/// Occupation probability of one qubit level given its Bloch z-component:
/// (1 − z)/2 for the upper level, (1 + z)/2 for the lower. Values of `z`
/// slightly outside [-1, 1] are clamped so the result is a probability;
/// the size of any excursion is reported separately by the physicality
/// diagnostics.
pub fn occupation_probability(z: f64, level: Level) -> f64 {
    let p = match level {
        Level::Upper => 0.5 * (1.0 - z),
        Level::Lower => 0.5 * (1.0 + z),
    };
    p.clamp(0.0, 1.0)
}

/// Convenience: 2×2 single-qubit density matrix of a Bloch vector,
/// ½ (I + x σx + y σy + z σz).
pub fn single_qubit_density(q: BlochVector) -> Matrix2<C64> {
    let mut rho = Matrix2::identity() * C64::new(0.5, 0.0);
    rho += pauli::sigma(Axis::X) * C64::new(0.5 * q.x, 0.0);
    rho += pauli::sigma(Axis::Y) * C64::new(0.5 * q.y, 0.0);
    rho += pauli::sigma(Axis::Z) * C64::new(0.5 * q.z, 0.0);
    rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig1_params() -> SystemParams {
        SystemParams::symmetric(1.0, 1.0, 1e-3, 1e-3, 1.0)
    }

    #[test]
    fn drive_is_zero_at_origin_without_phase() {
        let d = BiHarmonicDrive { a1: 3.0, a2: 7.0, omega1: 1.3, omega2: 2.9, phi: 0.0 };
        assert_eq!(d.values(0.0), (0.0, 0.0));
    }

    #[test]
    fn drive_phase_shifts_second_component_only() {
        let d = BiHarmonicDrive {
            a1: 5.0,
            a2: 10.0,
            omega1: 1.0,
            omega2: 2.0,
            phi: std::f64::consts::FRAC_PI_2,
        };
        let (e1, e2) = d.values(0.0);
        assert_eq!(e1, 0.0);
        assert_relative_eq!(e2, 10.0, max_relative = 1e-15);
    }

    #[test]
    fn drive_matches_high_precision_reference() {
        // sin evaluated at 30 digits and rounded to f64:
        //   10 sin(0.2 * 2 sqrt(2)) = 5.35994592293286
        //   10 sin(0.2 * 4 sqrt(2)) = 9.049962259511465
        let w1 = 2.0 * 2.0_f64.sqrt();
        let d = BiHarmonicDrive { a1: 10.0, a2: 10.0, omega1: w1, omega2: 2.0 * w1, phi: 0.0 };
        let (e1, e2) = d.values(0.2);
        assert_relative_eq!(e1, 5.35994592293286, max_relative = 1e-14);
        assert_relative_eq!(e2, 9.049962259511465, max_relative = 1e-14);
    }

    #[test]
    fn rhs_vanishes_on_zero_state_without_drive_or_damping() {
        let p = SystemParams::symmetric(1.0, 1.0, 0.0, 0.0, 0.0);
        let d = BiHarmonicDrive { a1: 0.0, a2: 0.0, omega1: 1.0, omega2: 1.0, phi: 0.0 };
        let dot = rhs(0.7, &BlochTensor::ZERO, &p, &d);
        assert_eq!(dot, BlochTensor::ZERO);
    }

    #[test]
    fn rhs_on_equilibrium_product_state_only_tilts_xy_and_yx() {
        // From the ground-state product (oz = zo = zz = 1) with unit coupling
        // and no damping or drive, only the coupling terms fire:
        // d(xy)/dt = -2g oz, d(yx)/dt = -2g zo.
        let p = SystemParams::symmetric(1.0, 1.0, 0.0, 0.0, 0.0);
        let d = BiHarmonicDrive { a1: 0.0, a2: 0.0, omega1: 1.0, omega2: 1.0, phi: 0.0 };
        let state = BlochTensor { oz: 1.0, zo: 1.0, zz: 1.0, ..BlochTensor::ZERO };
        let dot = rhs(0.0, &state, &p, &d);
        let expected = BlochTensor { xy: -2.0, yx: -2.0, ..BlochTensor::ZERO };
        assert_eq!(dot, expected);
    }

    #[test]
    fn rhs_damping_pulls_toward_equilibrium() {
        let p = fig1_params();
        let d = BiHarmonicDrive { a1: 0.0, a2: 0.0, omega1: 1.0, omega2: 1.0, phi: 0.0 };
        let dot = rhs(0.0, &BlochTensor::ZERO, &p, &d);
        assert_relative_eq!(dot.oz, 1e-3, max_relative = 1e-15);
        assert_relative_eq!(dot.zo, 1e-3, max_relative = 1e-15);
        assert_relative_eq!(dot.zz, 2e-3, max_relative = 1e-15);
    }

    #[test]
    fn reconstruct_zero_tensor_is_maximally_mixed() {
        let rho = reconstruct_density_matrix(&BlochTensor::ZERO);
        let expected = Matrix4::identity() * C64::new(0.25, 0.0);
        assert_eq!(rho, expected);
    }

    #[test]
    fn reconstruct_joint_ground_state_is_corner_projector() {
        let state = BlochTensor { oz: 1.0, zo: 1.0, zz: 1.0, ..BlochTensor::ZERO };
        let rho = reconstruct_density_matrix(&state);
        let mut expected = Matrix4::zeros();
        expected[(0, 0)] = C64::new(1.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!((rho[(i, j)] - expected[(i, j)]).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn product_tensor_trivial_cases() {
        let mixed = tensor_from_product(BlochVector::default(), BlochVector::default());
        assert_eq!(mixed, BlochTensor::ZERO);

        let up = BlochVector::new(0.0, 0.0, 1.0);
        let t = tensor_from_product(up, up);
        assert_eq!(t, BlochTensor { oz: 1.0, zo: 1.0, zz: 1.0, ..BlochTensor::ZERO });
    }

    #[test]
    fn product_tensor_matches_kronecker_product() {
        let q1 = BlochVector::new(0.36, -0.48, 0.8);
        let q2 = BlochVector::new(-0.6, 0.64, 0.48);
        let t = tensor_from_product(q1, q2);
        let direct = pauli::kron(&single_qubit_density(q1), &single_qubit_density(q2));
        let rebuilt = reconstruct_density_matrix(&t);
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!((direct[(i, j)] - rebuilt[(i, j)]).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn transpose_swaps_index_pairs() {
        let mut c = [0.0; 15];
        for (i, v) in c.iter_mut().enumerate() {
            *v = i as f64 + 1.0;
        }
        let t = BlochTensor::from_array(c);
        let tt = t.transposed();
        for a in Axis::ALL {
            for b in Axis::ALL {
                assert_eq!(t.component(a, b), tt.component(b, a));
            }
        }
        assert_eq!(tt.transposed(), t);
    }

    #[test]
    fn occupation_probabilities() {
        assert_eq!(occupation_probability(1.0, Level::Upper), 0.0);
        assert_eq!(occupation_probability(1.0, Level::Lower), 1.0);
        assert_eq!(occupation_probability(0.0, Level::Upper), 0.5);
        let z = -0.37;
        let sum = occupation_probability(z, Level::Upper) + occupation_probability(z, Level::Lower);
        assert_relative_eq!(sum, 1.0, max_relative = 1e-15);
        // slight excursions clamp to a valid probability
        assert_eq!(occupation_probability(1.0 + 1e-9, Level::Upper), 0.0);
        assert_eq!(occupation_probability(-1.0 - 1e-9, Level::Upper), 1.0);
    }

    #[test]
    fn params_validation_rejects_bad_values() {
        let mut p = fig1_params();
        assert!(p.validate().is_ok());
        p.gamma_r1 = -1e-6;
        assert!(p.validate().is_err());
        p.gamma_r1 = 0.0;
        p.z_t2 = 1.5;
        assert!(p.validate().is_err());
        p.z_t2 = 1.0;
        p.delta1 = f64::NAN;
        assert!(p.validate().is_err());

        let mut d = BiHarmonicDrive { a1: 1.0, a2: 1.0, omega1: 1.0, omega2: 1.0, phi: 0.0 };
        assert!(d.validate().is_ok());
        d.omega2 = 0.0;
        assert!(d.validate().is_err());
        d.omega2 = 1.0;
        d.a1 = f64::INFINITY;
        assert!(d.validate().is_err());
    }

    #[test]
    fn physicality_violation_measures_excess_over_unit_bound() {
        let mut state = BlochTensor::ZERO;
        assert_eq!(state.physicality_violation(), 0.0);
        state.yz = -1.0 - 2e-3;
        assert_relative_eq!(state.physicality_violation(), 2e-3, max_relative = 1e-12);
        assert!(state.physicality_violation() > PHYSICALITY_SLACK);
    }
}
