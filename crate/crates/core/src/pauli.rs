//! Fixed 2×2 Pauli matrices and their two-qubit Kronecker products.

use nalgebra::{Complex, Matrix2, Matrix4};

use crate::model::Axis;

type C64 = Complex<f64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Pauli matrix for one index value, in the σz eigenbasis {+, −}.
pub(crate) fn sigma(axis: Axis) -> Matrix2<C64> {
    match axis {
        Axis::I => Matrix2::new(ONE, ZERO, ZERO, ONE),
        Axis::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => Matrix2::new(ZERO, -I, I, ZERO),
        Axis::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

/// Kronecker product with the first factor on the high-order basis index,
/// so basis states are ordered |q1, q2⟩ = |++⟩, |+−⟩, |−+⟩, |−−⟩.
pub(crate) fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_square_to_identity() {
        for axis in Axis::ALL {
            let s = sigma(axis);
            assert_eq!(s * s, sigma(Axis::I));
        }
    }

    #[test]
    fn pauli_commutator_cycle() {
        // [σx, σy] = 2i σz and cyclic permutations.
        let (sx, sy, sz) = (sigma(Axis::X), sigma(Axis::Y), sigma(Axis::Z));
        assert_eq!(sx * sy - sy * sx, sz * C64::new(0.0, 2.0));
        assert_eq!(sy * sz - sz * sy, sx * C64::new(0.0, 2.0));
        assert_eq!(sz * sx - sx * sz, sy * C64::new(0.0, 2.0));
    }

    #[test]
    fn kron_orders_first_factor_major() {
        let m = kron(&sigma(Axis::Z), &sigma(Axis::I));
        assert_eq!(m[(0, 0)], ONE);
        assert_eq!(m[(1, 1)], ONE);
        assert_eq!(m[(2, 2)], -ONE);
        assert_eq!(m[(3, 3)], -ONE);
    }
}
