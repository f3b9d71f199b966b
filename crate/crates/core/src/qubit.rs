//! The zero-temperature, at-most-one-photon reduction of the channel:
//! amplitude damping, its Choi state, and the Wootters concurrence.
//!
//! Two-qubit matrices use the basis ordering `|q_A q_S>` with the ancilla
//! as the first factor; the `c = 1` Choi state is then the Bell projector
//! on `(|01> + |10>)/sqrt(2)`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cabs, cabs2, real, Scalar};
use crate::tol;

pub type Mat2<T> = Matrix2<Complex<T>>;
pub type Mat4<T> = Matrix4<Complex<T>>;

fn check_coefficient<T: Scalar>(c: Complex<T>) -> Result<()> {
    if cabs(c) > T::one() + real(tol::ALGEBRAIC) {
        return Err(Error::InvalidParams(format!(
            "|c| = {:?} exceeds 1: not a physical damping coefficient",
            cabs(c)
        )));
    }
    Ok(())
}

fn check_density<T: Scalar, const N: usize>(rho: &nalgebra::SMatrix<Complex<T>, N, N>) -> Result<()> {
    let herm_defect = (rho - rho.adjoint()).iter().map(|z| cabs(*z)).fold(T::zero(), T::max);
    if herm_defect > real(tol::ALGEBRAIC) {
        return Err(Error::InvalidState(format!(
            "density matrix not Hermitian (defect {herm_defect:?})"
        )));
    }
    let trace: Complex<T> = rho.trace();
    if (trace - Complex::new(T::one(), T::zero())).norm_sqr() > real::<T>(tol::ALGEBRAIC * tol::ALGEBRAIC) {
        return Err(Error::InvalidState("density matrix trace is not 1".into()));
    }
    let eig = SymmetricEigen::new(nalgebra::DMatrix::from_fn(N, N, |i, j| rho[(i, j)]));
    let min = eig.eigenvalues.iter().cloned().fold(T::one(), T::min);
    if min < -real::<T>(tol::UNCERTAINTY) {
        return Err(Error::InvalidState(format!(
            "density matrix has negative eigenvalue {min:?}"
        )));
    }
    Ok(())
}

/// Kraus operators of the amplitude-damping channel with coefficient `c`:
/// `E0 = diag(1, c)`, `E1 = [[0, sqrt(1 - |c|^2)], [0, 0]]`.
pub fn kraus_operators<T: Scalar>(c: Complex<T>) -> Result<(Mat2<T>, Mat2<T>)> {
    check_coefficient(c)?;
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let loss = Complex::new((T::one() - cabs2(c)).max(T::zero()).sqrt(), T::zero());
    let e0 = Mat2::new(one, zero, zero, c);
    let e1 = Mat2::new(zero, loss, zero, zero);
    Ok((e0, e1))
}

/// `rho -> E0 rho E0^dag + E1 rho E1^dag`.
pub fn apply_amplitude_damping<T: Scalar>(rho: &Mat2<T>, c: Complex<T>) -> Result<Mat2<T>> {
    check_density(rho)?;
    let (e0, e1) = kraus_operators(c)?;
    Ok(e0 * rho * e0.adjoint() + e1 * rho * e1.adjoint())
}

/// Choi state of the amplitude-damping channel,
/// `(1/2) [[1-|c|^2, 0, 0, 0], [0, |c|^2, c*, 0], [0, c, 1, 0], [0, 0, 0, 0]]`.
pub fn choi_state<T: Scalar>(c: Complex<T>) -> Result<Mat4<T>> {
    check_coefficient(c)?;
    let half = real::<T>(0.5);
    let zero = Complex::new(T::zero(), T::zero());
    let re = |x: T| Complex::new(x, T::zero());
    let mut rho = Mat4::from_element(zero);
    rho[(0, 0)] = re(half * (T::one() - cabs2(c)));
    rho[(1, 1)] = re(half * cabs2(c));
    rho[(1, 2)] = c.conj() * half;
    rho[(2, 1)] = c * half;
    rho[(2, 2)] = re(half);
    Ok(rho)
}

/// Hermitian square root by eigendecomposition, clamping small negative
/// eigenvalues from rounding.
fn sqrt_hermitian<T: Scalar>(m: &Mat4<T>) -> Mat4<T> {
    let eig = SymmetricEigen::new(*m);
    let mut d = Mat4::from_element(Complex::new(T::zero(), T::zero()));
    for i in 0..4 {
        d[(i, i)] = Complex::new(eig.eigenvalues[i].max(T::zero()).sqrt(), T::zero());
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Wootters concurrence of a two-qubit state.
///
/// The Wootters roots are obtained as the singular values of
/// `B = sqrt(rho) (sy x sy) conj(sqrt(rho))`: `B B^dag` is similar to
/// `rho rho~` with `rho~ = (sy x sy) conj(rho) (sy x sy)`, and reading the
/// roots off an SVD instead of square-rooting eigenvalues keeps full
/// precision on the zero modes.
pub fn concurrence<T: Scalar>(rho: &Mat4<T>) -> Result<T> {
    check_density(rho)?;
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    // sy (x) sy is real: antidiagonal (-1, 1, 1, -1)
    let mut yy = Mat4::from_element(zero);
    yy[(0, 3)] = -one;
    yy[(1, 2)] = one;
    yy[(2, 1)] = one;
    yy[(3, 0)] = -one;
    let sr = sqrt_hermitian(rho);
    let b = sr * yy * sr.conjugate();
    let svd = b.svd(false, false);
    let mut roots: Vec<T> = svd.singular_values.iter().cloned().collect();
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.max(T::zero()))
}
