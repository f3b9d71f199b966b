//! Beam-splitter scattering matrices and the channel coefficient `c_L`.
//!
//! Each collision step `j` is a unitary `(L+2) x (L+2)` scattering matrix
//! acting on the mode vector `(S, 0, 1, ..., L)`; the full channel is the
//! ordered product of the step matrices and `c_L` is its `(S,S)` element.
//! Because the environmental modes beyond mode 0 only ever feed forward,
//! `c_L` also equals the `(0,0)` element of the `L`-th power of a reduced
//! `2x2` matrix, which gives both a closed form through its eigenvalues and
//! a cheap `O(L)` matrix-power route. The routes cross-validate each other.

use nalgebra::{ComplexField, DMatrix, Matrix2};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cabs, cis, cpow, real, Scalar};
use crate::tol;

/// Rectangular complex matrix storage. Equality is always tolerance-based;
/// see [`max_abs_diff`].
pub type ComplexMatrix<T> = DMatrix<Complex<T>>;

/// The four physical knobs of the channel family.
///
/// `r1` is the system-environment reflectivity, `r2` the intra-environment
/// (memory) reflectivity, `phi` the phase accumulated between collisions,
/// `n_t` the mean thermal photon number of each environmental mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams<T> {
    pub r1: T,
    pub r2: T,
    pub phi: T,
    pub n_t: T,
}

impl<T: Scalar> ChannelParams<T> {
    /// Validates ranges (`r1`, `r2` in `[0,1]`, `n_t >= 0`) and wraps `phi`
    /// into `[0, 2pi)`.
    pub fn new(r1: T, r2: T, phi: T, n_t: T) -> Result<Self> {
        for (name, v) in [("r1", r1), ("r2", r2), ("phi", phi), ("n_t", n_t)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        if r1 < T::zero() || r1 > T::one() {
            return Err(Error::InvalidParams("r1 must lie in [0, 1]".into()));
        }
        if r2 < T::zero() || r2 > T::one() {
            return Err(Error::InvalidParams("r2 must lie in [0, 1]".into()));
        }
        if n_t < T::zero() {
            return Err(Error::InvalidParams("n_t must be non-negative".into()));
        }
        let tau = T::two_pi();
        let mut phi = phi - (phi / tau).floor() * tau;
        if phi >= tau {
            phi = T::zero();
        }
        Ok(Self { r1, r2, phi, n_t })
    }

    /// Transmissivity of BS1, `t1 = sqrt(1 - r1^2)`.
    pub fn t1(&self) -> T {
        (T::one() - self.r1 * self.r1).max(T::zero()).sqrt()
    }

    /// Transmissivity of BS2, `t2 = sqrt(1 - r2^2)`.
    pub fn t2(&self) -> T {
        (T::one() - self.r2 * self.r2).max(T::zero()).sqrt()
    }
}

/// The complex sequence `c_0, c_1, ..., c_Lmax` that fully determines the
/// channel at every step. `c_0 = 1` exactly and `|c_L| <= 1` always.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries<T> {
    pub params: ChannelParams<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> CoefficientSeries<T> {
    /// Largest step index, `L_max`.
    pub fn horizon(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// `|c_L|` for every step.
    pub fn magnitudes(&self) -> Vec<T> {
        self.values.iter().map(|c| cabs(*c)).collect()
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    let mut m = T::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        m = m.max(cabs(*x - *y));
    }
    m
}

/// Deviation from unitarity, `max |(S^dagger S - I)_ij|`.
pub fn unitarity_defect<T: Scalar>(s: &ComplexMatrix<T>) -> T {
    let prod = s.adjoint() * s;
    let id = ComplexMatrix::<T>::identity(s.nrows(), s.ncols());
    max_abs_diff(&prod, &id)
}

/// Scattering matrix of the `j`-th collision step in an `L`-step channel.
///
/// Modes are ordered `(S, 0, 1, ..., L)`. The step couples modes `S`, `0`
/// and `j`; every other mode passes through untouched.
pub fn build_step_matrix<T: Scalar>(
    j: usize,
    l: usize,
    params: &ChannelParams<T>,
) -> Result<ComplexMatrix<T>> {
    if j < 1 || j > l {
        return Err(Error::IndexOutOfRange(format!(
            "step index j = {j} must satisfy 1 <= j <= L = {l}"
        )));
    }
    let dim = l + 2;
    let (r1, r2) = (params.r1, params.r2);
    let (t1, t2) = (params.t1(), params.t2());
    let eip = cis(params.phi);
    let re = |x: T| Complex::new(x, T::zero());

    let mut m = ComplexMatrix::<T>::identity(dim, dim);
    let jj = j + 1; // matrix index of environmental mode j
    m[(0, 0)] = eip * r1;
    m[(0, 1)] = eip * t1;
    m[(1, 0)] = re(t1 * r2);
    m[(1, 1)] = re(-r1 * r2);
    m[(1, jj)] = re(t2);
    m[(jj, 0)] = re(t1 * t2);
    m[(jj, 1)] = re(-r1 * t2);
    m[(jj, jj)] = re(-r2);
    Ok(m)
}

/// Ordered product of the `L` step matrices (step 1 acts first).
pub fn build_full_scattering<T: Scalar>(
    l: usize,
    params: &ChannelParams<T>,
) -> Result<ComplexMatrix<T>> {
    if l < 1 {
        return Err(Error::IndexOutOfRange("L must be at least 1".into()));
    }
    let mut acc = build_step_matrix(1, l, params)?;
    for j in 2..=l {
        acc = build_step_matrix(j, l, params)? * acc;
    }
    Ok(acc)
}

/// Reduced `2x2` scattering matrix for the `(S, 0)` mode pair.
pub fn reduced_step_matrix<T: Scalar>(params: &ChannelParams<T>) -> Matrix2<Complex<T>> {
    let (r1, r2) = (params.r1, params.r2);
    let t1 = params.t1();
    let eip = cis(params.phi);
    Matrix2::new(
        eip * r1,
        eip * t1,
        Complex::new(t1 * r2, T::zero()),
        Complex::new(-r1 * r2, T::zero()),
    )
}

/// Eigenvalue pair of the reduced step matrix.
#[derive(Debug, Clone, Copy)]
pub struct ReducedEigen<T> {
    pub plus: Complex<T>,
    pub minus: Complex<T>,
}

impl<T: Scalar> ReducedEigen<T> {
    /// Whether the spectrum is too close to degenerate for the closed-form
    /// coefficient; callers should fall back to [`c_series`].
    pub fn is_degenerate(&self) -> bool {
        cabs(self.plus - self.minus) < real(tol::DEGENERACY)
    }
}

/// Eigenvalues of the reduced step matrix,
/// `lambda_pm = [(r1 e^{i phi} - r1 r2) pm sqrt((r1 e^{i phi} - r1 r2)^2 + 4 r2 e^{i phi})] / 2`,
/// with the principal branch of the square root. The closed-form coefficient
/// is symmetric under exchanging the branch, so any consistent choice gives
/// the same `c_L`.
pub fn eigen_reduced<T: Scalar>(params: &ChannelParams<T>) -> ReducedEigen<T> {
    let eip = cis(params.phi);
    let a = eip * params.r1 - Complex::new(params.r1 * params.r2, T::zero());
    let disc = a * a + eip * (real::<T>(4.0) * params.r2);
    let s = ComplexField::sqrt(disc);
    let half = Complex::new(real::<T>(0.5), T::zero());
    ReducedEigen {
        plus: (a + s) * half,
        minus: (a - s) * half,
    }
}

/// Closed-form channel coefficient,
/// `c_L = [(l+^L - l-^L) r1 e^{i phi} + l+ l-^L - l+^L l-] / (l+ - l-)`.
///
/// Refuses nearly degenerate spectra, for which the Jordan-block form would
/// be needed; use [`c_series`] there.
pub fn c_closed_form<T: Scalar>(l: usize, params: &ChannelParams<T>) -> Result<Complex<T>> {
    let eig = eigen_reduced(params);
    if eig.is_degenerate() {
        return Err(Error::DegenerateSpectrum);
    }
    let (lp, lm) = (eig.plus, eig.minus);
    let lp_l = cpow(lp, l);
    let lm_l = cpow(lm, l);
    let head = cis(params.phi) * params.r1;
    let num = (lp_l - lm_l) * head + lp * lm_l - lp_l * lm;
    Ok(num / (lp - lm))
}

/// Channel coefficients for `L = 0..=l_max` by iterated `2x2` multiplication,
/// `c_L = (S_r^L)_{00}`. Robust for any spectrum.
pub fn c_series<T: Scalar>(l_max: usize, params: &ChannelParams<T>) -> CoefficientSeries<T> {
    let step = reduced_step_matrix(params);
    let mut acc = Matrix2::<Complex<T>>::identity();
    let mut values = Vec::with_capacity(l_max + 1);
    values.push(Complex::new(T::one(), T::zero()));
    for _ in 1..=l_max {
        acc = step * acc;
        values.push(acc[(0, 0)]);
    }
    CoefficientSeries {
        params: *params,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type P = ChannelParams<f64>;

    fn params(r1: f64, r2: f64, phi: f64) -> P {
        P::new(r1, r2, phi, 0.0).unwrap()
    }

    fn random_params(rng: &mut impl Rng) -> P {
        params(
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )
    }

    #[test]
    fn rejects_bad_params() {
        assert!(P::new(1.2, 0.5, 0.0, 0.0).is_err());
        assert!(P::new(0.5, -0.1, 0.0, 0.0).is_err());
        assert!(P::new(0.5, 0.5, 0.0, -1.0).is_err());
        assert!(P::new(f64::NAN, 0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn phi_wraps_into_principal_range() {
        let p = P::new(0.5, 0.5, -1.0, 0.0).unwrap();
        assert_abs_diff_eq!(p.phi, std::f64::consts::TAU - 1.0, epsilon = 1e-12);
        let q = P::new(0.5, 0.5, std::f64::consts::TAU, 0.0).unwrap();
        assert_abs_diff_eq!(q.phi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn step_matrix_perfect_mirror_decouples_system() {
        let m = build_step_matrix(1, 1, &params(1.0, 0.7, 0.0)).unwrap();
        assert_abs_diff_eq!(m[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 1)].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 2)].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn step_matrix_entries_match_direct_evaluation() {
        let m = build_step_matrix(1, 1, &params(0.1, 0.99, 0.0)).unwrap();
        assert_abs_diff_eq!(m[(0, 0)].re, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 1)].re, (1.0f64 - 0.01).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn step_matrix_rejects_bad_index() {
        assert!(build_step_matrix(0, 3, &params(0.5, 0.5, 0.0)).is_err());
        assert!(build_step_matrix(4, 3, &params(0.5, 0.5, 0.0)).is_err());
    }

    #[test]
    fn step_matrices_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_params(&mut rng);
            let l = rng.gen_range(1..=20);
            let j = rng.gen_range(1..=l);
            let m = build_step_matrix(j, l, &p).unwrap();
            assert!(unitarity_defect(&m) < 1e-12);
        }
    }

    #[test]
    fn full_scattering_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let p = random_params(&mut rng);
            let l = rng.gen_range(1..=20);
            let s = build_full_scattering(l, &p).unwrap();
            assert!(unitarity_defect(&s) < 1e-10);
        }
    }

    #[test]
    fn full_scattering_single_step() {
        let p = params(0.3, 0.8, 1.1);
        let s = build_full_scattering(1, &p).unwrap();
        let m = build_step_matrix(1, 1, &p).unwrap();
        assert!(max_abs_diff(&s, &m) < 1e-15);
    }

    #[test]
    fn no_feedback_closes_recursion() {
        let p = params(0.4, 0.0, 0.9);
        let s = build_full_scattering(5, &p).unwrap();
        let expected = cpow(cis(p.phi) * p.r1, 5);
        assert!((s[(0, 0)] - expected).norm() < 1e-12);
    }

    #[test]
    fn closed_form_matches_full_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let p = random_params(&mut rng);
            let s = build_full_scattering(10, &p).unwrap();
            let c = c_closed_form(10, &p).unwrap();
            assert!((s[(0, 0)] - c).norm() < 1e-10);
        }
    }

    #[test]
    fn reduced_matrix_decoupled_limits() {
        let p = params(1.0, 0.6, 0.4);
        let m = reduced_step_matrix(&p);
        assert!((m[(0, 0)] - cis(0.4)).norm() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15);
        assert!(m[(1, 0)].norm() < 1e-15);
        assert_abs_diff_eq!(m[(1, 1)].re, -0.6, epsilon = 1e-15);

        let q = params(0.6, 0.0, 0.0);
        let mq = reduced_step_matrix(&q);
        assert!(mq[(1, 0)].norm() < 1e-15);
        assert!(mq[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn reduced_matrix_direct_arithmetic() {
        let m = reduced_step_matrix(&params(0.5, 0.4, 0.0));
        assert_abs_diff_eq!(m[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(0, 1)].re, 0.75f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(m[(1, 0)].re, 0.75f64.sqrt() * 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(1, 1)].re, -0.2, epsilon = 1e-12);
    }

    #[test]
    fn eigen_reduced_limits() {
        let e = eigen_reduced(&params(0.7, 0.0, 0.0));
        assert!((e.plus - Cf(0.7)).norm() < 1e-12);
        assert!(e.minus.norm() < 1e-12);

        let e = eigen_reduced(&params(0.0, 0.25, 0.0));
        assert!((e.plus - Cf(0.5)).norm() < 1e-12);
        assert!((e.minus - Cf(-0.5)).norm() < 1e-12);
    }

    #[allow(non_snake_case)]
    fn Cf(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn eigen_trace_and_determinant_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let p = random_params(&mut rng);
            let m = reduced_step_matrix(&p);
            let e = eigen_reduced(&p);
            let trace = m[(0, 0)] + m[(1, 1)];
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            assert!((e.plus + e.minus - trace).norm() < 1e-12);
            assert!((e.plus * e.minus - det).norm() < 1e-12);
            // det = -r2 e^{i phi}
            assert!((det + cis(p.phi) * p.r2).norm() < 1e-12);
        }
    }

    #[test]
    fn eigen_reduced_are_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p = random_params(&mut rng);
            let m = reduced_step_matrix(&p);
            let e = eigen_reduced(&p);
            for lam in [e.plus, e.minus] {
                // char poly evaluated at lam
                let v = (m[(0, 0)] - lam) * (m[(1, 1)] - lam) - m[(0, 1)] * m[(1, 0)];
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_small_l() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let p = random_params(&mut rng);
            if eigen_reduced(&p).is_degenerate() {
                continue;
            }
            let c0 = c_closed_form(0, &p).unwrap();
            assert!((c0 - Cf(1.0)).norm() < 1e-12);
            let c1 = c_closed_form(1, &p).unwrap();
            assert!((c1 - cis(p.phi) * p.r1).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_product_example() {
        let p = params(0.1, 0.99, 0.0);
        let s = build_full_scattering(3, &p).unwrap();
        let c = c_closed_form(3, &p).unwrap();
        assert!((s[(0, 0)] - c).norm() < 1e-10);
    }

    #[test]
    fn closed_form_branch_symmetry() {
        // Exchanging lambda+ and lambda- leaves c_L unchanged.
        let p = params(0.35, 0.77, 2.1);
        let e = eigen_reduced(&p);
        let eval = |lp: Complex<f64>, lm: Complex<f64>, l: usize| {
            let head = cis(p.phi) * p.r1;
            ((cpow(lp, l) - cpow(lm, l)) * head + lp * cpow(lm, l) - cpow(lp, l) * lm) / (lp - lm)
        };
        for l in [2usize, 5, 9] {
            let a = eval(e.plus, e.minus, l);
            let b = eval(e.minus, e.plus, l);
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_refuses_degenerate_spectrum() {
        // r1 = r2 = 0 gives lambda+ = lambda- = 0.
        let p = params(0.0, 0.0, 0.0);
        assert!(matches!(
            c_closed_form(3, &p),
            Err(Error::DegenerateSpectrum)
        ));
        // The series route still works and gives c_L = 0 for L >= 1.
        let s = c_series(3, &p);
        assert!(s.values[1].norm() < 1e-15);
    }

    #[test]
    fn series_matches_closed_form_long_horizon() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let p = random_params(&mut rng);
            if eigen_reduced(&p).is_degenerate() {
                continue;
            }
            let s = c_series(1000, &p);
            for l in (0..=1000).step_by(97) {
                let c = c_closed_form(l, &p).unwrap();
                assert!(
                    (s.values[l] - c).norm() < 1e-9,
                    "mismatch at L={l} for {p:?}"
                );
            }
        }
    }

    #[test]
    fn series_no_feedback_factorizes() {
        let p = params(0.73, 0.0, 1.3);
        let s = c_series(100, &p);
        for l in 0..=100 {
            let expected = cpow(cis(p.phi) * p.r1, l);
            assert!((s.values[l] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn series_contractive() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..30 {
            let p = random_params(&mut rng);
            let s = c_series(300, &p);
            for c in &s.values {
                assert!(c.norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn weak_memory_is_monotone_strong_memory_oscillates() {
        let weak = c_series(50, &params(0.1, 0.01, 0.0));
        let mw = weak.magnitudes();
        assert!(mw.windows(2).all(|w| w[1] <= w[0] + 1e-12));

        let strong = c_series(50, &params(0.1, 0.99, 0.0));
        let ms = strong.magnitudes();
        assert!(ms.windows(2).any(|w| w[1] > w[0] + 1e-10));
    }

    #[test]
    fn continuous_limit_preset_stays_bounded() {
        let s = c_series(200, &params(0.99, 0.99, std::f64::consts::PI));
        let m = s.magnitudes();
        assert!(m.iter().all(|&x| x <= 1.0 + 1e-12));
        // slowly varying: consecutive steps never jump far, in contrast to
        // the per-step sign flips away from this limit
        assert!(m.windows(2).all(|w| (w[1] - w[0]).abs() < 0.2));
    }

    #[test]
    fn works_in_single_precision() {
        let p = ChannelParams::<f32>::new(0.3, 0.7, 0.5, 0.0).unwrap();
        let s = c_series(20, &p);
        let pd = params(0.3, 0.7, 0.5);
        let sd = c_series(20, &pd);
        for l in 0..=20 {
            assert!((f64::from(s.values[l].re) - sd.values[l].re).abs() < 1e-5);
        }
    }
}
