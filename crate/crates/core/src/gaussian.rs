//! Gaussian-state algebra and the induced thermal attenuation channel.
//!
//! States are mean vectors plus covariance matrices in quadrature order
//! `(x1, p1, x2, p2)`, symmetric ordering, vacuum covariance `(1/2) I`.
//! The channel induced by a coefficient `c` acts on one mode as
//! `mean -> K^T mean`, `V -> K^T V K + alpha` with `K` the scaled rotation
//! built from `c` and `alpha = (n_T + 1/2)(1 - |c|^2) I`.
//!
//! Symbol mapping to the characteristic-function picture: the covariance
//! here is `V` with vacuum `(1/2) I`; the two-mode blocks `B1, B2, B3`
//! of the squeezed-probe output satisfy `V = (1/2) [[B1, B3], [B3^T, B2]]`.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen, Vector2};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cabs, cabs2, real, Scalar};
use crate::tol;

/// Mean vector and covariance matrix of 1 or 2 bosonic modes.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState<T> {
    mean: DVector<T>,
    cov: DMatrix<T>,
}

/// Requested state for [`make_state`].
#[derive(Debug, Clone, Copy)]
pub enum StateKind<T> {
    Vacuum,
    Thermal(T),
    Coherent(Complex<T>),
    SqueezedVacuum(T),
    /// Two-mode squeezed vacuum with covariance blocks
    /// `B1 = B2 = cosh(xi) I`, `B3 = -sinh(xi) sigma_z`.
    Tmsv(T),
}

/// Which argument sits inside the logarithm of the relative entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgumentOrder {
    /// `S(rho1 || rho2) = Tr rho1 (ln rho1 - ln rho2)`.
    Conventional,
    /// The transposed ordering, `S(rho2 || rho1)`.
    Swapped,
}

impl<T: Scalar> GaussianState<T> {
    /// Validating constructor: symmetric covariance and the uncertainty
    /// relation `cov + (i/2) Omega >= 0`.
    pub fn new(mean: DVector<T>, cov: DMatrix<T>) -> Result<Self> {
        let n = mean.len();
        if n != 2 && n != 4 {
            return Err(Error::InvalidState(
                "only 1- or 2-mode states are supported".into(),
            ));
        }
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::InvalidState("covariance shape mismatch".into()));
        }
        let asym = (&cov - cov.transpose()).abs().max();
        if asym > real(tol::ALGEBRAIC) {
            return Err(Error::InvalidState(format!(
                "covariance not symmetric (defect {asym:?})"
            )));
        }
        let state = Self { mean, cov };
        state.check_uncertainty()?;
        Ok(state)
    }

    fn from_parts(mean: DVector<T>, cov: DMatrix<T>) -> Self {
        Self { mean, cov }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<T> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<T> {
        &self.cov
    }

    pub fn vacuum() -> Self {
        Self::from_parts(
            DVector::zeros(2),
            DMatrix::identity(2, 2) * real::<T>(0.5),
        )
    }

    pub fn thermal(n_t: T) -> Result<Self> {
        if n_t < T::zero() {
            return Err(Error::InvalidParams("n_t must be non-negative".into()));
        }
        Ok(Self::from_parts(
            DVector::zeros(2),
            DMatrix::identity(2, 2) * (n_t + real::<T>(0.5)),
        ))
    }

    /// Coherent state: displaced vacuum, `mean = sqrt(2) (Re a, Im a)`.
    pub fn coherent(alpha: Complex<T>) -> Self {
        let s2 = real::<T>(2.0).sqrt();
        Self::from_parts(
            DVector::from_column_slice(&[s2 * alpha.re, s2 * alpha.im]),
            DMatrix::identity(2, 2) * real::<T>(0.5),
        )
    }

    /// Squeezed vacuum with `cov = (1/2) diag(e^{-2 xi}, e^{+2 xi})`.
    pub fn squeezed_vacuum(xi: T) -> Self {
        let half = real::<T>(0.5);
        let two = real::<T>(2.0);
        let mut cov = DMatrix::zeros(2, 2);
        cov[(0, 0)] = half * (-two * xi).exp();
        cov[(1, 1)] = half * (two * xi).exp();
        Self::from_parts(DVector::zeros(2), cov)
    }

    /// Two-mode squeezed vacuum,
    /// `V = (1/2) [[cosh(xi) I, -sinh(xi) sz], [-sinh(xi) sz, cosh(xi) I]]`.
    pub fn tmsv(xi: T) -> Self {
        let half = real::<T>(0.5);
        let ch = half * xi.cosh();
        let sh = half * xi.sinh();
        let mut cov = DMatrix::zeros(4, 4);
        for i in 0..4 {
            cov[(i, i)] = ch;
        }
        cov[(0, 2)] = -sh;
        cov[(2, 0)] = -sh;
        cov[(1, 3)] = sh;
        cov[(3, 1)] = sh;
        Self::from_parts(DVector::zeros(4), cov)
    }

    /// Uncertainty relation: smallest eigenvalue of `cov + (i/2) Omega`
    /// must not drop below `-1e-10`.
    pub fn check_uncertainty(&self) -> Result<()> {
        let n = self.mean.len();
        let mut h = DMatrix::<Complex<T>>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = Complex::new(self.cov[(i, j)], T::zero());
            }
        }
        let half = real::<T>(0.5);
        for m in 0..n / 2 {
            // Omega block [[0, 1], [-1, 0]] times i/2
            h[(2 * m, 2 * m + 1)] += Complex::new(T::zero(), half);
            h[(2 * m + 1, 2 * m)] += Complex::new(T::zero(), -half);
        }
        let eig = SymmetricEigen::new(h);
        let min = eig.eigenvalues.iter().cloned().fold(T::one(), T::min);
        if min < -real::<T>(tol::UNCERTAINTY) {
            return Err(Error::InvalidState(format!(
                "uncertainty relation violated (min eigenvalue {min:?})"
            )));
        }
        Ok(())
    }

    fn mode_cov(&self, mode: usize) -> Matrix2<T> {
        let b = 2 * mode;
        Matrix2::new(
            self.cov[(b, b)],
            self.cov[(b, b + 1)],
            self.cov[(b + 1, b)],
            self.cov[(b + 1, b + 1)],
        )
    }
}

/// States equal within an absolute tolerance on mean and covariance.
pub fn states_close<T: Scalar>(a: &GaussianState<T>, b: &GaussianState<T>, tol: T) -> bool {
    a.n_modes() == b.n_modes()
        && (a.mean() - b.mean()).abs().max() <= tol
        && (a.cov() - b.cov()).abs().max() <= tol
}

/// Construct the requested state.
pub fn make_state<T: Scalar>(kind: StateKind<T>) -> Result<GaussianState<T>> {
    match kind {
        StateKind::Vacuum => Ok(GaussianState::vacuum()),
        StateKind::Thermal(n_t) => GaussianState::thermal(n_t),
        StateKind::Coherent(alpha) => Ok(GaussianState::coherent(alpha)),
        StateKind::SqueezedVacuum(xi) => Ok(GaussianState::squeezed_vacuum(xi)),
        StateKind::Tmsv(xi) => Ok(GaussianState::tmsv(xi)),
    }
}

/// The `(K, alpha)` pair describing the one-mode channel action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelAction<T> {
    pub k: Matrix2<T>,
    pub alpha: Matrix2<T>,
}

/// `K = [[Re c, Im c], [-Im c, Re c]]`, `alpha = (n_T + 1/2)(1 - |c|^2) I`.
///
/// `|c| > 1` is permitted here: intermediate-map analysis probes exactly
/// those unphysical actions.
pub fn channel_action<T: Scalar>(c: Complex<T>, n_t: T) -> ChannelAction<T> {
    let k = Matrix2::new(c.re, c.im, -c.im, c.re);
    let a = (n_t + real::<T>(0.5)) * (T::one() - cabs2(c));
    ChannelAction {
        k,
        alpha: Matrix2::identity() * a,
    }
}

/// Apply the channel with coefficient `c` to one mode of a state.
///
/// On the targeted block: `mean -> K^T mean`, `V_mm -> K^T V_mm K + alpha`,
/// cross blocks `-> K^T V_ms`. An unphysical total channel (`|c| > 1`)
/// surfaces as an uncertainty-relation violation on the output.
pub fn apply_channel<T: Scalar>(
    state: &GaussianState<T>,
    mode: usize,
    c: Complex<T>,
    n_t: T,
) -> Result<GaussianState<T>> {
    let n = state.n_modes();
    if mode >= n {
        return Err(Error::IndexOutOfRange(format!(
            "mode {mode} out of range for {n}-mode state"
        )));
    }
    let act = channel_action(c, n_t);
    let kt = act.k.transpose();
    let b = 2 * mode;

    let mut mean = state.mean.clone();
    let mb = Vector2::new(mean[b], mean[b + 1]);
    let mb = kt * mb;
    mean[b] = mb[0];
    mean[b + 1] = mb[1];

    let mut cov = state.cov.clone();
    // cross blocks first (unaffected by the diagonal update)
    for other in 0..n {
        if other == mode {
            continue;
        }
        let o = 2 * other;
        let cross = Matrix2::new(
            state.cov[(b, o)],
            state.cov[(b, o + 1)],
            state.cov[(b + 1, o)],
            state.cov[(b + 1, o + 1)],
        );
        let cross = kt * cross;
        for i in 0..2 {
            for j in 0..2 {
                cov[(b + i, o + j)] = cross[(i, j)];
                cov[(o + j, b + i)] = cross[(i, j)];
            }
        }
    }
    let vb = state.mode_cov(mode);
    let vb = kt * vb * act.k + act.alpha;
    for i in 0..2 {
        for j in 0..2 {
            cov[(b + i, b + j)] = vb[(i, j)];
        }
    }

    let out = GaussianState::from_parts(mean, cov);
    if cabs(c) > T::one() + real(tol::ALGEBRAIC) {
        out.check_uncertainty()?;
    }
    Ok(out)
}

fn det2<T: Scalar>(m: &Matrix2<T>) -> T {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Logarithmic negativity of a two-mode state.
///
/// With `V = [[A, C], [C^T, B]]`: `Sigma = det A + det B - 2 det C`,
/// `mu = sqrt((Sigma - sqrt(Sigma^2 - 4 det V)) / 2)`,
/// `E_N = max(-ln(2 mu), 0)`.
pub fn log_negativity<T: Scalar>(state: &GaussianState<T>) -> Result<T> {
    if state.n_modes() != 2 {
        return Err(Error::InvalidState("log negativity needs a 2-mode state".into()));
    }
    let v = state.cov();
    let a = state.mode_cov(0);
    let b = state.mode_cov(1);
    let c = Matrix2::new(v[(0, 2)], v[(0, 3)], v[(1, 2)], v[(1, 3)]);
    let sigma = det2(&a) + det2(&b) - real::<T>(2.0) * det2(&c);
    let det_v = v.determinant();
    let disc = sigma * sigma - real::<T>(4.0) * det_v;
    if disc < -real::<T>(tol::COEFFICIENT) {
        return Err(Error::InvalidState(
            "Sigma^2 < 4 det V: not a valid two-mode covariance".into(),
        ));
    }
    let inner = ((sigma - disc.max(T::zero()).sqrt()) * real::<T>(0.5)).max(T::zero());
    let mu = inner.sqrt();
    if mu <= T::zero() {
        return Err(Error::Numerical("vanishing symplectic eigenvalue".into()));
    }
    Ok((-(real::<T>(2.0) * mu).ln()).max(T::zero()))
}

/// Uhlmann fidelity of two single-mode Gaussian states,
/// `F = 2 / (sqrt(D + d) - sqrt(d)) * exp(-1/2 u^T (V1 + V2)^{-1} u)` with
/// `D = 4 det(V1 + V2)`, `d = (4 det V1 - 1)(4 det V2 - 1)`, `u` the mean
/// difference. `d` is clamped at zero: it is a product of purities and only
/// rounding can push it negative.
pub fn fidelity<T: Scalar>(s1: &GaussianState<T>, s2: &GaussianState<T>) -> Result<T> {
    if s1.n_modes() != 1 || s2.n_modes() != 1 {
        return Err(Error::InvalidState("fidelity needs single-mode states".into()));
    }
    let v1 = s1.mode_cov(0);
    let v2 = s2.mode_cov(0);
    let vs = v1 + v2;
    let det_s = det2(&vs);
    if det_s <= real(tol::ALGEBRAIC) {
        return Err(Error::Numerical("singular covariance sum in fidelity".into()));
    }
    let four = real::<T>(4.0);
    let big = four * det_s;
    let small = ((four * det2(&v1) - T::one()) * (four * det2(&v2) - T::one())).max(T::zero());
    let denom = (big + small).sqrt() - small.sqrt();
    if denom <= T::zero() {
        return Err(Error::Numerical("degenerate denominator in fidelity".into()));
    }
    let inv = Matrix2::new(vs[(1, 1)], -vs[(0, 1)], -vs[(1, 0)], vs[(0, 0)]) / det_s;
    let d = Vector2::new(s2.mean()[0] - s1.mean()[0], s2.mean()[1] - s1.mean()[1]);
    let quad = (d.transpose() * inv * d)[(0, 0)];
    let f = real::<T>(2.0) / denom * (-quad * real::<T>(0.5)).exp();
    Ok(f.min(T::one()).max(T::zero()))
}

/// Entropy function `g(nu) = (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2)`.
fn entropy_g<T: Scalar>(nu: T) -> T {
    let half = real::<T>(0.5);
    let plus = nu + half;
    let minus = nu - half;
    let tail = if minus <= T::zero() {
        T::zero()
    } else {
        minus * minus.ln()
    };
    plus * plus.ln() - tail
}

/// Von Neumann entropy of a single-mode Gaussian state from its symplectic
/// eigenvalue `nu = sqrt(det V)`.
pub fn von_neumann_entropy<T: Scalar>(state: &GaussianState<T>) -> Result<T> {
    if state.n_modes() != 1 {
        return Err(Error::InvalidState("entropy needs a single-mode state".into()));
    }
    let nu = det2(&state.mode_cov(0)).max(T::zero()).sqrt();
    if nu < real::<T>(0.5) - real(tol::UNCERTAINTY) {
        return Err(Error::InvalidState(format!(
            "symplectic eigenvalue {nu:?} below 1/2"
        )));
    }
    Ok(entropy_g(nu.max(real(0.5))))
}

/// Relative entropy `S(rho1 || rho2)` of single-mode Gaussian states.
///
/// Computed as `-S_vN(rho1) - Tr(rho1 ln rho2)`. The cross term is evaluated
/// in the normal-mode frame of `rho2`: with `nu2 = sqrt(det V2)`,
/// `V2 = nu2 * W` and `S = W^{1/2}` (symplectic since `det W = 1`),
/// `-Tr(rho1 ln rho2) = ln(nu2 + 1/2) + beta * <n'>` where
/// `beta = ln((nu2 + 1/2)/(nu2 - 1/2))` and
/// `<n'> = (tr(S^{-1} V1 S^{-T}) + |S^{-1}(m1 - m2)|^2 - 1)/2`.
///
/// A pure `rho2` different from `rho1` gives an infinite result.
pub fn relative_entropy<T: Scalar>(s1: &GaussianState<T>, s2: &GaussianState<T>) -> Result<T> {
    relative_entropy_ordered(s1, s2, ArgumentOrder::Conventional)
}

/// Relative entropy with an explicit argument ordering.
pub fn relative_entropy_ordered<T: Scalar>(
    s1: &GaussianState<T>,
    s2: &GaussianState<T>,
    order: ArgumentOrder,
) -> Result<T> {
    let (s1, s2) = match order {
        ArgumentOrder::Conventional => (s1, s2),
        ArgumentOrder::Swapped => (s2, s1),
    };
    if s1.n_modes() != 1 || s2.n_modes() != 1 {
        return Err(Error::InvalidState(
            "relative entropy needs single-mode states".into(),
        ));
    }
    if states_close(s1, s2, real(tol::MONOTONICITY)) {
        return Ok(T::zero());
    }
    let v1 = s1.mode_cov(0);
    let v2 = s2.mode_cov(0);
    let half = real::<T>(0.5);
    let nu1 = det2(&v1).max(T::zero()).sqrt().max(half);
    let nu2 = det2(&v2).max(T::zero()).sqrt();
    if nu2 <= half + real(tol::UNCERTAINTY) {
        // pure reference state with a different argument: divergent
        return Ok(real(f64::INFINITY));
    }
    // symmetric square root of W = V2 / nu2 (det W = 1)
    let w = v2 / nu2;
    let tr_w = w[(0, 0)] + w[(1, 1)];
    let sqrt_w = (w + Matrix2::identity()) / (tr_w + real::<T>(2.0)).sqrt();
    // inverse of a det-1 2x2 matrix
    let s_inv = Matrix2::new(sqrt_w[(1, 1)], -sqrt_w[(0, 1)], -sqrt_w[(1, 0)], sqrt_w[(0, 0)]);
    let vt = s_inv * v1 * s_inv.transpose();
    let dm = s_inv * Vector2::new(s1.mean()[0] - s2.mean()[0], s1.mean()[1] - s2.mean()[1]);
    let mean_energy = (vt[(0, 0)] + vt[(1, 1)] + dm.norm_squared() - T::one()) * half;
    let beta = ((nu2 + half) / (nu2 - half)).ln();
    let s = -entropy_g(nu1) + (nu2 + half).ln() + beta * mean_energy;
    if s < T::zero() && s > -real::<T>(tol::COEFFICIENT) {
        return Ok(T::zero());
    }
    Ok(s)
}
