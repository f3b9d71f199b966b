//! Independent truncated-Fock-space oracle for single-mode Gaussian
//! states: builds density matrices from ladder operators, measures their
//! first and second quadrature moments, and evaluates fidelity and
//! relative entropy spectrally. Everything here works on explicit density
//! matrices, sharing no code paths with the covariance-matrix routines it
//! cross-checks.

// shared between several integration-test targets, each using a subset
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

pub type CMat = DMatrix<Complex<f64>>;

fn czero() -> Complex<f64> {
    Complex::new(0.0, 0.0)
}

fn cr(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

/// Annihilation operator on the `dim`-dimensional truncation.
pub fn annihilation(dim: usize) -> CMat {
    let mut a = CMat::from_element(dim, dim, czero());
    for n in 1..dim {
        a[(n - 1, n)] = cr((n as f64).sqrt());
    }
    a
}

/// `exp(M)` for anti-Hermitian `M` via the eigendecomposition of `-iM`.
pub fn exp_anti_hermitian(m: &CMat) -> CMat {
    let h = m.map(|z| z * Complex::new(0.0, -1.0));
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let mut d = CMat::from_element(n, n, czero());
    for k in 0..n {
        d[(k, k)] = Complex::new(0.0, eig.eigenvalues[k]).exp();
    }
    v * d * v.adjoint()
}

/// Truncated thermal occupation weights, renormalized, together with
/// their logarithms (zero weights get a large negative stand-in whose
/// `0 * ln 0` contributions vanish exactly in traces).
fn thermal_weights(dim: usize, nbar: f64) -> (Vec<f64>, Vec<f64>) {
    let q = nbar / (1.0 + nbar);
    let mut w = vec![0.0; dim];
    let mut cur = 1.0 / (1.0 + nbar);
    let mut total = 0.0;
    for slot in w.iter_mut() {
        *slot = cur;
        total += cur;
        cur *= q;
    }
    for slot in w.iter_mut() {
        *slot /= total;
    }
    let lnw = w.iter().map(|&x| x.max(1e-300).ln()).collect();
    (w, lnw)
}

/// Thermal state `rho_th(n)` (diagonal geometric distribution).
pub fn thermal_rho(dim: usize, nbar: f64) -> CMat {
    let (w, _) = thermal_weights(dim, nbar);
    CMat::from_fn(dim, dim, |i, j| if i == j { cr(w[i]) } else { czero() })
}

/// A density matrix together with its exact matrix logarithm. For
/// `rho = U W U^dag` with diagonal `W`, `ln rho = U ln(W) U^dag` holds
/// exactly in the truncation, which sidesteps the eigen-noise a spectral
/// logarithm of `rho` itself would pick up from its near-zero eigenvalues.
pub struct FockState {
    pub rho: CMat,
    pub ln_rho: CMat,
}

/// A random-but-deterministic Gaussian state
/// `D(alpha) R(theta) S(xi) rho_th(nbar) S^dag R^dag D^dag`.
pub fn gaussian_state(
    dim: usize,
    alpha: Complex<f64>,
    theta: f64,
    xi: f64,
    nbar: f64,
) -> FockState {
    let a = annihilation(dim);
    let adag = a.adjoint();
    let disp = exp_anti_hermitian(&(&adag * alpha - &a * alpha.conj()));
    let sq = exp_anti_hermitian(&((&a * &a - &adag * &adag) * cr(xi / 2.0)));
    let num = &adag * &a;
    let rot = exp_anti_hermitian(&(num * Complex::new(0.0, -theta)));
    let u = disp * rot * sq;
    let (w, lnw) = thermal_weights(dim, nbar);
    let diag = |d: &[f64]| CMat::from_fn(dim, dim, |i, j| if i == j { cr(d[i]) } else { czero() });
    let rho = &u * diag(&w) * u.adjoint();
    let ln_rho = &u * diag(&lnw) * u.adjoint();
    FockState {
        // symmetrize rounding noise
        rho: (&rho + rho.adjoint()) * cr(0.5),
        ln_rho: (&ln_rho + ln_rho.adjoint()) * cr(0.5),
    }
}

/// Convenience wrapper when only the density matrix is needed.
pub fn gaussian_rho(dim: usize, alpha: Complex<f64>, theta: f64, xi: f64, nbar: f64) -> CMat {
    gaussian_state(dim, alpha, theta, xi, nbar).rho
}

/// First moments `(⟨x⟩, ⟨p⟩)` with `x = (a + a^dag)/sqrt(2)`.
pub fn measured_mean(rho: &CMat) -> DVector<f64> {
    let a = annihilation(rho.nrows());
    let adag = a.adjoint();
    let s = std::f64::consts::SQRT_2.recip();
    let x = (&a + &adag) * cr(s);
    let p = (&a - &adag) * Complex::new(0.0, -s);
    DVector::from_vec(vec![(rho * x).trace().re, (rho * p).trace().re])
}

/// Symmetrized second moments `V_ij = (1/2)⟨{ΔR_i, ΔR_j}⟩`.
pub fn measured_cov(rho: &CMat) -> DMatrix<f64> {
    let a = annihilation(rho.nrows());
    let adag = a.adjoint();
    let s = std::f64::consts::SQRT_2.recip();
    let x = (&a + &adag) * cr(s);
    let p = (&a - &adag) * Complex::new(0.0, -s);
    let mean = measured_mean(rho);
    let ops = [x, p];
    let mut v = DMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let sym = (&ops[i] * &ops[j] + &ops[j] * &ops[i]) * cr(0.5);
            v[(i, j)] = (rho * sym).trace().re - mean[i] * mean[j];
        }
    }
    (v.clone() + v.transpose()) * 0.5
}

fn psd_sqrt(m: &CMat) -> CMat {
    let h = (m + m.adjoint()) * cr(0.5);
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let mut d = CMat::from_element(m.nrows(), m.nrows(), czero());
    for k in 0..m.nrows() {
        d[(k, k)] = cr(eig.eigenvalues[k].max(0.0).sqrt());
    }
    v * d * v.adjoint()
}

/// Uhlmann fidelity as the squared overlap, `(tr sqrt(sqrt(r1) r2 sqrt(r1)))^2`.
pub fn fidelity_rho(rho1: &CMat, rho2: &CMat) -> f64 {
    let s1 = psd_sqrt(rho1);
    let inner = psd_sqrt(&(&s1 * rho2 * &s1));
    let f = inner.trace().re;
    (f * f).clamp(0.0, 1.0)
}

/// `S(rho1 || rho2) = tr rho1 (ln rho1 - ln rho2)`, natural logarithm,
/// using the exact logarithms carried by the states.
pub fn relative_entropy_states(s1: &FockState, s2: &FockState) -> f64 {
    (&s1.rho * (&s1.ln_rho - &s2.ln_rho)).trace().re
}
