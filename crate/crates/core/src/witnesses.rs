//! Divisibility classification and revival-based non-Markovianity witnesses.
//!
//! The channel after `L` steps factors through an intermediate map whose
//! complete positivity is governed by `c_r = c_L / c_(L-1)`: the process is
//! divisible (Markovian) exactly when `|c_L|` never increases. The witnesses
//! instead watch a physical quantity along the trajectory - entanglement of
//! a two-mode squeezed probe, concurrence of the qubit Choi state, fidelity
//! or relative entropy of two probe states - and flag any revival.

use nalgebra::{Matrix2, SymmetricEigen};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    apply_channel, fidelity, log_negativity, relative_entropy, GaussianState,
};
use crate::qubit::{choi_state, concurrence};
use crate::scalar::{cabs, cabs2, real, Scalar};
use crate::scattering::{c_series, ChannelParams, CoefficientSeries};
use crate::tol;

/// Which diagnostic a [`WitnessSeries`] tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Coefficient,
    Entanglement,
    Concurrence,
    Fidelity,
    RelativeEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Markovian,
    NonMarkovian,
}

/// A diagnostic series along the trajectory with its verdict.
///
/// `violation_steps` lists every step `L` whose value breaks the expected
/// monotone trend beyond the tolerance; the verdict is non-Markovian exactly
/// when that list is non-empty. `singular_steps` are steps where the
/// intermediate map is undefined (`c_(L-1)` vanishes); `skipped_steps` are
/// steps whose value could not be evaluated (infinite relative entropy) and
/// were excluded from the trend scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSeries<T> {
    pub kind: WitnessKind,
    pub values: Vec<T>,
    pub verdict: Verdict,
    pub violation_steps: Vec<usize>,
    pub singular_steps: Vec<usize>,
    pub skipped_steps: Vec<usize>,
    pub horizon: usize,
}

#[derive(Debug, Clone, Copy)]
enum Trend {
    NonIncreasing,
    NonDecreasing,
}

fn scan_trend<T: Scalar>(values: &[T], skipped: &[usize], trend: Trend, tol: T) -> Vec<usize> {
    let mut violations = Vec::new();
    let mut last: Option<T> = None;
    for (l, &v) in values.iter().enumerate() {
        if skipped.contains(&l) {
            continue;
        }
        if let Some(prev) = last {
            let broken = match trend {
                Trend::NonIncreasing => v > prev + tol,
                Trend::NonDecreasing => v < prev - tol,
            };
            if broken {
                violations.push(l);
            }
        }
        last = Some(v);
    }
    violations
}

fn assemble<T: Scalar>(
    kind: WitnessKind,
    values: Vec<T>,
    trend: Trend,
    tol: T,
    singular_steps: Vec<usize>,
    skipped_steps: Vec<usize>,
) -> WitnessSeries<T> {
    let violation_steps = scan_trend(&values, &skipped_steps, trend, tol);
    let verdict = if violation_steps.is_empty() {
        Verdict::Markovian
    } else {
        Verdict::NonMarkovian
    };
    let horizon = values.len().saturating_sub(1);
    WitnessSeries {
        kind,
        values,
        verdict,
        violation_steps,
        singular_steps,
        skipped_steps,
        horizon,
    }
}

/// The intermediate map between steps `L-1` and `L`, with the matrix `M`
/// whose non-negativity decides complete positivity.
#[derive(Debug, Clone)]
pub struct IntermediateMap<T> {
    pub c_r: Complex<T>,
    pub n_t: T,
    pub m: Matrix2<Complex<T>>,
    /// Eigenvalues of `M` from the numerical eigensolver, descending.
    pub eigenvalues_numeric: (T, T),
    /// Closed forms `2 (n_T + 1)(1 - |c_r|^2)` and `2 n_T (1 - |c_r|^2)`.
    pub eigenvalues_closed: (T, T),
}

impl<T: Scalar> IntermediateMap<T> {
    /// CP exactly when `M >= 0` up to the tolerance.
    pub fn is_cp(&self, tol: T) -> bool {
        self.eigenvalues_numeric.1.min(self.eigenvalues_numeric.0) >= -tol
    }
}

/// Build the intermediate map from consecutive coefficients.
/// `M = 2 alpha - sigma_y + K^T sigma_y K` with `(K, alpha)` the channel
/// action of `c_r = c_L / c_(L-1)`.
pub fn intermediate_map<T: Scalar>(
    c_l: Complex<T>,
    c_lm1: Complex<T>,
    n_t: T,
) -> Result<IntermediateMap<T>> {
    if cabs(c_lm1) < real(tol::SINGULAR) {
        return Err(Error::SingularStep { step: 0 });
    }
    let c_r = c_l / c_lm1;
    let act = crate::gaussian::channel_action(c_r, n_t);
    let zero = Complex::new(T::zero(), T::zero());
    let mi = Complex::new(T::zero(), -T::one());
    let pi_ = Complex::new(T::zero(), T::one());
    let sy = Matrix2::new(zero, mi, pi_, zero);
    let kc = act.k.map(|x| Complex::new(x, T::zero()));
    let ac = act.alpha.map(|x| Complex::new(x, T::zero()));
    let m = ac * Complex::new(real::<T>(2.0), T::zero()) - sy + kc.transpose() * sy * kc;
    let eig = SymmetricEigen::new(m);
    let (a, b) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let numeric = (a.max(b), a.min(b));
    let loss = T::one() - cabs2(c_r);
    let two = real::<T>(2.0);
    let l1 = two * (n_t + T::one()) * loss;
    let l2 = two * n_t * loss;
    Ok(IntermediateMap {
        c_r,
        n_t,
        m,
        eigenvalues_numeric: numeric,
        eigenvalues_closed: (l1, l2),
    })
}

fn singular_steps_of<T: Scalar>(series: &CoefficientSeries<T>) -> Vec<usize> {
    (1..series.values.len())
        .filter(|&l| cabs(series.values[l - 1]) < real(tol::SINGULAR))
        .collect()
}

/// Divisibility classification: Markovian iff `|c_L| <= |c_(L-1)| + tol`
/// for every step in the horizon. The comparison is well defined even at
/// vanishing coefficients, so singular steps are reported but not excluded.
/// The verdict does not depend on `n_T`.
pub fn classify_divisibility<T: Scalar>(
    series: &CoefficientSeries<T>,
    tol: T,
) -> Result<WitnessSeries<T>> {
    if series.values.len() < 2 {
        return Err(Error::EmptySeries);
    }
    let values = series.magnitudes();
    let singular = singular_steps_of(series);
    Ok(assemble(
        WitnessKind::Coefficient,
        values,
        Trend::NonIncreasing,
        tol,
        singular,
        Vec::new(),
    ))
}

/// CP scan over the intermediate maps (values are the smallest eigenvalue
/// of `M` per step). Singular steps are excluded, never counted as
/// violations. Equivalent to [`classify_divisibility`] away from vanishing
/// coefficients.
pub fn classify_by_intermediate_maps<T: Scalar>(
    series: &CoefficientSeries<T>,
    n_t: T,
    tol: T,
) -> Result<WitnessSeries<T>> {
    if series.values.len() < 2 {
        return Err(Error::EmptySeries);
    }
    let mut values = vec![T::zero()];
    let mut violations = Vec::new();
    let mut singular = Vec::new();
    for l in 1..series.values.len() {
        if cabs(series.values[l - 1]) < real(tol::SINGULAR) {
            singular.push(l);
            values.push(T::zero());
            continue;
        }
        let im = intermediate_map(series.values[l], series.values[l - 1], n_t)?;
        let min_eig = im.eigenvalues_numeric.1;
        values.push(min_eig);
        if !im.is_cp(tol) {
            violations.push(l);
        }
    }
    let verdict = if violations.is_empty() {
        Verdict::Markovian
    } else {
        Verdict::NonMarkovian
    };
    let horizon = values.len().saturating_sub(1);
    Ok(WitnessSeries {
        kind: WitnessKind::Coefficient,
        values,
        verdict,
        violation_steps: violations,
        singular_steps: singular,
        skipped_steps: Vec::new(),
        horizon,
    })
}

/// Window convention for [`coarse_grain_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrainWindow {
    /// Bounds as printed, `k = (n-1) Delta ..= n Delta`: the window spans
    /// `Delta + 1` samples while dividing by `Delta`.
    InclusiveUpper,
    /// The `Delta`-term variant, `k = (n-1) Delta .. n Delta`.
    Exclusive,
}

/// Coarse-grained magnitudes, `|cbar_n| = (1/Delta) sum_k |c_k|`.
pub fn coarse_grain<T: Scalar>(series: &CoefficientSeries<T>, delta: usize) -> Result<Vec<T>> {
    coarse_grain_with(series, delta, GrainWindow::InclusiveUpper)
}

pub fn coarse_grain_with<T: Scalar>(
    series: &CoefficientSeries<T>,
    delta: usize,
    window: GrainWindow,
) -> Result<Vec<T>> {
    if delta == 0 {
        return Err(Error::InvalidParams("grain size must be positive".into()));
    }
    if series.values.len() < delta {
        return Err(Error::EmptySeries);
    }
    let mags = series.magnitudes();
    let norm = real::<T>(delta as f64);
    let mut grains = Vec::new();
    let mut n = 1usize;
    loop {
        let lo = (n - 1) * delta;
        let hi = match window {
            GrainWindow::InclusiveUpper => n * delta + 1,
            GrainWindow::Exclusive => n * delta,
        };
        if hi > mags.len() {
            break;
        }
        let sum = mags[lo..hi].iter().fold(T::zero(), |a, &b| a + b);
        grains.push(sum / norm);
        n += 1;
    }
    Ok(grains)
}

/// Entanglement-revival witness: evolve a TMSV probe through the channel
/// and flag any increase of the logarithmic negativity.
pub fn entanglement_revival_witness<T: Scalar>(
    params: &ChannelParams<T>,
    l_max: usize,
    xi: T,
    tol: T,
) -> Result<WitnessSeries<T>> {
    if xi <= T::zero() {
        return Err(Error::InvalidParams("squeezing xi must be positive".into()));
    }
    let series = c_series(l_max, params);
    let probe = GaussianState::tmsv(xi);
    let mut values = Vec::with_capacity(l_max + 1);
    for c in &series.values {
        let out = apply_channel(&probe, 1, *c, params.n_t)?;
        values.push(log_negativity(&out)?);
    }
    Ok(assemble(
        WitnessKind::Entanglement,
        values,
        Trend::NonIncreasing,
        tol,
        Vec::new(),
        Vec::new(),
    ))
}

/// Qubit concurrence witness on the Choi state; requires `n_T = 0` (the
/// one-photon reduction only exists for a vacuum environment).
pub fn concurrence_witness<T: Scalar>(
    params: &ChannelParams<T>,
    l_max: usize,
    tol: T,
) -> Result<WitnessSeries<T>> {
    if params.n_t > real(tol::ALGEBRAIC) {
        return Err(Error::InvalidParams(
            "the qubit reduction requires n_T = 0".into(),
        ));
    }
    let series = c_series(l_max, params);
    let mut values = Vec::with_capacity(l_max + 1);
    for c in &series.values {
        values.push(concurrence(&choi_state(*c)?)?);
    }
    Ok(assemble(
        WitnessKind::Concurrence,
        values,
        Trend::NonIncreasing,
        tol,
        Vec::new(),
        Vec::new(),
    ))
}

/// Fidelity witness: evolve two squeezed-vacuum probes and flag any
/// decrease of their fidelity.
pub fn fidelity_witness<T: Scalar>(
    params: &ChannelParams<T>,
    l_max: usize,
    xi1: T,
    xi2: T,
    tol: T,
) -> Result<WitnessSeries<T>> {
    if (xi1 - xi2).abs() < real(tol::ALGEBRAIC) {
        return Err(Error::DegenerateProbes);
    }
    let series = c_series(l_max, params);
    let p1 = GaussianState::squeezed_vacuum(xi1);
    let p2 = GaussianState::squeezed_vacuum(xi2);
    let mut values = Vec::with_capacity(l_max + 1);
    for c in &series.values {
        let o1 = apply_channel(&p1, 0, *c, params.n_t)?;
        let o2 = apply_channel(&p2, 0, *c, params.n_t)?;
        values.push(fidelity(&o1, &o2)?);
    }
    Ok(assemble(
        WitnessKind::Fidelity,
        values,
        Trend::NonDecreasing,
        tol,
        Vec::new(),
        Vec::new(),
    ))
}

/// Relative-entropy witness: flag any revival of `S(rho1(L) || rho2(L))`.
/// Steps with infinite relative entropy (pure reference state) are recorded
/// in `skipped_steps` and excluded from the trend scan.
pub fn relative_entropy_witness<T: Scalar>(
    params: &ChannelParams<T>,
    l_max: usize,
    xi1: T,
    xi2: T,
    tol: T,
) -> Result<WitnessSeries<T>> {
    if (xi1 - xi2).abs() < real(tol::ALGEBRAIC) {
        return Err(Error::DegenerateProbes);
    }
    let series = c_series(l_max, params);
    let p1 = GaussianState::squeezed_vacuum(xi1);
    let p2 = GaussianState::squeezed_vacuum(xi2);
    let mut values = Vec::with_capacity(l_max + 1);
    let mut skipped = Vec::new();
    for (l, c) in series.values.iter().enumerate() {
        let o1 = apply_channel(&p1, 0, *c, params.n_t)?;
        let o2 = apply_channel(&p2, 0, *c, params.n_t)?;
        let s = relative_entropy(&o1, &o2)?;
        if !s.is_finite() {
            skipped.push(l);
        }
        values.push(s);
    }
    Ok(assemble(
        WitnessKind::RelativeEntropy,
        values,
        Trend::NonIncreasing,
        tol,
        Vec::new(),
        skipped,
    ))
}

/// Temperature above which the entanglement-revival witness loses the
/// non-Markovian region: `n_T^c = r1^2 / (1 - r1^2)`; infinite at `r1 = 1`.
pub fn threshold_temperature<T: Scalar>(r1: T) -> Result<T> {
    if r1 < T::zero() || r1 > T::one() {
        return Err(Error::InvalidParams("r1 must lie in [0, 1]".into()));
    }
    let denom = T::one() - r1 * r1;
    if denom <= T::zero() {
        return Ok(real(f64::INFINITY));
    }
    Ok(r1 * r1 / denom)
}
