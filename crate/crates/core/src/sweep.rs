//! Parameter-plane scans: verdict grids over (r1, r2), (phi, r2) or
//! (n_T, r2) planes for any witness, boundary extraction, and the analytic
//! boundary formulas at phi = 0 and phi = pi.
//!
//! Scans are `f64`-only; cell evaluations fan out over the rayon pool with
//! no shared mutable state, and the assembled grid is deterministic
//! regardless of completion order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scattering::{c_series, ChannelParams};
use crate::witnesses::{
    classify_divisibility, concurrence_witness, entanglement_revival_witness, fidelity_witness,
    relative_entropy_witness, Verdict,
};

/// A channel parameter that can serve as a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    R1,
    R2,
    Phi,
    NT,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::R1 => "r1",
            Param::R2 => "r2",
            Param::Phi => "phi",
            Param::NT => "nt",
        }
    }

    fn domain(self) -> (f64, f64) {
        match self {
            Param::R1 | Param::R2 => (0.0, 1.0),
            Param::Phi => (0.0, 2.0 * PI),
            Param::NT => (0.0, f64::INFINITY),
        }
    }
}

/// One axis of a sweep: parameter, range, and resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

impl AxisSpec {
    pub fn new(param: Param, min: f64, max: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::InvalidParams(format!(
                "axis {} needs at least 2 points",
                param.name()
            )));
        }
        if !min.is_finite() || !max.is_finite() || min > max {
            return Err(Error::InvalidParams(format!(
                "axis {}: invalid range [{min}, {max}]",
                param.name()
            )));
        }
        let (lo, hi) = param.domain();
        if min < lo || max > hi {
            return Err(Error::InvalidParams(format!(
                "axis {}: range [{min}, {max}] outside [{lo}, {hi}]",
                param.name()
            )));
        }
        Ok(Self {
            param,
            min,
            max,
            n_points,
        })
    }

    /// Evenly spaced sample values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.n_points;
        let step = (self.max - self.min) / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

/// Per-cell verdict; `Singular` marks cells the witness could not evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellVerdict {
    Markovian,
    NonMarkovian,
    Singular,
}

impl CellVerdict {
    /// Numeric code used in the CSV long format.
    pub fn code(self) -> u8 {
        match self {
            CellVerdict::Markovian => 0,
            CellVerdict::NonMarkovian => 1,
            CellVerdict::Singular => 2,
        }
    }
}

/// Which witness decides each cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepWitness {
    Divisibility,
    Entanglement { xi: f64 },
    Concurrence,
    Fidelity { xi1: f64, xi2: f64 },
    RelativeEntropy { xi1: f64, xi2: f64 },
}

/// A verdict grid over a parameter plane.
///
/// `verdicts` is row-major: `verdicts[i][j]` is the cell at the `i`-th
/// axis1 value and `j`-th axis2 value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
    pub verdicts: Vec<Vec<CellVerdict>>,
    pub witness: SweepWitness,
    pub fixed: ChannelParams<f64>,
    pub l_max: usize,
}

fn cell_params(
    fixed: &ChannelParams<f64>,
    a1: Param,
    v1: f64,
    a2: Param,
    v2: f64,
) -> Result<ChannelParams<f64>> {
    let (mut r1, mut r2, mut phi, mut n_t) = (fixed.r1, fixed.r2, fixed.phi, fixed.n_t);
    for (p, v) in [(a1, v1), (a2, v2)] {
        match p {
            Param::R1 => r1 = v,
            Param::R2 => r2 = v,
            Param::Phi => phi = v,
            Param::NT => n_t = v,
        }
    }
    ChannelParams::new(r1, r2, phi, n_t)
}

fn eval_cell(
    params: &ChannelParams<f64>,
    witness: SweepWitness,
    l_max: usize,
    tol: f64,
) -> Result<CellVerdict> {
    let res = match witness {
        SweepWitness::Divisibility => classify_divisibility(&c_series(l_max, params), tol),
        SweepWitness::Entanglement { xi } => entanglement_revival_witness(params, l_max, xi, tol),
        SweepWitness::Concurrence => concurrence_witness(params, l_max, tol),
        SweepWitness::Fidelity { xi1, xi2 } => fidelity_witness(params, l_max, xi1, xi2, tol),
        SweepWitness::RelativeEntropy { xi1, xi2 } => {
            relative_entropy_witness(params, l_max, xi1, xi2, tol)
        }
    };
    match res {
        Ok(w) => Ok(match w.verdict {
            Verdict::Markovian => CellVerdict::Markovian,
            Verdict::NonMarkovian => CellVerdict::NonMarkovian,
        }),
        Err(Error::SingularStep { .. }) => Ok(CellVerdict::Singular),
        Err(e) => Err(e),
    }
}

/// Evaluate `witness` on every cell of the plane spanned by the two axes,
/// holding the remaining parameters at the values in `fixed`.
pub fn scan(
    axis1: AxisSpec,
    axis2: AxisSpec,
    fixed: &ChannelParams<f64>,
    witness: SweepWitness,
    l_max: usize,
    tol: f64,
) -> Result<RegionMap> {
    if axis1.param == axis2.param {
        return Err(Error::InvalidParams(
            "sweep axes must name distinct parameters".into(),
        ));
    }
    let v1 = axis1.values();
    let v2 = axis2.values();
    let cells: Vec<(usize, usize)> = (0..v1.len())
        .flat_map(|i| (0..v2.len()).map(move |j| (i, j)))
        .collect();
    let flat: Vec<CellVerdict> = cells
        .into_par_iter()
        .map(|(i, j)| {
            let p = cell_params(fixed, axis1.param, v1[i], axis2.param, v2[j])?;
            eval_cell(&p, witness, l_max, tol)
        })
        .collect::<Result<_>>()?;
    let verdicts = flat.chunks(v2.len()).map(|row| row.to_vec()).collect();
    Ok(RegionMap {
        axis1,
        axis2,
        verdicts,
        witness,
        fixed: *fixed,
        l_max,
    })
}

/// Boundary polyline extracted from a [`RegionMap`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResult {
    /// One `(axis1, axis2)` point per column that contains a verdict flip:
    /// the axis2 midpoint of the first adjacent pair of non-singular cells
    /// with differing verdicts.
    pub points: Vec<(f64, f64)>,
    /// True when the map contains a single verdict class and no boundary
    /// exists.
    pub single_class: bool,
}

/// Locate the verdict boundary column by column along axis1.
pub fn extract_boundary(map: &RegionMap) -> BoundaryResult {
    let v1 = map.axis1.values();
    let v2 = map.axis2.values();
    let mut points = Vec::new();
    for (i, row) in map.verdicts.iter().enumerate() {
        let mut prev: Option<(usize, CellVerdict)> = None;
        for (j, &v) in row.iter().enumerate() {
            if v == CellVerdict::Singular {
                continue;
            }
            if let Some((pj, pv)) = prev {
                if pv != v {
                    points.push((v1[i], 0.5 * (v2[pj] + v2[j])));
                    break;
                }
            }
            prev = Some((j, v));
        }
    }
    let single_class = points.is_empty();
    BoundaryResult {
        points,
        single_class,
    }
}

/// Closed-form Markovianity boundary at the two special phases.
///
/// At `phi = 0` the eigenvalues of the reduced step matrix are real and the
/// first revival appears at step 2: `|c_2| <= |c_1|` reduces to
/// `r2 <= r1 / (1 + r1)`, so the function maps `r1` to `r2* = r1 / (1 + r1)`.
/// At `phi = pi` revivals set in exactly where those eigenvalues turn into a
/// complex pair, giving `r1* = 2 sqrt(r2) / (1 + r2)` as a function of `r2`.
pub fn analytic_boundary(phi: f64, r1_or_r2: f64) -> Result<f64> {
    let x = r1_or_r2;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParams(format!(
            "boundary argument {x} outside [0, 1]"
        )));
    }
    if phi == 0.0 {
        Ok(x / (1.0 + x))
    } else if phi == PI {
        Ok((2.0 * x.sqrt() / (1.0 + x)).min(1.0))
    } else {
        Err(Error::UnsupportedPhase(phi))
    }
}
