//! Single FitzHugh-Nagumo neuron.
//!
//! ```text
//! dy/dt = y - y^3/3 - a - z + I
//! dz/dt = eps (y - b z)
//! ```
//!
//! Closed-form equilibrium, block eigenvalues, the two Hopf input values
//! `(I0, I1)`, the first Lyapunov (cubic) coefficient, and the
//! quiescent/firing/saturated regime classifier.

use crate::cubic::{depressed_cubic_roots, CubicRoots};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance below which an eigenvalue real part (equivalently a
/// block trace) is treated as zero: well above closed-form round-off, far
/// below any O(eps) effect.
pub const NONHYPERBOLIC_TOL: f64 = 1e-9;

/// Tolerance on `I` when deciding whether a query sits on a Hopf value.
pub const REGIME_BOUNDARY_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("equilibrium cubic has three real roots; unique-equilibrium assumption violated")]
    DegenerateCubic,
    #[error("no Hopf pair: 1 - b*eps <= 0")]
    NoHopf,
    #[error("cubic coefficient undefined: 1 - b^2*eps = 0")]
    DegenerateLyapunov,
    #[error("input {i} lies within {tol} of the Hopf value {hopf}")]
    RegimeBoundary { i: f64, hopf: f64, tol: f64 },
}

/// Intrinsic FN constants shared by every neuron in a network.
///
/// Construction enforces `0 < a < 1`, `0 < b < 1`, `0 < eps < 1`, the
/// ranges under which the equilibrium cubic is strictly monotone and the
/// equilibrium unique for every input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    a: f64,
    b: f64,
    epsilon: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    epsilon: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = ModelError;
    fn try_from(r: RawParams) -> Result<Self, ModelError> {
        ModelParams::new(r.a, r.b, r.epsilon)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> RawParams {
        RawParams {
            a: p.a,
            b: p.b,
            epsilon: p.epsilon,
        }
    }
}

impl ModelParams {
    pub fn new(a: f64, b: f64, epsilon: f64) -> Result<Self, ModelError> {
        for (name, v) in [("a", a), ("b", b), ("epsilon", epsilon)] {
            if !v.is_finite() || v <= 0.0 || v >= 1.0 {
                return Err(ModelError::InvalidParams(format!(
                    "{name} = {v} outside (0, 1)"
                )));
            }
        }
        Ok(ModelParams { a, b, epsilon })
    }

    /// The reference parameter set: a = 0.875, b = 0.8, eps = 0.08.
    pub fn standard() -> Self {
        ModelParams {
            a: 0.875,
            b: 0.8,
            epsilon: 0.08,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `1/b - 1`, always recomputed so it can never drift from `b`.
    pub fn b_tilde(&self) -> f64 {
        1.0 / self.b - 1.0
    }
}

/// State of one neuron: membrane potential `y`, gating variable `z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuronState {
    pub y: f64,
    pub z: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityClass {
    Attracting,
    Repelling,
    Saddle,
    Nonhyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Quiescent,
    Firing,
    Saturated,
}

/// Right-hand side of the single-neuron system.
pub fn single_vector_field(params: &ModelParams, i: f64, s: &NeuronState) -> [f64; 2] {
    [
        s.y - s.y * s.y * s.y / 3.0 - params.a() - s.z + i,
        params.epsilon() * (s.y - params.b() * s.z),
    ]
}

/// Equilibrium cubic for a neuron whose total constant drive is `i`:
/// `y^3/3 + b_tilde*y + (a - i) = 0`, and `z = y/b`.
pub(crate) fn equilibrium_roots(params: &ModelParams, i: f64) -> CubicRoots {
    depressed_cubic_roots(params.b_tilde(), params.a() - i)
}

/// The unique equilibrium `(y*, z*)` with `z* = y*/b`.
pub fn single_equilibrium(params: &ModelParams, i: f64) -> Result<NeuronState, ModelError> {
    let roots = equilibrium_roots(params, i);
    if roots.len() != 1 {
        return Err(ModelError::DegenerateCubic);
    }
    let y = roots.as_slice()[0];
    Ok(NeuronState {
        y,
        z: y / params.b(),
    })
}

/// Eigenvalues of a 2x2 block with the given trace and determinant.
pub(crate) fn block_eigenvalues(trace: f64, det: f64) -> (Complex64, Complex64) {
    let disc = trace * trace - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        (
            Complex64::new(0.5 * (trace + s), 0.0),
            Complex64::new(0.5 * (trace - s), 0.0),
        )
    } else {
        let s = (-disc).sqrt();
        (
            Complex64::new(0.5 * trace, 0.5 * s),
            Complex64::new(0.5 * trace, -0.5 * s),
        )
    }
}

/// Jacobian eigenvalues at an equilibrium of the single neuron:
/// trace `1 - y^2 - b eps`, determinant `eps (1 - b + b y^2)`.
pub fn single_eigenvalues(params: &ModelParams, eq: &NeuronState) -> (Complex64, Complex64) {
    let y2 = eq.y * eq.y;
    let trace = 1.0 - y2 - params.b() * params.epsilon();
    let det = params.epsilon() * (1.0 - params.b() + params.b() * y2);
    block_eigenvalues(trace, det)
}

/// Hopf input values `(I0, I1)`, `I0 < I1`.
///
/// The equilibrium trace vanishes at `y*^2 = 1 - b eps`; substituting both
/// signs into `I = y^3/3 + b_tilde*y + a` gives the closed forms, which are
/// symmetric about `a` (`I0 + I1 = 2a`).
pub fn single_hopf_points(params: &ModelParams) -> Result<(f64, f64), ModelError> {
    let s2 = 1.0 - params.b() * params.epsilon();
    if s2 <= 0.0 {
        return Err(ModelError::NoHopf);
    }
    let ys = s2.sqrt();
    let offset = ys * ys * ys / 3.0 + params.b_tilde() * ys;
    Ok((params.a() - offset, params.a() + offset))
}

/// First Lyapunov (cubic) coefficient of the Hopf normal form:
/// `alpha = (2b - b^2 eps - 1) / (8 (1 - b^2 eps))`.
///
/// `alpha > 0` makes the Hopf bifurcations subcritical, `alpha < 0`
/// supercritical.
pub fn cubic_coefficient_single(params: &ModelParams) -> Result<f64, ModelError> {
    let b = params.b();
    let denom = 1.0 - b * b * params.epsilon();
    if denom.abs() < 1e-15 {
        return Err(ModelError::DegenerateLyapunov);
    }
    Ok((2.0 * b - b * b * params.epsilon() - 1.0) / (8.0 * denom))
}

/// Quiescent / Firing / Saturated by position of `i` relative to the Hopf
/// pair; inputs within [`REGIME_BOUNDARY_TOL`] of either Hopf value are
/// reported as a boundary error rather than forced into a regime.
pub fn classify_single_regime(params: &ModelParams, i: f64) -> Result<Regime, ModelError> {
    let (i0, i1) = single_hopf_points(params)?;
    for hopf in [i0, i1] {
        if (i - hopf).abs() < REGIME_BOUNDARY_TOL {
            return Err(ModelError::RegimeBoundary {
                i,
                hopf,
                tol: REGIME_BOUNDARY_TOL,
            });
        }
    }
    Ok(if i < i0 {
        Regime::Quiescent
    } else if i < i1 {
        Regime::Firing
    } else {
        Regime::Saturated
    })
}
