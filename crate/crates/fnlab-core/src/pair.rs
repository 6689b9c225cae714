//! Directed two-neuron system: A drives B with strength `gamma`, A alone
//! receives the external input `I`.
//!
//! ```text
//! dyA/dt = yA - yA^3/3 - a - zA + I
//! dzA/dt = eps (yA - b zA)
//! dyB/dt = yB - yB^3/3 - a - zB + gamma (yA - yB)
//! dzB/dt = eps (yB - b zB)
//! ```
//!
//! Provides the closed-form equilibrium with its sigma hyperbolicity tests,
//! block eigenvalues, the two Hopf curves of B, the generalized-Hopf
//! coupling `gamma*`, the phase-lock threshold `1 - b eps`, the seven-region
//! classifier of the `(I, gamma)` plane, and sampled boundary curves.

use crate::cubic::monotone_root;
use crate::desing;
use crate::model::{
    block_eigenvalues, single_hopf_points, ModelError, ModelParams, StabilityClass,
    NONHYPERBOLIC_TOL,
};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Tolerance in `(I, gamma)` inside which a query point is reported as
/// sitting on a region boundary instead of being tagged.
pub const BOUNDARY_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("drive point ({i}, {gamma}) outside I >= 0, gamma >= 0")]
    InvalidDrive { i: f64, gamma: f64 },
    #[error("no Hopf curve in B: gamma = {gamma} >= 1 - b*eps = {threshold}")]
    NoHopfInB { gamma: f64, threshold: f64 },
    #[error("Hopf curves of B are unbounded at gamma = 0")]
    UnboundedAtZeroCoupling,
    #[error("point lies within {tol} of the boundary `{curve}`")]
    Boundary { curve: &'static str, tol: f64 },
}

/// A point of the bifurcation plane: input to A and coupling A -> B.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DrivePoint {
    pub i: f64,
    pub gamma: f64,
}

impl DrivePoint {
    pub fn new(i: f64, gamma: f64) -> Self {
        DrivePoint { i, gamma }
    }
}

/// The unique equilibrium of the coupled system together with the two
/// Hopf test values `sigma1 = 1 - b eps - yA*^2` and
/// `sigma2 = 1 - b eps - gamma - yB*^2` and the resulting stability class.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairEquilibrium {
    pub y_a: f64,
    pub z_a: f64,
    pub y_b: f64,
    pub z_b: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub class: StabilityClass,
}

/// The seven behavior regions of the `(I, gamma)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    BothQuiescent,
    ASaturatedBQuiescent,
    ASaturatedBFiring,
    BothSaturated,
    PhaseLockedStrong,
    CanardMmoCandidate,
    PhaseLockedFiring,
}

impl Region {
    pub fn index(&self) -> u8 {
        match self {
            Region::BothQuiescent => 1,
            Region::ASaturatedBQuiescent => 2,
            Region::ASaturatedBFiring => 3,
            Region::BothSaturated => 4,
            Region::PhaseLockedStrong => 5,
            Region::CanardMmoCandidate => 6,
            Region::PhaseLockedFiring => 7,
        }
    }

    pub fn from_index(k: u8) -> Option<Region> {
        Some(match k {
            1 => Region::BothQuiescent,
            2 => Region::ASaturatedBQuiescent,
            3 => Region::ASaturatedBFiring,
            4 => Region::BothSaturated,
            5 => Region::PhaseLockedStrong,
            6 => Region::CanardMmoCandidate,
            7 => Region::PhaseLockedFiring,
            _ => return None,
        })
    }
}

/// Full four-dimensional vector field, state ordered `[yA, zA, yB, zB]`.
pub fn pair_vector_field(params: &ModelParams, pt: &DrivePoint, s: &[f64; 4]) -> [f64; 4] {
    let (a, b, eps) = (params.a(), params.b(), params.epsilon());
    let (ya, za, yb, zb) = (s[0], s[1], s[2], s[3]);
    [
        ya - ya * ya * ya / 3.0 - a - za + pt.i,
        eps * (ya - b * za),
        yb - yb * yb * yb / 3.0 - a - zb + pt.gamma * (ya - yb),
        eps * (yb - b * zb),
    ]
}

/// Closed-form equilibrium: `yA*` solves the single-neuron cubic at input
/// `I`, then `yB*` solves `y^3/3 + (b_tilde + gamma) y + (a - gamma yA*) = 0`.
pub fn pair_equilibrium(
    params: &ModelParams,
    pt: &DrivePoint,
) -> Result<PairEquilibrium, PairError> {
    let bt = params.b_tilde();
    let y_a = monotone_root(bt, params.a() - pt.i);
    let y_b = monotone_root(bt + pt.gamma, params.a() - pt.gamma * y_a);
    let be = params.b() * params.epsilon();
    let sigma1 = 1.0 - be - y_a * y_a;
    let sigma2 = 1.0 - be - pt.gamma - y_b * y_b;
    let class = if sigma1.abs() < NONHYPERBOLIC_TOL || sigma2.abs() < NONHYPERBOLIC_TOL {
        StabilityClass::Nonhyperbolic
    } else if sigma1 < 0.0 && sigma2 < 0.0 {
        StabilityClass::Attracting
    } else if sigma1 > 0.0 && sigma2 > 0.0 {
        StabilityClass::Repelling
    } else {
        StabilityClass::Saddle
    };
    Ok(PairEquilibrium {
        y_a,
        z_a: y_a / params.b(),
        y_b,
        z_b: y_b / params.b(),
        sigma1,
        sigma2,
        class,
    })
}

/// Eigenvalues of the block-triangular 4x4 Jacobian: the A-block pair
/// followed by the B-block pair.
///
/// The B block is `[[1 - yB^2 - gamma, -1], [eps, -b eps]]`, so its
/// determinant is `eps (1 - b + b yB^2 + b gamma)`; the coupling enters
/// through `b gamma`.
pub fn pair_eigenvalues(
    params: &ModelParams,
    eq: &PairEquilibrium,
    pt: &DrivePoint,
) -> [Complex64; 4] {
    let (b, eps) = (params.b(), params.epsilon());
    let y2a = eq.y_a * eq.y_a;
    let y2b = eq.y_b * eq.y_b;
    let det_a = eps * (1.0 - b + b * y2a);
    let det_b = eps * (1.0 - b + b * y2b + b * pt.gamma);
    let (l1, l2) = block_eigenvalues(eq.sigma1, det_a);
    let (l3, l4) = block_eigenvalues(eq.sigma2, det_b);
    [l1, l2, l3, l4]
}

/// The two Hopf curves of B at coupling `gamma`: inputs `(I0B, I1B)` where
/// `sigma2` vanishes, i.e. `yB* = -sqrt(1 - gamma - b eps)` resp. the
/// positive branch. Derived by substituting `yB*` into the B equilibrium
/// relation (`gamma yA* = yB^3/3 + (b_tilde + gamma) yB + a`) and mapping
/// `yA*` back through the A relation; the two branches are not symmetric
/// about any axis because `+a` stays outside the sign flip.
pub fn hopf_curves_b(params: &ModelParams, gamma: f64) -> Result<(f64, f64), PairError> {
    if gamma == 0.0 {
        return Err(PairError::UnboundedAtZeroCoupling);
    }
    let threshold = phase_lock_threshold(params);
    if !(0.0..threshold).contains(&gamma) {
        return Err(PairError::NoHopfInB { gamma, threshold });
    }
    let bt = params.b_tilde();
    let input_for_branch = |y_b: f64| {
        let y_a = (y_b * y_b * y_b / 3.0 + (bt + gamma) * y_b + params.a()) / gamma;
        bt * y_a + y_a * y_a * y_a / 3.0 + params.a()
    };
    let ys = (threshold - gamma).sqrt();
    Ok((input_for_branch(-ys), input_for_branch(ys)))
}

/// Cubic coefficient of B's Hopf normal form at coupling `gamma`:
/// `alpha_B = (2b - 2b gamma - b^2 eps - 1) / (8 (1 - b^2 eps))`.
pub fn alpha_b(params: &ModelParams, gamma: f64) -> f64 {
    let b = params.b();
    (2.0 * b - 2.0 * b * gamma - b * b * params.epsilon() - 1.0)
        / (8.0 * (1.0 - b * b * params.epsilon()))
}

/// The generalized-Hopf (Bautin) coupling: the root of `alpha_B(gamma)`,
/// `gamma* = (2b - b^2 eps - 1) / (2b)`. B's Hopf bifurcations are
/// subcritical below it and supercritical above it.
pub fn gamma_star(params: &ModelParams) -> f64 {
    let b = params.b();
    (2.0 * b - b * b * params.epsilon() - 1.0) / (2.0 * b)
}

/// Couplings above `1 - b eps` leave B's block attracting for every input,
/// so B follows A's limit cycle and the two neurons phase lock.
pub fn phase_lock_threshold(params: &ModelParams) -> f64 {
    1.0 - params.b() * params.epsilon()
}

/// Classify a drive point into one of the seven regions.
///
/// Points within [`BOUNDARY_TOL`] of a separating curve are reported as
/// [`PairError::Boundary`]. Region 2 vs 4 is decided by `yB*`'s side of the
/// `+-sqrt(1 - gamma - b eps)` values (equivalent to the Hopf-curve test but
/// valid for every coupling), and the 6/7 split uses the singular-limit FSN
/// II input from the desingularized system.
pub fn region_classify(params: &ModelParams, pt: &DrivePoint) -> Result<Region, PairError> {
    if !pt.i.is_finite() || !pt.gamma.is_finite() || pt.i < 0.0 || pt.gamma < 0.0 {
        return Err(PairError::InvalidDrive {
            i: pt.i,
            gamma: pt.gamma,
        });
    }
    let (i0a, i1a) = single_hopf_points(params)?;
    if (pt.i - i0a).abs() < BOUNDARY_TOL {
        return Err(PairError::Boundary {
            curve: "I0A",
            tol: BOUNDARY_TOL,
        });
    }
    if (pt.i - i1a).abs() < BOUNDARY_TOL {
        return Err(PairError::Boundary {
            curve: "I1A",
            tol: BOUNDARY_TOL,
        });
    }
    if pt.i < i0a {
        return Ok(Region::BothQuiescent);
    }

    let threshold = phase_lock_threshold(params);
    let eq = pair_equilibrium(params, pt)?;

    if pt.i > i1a {
        if eq.sigma2.abs() < BOUNDARY_TOL {
            return Err(PairError::Boundary {
                curve: "I0B/I1B",
                tol: BOUNDARY_TOL,
            });
        }
        if eq.sigma2 > 0.0 {
            return Ok(Region::ASaturatedBFiring);
        }
        if pt.gamma >= threshold {
            return Ok(Region::BothSaturated);
        }
        let fold = (threshold - pt.gamma).sqrt();
        return if eq.y_b <= -fold {
            Ok(Region::ASaturatedBQuiescent)
        } else if eq.y_b >= fold {
            Ok(Region::BothSaturated)
        } else {
            // sigma2 < 0 forces |yB*| > fold; kept for completeness
            Err(PairError::Boundary {
                curve: "I0B/I1B",
                tol: BOUNDARY_TOL,
            })
        };
    }

    // A firing
    if (pt.gamma - threshold).abs() < BOUNDARY_TOL {
        return Err(PairError::Boundary {
            curve: "gamma = 1 - b*eps",
            tol: BOUNDARY_TOL,
        });
    }
    if pt.gamma > threshold {
        return Ok(Region::PhaseLockedStrong);
    }
    if pt.gamma <= 0.0 {
        // I*(gamma) -> infinity as the coupling vanishes
        return Ok(Region::CanardMmoCandidate);
    }
    let i_star = desing::fsn2_collision(params, pt.gamma).i_star;
    if (pt.i - i_star).abs() < BOUNDARY_TOL {
        return Err(PairError::Boundary {
            curve: "I*",
            tol: BOUNDARY_TOL,
        });
    }
    Ok(if pt.i < i_star {
        Region::CanardMmoCandidate
    } else {
        Region::PhaseLockedFiring
    })
}

/// Region tag as used in map files: 1..7, or 0 for boundary points.
pub fn region_code(params: &ModelParams, pt: &DrivePoint) -> u8 {
    match region_classify(params, pt) {
        Ok(r) => r.index(),
        Err(PairError::Boundary { .. }) => 0,
        Err(_) => 0,
    }
}

/// Inclusive uniform sampling of `[min, max]` with `count` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinSpace {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl LinSpace {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        LinSpace { min, max, count }
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.value(k))
    }
}

/// Region codes over the grid, gamma-major (`code[j*nI + i]` for gamma_j, I_i).
pub fn region_map(params: &ModelParams, i_axis: &LinSpace, gamma_axis: &LinSpace) -> Vec<u8> {
    let mut out = Vec::with_capacity(i_axis.count * gamma_axis.count);
    for g in gamma_axis.values() {
        for i in i_axis.values() {
            out.push(region_code(params, &DrivePoint::new(i, g)));
        }
    }
    out
}

/// One sampled boundary curve; `param` is the running parameter of the
/// sample (gamma for the B curves and I*, I for the horizontal lock line).
#[derive(Clone, Debug, Serialize)]
pub struct CurvePoint {
    pub param: f64,
    pub i: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCurve {
    pub name: String,
    pub points: Vec<CurvePoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Marker {
    pub name: String,
    pub i: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveSet {
    pub curves: Vec<NamedCurve>,
    pub markers: Vec<Marker>,
}

/// Hopf-Hopf points: couplings at which a B Hopf curve crosses the `I1A`
/// line, located by bisection on `sigma2(I1A, gamma)` along each branch.
pub fn hopf_hopf_points(params: &ModelParams) -> Result<Vec<(f64, f64)>, PairError> {
    let (_, i1a) = single_hopf_points(params)?;
    let threshold = phase_lock_threshold(params);
    let sig2 = |gamma: f64| -> f64 {
        let eq = pair_equilibrium(params, &DrivePoint::new(i1a, gamma)).unwrap();
        eq.sigma2
    };
    let bisect = |mut lo: f64, mut hi: f64| -> Option<f64> {
        let mut flo = sig2(lo);
        if flo * sig2(hi) > 0.0 {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = sig2(mid);
            if flo * fm <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        Some(0.5 * (lo + hi))
    };
    // sigma2 < 0 at gamma -> 0+ and gamma -> threshold-, > 0 in between when
    // I1A crosses the firing window of B; the interior split point is where
    // sigma2 is maximal, approximated by a coarse scan.
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 1..200 {
        let g = threshold * k as f64 / 200.0;
        let v = sig2(g);
        if v > best.1 {
            best = (g, v);
        }
    }
    let mut out = Vec::new();
    if best.1 > 0.0 {
        if let Some(g) = bisect(1e-6, best.0) {
            out.push((i1a, g));
        }
        if let Some(g) = bisect(best.0, threshold - 1e-9) {
            out.push((i1a, g));
        }
    }
    Ok(out)
}

/// Sample every analytic boundary of the region map plus the HH and GH
/// markers.
pub fn boundary_curves(
    params: &ModelParams,
    i_axis: &LinSpace,
    gamma_axis: &LinSpace,
) -> Result<CurveSet, PairError> {
    let (i0a, i1a) = single_hopf_points(params)?;
    let threshold = phase_lock_threshold(params);
    let mut curves = Vec::new();

    let vertical = |name: &str, i: f64| NamedCurve {
        name: name.to_string(),
        points: gamma_axis
            .values()
            .map(|g| CurvePoint {
                param: g,
                i,
                gamma: g,
            })
            .collect(),
    };
    curves.push(vertical("I0A", i0a));
    curves.push(vertical("I1A", i1a));

    let in_window = |i: f64| i >= i_axis.min && i <= i_axis.max;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut istar = Vec::new();
    for g in gamma_axis.values() {
        if g > 1e-6 && g < threshold - 1e-12 {
            let (i0b, i1b) = hopf_curves_b(params, g)?;
            if in_window(i0b) {
                lower.push(CurvePoint {
                    param: g,
                    i: i0b,
                    gamma: g,
                });
            }
            if in_window(i1b) {
                upper.push(CurvePoint {
                    param: g,
                    i: i1b,
                    gamma: g,
                });
            }
        }
        if g > 1e-6 && g < 1.0 - 1e-9 {
            let c = desing::fsn2_collision(params, g);
            if in_window(c.i_star) {
                istar.push(CurvePoint {
                    param: g,
                    i: c.i_star,
                    gamma: g,
                });
            }
        }
    }
    curves.push(NamedCurve {
        name: "I0B".to_string(),
        points: lower,
    });
    curves.push(NamedCurve {
        name: "I1B".to_string(),
        points: upper,
    });
    curves.push(NamedCurve {
        name: "lock".to_string(),
        points: i_axis
            .values()
            .map(|i| CurvePoint {
                param: i,
                i,
                gamma: threshold,
            })
            .collect(),
    });
    curves.push(NamedCurve {
        name: "Istar".to_string(),
        points: istar,
    });

    let mut markers = Vec::new();
    for (i, g) in hopf_hopf_points(params)? {
        markers.push(Marker {
            name: "HH".to_string(),
            i,
            gamma: g,
        });
    }
    let gs = gamma_star(params);
    if gs > 0.0 && gs < threshold {
        let (i0b, _) = hopf_curves_b(params, gs)?;
        markers.push(Marker {
            name: "GH".to_string(),
            i: i0b,
            gamma: gs,
        });
    }
    Ok(CurveSet { curves, markers })
}
