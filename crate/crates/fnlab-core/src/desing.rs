//! Singular-limit machinery: the desingularized slow flow on the critical
//! manifold, its ordinary and folded singularities, the FSN II transcritical
//! boundary `I*(gamma)`, the codimension-two coupling, and phase-plane field
//! sampling with nullcline extraction.
//!
//! With `z` slaved to `y` on the critical manifold, the desingularized flow
//! reads
//!
//! ```text
//! yA' = rho1 = (1 - yB^2 - gamma) (yA - b zA)
//! yB' = rho2 = -gamma (yA - b zA) + (1 - yA^2) (yB - b zB)
//! ```
//!
//! Ordinary singularities (both `xi` factors zero) coincide with the
//! original equilibrium projected to the `y` plane; folded singularities sit
//! on the fold lines `yB = +-sqrt(1 - gamma)` and are roots of a cubic in
//! `yA`.

use crate::contour;
use crate::cubic::depressed_cubic_roots;
use crate::model::ModelParams;
use crate::pair::{pair_equilibrium, DrivePoint, PairError};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Trace/determinant magnitudes below this are classified Degenerate;
/// folded-singularity coordinates carry Cardano round-off, so this sits
/// well above it.
pub const DEGENERACY_TOL: f64 = 1e-7;

/// Finite-difference step for the self-check derivatives inside
/// [`transcritical_verify`].
const FD_STEP: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DesingError {
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error("ordinary singularity lies on the fold curve (FSN II collision)")]
    OnFoldCurve,
    #[error("coupling {0} outside (0, 1)")]
    OutOfDomain(f64),
    #[error("no sign change for the codimension-two condition on (0, 1)")]
    NoRoot,
    #[error("transcritical eigenvector degenerates: |1 - yA*^2| < {0} (codimension-two point)")]
    CodimensionTwo(f64),
    #[error("field sample needs n >= 2")]
    GridTooSmall,
}

/// A point of the desingularized `(yA, yB)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DesingPoint {
    #[serde(rename = "yA")]
    pub y_a: f64,
    #[serde(rename = "yB")]
    pub y_b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    Ordinary,
    /// On the fold line `yB = +sqrt(1 - gamma)`.
    FoldedUpper,
    /// On the fold line `yB = -sqrt(1 - gamma)`.
    FoldedLower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityClass {
    StableNode,
    UnstableNode,
    Saddle,
    Degenerate,
}

/// A singularity of the desingularized flow with its Jacobian invariants.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Singularity {
    pub kind: SingularityKind,
    #[serde(flatten)]
    pub location: DesingPoint,
    pub trace: f64,
    pub det: f64,
    pub class: SingularityClass,
}

/// Which fold line a folded-singularity computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoldBranch {
    Upper,
    Lower,
}

impl FoldBranch {
    fn sign(self) -> f64 {
        match self {
            FoldBranch::Upper => 1.0,
            FoldBranch::Lower => -1.0,
        }
    }
}

/// Coefficients of the folded-singularity cubic
/// `beta3 yA^3 + beta2 yA^2 + beta1 yA + beta0 = 0` on one fold branch,
/// together with its discriminant and the Cardano quantities.
///
/// `beta1` is `-gamma`: expanding the fold equations term by term, the
/// linear coefficient collects `-b*gamma` from the coupling slaving and
/// `-gamma(1-b)` from the A slaving, which sum to `-gamma`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FoldedCubicCoeffs {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    /// `> 0` three real roots, `< 0` one real root.
    pub delta: f64,
    /// `2 beta2^3 - 9 beta3 beta2 beta1 + 27 beta3^2 beta0`.
    pub sigma_cubic: f64,
    /// The three Cardano multipliers (complex in general).
    pub c_k: [Complex64; 3],
}

/// `z` slaved to the critical manifold:
/// `zA = yA - yA^3/3 - a + I`, `zB = yB - yB^3/3 - a + gamma (yA - yB)`.
pub fn slaved_z(params: &ModelParams, pt: &DrivePoint, p: &DesingPoint) -> (f64, f64) {
    let a = params.a();
    let z_a = p.y_a - p.y_a * p.y_a * p.y_a / 3.0 - a + pt.i;
    let z_b = p.y_b - p.y_b * p.y_b * p.y_b / 3.0 - a + pt.gamma * (p.y_a - p.y_b);
    (z_a, z_b)
}

/// The slow drift terms `xiA = yA - b zA`, `xiB = yB - b zB` with slaved z.
fn xi(params: &ModelParams, pt: &DrivePoint, p: &DesingPoint) -> (f64, f64) {
    let (z_a, z_b) = slaved_z(params, pt, p);
    (p.y_a - params.b() * z_a, p.y_b - params.b() * z_b)
}

/// Right-hand side of the desingularized flow.
pub fn desing_rhs(params: &ModelParams, pt: &DrivePoint, p: &DesingPoint) -> [f64; 2] {
    let (xi_a, xi_b) = xi(params, pt, p);
    let fold_b = 1.0 - p.y_b * p.y_b - pt.gamma;
    [
        fold_b * xi_a,
        -pt.gamma * xi_a + (1.0 - p.y_a * p.y_a) * xi_b,
    ]
}

/// Closed-form Jacobian of [`desing_rhs`].
///
/// The off-diagonal lower entry collapses to `-gamma - 2 yA xiB` because
/// `(1 - b + b yA^2) + b (1 - yA^2) = 1` identically.
pub fn desing_jacobian(params: &ModelParams, pt: &DrivePoint, p: &DesingPoint) -> [[f64; 2]; 2] {
    let b = params.b();
    let (xi_a, xi_b) = xi(params, pt, p);
    let dxi_a = 1.0 - b + b * p.y_a * p.y_a;
    let dxi_b = 1.0 - b + b * p.y_b * p.y_b + b * pt.gamma;
    [
        [
            (1.0 - p.y_b * p.y_b - pt.gamma) * dxi_a,
            -2.0 * p.y_b * xi_a,
        ],
        [
            -pt.gamma - 2.0 * p.y_a * xi_b,
            (1.0 - p.y_a * p.y_a) * dxi_b,
        ],
    ]
}

fn classify(trace: f64, det: f64) -> SingularityClass {
    if det.abs() < DEGENERACY_TOL || trace.abs() < DEGENERACY_TOL {
        SingularityClass::Degenerate
    } else if det < 0.0 {
        SingularityClass::Saddle
    } else if trace < 0.0 {
        SingularityClass::StableNode
    } else {
        SingularityClass::UnstableNode
    }
}

/// The ordinary singularity: the original equilibrium projected to the
/// `y` plane (its location is epsilon-free), classified by the
/// desingularized Jacobian rather than the original system's.
pub fn ordinary_singularity(
    params: &ModelParams,
    pt: &DrivePoint,
) -> Result<Singularity, DesingError> {
    let eq = pair_equilibrium(params, pt)?;
    let location = DesingPoint {
        y_a: eq.y_a,
        y_b: eq.y_b,
    };
    if (1.0 - eq.y_a * eq.y_a).abs() < DEGENERACY_TOL
        || (1.0 - eq.y_b * eq.y_b - pt.gamma).abs() < DEGENERACY_TOL
    {
        return Err(DesingError::OnFoldCurve);
    }
    let j = desing_jacobian(params, pt, &location);
    let trace = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    Ok(Singularity {
        kind: SingularityKind::Ordinary,
        location,
        trace,
        det,
        class: classify(trace, det),
    })
}

/// Folded cubic data for one branch; `gamma < 1` required by the caller.
pub fn folded_cubic_coeffs(
    params: &ModelParams,
    pt: &DrivePoint,
    branch: FoldBranch,
) -> FoldedCubicCoeffs {
    let (a, b, g) = (params.a(), params.b(), pt.gamma);
    let y_b = branch.sign() * (1.0 - g).sqrt();
    // u = -yB + yB^3/3 + a (+ gamma*yB folded into the same grouping) keeps
    // beta0 = -beta2 exact in the gamma -> 0 limit.
    let u = -y_b + y_b * y_b * y_b / 3.0 + a + g * y_b;
    let beta3 = 2.0 * b * g / 3.0;
    let beta2 = -y_b - b * u;
    let beta1 = -g;
    let beta0 = b * g * (pt.i - a) + y_b + b * u;
    let delta = 18.0 * beta3 * beta2 * beta1 * beta0 - 4.0 * beta0 * beta2.powi(3)
        + beta2 * beta2 * beta1 * beta1
        - 4.0 * beta3 * beta1.powi(3)
        - 27.0 * beta3 * beta3 * beta0 * beta0;
    let sigma_cubic =
        2.0 * beta2.powi(3) - 9.0 * beta3 * beta2 * beta1 + 27.0 * beta3 * beta3 * beta0;
    let inner = Complex64::new(sigma_cubic, 0.0)
        - (Complex64::new(-27.0 * beta3 * beta3 * delta, 0.0)).sqrt();
    let c1 = (inner / 2.0).powf(1.0 / 3.0);
    let phi = Complex64::new(-0.5, 0.5 * 3.0f64.sqrt());
    FoldedCubicCoeffs {
        beta0,
        beta1,
        beta2,
        beta3,
        delta,
        sigma_cubic,
        c_k: [c1, phi * c1, phi * phi * c1],
    }
}

fn folded_cubic_residual(c: &FoldedCubicCoeffs, y: f64) -> f64 {
    ((c.beta3 * y + c.beta2) * y + c.beta1) * y + c.beta0
}

/// Real `yA` roots of the folded cubic, depressed-kernel based with a final
/// polish against the unnormalized coefficients. Falls back to the
/// quadratic when `beta3` underflows (`gamma -> 0`).
fn folded_cubic_roots(c: &FoldedCubicCoeffs) -> Vec<f64> {
    let mut out = Vec::new();
    if c.beta3.abs() < 1e-14 {
        if c.beta2.abs() < 1e-14 {
            return out;
        }
        let disc = c.beta1 * c.beta1 - 4.0 * c.beta2 * c.beta0;
        if disc >= 0.0 {
            let s = disc.sqrt();
            out.push((-c.beta1 + s) / (2.0 * c.beta2));
            out.push((-c.beta1 - s) / (2.0 * c.beta2));
            out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        return out;
    }
    let a2 = c.beta2 / c.beta3;
    let a1 = c.beta1 / c.beta3;
    let a0 = c.beta0 / c.beta3;
    let shift = a2 / 3.0;
    let big_p = a1 - a2 * a2 / 3.0;
    let big_q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    for &t in depressed_cubic_roots(big_p / 3.0, big_q / 3.0).as_slice() {
        let mut y = t - shift;
        for _ in 0..2 {
            let f = folded_cubic_residual(c, y);
            let fp = (3.0 * c.beta3 * y + 2.0 * c.beta2) * y + c.beta1;
            if fp.abs() > 1e-300 {
                y -= f / fp;
            }
        }
        out.push(y);
    }
    out
}

/// All folded singularities at a drive point. Empty when `gamma >= 1`
/// (the fold lines `yB = +-sqrt(1 - gamma)` no longer exist); otherwise
/// 1 or 3 per branch depending on the sign of the cubic discriminant.
pub fn folded_singularities(
    params: &ModelParams,
    pt: &DrivePoint,
) -> Result<Vec<Singularity>, DesingError> {
    let mut out = Vec::new();
    if pt.gamma >= 1.0 {
        return Ok(out);
    }
    for branch in [FoldBranch::Upper, FoldBranch::Lower] {
        let coeffs = folded_cubic_coeffs(params, pt, branch);
        let y_b = branch.sign() * (1.0 - pt.gamma).sqrt();
        for y_a in folded_cubic_roots(&coeffs) {
            let location = DesingPoint { y_a, y_b };
            let (xi_a, xi_b) = xi(params, pt, &location);
            let trace = 1.0 - y_a * y_a;
            let det = -2.0 * y_b * xi_a * (pt.gamma + 2.0 * y_a * xi_b);
            out.push(Singularity {
                kind: match branch {
                    FoldBranch::Upper => SingularityKind::FoldedUpper,
                    FoldBranch::Lower => SingularityKind::FoldedLower,
                },
                location,
                trace,
                det,
                class: classify(trace, det),
            });
        }
    }
    Ok(out)
}

/// FSN II data: the input at which the ordinary singularity crosses the
/// lower fold line and collides with a folded singularity.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Fsn2 {
    /// Collision input from the derivation (`xiB = 0` solved for `yA` on the
    /// lower fold line, then mapped through the A equilibrium relation).
    pub i_star: f64,
    pub collision: DesingPoint,
    /// Value of a closed-form expression for this input that circulates
    /// in the literature, reported side by side; it disagrees with the
    /// collision derivation and with the transcritical conditions, and is
    /// not used anywhere.
    pub i_star_printed: f64,
}

/// Collision computation without domain checks; `0 < gamma < 1` required.
pub(crate) fn fsn2_collision(params: &ModelParams, gamma: f64) -> Fsn2 {
    let (a, b) = (params.a(), params.b());
    let y_b = -(1.0 - gamma).sqrt();
    let y_a = (y_b * (1.0 - b + b * gamma) + b * y_b * y_b * y_b / 3.0 + b * a) / (b * gamma);
    let i_star = params.b_tilde() * y_a + y_a * y_a * y_a / 3.0 + a;
    let printed = (1.0 / (3.0 * b.powi(3) * gamma.powi(3)))
        * ((1.0 - gamma).sqrt() + 2.0 * b * (1.0 - gamma).cbrt() / 3.0 - b * a).powi(3)
        + a;
    Fsn2 {
        i_star,
        collision: DesingPoint { y_a, y_b },
        i_star_printed: printed,
    }
}

/// The FSN II input `I*(gamma)` for `0 < gamma < 1`.
pub fn fsn2_istar(params: &ModelParams, gamma: f64) -> Result<Fsn2, DesingError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(DesingError::OutOfDomain(gamma));
    }
    Ok(fsn2_collision(params, gamma))
}

/// The two inputs at which the `yA = +-1` folded family exists.
///
/// On those fold lines `yA = b zA` pins `I = +-1/b -+ 2/3 + a` independent
/// of the coupling, which coincides with the singular-limit Hopf inputs of
/// the driver; the family carries no coupling-dependent structure and is
/// tracked only through this diagnostic.
pub fn fold_family_inputs(params: &ModelParams) -> (f64, f64) {
    let lower = -1.0 / params.b() + 2.0 / 3.0 + params.a();
    let upper = 1.0 / params.b() - 2.0 / 3.0 + params.a();
    (lower, upper)
}

/// `Some(-1)` / `Some(+1)` when `i` sits within `tol` of the input carrying
/// the `yA = -1` resp. `yA = +1` folded family.
pub fn on_fold_family(params: &ModelParams, i: f64, tol: f64) -> Option<i8> {
    let (lower, upper) = fold_family_inputs(params);
    if (i - lower).abs() < tol {
        Some(-1)
    } else if (i - upper).abs() < tol {
        Some(1)
    } else {
        None
    }
}

/// The coupling at which the FSN II collision happens at `yA = 1`, so both
/// Jacobian eigenvalues vanish (trace `1 - yA^2` and determinant together):
/// root of `f(gamma) = yB (1 - b + b gamma) + b yB^3/3 + b a - b gamma` with
/// `yB = -sqrt(1 - gamma)`.
pub fn codim2_gamma(params: &ModelParams) -> Result<f64, DesingError> {
    let (a, b) = (params.a(), params.b());
    let f = |g: f64| {
        let y_b = -(1.0 - g).sqrt();
        y_b * (1.0 - b + b * g) + b * y_b * y_b * y_b / 3.0 + b * a - b * g
    };
    let (mut lo, mut hi) = (1e-9, 1.0 - 1e-9);
    let mut flo = f(lo);
    if flo * f(hi) > 0.0 {
        return Err(DesingError::NoRoot);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Numerically verified transcritical (FSN II) conditions at
/// `(collision, I*(gamma))`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TranscriticalReport {
    pub gamma: f64,
    pub i_star: f64,
    pub collision: DesingPoint,
    /// Magnitude of the smallest Jacobian eigenvalue (condition 1).
    pub zero_eigenvalue: f64,
    /// Residual norms of `J v` and `w J` for the stated eigenvectors.
    pub right_eigenvector_residual: f64,
    pub left_eigenvector_residual: f64,
    /// Condition 2, `w . D^2_{y,I} rho . v`: closed form `2 b gamma yB* / (1 - yA*^2)`.
    pub crossing_term: f64,
    pub crossing_term_fd: f64,
    /// Condition 3, `w . D^2_y rho (v, v)`: closed form
    /// `-4 gamma yB* (1 - b + b yA*^2) / (1 - yA*^2)` (the Hessian of rho1
    /// contracted with `v`; `w = (1, 0)` removes rho2 entirely).
    pub quadratic_form: f64,
    pub quadratic_form_fd: f64,
    /// A published closed form for condition 3, reported for comparison;
    /// finite differences side with the derived form above, not with this
    /// value.
    pub quadratic_form_printed: f64,
}

impl TranscriticalReport {
    /// All three conditions: simple zero eigenvalue, nonzero crossing term,
    /// nonzero quadratic form, with finite differences confirming the
    /// closed forms to 0.1 %.
    pub fn conditions_met(&self) -> bool {
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-3 * a.abs().max(b.abs());
        self.zero_eigenvalue < 1e-8
            && self.right_eigenvector_residual < 1e-8
            && self.left_eigenvector_residual < 1e-8
            && self.crossing_term != 0.0
            && rel(self.crossing_term, self.crossing_term_fd)
            && self.quadratic_form != 0.0
            && rel(self.quadratic_form, self.quadratic_form_fd)
    }
}

/// Verify the three transcritical conditions at the FSN II point for a
/// coupling away from the codimension-two value.
pub fn transcritical_verify(
    params: &ModelParams,
    gamma: f64,
) -> Result<TranscriticalReport, DesingError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(DesingError::OutOfDomain(gamma));
    }
    let c = fsn2_collision(params, gamma);
    let p = c.collision;
    let denom = 1.0 - p.y_a * p.y_a;
    if denom.abs() < DEGENERACY_TOL {
        return Err(DesingError::CodimensionTwo(DEGENERACY_TOL));
    }
    let pt = DrivePoint::new(c.i_star, gamma);
    let j = desing_jacobian(params, &pt, &p);

    let trace = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
    let zero_eigenvalue = (0.5 * (trace + disc))
        .abs()
        .min((0.5 * (trace - disc)).abs());

    let v = [1.0, gamma / denom];
    let w = [1.0, 0.0];
    let jv = [
        j[0][0] * v[0] + j[0][1] * v[1],
        j[1][0] * v[0] + j[1][1] * v[1],
    ];
    let wj = [
        w[0] * j[0][0] + w[1] * j[1][0],
        w[0] * j[0][1] + w[1] * j[1][1],
    ];
    let norm = |u: [f64; 2]| (u[0] * u[0] + u[1] * u[1]).sqrt();

    let b = params.b();
    let crossing_term = 2.0 * b * gamma * p.y_b / denom;
    // w . D^2_{y,I} rho . v by central differences of rho1 in (yB, I);
    // the only nonzero entry of the mixed-derivative matrix is d^2 rho1 / dyB dI.
    let h = FD_STEP;
    let rho1 = |i: f64, dy_b: f64| {
        desing_rhs(
            params,
            &DrivePoint::new(i, gamma),
            &DesingPoint {
                y_a: p.y_a,
                y_b: p.y_b + dy_b,
            },
        )[0]
    };
    let rho1_full = |i: f64, dy_a: f64, dy_b: f64| {
        desing_rhs(
            params,
            &DrivePoint::new(i, gamma),
            &DesingPoint {
                y_a: p.y_a + dy_a,
                y_b: p.y_b + dy_b,
            },
        )[0]
    };
    let d_rho1_db_at = |i: f64| (rho1(i, h) - rho1(i, -h)) / (2.0 * h);
    let mixed_b = (d_rho1_db_at(c.i_star + h) - d_rho1_db_at(c.i_star - h)) / (2.0 * h);
    let d_rho1_da_at = |i: f64| (rho1_full(i, h, 0.0) - rho1_full(i, -h, 0.0)) / (2.0 * h);
    let mixed_a = (d_rho1_da_at(c.i_star + h) - d_rho1_da_at(c.i_star - h)) / (2.0 * h);
    let crossing_term_fd = mixed_a * v[0] + mixed_b * v[1];

    let quadratic_form = -4.0 * gamma * p.y_b * (1.0 - b + b * p.y_a * p.y_a) / denom;
    // v^T Hess(rho1) v by central differences
    let f = |dy_a: f64, dy_b: f64| rho1_full(c.i_star, dy_a, dy_b);
    let h11 = (f(h, 0.0) - 2.0 * f(0.0, 0.0) + f(-h, 0.0)) / (h * h);
    let h22 = (f(0.0, h) - 2.0 * f(0.0, 0.0) + f(0.0, -h)) / (h * h);
    let h12 = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    let quadratic_form_fd = h11 * v[0] * v[0] + 2.0 * h12 * v[0] * v[1] + h22 * v[1] * v[1];

    let quadratic_form_printed = (-2.0 * gamma / denom) * (p.y_b * (1.0 - b * denom) + p.y_a);

    Ok(TranscriticalReport {
        gamma,
        i_star: c.i_star,
        collision: p,
        zero_eigenvalue,
        right_eigenvector_residual: norm(jv),
        left_eigenvector_residual: norm(wj),
        crossing_term,
        crossing_term_fd,
        quadratic_form,
        quadratic_form_fd,
        quadratic_form_printed,
    })
}

/// Axis-aligned sampling window of the `(yA, yB)` plane.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub y_a: (f64, f64),
    pub y_b: (f64, f64),
}

/// Sampled desingularized field plus extracted nullclines.
#[derive(Clone, Debug)]
pub struct FieldSample {
    /// Grid coordinates, `n` values each.
    pub y_a: Vec<f64>,
    pub y_b: Vec<f64>,
    /// Row-major over `y_b` rows: `rho[j*n + i]` at `(y_a[i], y_b[j])`.
    pub rho1: Vec<f64>,
    pub rho2: Vec<f64>,
    /// Zero-level polylines of each component, in plane coordinates.
    pub rho1_nullclines: Vec<Vec<(f64, f64)>>,
    pub rho2_nullclines: Vec<Vec<(f64, f64)>>,
}

/// Evaluate the field over an `n x n` grid and extract both nullcline sets
/// by marching squares.
pub fn phase_field_sample(
    params: &ModelParams,
    pt: &DrivePoint,
    window: &Window,
    n: usize,
) -> Result<FieldSample, DesingError> {
    if n < 2 {
        return Err(DesingError::GridTooSmall);
    }
    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect()
    };
    let y_a = axis(window.y_a.0, window.y_a.1);
    let y_b = axis(window.y_b.0, window.y_b.1);
    let mut rho1 = vec![0.0; n * n];
    let mut rho2 = vec![0.0; n * n];
    for (j, &yb) in y_b.iter().enumerate() {
        for (i, &ya) in y_a.iter().enumerate() {
            let r = desing_rhs(params, pt, &DesingPoint { y_a: ya, y_b: yb });
            rho1[j * n + i] = r[0];
            rho2[j * n + i] = r[1];
        }
    }
    let rho1_nullclines = contour::zero_contours(&y_a, &y_b, &rho1);
    let rho2_nullclines = contour::zero_contours(&y_a, &y_b, &rho2);
    Ok(FieldSample {
        y_a,
        y_b,
        rho1,
        rho2,
        rho1_nullclines,
        rho2_nullclines,
    })
}
