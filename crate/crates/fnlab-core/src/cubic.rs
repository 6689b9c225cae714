//! Depressed-cubic root kernel shared by every equilibrium computation.
//!
//! All equilibrium conditions in this crate reduce to the same scalar form
//!
//! ```text
//! y^3/3 + p*y + q = 0
//! ```
//!
//! with `p > 0` whenever the model assumptions hold (unique real root).
//! The kernel also handles `p <= 0` so the fold-curve cubics can reuse it
//! after normalization.

/// Real roots of `y^3/3 + p*y + q = 0`, in ascending order.
///
/// Double and triple roots are reported with multiplicity, so the root
/// count is always 1 or 3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicRoots {
    vals: [f64; 3],
    len: usize,
}

impl CubicRoots {
    fn one(y: f64) -> Self {
        CubicRoots {
            vals: [y, 0.0, 0.0],
            len: 1,
        }
    }

    fn three(mut v: [f64; 3]) -> Self {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        CubicRoots { vals: v, len: 3 }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.vals[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn residual(p: f64, q: f64, y: f64) -> f64 {
    y * y * y / 3.0 + p * y + q
}

/// Two Newton steps; enough to polish Cardano output to full f64 accuracy
/// away from repeated roots, and harmless at them.
fn polish(p: f64, q: f64, mut y: f64) -> f64 {
    for _ in 0..2 {
        let f = residual(p, q, y);
        let fp = y * y + p;
        if fp.abs() > 1e-300 {
            y -= f / fp;
        }
    }
    y
}

/// All real roots of `y^3/3 + p*y + q = 0`.
///
/// The discriminant-equivalent `d = (3q/2)^2 + p^3` decides the branch:
/// `d > 0` one real root (algebraic Cardano), `d < 0` three real roots
/// (trigonometric form, which avoids complex cancellation), `d == 0`
/// repeated roots in closed form.
pub fn depressed_cubic_roots(p: f64, q: f64) -> CubicRoots {
    debug_assert!(p.is_finite() && q.is_finite());
    let w = -1.5 * q;
    let d = w * w + p * p * p;

    if d > 0.0 {
        // One real root. The two cube-root terms multiply to -p, so the
        // smaller one is recovered by division instead of subtraction.
        let s = d.sqrt();
        let big = w + s.copysign(if w >= 0.0 { 1.0 } else { -1.0 });
        let u = big.cbrt();
        let y = if u == 0.0 { 0.0 } else { u - p / u };
        CubicRoots::one(polish(p, q, y))
    } else if d < 0.0 {
        // Three real roots; requires p < 0.
        let m = (-p).sqrt();
        let arg = (w / (m * m * m)).clamp(-1.0, 1.0);
        let theta = arg.acos();
        let mut v = [0.0; 3];
        for (k, slot) in v.iter_mut().enumerate() {
            let ang = (theta - 2.0 * std::f64::consts::PI * k as f64) / 3.0;
            *slot = polish(p, q, 2.0 * m * ang.cos());
        }
        CubicRoots::three(v)
    } else if p == 0.0 {
        // q must be 0 as well: triple root at the origin... unless q != 0
        // and w*w underflowed, in which case the single-root branch applies.
        if q == 0.0 {
            CubicRoots::three([0.0; 3])
        } else {
            CubicRoots::one(polish(p, q, (-3.0 * q).cbrt()))
        }
    } else {
        // d == 0 with p != 0: a double root plus a simple one.
        let double = -1.5 * q / p;
        let simple = 3.0 * q / p;
        CubicRoots::three([simple, double, double])
    }
}

/// The unique real root when `p > 0` (strictly monotone cubic).
pub fn monotone_root(p: f64, q: f64) -> f64 {
    debug_assert!(p > 0.0);
    let r = depressed_cubic_roots(p, q);
    r.as_slice()[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Bracketing bisection, the independent oracle for the kernel.
    pub(crate) fn bisect_root(p: f64, q: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        let mut flo = residual(p, q, lo);
        let fhi = residual(p, q, hi);
        assert!(
            flo * fhi <= 0.0,
            "no bracket for p={p}, q={q} on [{lo}, {hi}]"
        );
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = residual(p, q, mid);
            if flo * fm <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
            if hi - lo < tol {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn odd_function_origin_root() {
        let r = depressed_cubic_roots(0.25, 0.0);
        assert_eq!(r.as_slice(), &[0.0]);
    }

    #[test]
    fn matches_bisection_oracle_on_spec_points() {
        // p=0.25, q=0.875 -> single negative root
        let want = bisect_root(0.25, 0.875, -2.0, 0.0, 1e-12);
        let got = monotone_root(0.25, 0.875);
        assert!((got - want).abs() < 1e-10, "got {got}, oracle {want}");
        assert!((got - (-1.199408035244035)).abs() < 1e-9);

        // p=0.25, q=-1.125 -> single positive root
        let want = bisect_root(0.25, -1.125, 0.0, 2.0, 1e-12);
        let got = monotone_root(0.25, -1.125);
        assert!((got - want).abs() < 1e-10);
        assert!((got - 1.3340939878224036).abs() < 1e-9);
    }

    #[test]
    fn triple_and_double_roots_with_multiplicity() {
        let r = depressed_cubic_roots(0.0, 0.0);
        assert_eq!(r.as_slice(), &[0.0, 0.0, 0.0]);

        // (y-1)^2 (y+2)/3 = y^3/3 - y + 2/3: double root at 1, simple at -2.
        let r = depressed_cubic_roots(-1.0, 2.0 / 3.0);
        assert_eq!(r.len(), 3);
        let s = r.as_slice();
        assert!((s[0] + 2.0).abs() < 1e-9);
        assert!((s[1] - 1.0).abs() < 1e-7);
        assert!((s[2] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn random_monotone_cubics_agree_with_bisection() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let p = rng.gen_range(1e-3..5.0);
            let q = rng.gen_range(-5.0..5.0);
            let y = monotone_root(p, q);
            // expand a bracket around 0
            let mut hi = 1.0;
            while residual(p, q, -hi) * residual(p, q, hi) > 0.0 {
                hi *= 2.0;
            }
            let oracle = bisect_root(p, q, -hi, hi, 1e-13);
            assert!(
                (y - oracle).abs() < 1e-9,
                "p={p} q={q}: kernel {y} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn random_cubics_have_small_residuals_and_legal_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p = rng.gen_range(-3.0..3.0);
            let q = rng.gen_range(-3.0..3.0);
            let r = depressed_cubic_roots(p, q);
            assert!(r.len() == 1 || r.len() == 3);
            for &y in r.as_slice() {
                assert!(
                    residual(p, q, y).abs() < 1e-10,
                    "residual too large at p={p} q={q} y={y}"
                );
            }
        }
    }
}
