//! Trajectory classifiers: spike trains, behavior labels (including MMO
//! signatures), phase-lock reports, and canard proximity.
//!
//! All thresholds are explicit configuration with defaults chosen for the
//! standard parameter set; they are observational conventions, not model
//! properties, and every report carries the values it used.

use crate::cubic::depressed_cubic_roots;
use crate::model::ModelParams;
use crate::pair::DrivePoint;
use crate::sim::Trajectory;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("unknown channel `{0}`")]
    UnknownChannel(String),
    #[error("window too short: {got} usable peaks, need {need} (or convergence)")]
    InsufficientData { got: usize, need: usize },
    #[error("spike train for `{0}` is empty or has fewer than two spikes")]
    EmptyTrain(String),
}

/// Spike detection: upward crossing of `threshold`, re-armed only after the
/// signal falls below `rearm`. The defaults separate relaxation spikes
/// (peaks near +2) from sub-threshold canard loops (near -1).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpikeConfig {
    pub threshold: f64,
    pub rearm: f64,
}

impl Default for SpikeConfig {
    fn default() -> Self {
        SpikeConfig {
            threshold: 0.0,
            rearm: -0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpikeTrain {
    pub channel: String,
    pub times: Vec<f64>,
}

impl SpikeTrain {
    pub fn mean_period(&self) -> Option<f64> {
        if self.times.len() < 2 {
            return None;
        }
        Some((self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64)
    }
}

/// Spike times of one channel by linear interpolation between samples.
pub fn detect_spikes(
    traj: &Trajectory,
    channel: &str,
    cfg: &SpikeConfig,
) -> Result<SpikeTrain, AnalysisError> {
    let node = traj
        .channel_index(channel)
        .ok_or_else(|| AnalysisError::UnknownChannel(channel.to_string()))?;
    let mut times = Vec::new();
    if traj.n_samples() >= 2 {
        let mut armed = traj.y(0, node) <= cfg.rearm;
        for k in 1..traj.n_samples() {
            let (y0, y1) = (traj.y(k - 1, node), traj.y(k, node));
            if armed && y0 < cfg.threshold && y1 >= cfg.threshold {
                let frac = (cfg.threshold - y0) / (y1 - y0);
                times.push(traj.t[k - 1] + frac * (traj.t[k] - traj.t[k - 1]));
                armed = false;
            } else if !armed && y1 < cfg.rearm {
                armed = true;
            }
        }
    }
    Ok(SpikeTrain {
        channel: channel.to_string(),
        times,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BehaviorTag {
    Quiescent,
    Firing,
    Saturated,
    Mmo,
    SmallOscillations,
}

/// Behavior of one channel; for MMOs, `mmo_signature` lists consecutive
/// (large-count, small-count) pairs per period.
#[derive(Clone, Debug, Serialize)]
pub struct BehaviorLabel {
    pub tag: BehaviorTag,
    pub mmo_signature: Option<Vec<(u32, u32)>>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BehaviorConfig {
    /// Peaks with prominence below this are sampling ripple, not
    /// oscillations (the inter-spike rebound of a driven relaxation
    /// waveform stays below 0.1; genuine canard loops exceed 0.4).
    pub min_prominence: f64,
    /// Two-means cluster separation in `y` required to call peaks
    /// "substantially different" in amplitude.
    pub cluster_separation: f64,
    /// Each amplitude class must hold at least this fraction of the peaks.
    pub sustain_fraction: f64,
    /// Minimum usable peak count when no convergence is detected.
    pub min_peaks: usize,
    /// Terminal channel speed below which the state counts as converged.
    pub convergence_speed: f64,
    pub spikes: SpikeConfig,
}

impl Default for BehaviorConfig {
    fn default() -> Self {
        BehaviorConfig {
            min_prominence: 0.2,
            cluster_separation: 0.5,
            sustain_fraction: 0.1,
            min_peaks: 20,
            convergence_speed: 1e-6,
            spikes: SpikeConfig::default(),
        }
    }
}

/// Local maxima of a sampled series with flat-top handling; returns
/// `(time, value, prominence)` where prominence is the drop to the higher
/// of the two flanking minima.
fn peaks_with_prominence(t: &[f64], y: &[f64]) -> Vec<(f64, f64, f64)> {
    // compress plateaus
    let mut ct = Vec::with_capacity(t.len());
    let mut cy = Vec::with_capacity(y.len());
    for k in 0..y.len() {
        if k == 0 || y[k] != cy[cy.len() - 1] {
            ct.push(t[k]);
            cy.push(y[k]);
        }
    }
    // alternating extrema
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for k in 1..cy.len().saturating_sub(1) {
        if cy[k] > cy[k - 1] && cy[k] >= cy[k + 1] {
            maxima.push(k);
        } else if cy[k] < cy[k - 1] && cy[k] <= cy[k + 1] {
            minima.push(k);
        }
    }
    let mut out = Vec::with_capacity(maxima.len());
    for &m in &maxima {
        let left = minima
            .iter()
            .rev()
            .find(|&&j| j < m)
            .map(|&j| cy[j])
            .unwrap_or(f64::NEG_INFINITY);
        let right = minima
            .iter()
            .find(|&&j| j > m)
            .map(|&j| cy[j])
            .unwrap_or(f64::NEG_INFINITY);
        let base = left.max(right);
        let prom = if base.is_finite() {
            cy[m] - base
        } else {
            f64::INFINITY
        };
        out.push((ct[m], cy[m], prom));
    }
    out
}

/// Prominence-filtered local maxima of one channel: `(time, value)` pairs
/// for every peak whose prominence reaches `min_prominence`.
pub fn prominent_peaks(
    traj: &Trajectory,
    channel: &str,
    min_prominence: f64,
) -> Result<Vec<(f64, f64)>, AnalysisError> {
    let node = traj
        .channel_index(channel)
        .ok_or_else(|| AnalysisError::UnknownChannel(channel.to_string()))?;
    let t: Vec<f64> = traj.t.clone();
    let y: Vec<f64> = (0..traj.n_samples()).map(|k| traj.y(k, node)).collect();
    Ok(peaks_with_prominence(&t, &y)
        .into_iter()
        .filter(|&(_, _, prom)| prom >= min_prominence)
        .map(|(t, v, _)| (t, v))
        .collect())
}

/// Plain two-means clustering of scalar values; returns (low center, high
/// center, labels) with `label = true` for the high cluster.
fn two_means(vals: &[f64]) -> (f64, f64, Vec<bool>) {
    let mut c1 = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut c2 = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..64 {
        let (mut s1, mut n1, mut s2, mut n2) = (0.0, 0usize, 0.0, 0usize);
        for &v in vals {
            if (v - c1).abs() <= (v - c2).abs() {
                s1 += v;
                n1 += 1;
            } else {
                s2 += v;
                n2 += 1;
            }
        }
        let d1 = if n1 > 0 { s1 / n1 as f64 } else { c1 };
        let d2 = if n2 > 0 { s2 / n2 as f64 } else { c2 };
        if d1 == c1 && d2 == c2 {
            break;
        }
        c1 = d1;
        c2 = d2;
    }
    let labels = vals
        .iter()
        .map(|&v| (v - c2).abs() < (v - c1).abs())
        .collect();
    (c1, c2, labels)
}

fn mmo_signature(labels: &[bool]) -> Vec<(u32, u32)> {
    // periods of consecutive (larges, smalls), starting at the first large
    let mut sig = Vec::new();
    let mut it = labels.iter().copied().skip_while(|&l| !l).peekable();
    while it.peek().is_some() {
        let mut large = 0u32;
        while it.peek() == Some(&true) {
            it.next();
            large += 1;
        }
        let mut small = 0u32;
        while it.peek() == Some(&false) {
            it.next();
            small += 1;
        }
        if small > 0 {
            sig.push((large, small));
        }
    }
    sig
}

/// Label one channel's behavior after the transient has been discarded.
pub fn classify_behavior(
    traj: &Trajectory,
    channel: &str,
    cfg: &BehaviorConfig,
) -> Result<BehaviorLabel, AnalysisError> {
    let node = traj
        .channel_index(channel)
        .ok_or_else(|| AnalysisError::UnknownChannel(channel.to_string()))?;
    let n = traj.n_samples();
    if n >= 2 {
        // converged if the channel barely moves over the last few samples
        let lookback = 10.min(n - 1);
        let mut speed: f64 = 0.0;
        for k in n - lookback..n {
            let dt = traj.t[k] - traj.t[k - 1];
            let dy = (traj.y(k, node) - traj.y(k - 1, node)).abs();
            let dz = (traj.z(k, node) - traj.z(k - 1, node)).abs();
            speed = speed.max((dy + dz) / dt);
        }
        if speed < cfg.convergence_speed {
            let tag = if traj.y(n - 1, node) < 0.0 {
                BehaviorTag::Quiescent
            } else {
                BehaviorTag::Saturated
            };
            return Ok(BehaviorLabel {
                tag,
                mmo_signature: None,
            });
        }
    }

    let t: Vec<f64> = traj.t.clone();
    let y: Vec<f64> = (0..n).map(|k| traj.y(k, node)).collect();
    let peaks: Vec<(f64, f64, f64)> = peaks_with_prominence(&t, &y)
        .into_iter()
        .filter(|&(_, _, prom)| prom >= cfg.min_prominence)
        .collect();
    if peaks.len() < cfg.min_peaks {
        return Err(AnalysisError::InsufficientData {
            got: peaks.len(),
            need: cfg.min_peaks,
        });
    }

    let vals: Vec<f64> = peaks.iter().map(|p| p.1).collect();
    let (lo, hi, labels) = two_means(&vals);
    let frac_hi = labels.iter().filter(|&&l| l).count() as f64 / labels.len() as f64;
    let sustained = frac_hi >= cfg.sustain_fraction && (1.0 - frac_hi) >= cfg.sustain_fraction;
    if sustained && hi - lo > cfg.cluster_separation {
        return Ok(BehaviorLabel {
            tag: BehaviorTag::Mmo,
            mmo_signature: Some(mmo_signature(&labels)),
        });
    }

    let spikes = detect_spikes(traj, channel, &cfg.spikes)?;
    Ok(BehaviorLabel {
        tag: if spikes.times.is_empty() {
            BehaviorTag::SmallOscillations
        } else {
            BehaviorTag::Firing
        },
        mmo_signature: None,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LockConfig {
    /// Locked when the offset spread stays below this fraction of the
    /// reference (first train's) mean period.
    pub tolerance_fraction: f64,
    /// Largest denominator tried for the p:q frequency ratio.
    pub max_denominator: u32,
}

impl Default for LockConfig {
    fn default() -> Self {
        LockConfig {
            tolerance_fraction: 0.02,
            max_denominator: 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseLockReport {
    pub locked: bool,
    /// Mean spike-time offset of the paired spikes (fast-time units).
    pub offset: f64,
    pub offset_std: f64,
    /// Frequency ratio `p:q` (first train : second train).
    pub ratio: (u32, u32),
    /// Offset trend per paired spike; distinguishes slow drift from jitter.
    pub drift: f64,
}

/// Pair spike trains and decide phase locking.
///
/// The spike-count ratio over the common window is rounded to the best
/// rational `p/q` with `q <= max_denominator`; every `q`-th spike of the
/// second train is then paired with the nearest preceding spike of the
/// first, and the offsets must hold steady to the lock tolerance.
pub fn phase_lock_report(
    first: &SpikeTrain,
    second: &SpikeTrain,
    cfg: &LockConfig,
) -> Result<PhaseLockReport, AnalysisError> {
    if first.times.len() < 2 {
        return Err(AnalysisError::EmptyTrain(first.channel.clone()));
    }
    if second.times.len() < 2 {
        return Err(AnalysisError::EmptyTrain(second.channel.clone()));
    }
    let r = first.times.len() as f64 / second.times.len() as f64;
    let mut best = (1u32, 1u32, f64::INFINITY);
    for q in 1..=cfg.max_denominator {
        let p = (r * q as f64).round().max(1.0) as u32;
        let err = (p as f64 / q as f64 - r).abs();
        if err < best.2 - 1e-12 {
            best = (p, q, err);
        }
    }
    let (p, q, _) = best;

    let mut offsets = Vec::new();
    for (j, &tb) in second.times.iter().enumerate() {
        if j % q as usize != 0 {
            continue;
        }
        // nearest preceding spike of the first train
        let k = first.times.partition_point(|&ta| ta <= tb);
        if k == 0 {
            continue;
        }
        offsets.push(tb - first.times[k - 1]);
    }
    if offsets.len() < 2 {
        return Err(AnalysisError::EmptyTrain(second.channel.clone()));
    }
    let n = offsets.len() as f64;
    let mean = offsets.iter().sum::<f64>() / n;
    let var = offsets.iter().map(|o| (o - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    // least-squares slope of offset against pair index
    let xbar = (n - 1.0) / 2.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, &o) in offsets.iter().enumerate() {
        num += (k as f64 - xbar) * (o - mean);
        den += (k as f64 - xbar).powi(2);
    }
    let drift = if den > 0.0 { num / den } else { 0.0 };
    let period = first.mean_period().unwrap();
    Ok(PhaseLockReport {
        locked: std < cfg.tolerance_fraction * period,
        offset: mean,
        offset_std: std,
        ratio: (p, q),
        drift,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CanardConfig {
    /// Distance threshold in units of epsilon.
    pub k: f64,
    /// Minimum contiguous slow-time duration near the repelling branch.
    pub min_slow_duration: f64,
}

impl Default for CanardConfig {
    fn default() -> Self {
        CanardConfig {
            k: 5.0,
            min_slow_duration: 0.1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CanardReport {
    pub flagged: bool,
    /// Longest contiguous slow-time interval spent within `k * eps` of the
    /// repelling middle branch.
    pub max_slow_duration: f64,
    pub k: f64,
    pub min_distance: f64,
}

/// Distance of the driven channel to the repelling middle branch of its
/// critical manifold, flagged as a candidate canard when the trajectory
/// hugs the branch for O(1) slow time.
///
/// For each sample the branch point solves the channel's fast nullcline at
/// the instantaneous driver potential and gating value; the repelling
/// segment is where the fast derivative is positive, `y^2 < 1 - gamma`, so
/// it only exists for `gamma < 1`.
pub fn canard_proximity(
    traj: &Trajectory,
    params: &ModelParams,
    pt: &DrivePoint,
    driver: &str,
    channel: &str,
    cfg: &CanardConfig,
) -> Result<CanardReport, AnalysisError> {
    let d = traj
        .channel_index(driver)
        .ok_or_else(|| AnalysisError::UnknownChannel(driver.to_string()))?;
    let c = traj
        .channel_index(channel)
        .ok_or_else(|| AnalysisError::UnknownChannel(channel.to_string()))?;
    let gamma = pt.gamma;
    let eps = params.epsilon();
    let threshold = cfg.k * eps;
    let mut max_fast = 0.0f64;
    let mut run = 0.0f64;
    let mut min_distance = f64::INFINITY;
    let mut prev_near = false;
    if gamma < 1.0 {
        let limit = (1.0 - gamma).sqrt();
        let p_coef = -(1.0 - gamma);
        for k in 0..traj.n_samples() {
            let y_drv = traj.y(k, d);
            let z = traj.z(k, c);
            // middle root of y^3/3 - (1-gamma) y + (a + z - gamma y_drv) = 0
            let q = params.a() + z - gamma * y_drv;
            let mut dist = f64::INFINITY;
            for &root in depressed_cubic_roots(p_coef, q).as_slice() {
                if root.abs() < limit {
                    dist = (traj.y(k, c) - root).abs();
                }
            }
            min_distance = min_distance.min(dist);
            let near = dist < threshold;
            if near && prev_near {
                run += traj.t[k] - traj.t[k - 1];
            } else if !near {
                run = 0.0;
            }
            max_fast = max_fast.max(run);
            prev_near = near;
        }
    }
    let max_slow_duration = max_fast * eps;
    Ok(CanardReport {
        flagged: max_slow_duration >= cfg.min_slow_duration,
        max_slow_duration,
        k: cfg.k,
        min_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::sim::{default_initial_state, integrate, Method, Trajectory};
    use crate::tree::TreeNetwork;
    use approx::assert_abs_diff_eq;

    fn synthetic(channels: &[&str], dt: f64, rows: &[Vec<f64>]) -> Trajectory {
        let mut csv = String::from("t");
        for c in channels {
            csv.push_str(&format!(",y_{c},z_{c}"));
        }
        csv.push('\n');
        for (k, row) in rows.iter().enumerate() {
            csv.push_str(&format!("{}", k as f64 * dt));
            for v in row {
                csv.push_str(&format!(",{v}"));
            }
            csv.push('\n');
        }
        Trajectory::from_csv(csv.as_bytes()).unwrap()
    }

    #[test]
    fn hysteresis_blocks_rebound_crossings() {
        // crosses zero, dips only to -0.3 (no re-arm), crosses again:
        // one spike; after a dip to -0.8 the next crossing counts
        let ys = [-1.0, 0.5, -0.3, 0.6, -0.8, 0.7];
        let rows: Vec<Vec<f64>> = ys.iter().map(|&y| vec![y, 0.0]).collect();
        let traj = synthetic(&["A"], 1.0, &rows);
        let sp = detect_spikes(&traj, "A", &SpikeConfig::default()).unwrap();
        assert_eq!(sp.times.len(), 2);
        // interpolated crossing between samples 0 and 1
        assert_abs_diff_eq!(sp.times[0], 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn firing_neuron_has_regular_spikes() {
        let p = ModelParams::standard();
        let net = TreeNetwork::two_neuron(p, 1.0, 0.0).unwrap();
        let traj = integrate(
            &net,
            &default_initial_state(&net),
            (0.0, 2000.0),
            0.01,
            Method::Rk4,
        )
        .unwrap()
        .from_time(500.0);
        let sp = detect_spikes(&traj, "A", &SpikeConfig::default()).unwrap();
        assert!(sp.times.len() > 20);
        let isi: Vec<f64> = sp.times.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = isi.iter().sum::<f64>() / isi.len() as f64;
        let cv =
            (isi.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / isi.len() as f64).sqrt() / mean;
        assert!(cv < 0.01, "inter-spike CV {cv}");

        // quiescent input -> empty train
        let net = TreeNetwork::two_neuron(p, 0.2, 0.0).unwrap();
        let traj = integrate(
            &net,
            &default_initial_state(&net),
            (0.0, 800.0),
            0.01,
            Method::Rk4,
        )
        .unwrap()
        .from_time(500.0);
        let sp = detect_spikes(&traj, "A", &SpikeConfig::default()).unwrap();
        assert!(sp.times.is_empty());
    }

    #[test]
    fn converged_states_classify_by_level() {
        let rows: Vec<Vec<f64>> = (0..200).map(|_| vec![-1.19, -1.49]).collect();
        let traj = synthetic(&["A"], 0.5, &rows);
        let label = classify_behavior(&traj, "A", &BehaviorConfig::default()).unwrap();
        assert_eq!(label.tag, BehaviorTag::Quiescent);

        let rows: Vec<Vec<f64>> = (0..200).map(|_| vec![1.3, 1.6]).collect();
        let traj = synthetic(&["A"], 0.5, &rows);
        let label = classify_behavior(&traj, "A", &BehaviorConfig::default()).unwrap();
        assert_eq!(label.tag, BehaviorTag::Saturated);
    }

    #[test]
    fn synthetic_small_oscillations_and_mmo() {
        // sub-threshold sine: single small cluster, no spikes
        let rows: Vec<Vec<f64>> = (0..4000)
            .map(|k| {
                let t = k as f64 * 0.05;
                vec![-1.0 + 0.3 * t.sin(), 0.0]
            })
            .collect();
        let traj = synthetic(&["B"], 0.05, &rows);
        let label = classify_behavior(&traj, "B", &BehaviorConfig::default()).unwrap();
        assert_eq!(label.tag, BehaviorTag::SmallOscillations);

        // alternating large excursions and small loops: MMO with a (1, 2)
        // signature
        let mut rows = Vec::new();
        for _period in 0..30 {
            for k in 0..20 {
                let t = k as f64 / 20.0;
                rows.push(vec![-1.9 + 3.9 * (std::f64::consts::PI * t).sin(), 0.0]);
            }
            for _small in 0..2 {
                for k in 0..20 {
                    let t = k as f64 / 20.0;
                    rows.push(vec![-1.5 + 0.7 * (std::f64::consts::PI * t).sin(), 0.0]);
                }
            }
        }
        let traj = synthetic(&["B"], 0.05, &rows);
        let label = classify_behavior(&traj, "B", &BehaviorConfig::default()).unwrap();
        assert_eq!(label.tag, BehaviorTag::Mmo);
        let sig = label.mmo_signature.unwrap();
        assert!(sig.windows(2).filter(|w| w[0] == w[1]).count() >= 5);
        assert!(sig.iter().filter(|&&s| s == (1, 2)).count() >= 5);
    }

    #[test]
    fn insufficient_data_is_reported() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|k| vec![(k as f64 * 0.8).sin(), (k as f64 * 0.8).cos()])
            .collect();
        let traj = synthetic(&["A"], 0.1, &rows);
        assert!(matches!(
            classify_behavior(&traj, "A", &BehaviorConfig::default()),
            Err(AnalysisError::InsufficientData { .. })
        ));
    }

    #[test]
    fn identical_trains_lock_one_to_one_with_zero_offset() {
        let times: Vec<f64> = (0..40).map(|k| 100.0 + 36.7 * k as f64).collect();
        let a = SpikeTrain {
            channel: "A".into(),
            times: times.clone(),
        };
        let b = SpikeTrain {
            channel: "B".into(),
            times,
        };
        let r = phase_lock_report(&a, &b, &LockConfig::default()).unwrap();
        assert!(r.locked);
        assert_eq!(r.ratio, (1, 1));
        assert_abs_diff_eq!(r.offset, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.offset_std, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn shifted_train_locks_with_constant_offset() {
        let ta: Vec<f64> = (0..40).map(|k| 100.0 + 36.7 * k as f64).collect();
        let tb: Vec<f64> = ta.iter().map(|t| t + 0.85).collect();
        let a = SpikeTrain {
            channel: "A".into(),
            times: ta,
        };
        let b = SpikeTrain {
            channel: "B".into(),
            times: tb,
        };
        let r = phase_lock_report(&a, &b, &LockConfig::default()).unwrap();
        assert!(r.locked);
        assert_abs_diff_eq!(r.offset, 0.85, epsilon = 1e-12);
    }

    #[test]
    fn two_to_one_ratio_detected() {
        let ta: Vec<f64> = (0..40).map(|k| 10.0 * k as f64).collect();
        let tb: Vec<f64> = (0..20).map(|k| 2.0 + 20.0 * k as f64).collect();
        let a = SpikeTrain {
            channel: "A".into(),
            times: ta,
        };
        let b = SpikeTrain {
            channel: "C".into(),
            times: tb,
        };
        let r = phase_lock_report(&a, &b, &LockConfig::default()).unwrap();
        assert_eq!(r.ratio, (2, 1));
        assert!(r.locked);
    }

    #[test]
    fn drifting_offsets_unlock() {
        let ta: Vec<f64> = (0..60).map(|k| 10.0 * k as f64).collect();
        let tb: Vec<f64> = (0..60).map(|k| 10.0 * k as f64 + 0.08 * k as f64).collect();
        let a = SpikeTrain {
            channel: "A".into(),
            times: ta,
        };
        let b = SpikeTrain {
            channel: "B".into(),
            times: tb,
        };
        let r = phase_lock_report(&a, &b, &LockConfig::default()).unwrap();
        assert!(!r.locked);
        assert!(r.drift > 0.05);
    }

    #[test]
    fn canard_flag_on_branch_hugging_trajectory() {
        let p = ModelParams::standard();
        // yB = 0, zB = -a places B exactly on the middle branch at yA = 0
        let rows: Vec<Vec<f64>> = (0..200).map(|_| vec![0.0, 0.0, 0.0, -p.a()]).collect();
        let traj = synthetic(&["A", "B"], 0.1, &rows);
        let pt = DrivePoint::new(1.0, 0.3);
        let r = canard_proximity(&traj, &p, &pt, "A", "B", &CanardConfig::default()).unwrap();
        assert!(r.flagged);
        assert!(r.min_distance < 1e-9);
        // 19.9 fast units -> 1.59 slow units of hugging
        assert!(r.max_slow_duration > 1.0);
    }

    #[test]
    fn no_branch_when_gamma_exceeds_one() {
        let p = ModelParams::standard();
        let rows: Vec<Vec<f64>> = (0..100).map(|_| vec![0.0, 0.0, 0.0, -p.a()]).collect();
        let traj = synthetic(&["A", "B"], 0.1, &rows);
        let pt = DrivePoint::new(1.7, 1.1);
        let r = canard_proximity(&traj, &p, &pt, "A", "B", &CanardConfig::default()).unwrap();
        assert!(!r.flagged);
        assert!(r.min_distance.is_infinite());
    }

    #[test]
    fn resting_far_from_branch_is_not_flagged() {
        let p = ModelParams::standard();
        let rows: Vec<Vec<f64>> = (0..300).map(|_| vec![-1.12, -1.40, -1.2, -1.5]).collect();
        let traj = synthetic(&["A", "B"], 0.1, &rows);
        let pt = DrivePoint::new(0.2, 0.05);
        let r = canard_proximity(&traj, &p, &pt, "A", "B", &CanardConfig::default()).unwrap();
        assert!(!r.flagged, "slow duration {}", r.max_slow_duration);
    }
}
