//! Time integration of validated tree networks in the fast timescale.
//!
//! State layout is `[y_0, z_0, y_1, z_1, ...]` in the network's canonical
//! (root-first) node order. Fixed-step classical RK4 is the default;
//! `rk45` is an embedded Dormand-Prince 5(4) pair with adaptive internal
//! steps and output on the same fixed grid.

use crate::model::{single_equilibrium, NeuronState};
use crate::tree::TreeNetwork;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use thiserror::Error;

/// Any state component beyond this magnitude aborts the run.
pub const BLOWUP_LIMIT: f64 = 1e6;

/// Deterministic nudge applied to the root's membrane potential when no
/// initial condition is given, so runs start off the slow manifold.
pub const ROOT_PERTURBATION: f64 = 0.01;

const RTOL: f64 = 1e-8;
const ATOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("state exceeded {limit:e} at t = {t}")]
    BlowUp { t: f64, limit: f64 },
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("empty integration span [{0}, {1}]")]
    EmptySpan(f64, f64),
    #[error("adaptive step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("unknown channel `{0}`")]
    UnknownChannel(String),
    #[error("trajectory file: {0}")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Rk45,
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "rk45" => Ok(Method::Rk45),
            other => Err(format!("unknown method `{other}` (expected rk4 or rk45)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4",
            Method::Rk45 => "rk45",
        })
    }
}

/// A sampled solution of a network integration.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub t: Vec<f64>,
    states: Vec<f64>,
    dim: usize,
    pub dt: f64,
    pub method: Method,
    pub net_digest: String,
    /// Channel ids, one per node, in state order.
    pub channels: Vec<String>,
}

impl Trajectory {
    pub fn n_samples(&self) -> usize {
        self.t.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn state(&self, sample: usize) -> &[f64] {
        &self.states[sample * self.dim..(sample + 1) * self.dim]
    }

    pub fn channel_index(&self, id: &str) -> Option<usize> {
        self.channels.iter().position(|c| c == id)
    }

    pub fn y(&self, sample: usize, node: usize) -> f64 {
        self.states[sample * self.dim + 2 * node]
    }

    pub fn z(&self, sample: usize, node: usize) -> f64 {
        self.states[sample * self.dim + 2 * node + 1]
    }

    /// Copy of the tail with `t >= t0` (transient discard).
    pub fn from_time(&self, t0: f64) -> Trajectory {
        let start = self.t.partition_point(|&t| t < t0 - 1e-12);
        Trajectory {
            t: self.t[start..].to_vec(),
            states: self.states[start * self.dim..].to_vec(),
            dim: self.dim,
            dt: self.dt,
            method: self.method,
            net_digest: self.net_digest.clone(),
            channels: self.channels.clone(),
        }
    }

    /// Keep every `every`-th sample (the first always included).
    pub fn thin(&self, every: usize) -> Trajectory {
        let every = every.max(1);
        let mut t = Vec::new();
        let mut states = Vec::new();
        for k in (0..self.n_samples()).step_by(every) {
            t.push(self.t[k]);
            states.extend_from_slice(self.state(k));
        }
        Trajectory {
            t,
            states,
            dim: self.dim,
            dt: self.dt * every as f64,
            method: self.method,
            net_digest: self.net_digest.clone(),
            channels: self.channels.clone(),
        }
    }

    /// CSV with header `t,y_<id>,z_<id>,...`, 12 significant digits.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut header = String::from("t");
        for id in &self.channels {
            header.push_str(&format!(",y_{id},z_{id}"));
        }
        writeln!(w, "{header}")?;
        let mut line = String::new();
        for k in 0..self.n_samples() {
            line.clear();
            line.push_str(&format!("{:.11e}", self.t[k]));
            for v in self.state(k) {
                line.push_str(&format!(",{v:.11e}"));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn from_csv<R: BufRead>(r: R) -> Result<Trajectory, SimError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| SimError::Format("empty file".into()))?
            .map_err(|e| SimError::Format(e.to_string()))?;
        let cols: Vec<&str> = header.trim().split(',').collect();
        if cols.first() != Some(&"t") {
            return Err(SimError::Format("first column must be t".into()));
        }
        let mut channels = Vec::new();
        let mut k = 1;
        while k < cols.len() {
            let y = cols[k];
            let z = cols.get(k + 1).copied().unwrap_or("");
            let id = y
                .strip_prefix("y_")
                .ok_or_else(|| SimError::Format(format!("expected y_<id>, got `{y}`")))?;
            if z.strip_prefix("z_") != Some(id) {
                return Err(SimError::Format(format!("expected z_{id}, got `{z}`")));
            }
            channels.push(id.to_string());
            k += 2;
        }
        let dim = 2 * channels.len();
        let mut t = Vec::new();
        let mut states = Vec::new();
        for line in lines {
            let line = line.map_err(|e| SimError::Format(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.trim().split(',');
            let tv: f64 = parts
                .next()
                .unwrap()
                .parse()
                .map_err(|e| SimError::Format(format!("bad t: {e}")))?;
            t.push(tv);
            let mut count = 0;
            for p in parts {
                let v: f64 = p
                    .parse()
                    .map_err(|e| SimError::Format(format!("bad value: {e}")))?;
                states.push(v);
                count += 1;
            }
            if count != dim {
                return Err(SimError::Format(format!(
                    "row has {count} state values, expected {dim}"
                )));
            }
        }
        if t.len() < 2 {
            return Err(SimError::Format("need at least two samples".into()));
        }
        let dt = t[1] - t[0];
        Ok(Trajectory {
            t,
            states,
            dim,
            dt,
            method: Method::Rk4,
            net_digest: String::new(),
            channels,
        })
    }
}

/// Network vector field. Per node `i` with optional parent `p`:
/// `dy = y - y^3/3 - a - z + I_i + gamma_i (y_p - y)`, `dz = eps (y - b z)`.
pub fn vector_field(net: &TreeNetwork, state: &[f64], out: &mut [f64]) {
    let p = net.params();
    let (a, b, eps) = (p.a(), p.b(), p.epsilon());
    for k in 0..net.len() {
        let y = state[2 * k];
        let z = state[2 * k + 1];
        let mut dy = y - y * y * y / 3.0 - a - z + net.node(k).input;
        if let Some((pk, gamma)) = net.parent(k) {
            dy += gamma * (state[2 * pk] - y);
        }
        out[2 * k] = dy;
        out[2 * k + 1] = eps * (y - b * z);
    }
}

/// Default initial state: every node at the single-neuron rest point for
/// zero input, with [`ROOT_PERTURBATION`] added to the root's `y`;
/// per-node overrides from the network file take precedence.
pub fn default_initial_state(net: &TreeNetwork) -> Vec<f64> {
    let rest = single_equilibrium(net.params(), 0.0)
        .expect("valid parameters always give a unique rest point");
    let mut state = Vec::with_capacity(2 * net.len());
    for k in 0..net.len() {
        let s = net
            .initial_override(&net.node(k).id)
            .unwrap_or(if net.parent(k).is_none() {
                NeuronState {
                    y: rest.y + ROOT_PERTURBATION,
                    z: rest.z,
                }
            } else {
                rest
            });
        state.push(s.y);
        state.push(s.z);
    }
    state
}

fn check_finite(state: &[f64], t: f64) -> Result<(), SimError> {
    if state
        .iter()
        .any(|v| !v.is_finite() || v.abs() > BLOWUP_LIMIT)
    {
        return Err(SimError::BlowUp {
            t,
            limit: BLOWUP_LIMIT,
        });
    }
    Ok(())
}

/// Integrate over `t_span` with output spacing `dt`.
///
/// The span is rounded to a whole number of output intervals. `rk4` takes
/// one fixed step per interval; `rk45` steps adaptively (relative
/// tolerance 1e-8, absolute 1e-10) and lands exactly on the output grid.
pub fn integrate(
    net: &TreeNetwork,
    ic: &[f64],
    t_span: (f64, f64),
    dt: f64,
    method: Method,
) -> Result<Trajectory, SimError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SimError::InvalidStep(dt));
    }
    let span = t_span.1 - t_span.0;
    let n = (span / dt).round() as i64;
    if n < 1 {
        return Err(SimError::EmptySpan(t_span.0, t_span.1));
    }
    let n = n as usize;
    let dim = 2 * net.len();
    assert_eq!(ic.len(), dim, "initial state has wrong dimension");

    let mut t = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity((n + 1) * dim);
    let mut x = ic.to_vec();
    check_finite(&x, t_span.0)?;
    t.push(t_span.0);
    states.extend_from_slice(&x);

    match method {
        Method::Rk4 => {
            let mut k1 = vec![0.0; dim];
            let mut k2 = vec![0.0; dim];
            let mut k3 = vec![0.0; dim];
            let mut k4 = vec![0.0; dim];
            let mut tmp = vec![0.0; dim];
            for step in 1..=n {
                vector_field(net, &x, &mut k1);
                for i in 0..dim {
                    tmp[i] = x[i] + 0.5 * dt * k1[i];
                }
                vector_field(net, &tmp, &mut k2);
                for i in 0..dim {
                    tmp[i] = x[i] + 0.5 * dt * k2[i];
                }
                vector_field(net, &tmp, &mut k3);
                for i in 0..dim {
                    tmp[i] = x[i] + dt * k3[i];
                }
                vector_field(net, &tmp, &mut k4);
                for i in 0..dim {
                    x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                let tk = t_span.0 + step as f64 * dt;
                check_finite(&x, tk)?;
                t.push(tk);
                states.extend_from_slice(&x);
            }
        }
        Method::Rk45 => {
            let mut tcur = t_span.0;
            let mut h = dt;
            for step in 1..=n {
                let target = t_span.0 + step as f64 * dt;
                while tcur < target - 1e-12 {
                    h = h.min(target - tcur);
                    if h < 1e-13 {
                        return Err(SimError::StepUnderflow(tcur));
                    }
                    let (xn, err) = dopri_step(net, &x, h);
                    if err <= 1.0 {
                        tcur += h;
                        x = xn;
                        check_finite(&x, tcur)?;
                        let grow = if err == 0.0 {
                            5.0
                        } else {
                            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                        };
                        h *= grow;
                    } else {
                        h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                    }
                }
                tcur = target;
                t.push(target);
                states.extend_from_slice(&x);
            }
        }
    }

    Ok(Trajectory {
        t,
        states,
        dim,
        dt,
        method,
        net_digest: net.digest().to_string(),
        channels: net.ids(),
    })
}

/// One Dormand-Prince 5(4) step; returns the 5th-order state and the
/// scaled error norm (accept when <= 1).
fn dopri_step(net: &TreeNetwork, x: &[f64], h: f64) -> (Vec<f64>, f64) {
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let dim = x.len();
    let mut k = vec![vec![0.0; dim]; 7];
    let mut tmp = vec![0.0; dim];
    vector_field(net, x, &mut k[0]);
    for stage in 0..6 {
        for i in 0..dim {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                acc += A[stage][j] * kj[i];
            }
            tmp[i] = x[i] + h * acc;
        }
        let (head, tail) = k.split_at_mut(stage + 1);
        let _ = head;
        vector_field(net, &tmp, &mut tail[0]);
    }
    // stage row 6 of A is the 5th-order solution weights
    let mut xn = vec![0.0; dim];
    for i in 0..dim {
        let mut acc = 0.0;
        for j in 0..6 {
            acc += A[5][j] * k[j][i];
        }
        xn[i] = x[i] + h * acc;
    }
    let mut err_sq = 0.0;
    for i in 0..dim {
        let mut e = 0.0;
        for j in 0..7 {
            e += E[j] * k[j][i];
        }
        let scale = ATOL + RTOL * x[i].abs().max(xn[i].abs());
        let r = h * e / scale;
        err_sq += r * r;
    }
    (xn, (err_sq / dim as f64).sqrt())
}
