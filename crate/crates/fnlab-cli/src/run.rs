use anyhow::{anyhow, bail, Context, Result};
use fnlab_core::*;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::Command;

pub enum CliError {
    /// Bad arguments or unreadable input: exit 2.
    Invalid(anyhow::Error),
    /// The computation itself failed (blow-up, step underflow): exit 3.
    Numeric(anyhow::Error),
}

fn invalid(e: anyhow::Error) -> CliError {
    CliError::Invalid(e)
}

pub fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Regions {
            params,
            i_range,
            gamma_range,
            out,
        } => regions(&params.params, &i_range, &gamma_range, out.as_deref()).map_err(invalid),
        Command::Curves {
            params,
            set,
            i_range,
            gamma_range,
            out,
        } => curves(&params.params, &set, &i_range, &gamma_range, out.as_deref()).map_err(invalid),
        Command::Desing {
            params,
            i,
            gamma,
            out,
            field,
            window_ya,
            window_yb,
            n,
        } => desing(
            &params.params,
            i,
            gamma,
            out.as_deref(),
            field.as_deref(),
            &window_ya,
            &window_yb,
            n,
        )
        .map_err(invalid),
        Command::Simulate {
            net,
            i,
            gamma,
            t_end,
            dt,
            method,
            thin,
            out,
        } => simulate(&net, i, gamma, t_end, dt, &method, thin, out.as_deref()),
        Command::Analyze {
            traj,
            channel,
            reference,
            transient,
            params,
            i,
            gamma,
            spike_threshold,
            rearm,
            min_prominence,
            k,
            min_slow_duration,
            lock_tolerance,
            out,
        } => analyze(AnalyzeArgs {
            traj,
            channels: channel,
            reference,
            transient,
            params: params.params,
            i,
            gamma,
            spike_threshold,
            rearm,
            min_prominence,
            k,
            min_slow_duration,
            lock_tolerance,
            out,
        })
        .map_err(invalid),
        Command::TreeHopf { net, out } => tree_hopf(&net, out.as_deref()).map_err(invalid),
    }
}

fn parse_params(spec: &Option<String>) -> Result<ModelParams> {
    match spec {
        None => Ok(ModelParams::standard()),
        Some(s) => {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 3 {
                bail!("--params expects `a,b,epsilon`, got `{s}`");
            }
            let v: Vec<f64> = parts
                .iter()
                .map(|p| p.trim().parse::<f64>().context("bad number in --params"))
                .collect::<Result<_>>()?;
            ModelParams::new(v[0], v[1], v[2]).map_err(|e| anyhow!(e))
        }
    }
}

fn parse_range(spec: &str) -> Result<LinSpace> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("range must be `min:max:count`, got `{spec}`");
    }
    let min: f64 = parts[0].trim().parse().context("bad range minimum")?;
    let max: f64 = parts[1].trim().parse().context("bad range maximum")?;
    let count: usize = parts[2].trim().parse().context("bad range count")?;
    if count == 0 || !min.is_finite() || !max.is_finite() || max < min {
        bail!("invalid range `{spec}`");
    }
    Ok(LinSpace::new(min, max, count))
}

fn parse_window(spec: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 2 {
        bail!("window must be `min:max`, got `{spec}`");
    }
    let lo: f64 = parts[0].trim().parse().context("bad window minimum")?;
    let hi: f64 = parts[1].trim().parse().context("bad window maximum")?;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        bail!("invalid window `{spec}`");
    }
    Ok((lo, hi))
}

fn writer(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

/// Round to 12 significant digits so emitted JSON matches the CSV contract.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn regions(
    params: &Option<String>,
    i_range: &str,
    gamma_range: &str,
    out: Option<&Path>,
) -> Result<()> {
    let p = parse_params(params)?;
    let i_axis = parse_range(i_range)?;
    let g_axis = parse_range(gamma_range)?;
    let rows: Vec<String> = (0..g_axis.count)
        .into_par_iter()
        .map(|j| {
            let g = g_axis.value(j);
            let mut chunk = String::new();
            for i in i_axis.values() {
                let code = region_code(&p, &DrivePoint::new(i, g));
                chunk.push_str(&format!("{},{},{}\n", num(i), num(g), code));
            }
            chunk
        })
        .collect();
    let mut w = writer(out)?;
    writeln!(w, "I,gamma,region")?;
    for chunk in rows {
        w.write_all(chunk.as_bytes())?;
    }
    Ok(())
}

fn curves(
    params: &Option<String>,
    set: &str,
    i_range: &str,
    gamma_range: &str,
    out: Option<&Path>,
) -> Result<()> {
    let p = parse_params(params)?;
    let i_axis = parse_range(i_range)?;
    let g_axis = parse_range(gamma_range)?;
    let wanted: &[&str] = match set {
        "all" => &["I0A", "I1A", "I0B", "I1B", "lock", "Istar", "HH", "GH"],
        "hopf-a" => &["I0A", "I1A"],
        "hopf-b" => &["I0B", "I1B"],
        "lock" => &["lock"],
        "istar" => &["Istar"],
        "markers" => &["HH", "GH"],
        other => bail!("unknown curve set `{other}`"),
    };
    let cs = boundary_curves(&p, &i_axis, &g_axis).map_err(|e| anyhow!(e))?;
    let mut w = writer(out)?;
    writeln!(w, "curve,param,I,gamma")?;
    for curve in &cs.curves {
        if !wanted.contains(&curve.name.as_str()) {
            continue;
        }
        for pt in &curve.points {
            writeln!(
                w,
                "{},{},{},{}",
                curve.name,
                num(pt.param),
                num(pt.i),
                num(pt.gamma)
            )?;
        }
    }
    for m in &cs.markers {
        if !wanted.contains(&m.name.as_str()) {
            continue;
        }
        writeln!(w, "{},{},{},{}", m.name, num(0.0), num(m.i), num(m.gamma))?;
    }
    Ok(())
}

fn singularity_json(s: &Singularity) -> Value {
    json!({
        "kind": format!("{:?}", s.kind),
        "yA": sig12(s.location.y_a),
        "yB": sig12(s.location.y_b),
        "trace": sig12(s.trace),
        "det": sig12(s.det),
        "class": format!("{:?}", s.class),
    })
}

#[allow(clippy::too_many_arguments)]
fn desing(
    params: &Option<String>,
    i: f64,
    gamma: f64,
    out: Option<&Path>,
    field: Option<&Path>,
    window_ya: &str,
    window_yb: &str,
    n: usize,
) -> Result<()> {
    let p = parse_params(params)?;
    let pt = DrivePoint::new(i, gamma);
    if let Some(sign) = on_fold_family(&p, i, 1e-9) {
        eprintln!(
            "note: I = {i} carries the coupling-independent yA = {sign} folded family (not inventoried)"
        );
    }
    let mut inventory = Vec::new();
    match ordinary_singularity(&p, &pt) {
        Ok(s) => inventory.push(singularity_json(&s)),
        Err(DesingError::OnFoldCurve) => {
            eprintln!(
                "note: ordinary singularity sits on the fold curve at (I, gamma) = ({i}, {gamma}); omitted"
            );
        }
        Err(e) => return Err(anyhow!(e)),
    }
    for s in folded_singularities(&p, &pt).map_err(|e| anyhow!(e))? {
        inventory.push(singularity_json(&s));
    }
    let mut w = writer(out)?;
    serde_json::to_writer_pretty(&mut w, &Value::Array(inventory))?;
    writeln!(w)?;
    drop(w);

    if let Some(path) = field {
        let wa = parse_window(window_ya)?;
        let wb = parse_window(window_yb)?;
        let fs =
            phase_field_sample(&p, &pt, &Window { y_a: wa, y_b: wb }, n).map_err(|e| anyhow!(e))?;
        let mut w = writer(Some(path))?;
        writeln!(w, "yA,yB,rho1,rho2")?;
        for (j, &yb) in fs.y_b.iter().enumerate() {
            for (k, &ya) in fs.y_a.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    num(ya),
                    num(yb),
                    num(fs.rho1[j * n + k]),
                    num(fs.rho2[j * n + k])
                )?;
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    net_path: &Path,
    i: Option<f64>,
    gamma: Option<f64>,
    t_end: f64,
    dt: f64,
    method: &str,
    thin: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(net_path)
        .with_context(|| format!("cannot read {}", net_path.display()))
        .map_err(invalid)?;
    let mut net = TreeNetwork::from_json(&text)
        .map_err(|e| anyhow!(e))
        .map_err(invalid)?;
    if let Some(i) = i {
        net = net
            .with_root_input(i)
            .map_err(|e| anyhow!(e))
            .map_err(invalid)?;
    }
    if let Some(g) = gamma {
        net = net
            .with_uniform_coupling(g)
            .map_err(|e| anyhow!(e))
            .map_err(invalid)?;
    }
    let method: Method = method.parse().map_err(|e: String| invalid(anyhow!(e)))?;
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(invalid(anyhow!("t-end must be positive")));
    }
    let ic = default_initial_state(&net);
    let traj = integrate(&net, &ic, (0.0, t_end), dt, method).map_err(|e| match e {
        SimError::BlowUp { .. } | SimError::StepUnderflow(_) => CliError::Numeric(anyhow!(e)),
        other => CliError::Invalid(anyhow!(other)),
    })?;
    let traj = if thin > 1 { traj.thin(thin) } else { traj };
    let w = writer(out).map_err(invalid)?;
    traj.to_csv(w)
        .context("writing trajectory")
        .map_err(invalid)?;
    Ok(())
}

struct AnalyzeArgs {
    traj: PathBuf,
    channels: Vec<String>,
    reference: Option<String>,
    transient: f64,
    params: Option<String>,
    i: Option<f64>,
    gamma: Option<f64>,
    spike_threshold: f64,
    rearm: f64,
    min_prominence: f64,
    k: f64,
    min_slow_duration: f64,
    lock_tolerance: f64,
    out: PathBufOpt,
}

type PathBufOpt = Option<PathBuf>;

fn label_text(tag: BehaviorTag) -> &'static str {
    match tag {
        BehaviorTag::Quiescent => "Quiescent",
        BehaviorTag::Firing => "Firing",
        BehaviorTag::Saturated => "Saturated",
        BehaviorTag::Mmo => "MMO",
        BehaviorTag::SmallOscillations => "SmallOscillations",
    }
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let p = parse_params(&args.params)?;
    let file =
        File::open(&args.traj).with_context(|| format!("cannot open {}", args.traj.display()))?;
    let traj = Trajectory::from_csv(BufReader::new(file)).map_err(|e| anyhow!(e))?;
    let tail = traj.from_time(args.transient);

    let reference = match &args.reference {
        Some(r) => r.clone(),
        None => tail
            .channels
            .first()
            .cloned()
            .ok_or_else(|| anyhow!("trajectory has no channels"))?,
    };
    if tail.channel_index(&reference).is_none() {
        bail!("reference channel `{reference}` not in trajectory");
    }
    let targets: Vec<String> = if args.channels.is_empty() {
        tail.channels.clone()
    } else {
        for c in &args.channels {
            if tail.channel_index(c).is_none() {
                bail!("channel `{c}` not in trajectory");
            }
        }
        args.channels.clone()
    };

    let spike_cfg = SpikeConfig {
        threshold: args.spike_threshold,
        rearm: args.rearm,
    };
    let behavior_cfg = BehaviorConfig {
        min_prominence: args.min_prominence,
        spikes: spike_cfg,
        ..BehaviorConfig::default()
    };
    let lock_cfg = LockConfig {
        tolerance_fraction: args.lock_tolerance,
        ..LockConfig::default()
    };
    let canard_cfg = CanardConfig {
        k: args.k,
        min_slow_duration: args.min_slow_duration,
    };

    let ref_train = detect_spikes(&tail, &reference, &spike_cfg).map_err(|e| anyhow!(e))?;
    let drive = match (args.i, args.gamma) {
        (Some(i), Some(g)) => Some(DrivePoint::new(i, g)),
        _ => None,
    };

    let mut reports = Vec::new();
    for channel in &targets {
        let spikes = detect_spikes(&tail, channel, &spike_cfg).map_err(|e| anyhow!(e))?;
        let (label, signature, note) = match classify_behavior(&tail, channel, &behavior_cfg) {
            Ok(l) => (
                Value::from(label_text(l.tag)),
                match l.mmo_signature {
                    Some(sig) => json!(sig),
                    None => Value::Null,
                },
                Value::Null,
            ),
            Err(e) => (Value::Null, Value::Null, Value::from(e.to_string())),
        };
        let lock = if channel != &reference {
            match phase_lock_report(&ref_train, &spikes, &lock_cfg) {
                Ok(r) => json!({
                    "locked": r.locked,
                    "offset": sig12(r.offset),
                    "offset_std": sig12(r.offset_std),
                    "ratio": [r.ratio.0, r.ratio.1],
                    "drift": sig12(r.drift),
                    "reference": reference,
                }),
                Err(_) => Value::Null,
            }
        } else {
            Value::Null
        };
        let canard = match &drive {
            Some(pt) if channel != &reference => {
                match canard_proximity(&tail, &p, pt, &reference, channel, &canard_cfg) {
                    Ok(r) => json!({
                        "flagged": r.flagged,
                        "max_slow_duration": sig12(r.max_slow_duration),
                        "K": r.k,
                        "min_distance": if r.min_distance.is_finite() {
                            Value::from(sig12(r.min_distance))
                        } else {
                            Value::Null
                        },
                    }),
                    Err(_) => Value::Null,
                }
            }
            _ => Value::Null,
        };
        reports.push(json!({
            "channel": channel,
            "label": label,
            "mmo_signature": signature,
            "spikes": spikes.times.iter().map(|&t| sig12(t)).collect::<Vec<_>>(),
            "lock": lock,
            "canard": canard,
            "note": note,
        }));
    }
    let mut w = writer(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &Value::Array(reports))?;
    writeln!(w)?;
    Ok(())
}

fn tree_hopf(net_path: &Path, out: Option<&Path>) -> Result<()> {
    let text = std::fs::read_to_string(net_path)
        .with_context(|| format!("cannot read {}", net_path.display()))?;
    let net = TreeNetwork::from_json(&text).map_err(|e| anyhow!(e))?;
    let mut entries = Vec::new();
    for k in 0..net.len() {
        let id = net.node(k).id.clone();
        let entry = match net.parent(k) {
            None => {
                let (i0, i1) = single_hopf_points(net.params()).map_err(|e| anyhow!(e))?;
                json!({
                    "node": id,
                    "gamma": Value::Null,
                    "i_h_minus": sig12(i0),
                    "i_h_plus": sig12(i1),
                })
            }
            Some((_, gamma)) => match node_hopf_inputs(&net, &id) {
                Ok((lo, hi)) => json!({
                    "node": id,
                    "gamma": sig12(gamma),
                    "i_h_minus": sig12(lo),
                    "i_h_plus": sig12(hi),
                }),
                Err(e) => json!({
                    "node": id,
                    "gamma": sig12(gamma),
                    "i_h_minus": Value::Null,
                    "i_h_plus": Value::Null,
                    "note": e.to_string(),
                }),
            },
        };
        entries.push(entry);
    }
    let mut w = writer(out)?;
    serde_json::to_writer_pretty(&mut w, &Value::Array(entries))?;
    writeln!(w)?;
    Ok(())
}
