use std::fs;
use std::path::Path;

use gconc::lab::{markers, monte_carlo_sweep, trajectory, SweepConfig, TrajectoryMarkers, TrajectoryRecord};
use gconc::measures::{drop_time, rate_ratio_at, roof_estimate};
use gconc::{DensityMatrix, Measure, PureState};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Format, MeasureArg, RatesArgs, RoofArgs, TrajectoryArgs, VerifyArgs};
use crate::output::{num, resolve, sidecar_path, write_json, write_text, CliError};

pub fn run_trajectory(args: &TrajectoryArgs, out_dir: &Path) -> Result<(), CliError> {
    let params = args.roof.params();
    let records = trajectory(
        args.d,
        args.gamma,
        args.t_max,
        args.steps,
        args.ck_roofs.then_some(&params),
        args.seed,
    )?;
    let marks = markers(args.d, args.gamma)?;

    let ext = match args.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = resolve(args.out.as_deref(), out_dir, &format!("trajectory_d{}.{ext}", args.d));
    match args.format {
        Format::Csv => write_text(&path, &trajectory_csv(args.d, &records))?,
        Format::Json => write_json(&path, &records)?,
    }
    write_json(&sidecar_path(&path), &marker_json(&marks, args.ck_roofs.then_some(args.seed)))
}

fn trajectory_csv(d: usize, records: &[TrajectoryRecord]) -> String {
    let mut out = String::from("t,F,concurrence,schmidt_number,g_positive");
    let with_ck = records.first().is_some_and(|r| r.c_k.is_some());
    if with_ck {
        for k in 2..=d {
            out.push_str(&format!(",c_{k}"));
        }
    }
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}",
            num(r.t),
            num(r.fidelity),
            num(r.concurrence),
            r.schmidt_number,
            r.g_positive
        ));
        for v in r.c_k.iter().flatten() {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    out
}

fn marker_json(m: &TrajectoryMarkers, seed: Option<u64>) -> Value {
    let mut obj = Map::new();
    obj.insert("d".into(), m.d.into());
    obj.insert("gamma".into(), m.gamma.into());
    for dt in &m.drop_times {
        obj.insert(format!("t_{}", dt.k), dt.t.into());
    }
    obj.insert("rate_ratio".into(), m.rate_ratio.into());
    if let Some(s) = seed {
        obj.insert("seed".into(), s.into());
    }
    Value::Object(obj)
}

pub fn run_verify(args: &VerifyArgs, out_dir: &Path) -> Result<(), CliError> {
    let method = match args.method.as_str() {
        "auto" if args.d == 2 => "wootters".to_string(),
        "auto" => "roof".to_string(),
        m => m.to_string(),
    };
    let config = SweepConfig {
        law: args.law.name().to_string(),
        d: args.d,
        k: args.k,
        n_states: args.samples,
        n_channels: args.channels,
        n_kraus: args.n_kraus,
        method,
        params: args.roof.params(),
        seed: args.seed,
        tolerance: args.tolerance,
    };
    let summary = monte_carlo_sweep(&config)?;
    let path = resolve(args.out.as_deref(), out_dir, &format!("verify_{}_d{}.json", args.law.name(), args.d));
    write_json(&path, &summary)?;
    if summary.failures > 0 {
        return Err(CliError::Failed(format!(
            "{} of {} cases outside tolerance {:e}",
            summary.failures, summary.n_cases, summary.tolerance
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct RateRow {
    d: usize,
    t_2: f64,
    t_d: f64,
    ratio: f64,
    ratio_over_d: f64,
}

pub fn run_rates(args: &RatesArgs, out_dir: &Path) -> Result<(), CliError> {
    if args.d_min < 2 || args.d_max < args.d_min {
        return Err(CliError::Usage(format!(
            "need 2 <= d_min <= d_max, got d_min = {}, d_max = {}",
            args.d_min, args.d_max
        )));
    }
    let rows = (args.d_min..=args.d_max)
        .map(|d| {
            let ratio = rate_ratio_at(d, args.gamma)?;
            Ok(RateRow {
                d,
                t_2: drop_time(d, args.gamma, 2)?,
                t_d: drop_time(d, args.gamma, d)?,
                ratio,
                ratio_over_d: ratio / d as f64,
            })
        })
        .collect::<gconc::Result<Vec<_>>>()?;

    match args.format {
        Format::Csv => {
            let mut out = String::from("d,t_2,t_d,ratio,ratio_over_d\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.d,
                    num(r.t_2),
                    num(r.t_d),
                    num(r.ratio),
                    num(r.ratio_over_d)
                ));
            }
            write_text(&resolve(args.out.as_deref(), out_dir, "rates.csv"), &out)
        }
        Format::Json => write_json(&resolve(args.out.as_deref(), out_dir, "rates.json"), &rows),
    }
}

fn read_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let malformed = |e: serde_json::Error| CliError::Usage(format!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).map_err(malformed)?;
    if value.get("coeffs").is_some() {
        let psi: PureState = serde_json::from_value(value).map_err(malformed)?;
        Ok(psi.density())
    } else {
        serde_json::from_value(value).map_err(malformed)
    }
}

pub fn run_roof(args: &RoofArgs, out_dir: &Path) -> Result<(), CliError> {
    let measure = match (args.measure, args.k) {
        (MeasureArg::G, None) => Measure::G,
        (MeasureArg::G, Some(_)) => return Err(CliError::Usage("--k only applies to --measure ck".into())),
        (MeasureArg::Ck, Some(k)) => Measure::Ck(k),
        (MeasureArg::Ck, None) => return Err(CliError::Usage("--measure ck needs --k".into())),
    };
    let rho = read_state(&args.input)?;
    let estimate = roof_estimate(&rho, measure, &args.roof.params(), args.seed)?;
    write_json(&resolve(args.out.as_deref(), out_dir, "roof.json"), &estimate)
}
