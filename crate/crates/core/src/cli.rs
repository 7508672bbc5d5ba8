//! Command implementations behind the `norcode` binary.
//!
//! Every command takes a flat parameter map keyed by canonical flag names
//! (`a-delta0`, `tail`, ...). The map is what a config file holds and what
//! the run manifest records, so a result file carries everything needed to
//! regenerate it with [`replay`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analytic::{self, ChannelPoint, Regime, TableMethod, TableRow};
use crate::channel::LevelGrid;
use crate::codec::{self, CodeBook, ReadVector};
use crate::error::{Error, Result};
use crate::montecarlo::{self, BerEstimate, ErrorClass, Prediction, SimConfig};

pub type Params = BTreeMap<String, String>;

pub const COMMANDS: [&str; 5] = ["table1", "analytic", "simulate", "sweep", "roundtrip"];

/// Every parameter key any command understands.
pub const KNOWN_KEYS: [&str; 15] = [
    "a-delta0",
    "exp-margin",
    "aw",
    "tail",
    "protected",
    "trials",
    "seed",
    "shards",
    "stratified",
    "stratum-trials",
    "data-mode",
    "format",
    "out",
    "method",
    "mode",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format '{other}'"))),
        }
    }
}

/// Provenance embedded in every result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Params,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub output: Option<String>,
}

/// A finished command: manifest, rendered body and the machine-readable results.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub manifest: RunManifest,
    pub format: Format,
    pub rendered: String,
    pub results: Value,
}

impl CommandOutput {
    /// `{"manifest": ..., "results": ...}`.
    pub fn document(&self) -> Value {
        json!({ "manifest": self.manifest, "results": self.results })
    }
}

/// Parse a flat `key = value` config file. Blank lines and `#` comments are
/// skipped; keys may be written with or without leading dashes.
pub fn parse_config(text: &str) -> Result<Params> {
    let mut params = Params::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, "true"),
            },
        };
        let key = key.trim_start_matches('-');
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: missing key", n + 1)));
        }
        params.insert(key.to_string(), value.to_string());
    }
    Ok(params)
}

/// Layer `overrides` on top of `base`.
pub fn merge(mut base: Params, overrides: Params) -> Params {
    base.extend(overrides);
    base
}

fn get_f64(params: &Params, key: &str) -> Result<Option<f64>> {
    params
        .get(key)
        .map(|v| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config(format!("--{key}: '{v}' is not a number")))
        })
        .transpose()
}

fn get_bool(params: &Params, key: &str) -> Result<Option<bool>> {
    params
        .get(key)
        .map(|v| match v.as_str() {
            "true" | "yes" | "1" | "on" => Ok(true),
            "false" | "no" | "0" | "off" => Ok(false),
            _ => Err(Error::Config(format!("--{key}: '{v}' is not a boolean"))),
        })
        .transpose()
}

/// Count such as `10000000`, `1e7` or `1_000_000`.
pub fn parse_count(text: &str) -> Result<u64> {
    let cleaned = text.replace('_', "");
    if let Ok(n) = cleaned.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = cleaned.parse().map_err(|_| Error::Config(format!("'{text}' is not a count")))?;
    if !x.is_finite() || x < 0.0 || x.fract() != 0.0 {
        return Err(Error::Config(format!("'{text}' is not a whole count")));
    }
    if x >= u64::MAX as f64 {
        return Err(Error::Config(format!("trial count {text} overflows")));
    }
    Ok(x as u64)
}

fn get_count(params: &Params, key: &str) -> Result<Option<u64>> {
    params.get(key).map(|v| parse_count(v)).transpose()
}

fn format_of(params: &Params) -> Result<Format> {
    params.get("format").map(|f| f.parse()).transpose().map(|f| f.unwrap_or(Format::Table))
}

/// `a*D0` from either `--a-delta0` or `--exp-margin`, never both.
fn a_delta0_of(params: &Params) -> Result<f64> {
    match (get_f64(params, "a-delta0")?, get_f64(params, "exp-margin")?) {
        (Some(_), Some(_)) => Err(Error::Config("--a-delta0 and --exp-margin are mutually exclusive".into())),
        (Some(x), None) => Ok(x),
        (None, Some(e)) => {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::Domain(format!("--exp-margin must be in (0, 1), got {e}")));
            }
            Ok(-e.ln())
        }
        (None, None) => Err(Error::Config("one of --a-delta0 or --exp-margin is required".into())),
    }
}

fn channel_point_of(params: &Params) -> Result<ChannelPoint> {
    let ad0 = a_delta0_of(params)?;
    let aw = get_f64(params, "aw")?.unwrap_or(0.0);
    let tail = get_f64(params, "tail")?.ok_or_else(|| Error::Config("--tail is required".into()))?;
    ChannelPoint::new(ad0, aw, tail)
}

/// Simulation configuration from parameters.
pub fn sim_config_of(params: &Params) -> Result<SimConfig> {
    let point = channel_point_of(params)?;
    let mut c = SimConfig::dimensionless(point.a_delta0, point.a_w, point.tail);
    if let Some(p) = get_bool(params, "protected")? {
        c.protected = p;
    }
    if let Some(n) = get_count(params, "trials")? {
        c.trials = n;
    }
    if let Some(s) = get_count(params, "seed")? {
        c.seed = s;
    }
    if let Some(s) = get_count(params, "shards")? {
        c.shards = u32::try_from(s).map_err(|_| Error::Config(format!("--shards {s} is too large")))?;
    }
    if let Some(s) = get_bool(params, "stratified")? {
        c.stratified = s;
    }
    if let Some(m) = params.get("data-mode") {
        c.data_mode = m.parse()?;
    }
    if let Some(list) = params.get("stratum-trials") {
        let counts: Vec<u64> = list.split(',').map(|s| parse_count(s.trim())).collect::<Result<_>>()?;
        let arr: [u64; 4] =
            counts.try_into().map_err(|_| Error::Config("--stratum-trials needs 4 comma-separated counts".into()))?;
        c.stratum_trials = Some(arr);
    }
    c.validate()?;
    Ok(c)
}

/// One-significant-figure rendering, e.g. `5.E-06`.
pub fn sci1(x: f64) -> String {
    if x == 0.0 {
        return "0.E+00".to_string();
    }
    let s = format!("{x:.0e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}.E{sign}{:02}", exp.abs())
}

/// Full-precision export rendering (17 significant digits).
pub fn full(x: f64) -> String {
    format!("{x:.16e}")
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Run `command` with `params`.
pub fn execute(command: &str, params: &Params) -> Result<CommandOutput> {
    let started = unix_now();
    if let Some(key) = params.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(Error::Config(format!("unknown parameter '{key}'")));
    }
    let format = format_of(params)?;
    let (rendered, results, seed) = match command {
        "table1" => cmd_table1(params, format)?,
        "analytic" => cmd_analytic(params, format)?,
        "simulate" => cmd_simulate(params, format)?,
        "sweep" => cmd_sweep(params, format)?,
        "roundtrip" => cmd_roundtrip(format)?,
        other => return Err(Error::Config(format!("unknown command '{other}'"))),
    };
    let manifest = RunManifest {
        command: command.to_string(),
        parameters: params.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        started_unix: started,
        finished_unix: unix_now(),
        output: params.get("out").cloned(),
    };
    let rendered = match format {
        Format::Json => {
            let doc = json!({ "manifest": manifest, "results": results });
            serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"
        }
        _ => rendered,
    };
    Ok(CommandOutput { manifest, format, rendered, results })
}

/// Re-run the command recorded in a result document's manifest, optionally
/// redirecting the output.
pub fn replay(document: &str, out: Option<String>) -> Result<CommandOutput> {
    let doc: Value =
        serde_json::from_str(document).map_err(|e| Error::Config(format!("not a result document: {e}")))?;
    let manifest: RunManifest = serde_json::from_value(doc["manifest"].clone())
        .map_err(|e| Error::Config(format!("result document has no usable manifest: {e}")))?;
    let mut params = manifest.parameters;
    params.remove("out");
    if let Some(path) = out {
        params.insert("out".into(), path);
    }
    execute(&manifest.command, &params)
}

/// Write the output to `--out` (or return it for stdout). Non-JSON files get
/// a `<out>.manifest.json` sidecar.
pub fn emit(output: &CommandOutput) -> Result<Option<String>> {
    match &output.manifest.output {
        None => Ok(Some(output.rendered.clone())),
        Some(path) => {
            std::fs::write(path, &output.rendered)?;
            if output.format != Format::Json {
                let sidecar = format!("{path}.manifest.json");
                let text = serde_json::to_string_pretty(&output.manifest).expect("manifest serializes");
                std::fs::write(sidecar, text + "\n")?;
            }
            Ok(None)
        }
    }
}

type Rendered = (String, Value, Option<u64>);

fn table1_rows(params: &Params) -> Result<Vec<TableRow>> {
    let method = match params.get("method").map(String::as_str) {
        None | Some("budget") => TableMethod::Budget,
        Some("approximation") => TableMethod::Approximation,
        Some(other) => return Err(Error::Config(format!("unknown table method '{other}'"))),
    };
    Ok(analytic::table1_with(method))
}

pub fn render_table1(rows: &[TableRow], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("exp_margin,tail,e0,e2,ratio\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    full(r.exp_margin),
                    full(r.tail),
                    full(r.e0),
                    full(r.e2),
                    full(r.ratio)
                );
            }
        }
        _ => {
            out.push_str("e^-aD0 T      E0     E2     E2/E0\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{} {} {} {} {}",
                    sci1(r.exp_margin),
                    sci1(r.tail),
                    sci1(r.e0),
                    sci1(r.e2),
                    sci1(r.ratio)
                );
            }
        }
    }
    out
}

fn cmd_table1(params: &Params, format: Format) -> Result<Rendered> {
    let rows = table1_rows(params)?;
    let results = serde_json::to_value(&rows).expect("rows serialize");
    Ok((render_table1(&rows, format), results, None))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticReport {
    pub a_delta0: f64,
    pub a_w: f64,
    pub tail: f64,
    pub a_delta: f64,
    pub p0: f64,
    pub e0: f64,
    pub e0_approx: f64,
    pub e2_i: f64,
    pub e2_ii: f64,
    pub e2_iii: f64,
    pub e2_total: f64,
    pub ratio: f64,
    pub ratio_approximation: f64,
    pub e2_tail_dominated: f64,
    pub e2_swap_dominated: f64,
    pub regime: Regime,
    pub scaling_law_e0_3_2: f64,
}

pub fn analytic_report(point: &ChannelPoint) -> AnalyticReport {
    let base = analytic::baseline_rates(point);
    let b = analytic::protected_rates(point);
    let forms = analytic::regime_approximations(point);
    AnalyticReport {
        a_delta0: point.a_delta0,
        a_w: point.a_w,
        tail: point.tail,
        a_delta: point.a_delta(),
        p0: base.p0,
        e0: base.e0,
        e0_approx: base.e0_approx,
        e2_i: b.e2_i,
        e2_ii: b.e2_ii,
        e2_iii: b.e2_iii,
        e2_total: b.e2_total,
        ratio: b.ratio,
        ratio_approximation: analytic::ratio_approximation(point),
        e2_tail_dominated: forms.tail_dominated,
        e2_swap_dominated: forms.swap_dominated,
        regime: forms.regime,
        scaling_law_e0_3_2: analytic::scaling_law(base.e0),
    }
}

fn report_pairs(value: &Value) -> Vec<(String, String)> {
    value
        .as_object()
        .map(|m| {
            m.iter()
                .map(|(k, v)| {
                    let s = match v {
                        Value::Number(n) => full(n.as_f64().unwrap_or(f64::NAN)),
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    (k.clone(), s)
                })
                .collect()
        })
        .unwrap_or_default()
}

fn render_pairs(pairs: &[(String, String)], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("key,value\n");
            for (k, v) in pairs {
                let _ = writeln!(out, "{k},{v}");
            }
        }
        _ => {
            let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in pairs {
                let _ = writeln!(out, "{k:<width$}  {v}");
            }
        }
    }
    out
}

fn cmd_analytic(params: &Params, format: Format) -> Result<Rendered> {
    let point = channel_point_of(params)?;
    let report = analytic_report(&point);
    let value = serde_json::to_value(&report).expect("report serializes");
    let pairs = report_pairs(&value);
    Ok((render_pairs(&pairs, format), value, None))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassComparison {
    pub class: ErrorClass,
    pub empirical_rate: f64,
    pub analytic_rate: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub config: SimConfig,
    pub estimate: BerEstimate,
    pub prediction: Prediction,
    /// The analytic rate this mode is compared to: E2 when protected, E0 otherwise.
    pub analytic_rate: f64,
    pub empirical_over_analytic: f64,
    pub classes: Vec<ClassComparison>,
}

fn ratio_or_nan(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        f64::NAN
    }
}

pub fn simulate_report(config: &SimConfig) -> Result<SimulateReport> {
    let estimate = montecarlo::run(config)?;
    let prediction = montecarlo::prediction(config)?;
    let analytic_rate = if config.protected { prediction.e2_total } else { prediction.e0 };
    let classes = if config.protected {
        [
            (ErrorClass::TypeI, prediction.e2_i),
            (ErrorClass::TypeII, prediction.e2_ii),
            (ErrorClass::TypeIII, prediction.e2_iii),
        ]
        .into_iter()
        .map(|(class, analytic_rate)| {
            let empirical_rate = estimate.class_rate_per_bit(class);
            ClassComparison { class, empirical_rate, analytic_rate, ratio: ratio_or_nan(empirical_rate, analytic_rate) }
        })
        .collect()
    } else {
        Vec::new()
    };
    Ok(SimulateReport {
        config: config.clone(),
        empirical_over_analytic: ratio_or_nan(estimate.event_rate_per_bit, analytic_rate),
        estimate,
        prediction,
        analytic_rate,
        classes,
    })
}

fn cmd_simulate(params: &Params, format: Format) -> Result<Rendered> {
    let config = sim_config_of(params)?;
    let report = simulate_report(&config)?;
    let e = &report.estimate;
    let mut pairs = vec![
        ("mode".to_string(), if config.protected { "protected" } else { "unprotected" }.to_string()),
        ("estimator".to_string(), if e.weighted { "stratified" } else { "plain" }.to_string()),
        ("trials".to_string(), e.trials.to_string()),
        ("word_error_events".to_string(), full(e.word_error_events)),
        ("event_rate_per_bit".to_string(), full(e.event_rate_per_bit)),
        ("ci95_lo".to_string(), full(e.ci95.lo)),
        ("ci95_hi".to_string(), full(e.ci95.hi)),
        ("hamming_rate".to_string(), full(e.hamming_rate)),
        ("clamped_reads".to_string(), full(e.clamped_reads)),
        ("analytic_rate".to_string(), full(report.analytic_rate)),
        ("empirical_over_analytic".to_string(), full(report.empirical_over_analytic)),
    ];
    for c in &report.classes {
        let name = serde_json::to_value(c.class).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        pairs.push((format!("{name}_empirical"), full(c.empirical_rate)));
        pairs.push((format!("{name}_analytic"), full(c.analytic_rate)));
        pairs.push((format!("{name}_ratio"), full(c.ratio)));
    }
    pairs.push(("other_empirical".to_string(), full(e.class_rate_per_bit(ErrorClass::Other))));
    let value = serde_json::to_value(&report).expect("report serializes");
    Ok((render_pairs(&pairs, format), value, Some(config.seed)))
}

/// Values from a list `5,6,7` or an inclusive range `start:stop:step`.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("invalid range '{text}'"));
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<f64> =
            text.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| start + i as f64 * step).collect()
    } else {
        text.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(values)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub a_delta0: f64,
    pub e0: f64,
    pub e2: f64,
    pub e0_sim: Option<f64>,
    pub e2_sim: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub a_w: f64,
    pub tail: f64,
    pub points: Vec<SweepPoint>,
    pub slope_analytic: Option<f64>,
    pub slope_simulated: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Analytic,
    Simulate,
    Both,
}

pub fn sweep_report(
    a_delta0s: &[f64],
    a_w: f64,
    tail: f64,
    mode: SweepMode,
    sim: Option<&SimConfig>,
) -> Result<SweepReport> {
    let mut points = Vec::with_capacity(a_delta0s.len());
    for &ad0 in a_delta0s {
        let p = ChannelPoint::new(ad0, a_w, tail)?;
        let b = analytic::protected_rates(&p);
        let (e0_sim, e2_sim) = if mode == SweepMode::Analytic {
            (None, None)
        } else {
            let base = sim.ok_or_else(|| Error::Config("simulated sweep needs a simulation config".into()))?;
            let mut c = base.clone();
            c.delta0 = ad0 / c.a;
            c.w = a_w / c.a;
            c.tail = tail;
            c.protected = false;
            c.stratified = false;
            let e0 = montecarlo::run_trials(&c)?.event_rate_per_bit;
            c.protected = true;
            c.stratified = base.stratified;
            let e2 = montecarlo::run(&c)?.event_rate_per_bit;
            (Some(e0), Some(e2))
        };
        points.push(SweepPoint { a_delta0: ad0, e0: b.e0, e2: b.e2_total, e0_sim, e2_sim });
    }
    let slope_analytic = if mode == SweepMode::Simulate {
        None
    } else {
        analytic::loglog_slope(&points.iter().map(|p| (p.e0, p.e2)).collect::<Vec<_>>())
    };
    let slope_simulated = if mode == SweepMode::Analytic {
        None
    } else {
        let pts: Vec<(f64, f64)> = points.iter().filter_map(|p| Some((p.e0_sim?, p.e2_sim?))).collect();
        analytic::loglog_slope(&pts)
    };
    Ok(SweepReport { a_w, tail, points, slope_analytic, slope_simulated })
}

fn cmd_sweep(params: &Params, format: Format) -> Result<Rendered> {
    let a_delta0s = match (params.get("a-delta0"), params.get("exp-margin")) {
        (Some(_), Some(_)) => return Err(Error::Config("--a-delta0 and --exp-margin are mutually exclusive".into())),
        (Some(r), None) => parse_range(r)?,
        (None, Some(r)) => parse_range(r)?
            .into_iter()
            .map(|e| {
                if e > 0.0 && e < 1.0 {
                    Ok(-e.ln())
                } else {
                    Err(Error::Domain(format!("--exp-margin must be in (0, 1), got {e}")))
                }
            })
            .collect::<Result<_>>()?,
        (None, None) => return Err(Error::Config("sweep needs --a-delta0 or --exp-margin values".into())),
    };
    let a_w = get_f64(params, "aw")?.unwrap_or(0.0);
    let tail = get_f64(params, "tail")?.unwrap_or(1.0);
    let mode = match params.get("mode").map(String::as_str) {
        None | Some("analytic") => SweepMode::Analytic,
        Some("simulate") => SweepMode::Simulate,
        Some("both") => SweepMode::Both,
        Some(other) => return Err(Error::Config(format!("unknown sweep mode '{other}'"))),
    };
    let sim = if mode == SweepMode::Analytic {
        None
    } else {
        let mut p = params.clone();
        p.remove("exp-margin");
        p.insert("a-delta0".into(), a_delta0s[0].to_string());
        p.insert("aw".into(), a_w.to_string());
        p.insert("tail".into(), tail.to_string());
        Some(sim_config_of(&p)?)
    };
    let report = sweep_report(&a_delta0s, a_w, tail, mode, sim.as_ref())?;
    let opt = |x: Option<f64>| x.map(full).unwrap_or_default();
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("a_delta0,e0,e2,e0_sim,e2_sim\n");
            for p in &report.points {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    full(p.a_delta0),
                    full(p.e0),
                    full(p.e2),
                    opt(p.e0_sim),
                    opt(p.e2_sim)
                );
            }
        }
        _ => {
            let _ = writeln!(out, "{:<10} {:<12} {:<12} {:<12} {:<12}", "a*D0", "E0", "E2", "E0 sim", "E2 sim");
            let short = |x: Option<f64>| x.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into());
            for p in &report.points {
                let _ = writeln!(
                    out,
                    "{:<10} {:<12} {:<12} {:<12} {:<12}",
                    p.a_delta0,
                    format!("{:.4e}", p.e0),
                    format!("{:.4e}", p.e2),
                    short(p.e0_sim),
                    short(p.e2_sim)
                );
            }
            let slope = |x: Option<f64>| x.map(|s| format!("{s:.4}")).unwrap_or_else(|| "absent".into());
            let _ = writeln!(out, "slope analytic   {}", slope(report.slope_analytic));
            let _ = writeln!(out, "slope simulated  {}", slope(report.slope_simulated));
        }
    }
    let value = serde_json::to_value(&report).expect("report serializes");
    Ok((out, value, sim.map(|c| c.seed)))
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundtripReport {
    pub codewords: usize,
    pub bytes_ok: usize,
    pub decoded_words_even: bool,
    pub passed: bool,
}

/// Exhaustive zero-noise self-test of the 5-level codec.
pub fn roundtrip_report() -> Result<RoundtripReport> {
    let book = CodeBook::five_level();
    let grid = LevelGrid::new(5, 0.0, 1.0, 0.0)?;
    let mut bytes_ok = 0;
    let mut even = true;
    for b in 0..=255u8 {
        let word = book.encode(b)?;
        let out = codec::read_byte(&ReadVector::at_levels(word.symbols(), &grid)?, &grid, &book)?;
        even &= codec::parity_ok(&out.decoded());
        if out.byte == Some(b) && out.parity_passed {
            bytes_ok += 1;
        }
    }
    let codewords = book.len();
    Ok(RoundtripReport {
        codewords,
        bytes_ok,
        decoded_words_even: even,
        passed: codewords == 313 && bytes_ok == 256 && even,
    })
}

fn cmd_roundtrip(format: Format) -> Result<Rendered> {
    let report = roundtrip_report()?;
    let value = serde_json::to_value(&report).expect("report serializes");
    let pairs = report_pairs(&value)
        .into_iter()
        .map(|(k, v)| {
            let v = match k.as_str() {
                "codewords" => report.codewords.to_string(),
                "bytes_ok" => report.bytes_ok.to_string(),
                _ => v,
            };
            (k, v)
        })
        .collect::<Vec<_>>();
    Ok((render_pairs(&pairs, format), value, None))
}
