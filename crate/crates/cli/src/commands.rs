use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use sumroots::interval::rational_to_f64;
use sumroots::loggap::{gap_exponents, gap_verify, log_sum_order, sj_bounds_check, LogOrderJson, LogSumInstance};
use sumroots::numerics::format_rational;
use sumroots::ode_sum::{
    escalate, ode_sum_check, ode_wronskian_check, special_family_check, sqrt_sum_check, BoundStatus, OdeSumInstance,
    SpecialFamilyInstance, SqrtSumInstance, WronskianBoundStatus, PRECISION_CAP,
};
use sumroots::series::SeriesJson;
use sumroots::slp::{parse_slp, Slp};
use sumroots::sqtest::{density_experiment, density_to_string, perfect_square_slp, q_exponent, SquareTestConfig};
use sumroots::ssr::{binomial_instance, decide_ssr_eq, decide_ssr_slp, partition_one_dim, SsrInstanceJson};
use sumroots::wronskian::{check_order_identity, wronskian_det, SeriesFamily};
use sumroots::{Error, RngHandle, TruncatedSeries};

use crate::{LoggapCommand, PsCommand, RunConfig, SlpCommand, SqtestCommand, SsrCommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Indeterminate | Error::Unresolved | Error::BitLimitExceeded { .. }) => 3,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let code = match self {
            CliError::Usage(_) => "usage",
            CliError::Lib(e) => e.code(),
        };
        json!({ "error": { "code": code, "message": self.to_string() } })
    }
}

pub struct Outcome {
    pub report: Value,
    pub violation: bool,
}

fn ok(report: Value) -> Result<Outcome, CliError> {
    Ok(Outcome { report, violation: false })
}

pub fn write_report(report: &Value, path: Option<&Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("values serialize");
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn parse_int(text: &str, what: &str) -> Result<BigInt, CliError> {
    text.trim().parse().map_err(|_| CliError::Usage(format!("{what}: not an integer: {text:?}")))
}

fn square_config(cfg: &RunConfig) -> Result<SquareTestConfig, CliError> {
    let sq = SquareTestConfig {
        rounds: cfg.rounds,
        grh_constant: cfg.grh_c.clone(),
        prime_bound_exponent_override: None,
    };
    sq.validate()?;
    Ok(sq)
}

fn provenance(cfg: &RunConfig) -> Value {
    json!({
        "seed": cfg.seed,
        "rounds": cfg.rounds,
        "grh_c": format_rational(&cfg.grh_c),
        "grh_constant_is_assumed": true,
    })
}

/// Series input; the precision defaults to `--trunc`.
#[derive(Deserialize)]
struct SeriesInput {
    coeffs: Vec<String>,
    #[serde(default)]
    precision: Option<usize>,
}

impl SeriesInput {
    fn build(&self, trunc: usize) -> Result<TruncatedSeries, CliError> {
        let json = SeriesJson { coeffs: self.coeffs.clone(), precision: self.precision.unwrap_or(trunc) };
        Ok(TruncatedSeries::from_json(&json)?)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FamilyInput {
    Members { members: Vec<SeriesInput> },
    List(Vec<SeriesInput>),
}

fn series_report(s: &TruncatedSeries) -> Value {
    json!({ "series": to_value(&s.to_json()), "order": to_value(&s.order()) })
}

pub fn ps(command: PsCommand, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (file, op): (PathBuf, &str) = match &command {
        PsCommand::Order { file } => (file.clone(), "order"),
        PsCommand::Sqrt { file } => (file.clone(), "sqrt"),
        PsCommand::Log { file } => (file.clone(), "log"),
        PsCommand::Exp { file } => (file.clone(), "exp"),
        PsCommand::Pow { file, .. } => (file.clone(), "pow"),
    };
    let s = read_json::<SeriesInput>(&file)?.build(cfg.trunc)?;
    let result = match &command {
        PsCommand::Order { .. } => {
            return ok(json!({ "op": op, "order": to_value(&s.order()), "precision": s.precision() }));
        }
        PsCommand::Sqrt { .. } => s.sqrt()?,
        PsCommand::Log { .. } => s.log()?,
        PsCommand::Exp { .. } => s.exp()?,
        PsCommand::Pow { alpha, .. } => s.pow_rat(alpha)?,
    };
    let mut report = series_report(&result);
    report["op"] = json!(op);
    ok(report)
}

/// Members without an explicit precision are rebuilt at doubled `--trunc`
/// while the result is indeterminate, up to the precision cap.
pub fn wronskian_analyze(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let members = match read_json::<FamilyInput>(file)? {
        FamilyInput::Members { members } | FamilyInput::List(members) => members,
    };
    let can_grow = members.iter().any(|m| m.precision.is_none());
    let mut trunc = escalated(cfg);
    loop {
        let family = SeriesFamily::new(
            members
                .iter()
                .map(|m| m.build(trunc))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        match check_order_identity(&family) {
            Err(Error::Indeterminate) if can_grow && trunc < PRECISION_CAP => {
                trunc = (trunc * 2).min(PRECISION_CAP);
            }
            Err(e) => return Err(e.into()),
            Ok(identity) => {
                let det = wronskian_det(&family)?;
                let violation = !identity.all_hold();
                let mut report = to_value(&identity);
                report["determinant"] = to_value(&det.to_json());
                return Ok(Outcome { report, violation });
            }
        }
    }
}

fn escalated(cfg: &RunConfig) -> usize {
    cfg.trunc.clamp(1, PRECISION_CAP)
}

pub fn ode_verify(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let raw: Value = read_json(file)?;
    let parse_err = |e: serde_json::Error| CliError::Usage(format!("{}: {e}", file.display()));
    if raw.get("kind").is_some() {
        let inst: SpecialFamilyInstance = serde_json::from_value(raw).map_err(parse_err)?;
        inst.validate()?;
        let mut precision = escalated(cfg).max(inst.bound() + 1);
        let r = loop {
            let r = special_family_check(&inst, precision)?;
            if r.report.status != BoundStatus::Indeterminate || precision >= PRECISION_CAP {
                break r;
            }
            precision = (precision * 2).min(PRECISION_CAP);
        };
        if r.report.status == BoundStatus::Indeterminate {
            return Err(Error::Indeterminate.into());
        }
        let violation = r.report.status == BoundStatus::Violated;
        return Ok(Outcome { report: to_value(&r), violation });
    }
    let inst: OdeSumInstance = serde_json::from_value(raw).map_err(parse_err)?;
    let sum = escalate(escalated(cfg), |p| ode_sum_check(&inst, p))?;
    if sum.status == BoundStatus::Indeterminate {
        return Err(Error::Indeterminate.into());
    }
    let wr = ode_wronskian_check(&inst)?;
    let violation = sum.status == BoundStatus::Violated || wr.status == WronskianBoundStatus::Violated;
    Ok(Outcome { report: json!({ "sum": to_value(&sum), "wronskian": to_value(&wr) }), violation })
}

pub fn sqrtsum_verify(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let inst: SqrtSumInstance = read_json(file)?;
    let r = escalate(escalated(cfg), |p| sqrt_sum_check(&inst, p))?;
    if r.status == BoundStatus::Indeterminate {
        return Err(Error::Indeterminate.into());
    }
    let violation = r.status == BoundStatus::Violated;
    Ok(Outcome { report: to_value(&r), violation })
}

fn read_slp(path: &Path) -> Result<Slp, CliError> {
    Ok(parse_slp(&read_text(path)?)?)
}

pub fn slp(command: SlpCommand, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        SlpCommand::Eval { file } => {
            let p = read_slp(&file)?;
            let v = p.eval_exact(cfg.bit_limit)?;
            ok(json!({ "size": p.size(), "value": v.to_string(), "bits": v.bits() }))
        }
        SlpCommand::Evalmod { file, modulus } => {
            let p = read_slp(&file)?;
            let m = parse_int(&modulus, "--modulus")?;
            let v = p.eval_mod(&m)?;
            ok(json!({ "size": p.size(), "modulus": m.to_string(), "value": v.to_string() }))
        }
        SlpCommand::Product { first, second } => {
            let (a, b) = (read_slp(&first)?, read_slp(&second)?);
            let prod = Slp::product(&a, &b);
            ok(json!({ "size": prod.size(), "program": prod.to_text() }))
        }
    }
}

pub fn sqtest(command: SqtestCommand, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        SqtestCommand::Run { file, value } => {
            let program = match (file, value) {
                (Some(f), None) => read_slp(&f)?,
                (None, Some(v)) => Slp::for_integer(&parse_int(&v, "--value")?),
                _ => return Err(CliError::Usage("give an SLP file or --value".into())),
            };
            let mut rng = RngHandle::new(cfg.seed);
            let report = perfect_square_slp(&program, &square_config(cfg)?, &mut rng)?;
            ok(to_value(&report))
        }
        SqtestCommand::Density { a, x } => {
            let a = parse_int(&a, "--a")?;
            let d = density_experiment(&a, x)?;
            ok(json!({
                "a": a.to_string(),
                "x": x,
                "density": density_to_string(&d),
                "approx": rational_to_f64(&d),
            }))
        }
        SqtestCommand::Qexp { t } => {
            square_config(cfg)?;
            ok(json!({
                "t": t,
                "grh_c": format_rational(&cfg.grh_c),
                "grh_constant_is_assumed": true,
                "q": q_exponent(t, &cfg.grh_c),
            }))
        }
    }
}

fn read_ssr(file: &Path) -> Result<SsrInstanceJson, CliError> {
    read_json(file)
}

fn slp_loader(file: &Path) -> impl FnMut(&str) -> sumroots::Result<String> {
    let base = file.parent().map(Path::to_path_buf).unwrap_or_default();
    move |rel: &str| {
        let path = base.join(rel);
        fs::read_to_string(&path)
            .map_err(|e| Error::InvalidInstance(format!("{}: {e}", path.display())))
    }
}

pub fn ssr(command: SsrCommand, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        SsrCommand::Partition { file } => {
            let json = read_ssr(&file)?;
            let inst = json.to_instance(slp_loader(&file))?;
            let mut rng = RngHandle::new(cfg.seed);
            let report = partition_one_dim(&inst, &square_config(cfg)?, &mut rng)?;
            let mut out = to_value(&report);
            out["provenance"] = provenance(cfg);
            ok(out)
        }
        SsrCommand::Decide { file } => {
            let json = read_ssr(&file)?;
            let inst = json.to_instance(slp_loader(&file))?;
            let mut rng = RngHandle::new(cfg.seed);
            let d = decide_ssr_slp(&inst, &square_config(cfg)?, &mut rng, cfg.bit_limit)?;
            let mut out = to_value(&d);
            out["provenance"] = provenance(cfg);
            ok(out)
        }
        SsrCommand::Eq { file } => {
            let json = read_ssr(&file)?;
            let values = json
                .values()?
                .ok_or_else(|| CliError::Usage("ssr eq needs an explicit value for every term".into()))?;
            ok(to_value(&decide_ssr_eq(&values, &json.signs())?))
        }
        SsrCommand::Binomial { m, n0 } => {
            let n0 = parse_int(&n0, "--n0")?;
            let b = binomial_instance(m, &n0, cfg.precision)?;
            let d = decide_ssr_eq(&b.values, &b.signs)?;
            ok(json!({
                "m": m,
                "n0": n0.to_string(),
                "terms": b.values.len(),
                "is_zero": d.is_zero,
                "dimension": d.partition.dimension(),
                "lower": format_rational(&b.value.lower()),
                "upper": format_rational(&b.value.upper()),
                "approx": b.value.midpoint_f64(),
                "precision_bits": b.value.precision(),
            }))
        }
    }
}

#[derive(serde::Serialize)]
struct ExponentsReport {
    n: u64,
    d: u64,
    p1: u64,
    p2: u64,
}

pub fn loggap(command: LoggapCommand, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        LoggapCommand::Order { file } => {
            let q: LogOrderJson = read_json(&file)?;
            let r = log_sum_order(&q.c, &q.f, q.precision.unwrap_or(cfg.trunc))?;
            let violation = r.report.status == BoundStatus::Violated || !r.routes_agree;
            Ok(Outcome { report: to_value(&r), violation })
        }
        LoggapCommand::Exponents { n, d } => {
            let (p1, p2) = gap_exponents(n, d)?;
            ok(to_value(&ExponentsReport { n, d, p1, p2 }))
        }
        LoggapCommand::Verify { file } => {
            let inst: LogSumInstance = read_json(&file)?;
            let r = gap_verify(&inst, cfg.precision)?;
            let violation = r.preconditions_met && (!r.gap_holds || r.half_log_x_holds == Some(false));
            Ok(Outcome { report: to_value(&r), violation })
        }
        LoggapCommand::Sjbounds { file, j_max } => {
            let inst: LogSumInstance = read_json(&file)?;
            let r = sj_bounds_check(&inst, j_max)?;
            let violation = r.ell.is_some() && !r.all_hold();
            Ok(Outcome { report: to_value(&r), violation })
        }
    }
}

pub fn selftest(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let results = sumroots_selftest::run_suite(cfg.seed);
    let passed = results.iter().all(|r| r.passed);
    for r in &results {
        eprintln!("{}", r.line());
    }
    Ok(Outcome { report: json!({ "seed": cfg.seed, "passed": passed, "results": to_value(&results) }), violation: !passed })
}
