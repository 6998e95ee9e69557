//! Command-line front end: parses arguments, runs one analysis, and writes
//! a JSON (or CSV) report. Exit codes: 0 success, 1 a verification failed,
//! 2 usage error, 3 a size guard was hit.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::constructions::{
    build_g, no_root_check, predicted_nonbent_set, run_campaign, to_vectorial_bent, verify_bent_alpha_theorem,
    CampaignConfig, EScope, FamilyParams, RootForm, Verdict,
};
use crate::diffspec::{
    delta_row, scan_delta2_anomaly, scan_general_anomaly, uniformity, verify_binomial_spectrum, verify_delta2_anomaly,
    verify_general_anomaly,
};
use crate::equivalence::{invariance_experiment, CczSampler, EquivMode, ExperimentConfig, DEFAULT_RETRY_CAP};
use crate::error::Error;
use crate::field::{parse_hex_u32, FieldCtx, FieldSpec};
use crate::linmaps::{quadform_bent_check, LinPoly};
use crate::rng::SplitMix64;
use crate::vectorial::{bent_census, fourth_moment, verify_apn_plateaued_exclusion, VecFun, DEFAULT_CENSUS_GUARD};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "bentcomp",
    version,
    about = "Bent components of vectorial Boolean functions over GF(2^n)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Differential uniformity, component amplitudes, nonlinearity.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every component as bent or not.
    Census {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Differential spectrum: one row with --a, otherwise a summary.
    Diffspec {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, alias = "row", value_parser = hex_arg)]
        a: Option<u32>,
        /// Defaults to CSV when --out ends in `.csv`.
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a family member and check its non-bent directions.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        field: Option<String>,
        /// Lift to a (2k, k)-function `Tr_k^(2k)(alpha G(x))`.
        #[arg(long, value_parser = hex_arg)]
        alpha: Option<u32>,
        /// Write the table of G (or of the lift, with --alpha).
        #[arg(long)]
        table_out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CENSUS_GUARD)]
        guard: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// EA/CCZ invariance experiment.
    Equiv {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SamplerArg::LowRank)]
        sampler: SamplerArg,
        #[arg(long, default_value_t = DEFAULT_RETRY_CAP)]
        retry_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive verification of one statement, or a family campaign.
    Verify(Box<VerifyArgs>),
}

#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// `n=<degree>[,poly=0x<hex>]`.
    #[arg(long)]
    pub field: Option<String>,
    /// Field degree with the default polynomial.
    #[arg(long)]
    pub n: Option<u32>,
    /// `gold3`, `gold:<i>`, `identity`, `mono:<e>`, a family spec, or a table file.
    #[arg(long = "fn")]
    pub function: Option<String>,
    /// `k=<k>,i=<i>[,e=<e>][,terms=<g>:<t>;<g>:<t>]`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, default_value_t = DEFAULT_CENSUS_GUARD)]
    pub guard: u32,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 1)]
    pub i: u32,
    /// Defaults to k.
    #[arg(long)]
    pub e: Option<u32>,
    /// `<g>:<t>,<g>:<t>`, coefficients in hex.
    #[arg(long, default_value = "")]
    pub terms: String,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub theorem: Option<Theorem>,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub e: Option<u32>,
    #[arg(long, default_value = "")]
    pub terms: String,
    #[arg(long, default_value_t = 1)]
    pub t1: u32,
    #[arg(long)]
    pub t2: Option<u32>,
    /// Comma-separated `t_j` for the general anomaly.
    #[arg(long)]
    pub ts: Option<String>,
    /// Scan every k up to this bound.
    #[arg(long)]
    pub kmax: Option<u32>,
    #[arg(long)]
    pub rho_max: Option<u32>,
    #[arg(long, value_enum, default_value_t = EScopeArg::All)]
    pub e_scope: EScopeArg,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Ea,
    Ccz,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerArg {
    Uniform,
    LowRank,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EScopeArg {
    All,
    K,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    ApnPlateaued,
    BinomialDiff,
    BentAlpha,
    Lemma1,
    Delta2Anomaly,
    GeneralAnomaly,
}

fn hex_arg(s: &str) -> std::result::Result<u32, String> {
    parse_hex_u32(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::CensusTooLarge { .. }) => EXIT_GUARD,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// A finished command: the report body and, for verifications, a verdict.
struct Outcome {
    command: &'static str,
    field: Option<FieldCtx>,
    seed: Option<u64>,
    body: Value,
    verdict: Option<Verdict>,
}

fn header(o: &Outcome) -> Value {
    json!({
        "tool": "bentcomp",
        "version": env!("CARGO_PKG_VERSION"),
        "command": o.command,
        "field": o.field.as_ref().map(FieldCtx::spec_string),
        "polynomial": o.field.as_ref().map(|c| format!("{:#x}", c.poly())),
        "seed": o.seed,
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Report text: the body object with a `header` key added. Keys are
/// emitted in sorted order, so identical runs give identical bytes.
fn render(o: &Outcome) -> String {
    let mut obj = match &o.body {
        Value::Object(m) => m.clone(),
        other => {
            let mut m = Map::new();
            m.insert("report".into(), other.clone());
            m
        }
    };
    obj.insert("header".into(), header(o));
    if let Some(v) = o.verdict {
        obj.insert("verdict".into(), to_value(&v));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json");
    s.push('\n');
    s
}

fn hex_list(xs: &[u32]) -> Vec<String> {
    xs.iter().map(|x| format!("{x:#x}")).collect()
}

fn parse_terms(s: &str) -> CliResult<Vec<(u32, u32)>> {
    s.split([',', ';'])
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (g, t) = p
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("term {p:?} is not <g>:<t>")))?;
            let g = parse_hex_u32(g.trim())?;
            let t = t
                .trim()
                .parse::<u32>()
                .map_err(|e| CliError::Usage(format!("bad t {t:?}: {e}")))?;
            Ok((g, t))
        })
        .collect()
}

fn parse_family(s: &str) -> CliResult<FamilyParams> {
    let (mut k, mut i, mut e, mut terms) = (None, None, None, Vec::new());
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("family part {part:?} is not key=value")))?;
        let num = || {
            value
                .trim()
                .parse::<u32>()
                .map_err(|err| CliError::Usage(format!("bad {key} {value:?}: {err}")))
        };
        match key.trim() {
            "k" => k = Some(num()?),
            "i" => i = Some(num()?),
            "e" => e = Some(num()?),
            "terms" => terms = parse_terms(value)?,
            other => return usage(format!("unknown family key {other:?}")),
        }
    }
    let k = k.ok_or_else(|| CliError::Usage("family needs k".into()))?;
    Ok(FamilyParams {
        k,
        i: i.unwrap_or(1),
        e: e.unwrap_or(k),
        terms,
    })
}

/// Field from `--field` or `--n`, if either was given.
fn field_from(field: &Option<String>, n: Option<u32>) -> CliResult<Option<FieldCtx>> {
    match (field, n) {
        (Some(_), Some(_)) => usage("--field and --n are mutually exclusive"),
        (Some(spec), None) => {
            let spec: FieldSpec = spec.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
            Ok(Some(spec.build().map_err(|e| CliError::Usage(e.to_string()))?))
        }
        (None, Some(n)) => Ok(Some(
            FieldCtx::with_default(n).map_err(|e| CliError::Usage(e.to_string()))?,
        )),
        (None, None) => Ok(None),
    }
}

fn field_for_degree(given: Option<FieldCtx>, n: u32) -> CliResult<FieldCtx> {
    match given {
        Some(ctx) if ctx.n() != n => usage(format!("field has degree {} but the input needs {n}", ctx.n())),
        Some(ctx) => Ok(ctx),
        None => Ok(FieldCtx::with_default(n).map_err(|e| CliError::Usage(e.to_string()))?),
    }
}

struct Resolved {
    ctx: FieldCtx,
    f: VecFun,
    source: String,
}

fn univariate(spec: &str) -> Option<CliResult<u64>> {
    let exp = match spec {
        "gold3" => Ok(3),
        "identity" => Ok(1),
        _ => {
            if let Some(i) = spec.strip_prefix("gold:") {
                i.parse::<u32>()
                    .ok()
                    .filter(|&i| i < 32)
                    .map(|i| (1u64 << i) + 1)
                    .ok_or_else(|| CliError::Usage(format!("bad Gold parameter {i:?}")))
            } else {
                let e = spec.strip_prefix("mono:")?;
                e.parse::<u64>()
                    .map_err(|err| CliError::Usage(format!("bad exponent {e:?}: {err}")))
            }
        }
    };
    Some(exp)
}

fn resolve(input: &InputArgs) -> CliResult<Resolved> {
    let given = field_from(&input.field, input.n)?;
    let family_fn = input.function.as_deref().filter(|f| f.starts_with("k="));
    match (&input.function, &input.family) {
        (Some(_), Some(_)) => usage("--fn and --family are mutually exclusive"),
        (Some(_), None) if family_fn.is_some() => {
            let inner = InputArgs {
                function: None,
                family: family_fn.map(String::from),
                ..input.clone()
            };
            resolve(&inner)
        }
        (None, None) => usage("one of --fn or --family is required"),
        (None, Some(fam)) => {
            let params = parse_family(fam)?;
            let ctx = field_for_degree(given, 2 * params.k)?;
            let f = build_g(&ctx, &params)?;
            Ok(Resolved {
                ctx,
                f,
                source: format!("family {fam}"),
            })
        }
        (Some(spec), None) => {
            if let Some(exp) = univariate(spec) {
                let exp = exp?;
                let ctx = given.ok_or_else(|| CliError::Usage(format!("--fn {spec} needs --field or --n")))?;
                let f = VecFun::from_univariate(&ctx, &[(1, exp)])?;
                return Ok(Resolved {
                    ctx,
                    f,
                    source: format!("x^{exp}"),
                });
            }
            let text = std::fs::read_to_string(spec).map_err(|e| {
                CliError::Usage(format!(
                    "--fn {spec:?} is neither a known function nor a readable file: {e}"
                ))
            })?;
            let f = VecFun::parse_table_text(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let ctx = field_for_degree(given, f.n())?;
            let name = Path::new(spec)
                .file_name()
                .map_or(spec.clone(), |s| s.to_string_lossy().into_owned());
            Ok(Resolved {
                ctx,
                f,
                source: format!("table {name}"),
            })
        }
    }
}

fn check_guard(n: u32, guard: u32) -> CliResult<()> {
    if n > guard {
        return Err(Error::CensusTooLarge { n, guard }.into());
    }
    Ok(())
}

fn square(r: &Resolved) -> CliResult<()> {
    if r.f.n() != r.f.m() {
        return usage(format!("need an (n, n)-function, got ({}, {})", r.f.n(), r.f.m()));
    }
    Ok(())
}

fn cmd_analyze(input: &InputArgs) -> CliResult<Outcome> {
    let r = resolve(input)?;
    check_guard(r.f.n(), input.guard)?;
    let square = r.f.n() == r.f.m();
    // outputs of an (n, m)-function live in the default field of degree m
    let out = if square {
        r.ctx.clone()
    } else {
        FieldCtx::with_default(r.f.m())?
    };
    let (delta, apn) = if square {
        let (d, a) = uniformity(&r.f)?;
        (Some(d), Some(a))
    } else {
        (None, None)
    };
    let amps = r.f.component_amplitudes(&out)?;
    let plateaued = amps.iter().all(Option::is_some);
    let mut hist = std::collections::BTreeMap::new();
    for t in amps.iter().flatten() {
        *hist.entry(t.to_string()).or_insert(0u64) += 1;
    }
    let min_nl = (1..1u32 << r.f.m())
        .map(|w| r.f.dot_component_spectrum(w).nonlinearity())
        .min()
        .unwrap_or(0);
    let bent_count = if r.f.n() % 2 == 0 {
        Some(r.f.component_bentness(&out)?.iter().filter(|&&b| b).count())
    } else {
        None
    };
    Ok(Outcome {
        command: "analyze",
        field: Some(r.ctx),
        seed: None,
        body: json!({
            "source": r.source,
            "n": r.f.n(),
            "m": r.f.m(),
            "output_field": out.spec_string(),
            "differential_uniformity": delta,
            "is_apn": apn,
            "is_vectorial_plateaued": plateaued,
            "amplitude_histogram": if plateaued { to_value(&hist) } else { Value::Null },
            "min_component_nonlinearity": min_nl,
            "fourth_moment": fourth_moment(&r.f).to_string(),
            "bent_count": bent_count,
        }),
        verdict: None,
    })
}

fn cmd_census(input: &InputArgs) -> CliResult<Outcome> {
    let r = resolve(input)?;
    square(&r)?;
    if r.f.n() % 2 != 0 {
        return usage(format!("bent components need even n, got {}", r.f.n()));
    }
    let c = bent_census(&r.f, &r.ctx, input.guard)?;
    Ok(Outcome {
        command: "census",
        field: Some(r.ctx),
        seed: None,
        body: json!({
            "source": r.source,
            "n": c.n,
            "bent_count": c.bent_count,
            "nonbent": hex_list(&c.nonbent_set),
            "is_subspace": c.is_subspace,
            "is_max": c.is_max,
        }),
        verdict: None,
    })
}

/// Either a report or raw CSV text.
enum Output {
    Report(Outcome),
    Csv(String),
}

fn cmd_diffspec(input: &InputArgs, a: Option<u32>, format: Format) -> CliResult<Output> {
    let r = resolve(input)?;
    check_guard(r.f.n(), input.guard)?;
    match (a, format) {
        (None, Format::Csv) => usage("CSV output needs --a"),
        (Some(a), format) => {
            let row = delta_row(&r.f, a).map_err(|e| CliError::Usage(e.to_string()))?;
            if format == Format::Csv {
                return Ok(Output::Csv(row.to_csv()));
            }
            let hist: std::collections::BTreeMap<String, u64> =
                row.histogram.iter().map(|(d, c)| (d.to_string(), *c)).collect();
            Ok(Output::Report(Outcome {
                command: "diffspec",
                field: Some(r.ctx),
                seed: None,
                body: json!({
                    "source": r.source,
                    "a": format!("{a:#x}"),
                    "histogram": hist,
                    "support": hex_list(&row.support),
                }),
                verdict: None,
            }))
        }
        (None, Format::Json) => {
            square(&r)?;
            let (delta, apn) = uniformity(&r.f)?;
            let mut entries = std::collections::BTreeMap::<String, u64>::new();
            for a in 1..1u32 << r.f.n() {
                for (d, c) in delta_row(&r.f, a)?.histogram {
                    *entries.entry(d.to_string()).or_insert(0) += c;
                }
            }
            Ok(Output::Report(Outcome {
                command: "diffspec",
                field: Some(r.ctx),
                seed: None,
                body: json!({
                    "source": r.source,
                    "differential_uniformity": delta,
                    "is_apn": apn,
                    "entry_histogram": entries,
                }),
                verdict: None,
            }))
        }
    }
}

fn family_params(args: &FamilyArgs) -> CliResult<FamilyParams> {
    Ok(FamilyParams {
        k: args.k,
        i: args.i,
        e: args.e.unwrap_or(args.k),
        terms: parse_terms(&args.terms)?,
    })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn cmd_construct(
    fam: &FamilyArgs,
    field: &Option<String>,
    alpha: Option<u32>,
    table_out: &Option<PathBuf>,
    guard: u32,
) -> CliResult<Outcome> {
    let params = family_params(fam)?;
    let ctx = field_for_degree(field_from(field, None)?, 2 * params.k)?;
    check_guard(ctx.n(), guard)?;
    params.validate(&ctx)?;
    let g = build_g(&ctx, &params)?;
    let form_a = no_root_check(&ctx, RootForm::A, &params)?;
    let form_b = no_root_check(&ctx, RootForm::B, &params)?;
    let predicted = match predicted_nonbent_set(&ctx, &params) {
        Ok(p) => json!({ "kind": p.kind, "size": p.members.len() }),
        Err(Error::PreconditionsUnmet(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let check = verify_bent_alpha_theorem(&ctx, &params, guard)?;
    let mut table = g.to_table_text();
    let lift = match alpha {
        None => Value::Null,
        Some(alpha) => {
            let vb = to_vectorial_bent(&ctx, &params, &g, alpha)?;
            table = vb.function.to_table_text();
            json!({
                "alpha": format!("{alpha:#x}"),
                "out_field": vb.out_field.spec_string(),
                "is_vectorial_bent": vb.function.is_vectorial_bent(&vb.out_field)?,
            })
        }
    };
    if let Some(path) = table_out {
        write_file(path, &table)?;
    }
    let verdict = check.verdict;
    Ok(Outcome {
        command: "construct",
        field: Some(ctx),
        seed: None,
        body: json!({
            "params": params,
            "merged_terms": params.merged_terms(),
            "no_root_form_a": form_a,
            "no_root_form_b": form_b,
            "predicted": predicted,
            "check": check,
            "lift": lift,
        }),
        verdict: Some(verdict),
    })
}

fn cmd_equiv(
    input: &InputArgs,
    mode: ModeArg,
    trials: u64,
    seed: u64,
    sampler: SamplerArg,
    retry_cap: u64,
) -> CliResult<Outcome> {
    let r = resolve(input)?;
    square(&r)?;
    if r.f.n() % 2 != 0 {
        return usage(format!("bent components need even n, got {}", r.f.n()));
    }
    let cfg = ExperimentConfig {
        mode: match mode {
            ModeArg::Ea => EquivMode::Ea,
            ModeArg::Ccz => EquivMode::Ccz,
        },
        sampler: match sampler {
            SamplerArg::Uniform => CczSampler::Uniform,
            SamplerArg::LowRank => CczSampler::LowRank,
        },
        trials,
        seed,
        guard: input.guard,
        retry_cap,
    };
    let report = invariance_experiment(&r.f, &r.ctx, &cfg)?;
    let mut body = to_value(&report);
    body["source"] = json!(r.source);
    Ok(Outcome {
        command: "equiv",
        field: Some(r.ctx),
        seed: Some(seed),
        verdict: Some(report.verdict),
        body,
    })
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("this verification needs --{flag}")))
}

fn parse_ts(s: &Option<String>) -> CliResult<Vec<u32>> {
    s.as_deref()
        .unwrap_or("")
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<u32>()
                .map_err(|e| CliError::Usage(format!("bad t {p:?}: {e}")))
        })
        .collect()
}

fn cmd_verify(v: &VerifyArgs) -> CliResult<Outcome> {
    let guard = v.input.guard;
    let theorem = match (v.theorem, v.input.family.as_deref()) {
        (None, Some("general")) => return verify_campaign(v),
        (None, _) => return usage("verify needs --theorem or --family general"),
        (Some(t), _) => t,
    };
    let given = field_from(&v.input.field, v.input.n)?;
    let outcome = |field: Option<FieldCtx>, seed: Option<u64>, body: Value, verdict: Verdict| Outcome {
        command: "verify",
        field,
        seed,
        body,
        verdict: Some(verdict),
    };
    match theorem {
        Theorem::ApnPlateaued => {
            let r = resolve(&v.input)?;
            square(&r)?;
            check_guard(r.f.n(), guard)?;
            let rep = verify_apn_plateaued_exclusion(&r.f, &r.ctx)?;
            let verdict = if !rep.hypotheses_hold {
                Verdict::Vacuous
            } else if rep.consistent {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            let mut body = to_value(&rep);
            body["theorem"] = json!("apn-plateaued");
            body["source"] = json!(r.source);
            Ok(outcome(Some(r.ctx), None, body, verdict))
        }
        Theorem::BinomialDiff => {
            let k = need(v.k, "k")?;
            let i = need(v.i, "i")?;
            let ctx = field_for_degree(given, 2 * k)?;
            let rep = verify_binomial_spectrum(&ctx, i, k, guard).map_err(|e| match e {
                Error::InvalidParams(m) => CliError::Usage(m),
                e => e.into(),
            })?;
            let mut body = to_value(&rep);
            body["theorem"] = json!("binomial-diff");
            Ok(outcome(Some(ctx), None, body, rep.verdict))
        }
        Theorem::BentAlpha => {
            let params = match &v.input.family {
                Some(f) => parse_family(f)?,
                None => FamilyParams {
                    k: need(v.k, "k")?,
                    i: v.i.unwrap_or(1),
                    e: v.e.unwrap_or(need(v.k, "k")?),
                    terms: parse_terms(&v.terms)?,
                },
            };
            let ctx = field_for_degree(given, 2 * params.k)?;
            let rep = verify_bent_alpha_theorem(&ctx, &params, guard)?;
            let mut body = to_value(&rep);
            body["theorem"] = json!("bent-alpha");
            Ok(outcome(Some(ctx), None, body, rep.verdict))
        }
        Theorem::Lemma1 => {
            let ctx = given.ok_or_else(|| CliError::Usage("lemma1 needs --field or --n".into()))?;
            check_guard(ctx.n(), guard)?;
            let mut rng = SplitMix64::new(v.seed);
            let (mut agree, mut bent) = (0u64, 0u64);
            let mut disagreements = Vec::new();
            for trial in 0..v.trials {
                let l = LinPoly::random(&ctx, &mut rng);
                let c = quadform_bent_check(&ctx, &l);
                bent += c.bent_by_spectrum as u64;
                if c.agrees() {
                    agree += 1;
                } else if disagreements.len() < 16 {
                    disagreements.push(json!({ "trial": trial, "coeffs": hex_list(l.coeffs()) }));
                }
            }
            let verdict = if v.trials == 0 {
                Verdict::Vacuous
            } else if agree == v.trials {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            let body = json!({
                "theorem": "lemma1",
                "trials": v.trials,
                "agreements": agree,
                "bent": bent,
                "disagreements": disagreements,
            });
            Ok(outcome(Some(ctx), Some(v.seed), body, verdict))
        }
        Theorem::Delta2Anomaly => {
            if let Some(kmax) = v.kmax {
                check_guard(2 * kmax, guard)?;
                let scan = scan_delta2_anomaly(kmax)?;
                let verdict = scan.verdict();
                let mut body = to_value(&scan);
                body["theorem"] = json!("delta2-anomaly");
                body["kmax"] = json!(kmax);
                return Ok(outcome(None, None, body, verdict));
            }
            let k = need(v.k, "k")?;
            let ctx = field_for_degree(given, 2 * k)?;
            check_guard(ctx.n(), guard)?;
            let rep = verify_delta2_anomaly(&ctx, k, v.t1, need(v.t2, "t2")?)?;
            let mut body = to_value(&rep);
            body["theorem"] = json!("delta2-anomaly");
            Ok(outcome(Some(ctx), None, body, rep.verdict))
        }
        Theorem::GeneralAnomaly => {
            if let Some(kmax) = v.kmax {
                check_guard(2 * kmax, guard)?;
                let scan = scan_general_anomaly(kmax, v.rho_max.unwrap_or(kmax))?;
                let verdict = scan.verdict();
                let mut body = to_value(&scan);
                body["theorem"] = json!("general-anomaly");
                body["kmax"] = json!(kmax);
                return Ok(outcome(None, None, body, verdict));
            }
            let k = need(v.k, "k")?;
            let ctx = field_for_degree(given, 2 * k)?;
            check_guard(ctx.n(), guard)?;
            let rep = verify_general_anomaly(&ctx, k, need(v.i, "i")?, &parse_ts(&v.ts)?)?;
            let mut body = to_value(&rep);
            body["theorem"] = json!("general-anomaly");
            Ok(outcome(Some(ctx), None, body, rep.verdict))
        }
    }
}

fn verify_campaign(v: &VerifyArgs) -> CliResult<Outcome> {
    let cfg = CampaignConfig {
        k_min: 1,
        k_max: v.kmax.unwrap_or(4),
        rho_max: v.rho_max.unwrap_or(2),
        e_scope: match v.e_scope {
            EScopeArg::All => EScope::AllDivisors,
            EScopeArg::K => EScope::KOnly,
        },
    };
    check_guard(2 * cfg.k_max, v.input.guard)?;
    let rep = run_campaign(&cfg)?;
    let verdict = rep.verdict();
    let mut body = to_value(&rep);
    body["theorem"] = json!("general-family");
    Ok(Outcome {
        command: "verify",
        field: None,
        seed: None,
        body,
        verdict: Some(verdict),
    })
}

fn execute(cli: &Cli) -> CliResult<(Output, Option<PathBuf>)> {
    let report = |o: CliResult<Outcome>| o.map(Output::Report);
    Ok(match &cli.command {
        Command::Analyze { input, out } => (report(cmd_analyze(input))?, out.clone()),
        Command::Census { input, out } => (report(cmd_census(input))?, out.clone()),
        Command::Diffspec { input, a, format, out } => {
            let csv_path = out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "csv"));
            let format = format.unwrap_or(if csv_path { Format::Csv } else { Format::Json });
            (cmd_diffspec(input, *a, format)?, out.clone())
        }
        Command::Construct {
            family,
            field,
            alpha,
            table_out,
            guard,
            out,
        } => (
            report(cmd_construct(family, field, *alpha, table_out, *guard))?,
            out.clone(),
        ),
        Command::Equiv {
            input,
            mode,
            trials,
            seed,
            sampler,
            retry_cap,
            out,
        } => (
            report(cmd_equiv(input, *mode, *trials, *seed, *sampler, *retry_cap))?,
            out.clone(),
        ),
        Command::Verify(v) => (report(cmd_verify(v))?, v.out.clone()),
    })
}

/// Runs the tool on `args` (including the program name), writing to the
/// given streams, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let (output, out) = match execute(&cli) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(stderr, "bentcomp: {e}");
            return e.exit_code();
        }
    };
    let (text, verdict, summary) = match &output {
        Output::Csv(csv) => (csv.clone(), None, "diffspec: csv".to_string()),
        Output::Report(o) => {
            let summary = match o.verdict {
                Some(v) => format!("{}: {}", o.command, to_value(&v).as_str().unwrap_or("")),
                None => format!("{}: ok", o.command),
            };
            (render(o), o.verdict, summary)
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = write_file(&path, &text) {
                let _ = writeln!(stderr, "bentcomp: {e}");
                return EXIT_USAGE;
            }
            let _ = writeln!(stdout, "{summary} ({})", path.display());
        }
        None => {
            let _ = write!(stdout, "{text}");
        }
    }
    if verdict == Some(Verdict::Fail) {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}
