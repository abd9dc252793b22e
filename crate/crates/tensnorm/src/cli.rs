//! Command-line surface. Each command returns the text for stdout; `main`
//! maps errors to exit codes.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tensnorm_core::nuclear::{nuclear_upper, sym_nuclear_upper, AltOptions, AltStatus};
use tensnorm_core::quantum::{
    known_state, qubit_bounds, separability_check, BoundKind, DensityTensor, KnownState, SeparabilityOptions,
    SeparabilityStatus, StateParams, KNOWN_STATE_NAMES,
};
use tensnorm_core::spectral::{spectral_lower, sym_spectral_lower, SpectralOptions};
use tensnorm_core::sym::sym_from_dense;
use tensnorm_core::{Field, Shape, Tensor, C64};

use crate::error::{CliError, Result};
use crate::experiment::{run_experiment, ExperimentConfig, Objective};
use crate::io::{load_tensor, save_decomposition, save_tensor_named, write_json, FieldTag};
use crate::report::{emit_report, four, table, Format, NormRow};

#[derive(Parser, Debug)]
#[command(name = "tensnorm", version, about = "Spectral and nuclear norms of tensors, with entanglement tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// R or C; commands that take a tensor default to both fields for real input
    #[arg(long, value_enum, ignore_case = true)]
    pub field: Option<FieldTag>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 30)]
    pub restarts: usize,
    /// Outer stopping tolerance of the nuclear iteration
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Outer sweeps (nuclear) or power steps (spectral) per restart
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Number of rank-one terms kept by the nuclear iteration (default ∏n_j, doubled over C)
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, ignore_case = true, default_value = "table")]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower bound on the spectral norm
    Spectral {
        #[arg(long)]
        input: PathBuf,
        /// Treat the input as a symmetric tensor
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Upper bound on the nuclear norm with a certifying decomposition (written to --out)
    Nuclear {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Separability of a density tensor via the nuclear norm and PPT
    Separability {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        margin: f64,
        /// 1-based modes to partially transpose, e.g. `--ppt 1` or `--ppt 1,2`; repeatable
        #[arg(long, value_delimiter = ';')]
        ppt: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Norms, P = nuclear*spectral, eta = -log2 spectral^2 and omega = log2 nuclear^2
    Measure {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write a named benchmark state
    KnownState {
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: Option<usize>,
        /// Unit complex number: `1`, `-i`, `i` or `re,im`
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        index: Option<usize>,
        #[arg(long)]
        b: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Random-state search for extremal norms
    Search {
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value = "max-nuclear")]
        objective: Objective,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Known values and bounds of the extremal constants alpha and beta
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
}

/// stdout text plus optional warnings for stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

fn fields_for(t: &Tensor, requested: Option<FieldTag>) -> Result<Vec<Field>> {
    match requested {
        Some(f) => {
            let f: Field = f.into();
            t.require_field(f)?;
            Ok(vec![f])
        }
        None => Ok(match t.field() {
            Field::Real => vec![Field::Real, Field::Complex],
            Field::Complex => vec![Field::Complex],
        }),
    }
}

fn alt_options(c: &Common) -> AltOptions {
    let mut o = AltOptions {
        restarts: c.restarts,
        seed: c.seed,
        eps: c.eps,
        term_budget_override: c.budget,
        ..AltOptions::default()
    };
    if let Some(m) = c.max_iter {
        o.max_outer = m;
    }
    o
}

fn spectral_options(c: &Common) -> SpectralOptions {
    let mut o = SpectralOptions { restarts: c.restarts, seed: c.seed, ..SpectralOptions::default() };
    if let Some(m) = c.max_iter {
        o.max_iter = m;
    }
    o
}

fn check_counts(c: &Common) -> Result<()> {
    if c.restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    if !(c.eps > 0.0) {
        return Err(CliError::Usage("--eps must be positive".into()));
    }
    if c.max_iter == Some(0) {
        return Err(CliError::Usage("--max-iter must be at least 1".into()));
    }
    Ok(())
}

fn name_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn set(row: &mut NormRow, nuclear: bool, field: Field, v: f64) {
    let slot = match (nuclear, field) {
        (true, Field::Real) => &mut row.nuclear_r,
        (true, Field::Complex) => &mut row.nuclear_c,
        (false, Field::Real) => &mut row.spectral_r,
        (false, Field::Complex) => &mut row.spectral_c,
    };
    *slot = Some(v);
}

fn spectral_value(t: &Tensor, field: Field, symmetric: bool, opts: &SpectralOptions, out: &mut Output) -> Result<f64> {
    let r = if symmetric {
        sym_spectral_lower(&sym_from_dense(t)?, field, opts)?
    } else {
        spectral_lower(t, field, opts)?
    };
    if !r.converged {
        out.warnings.push(format!("spectral over {}: power iteration hit the step cap", field.tag()));
    }
    Ok(r.value)
}

fn nuclear_value(
    t: &Tensor,
    field: Field,
    symmetric: bool,
    opts: &AltOptions,
    save: Option<&Path>,
    out: &mut Output,
) -> Result<f64> {
    let (value, status, dec) = if symmetric {
        let r = sym_nuclear_upper(&sym_from_dense(t)?, field, opts)?;
        (r.value, r.status, r.decomposition.to_rank_one()?)
    } else {
        let r = nuclear_upper(t, field, opts)?;
        (r.value, r.status, r.decomposition)
    };
    if status == AltStatus::MaxOuter {
        out.warnings.push(format!("nuclear over {}: stopped at the sweep cap, bound may be loose", field.tag()));
    }
    if let Some(p) = save {
        save_decomposition(&dec, t, p)?;
    }
    Ok(value)
}

fn write_or_print(text: String, out_path: Option<&Path>) -> Result<String> {
    match out_path {
        Some(p) => {
            fs::write(p, &text).map_err(|e| CliError::Io(p.display().to_string(), e))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || CliError::Usage(format!("cannot parse `{s}` as a complex number"));
    let s = s.trim();
    match s {
        "i" | "+i" => return Ok(C64::new(0.0, 1.0)),
        "-i" => return Ok(C64::new(0.0, -1.0)),
        _ => {}
    }
    if let Some((re, im)) = s.split_once(',') {
        return Ok(C64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?));
    }
    Ok(C64::new(s.parse().map_err(|_| bad())?, 0.0))
}

fn parse_subsets(specs: &[String], d: usize) -> Result<Option<Vec<Vec<usize>>>> {
    if specs.is_empty() {
        return Ok(None);
    }
    let mut out = Vec::new();
    for s in specs {
        let mut modes = Vec::new();
        for part in s.split(',') {
            let m: usize = part.trim().parse().map_err(|_| CliError::Usage(format!("bad --ppt mode `{part}`")))?;
            if m == 0 || m > d {
                return Err(CliError::Usage(format!("--ppt mode {m} outside 1..={d}")));
            }
            modes.push(m - 1);
        }
        out.push(modes);
    }
    Ok(Some(out))
}

pub fn run(cli: Cli) -> Result<Output> {
    let mut out = Output::default();
    out.stdout = match cli.command {
        Command::Spectral { input, symmetric, common } => {
            check_counts(&common)?;
            let t = load_tensor(&input)?;
            let opts = spectral_options(&common);
            let mut row = NormRow { name: name_of(&input), ..NormRow::default() };
            for f in fields_for(&t, common.field)? {
                let v = spectral_value(&t, f, symmetric, &opts, &mut out)?;
                set(&mut row, false, f, v);
            }
            write_or_print(emit_report(&[row], common.format), common.out.as_deref())?
        }
        Command::Nuclear { input, symmetric, common } => {
            check_counts(&common)?;
            let t = load_tensor(&input)?;
            let fields = fields_for(&t, common.field)?;
            if common.out.is_some() && fields.len() > 1 {
                return Err(CliError::Usage("--out stores one decomposition; pick a --field".into()));
            }
            let opts = alt_options(&common);
            let mut row = NormRow { name: name_of(&input), ..NormRow::default() };
            for f in fields {
                let v = nuclear_value(&t, f, symmetric, &opts, common.out.as_deref(), &mut out)?;
                set(&mut row, true, f, v);
            }
            emit_report(&[row], common.format)
        }
        Command::Measure { input, common } => {
            check_counts(&common)?;
            let t = load_tensor(&input)?;
            let norm = t.hs_norm();
            if (norm - 1.0).abs() > 1e-8 {
                return Err(tensnorm_core::Error::NotUnitState { norm }.into());
            }
            let mut rows = Vec::new();
            for f in fields_for(&t, common.field)? {
                let s = spectral_value(&t, f, false, &spectral_options(&common), &mut out)?;
                let n = nuclear_value(&t, f, false, &alt_options(&common), None, &mut out)?;
                rows.push(Measure {
                    field: f.into(),
                    nuclear: n,
                    spectral: s,
                    product: n * s,
                    eta: -(s * s).log2(),
                    omega: (n * n).log2(),
                });
            }
            write_or_print(render_measures(&rows, common.format), common.out.as_deref())?
        }
        Command::Separability { input, margin, ppt, common } => {
            check_counts(&common)?;
            let a = DensityTensor::from_tensor(load_tensor(&input)?)?;
            let d = a.base_shape().order();
            let opts = SeparabilityOptions { margin, alt: alt_options(&common), ppt_subsets: parse_subsets(&ppt, d)? };
            let v = separability_check(&a, &opts)?;
            if v.nuclear.status == AltStatus::MaxOuter {
                out.warnings.push("nuclear: stopped at the sweep cap, bound may be loose".into());
            }
            let rep = SeparabilityReport {
                status: match v.status {
                    SeparabilityStatus::Separable => "separable",
                    SeparabilityStatus::Entangled => "entangled",
                    SeparabilityStatus::Inconclusive => "inconclusive",
                },
                heuristic: v.heuristic,
                nuclear: v.nuclear_value,
                margin: v.margin,
                ppt: v
                    .ppt
                    .iter()
                    .map(|p| PptRow { modes: p.subset.iter().map(|m| m + 1).collect(), passed: p.passed, min_eigenvalue: p.min_eigenvalue })
                    .collect(),
            };
            write_or_print(render_separability(&rep, common.format), common.out.as_deref())?
        }
        Command::KnownState { name, n, lambda, index, b, common } => {
            let params = StateParams { n, lambda: lambda.as_deref().map(parse_complex).transpose()?, index, b };
            let state = known_state(&name, &params).map_err(|e| match e {
                tensnorm_core::Error::UnknownState(s) => {
                    CliError::Usage(format!("unknown state `{s}`; known: {}", KNOWN_STATE_NAMES.join(", ")))
                }
                e => e.into(),
            })?;
            let t = match state {
                KnownState::Pure(t) => t,
                KnownState::Density(a) => a.into_tensor(),
            };
            match common.out.as_deref() {
                Some(p) => {
                    save_tensor_named(&t, &name, p)?;
                    String::new()
                }
                None => {
                    let f = crate::io::TensorFile::from_tensor(&t, None);
                    serde_json::to_string_pretty(&f).expect("plain data serializes") + "\n"
                }
            }
        }
        Command::Search { shape, samples, objective, csv, common } => {
            check_counts(&common)?;
            let field = common.field.map(Field::from).unwrap_or(Field::Complex);
            let mut cfg = ExperimentConfig::new(shape, field, samples, common.restarts, common.seed, objective);
            cfg.eps = common.eps;
            if let Some(m) = common.max_iter {
                cfg.max_outer = m;
            }
            let rep = run_experiment(&cfg)?;
            if let Some(p) = csv {
                fs::write(&p, rep.to_csv()).map_err(|e| CliError::Io(p.display().to_string(), e))?;
            }
            if let Some(p) = common.out.as_deref() {
                write_json(&rep, p)?;
            }
            match common.format {
                Format::Json => serde_json::to_string_pretty(&rep).expect("plain data serializes") + "\n",
                Format::Csv => rep.to_csv(),
                Format::Table => rep.summary_table(),
            }
        }
        Command::Bounds { shape, common } => {
            let shape = Shape::new(shape)?;
            let fields = match common.field {
                Some(f) => vec![Field::from(f)],
                None => vec![Field::Real, Field::Complex],
            };
            let rows: Vec<BoundRow> = fields
                .into_iter()
                .map(|f| {
                    let b = qubit_bounds(&shape, f);
                    BoundRow {
                        field: f.into(),
                        alpha: b.alpha.value,
                        alpha_kind: kind(b.alpha.kind),
                        beta: b.beta.value,
                        beta_kind: kind(b.beta.kind),
                    }
                })
                .collect();
            write_or_print(render_bounds(&rows, common.format), common.out.as_deref())?
        }
    };
    Ok(out)
}

fn kind(k: BoundKind) -> &'static str {
    match k {
        BoundKind::Exact => "exact",
        BoundKind::Lower => "lower",
        BoundKind::Upper => "upper",
    }
}

fn tag(f: FieldTag) -> String {
    format!("{f:?}")
}

#[derive(Serialize)]
struct Measure {
    field: FieldTag,
    nuclear: f64,
    spectral: f64,
    product: f64,
    eta: f64,
    omega: f64,
}

fn render_measures(rows: &[Measure], format: Format) -> String {
    let headers = ["field", "nuclear", "spectral", "P", "eta", "omega"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|m| {
            let mut r = vec![tag(m.field)];
            r.extend([m.nuclear, m.spectral, m.product, m.eta, m.omega].iter().map(|v| four(Some(*v))));
            r
        })
        .collect();
    render(&headers, &cells, rows, format)
}

#[derive(Serialize)]
struct BoundRow {
    field: FieldTag,
    alpha: f64,
    alpha_kind: &'static str,
    beta: f64,
    beta_kind: &'static str,
}

fn render_bounds(rows: &[BoundRow], format: Format) -> String {
    let headers = ["field", "alpha", "alpha_kind", "beta", "beta_kind"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|b| vec![tag(b.field), four(Some(b.alpha)), b.alpha_kind.into(), four(Some(b.beta)), b.beta_kind.into()])
        .collect();
    render(&headers, &cells, rows, format)
}

#[derive(Serialize)]
struct PptRow {
    modes: Vec<usize>,
    passed: bool,
    min_eigenvalue: f64,
}

#[derive(Serialize)]
struct SeparabilityReport {
    status: &'static str,
    heuristic: bool,
    nuclear: f64,
    margin: f64,
    ppt: Vec<PptRow>,
}

fn render_separability(rep: &SeparabilityReport, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(rep).expect("plain data serializes") + "\n";
    }
    let ppt = rep
        .ppt
        .iter()
        .map(|p| {
            let modes: Vec<String> = p.modes.iter().map(|m| m.to_string()).collect();
            format!("{}:{}({:.3e})", modes.join(","), if p.passed { "pass" } else { "fail" }, p.min_eigenvalue)
        })
        .collect::<Vec<_>>()
        .join(" ");
    let status = if rep.heuristic { format!("{} (heuristic)", rep.status) } else { rep.status.to_string() };
    let headers = ["status", "nuclear", "margin", "ppt"];
    let cells = vec![vec![status, four(Some(rep.nuclear)), format!("{:e}", rep.margin), ppt]];
    match format {
        Format::Csv => csv_text(&headers, &cells),
        _ => table(&headers, &cells),
    }
}

fn csv_text(headers: &[&str], cells: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("in-memory write");
    for r in cells {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn render<T: Serialize>(headers: &[&str], cells: &[Vec<String>], raw: &[T], format: Format) -> String {
    match format {
        Format::Table => table(headers, cells),
        Format::Csv => csv_text(headers, cells),
        Format::Json => serde_json::to_string_pretty(raw).expect("plain data serializes") + "\n",
    }
}
