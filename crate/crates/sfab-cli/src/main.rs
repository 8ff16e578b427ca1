//! Batch command-line front end: parse a run configuration (flags or JSON
//! config file), dispatch the computation, and emit JSON or CSV reports.
//!
//! Exit codes: 0 on success with all enabled assertions passing, 1 when an
//! identity check fails (with a machine-readable failure list), 2 on
//! configuration errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use sfab::plancherel::Grid;
use sfab::qlaurent::parse_rat;
use sfab::selftest::{self, Suite};
use sfab::tree::TreeBuilding;
use sfab::{Context, Coweight, Rat, RsType};

#[derive(Parser)]
#[command(
    name = "sfab",
    about = "Exact harmonic analysis on regular affine buildings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct RootArgs {
    /// Root system type: A, B, C, D, E6, E7, E8, F4, G2, BC.
    #[arg(long = "type")]
    type_tag: Option<String>,
    /// Rank.
    #[arg(long)]
    rank: Option<usize>,
    /// Parameters as `0=4,1=2,...` (rationals allowed, e.g. `0=5/2`), or a
    /// single value for all nodes.
    #[arg(long)]
    q: Option<String>,
    /// JSON run configuration (flags override its fields).
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args, Clone, Default)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<String>,
    /// Pretty-print JSON.
    #[arg(long)]
    pretty: bool,
    /// Output format: json or csv (csv only for tabular reports).
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize the root system and parameter system.
    Info {
        #[command(flatten)]
        root: RootArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Vertex count N_lambda.
    Nlambda {
        #[command(flatten)]
        root: RootArgs,
        /// Dominant coweight, comma-separated coordinates.
        #[arg(long)]
        lambda: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact monomial expansion of a spherical function.
    Spherical {
        #[command(flatten)]
        root: RootArgs,
        #[arg(long)]
        lambda: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Structure constants of A_lambda A_mu (one row, or a single entry
    /// when --nu is given).
    Structure {
        #[command(flatten)]
        root: RootArgs,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        nu: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify the boundary-integral expansion against the spherical one.
    #[command(name = "phi-check")]
    PhiCheck {
        #[command(flatten)]
        root: RootArgs,
        /// Single coweight; omit to sweep heights up to --max-height.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_height: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Orthogonality residuals against the Plancherel measure.
    Plancherel {
        #[command(flatten)]
        root: RootArgs,
        #[arg(long, default_value_t = 2)]
        max_height: i64,
        #[arg(long, default_value_t = 129)]
        grid: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// auto | standard | exceptional (standard drops the boundary term).
        #[arg(long, default_value = "auto")]
        mode: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Operator norms P_lambda(1), with tree cross-checks in rank one.
    Norm {
        #[command(flatten)]
        root: RootArgs,
        #[arg(long, default_value_t = 2)]
        max_height: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a truncated tree and run its verification oracles.
    Tree {
        #[arg(long)]
        q0: u32,
        #[arg(long)]
        q1: u32,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// counts,horocycle,rn,integral,norm or all.
        #[arg(long, default_value = "all")]
        verify: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the cross-verification suite.
    Selftest {
        /// quick or full.
        #[arg(long, default_value = "quick")]
        suite: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

// ---------------------------------------------------------------------
// Run configuration (JSON)
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    root_system: RootBlock,
    params: ParamBlock,
    #[serde(default)]
    task: TaskBlock,
    #[serde(default)]
    output: OutputBlock,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RootBlock {
    #[serde(rename = "type")]
    type_tag: String,
    rank: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ParamBlock {
    /// Node index (as a string) to exact rational value (as a string).
    q: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields)]
struct TaskBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_height: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suite: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields)]
struct OutputBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    #[serde(default)]
    pretty: bool,
}

/// Errors split by exit code: configuration problems exit 2, failed
/// identity checks exit 1.
enum CliError {
    Config(String),
    Check(String),
}

type CliResult<T> = Result<T, CliError>;

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

fn parse_coords(s: &str, rank: usize) -> CliResult<Coweight> {
    let coords: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    match coords {
        Ok(c) if c.len() == rank => Ok(Coweight(c)),
        Ok(c) => config_err(format!(
            "coweight {s:?} has {} coordinates, rank is {rank}",
            c.len()
        )),
        Err(_) => config_err(format!("cannot parse coweight {s:?}")),
    }
}

/// The compact one-block form: `{"type": "BC", "rank": 2, "q": {...}}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatConfig {
    #[serde(rename = "type")]
    type_tag: String,
    rank: usize,
    q: BTreeMap<String, String>,
    #[serde(default)]
    task: TaskBlock,
    #[serde(default)]
    output: OutputBlock,
}

fn load_config(root: &RootArgs) -> CliResult<Option<RunConfig>> {
    match &root.config {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {path}: {e}")))?;
            let cfg: RunConfig = match serde_json::from_str::<RunConfig>(&text) {
                Ok(c) => c,
                Err(block_err) => match serde_json::from_str::<FlatConfig>(&text) {
                    Ok(f) => RunConfig {
                        root_system: RootBlock {
                            type_tag: f.type_tag,
                            rank: f.rank,
                        },
                        params: ParamBlock { q: f.q },
                        task: f.task,
                        output: f.output,
                    },
                    Err(_) => {
                        return Err(CliError::Config(format!("bad config {path}: {block_err}")))
                    }
                },
            };
            // Round-trip sanity: serialize -> parse reaches a fixpoint.
            let again: RunConfig = serde_json::from_str(
                &serde_json::to_string(&cfg)
                    .map_err(|e| CliError::Config(format!("config serialization: {e}")))?,
            )
            .map_err(|e| CliError::Config(format!("config round-trip: {e}")))?;
            let _ = again;
            Ok(Some(cfg))
        }
    }
}

fn build_context(root: &RootArgs) -> CliResult<(Context, Option<RunConfig>)> {
    let cfg = load_config(root)?;
    let (type_tag, rank) = match (&root.type_tag, root.rank, &cfg) {
        (Some(t), Some(r), _) => (t.clone(), r),
        (None, None, Some(c)) => (c.root_system.type_tag.clone(), c.root_system.rank),
        _ => {
            return config_err(
                "provide --type and --rank together, or a --config file with a root_system block",
            )
        }
    };
    let kind = RsType::parse(&type_tag).map_err(|e| CliError::Config(e.to_string()))?;
    let n_params = rank + 1;
    let q: Vec<Rat> = if let Some(qspec) = &root.q {
        parse_q_flag(qspec, n_params)?
    } else if let Some(c) = &cfg {
        let mut v = Vec::with_capacity(n_params);
        for i in 0..n_params {
            let key = i.to_string();
            let raw = c
                .params
                .q
                .get(&key)
                .ok_or_else(|| CliError::Config(format!("config params.q is missing node {key}")))?;
            v.push(parse_rat(raw).map_err(|e| CliError::Config(e.to_string()))?);
        }
        v
    } else {
        return config_err("provide --q or a --config file with a params block");
    };
    let ctx = Context::new(kind, rank, &q).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((ctx, cfg))
}

fn parse_q_flag(spec: &str, n_params: usize) -> CliResult<Vec<Rat>> {
    if !spec.contains('=') {
        let v = parse_rat(spec).map_err(|e| CliError::Config(e.to_string()))?;
        return Ok(vec![v; n_params]);
    }
    let mut out = vec![None; n_params];
    for part in spec.split(',') {
        let (idx, val) = part
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("bad --q entry {part:?}")))?;
        let i: usize = idx
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad --q index {idx:?}")))?;
        if i >= n_params {
            return config_err(format!("--q index {i} out of range 0..={}", n_params - 1));
        }
        out[i] = Some(parse_rat(val).map_err(|e| CliError::Config(e.to_string()))?);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| CliError::Config(format!("--q is missing node {i}"))))
        .collect()
}

// ---------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------

fn emit<T: Serialize>(report: &T, out: &OutputArgs, csv: Option<String>) -> CliResult<()> {
    let body = match out.format.as_str() {
        "json" => {
            let mut s = if out.pretty {
                serde_json::to_string_pretty(report)
            } else {
                serde_json::to_string(report)
            }
            .map_err(|e| CliError::Config(format!("serialization: {e}")))?;
            s.push('\n');
            s
        }
        "csv" => match csv {
            Some(text) => text,
            None => return config_err("this report has no CSV form; use --format json"),
        },
        other => return config_err(format!("unknown format {other:?}")),
    };
    match &out.output {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::Config(format!("cannot write {path}: {e}")))?;
            f.write_all(body.as_bytes())
                .map_err(|e| CliError::Config(format!("write {path}: {e}")))?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct InfoReport {
    r#type: String,
    rank: usize,
    positive_roots: usize,
    weyl_order: String,
    parameter_classes: Vec<String>,
    q: Vec<String>,
    variables: Vec<String>,
    mode: String,
    higman_warning: bool,
    marks: Vec<i64>,
}

#[derive(Serialize)]
struct NLambdaReport {
    lambda: Vec<i64>,
    #[serde(rename = "N")]
    n: String,
    #[serde(rename = "N_numeric")]
    n_numeric: f64,
    #[serde(rename = "N_symbolic")]
    n_symbolic: String,
}

#[derive(Serialize)]
struct SphericalCoeff {
    mu: Vec<i64>,
    value: String,
}

#[derive(Serialize)]
struct SphericalReport {
    lambda: Vec<i64>,
    basis: String,
    normalization: String,
    scale: String,
    coeffs: Vec<SphericalCoeff>,
}

#[derive(Serialize)]
struct StructureRowOut {
    lambda: Vec<i64>,
    mu: Vec<i64>,
    nu: Vec<i64>,
    a: String,
    a_numeric: f64,
}

#[derive(Serialize)]
struct PhiCheckReport {
    checked: Vec<Vec<i64>>,
    failures: Vec<String>,
    pass: bool,
}

#[derive(Serialize)]
struct PlancherelReport {
    mode: String,
    boundary_included: bool,
    grid: usize,
    tol: f64,
    lambdas: Vec<Vec<i64>>,
    residual_matrix: Vec<Vec<f64>>,
    max_residual: f64,
    higman_warning: bool,
    pass: bool,
}

#[derive(Serialize)]
struct NormEntry {
    lambda: Vec<i64>,
    norm: f64,
    exact: String,
    tree_power_iteration: Option<f64>,
    tree_ladder_estimate: Option<f64>,
}

#[derive(Serialize)]
struct NormReport {
    entries: Vec<NormEntry>,
}

#[derive(Serialize)]
struct TreeReport {
    q0: u32,
    q1: u32,
    depth: u32,
    nodes: usize,
    lattice: String,
    checks: Vec<TreeCheck>,
    pass: bool,
}

#[derive(Serialize)]
struct TreeCheck {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct SelftestEntry {
    id: u32,
    name: String,
    passed: bool,
    seconds: f64,
    details: Vec<String>,
}

#[derive(Serialize)]
struct SelftestReport {
    suite: String,
    results: Vec<SelftestEntry>,
    all_passed: bool,
}

// ---------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------

fn z_names(ctx: &Context) -> Vec<String> {
    (0..ctx.ps.nclasses).map(|i| format!("z{i}")).collect()
}

fn cmd_info(root: &RootArgs, out: &OutputArgs) -> CliResult<()> {
    let (ctx, _) = build_context(root)?;
    let order = ctx.rs.kind.weyl_order(ctx.rs.rank);
    let report = InfoReport {
        r#type: ctx.rs.kind.name().to_string(),
        rank: ctx.rs.rank,
        positive_roots: ctx.rs.positive_roots.len(),
        weyl_order: order.to_string(),
        parameter_classes: ctx.ps.class_labels.clone(),
        q: ctx.ps.q.iter().map(|v| v.to_string()).collect(),
        variables: ctx
            .ps
            .class_labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("z{i}^2 = {l}"))
            .collect(),
        mode: if ctx.is_exceptional() {
            "exceptional".into()
        } else {
            "standard".into()
        },
        higman_warning: ctx.ps.higman_warning,
        marks: ctx.rs.marks.clone(),
    };
    emit(&report, out, None)
}

fn cmd_nlambda(root: &RootArgs, lambda: &Option<String>, out: &OutputArgs) -> CliResult<()> {
    let (ctx, cfg) = build_context(root)?;
    let lam = resolve_coweight(lambda, &cfg, ctx.rank(), "lambda")?;
    let value = ctx
        .n_lambda_value(&lam)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let sym = ctx
        .n_lambda(&lam)
        .map_err(|e| CliError::Check(e.to_string()))?;
    let report = NLambdaReport {
        lambda: lam.0.clone(),
        n: value.to_string(),
        n_numeric: value.to_f64().unwrap_or(f64::NAN),
        n_symbolic: sym.to_string_with(&z_names(&ctx)),
    };
    let csv = format!("lambda,N\n\"{}\",{}\n", fmt_coords(&lam), value);
    emit(&report, out, Some(csv))
}

fn resolve_coweight(
    flag: &Option<String>,
    cfg: &Option<RunConfig>,
    rank: usize,
    what: &str,
) -> CliResult<Coweight> {
    if let Some(s) = flag {
        return parse_coords(s, rank);
    }
    if let Some(c) = cfg {
        let field = match what {
            "lambda" => &c.task.lambda,
            "mu" => &c.task.mu,
            "nu" => &c.task.nu,
            _ => &None,
        };
        if let Some(v) = field {
            if v.len() == rank {
                return Ok(Coweight(v.clone()));
            }
            return config_err(format!("config task.{what} has wrong rank"));
        }
    }
    config_err(format!("missing --{what}"))
}

fn fmt_coords(c: &Coweight) -> String {
    c.0.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_spherical(root: &RootArgs, lambda: &Option<String>, out: &OutputArgs) -> CliResult<()> {
    let (ctx, cfg) = build_context(root)?;
    let lam = resolve_coweight(lambda, &cfg, ctx.rank(), "lambda")?;
    let exp = ctx
        .spherical(&lam)
        .map_err(|e| CliError::Check(e.to_string()))?;
    let names = z_names(&ctx);
    let coeffs = exp
        .coeffs
        .iter()
        .map(|(mu, c)| SphericalCoeff {
            mu: mu.0.clone(),
            value: c.to_string_with(&names),
        })
        .collect();
    let report = SphericalReport {
        lambda: lam.0.clone(),
        basis: "monomial".into(),
        normalization: "unit-leading-coefficient (P')".into(),
        scale: exp.scale().to_string_with(&names),
        coeffs,
    };
    emit(&report, out, None)
}

fn cmd_structure(
    root: &RootArgs,
    lambda: &Option<String>,
    mu: &Option<String>,
    nu: &Option<String>,
    out: &OutputArgs,
) -> CliResult<()> {
    let (ctx, cfg) = build_context(root)?;
    let lam = resolve_coweight(lambda, &cfg, ctx.rank(), "lambda")?;
    let m = resolve_coweight(mu, &cfg, ctx.rank(), "mu")?;
    let entries: std::collections::BTreeMap<Coweight, sfab::QRatio> =
        if nu.is_some() || cfg.as_ref().is_some_and(|c| c.task.nu.is_some()) {
            let target = resolve_coweight(nu, &cfg, ctx.rank(), "nu")?;
            let a = ctx
                .structure_constant(&lam, &m, &target)
                .map_err(|e| CliError::Check(e.to_string()))?;
            std::iter::once((target, a)).collect()
        } else {
            ctx.structure_row(&lam, &m)
                .map_err(|e| CliError::Check(e.to_string()))?
                .entries
        };
    let names = z_names(&ctx);
    let mut rows = Vec::new();
    let mut csv = String::from("lambda,mu,nu,a,a_numeric\n");
    for (nu, a) in &entries {
        let numeric = a
            .eval_at_q(&ctx.ps.class_q)
            .map(|r| r.to_f64().unwrap_or(f64::NAN))
            .unwrap_or(f64::NAN);
        csv.push_str(&format!(
            "\"{}\",\"{}\",\"{}\",\"{}\",{}\n",
            fmt_coords(&lam),
            fmt_coords(&m),
            fmt_coords(nu),
            a.to_string_with(&names),
            numeric
        ));
        rows.push(StructureRowOut {
            lambda: lam.0.clone(),
            mu: m.0.clone(),
            nu: nu.0.clone(),
            a: a.to_string_with(&names),
            a_numeric: numeric,
        });
    }
    emit(&rows, out, Some(csv))
}

fn cmd_phi_check(
    root: &RootArgs,
    lambda: &Option<String>,
    max_height: i64,
    out: &OutputArgs,
) -> CliResult<()> {
    let (ctx, cfg) = build_context(root)?;
    let lams: Vec<Coweight> =
        if lambda.is_some() || cfg.as_ref().is_some_and(|c| c.task.lambda.is_some()) {
            vec![resolve_coweight(lambda, &cfg, ctx.rank(), "lambda")?]
        } else {
            dominant_sweep(ctx.rank(), max_height)
        };
    let mut failures = Vec::new();
    for lam in &lams {
        if let Err(e) = ctx.verify_phi_equals_spherical(lam) {
            failures.push(format!("lambda={lam}: {e}"));
        }
    }
    let pass = failures.is_empty();
    let report = PhiCheckReport {
        checked: lams.iter().map(|l| l.0.clone()).collect(),
        failures: failures.clone(),
        pass,
    };
    emit(&report, out, None)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Check(failures.join("; ")))
    }
}

fn dominant_sweep(rank: usize, hmax: i64) -> Vec<Coweight> {
    let mut out = Vec::new();
    let mut c = vec![0i64; rank];
    'outer: loop {
        out.push(Coweight(c.clone()));
        for i in 0..rank {
            c[i] += 1;
            if c.iter().sum::<i64>() <= hmax {
                continue 'outer;
            }
            c[i] = 0;
        }
        break;
    }
    out.sort();
    out
}

fn cmd_plancherel(
    root: &RootArgs,
    max_height: i64,
    grid: usize,
    tol: f64,
    mode: &str,
    out: &OutputArgs,
) -> CliResult<()> {
    let (ctx, cfg) = build_context(root)?;
    let max_height = cfg
        .as_ref()
        .and_then(|c| c.task.max_height)
        .unwrap_or(max_height);
    let grid_n = cfg.as_ref().and_then(|c| c.task.grid).unwrap_or(grid);
    let tol = cfg.as_ref().and_then(|c| c.task.tol).unwrap_or(tol);
    let include_boundary = match mode {
        "auto" => ctx.is_exceptional(),
        "standard" => false,
        "exceptional" => {
            if !ctx.is_exceptional() {
                return config_err("exceptional mode requested for a standard parameter system");
            }
            true
        }
        other => return config_err(format!("unknown mode {other:?}")),
    };
    let lams = dominant_sweep(ctx.rank(), max_height);
    let matrix = ctx
        .pairing_matrix(&lams, Grid::new(grid_n), include_boundary)
        .map_err(|e| CliError::Check(e.to_string()))?;
    let mut residuals = Vec::new();
    let mut max_res: f64 = 0.0;
    for (i, li) in lams.iter().enumerate() {
        let mut row = Vec::new();
        for j in 0..lams.len() {
            let expect = if i == j {
                ctx.n_lambda_value(li)
                    .map_err(|e| CliError::Check(e.to_string()))?
                    .recip()
                    .to_f64()
                    .unwrap()
            } else {
                0.0
            };
            let r = (matrix[i][j] - Complex64::new(expect, 0.0)).norm();
            max_res = if r.is_finite() {
                max_res.max(r)
            } else {
                f64::INFINITY
            };
            row.push(r);
        }
        residuals.push(row);
    }
    let pass = max_res < tol;
    let mut csv = String::from("i,j,lambda_i,lambda_j,residual\n");
    for (i, li) in lams.iter().enumerate() {
        for (j, lj) in lams.iter().enumerate() {
            csv.push_str(&format!(
                "{i},{j},\"{}\",\"{}\",{}\n",
                fmt_coords(li),
                fmt_coords(lj),
                residuals[i][j]
            ));
        }
    }
    let report = PlancherelReport {
        mode: if ctx.is_exceptional() {
            "exceptional".into()
        } else {
            "standard".into()
        },
        boundary_included: include_boundary,
        grid: grid_n,
        tol,
        lambdas: lams.iter().map(|l| l.0.clone()).collect(),
        residual_matrix: residuals,
        max_residual: max_res,
        higman_warning: ctx.ps.higman_warning,
        pass,
    };
    emit(&report, out, Some(csv))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "orthogonality residual {max_res:.3e} at tolerance {tol:.1e}"
        )))
    }
}

fn cmd_norm(root: &RootArgs, max_height: i64, out: &OutputArgs) -> CliResult<()> {
    let (ctx, cfg) = build_context(root)?;
    let max_height = cfg
        .as_ref()
        .and_then(|c| c.task.max_height)
        .unwrap_or(max_height);
    let names = z_names(&ctx);
    let rank1_tree = ctx.rank() == 1 && ctx.ps.q.iter().all(|v| v.is_integer());
    let mut entries = Vec::new();
    for lam in dominant_sweep(ctx.rank(), max_height) {
        let (exact, value) = ctx
            .norm_at_one(&lam)
            .map_err(|e| CliError::Check(e.to_string()))?;
        let (tree_pi, tree_ladder) = if rank1_tree && lam.0[0] > 0 {
            let q0 = ctx.ps.q[0].to_f64().unwrap().round() as u32;
            let q1 = ctx.ps.q[1].to_f64().unwrap().round() as u32;
            let k = lam.0[0];
            (
                Some(sfab::tree::radial_power_iteration(q0, q1, k, 12, 600)),
                Some(sfab::tree::radial_norm_extrapolated(
                    q0,
                    q1,
                    k,
                    &[8, 10, 12],
                    600,
                )),
            )
        } else {
            (None, None)
        };
        entries.push(NormEntry {
            lambda: lam.0.clone(),
            norm: value,
            exact: exact.to_string_with(&names),
            tree_power_iteration: tree_pi,
            tree_ladder_estimate: tree_ladder,
        });
    }
    emit(&NormReport { entries }, out, None)
}

fn cmd_tree(q0: u32, q1: u32, depth: u32, verify: &str, out: &OutputArgs) -> CliResult<()> {
    let tree = TreeBuilding::build(q0, q1, depth).map_err(|e| CliError::Config(e.to_string()))?;
    let ctx = if q0 == q1 {
        Context::with_integer_q(RsType::A, 1, &[q0 as i64, q1 as i64])
    } else {
        Context::with_integer_q(RsType::BC, 1, &[q0 as i64, q1 as i64])
    }
    .map_err(|e| CliError::Config(e.to_string()))?;
    let which: Vec<&str> = if verify == "all" {
        vec!["counts", "horocycle", "rn", "integral", "norm"]
    } else {
        verify.split(',').map(|s| s.trim()).collect()
    };
    let mut checks = Vec::new();
    let unit = tree.lambda_unit();
    let kmax = ((depth / unit) as i64 - 1).clamp(1, 4);
    for w in which {
        let check = match w {
            "counts" => {
                let mut ok = true;
                let mut detail = String::new();
                for k in 0..=kmax {
                    let t = tree.sphere_count(tree.root(), k).unwrap();
                    let f = ctx.n_lambda_value(&Coweight(vec![k])).unwrap();
                    if Rat::from_integer(t.into()) != f {
                        ok = false;
                        detail = format!("k={k}: tree {t} vs formula {f}");
                        break;
                    }
                }
                if ok {
                    detail = format!("spheres match N_k for k <= {kmax}");
                }
                TreeCheck {
                    name: "counts".into(),
                    pass: ok,
                    detail,
                }
            }
            "horocycle" => {
                let end = tree.ends().start;
                let mut ok = true;
                let mut detail = String::new();
                for k in 0..=kmax {
                    let census = tree.horocycle_census(k, end).unwrap();
                    match ctx.horocycle_distribution(&Coweight(vec![k])) {
                        Err(e) => {
                            ok = false;
                            detail = format!("k={k}: {e}");
                            break;
                        }
                        Ok(dist) => {
                            for (mu, (_, value)) in &dist.counts {
                                let from_tree = census.get(&mu.0[0]).copied().unwrap_or(0);
                                if &Rat::from_integer(from_tree.into()) != value {
                                    ok = false;
                                    detail = format!(
                                        "k={k} h={}: census {from_tree} vs {value}",
                                        mu.0[0]
                                    );
                                }
                            }
                        }
                    }
                }
                if ok {
                    detail = format!("census matches counts for k <= {kmax}");
                }
                TreeCheck {
                    name: "horocycle".into(),
                    pass: ok,
                    detail,
                }
            }
            "rn" => {
                let mut ok = true;
                let mut detail = String::new();
                let mut tested = 0;
                let exps: Vec<i32> = ctx
                    .ps
                    .r_exps(&ctx.rs, &Coweight(vec![1]))
                    .iter()
                    .map(|x| 2 * x)
                    .collect();
                let tau_step = ctx.ps.eval_even(&exps);
                let x = tree.root();
                for y in tree.sphere(x, unit).unwrap() {
                    for z in tree.sphere(x, 3 * unit).unwrap() {
                        if let Ok((ratio, h)) = tree.rn_ratio(x, y, z) {
                            tested += 1;
                            let mut expect = Rat::from_integer(1.into());
                            for _ in 0..h.unsigned_abs() {
                                expect *= &tau_step;
                            }
                            if h < 0 {
                                expect = expect.recip();
                            }
                            if ratio != expect {
                                ok = false;
                                detail = format!("y={y} z={z}: {ratio} vs {expect}");
                            }
                        }
                    }
                }
                if ok {
                    detail = format!("{tested} cylinder ratios exact");
                }
                TreeCheck {
                    name: "rn".into(),
                    pass: ok,
                    detail,
                }
            }
            "integral" => {
                let end = tree.ends().start;
                let mut ok = true;
                let mut detail = String::new();
                let mut max_dev: f64 = 0.0;
                let kk_max = ((depth / unit) as i64 - 2).clamp(0, kmax);
                for k in 0..=kk_max {
                    for uval in [0.7, 1.9] {
                        let u = Complex64::new(uval, 0.3);
                        let from_tree = tree.boundary_integral_hom(k, u, end).unwrap();
                        let from_formula = ctx
                            .spherical_eval(
                                &Coweight(vec![k]),
                                &sfab::torus::UPoint::new(vec![u]),
                            )
                            .unwrap();
                        let dev = (from_tree - from_formula).norm();
                        max_dev = max_dev.max(dev);
                        if dev > 1e-10 {
                            ok = false;
                            detail = format!("k={k} u={u}: deviation {dev:.2e}");
                        }
                    }
                }
                if ok {
                    detail = format!("boundary integrals match, max dev {max_dev:.2e}");
                }
                TreeCheck {
                    name: "integral".into(),
                    pass: ok,
                    detail,
                }
            }
            "norm" => {
                let raw = tree.power_iteration_norm(1, 600);
                let ladder = if depth >= 6 {
                    sfab::tree::radial_norm_extrapolated(
                        q0,
                        q1,
                        1,
                        &[depth - 4, depth - 2, depth],
                        600,
                    )
                } else {
                    raw
                };
                let (_, p1) = ctx.norm_at_one(&Coweight(vec![1])).unwrap();
                let rel = (ladder - p1).abs() / p1;
                TreeCheck {
                    name: "norm".into(),
                    pass: rel < 0.05,
                    detail: format!(
                        "power iteration {raw:.6}, depth-ladder {ladder:.6} vs P_1(1) {p1:.6} (rel {rel:.2e})"
                    ),
                }
            }
            other => TreeCheck {
                name: other.to_string(),
                pass: false,
                detail: "unknown verification".into(),
            },
        };
        checks.push(check);
    }
    let pass = checks.iter().all(|c| c.pass);
    let report = TreeReport {
        q0,
        q1,
        depth,
        nodes: tree.node_count(),
        lattice: if tree.is_semi_homogeneous() {
            "BC1 (type-0 vertices, two graph steps per lattice step)".into()
        } else {
            "A1 (all vertices)".into()
        },
        checks,
        pass,
    };
    emit(&report, out, None)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Check("tree verification failed".into()))
    }
}

fn cmd_selftest(suite: &str, out: &OutputArgs) -> CliResult<()> {
    let suite_kind = Suite::parse(suite)
        .ok_or_else(|| CliError::Config(format!("unknown suite {suite:?} (quick|full)")))?;
    let results = selftest::run_suite(suite_kind);
    for r in &results {
        eprintln!("{}", r.line());
    }
    let all = results.iter().all(|r| r.passed);
    let report = SelftestReport {
        suite: suite.to_string(),
        results: results
            .iter()
            .map(|r| SelftestEntry {
                id: r.id,
                name: r.name.to_string(),
                passed: r.passed,
                seconds: r.seconds,
                details: r.details.clone(),
            })
            .collect(),
        all_passed: all,
    };
    emit(&report, out, None)?;
    if all {
        Ok(())
    } else {
        let failed: Vec<String> = results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| format!("criterion {}", r.id))
            .collect();
        Err(CliError::Check(failed.join(", ")))
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SFAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Info { root, out } => cmd_info(root, out),
        Command::Nlambda { root, lambda, out } => cmd_nlambda(root, lambda, out),
        Command::Spherical { root, lambda, out } => cmd_spherical(root, lambda, out),
        Command::Structure {
            root,
            lambda,
            mu,
            nu,
            out,
        } => cmd_structure(root, lambda, mu, nu, out),
        Command::PhiCheck {
            root,
            lambda,
            max_height,
            out,
        } => cmd_phi_check(root, lambda, *max_height, out),
        Command::Plancherel {
            root,
            max_height,
            grid,
            tol,
            mode,
            out,
        } => cmd_plancherel(root, *max_height, *grid, *tol, mode, out),
        Command::Norm {
            root,
            max_height,
            out,
        } => cmd_norm(root, *max_height, out),
        Command::Tree {
            q0,
            q1,
            depth,
            verify,
            out,
        } => cmd_tree(*q0, *q1, *depth, verify, out),
        Command::Selftest { suite, out } => cmd_selftest(suite, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
    }
}
