use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wickrot_core::calabi::{calabi_dual, calabi_inverse, compare_mod_sign, sample, CalabiOptions};
use wickrot_core::catalog::{audit_entry, Catalog, CatalogEntry};
use wickrot_core::geometry::{analyze_point, forms_at, principal_classification, LIGHTLIKE_TOL};
use wickrot_core::lightlike::{classify_line, conjugate_parts, NullCurve};
use wickrot_core::report::{to_json, GridReport, Mesh};
use wickrot_core::wick::{
    mirrored_probes, parity_classify, sup_difference, transform, transform_table, wick_apply,
    WickOptions, PARITY_TOL,
};
use wickrot_core::{Error, GraphKind, Rect, Result, Slot, SurfaceGraph};

#[derive(Parser)]
#[command(
    name = "wickrot",
    version,
    about = "Wick rotations of minimal and maximal graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the graph equation on a grid.
    Verify(Common),
    /// Classify the parity of the height in each slot.
    Parity(Common),
    /// Apply one of the rotations in the transform table.
    Wick(WickArgs),
    /// Curvatures on a grid, or the full point analysis with --at.
    Curvature(CurvatureArgs),
    /// Classify a lightlike line through a witness point.
    ClassifyLine(LineArgs),
    /// Integrate the dual (E3 source) or inverse (ZMC source) graph.
    Calabi(CalabiArgs),
    /// Spacelike and timelike parts generated by a null curve.
    Conjugate(ConjugateArgs),
    /// Write a grid as csv, obj or json.
    Export(Common),
    /// Inspect and audit the bundled catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List all entries.
    List,
    /// Print one entry as JSON.
    Show { id: String },
    /// Re-verify entries (all when no id is given).
    Audit {
        id: Option<String>,
        #[arg(long, default_value_t = 21)]
        grid: usize,
    },
    /// List the transform table.
    Transforms,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Obj,
}

#[derive(Args, Clone)]
struct Common {
    /// Height function in the expression language.
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    #[arg(long, value_parser = parse_kind)]
    kind: Option<GraphKind>,
    /// Catalog entry id (supplies expr, kind and domain).
    #[arg(long, conflicts_with = "expr")]
    catalog: Option<String>,
    /// Rectangle `a:b:c:d`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rect)]
    domain: Option<Rect>,
    #[arg(long, default_value_t = 41)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 1e-8)]
    tol_residual: f64,
    #[arg(long, default_value_t = LIGHTLIKE_TOL)]
    tol_lightlike: f64,
    #[arg(long, default_value_t = PARITY_TOL)]
    tol_parity: f64,
}

#[derive(Args)]
struct WickArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    transform: String,
    /// Domain used for parity probes; defaults to the catalog domain or --domain.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rect)]
    source_domain: Option<Rect>,
    /// Closed form to compare the rotated graph against.
    #[arg(long, allow_hyphen_values = true)]
    compare: Option<String>,
    /// Compare against the negated closed form.
    #[arg(long)]
    negate: bool,
}

#[derive(Args)]
struct CurvatureArgs {
    #[command(flatten)]
    common: Common,
    /// Analyze a single point `u,v`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    at: Option<[f64; 2]>,
}

#[derive(Args)]
struct LineArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    witness: Option<[f64; 2]>,
    /// Range `a:b` of the line parameter after normalization.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    range: Option<[f64; 2]>,
    #[arg(long, default_value_t = 41)]
    samples: usize,
}

#[derive(Args)]
struct CalabiArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    base: Option<[f64; 2]>,
    /// Closed form to compare against up to sign and an additive constant.
    #[arg(long, allow_hyphen_values = true)]
    compare: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    tol_compare: f64,
}

#[derive(Args)]
struct ConjugateArgs {
    /// Components (t, x, y) of the null curve in the parameter `s`.
    #[arg(long, num_args = 3, allow_hyphen_values = true, required = true)]
    curve: Vec<String>,
    /// Parameter rectangle `u0:u1:v0:v1`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rect, default_value = "0:6.283185307179586:-1:1")]
    domain: Rect,
    #[arg(long, default_value_t = 10)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> std::result::Result<GraphKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rect(s: &str) -> std::result::Result<Rect, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_point(s: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split([',', ':']).collect();
    if parts.len() != 2 {
        return Err(format!("expected two numbers `a,b`, got `{s}`"));
    }
    let num = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{p}` is not a number"))
    };
    Ok([num(parts[0])?, num(parts[1])?])
}

struct Source {
    graph: SurfaceGraph,
    entry: Option<CatalogEntry>,
}

fn load_source(c: &Common) -> Result<Source> {
    match (&c.catalog, &c.expr) {
        (Some(id), _) => {
            let entry = Catalog::from_env()?.get(id)?.clone();
            let mut graph = entry.graph()?;
            if let Some(d) = c.domain {
                graph = graph.with_domain(d);
            }
            Ok(Source {
                graph,
                entry: Some(entry),
            })
        }
        (None, Some(expr)) => {
            let kind = c
                .kind
                .ok_or_else(|| Error::InvalidArgument("--expr needs --kind".into()))?;
            let domain = c
                .domain
                .ok_or_else(|| Error::InvalidArgument("--expr needs --domain".into()))?;
            Ok(Source {
                graph: SurfaceGraph::from_dsl(expr, kind, domain)?,
                entry: None,
            })
        }
        (None, None) => Err(Error::InvalidArgument("give --expr or --catalog".into())),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn finish(report: &GridReport, out: &Option<PathBuf>) -> Result<bool> {
    emit(out, &report.to_json()?)?;
    let s = &report.summary;
    eprintln!(
        "{}: {} points, max scaled residual {:.3e}, census {}/{}/{} (space/time/light), {}",
        report.meta.command,
        s.points,
        s.max_scaled_residual,
        s.census.spacelike,
        s.census.timelike,
        s.census.lightlike,
        if s.pass { "PASS" } else { "FAIL" }
    );
    Ok(s.pass)
}

fn cmd_verify(c: &Common) -> Result<bool> {
    let src = load_source(c)?;
    let mut r = GridReport::build("verify", &src.graph, c.grid, c.tol_lightlike);
    r.check(
        "max_scaled_residual",
        r.summary.max_scaled_residual,
        c.tol_residual,
    );
    let pass = finish(&r, &c.out)?;
    if let Some(p) = r.failed.first() {
        return Err(Error::Domain {
            node: "grid".into(),
            detail: format!(
                "{} of {} points cannot be evaluated, first at ({}, {})",
                r.failed.len(),
                c.grid * c.grid,
                p[0],
                p[1]
            ),
        });
    }
    Ok(pass)
}

fn cmd_parity(c: &Common) -> Result<bool> {
    let src = load_source(c)?;
    let g = &src.graph;
    let names = g.kind.var_names();
    let mut verdicts = Vec::new();
    let mut pass = true;
    for slot in [Slot::V0, Slot::V1] {
        let probes = match mirrored_probes(&g.domain, slot, 32) {
            Ok(p) => p,
            Err(e) => {
                verdicts.push(json!({ "slot": names.name(slot), "error": e.to_string() }));
                continue;
            }
        };
        let found = parity_classify(&g.height, slot, &probes, c.tol_parity)?;
        let declared = src.entry.as_ref().and_then(|e| e.declared_parity(slot));
        if let Some(d) = declared {
            pass &= d == found;
        }
        verdicts.push(json!({
            "slot": names.name(slot),
            "parity": found.kind(),
            "declared": declared.map(|d| d.kind()),
        }));
    }
    emit(
        &c.out,
        &to_json(&json!({ "source": g.describe(), "slots": verdicts, "pass": pass }))?,
    )?;
    Ok(pass)
}

fn cmd_wick(a: &WickArgs) -> Result<bool> {
    let c = &a.common;
    let mut src = load_source(c)?;
    let t = transform(&a.transform)?;
    let edge = src
        .entry
        .as_ref()
        .and_then(|e| e.edge(&a.transform))
        .cloned();
    let catalog = Catalog::from_env()?;
    let target_entry = match &edge {
        Some(e) => Some(catalog.get(&e.target)?.clone()),
        None => None,
    };
    if let Some(sd) = a.source_domain {
        src.graph = src.graph.with_domain(sd);
    } else if let Some(entry) = &src.entry {
        src.graph = src.graph.with_domain(entry.rect()?);
    }
    let target_domain = match (c.domain, &target_entry) {
        (Some(d), _) => d,
        (None, Some(te)) => te.rect()?,
        (None, None) => src.graph.domain,
    };
    let opts = WickOptions {
        grid: c.grid,
        tol_parity: c.tol_parity,
        tol_residual: c.tol_residual,
        ..WickOptions::default()
    };
    let out = wick_apply(&src.graph, &t, target_domain, opts)?;
    let mut r = GridReport::build("wick", &out.graph, c.grid, c.tol_lightlike);
    r.check("failed_points", out.report.failed_points as f64, 0.5);
    let closed = match (&a.compare, &target_entry) {
        (Some(dsl), _) => Some((dsl.clone(), a.negate, "--compare".to_string())),
        (None, Some(te)) => Some((
            te.dsl.clone(),
            edge.as_ref().is_some_and(|e| e.negate),
            te.id.clone(),
        )),
        _ => None,
    };
    let mut cross = None;
    if let Some((dsl, negate, label)) = closed {
        let target = SurfaceGraph::from_dsl(&dsl, out.graph.kind, target_domain)?;
        let sign = if negate { -1.0 } else { 1.0 };
        let diff = sup_difference(&out.graph, &target, sign, &target_domain, c.grid)?;
        r.check("sup_diff_closed_form", diff, 1e-9);
        cross = Some(json!({ "against": label, "dsl": dsl, "negate": negate, "sup_diff": diff }));
    }
    let r = r.with_details(json!({ "wick": out.report, "closed_form": cross }))?;
    finish(&r, &c.out)
}

fn cmd_curvature(a: &CurvatureArgs) -> Result<bool> {
    let c = &a.common;
    let src = load_source(c)?;
    if let Some(p) = a.at {
        let point = analyze_point(&src.graph, p, c.tol_lightlike)?;
        let forms = forms_at(&src.graph, p, c.tol_lightlike).ok();
        let principal = principal_classification(&src.graph, p, c.tol_lightlike, 1e-9).ok();
        emit(
            &c.out,
            &to_json(&json!({ "point": point, "forms": forms.map(|f| json!({
                "E": f.e, "F": f.f, "G": f.g, "L": f.l, "M": f.m, "N": f.n,
                "W": f.w, "eps": f.eps, "S": f.shape_operator(),
            })), "principal": principal }))?,
        )?;
        return Ok(true);
    }
    let r = GridReport::build("curvature", &src.graph, c.grid, c.tol_lightlike);
    finish(&r, &c.out)
}

fn cmd_classify_line(a: &LineArgs) -> Result<bool> {
    let c = &a.common;
    let src = load_source(c)?;
    let spec = src.entry.as_ref().and_then(|e| e.properties.line.clone());
    let witness = a
        .witness
        .or(spec.as_ref().map(|s| s.witness))
        .ok_or_else(|| Error::InvalidArgument("--witness is required".into()))?;
    let range = a
        .range
        .or(spec.as_ref().map(|s| s.range))
        .unwrap_or([-1.0, 1.0]);
    let (_, lc) = classify_line(&src.graph, witness, range, a.samples, c.tol_lightlike)?;
    let mut pass = true;
    if let Some(s) = &spec {
        pass = lc.fit.class == s.class && (lc.fit.mu - s.mu).abs() < 1e-6;
    }
    emit(
        &c.out,
        &to_json(&json!({ "source": src.graph.describe(), "line": lc, "pass": pass }))?,
    )?;
    eprintln!(
        "class {} c = {:.6} mu = {:.6} ({})",
        lc.fit.class,
        lc.fit.c,
        lc.fit.mu,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

fn cmd_calabi(a: &CalabiArgs) -> Result<bool> {
    let c = &a.common;
    let src = load_source(c)?;
    let base = a.base.unwrap_or_else(|| src.graph.domain.center());
    let opts = CalabiOptions {
        grid: c.grid,
        tol_minimal: c.tol_residual,
        ..CalabiOptions::default()
    };
    let out = match src.graph.kind {
        GraphKind::E3 => calabi_dual(&src.graph, base, opts)?,
        GraphKind::ZMC => calabi_inverse(&src.graph, base, opts)?,
        GraphKind::BI => {
            return Err(Error::KindMismatch {
                expected: "E3|ZMC".into(),
                found: "BI".into(),
            })
        }
    };
    let mut r = GridReport::build("calabi", &out.graph, c.grid, c.tol_lightlike);
    r.check("path_mismatch", out.report.path_mismatch, 1e-8);
    let mut cmp = None;
    if let Some(dsl) = &a.compare {
        let target = SurfaceGraph::from_dsl(dsl, out.graph.kind, out.graph.domain)?;
        let reference = sample(&target, &out.graph.domain, c.grid)?;
        let (sign, err) = compare_mod_sign(&out.table, &reference);
        r.check("sup_diff_mod_sign", err, a.tol_compare);
        cmp = Some(json!({ "dsl": dsl, "sign": sign, "sup_diff": err }));
    }
    let r = r.with_details(json!({ "calabi": out.report, "compare": cmp }))?;
    finish(&r, &c.out)
}

fn cmd_conjugate(a: &ConjugateArgs) -> Result<bool> {
    let curve = NullCurve::parse([&a.curve[0], &a.curve[1], &a.curve[2]])?;
    let samples = conjugate_parts(&curve, &a.domain.grid(a.grid))?;
    let max_h = samples
        .iter()
        .flat_map(|s| [s.mean_phi, s.mean_psi])
        .flatten()
        .map(f64::abs)
        .fold(0.0, f64::max);
    let gap = samples.iter().map(|s| s.wick_gap).fold(0.0, f64::max);
    let pass = max_h < 1e-7 && gap < 1e-9;
    emit(
        &a.out,
        &to_json(
            &json!({ "curve": a.curve, "max_mean": max_h, "max_wick_gap": gap, "samples": samples, "pass": pass }),
        )?,
    )?;
    eprintln!("max |H| {max_h:.3e}, max |Phi(u,iv) - Psi(u,v)| {gap:.3e}");
    Ok(pass)
}

fn cmd_export(c: &Common) -> Result<bool> {
    let src = load_source(c)?;
    match c.format {
        Format::Json => emit(
            &c.out,
            &GridReport::build("export", &src.graph, c.grid, c.tol_lightlike).to_json()?,
        )?,
        Format::Csv => emit(
            &c.out,
            &GridReport::build("export", &src.graph, c.grid, c.tol_lightlike).to_csv(),
        )?,
        Format::Obj => {
            let mesh = Mesh::build(&src.graph, c.grid, c.tol_lightlike);
            emit(&c.out, &mesh.to_obj(&src.graph.describe()))?;
            if let Some(p) = &c.out {
                let mut side = p.clone().into_os_string();
                side.push(".lightlike");
                std::fs::write(side, mesh.lightlike_sidecar())?;
            }
        }
    }
    Ok(true)
}

fn cmd_catalog(action: &CatalogAction) -> Result<bool> {
    let cat = Catalog::from_env()?;
    match action {
        CatalogAction::List => {
            for e in cat.list() {
                println!("{e}");
            }
            Ok(true)
        }
        CatalogAction::Show { id } => {
            print!("{}", to_json(cat.get(id)?)?);
            Ok(true)
        }
        CatalogAction::Audit { id, grid } => {
            let entries: Vec<&CatalogEntry> = match id {
                Some(id) => vec![cat.get(id)?],
                None => cat.list().iter().collect(),
            };
            let mut pass = true;
            for e in entries {
                let a = audit_entry(&cat, e, *grid)?;
                println!("{:<4} {}", if a.pass() { "ok" } else { "FAIL" }, a.id);
                for p in &a.problems {
                    println!("     {p}");
                }
                pass &= a.pass();
            }
            Ok(pass)
        }
        CatalogAction::Transforms => {
            for t in transform_table() {
                println!("{:<7} {:<5} {}", t.name, t.parity.name(), t.formula);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(c) => cmd_verify(c),
        Command::Parity(c) => cmd_parity(c),
        Command::Wick(a) => cmd_wick(a),
        Command::Curvature(a) => cmd_curvature(a),
        Command::ClassifyLine(a) => cmd_classify_line(a),
        Command::Calabi(a) => cmd_calabi(a),
        Command::Conjugate(a) => cmd_conjugate(a),
        Command::Export(c) => cmd_export(c),
        Command::Catalog { action } => cmd_catalog(action),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(6),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
