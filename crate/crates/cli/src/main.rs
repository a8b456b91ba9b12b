mod format;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use matrigid::{
    colour_edges, construct_k6_minus_e, construct_k7_hyper_with, construct_km, pebble_game,
    Construction, ConstructionOptions, CylKind, ToleranceConfig,
};

use format::{Certificate, NormFile, SpaceSpec};
use report::name_edges;

/// Exit status for unreadable or invalid input.
const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "matrigid",
    version,
    about = "Rigidity of bar-joint frameworks in normed matrix spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a framework file. Exit 0 rigid, 1 flexible, 2 not well-positioned.
    Analyze {
        path: PathBuf,
        /// Relative rank tolerance (overrides MATRIGID_TOL and the file).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// (k, l)-sparsity of a graph. Exit 0 tight, 1 sparse, 2 not sparse.
    Sparsity {
        path: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write a rigid framework in a cylindrical space.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Number of vertices for `km`.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value = "cyl")]
        space: SpaceKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the edge colour classes of a product-space framework. Exit 2 if any edge is degenerate.
    Colour {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    K6e,
    K7h,
    Km,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceKind {
    Cyl,
    Hcyl,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(body: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn env_tol() -> anyhow::Result<Option<f64>> {
    match std::env::var("MATRIGID_TOL") {
        Ok(s) => {
            let v: f64 = s
                .trim()
                .parse()
                .with_context(|| format!("MATRIGID_TOL={s:?} is not a number"))?;
            Ok(Some(v))
        }
        Err(_) => Ok(None),
    }
}

fn check_tol(v: f64) -> anyhow::Result<f64> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        bail!("rank tolerance {v} must lie in (0, 1)")
    }
}

fn load(path: &Path, tol: Option<f64>) -> anyhow::Result<format::Loaded> {
    let text = read(path)?;
    let rank_tol = match tol {
        Some(t) => Some(check_tol(t)?),
        None => env_tol()?.map(check_tol).transpose()?,
    };
    format::load_framework(&text, ToleranceConfig::default(), |t| match rank_tol {
        Some(r) => t.with_rank_rel_tol(r),
        None => t,
    })
    .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn cmd_analyze(
    path: &Path,
    tol: Option<f64>,
    json: bool,
    out: Option<&Path>,
) -> anyhow::Result<u8> {
    let loaded = load(path, tol)?;
    let report = report::build(
        &loaded.framework,
        &loaded.names,
        loaded.certificate.as_ref(),
    )?;
    let body = if json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        report::render_text(&report)
    };
    emit(&body, out)?;
    Ok(report.exit_code())
}

fn cmd_sparsity(path: &Path, k: usize, l: usize, json: bool) -> anyhow::Result<u8> {
    let text = read(path)?;
    let (graph, names) =
        format::load_graph(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let v = pebble_game(&graph, k, l)?;
    let code = if v.tight {
        0
    } else if v.sparse {
        1
    } else {
        2
    };
    if json {
        let witness = v.witness.as_ref().map(|w| {
            serde_json::json!({
                "vertices": w.vertices.iter().map(|&i| names[i].clone()).collect::<Vec<_>>(),
                "edges": name_edges(&w.edges, &names),
            })
        });
        let doc = serde_json::json!({
            "k": k,
            "l": l,
            "vertices": graph.n_vertices(),
            "edges": graph.n_edges(),
            "sparse": v.sparse,
            "tight": v.tight,
            "witness": witness,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        let status = match code {
            0 => "tight",
            1 => "sparse, not tight",
            _ => "not sparse",
        };
        println!(
            "({k},{l}) {status}: |V| = {}, |E| = {}",
            graph.n_vertices(),
            graph.n_edges()
        );
        if let Some(w) = &v.witness {
            let vs: Vec<&str> = w.vertices.iter().map(|&i| names[i].as_str()).collect();
            println!(
                "witness: {} vertices {{{}}}, {} edges: {}",
                vs.len(),
                vs.join(", "),
                w.edges.len(),
                report::edge_list(&name_edges(&w.edges, &names))
            );
        }
    }
    Ok(code)
}

struct ConstructArgs {
    kind: ConstructKind,
    epsilon: Option<f64>,
    delta: Option<f64>,
    m: Option<usize>,
    space: SpaceKind,
    seed: u64,
}

/// A construction with its name, parameters and seed.
type Built = (
    Construction,
    &'static str,
    IndexMap<String, f64>,
    Option<u64>,
);

fn run_construction(a: &ConstructArgs) -> anyhow::Result<Built> {
    let mut params = IndexMap::new();
    Ok(match a.kind {
        ConstructKind::K6e => {
            let (e, d) = (a.epsilon.unwrap_or(0.25), a.delta.unwrap_or(0.25));
            params.insert("epsilon".into(), e);
            params.insert("delta".into(), d);
            (construct_k6_minus_e(e, d)?, "k6e", params, None)
        }
        ConstructKind::K7h => {
            let (e, d) = (a.epsilon.unwrap_or(0.4), a.delta.unwrap_or(1.1));
            params.insert("epsilon".into(), e);
            params.insert("delta".into(), d);
            let opts = ConstructionOptions {
                seed: a.seed,
                ..Default::default()
            };
            (
                construct_k7_hyper_with(e, d, &opts)?,
                "k7h",
                params,
                Some(a.seed),
            )
        }
        ConstructKind::Km => {
            let m = a.m.context("km needs --m")?;
            let kind = match a.space {
                SpaceKind::Cyl => CylKind::Cylindrical,
                SpaceKind::Hcyl => CylKind::HyperCylindrical,
            };
            params.insert("m".into(), m as f64);
            (construct_km(m, kind, a.seed)?, "km", params, Some(a.seed))
        }
    })
}

fn cmd_construct(a: &ConstructArgs, out: Option<&Path>) -> anyhow::Result<u8> {
    let (c, name, parameters, seed) = run_construction(a)?;
    let fw = &c.framework;
    let names: Vec<String> = (1..=fw.n_vertices()).map(|i| format!("v{i}")).collect();
    let cert = &c.certificate;
    let certificate = Certificate {
        construction: name.into(),
        parameters,
        seed,
        attempts: c.attempts,
        verdict: cert.verdict,
        rank: cert.whole.rank,
        flex_dim: cert.whole.flex_dim,
        trivial_dim: cert.whole.trivial_dim,
        colour_classes: cert
            .colours
            .classes
            .iter()
            .map(|e| name_edges(e, &names))
            .collect(),
        factor_ranks: cert.factors.iter().map(|f| f.report.rank).collect(),
        tolerances: *fw.tolerances(),
    };
    let norm = match fw.space().norm() {
        matrigid::NormSpec::HyperCylindrical => NormFile::Hypercylindrical,
        _ => NormFile::Cylindrical,
    };
    let space = SpaceSpec::Product {
        norm: Some(norm),
        factors: None,
    };
    let file = format::framework_file(space, fw, &names, Some(certificate));
    emit(&(serde_json::to_string_pretty(&file)? + "\n"), out)?;
    Ok(0)
}

fn cmd_colour(path: &Path, json: bool) -> anyhow::Result<u8> {
    let loaded = load(path, None)?;
    let colours = colour_edges(&loaded.framework)?;
    let section = report::ColourSection {
        classes: colours
            .classes
            .iter()
            .map(|c| name_edges(c, &loaded.names))
            .collect(),
        degenerate: name_edges(&colours.degenerate, &loaded.names),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&section)?);
    } else {
        print!("{}", report::render_colours(&section));
    }
    Ok(if section.degenerate.is_empty() { 0 } else { 2 })
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Analyze {
            path,
            tol,
            json,
            text: _,
            out,
        } => cmd_analyze(&path, tol, json, out.as_deref()),
        Command::Sparsity { path, k, l, json } => cmd_sparsity(&path, k, l, json),
        Command::Construct {
            kind,
            epsilon,
            delta,
            m,
            space,
            seed,
            out,
        } => {
            let args = ConstructArgs {
                kind,
                epsilon,
                delta,
                m,
                space,
                seed,
            };
            cmd_construct(&args, out.as_deref())
        }
        Command::Colour { path, json } => cmd_colour(&path, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the input-error status; 2 means "not well-positioned"
            return if e.use_stderr() {
                ExitCode::from(INPUT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
