//! `metaplectic`: braid-word compilation for metaplectic and Fibonacci anyon models.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use metaplectic_core::anyon::{
    enumerate_candidate_models, qubit_model_classes, FRTable, ModelSpec,
};
use metaplectic_core::ebm::{Arity, EbmSource};
use metaplectic_core::ga::{ga_search, GAConfig};
use metaplectic_core::numerics::Backend;
use metaplectic_core::report::{
    fig2, fig45, run_table, verify_word, write_table, Budget, Fig2Config, Fig45Config, FigureId,
    RunManifest, Table, TableId,
};
use metaplectic_core::search::{exhaustive_search, Objective, SearchConfig, Target};
use metaplectic_core::ska::{Compiler, SKAConfig, SkaCache};
use metaplectic_core::with_backend;

const TRUNCATED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "metaplectic",
    version,
    about = "Braid-word compilation for metaplectic anyons"
)]
struct Cli {
    /// Scalar backend: native64 or bigfloat:{128,256,512,1024}.
    #[arg(
        long,
        global = true,
        env = "METAPLECTIC_BACKEND",
        default_value = "bigfloat:256"
    )]
    backend: Backend,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Candidate models and their F/R data.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Elementary braid matrices.
    Ebm {
        #[command(subcommand)]
        action: EbmAction,
    },
    /// Solovay-Kitaev compilation of a one-qubit gate.
    Compile(CompileArgs),
    /// Genetic search for a single word length.
    GaSearch(GaArgs),
    /// Exhaustive search for the CNOT local class.
    SearchCnot(SearchArgs),
    /// Evaluate one two-qubit word under both product orders.
    Verify {
        #[arg(long)]
        model: EbmSource,
        #[arg(long)]
        word: String,
    },
    /// Reproduce a published table.
    RunTable(TableArgs),
    /// Produce plot data for a published figure.
    RunFigure(FigureArgs),
}

#[derive(Subcommand)]
enum ModelsAction {
    /// All 28 candidates with their braidability and class.
    List,
    /// One model plus the F/R tables.
    Dump {
        #[arg(long)]
        model: ModelSpec,
    },
}

#[derive(Subcommand)]
enum EbmAction {
    Dump {
        #[arg(long)]
        model: EbmSource,
        /// Number of qubits (1 or 2).
        #[arg(long, default_value_t = 1)]
        arity: u8,
    },
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    gate: String,
    #[arg(long)]
    model: EbmSource,
    #[arg(long, default_value_t = 30)]
    basic_length: usize,
    #[arg(long, default_value_t = 3)]
    level: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Plot-ready (level, distance) CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON cache of results keyed by model, gate, L0, seed and level.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct GaArgs {
    #[arg(long)]
    model: EbmSource,
    #[arg(long, default_value_t = 2)]
    arity: u8,
    #[arg(long, default_value_t = 20)]
    length: usize,
    /// `cnot`, `H` or `T`.
    #[arg(long, default_value = "cnot")]
    objective: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Restrict the alphabet to the generators.
    #[arg(long)]
    no_inverses: bool,
    /// Per-generation (generation, best, mean) CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    model: ModelSpec,
    #[arg(long, default_value_t = 1)]
    min_len: usize,
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    #[arg(long)]
    inverses: bool,
    #[arg(long, default_value_t = 1)]
    top_k: usize,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Maximum number of visited nodes.
    #[arg(long, default_value_t = 200_000_000)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// table1, table2, table3 or table4.
    table: TableId,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, default_value_t = 200_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct FigureArgs {
    /// fig2 or fig45.
    figure: FigureId,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Comma-separated seeds (fig2) or a single GA seed (fig45).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    seeds: Vec<u64>,
    /// Models to include; defaults to the studied set.
    #[arg(long, value_delimiter = ',')]
    models: Vec<EbmSource>,
    #[arg(long, default_value_t = 3)]
    max_level: usize,
    #[arg(long, default_value_t = 30)]
    basic_length: usize,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    max_len: usize,
    #[arg(long, default_value_t = 10)]
    crossover: usize,
    #[arg(long, default_value_t = 7)]
    crossover_inverses: usize,
    #[arg(long, default_value_t = 200_000_000)]
    budget: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn command_line() -> Vec<String> {
    std::env::args().collect()
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

/// Writes a result file and a `<file>.manifest.json` describing it.
fn write_with_manifest(path: &Path, bytes: &[u8], mut manifest: RunManifest) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    manifest.write_output(path, bytes)?;
    let mut mpath = path.as_os_str().to_owned();
    mpath.push(".manifest.json");
    manifest.save(Path::new(&mpath))?;
    Ok(())
}

fn arity(n: u8) -> Result<Arity> {
    Arity::from_qubits(n).with_context(|| format!("arity must be 1 or 2, got {n}"))
}

fn run(cli: Cli) -> Result<u8> {
    let backend = cli.backend;
    match cli.command {
        Command::Models {
            action: ModelsAction::List,
        } => {
            let classes = qubit_model_classes();
            let models: Vec<Value> = enumerate_candidate_models()
                .iter()
                .map(|m| {
                    let class = classes.iter().position(|c| c.first == *m || c.second == *m);
                    json!({"model": m.id(), "braidable": m.is_braidable(), "class": class})
                })
                .collect();
            print_json(&json!({"models": models, "classes": classes}))?;
        }
        Command::Models {
            action: ModelsAction::Dump { model },
        } => {
            print_json(&json!({
                "model": model.id(),
                "braidable": model.is_braidable(),
                "z_conjugate": model.z_conjugate().id(),
                "tables": FRTable::global().to_json(),
            }))?;
        }
        Command::Ebm {
            action: EbmAction::Dump { model, arity: n },
        } => {
            let arity = arity(n)?;
            let out = with_backend!(backend, R => {
                let set = model.build::<R>(arity)?;
                let mats: Vec<Value> = set.generators().iter().map(|g| g.to_json()).collect();
                json!({"model": model.label(), "arity": n, "backend": backend.to_string(), "basis": set.basis, "generators": mats})
            });
            print_json(&out)?;
        }
        Command::Compile(a) => compile(a)?,
        Command::GaSearch(a) => ga(a, backend)?,
        Command::SearchCnot(a) => return search(a, backend),
        Command::Verify { model, word } => print_json(&verify_word(&model, &word, backend)?)?,
        Command::RunTable(a) => return table(a, backend),
        Command::RunFigure(a) => return figure(a, backend),
    }
    Ok(0)
}

fn compile(a: CompileArgs) -> Result<()> {
    let Some(target) = Target::parse(&a.gate) else {
        bail!("unknown gate {:?}; use H or T", a.gate)
    };
    let mut cfg = SKAConfig::new(a.model.clone(), a.seed);
    cfg.basic_length = a.basic_length;
    cfg.max_level = a.level;
    let config = serde_json::to_value(&cfg)?;
    let matrix = target.gate::<f64>()?.matrix;
    let mut cache = match &a.cache {
        Some(p) => SkaCache::load(p)?,
        None => SkaCache::default(),
    };
    let key = |level| {
        SkaCache::key(
            &a.model.label(),
            target.label(),
            a.basic_length,
            a.seed,
            level,
        )
    };
    let cached: Option<Vec<_>> = (0..=a.level).map(|l| cache.get(&key(l)).cloned()).collect();
    let levels = match cached {
        Some(levels) => levels,
        None => {
            for approx in Compiler::new(cfg).compile(&matrix)? {
                cache.insert(key(approx.level), &approx);
            }
            (0..=a.level)
                .filter_map(|l| cache.get(&key(l)).cloned())
                .collect()
        }
    };
    if let Some(p) = &a.cache {
        cache.save(p)?;
    }
    let by_level: serde_json::Map<String, Value> = levels
        .iter()
        .enumerate()
        .map(|(l, c)| {
            (
                l.to_string(),
                json!({"word": c.word, "length": c.length, "distance": c.distance}),
            )
        })
        .collect();
    print_json(
        &json!({"model": a.model.label(), "gate": target.label(), "seed": a.seed, "levels": by_level}),
    )?;
    if let Some(path) = &a.csv {
        let mut t = Table::new("compile", &["level", "distance"]);
        for (l, c) in levels.iter().enumerate() {
            t.push(vec![l.to_string(), format!("{:e}", c.distance)]);
        }
        let manifest = RunManifest::new(command_line(), config, Some(a.seed), Backend::Native64);
        write_with_manifest(path, t.to_csv()?.as_bytes(), manifest)?;
    }
    Ok(())
}

fn ga(a: GaArgs, backend: Backend) -> Result<()> {
    let arity = arity(a.arity)?;
    let obj = if a.objective.eq_ignore_ascii_case("cnot") {
        Objective::cnot(backend)
    } else {
        let Some(t) = Target::parse(&a.objective) else {
            bail!("unknown objective {:?}", a.objective)
        };
        Objective::gate(t, backend)
    };
    let d = GAConfig::default();
    let cfg = GAConfig {
        word_length: a.length,
        seed: a.seed,
        population: a.population.unwrap_or(d.population),
        generations: a.generations.unwrap_or(d.generations),
        restarts: a.restarts.unwrap_or(d.restarts),
        threads: a.threads.unwrap_or(d.threads),
        use_inverses: !a.no_inverses,
        ..d
    };
    let res = ga_search(&cfg, &a.model, arity, &obj)?;
    if let Some(path) = &a.trace {
        let mut t = Table::new("trace", &["restart", "generation", "best", "mean"]);
        for s in &res.trace {
            t.push(vec![
                s.restart.to_string(),
                s.generation.to_string(),
                format!("{:e}", s.best),
                format!("{:e}", s.mean),
            ]);
        }
        let manifest = RunManifest::new(
            command_line(),
            serde_json::to_value(&cfg)?,
            Some(cfg.seed),
            backend,
        );
        write_with_manifest(path, t.to_csv()?.as_bytes(), manifest)?;
    }
    print_json(&res.record)
}

fn search(a: SearchArgs, backend: Backend) -> Result<u8> {
    let cfg = SearchConfig::new(a.model, Arity::TwoQubit)
        .lengths(a.min_len, a.max_len)
        .inverses(a.inverses)
        .top_k(a.top_k)
        .threads(a.threads)
        .budget(a.budget);
    let out = exhaustive_search(&cfg, &Objective::cnot(backend))?;
    let mut t = Table::new(
        "search",
        &[
            "model",
            "length",
            "word",
            "distance",
            "m11_abs",
            "unitarity_defect",
            "backend",
        ],
    );
    t.truncated = out.truncated;
    for res in &out.lengths {
        for r in res.records.iter().take(a.top_k) {
            let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
            t.push(vec![
                r.model.clone(),
                r.length.to_string(),
                r.word.clone(),
                r.distance_decimal
                    .clone()
                    .unwrap_or_else(|| format!("{:e}", r.score)),
                opt(r.m11_abs),
                opt(r.unitarity_defect),
                r.backend.to_string(),
            ]);
        }
    }
    let csv = t.to_csv()?;
    match &a.out {
        Some(path) => {
            let manifest =
                RunManifest::new(command_line(), serde_json::to_value(&cfg)?, None, backend);
            write_with_manifest(path, csv.as_bytes(), manifest)?;
        }
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    if out.truncated {
        eprintln!(
            "budget exhausted: searched up to length {}",
            out.searched_max_len
        );
        return Ok(TRUNCATED);
    }
    Ok(0)
}

fn finish(t: &Table, dir: &Path, mut manifest: RunManifest) -> Result<u8> {
    let path = write_table(dir, t, &mut manifest)?;
    println!("{}", path.display());
    Ok(if t.truncated { TRUNCATED } else { 0 })
}

fn table(a: TableArgs, backend: Backend) -> Result<u8> {
    let budget = Budget {
        max_len: a.max_len,
        node_budget: a.budget,
        threads: a.threads,
        backend,
    };
    let t = run_table(a.table, &budget)?;
    let config = json!({"table": a.table, "budget": budget});
    finish(
        &t,
        &a.out_dir,
        RunManifest::new(command_line(), config, None, backend),
    )
}

fn figure(a: FigureArgs, backend: Backend) -> Result<u8> {
    match a.figure {
        FigureId::Fig2 => {
            let mut cfg = Fig2Config {
                seeds: a.seeds.clone(),
                max_level: a.max_level,
                basic_length: a.basic_length,
                cache: a.cache,
                ..Fig2Config::default()
            };
            if !a.models.is_empty() {
                cfg.models = a.models;
            }
            let t = fig2(&cfg)?;
            let manifest = RunManifest::new(
                command_line(),
                serde_json::to_value(&cfg)?,
                a.seeds.first().copied(),
                Backend::Native64,
            );
            finish(&t, &a.out_dir, manifest)
        }
        FigureId::Fig45 => {
            let mut cfg = Fig45Config {
                max_len: a.max_len,
                crossover_plain: a.crossover,
                crossover_inverses: a.crossover_inverses,
                seed: a.seeds.first().copied().unwrap_or(0),
                backend,
                node_budget: a.budget,
                ..Fig45Config::default()
            };
            if !a.models.is_empty() {
                cfg.models = a
                    .models
                    .iter()
                    .map(|m| match m {
                        EbmSource::Metaplectic(spec) => Ok(*spec),
                        other => bail!("{} has no two-qubit generators", other.label()),
                    })
                    .collect::<Result<_>>()?;
            }
            let t = fig45(&cfg)?;
            let manifest = RunManifest::new(
                command_line(),
                serde_json::to_value(&cfg)?,
                Some(cfg.seed),
                backend,
            );
            finish(&t, &a.out_dir, manifest)
        }
    }
}
