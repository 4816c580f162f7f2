use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use homforge::corner::{build_stage, CornerError};
use homforge::gfun::active_set;
use homforge::graph::{canonical_form, enumerate_homs, rigid_search, GraphError, GraphRef};
use homforge::ortho::{is_orthogonal, transported_orthogonality};

use crate::checks::{corpus_refs, gamma_check, gadget_check, ortho_grid, recover_check, stage_law_checks, IDEMPOTENT_SPLIT, STAGE_INVARIANTS};
use crate::config::Config;
use crate::demos;
use crate::io::{read_experiment, read_graphs, CliError};
use crate::report::{Check, Report};

#[derive(Parser, Debug)]
#[command(name = "homforge", version, about = "Finite graph categories realized in abelian groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Largest vertex count in the generated corpus.
    #[arg(long, global = true, default_value_t = 3)]
    pub corpus_max_n: usize,
    #[arg(long, global = true, default_value_t = homforge::corner::DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
    #[arg(long, global = true, default_value_t = homforge::ortho::DEFAULT_REFLECT_CAP)]
    pub reflect_cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List all homomorphisms from the first graph of one file to the first of another.
    Homs { x: PathBuf, y: PathBuf },
    /// Canonical form of every graph in a file.
    Canon { input: PathBuf },
    /// Embed the graphs of a file, or check the embedding on the corpus.
    Embed { input: Option<PathBuf> },
    /// Comparison map checks on every ordered corpus pair.
    GammaCheck {
        /// Also check multiplier recovery on every n-th pair stage (0: single-graph stages only).
        #[arg(long, default_value_t = 97)]
        recover_stride: usize,
    },
    /// Build the stage on all homs among the graphs of a file.
    CornerStage { input: PathBuf },
    /// Reflections from an experiment file, or the built-in suite.
    Reflect { experiment: Option<PathBuf> },
    /// Orthogonality verdicts from an experiment file, or the corpus grid.
    OrthoGrid { experiment: Option<PathBuf> },
    /// Finite demonstrations.
    Demo {
        #[arg(value_enum)]
        section: Section,
        #[arg(value_enum)]
        which: Demo,
    },
    /// Search for a family of pairwise rigid graphs.
    RigidSearch {
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[arg(long, default_value_t = 2)]
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Section {
    Section5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    Rigid,
    Chains,
    Wedge,
}

impl GlobalArgs {
    pub fn config(&self) -> Result<Config, CliError> {
        let cfg = Config {
            corpus_max_n: self.corpus_max_n,
            degree_cap: self.degree_cap,
            reflect_cap: self.reflect_cap,
            seed: self.seed,
            ..Config::default()
        };
        cfg.validate().map_err(CliError::Usage)?;
        Ok(cfg)
    }
}

fn corner_err(e: CornerError) -> CliError {
    match e {
        CornerError::TooLarge => CliError::Guard(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = cli.global.config()?;
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Homs { x, y } => {
            let x: GraphRef = Arc::new(read_graphs(x)?.remove(0));
            let y: GraphRef = Arc::new(read_graphs(y)?.remove(0));
            let homs = enumerate_homs(&x, &y);
            let mut r = Report::new("homs", &cfg);
            r.data = json!({
                "x": x.id(),
                "y": y.id(),
                "count": homs.len(),
                "homs": homs.iter().map(|h| h.map().to_vec()).collect::<Vec<_>>(),
            });
            r
        }
        Command::Canon { input } => {
            let graphs = read_graphs(input)?;
            let rows: Vec<_> = graphs
                .iter()
                .map(|g| {
                    let (c, iso) = canonical_form(g);
                    json!({ "id": g.id(), "code": c.id(), "canonical": c, "iso": iso.map() })
                })
                .collect();
            let mut r = Report::new("canon", &cfg);
            r.data = json!(rows);
            r
        }
        Command::Embed { input: Some(path) } => {
            let graphs = read_graphs(path)?;
            let rows: Vec<_> = graphs.iter().map(|g| cfg.gadget_layout.embed_obj(g)).collect();
            let mut r = Report::new("embed", &cfg);
            r.data = json!({ "layout": cfg.gadget_layout, "embedded": rows });
            r
        }
        Command::Embed { input: None } => {
            let mut r = gadget_check(&corpus_refs(cfg.corpus_max_n), &cfg.gadget_layout, cfg.seed, 2000);
            r.config = cfg.clone();
            r
        }
        Command::GammaCheck { recover_stride } => gamma_check(&corpus_refs(cfg.corpus_max_n), &cfg, *recover_stride),
        Command::CornerStage { input } => {
            let graphs = read_graphs(input)?;
            let stage = build_stage(active_set(&graphs), cfg.degree_cap).map_err(corner_err)?;
            let (mut inv, mut split) = (Check::new(STAGE_INVARIANTS), Check::new(IDEMPOTENT_SPLIT));
            stage_law_checks(&stage, &mut inv, &mut split);
            let mut rng = crate::checks::pair_rng(cfg.seed, 0, 0);
            let recover = recover_check(&stage, &mut rng, cfg.multipliers);
            let mut r = Report::new("corner-stage", &cfg);
            r.checks = vec![inv, split, recover];
            r.data = serde_json::to_value(&stage).expect("stage serializes");
            r
        }
        Command::Reflect { experiment } => {
            let mut cfg = cfg.clone();
            let instances = match experiment {
                Some(path) => {
                    let res = read_experiment(path)?;
                    if let Some(cap) = res.cap {
                        cfg.reflect_cap = cap.max(1);
                    }
                    res.instances
                }
                None => demos::curated_instances(),
            };
            demos::reflection_suite(&instances, &cfg)
        }
        Command::OrthoGrid { experiment: Some(path) } => {
            let res = read_experiment(path)?;
            let (s, d) = res.grid.ok_or_else(|| CliError::Usage("experiment has no `grid` section".into()))?;
            let mut check = Check::new("ortho_transport");
            let mut matrix = Vec::new();
            for f in &s {
                let row: Vec<bool> = d
                    .iter()
                    .map(|x| {
                        let set = is_orthogonal(f, x);
                        let lin = transported_orthogonality(f, x);
                        check.record(set == lin, || json!({ "f": format!("{f:?}"), "x": x.id() }));
                        set
                    })
                    .collect();
                matrix.push(row);
            }
            let mut r = Report::new("ortho-grid", &cfg);
            r.push(check);
            r.data = json!({
                "s": s.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>(),
                "d": d.iter().map(|g| g.id()).collect::<Vec<_>>(),
                "verdicts": matrix,
            });
            r
        }
        Command::OrthoGrid { experiment: None } => {
            let corpus = corpus_refs(cfg.corpus_max_n);
            ortho_grid(&corpus, &corpus, &cfg)
        }
        Command::Demo { section: Section::Section5, which } => match which {
            Demo::Chains => demos::chains(6, &cfg),
            Demo::Wedge => demos::wedge(&cfg),
            Demo::Rigid => demos::rigid(8, 2, &cfg).map_err(|e| CliError::Guard(e.to_string()))?,
        },
        Command::RigidSearch { max_vertices, count } => {
            let mut r = Report::new("rigid-search", &cfg);
            let mut c = Check::new("rigid_search");
            match rigid_search(*max_vertices, *count) {
                Ok(gs) => {
                    c.record(true, || json!(null));
                    r.data = json!({ "graphs": gs });
                }
                Err(e @ GraphError::RigidNotFound { .. }) => c.record(false, || json!({ "error": e.to_string() })),
                Err(e) => return Err(CliError::Usage(e.to_string())),
            }
            r.push(c);
            r
        }
    };
    if report.timing_ms == 0 {
        report.timing_ms = start.elapsed().as_millis();
    }
    Ok(report)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    }
}
