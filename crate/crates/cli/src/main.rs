mod claims;
mod config;
mod output;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use ifscheck_core::dendrite::{build_dendrite, leg_count, straighten_dendrite};
use ifscheck_core::geometry::{diameter, read_csv_rows, PointCloud};
use ifscheck_core::ifs::{certify_composition_diameter, IfsDocument, IfsSystem};
use ifscheck_core::registry::{standard_table, table_with_free_arc};
use ifscheck_core::scattered::{
    classify_topological_fractal, embed_in_unit_interval, height, CnfOrdinal,
};
use ifscheck_core::shark_teeth::{
    build_free_arc_system, shark_teeth_instance, FreeArcDescription, FreeArcSpace,
};
use ifscheck_core::snake::build_snake;

use crate::claims::{run_suite, Status, Suite};
use crate::config::RunConfig;
use crate::output::{sibling, write_atomic};

#[derive(Debug, Parser)]
#[command(name = "ifscheck", version)]
#[command(
    about = "Build finite approximations of IFS counterexample spaces and check their claimed properties"
)]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (CSV for build, JSON for verify, SVG for render).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Slack used by tolerance-based claims instead of their defaults.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a space and write it as `x,y,label` CSV plus JSON metadata.
    Build {
        space: Space,
        /// Number of components (snake arcs, dendrite arcs, shark-teeth rows, ordinal blocks).
        #[arg(long)]
        depth: Option<usize>,
        /// Samples per component where that applies.
        #[arg(long)]
        samples: Option<usize>,
        /// Point spacing where that applies.
        #[arg(long)]
        resolution: Option<f64>,
        /// Ordinal to embed for `omega-omega` (CNF, e.g. `w^2*3 + 1`); defaults to `w^w`.
        #[arg(long)]
        ordinal: Option<String>,
    },
    /// Run a claim suite and write a JSON report array.
    Verify { suite: Suite },
    /// Render a CSV cloud as SVG.
    Render {
        input: PathBuf,
        #[arg(long)]
        title: Option<String>,
        #[arg(long, default_value_t = 1.2)]
        point_radius: f64,
    },
    /// Smallest word length whose composition images all fit under a threshold.
    MinWordLength {
        /// System JSON (as written next to a `build sharkteeth` cloud).
        #[arg(long)]
        system: PathBuf,
        /// Cloud `X` the words act on.
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long)]
        threshold: f64,
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        /// Resolution of `X`; defaults to the one recorded by `build`.
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Cantor-Bendixson height of `[0, β]` for a CNF ordinal.
    Height { ordinal: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    Snake,
    Sharkteeth,
    Dendrite,
    DendriteStraight,
    OmegaOmega,
}

/// System file: an IFS document, plus the free arc when the system uses
/// the free-arc maps.
#[derive(Debug, Serialize, Deserialize)]
struct SystemFile {
    #[serde(flatten)]
    system: IfsDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    free_arc: Option<FreeArcFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FreeArcFile {
    resolution: f64,
    description: FreeArcDescription,
}

#[derive(Debug, Serialize, Deserialize)]
struct BuildMeta {
    schema_version: u32,
    space: String,
    parameters: serde_json::Value,
    points: usize,
    resolution: f64,
}

/// Errors that end the run with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, UsageError> {
    let mut cfg = RunConfig::load(cli.config.as_deref()).map_err(UsageError)?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.tolerance.is_some() {
        cfg.tolerance = cli.tolerance;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    cfg.validate().map_err(UsageError)?;

    match cli.command {
        Command::Build {
            space,
            depth,
            samples,
            resolution,
            ordinal,
        } => build(&cfg, space, depth, samples, resolution, ordinal.as_deref()),
        Command::Verify { suite } => verify(&cfg, suite),
        Command::Render {
            input,
            title,
            point_radius,
        } => render(&cfg, &input, title, point_radius),
        Command::MinWordLength {
            system,
            cloud,
            threshold,
            m_max,
            resolution,
        } => min_word_length(&cfg, &system, &cloud, threshold, m_max, resolution),
        Command::Height { ordinal } => height_cmd(&cfg, &ordinal),
    }
}

fn space_name(space: Space) -> String {
    space
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn build(
    cfg: &RunConfig,
    space: Space,
    depth: Option<usize>,
    samples: Option<usize>,
    resolution: Option<f64>,
    ordinal: Option<&str>,
) -> Result<ExitCode, UsageError> {
    let name = space_name(space);
    let mut system_file = None;
    let (cloud, parameters) = match space {
        Space::Snake => {
            let depth = depth.unwrap_or(cfg.snake.depth);
            let step = resolution.unwrap_or(cfg.snake.angular_step);
            let s = build_snake(depth, step, cfg.snake.radial_step)?;
            (
                s.cloud,
                json!({ "depth": depth, "angular_step": step, "radial_step": cfg.snake.radial_step }),
            )
        }
        Space::Sharkteeth => {
            let rows = depth.unwrap_or(cfg.sharkteeth.rows);
            let samples = samples.unwrap_or(cfg.sharkteeth.samples_per_row);
            let res = resolution.unwrap_or(cfg.sharkteeth.resolution);
            let desc = shark_teeth_instance(rows, samples)?;
            let fs = build_free_arc_system(FreeArcSpace::new(&desc, res)?)?;
            system_file = Some(SystemFile {
                system: fs.system.to_document(),
                free_arc: Some(FreeArcFile {
                    resolution: res,
                    description: desc,
                }),
            });
            (
                fs.space.cloud.clone(),
                json!({ "rows": rows, "samples_per_row": samples, "resolution": res }),
            )
        }
        Space::Dendrite => {
            let depth = depth.map_or(cfg.dendrite.depth, |d| d as u32);
            let samples = samples
                .or(cfg.dendrite.samples_per_arc)
                .unwrap_or_else(|| 2 * leg_count(depth.max(1)) + 1);
            let d = build_dendrite(depth, samples)?;
            (
                d.cloud,
                json!({ "depth": depth, "samples_per_arc": samples }),
            )
        }
        Space::DendriteStraight => {
            let depth = depth.map_or(cfg.dendrite.straight_depth, |d| d as u32);
            let samples = samples.unwrap_or(cfg.dendrite.straight_samples);
            let d = straighten_dendrite(depth, samples)?;
            (
                d.cloud,
                json!({ "depth": depth, "samples_per_arc": samples }),
            )
        }
        Space::OmegaOmega => {
            let beta: CnfOrdinal = ordinal.unwrap_or("w^w").parse()?;
            let depth = depth.unwrap_or(cfg.scattered.embed_depth);
            let c = embed_in_unit_interval(&beta, depth)?;
            (c, json!({ "ordinal": beta, "depth": depth }))
        }
    };

    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
    let mut csv = Vec::new();
    cloud.write_csv(&mut csv)?;
    write_atomic(&out, &csv)?;
    let meta = BuildMeta {
        schema_version: claims::SCHEMA_VERSION,
        space: name,
        parameters,
        points: cloud.len(),
        resolution: cloud.resolution(),
    };
    write_atomic(
        &sibling(&out, "meta.json"),
        &serde_json::to_vec_pretty(&meta)?,
    )?;
    if let Some(sys) = system_file {
        write_atomic(
            &sibling(&out, "system.json"),
            &serde_json::to_vec_pretty(&sys)?,
        )?;
    }
    eprintln!("wrote {} points to {}", cloud.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(cfg: &RunConfig, suite: Suite) -> Result<ExitCode, UsageError> {
    let reports = run_suite(suite, cfg);
    let text = serde_json::to_string_pretty(&reports)? + "\n";
    match &cfg.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    let mut failed = 0;
    for r in &reports {
        let tag = match r.status {
            Status::Pass => "pass",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::EvidenceOnly => "evidence-only",
        };
        eprintln!("{tag:>13}  {}", r.claim_id);
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn render(
    cfg: &RunConfig,
    input: &Path,
    title: Option<String>,
    point_radius: f64,
) -> Result<ExitCode, UsageError> {
    let file =
        std::fs::File::open(input).map_err(|e| UsageError(format!("{}: {e}", input.display())))?;
    let rows = read_csv_rows(file).map_err(|e| UsageError(format!("{}: {e}", input.display())))?;
    let style = render::Style {
        point_radius,
        title,
    };
    let svg = render::render_svg(&rows, &style);
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| input.with_extension("svg"));
    write_atomic(&out, svg.as_bytes())?;
    eprintln!("wrote {}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn min_word_length(
    cfg: &RunConfig,
    system: &Path,
    cloud: &Path,
    threshold: f64,
    m_max: usize,
    resolution: Option<f64>,
) -> Result<ExitCode, UsageError> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(UsageError(format!(
            "threshold must be > 0, got {threshold}"
        )));
    }
    let text = std::fs::read_to_string(system)
        .map_err(|e| UsageError(format!("{}: {e}", system.display())))?;
    let file: SystemFile = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("{}: {e}", system.display())))?;
    let table = match &file.free_arc {
        Some(fa) => {
            table_with_free_arc(Arc::new(FreeArcSpace::new(&fa.description, fa.resolution)?))
        }
        None => standard_table(),
    };
    let sys = IfsSystem::from_document(file.system, &table)?;

    let resolution = match resolution {
        Some(r) => r,
        None => {
            let meta = std::fs::read_to_string(sibling(cloud, "meta.json")).map_err(|_| {
                UsageError(format!(
                    "no --resolution given and no metadata next to {}",
                    cloud.display()
                ))
            })?;
            serde_json::from_str::<BuildMeta>(&meta)?.resolution
        }
    };
    let f =
        std::fs::File::open(cloud).map_err(|e| UsageError(format!("{}: {e}", cloud.display())))?;
    let x = PointCloud::read_csv(f, resolution)
        .map_err(|e| UsageError(format!("{}: {e}", cloud.display())))?;

    let mut found = None;
    let mut trail = Vec::new();
    for m in 0..=m_max {
        let c = certify_composition_diameter(&sys, &x, m, threshold)?;
        trail.push(json!({ "word_length": m, "max_diameter": c.max_diameter, "argmax_word": c.argmax_word }));
        if c.passes() {
            found = Some(m);
            break;
        }
    }
    let result = json!({
        "threshold": threshold,
        "m_max": m_max,
        "diameter": diameter(&x),
        "word_length": found.map_or(json!("exceeded"), |m| json!(m)),
        "trail": trail,
    });
    let text = serde_json::to_string_pretty(&result)? + "\n";
    match &cfg.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn height_cmd(cfg: &RunConfig, ordinal: &str) -> Result<ExitCode, UsageError> {
    let beta: CnfOrdinal = ordinal.parse()?;
    let h = height(&beta);
    let result = json!({
        "ordinal": beta,
        "height": h,
        "limit_height": h.is_limit(),
        "classification": classify_topological_fractal(&beta),
    });
    let text = serde_json::to_string_pretty(&result)? + "\n";
    match &cfg.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
