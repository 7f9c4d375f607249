use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use bearingcap::quadrature::QuadratureSpec;
use bearingcap::Method;
use bearingcap_cli::config::{Config, Preset, SweepGrid, PRESET_6205_C3};
use bearingcap_cli::figures::{self, Figure};
use bearingcap_cli::report::{sweep_summary, sweep_table, write_artifacts, Artifact};
use bearingcap_cli::{run_sweep, with_jobs};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bearingcap", version, about = "Capacitance of ball/raceway contacts")]
struct Cli {
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Reference method for deviation columns (overrides the config)
    #[arg(long = "ref", global = true)]
    reference: Option<Method>,
    /// Worker threads (1 runs sequentially)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FigArgs {
    /// Geometry preset
    #[arg(long, default_value = PRESET_6205_C3)]
    geometry: String,
}

#[derive(Subcommand)]
enum Command {
    /// Gap x method sweep described by a TOML config
    Sweep { config: PathBuf },
    /// Cylinder-over-plane vs true circular pair, four section cases
    Fig7(FigArgs),
    /// Taylor vs exact gap height, effective and true geometry
    Fig8(FigArgs),
    /// Models A-D and FEM against the exact 2D solution, outer contact
    Fig10(FigArgs),
    /// Rim share of the 3D contact capacitance, both contacts
    Fig11(FigArgs),
    /// Effective-radius 3D model against ray tracing, both contacts
    Fig12(FigArgs),
    /// FEM refinement ladder with Richardson extrapolation
    FemConvergence {
        config: PathBuf,
        /// Also write the finest mesh at the first gap
        #[arg(long)]
        mesh_dump: bool,
    },
    /// Series/parallel network of all unloaded elements
    BearingTotal { config: PathBuf },
}

fn load(path: &Path) -> Result<Config> {
    Config::load(path).with_context(|| format!("loading {}", path.display()))
}

fn finish(out: &Path, fig: &Figure, extra: Vec<Artifact>) -> Result<()> {
    let mut artifacts = fig.artifacts()?;
    artifacts.extend(extra);
    for path in write_artifacts(out, &artifacts)? {
        eprintln!("wrote {}", path.display());
    }
    print!("{}", fig.summary);
    Ok(())
}

fn main() -> Result<()> {
    run(Cli::parse())
}

fn run(cli: Cli) -> Result<()> {
    let gaps = SweepGrid::default().gaps_um()?;
    let spec = QuadratureSpec::default();
    let jobs = cli.jobs;
    match cli.command {
        Command::Sweep { config } => {
            let cfg = load(&config)?;
            let report = with_jobs(jobs, |exec| run_sweep(&cfg, cli.reference, exec))??;
            let stem = config.file_stem().map_or("sweep".into(), |s| s.to_string_lossy().into_owned());
            let fig = Figure {
                name: stem.clone(),
                tables: vec![(stem.clone(), sweep_table(&report))],
                summary: sweep_summary(&report, &stem),
            };
            finish(&cli.out, &fig, vec![])?;
        }
        Command::Fig7(a) => finish(&cli.out, &figures::fig7(&Preset::lookup(&a.geometry)?, &gaps), vec![])?,
        Command::Fig8(a) => finish(&cli.out, &figures::fig8(&Preset::lookup(&a.geometry)?, &gaps, &spec), vec![])?,
        Command::Fig10(a) => {
            let (fig, _) = with_jobs(jobs, |exec| figures::fig10(&a.geometry, &gaps, cli.reference, exec))??;
            finish(&cli.out, &fig, vec![])?;
        }
        Command::Fig11(a) => {
            let preset = Preset::lookup(&a.geometry)?;
            let fig = with_jobs(jobs, |exec| figures::fig11(&preset, &gaps, &spec, exec))?;
            finish(&cli.out, &fig, vec![])?;
        }
        Command::Fig12(a) => {
            let preset = Preset::lookup(&a.geometry)?;
            let fig = with_jobs(jobs, |exec| figures::fig12(&preset, &gaps, &spec, exec))?;
            finish(&cli.out, &fig, vec![])?;
        }
        Command::FemConvergence { config, mesh_dump } => {
            let cfg = load(&config)?;
            let fig = with_jobs(jobs, |exec| figures::fem_convergence(&cfg, exec))??;
            let extra = if mesh_dump {
                vec![Artifact { file_name: "mesh.txt".into(), contents: figures::mesh_dump(&cfg)? }]
            } else {
                vec![]
            };
            finish(&cli.out, &fig, extra)?;
        }
        Command::BearingTotal { config } => {
            let cfg = load(&config)?;
            let (fig, _) = with_jobs(jobs, |exec| figures::bearing_total(&cfg, exec))??;
            finish(&cli.out, &fig, vec![])?;
        }
    }
    Ok(())
}
