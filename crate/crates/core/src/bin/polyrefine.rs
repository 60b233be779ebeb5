//! Command-line front end: refine, adapt, quality, render, grid.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use polyrefine::adapt::{adaptive_loop, peak, AdaptiveParams, MarkParams};
use polyrefine::io::{load_field, load_mesh, load_mesh_unvalidated, render_svg, save_field, save_mesh};
use polyrefine::mesh::{check_conformity, mesh_statistics, validate_mesh, Mesh};
use polyrefine::refine;

#[derive(Parser)]
#[command(name = "polyrefine", version, about = "Local refinement and adaptive VEM on polygonal meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refine marked elements, once or over several steps.
    Refine {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated element indices for a single step.
        #[arg(long, value_delimiter = ',', conflicts_with = "marks_file")]
        marked: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// One line of comma-separated indices per step, against that step's mesh.
        #[arg(long)]
        marks_file: Option<PathBuf>,
    },
    /// Run the adaptive loop on the peaked model problem.
    Adapt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.4)]
        theta: f64,
        /// Number of meshes solved (the last one is not refined).
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Stop once a mesh has at least this many nodes.
        #[arg(long)]
        dof_cap: Option<usize>,
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Print the validation report and mesh statistics.
    Quality {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Draw a mesh as SVG, optionally shaded by a vertex field.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Write a uniform nx x ny grid of the unit square.
    Grid {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_marks(line: &str) -> Result<Vec<usize>> {
    line.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().with_context(|| format!("bad element index {s:?}")))
        .collect()
}

fn cmd_refine(input: &Path, marked: Vec<usize>, out: &Path, steps: usize, marks_file: Option<&Path>) -> Result<()> {
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    let per_step: Vec<Vec<usize>> = match marks_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
            let lines: Vec<&str> = text.lines().collect();
            if lines.len() < steps {
                bail!("{} has {} lines but --steps is {steps}", path.display(), lines.len());
            }
            lines[..steps].iter().map(|l| parse_marks(l)).collect::<Result<_>>()?
        }
        None if steps > 1 => bail!("--steps > 1 needs --marks-file (indices change after each refinement)"),
        None => vec![marked],
    };
    let mut mesh = load_mesh(input)?;
    for (k, marks) in per_step.iter().enumerate() {
        mesh = refine(&mesh, marks).with_context(|| format!("step {}", k + 1))?;
    }
    save_mesh(&mesh, out)?;
    Ok(())
}

fn step_path(prefix: &Path, step: usize, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(format!("_step{step:03}.{ext}"));
    PathBuf::from(s)
}

fn cmd_adapt(input: &Path, theta: f64, steps: usize, dof_cap: Option<usize>, prefix: &Path) -> Result<()> {
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    let mesh = load_mesh(input)?;
    let params =
        AdaptiveParams { mark: MarkParams::new(theta)?, max_steps: steps - 1, dof_cap, ..AdaptiveParams::default() };
    let history = adaptive_loop(&mesh, peak::source, |_| 0.0, params)?;
    let mut csv = String::from("step,N,NT,total_eta,marked_count\n");
    for s in &history {
        let r = &s.record;
        writeln!(csv, "{},{},{},{:e},{}", r.step, r.num_nodes, r.num_elements, r.total_eta, r.marked_count).unwrap();
        save_mesh(&s.mesh, step_path(prefix, r.step, "mesh.json"))?;
        save_field(&s.solution, step_path(prefix, r.step, "field.json"))?;
        render_svg(&s.mesh, Some(&s.solution), step_path(prefix, r.step, "svg"))?;
    }
    let mut csv_path = prefix.as_os_str().to_owned();
    csv_path.push(".csv");
    std::fs::write(&csv_path, csv).with_context(|| format!("{}", Path::new(&csv_path).display()))?;
    Ok(())
}

/// Returns whether the mesh is free of violations.
fn cmd_quality(input: &Path) -> Result<bool> {
    let mesh = load_mesh_unvalidated(input)?;
    println!("nodes {}", mesh.num_nodes());
    println!("elements {}", mesh.num_elements());
    let report = validate_mesh(&mesh);
    for v in &report.violations {
        println!("{v}");
    }
    let conformity = if report.is_empty() { check_conformity(&mesh) } else { Vec::new() };
    for v in &conformity {
        println!("{v}");
    }
    println!("{} violations", report.len() + conformity.len());
    if report.is_empty() {
        let s = mesh_statistics(&mesh);
        println!("min edge/diameter {:.6}", s.min_edge_ratio);
        println!("max edge/diameter {:.6}", s.max_edge_ratio);
        println!("hanging nodes {}", s.hanging_nodes);
        println!("elements with hanging nodes {}", s.elements_with_hanging);
        println!("max hanging nodes per element {}", s.max_hanging_per_element);
    }
    Ok(report.is_empty() && conformity.is_empty())
}

fn cmd_render(input: &Path, out: &Path, field: Option<&Path>) -> Result<()> {
    let mesh = load_mesh(input)?;
    let values = field.map(load_field).transpose()?;
    render_svg(&mesh, values.as_deref(), out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Refine { input, marked, out, steps, marks_file } => {
            cmd_refine(&input, marked, &out, steps, marks_file.as_deref())?
        }
        Command::Adapt { input, theta, steps, dof_cap, out_prefix } => {
            cmd_adapt(&input, theta, steps, dof_cap, &out_prefix)?
        }
        Command::Quality { input } => return cmd_quality(&input),
        Command::Render { input, out, field } => cmd_render(&input, &out, field.as_deref())?,
        Command::Grid { nx, ny, out } => {
            if nx == 0 || ny == 0 {
                bail!("--nx and --ny must be positive");
            }
            save_mesh(&Mesh::unit_square_grid(nx, ny), out)?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
