//! `chipfp` - chiplet partitioning, floorplanning, traffic simulation,
//! and the end-to-end two-stage flow.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 optimization
//! failure. All randomness derives from `--seed`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use chipfp_core::error::Error;
use chipfp_core::floorplan::{
    objective_perf, objective_primary, solve_perf, solve_primary, two_stage_flow, RelativeOrder,
    SolverConfig, WarmStart,
};
use chipfp_core::model::{validate, FloorplanInstance, SolveReport};
use chipfp_core::partition::{area_bounds, par_chiplet, merge_pools, realize_dimensions, PartitionConfig};
use chipfp_core::render::solution_svg;
use chipfp_core::report::ReportDocument;
use chipfp_core::schema::{
    self, to_json_pretty, FrequencyDocument, PoolDocument, SolutionDocument,
};
use chipfp_core::traffic::simulate;

#[derive(Parser)]
#[command(name = "chipfp", about = "Chiplet floorplanning toolkit for 2.5D interposer packages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    Primary,
    Perf,
}

#[derive(Subcommand)]
enum Command {
    /// Partition SoC hierarchy trees into a chiplet pool with realized
    /// dimensions.
    Partition {
        /// Hierarchy tree documents; identical (name, area) entries from
        /// later trees are deduplicated.
        #[arg(required = true)]
        trees: Vec<PathBuf>,
        /// Relaxation ratio of the SoC area (>= 1).
        #[arg(long, default_value_t = 1.1)]
        rr: f64,
        /// Typical minimal chiplet count.
        #[arg(long, default_value_t = 4)]
        c_min: usize,
        /// Typical maximal chiplet count.
        #[arg(long, default_value_t = 12)]
        c_max: usize,
        /// Lower bound of the width/height ratio draw.
        #[arg(long, default_value_t = 0.5)]
        aspect_min: f64,
        /// Upper bound of the width/height ratio draw.
        #[arg(long, default_value_t = 2.0)]
        aspect_max: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output pool document.
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the floorplan for an instance document.
    Floorplan {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Stage::Primary)]
        stage: Stage,
        /// Frequency matrix document (required for --stage perf).
        #[arg(long)]
        freq: Option<PathBuf>,
        /// Warm-start solution document (required for --stage perf).
        #[arg(long)]
        warm: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Solver configuration overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output solution document.
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG rendering.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a workload against a solved placement and write the frequency
    /// matrix.
    Simulate {
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        workload: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output frequency document.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the cost model for a solved placement.
    Cost {
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        /// Optional JSON output; the table always prints to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution against every constraint family.
    Validate {
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Render a solution document to SVG.
    Render {
        solution: PathBuf,
        /// Frequency matrix for the traffic overlay.
        #[arg(long)]
        freq: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// End-to-end run: primary floorplan, traffic simulation, and the
    /// performance-aware refinement, with reports and renderings.
    Flow {
        instance: PathBuf,
        #[arg(long)]
        workload: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Solver configuration overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .downcast_ref::<Error>()
                .map_or(2, |e| match e {
                    Error::NoFeasibleSolution { best } => {
                        eprintln!("best infeasible candidate had {} violations:", best.violations.len());
                        for v in &best.violations {
                            eprintln!("  {v:?}");
                        }
                        3
                    }
                    _ => 2,
                });
            ExitCode::from(code)
        }
    }
}

fn load_config(path: Option<&Path>, seed: u64) -> anyhow::Result<SolverConfig> {
    match path {
        Some(p) => Ok(schema::load_solver_config(p, seed)?),
        None => Ok(SolverConfig { seed, ..Default::default() }),
    }
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn write_solution(
    instance: &FloorplanInstance,
    report: &SolveReport,
    out: &Path,
    svg: Option<&Path>,
    freq: Option<&chipfp_core::traffic::FrequencyMatrix>,
) -> anyhow::Result<()> {
    let doc = SolutionDocument::from_report(instance, report);
    write_text(out, &to_json_pretty(&doc)?)?;
    if let Some(svg_path) = svg {
        write_text(svg_path, &solution_svg(&doc, freq)?)?;
    }
    Ok(())
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Partition { trees, rr, c_min, c_max, aspect_min, aspect_max, seed, out } => {
            let cfg = PartitionConfig { rr, c_min, c_max };
            let mut pool = Vec::new();
            for path in &trees {
                let tree = schema::load_tree(path)?;
                let (a_min, a_max) = area_bounds(tree.leaf_area(), &cfg)?;
                let entries = par_chiplet(&tree, a_min, a_max)?;
                eprintln!(
                    "{}: soc area {:.0} um^2, range [{a_min:.0}, {a_max:.0}], {} chiplets",
                    path.display(),
                    tree.leaf_area(),
                    entries.len()
                );
                merge_pools(&mut pool, entries);
            }
            let chiplets = realize_dimensions(&pool, (aspect_min, aspect_max), seed)?;
            let doc = PoolDocument::new(&pool, &chiplets);
            write_text(&out, &to_json_pretty(&doc)?)?;
            println!("pool: {} chiplets -> {}", pool.len(), out.display());
            Ok(())
        }

        Command::Floorplan { instance, stage, freq, warm, seed, config, out, svg } => {
            let inst = schema::load_instance(&instance)?;
            let cfg = load_config(config.as_deref(), seed)?;
            match stage {
                Stage::Primary => {
                    let report = solve_primary(&inst, &cfg)?;
                    eprintln!(
                        "primary objective {:.3} after {} iterations ({:.2}s)",
                        report.objective_breakdown.total, report.iterations, report.wall_time
                    );
                    write_solution(&inst, &report, &out, svg.as_deref(), None)?;
                    Ok(())
                }
                Stage::Perf => {
                    let freq_path = freq
                        .ok_or_else(|| anyhow::anyhow!("--stage perf requires --freq"))?;
                    let warm_path = warm
                        .ok_or_else(|| anyhow::anyhow!("--stage perf requires --warm"))?;
                    let f = schema::load_frequency(&freq_path)?;
                    let warm_doc = schema::load_solution(&warm_path)?;
                    let placement = warm_doc.placement_for(&inst)?;
                    let order = RelativeOrder::from_placement(&inst.chiplets, &placement)?;
                    let report = solve_perf(&inst, &f, &WarmStart { placement, order }, &cfg)?;
                    eprintln!(
                        "perf objective {:.3} after {} iterations ({:.2}s)",
                        report.objective_breakdown.total, report.iterations, report.wall_time
                    );
                    write_solution(&inst, &report, &out, svg.as_deref(), Some(&f))?;
                    Ok(())
                }
            }
        }

        Command::Simulate { instance, solution, workload, seed, out } => {
            let inst = schema::load_instance(&instance)?;
            let placement = schema::load_solution(&solution)?.placement_for(&inst)?;
            let wl = schema::load_workload(&workload, seed)?;
            let (freq, cycles) = simulate(
                &inst.chiplets,
                &placement,
                &inst.nets,
                &wl,
                &inst.latency_table,
                inst.base_cycles,
            )?;
            write_text(&out, &to_json_pretty(&FrequencyDocument::from_matrix(&freq))?)?;
            println!("model cycles: {cycles}");
            Ok(())
        }

        Command::Cost { instance, solution, out } => {
            let inst = schema::load_instance(&instance)?;
            let placement = schema::load_solution(&solution)?.placement_for(&inst)?;
            let pa = chipfp_core::model::package_area(&inst.chiplets, &placement)?;
            let total = chipfp_core::costrel::cost_2_5d(&inst.chiplets, &placement, &inst.costs)?;
            println!("{:<12} {:>14} {:>10} {:>12}", "chiplet", "area (um^2)", "yield", "chip cost");
            let mut rows = Vec::new();
            for c in &inst.chiplets {
                let s = c.area() / chipfp_core::costrel::UM2_PER_CM2;
                let y = chipfp_core::costrel::die_yield(s, &inst.costs)?;
                let chip_cost =
                    chipfp_core::costrel::cost_per_yielded_area(s, &inst.costs, chipfp_core::costrel::CostMode::Exact)? * s;
                println!("{:<12} {:>14.0} {:>10.6} {:>12.6}", c.name, c.area(), y, chip_cost);
                rows.push(serde_json::json!({
                    "name": c.name,
                    "area_um2": c.area(),
                    "die_yield": y,
                    "chip_cost": chip_cost,
                }));
            }
            println!("package area: {pa:.0} um^2");
            println!("cost_2_5d: {total:.6}");
            if let Some(path) = out {
                let doc = serde_json::json!({
                    "version": 1,
                    "chiplets": rows,
                    "package_area_um2": pa,
                    "cost_2_5d": total,
                });
                write_text(&path, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            }
            Ok(())
        }

        Command::Validate { instance, solution } => {
            let inst = schema::load_instance(&instance)?;
            let placement = schema::load_solution(&solution)?.placement_for(&inst)?;
            let violations = validate(&inst, &placement)?;
            if violations.is_empty() {
                println!("feasible: no violations");
                Ok(())
            } else {
                for v in &violations {
                    println!("{v:?}");
                }
                Err(Error::InvalidInstance(format!("{} violations", violations.len())).into())
            }
        }

        Command::Render { solution, freq, out } => {
            let doc = schema::load_solution(&solution)?;
            let f = freq.as_deref().map(schema::load_frequency).transpose()?;
            write_text(&out, &solution_svg(&doc, f.as_ref())?)?;
            Ok(())
        }

        Command::Flow { instance, workload, seed, config, out_dir } => {
            let inst = schema::load_instance(&instance)?;
            let wl = schema::load_workload(&workload, seed)?;
            let cfg = load_config(config.as_deref(), seed)?;
            let (primary, perf, freq) = two_stage_flow(&inst, &wl, &cfg)?;

            std::fs::create_dir_all(&out_dir)?;
            write_solution(&inst, &primary, &out_dir.join("primary_solution.json"),
                Some(&out_dir.join("primary.svg")), Some(&freq))?;
            write_solution(&inst, &perf, &out_dir.join("perf_solution.json"),
                Some(&out_dir.join("perf.svg")), Some(&freq))?;
            write_text(
                &out_dir.join("frequency.json"),
                &to_json_pretty(&FrequencyDocument::from_matrix(&freq))?,
            )?;
            let report = ReportDocument::build(&inst, &primary, &perf, &freq, &wl, seed)?;
            write_text(&out_dir.join("report.json"), &to_json_pretty(&report)?)?;
            write_text(&out_dir.join("report.txt"), &report.text_table())?;

            // Stage-two retention under the shared matrix, for the log.
            let (eq18_primary, _) = objective_perf(&inst, &primary.placement, &freq)?;
            let (eq17_primary, _) = objective_primary(&inst, &primary.placement)?;
            eprintln!(
                "primary: objective {eq17_primary:.3}, perf-objective {eq18_primary:.3} ({:.2}s)",
                primary.wall_time
            );
            eprintln!(
                "perf:    objective {:.3} ({:.2}s)",
                perf.objective_breakdown.total, perf.wall_time
            );
            print!("{}", report.text_table());
            Ok(())
        }
    }
}
