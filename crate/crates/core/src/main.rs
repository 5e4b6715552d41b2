use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ceig::harness::{self, ExperimentConfig, Perturbation};
use ceig::{bounds, spectral, Error, Shift, SolverConfig};

#[derive(Parser)]
#[command(name = "ceig", version, about = "Largest C-eigenvalue of piezoelectric-type tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Largest C-eigenpair of a tensor file.
    Compute {
        tensor: PathBuf,
        /// Seed for the solver's random start vectors.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// The three perturbation intervals for A + E.
    Bounds {
        a: PathBuf,
        e: PathBuf,
        /// Seed for the solver's random start vectors.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Seeded perturbation experiment over a directory of `*.tensor` files.
    Experiment {
        #[arg(long)]
        materials: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,1e-1,1e-2,1e-3,1e-4,1e-5")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Seed for the perturbation draws.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        md: Option<PathBuf>,
        /// Draw entries from [-eps, eps) instead of [0, eps).
        #[arg(long)]
        signed: bool,
        /// Rescale one perturbation direction across all eps values.
        #[arg(long)]
        shared_direction: bool,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Seed for the solver's random start vectors.
        #[arg(long, default_value_t = 0)]
        solver_seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Brute-force sphere-grid values (n = 3 only).
    Oracle {
        tensor: PathBuf,
        #[arg(long, default_value_t = 800)]
        resolution: usize,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 50)]
    starts: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Use the fixed global shift instead of the adaptive one.
    #[arg(long)]
    static_shift: bool,
}

impl SolverArgs {
    fn config(&self, seed: u64) -> SolverConfig {
        SolverConfig {
            starts: self.starts,
            tol: self.tol,
            max_iters: self.max_iters,
            seed,
            shift: if self.static_shift {
                Shift::Static
            } else {
                Shift::Adaptive
            },
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err.root() {
        Error::NoConvergence { .. } => 3,
        Error::PropertyViolation { .. } => 4,
        _ => 2,
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", parts.join(", "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> ceig::Result<()> {
    match cli.command {
        Command::Compute {
            tensor,
            seed,
            solver,
        } => {
            let m = harness::load_material(&tensor)?;
            let pair = spectral::c_max_via_lift(&m.tensor, &solver.config(seed))?;
            let (r1, r2) = pair.residuals(&m.tensor)?;
            println!("material: {}", m.name);
            println!("lambda: {:.12}", pair.lambda);
            println!("x: {}", fmt_vec(&pair.x));
            println!("y: {}", fmt_vec(&pair.y));
            println!("residual_ayy: {r1:e}");
            println!("residual_xay: {r2:e}");
        }
        Command::Bounds { a, e, seed, solver } => {
            let a = harness::load_material(&a)?;
            let e = harness::load_material(&e)?;
            let r = bounds::full_report(&a.tensor, &e.tensor, &solver.config(seed))?;
            println!("lambda_a: {:.12}", r.lambda_a);
            println!("lambda_e: {:.12}", r.lambda_e);
            println!("norm_e2: {:.12}", r.norm_e2);
            println!("zmin_diff: {:.12e}", r.zmin_diff);
            println!("zmax_diff: {:.12e}", r.zmax_diff);
            for (label, iv) in [
                ("additive", r.interval_21),
                ("spectral", r.interval_24),
                ("quadratic", r.interval_25),
            ] {
                println!("{label}: [{:.12}, {:.12}]", iv.lo, iv.hi);
            }
            println!("nested: {}", bounds::check_nesting(&r));
        }
        Command::Experiment {
            materials,
            eps,
            trials,
            seed,
            csv,
            md,
            signed,
            shared_direction,
            workers,
            solver_seed,
            solver,
        } => {
            let records = harness::load_material_dir(&materials)?;
            if records.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "no *.tensor files in {}",
                    materials.display()
                )));
            }
            let cfg = ExperimentConfig {
                epsilons: eps,
                trials,
                seed,
                solver: solver.config(solver_seed),
                perturbation: if signed {
                    Perturbation::Signed
                } else {
                    Perturbation::Nonnegative
                },
                shared_direction,
                workers,
            };
            let rows = harness::run_experiment(&records, &cfg)?;
            write_file(&csv, |w| harness::emit_csv(&rows, w))?;
            if let Some(md) = md {
                write_file(&md, |w| harness::emit_markdown(&rows, w))?;
            }
            eprintln!("{} rows written to {}", rows.len(), csv.display());
        }
        Command::Oracle { tensor, resolution } => {
            let m = harness::load_material(&tensor)?;
            let (zmin, zmax) = spectral::grid_oracle_z(&m.tensor.lift(), resolution)?;
            let c = spectral::grid_oracle_c(&m.tensor, resolution)?;
            println!("resolution: {resolution}");
            println!("lift_zmin: {zmin:.12}");
            println!("lift_zmax: {zmax:.12}");
            println!("c_max: {c:.12}");
        }
    }
    Ok(())
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> ceig::Result<()>,
) -> ceig::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}
