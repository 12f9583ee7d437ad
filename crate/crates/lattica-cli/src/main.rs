//! Command-line front end: build rule matrices, analyze dynamics, and run
//! simulations.
//!
//! Exit codes: 0 success, 1 I/O or internal error, 2 validation failure,
//! 3 builder mismatch under `matrix --check`, 4 irreversible rule under
//! `run --backward`.

mod job;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lattica::dynamics::{
    fixed_points, goe_census, is_nilpotent, reversibility, step_backward,
};
use lattica::grid::Configuration;
use lattica::rulematrix::{build_from_resolver, build_closed_form};
use lattica::stepper::step;

use job::{Failure, Job};
use output::{write_atomic, write_pgm};

#[derive(Parser)]
#[command(
    name = "lattica",
    version,
    about = "Exact 2D linear cellular automata over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the rule matrix and export it as dense CSV plus a JSON header
    Matrix(MatrixArgs),
    /// Analyze reversibility, nilpotency, fixed points and orphan counts
    Analyze(AnalyzeArgs),
    /// Simulate forward (or backward) and write one frame file per step
    Run(RunArgs),
}

/// Flags shared by every command; unset values fall back to the config
/// file, then to the built-in defaults (p=3, 4x4 lattice, all-ones
/// weights, spec `phi`).
#[derive(Args)]
struct CommonArgs {
    /// Prime modulus of the cell-state field
    #[arg(long)]
    p: Option<u64>,
    /// Lattice row count (minimum 3)
    #[arg(long)]
    m: Option<usize>,
    /// Lattice column count (minimum 3)
    #[arg(long)]
    n: Option<usize>,
    /// The eight rule weights a,b,c,d,e,f,g,h, comma separated
    #[arg(long, value_delimiter = ',')]
    coeffs: Option<Vec<u64>>,
    /// Boundary spec: nb, pb, ab, rb, phi, psi, tau, sigma, lambda, xi,
    /// phi90, phi180, phi270, or custom:<top>,<bottom>,<left>,<right>
    /// with side letters n/p/a/r
    #[arg(long)]
    spec: Option<String>,
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output path prefix (writes <out>.csv and <out>.json)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cross-validate the closed-form builder against the resolver builder
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Report file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of steps to simulate
    #[arg(long)]
    steps: Option<usize>,
    /// Initial configuration file in the grid text format; when omitted a
    /// seeded random configuration is used
    #[arg(long)]
    init: Option<PathBuf>,
    /// Step backwards through the inverse rule matrix (requires a
    /// reversible rule)
    #[arg(long)]
    backward: bool,
    /// Also write binary PGM images next to the text frames
    #[arg(long)]
    pgm: bool,
    /// Seed for the random initial configuration
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for frame files
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Matrix(args) => cmd_matrix(args),
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Run(args) => cmd_run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn cmd_matrix(args: MatrixArgs) -> Result<(), Failure> {
    let job = Job::resolve(&args.common, None, None, args.out.as_deref())?;
    let resolver_matrix = build_from_resolver(&job.boundary, job.dims, &job.coeffs);
    if args.check {
        let Some(name) = job.boundary.name().filter(|n| n.has_closed_form()) else {
            return Err(Failure::Usage(format!(
                "--check needs one of the nine mixed/rotated specs; `{}` has no closed-form builder",
                job.spec_label
            )));
        };
        let closed = build_closed_form(name, job.dims, &job.coeffs)
            .expect("closed form exists for this spec");
        let size = job.dims.cell_count();
        let mut mismatches = Vec::new();
        for i in 0..size {
            for j in 0..size {
                let (a, b) = (closed.dense().get(i, j), resolver_matrix.dense().get(i, j));
                if a != b {
                    mismatches.push(format!(
                        "row {} col {}: closed-form {} vs resolver {}",
                        i + 1,
                        j + 1,
                        a,
                        b
                    ));
                }
            }
        }
        if !mismatches.is_empty() {
            return Err(Failure::Mismatch(format!(
                "{} cell(s) disagree:\n{}",
                mismatches.len(),
                mismatches.join("\n")
            )));
        }
        println!(
            "check ok: closed-form and resolver builders agree on all {size}x{size} entries"
        );
    }
    match &job.out {
        Some(prefix) => {
            let csv_path = prefix.with_extension("csv");
            let json_path = prefix.with_extension("json");
            write_atomic(&csv_path, resolver_matrix.to_csv().as_bytes())
                .map_err(|e| Failure::Io(e.to_string()))?;
            write_atomic(&json_path, job.matrix_header().as_bytes())
                .map_err(|e| Failure::Io(e.to_string()))?;
            println!("wrote {} and {}", csv_path.display(), json_path.display());
        }
        None if !args.check => print!("{}", resolver_matrix.to_csv()),
        None => {}
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let job = Job::resolve(&args.common, None, None, args.out.as_deref())?;
    let t = build_from_resolver(&job.boundary, job.dims, &job.coeffs);
    let rev = reversibility(&t);
    let nil = is_nilpotent(&t);
    let fps = fixed_points(&t);
    let census = goe_census(&t);
    // stable key order
    let report = format!(
        "{{\"rank\":{},\"full_rank\":{},\"method\":\"{}\",\"nilpotent\":{},\"fixed_point_dimension\":{},\"goe_count\":\"{}\"}}",
        rev.rank,
        rev.full_rank,
        rev.method.as_str(),
        nil.nilpotent,
        fps.dimension,
        census.goe_count
    );
    match &job.out {
        Some(path) => {
            write_atomic(path, format!("{report}\n").as_bytes())
                .map_err(|e| Failure::Io(e.to_string()))?;
            println!("wrote {}", path.display());
        }
        None => println!("{report}"),
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let job = Job::resolve(&args.common, args.steps, args.seed, args.out.as_deref())?;
    let initial = match &args.init {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Failure::Usage(format!("cannot read {}: {e}", path.display()))
            })?;
            let conf = Configuration::parse_text(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            if conf.spec() != job.field || conf.dims() != job.dims {
                return Err(Failure::Usage(format!(
                    "initial configuration is {} {}x{}, job wants {} {}x{}",
                    conf.spec().modulus(),
                    conf.dims().rows(),
                    conf.dims().cols(),
                    job.field.modulus(),
                    job.dims.rows(),
                    job.dims.cols()
                )));
            }
            conf
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
            let mut conf = Configuration::zero(job.field, job.dims);
            for i in 0..job.dims.rows() {
                for j in 0..job.dims.cols() {
                    conf.set(i, j, rng.gen_range(0..job.field.modulus()));
                }
            }
            conf
        }
    };
    let backward_report = if args.backward {
        let t = build_from_resolver(&job.boundary, job.dims, &job.coeffs);
        let rev = reversibility(&t);
        if !rev.inverse_available() {
            return Err(Failure::Irreversible(format!(
                "rule is not reversible (rank {} of {})",
                rev.rank,
                job.dims.cell_count()
            )));
        }
        Some(rev)
    } else {
        None
    };
    let out_dir = job
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("frames"));
    std::fs::create_dir_all(&out_dir).map_err(|e| Failure::Io(e.to_string()))?;
    let mut state = initial;
    for s in 0..=job.steps {
        if s > 0 {
            state = match &backward_report {
                Some(rev) => step_backward(&state, rev).expect("reversibility checked above"),
                None => step(&state, &job.coeffs, &job.boundary)
                    .expect("field match validated at resolve time"),
            };
        }
        let base = out_dir.join(format!("frame_{s:04}"));
        write_atomic(&base.with_extension("txt"), state.to_text().as_bytes())
            .map_err(|e| Failure::Io(e.to_string()))?;
        if args.pgm {
            write_pgm(&base.with_extension("pgm"), &state)
                .map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    println!(
        "wrote {} frame(s) to {}",
        job.steps + 1,
        out_dir.display()
    );
    Ok(())
}
