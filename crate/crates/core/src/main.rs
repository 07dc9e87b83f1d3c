use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bandfrob::format::{self, parse_element, parse_field_header};
use bandfrob::frobenius::{run_grid, GridConfig};
use bandfrob::{
    birkhoff_split, decompose, is_isomorphic, iterate_pullback, make_band_triple, BandData, CycleGeometry, Error, Field,
};

#[derive(Parser)]
#[command(name = "bandfrob", version, about = "Band bundles on cycles of projective lines and their Frobenius pullbacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the canonical triple of a band.
    Band(BandArgs),
    /// Frobenius pullback of a triple file, iterated `e` times.
    Pull {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose a triple file into bands.
    Decompose {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Test two triple files for isomorphism.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the pullback of every band in a grid.
    Verify(VerifyArgs),
    /// Splitting type of a Laurent matrix file.
    Split { input: PathBuf },
}

#[derive(Args)]
struct BandArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Field modulus, e.g. "[1,0,1]"; defaults to the standard choice.
    #[arg(long = "mod")]
    modulus: Option<String>,
    /// Number of components of the cycle.
    #[arg(long = "cycle", default_value_t = 1)]
    components: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    d: Vec<i64>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value = "[1]")]
    lambda: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 5])]
    p_list: Vec<u64>,
    #[arg(long, default_value_t = 4)]
    k_max: usize,
    #[arg(long, default_value_t = 4)]
    l_max: usize,
    #[arg(long, default_value_t = 3)]
    m_max: usize,
    #[arg(long, default_value_t = 3)]
    deg_bound: i64,
    /// Sampled values of lambda per field.
    #[arg(long, default_value_t = 5)]
    lambdas: usize,
    #[arg(long = "cycle", default_value_t = 1)]
    components: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// Perturb one pullback, chosen from this seed (harness self-test).
    #[arg(long, hide = true)]
    inject_fault: Option<u64>,
    /// Append the time per instance to each report line.
    #[arg(long)]
    timing: bool,
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn band(args: &BandArgs) -> Result<(), Error> {
    let header = match &args.modulus {
        Some(m) => format!("p={} k={} mod={m}", args.p, args.k),
        None => format!("p={} k={}", args.p, args.k),
    };
    let field = parse_field_header(&header)?;
    let geometry = CycleGeometry::new(args.components)?;
    let lambda = parse_element(&field, &args.lambda)?;
    let t = make_band_triple(geometry, &field, &BandData::new(args.d.clone(), args.m, lambda))?;
    write_output(&args.output, &format::write_triple(&t))
}

fn verify(args: &VerifyArgs) -> Result<bool, Error> {
    let cfg = GridConfig {
        p_list: args.p_list.clone(),
        k_max: args.k_max,
        l_max: args.l_max,
        m_max: args.m_max,
        deg_bound: args.deg_bound,
        lambdas: args.lambdas,
        components: args.components,
        seed: args.seed,
    };
    for &p in &cfg.p_list {
        Field::prime(p)?;
    }
    let jobs = args.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut failures = 0usize;
    let reports = run_grid(&cfg, jobs, args.inject_fault, |r| {
        if !r.verdict() {
            failures += 1;
        }
        let _ = writeln!(out, "{}", r.line(args.timing));
    })?;
    eprintln!("{} instances, {} failed", reports.len(), failures);
    Ok(failures == 0)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Band(args) => band(&args)?,
        Command::Pull { input, e, output } => {
            let t = format::parse_triple(&read_input(&input)?)?;
            write_output(&output, &format::write_triple(&iterate_pullback(&t, e)))?;
        }
        Command::Decompose { input, seed } => {
            let t = format::parse_triple(&read_input(&input)?)?;
            print!("{}", format::write_decomposition(&decompose(&t, seed)?));
        }
        Command::Iso { first, second, seed } => {
            let a = format::parse_triple(&read_input(&first)?)?;
            let b = format::parse_triple(&read_input(&second)?)?;
            println!("{}", if is_isomorphic(&a, &b, seed)? { "isomorphic" } else { "not isomorphic" });
        }
        Command::Verify(args) => {
            if !verify(&args)? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Split { input } => {
            let (f, m) = format::parse_laurent_matrix(&read_input(&input)?)?;
            println!("{}", birkhoff_split(&m, &f)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
