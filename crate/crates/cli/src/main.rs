use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use entcert_core::claims::{self, Config, Format};
use entcert_core::measures::cut_entropy;
use entcert_core::tensor::PPT_TOL;
use entcert_core::{Cut, Error, StateKind};

#[derive(Parser)]
#[command(name = "entcert", version, about = "Reproduce and check entanglement-measure claims")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the claims registry and report pass/fail per claim.
    Claims {
        /// Comma-separated claim ids (default: all).
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
        /// Emit JSON instead of a text table.
        #[arg(long)]
        json: bool,
        /// Equality tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, env = "ENTCERT_SEED", default_value_t = 0)]
        seed: u64,
        /// Directory for cached twirl results.
        #[arg(long, env = "ENTCERT_CACHE")]
        cache_dir: Option<PathBuf>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe a named state.
    State {
        /// ghz, w, epr-ab, epr-ac, epr-bc, antisym, m-product, dicke-0..3
        kind: String,
        /// Print dims, cut entropies and PPT status per cut.
        #[arg(long)]
        info: bool,
    },
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::Usage(_) | Error::UnknownClaim { .. })
}

fn state_info(kind: StateKind, info: bool) -> entcert_core::Result<()> {
    let psi = kind.vector()?;
    println!("state {kind}");
    println!("dims {:?}", psi.dims());
    if !info {
        for (i, a) in psi.amplitudes().iter().enumerate() {
            if a.norm() > 1e-15 {
                println!("  [{i}] {:+.10} {:+.10}i", a.re, a.im);
            }
        }
        return Ok(());
    }
    let rho = psi.density();
    println!("{:<8} {:>14} {:>16} {:>5}", "cut", "entropy", "min PT eig", "PPT");
    for cut in Cut::all(psi.parties()) {
        let s = cut_entropy(&psi, &cut)?;
        let min = rho.min_pt_eigenvalue(&cut)?;
        let ppt = if min >= -PPT_TOL { "yes" } else { "no" };
        println!("{:<8} {s:>14.10} {min:>16.10} {ppt:>5}", cut.to_string());
    }
    Ok(())
}

fn run(cli: Cli) -> entcert_core::Result<bool> {
    match cli.command {
        Command::Claims {
            claims: selection,
            json,
            tol,
            seed,
            cache_dir,
            out,
        } => {
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(Error::Usage(format!("--tol must be finite and ≥ 0, got {tol}")));
            }
            let cfg = Config {
                tol,
                seed,
                cache_dir,
                ..Config::default()
            };
            let records = claims::run_claims(&selection, &cfg)?;
            let format = if json { Format::Json } else { Format::Text };
            claims::emit_report(&records, format, out.as_deref())
        }
        Command::State { kind, info } => {
            state_info(kind.parse()?, info)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("entcert: {e}");
            ExitCode::from(if usage_error(&e) { 2 } else { 1 })
        }
    }
}
