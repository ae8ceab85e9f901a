use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qlc_core::curves::CountOptions;
use qlc_core::dirichlet::FieldSpec;
use qlc_core::report::SuiteReport;
use qlc_core::suite::{default_covers, run_curves, run_dirichlet, run_dirichlet_field, run_ffqlc, CoverSpec};

#[derive(Parser)]
#[command(name = "qlc", about = "Exact checks of Quillen-Lichtenbaum type identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Finite fields: every character of C_m for m <= m-max, k <= k-max.
    Ffqlc {
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        #[arg(long, default_value_t = 6)]
        m_max: u64,
        #[arg(long, default_value_t = 3)]
        k_max: u64,
    },
    /// Kummer covers y^d = f(x) of open subsets of the affine line.
    Curves {
        /// A cover {"p":..,"d":..,"f":[c0,c1,..]} or a list of them.
        #[arg(long, conflicts_with = "spec_file")]
        spec: Option<String>,
        #[arg(long)]
        spec_file: Option<PathBuf>,
        /// Truncation order; defaults to 2(deg f + 3).
        #[arg(long)]
        order: Option<usize>,
        /// Largest field size counted by enumeration.
        #[arg(long, default_value_t = CountOptions::default().brute_force_limit)]
        brute_force_limit: u64,
    },
    /// Abelian number fields Q(zeta_N)^H.
    Dirichlet {
        #[arg(long, default_value_t = 12)]
        modulus_max: u64,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
        /// A single field {"modulus": N, "subgroup": [residues]}.
        #[arg(long)]
        field: Option<String>,
    },
}

fn parse_covers(text: &str) -> Result<Vec<CoverSpec>, String> {
    serde_json::from_str::<Vec<CoverSpec>>(text)
        .or_else(|_| serde_json::from_str::<CoverSpec>(text).map(|c| vec![c]))
        .map_err(|e| format!("invalid cover spec: {e}"))
}

fn run(cli: &Cli) -> Result<SuiteReport, String> {
    match &cli.command {
        Command::Ffqlc { q, m_max, k_max } => run_ffqlc(q, *m_max, *k_max).map_err(|e| e.to_string()),
        Command::Curves { spec, spec_file, order, brute_force_limit } => {
            let specs: Vec<(CoverSpec, Option<usize>)> = match (spec, spec_file) {
                (Some(s), _) => parse_covers(s)?.into_iter().map(|c| (c, *order)).collect(),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                    parse_covers(&text)?.into_iter().map(|c| (c, *order)).collect()
                }
                (None, None) => default_covers().into_iter().map(|(c, b)| (c, order.or(b))).collect(),
            };
            run_curves(&specs, CountOptions { brute_force_limit: *brute_force_limit }).map_err(|e| e.to_string())
        }
        Command::Dirichlet { modulus_max, n_max, field } => match field {
            Some(text) => {
                let spec: FieldSpec = serde_json::from_str(text).map_err(|e| format!("invalid field spec: {e}"))?;
                run_dirichlet_field(&spec, *n_max).map_err(|e| e.to_string())
            }
            None => run_dirichlet(*modulus_max, *n_max).map_err(|e| e.to_string()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let suite = match run(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.format {
        Format::Tsv => suite.to_tsv(),
        Format::Json => suite.to_json(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if suite.has_failures() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
