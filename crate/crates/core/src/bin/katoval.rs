use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use katoval::cli::{cmd_blowup, cmd_compose, cmd_germ, cmd_graph, cmd_kato, cmd_quotient, CliError, DatumSource, Options, Report};

#[derive(Parser)]
#[command(name = "katoval", version, about = "Exact invariants of surface singularities, strict germs and Kato data")]
struct Cli {
    /// Also print decimal approximations of irrational and rational values.
    #[arg(long, global = true)]
    approx: bool,
    /// Write the dual graph of the result in DOT format to this path.
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of a dual graph file.
    Graph { file: String },
    /// Resolution chain of the cyclic quotient 1/p (1, q).
    Quotient { p: u64, q: u64 },
    /// Run a blow-up script over the smooth germ.
    Blowup { script: String },
    /// Analyse a germ normal form, e.g. `class6 1 1 1 2` or `class4 a=2 c=1 P=1`.
    Germ {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
    },
    /// Kato datum from a file, or `family <k>` for the quotient family.
    Kato {
        #[arg(required = true, num_args = 1..=2)]
        source: Vec<String>,
    },
    /// Compose two Kato data; each is a file or `family:<k>`.
    Compose { first: String, second: String },
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_string(), message: e.to_string() })
}

fn family_k(s: &str) -> Result<i64, CliError> {
    s.parse().map_err(|_| CliError::Usage(format!("family parameter `{s}` is not an integer")))
}

fn source_of(x: &(Option<i64>, String)) -> DatumSource<'_> {
    match x.0 {
        Some(k) => DatumSource::Family(k),
        None => DatumSource::Text(&x.1),
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let opts = Options { approx: cli.approx };
    match &cli.command {
        Command::Graph { file } => cmd_graph(&read(file)?, opts),
        Command::Quotient { p, q } => cmd_quotient(*p, *q, opts),
        Command::Blowup { script } => cmd_blowup(&read(script)?, opts),
        Command::Germ { spec } => cmd_germ(&spec.join(" "), opts),
        Command::Kato { source } => match &source[..] {
            [fam, k] if fam == "family" => cmd_kato(DatumSource::Family(family_k(k)?), opts),
            [file] => cmd_kato(DatumSource::Text(&read(file)?), opts),
            _ => Err(CliError::Usage("expected `kato <file>` or `kato family <k>`".into())),
        },
        Command::Compose { first, second } => {
            let load = |s: &str| -> Result<(Option<i64>, String), CliError> {
                match s.strip_prefix("family:") {
                    Some(k) => Ok((Some(family_k(k)?), String::new())),
                    None => Ok((None, read(s)?)),
                }
            };
            let (a, b) = (load(first)?, load(second)?);
            cmd_compose(source_of(&a), source_of(&b), opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{report}");
            if let (Some(path), Some(dot)) = (&cli.dot, &report.dot) {
                if let Err(e) = fs::write(path, dot) {
                    eprintln!("error[io]: {path}: {e}");
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.tag());
            ExitCode::FAILURE
        }
    }
}
