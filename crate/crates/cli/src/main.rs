use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use transversal_core::quasigroup::TableFile;
use transversal_core::report::{self, ReportLine};
use transversal_core::suite::{self, ExtensionOptions, TransversalOptions};
use transversal_core::transversal::SubgroupFile;
use transversal_core::{catalog, extension, perm, transversal};
use transversal_core::{CosetSpace, Error, FiniteGroup, RightQuasigroup, Subgroup};

#[derive(Parser, Debug)]
#[command(name = "transversal", version, about = "Right transversals, their quasigroups, and extension groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, default_value_t = suite::DEFAULT_SEED)]
    seed: u64,

    /// Sampled pairs for the sphere and Cayley suites, or transversals drawn when enumeration is capped.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Largest permutation group built by closure.
    #[arg(long, global = true, default_value_t = perm::DEFAULT_CLOSURE_CAP as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    cap_closure: u64,

    /// Largest number of transversals enumerated before sampling.
    #[arg(long, global = true, default_value_t = transversal::DEFAULT_ENUMERATION_CAP as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    cap_enum: u64,

    /// Replaces the residual tolerances of the numerical suites.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transversals of a subgroup, their induced quasigroups and torsion.
    Transversals {
        /// Catalog name (for example S3, D4, Z2xS3) or group JSON file.
        group: String,
        /// `{e,(12)}` (labels, closed to a subgroup) or a `{"members": [...]}` file. All subgroups if omitted.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Torsion extension and universal extension of a quasigroup table.
    Extension {
        /// Quasigroup JSON file.
        quasigroup: PathBuf,
        /// Write the universal extension's Cayley table here.
        #[arg(long)]
        universal_out: Option<PathBuf>,
        /// Write the torsion extension's Cayley table here.
        #[arg(long)]
        torsion_out: Option<PathBuf>,
    },
    /// Reflection transversal on the unit sphere in R^dim.
    Sphere {
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Cayley–Dickson quasigroup laws in dimension 1, 2, 4 or 8.
    Cayley {
        #[arg(long, default_value_t = 8)]
        dim: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Validation(String),
    Property(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Property(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Property(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Property(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_table(path: &Path) -> Result<TableFile, Failure> {
    TableFile::from_json(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_group(arg: &str) -> Result<FiniteGroup, Failure> {
    match catalog::group(arg) {
        Ok(g) => {
            if Path::new(arg).exists() {
                eprintln!("warning: `{arg}` is both a catalog group and a file; using the catalog group");
            }
            Ok(g)
        }
        Err(Error::UnknownGroup(_)) => {
            let path = Path::new(arg);
            if !path.exists() {
                return Err(Failure::Io(format!("`{arg}` is neither a catalog group nor a file")));
            }
            Ok(FiniteGroup::from_file(&read_table(path)?)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn load_subgroup(group: &FiniteGroup, spec: &str) -> Result<Subgroup, Failure> {
    let path = Path::new(spec);
    if path.exists() {
        let text = read(path)?;
        let file: SubgroupFile =
            serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        return Ok(Subgroup::new(group, file.members)?);
    }
    Ok(suite::parse_subgroup_spec(group, spec)?)
}

struct Output {
    name: &'static str,
    text: String,
    pass: bool,
}

impl Output {
    fn report(name: &'static str, lines: &[ReportLine]) -> Self {
        Output {
            name,
            text: report::render(name, lines),
            pass: lines.iter().all(|l| l.pass),
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Sphere { .. }) {
        return Err(Failure::Validation("csv output is only available for `sphere`".into()));
    }
    let closure_cap = usize::try_from(cli.cap_closure).unwrap_or(usize::MAX);
    match &cli.command {
        Command::Transversals { group, subgroup } => {
            let g = load_group(group)?;
            let subgroups = match subgroup {
                Some(spec) => vec![load_subgroup(&g, spec)?],
                None => g.all_subgroups(),
            };
            let opts = TransversalOptions {
                seed: cli.seed,
                closure_cap,
                enumeration_cap: u128::from(cli.cap_enum),
                samples: cli.samples.unwrap_or(suite::DEFAULT_TRANSVERSAL_SAMPLES),
            };
            let mut lines = Vec::new();
            for h in subgroups {
                let space = CosetSpace::new(g.clone(), h);
                lines.extend(suite::transversal_report(&space, &opts)?);
            }
            Ok(Output::report("transversals", &lines))
        }
        Command::Extension {
            quasigroup,
            universal_out,
            torsion_out,
        } => {
            let q = RightQuasigroup::from_file(&read_table(quasigroup)?)?;
            let opts = ExtensionOptions {
                seed: cli.seed,
                closure_cap,
                sampled_triples: cli.samples.unwrap_or(extension::SAMPLED_TRIPLES),
                ..ExtensionOptions::default()
            };
            let run = suite::extension_report(&q, &opts)?;
            let out = Output::report("extension", &run.lines);
            if out.pass {
                if let Some(path) = universal_out {
                    write(path, &run.universal.to_file(opts.table_cap)?.to_json())?;
                }
                if let Some(path) = torsion_out {
                    write(path, &run.torsion.to_file(opts.table_cap)?.to_json())?;
                }
            }
            Ok(out)
        }
        Command::Sphere { dim } => {
            if cli.format == Format::Csv {
                return Ok(Output {
                    name: "sphere",
                    text: suite::discontinuity_csv(*dim)?,
                    pass: true,
                });
            }
            let samples = cli.samples.unwrap_or(suite::DEFAULT_SUITE_SAMPLES);
            Ok(Output::report("sphere", &suite::sphere_report(*dim, samples, cli.seed, cli.tol)?))
        }
        Command::Cayley { dim } => {
            let samples = cli.samples.unwrap_or(suite::DEFAULT_SUITE_SAMPLES);
            Ok(Output::report("cayley", &suite::cayley_report(*dim, samples, cli.seed, cli.tol)?))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => write(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|out| {
        emit(&cli, &out.text)?;
        if out.pass {
            Ok(())
        } else {
            Err(Failure::Property(format!("{} report has failing checks", out.name)))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
