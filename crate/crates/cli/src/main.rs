use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use motivic_cli::commands::{self, Context, ExtArgs, MglArgs, Output, StemsArgs};
use motivic_cli::exit_code;
use motivic_core::hopf::DEFAULT_PRECISION;
use motivic_core::{CoreError, Result};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Grid,
    Svg,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Grid => "grid",
            Format::Svg => "svg",
        }
    }
}

/// Motivic stable stems: Adams–Novikov Ext, Milnor–Witt K-theory,
/// torsion 𝔽_p[[t]]-modules and assembled stem charts.
#[derive(Debug, Parser)]
#[command(name = "motivic", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Cache directory; caching is off when neither this nor the variable is set.
    #[arg(long, global = true, env = "MOTIVIC_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Field catalog JSON replacing the bundled one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Adams–Novikov Ext^{s,t} from the cobar complex.
    Ext {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        smax: u32,
        #[arg(long)]
        tmax: u32,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        /// Use the universal algebroid instead of the p-typical one.
        #[arg(long)]
        universal: bool,
        #[arg(long)]
        unnormalized: bool,
        /// Draw in (s, t) rather than (stem, s).
        #[arg(long)]
        bidegree_view: bool,
    },
    /// Milnor–Witt K-theory of a field.
    Kmw {
        /// Catalog name or inline descriptor such as `finite:7`.
        #[arg(long)]
        field: String,
        /// Degrees as LO..HI.
        #[arg(long, allow_hyphen_values = true, default_value = "-3..3")]
        range: String,
        /// Complete at this prime.
        #[arg(long)]
        complete: Option<u64>,
    },
    /// Synthetic stems, or the stems of a Tate-orientable field.
    Stems {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        stem_max: i64,
        /// `computed` or `table`.
        #[arg(long)]
        source: Option<String>,
        /// Synthetic stem table in JSON.
        #[arg(long)]
        table_file: Option<PathBuf>,
    },
    /// Homotopy of completed MGL, or a level of the motivic ANSS E1-page.
    Mgl {
        #[arg(long)]
        field: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_hyphen_values = true, default_value = "0..12")]
        stems: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0..6")]
        weights: String,
        /// E1 level; omit for the homotopy itself.
        #[arg(long)]
        filtration: Option<u32>,
    },
    /// Decompose a torsion 𝔽_p[[t]]-module given as JSON.
    Decompose {
        #[arg(long)]
        module_file: PathBuf,
    },
    /// Run a self-check suite (`all` for every suite).
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// List the field catalog or show one entry.
    Catalog { name: Option<String> },
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let ctx = Context::new(cli.catalog.as_deref(), cli.cache_dir.as_deref())?;
    match &cli.command {
        Command::Ext { prime, smax, tmax, precision, universal, unnormalized, bidegree_view } => commands::ext(
            &ctx,
            &ExtArgs {
                prime: *prime,
                s_max: *smax,
                t_max: *tmax,
                precision: *precision,
                universal: *universal,
                unnormalized: *unnormalized,
                bidegree_view: *bidegree_view,
            },
        ),
        Command::Kmw { field, range, complete } => commands::kmw(&ctx, field, commands::parse_range(range)?, *complete),
        Command::Stems { field, prime, stem_max, source, table_file } => commands::stems(
            &ctx,
            &StemsArgs {
                field: field.clone(),
                prime: *prime,
                stem_max: *stem_max,
                source: source.clone(),
                table_file: table_file.clone(),
            },
        ),
        Command::Mgl { field, prime, stems, weights, filtration } => commands::mgl(
            &ctx,
            &MglArgs {
                field: field.clone(),
                prime: *prime,
                stems: commands::parse_range(stems)?,
                weights: commands::parse_range(weights)?,
                filtration: *filtration,
            },
        ),
        Command::Decompose { module_file } => commands::decompose_file(module_file),
        Command::Check { suite } => commands::check(&ctx, suite),
        Command::Catalog { name } => commands::catalog(&ctx, name.as_deref()),
    }
}

fn emit(cli: &Cli, doc: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, doc).map_err(|e| CoreError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli).and_then(|out| {
        let doc = out.render(cli.format.name())?;
        emit(&cli, &doc)?;
        Ok(out.success)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
