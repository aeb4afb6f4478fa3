use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use molstruct::matchsel::SetScore;
use molstruct::pipeline::{self, Options, RecordOutput};
use molstruct::rationale::{parse_component_list, ComponentKind, Format};
use molstruct::structure::Catalog;

/// Structural reasoning over SMILES: JSONL in, JSONL out.
#[derive(Parser)]
#[command(name = "molstruct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct IoArgs {
    /// Read records from this file instead of stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Functional-group and ring catalog replacing the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RationaleFormat {
    Prose,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Add a rationale to every record with `smiles`.
    Analyze {
        /// Comma-separated components, or `all` / `core`.
        #[arg(long, default_value = "all")]
        components: String,
        #[arg(long, value_enum, default_value = "prose")]
        format: RationaleFormat,
    },
    /// Pick the candidate that best matches each record's rationale.
    Select {
        /// Only score these components of the rationale.
        #[arg(long)]
        reliable: Option<String>,
        /// Score set components by recall instead of Jaccard.
        #[arg(long)]
        recall: bool,
    },
    /// Reasoning accuracy of `rationale` against `gold_smiles`.
    Score {
        #[arg(long)]
        recall: bool,
        #[arg(long, value_enum, default_value = "json")]
        report: ReportFormat,
    },
    /// Generation metrics of `predicted_smiles` against `gold_smiles`.
    Compare {
        #[arg(long, value_enum, default_value = "json")]
        report: ReportFormat,
    },
    /// Add `canonical_smiles` to every record with `smiles`.
    Canon,
}

fn components(list: &str) -> Result<BTreeSet<ComponentKind>, String> {
    let set = parse_component_list(list).map_err(|e| e.to_string())?;
    if set.is_empty() {
        return Err("empty component list".into());
    }
    Ok(set)
}

fn read_lines(path: &Option<PathBuf>) -> io::Result<Vec<String>> {
    let reader: Box<dyn BufRead> = match path {
        Some(p) => Box::new(BufReader::new(File::open(p)?)),
        None => Box::new(io::stdin().lock()),
    };
    // invalid UTF-8 becomes a malformed record, not an IO failure
    let mut out = Vec::new();
    for line in reader.split(b'\n') {
        out.push(String::from_utf8_lossy(&line?).into_owned());
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<bool, String> {
    let mut opts = Options::default();
    if let Some(path) = &cli.io.catalog {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        opts.catalog = Catalog::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(j) = cli.io.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let lines = read_lines(&cli.io.input).map_err(|e| format!("reading input: {e}"))?;
    let mut out: Box<dyn Write> = match &cli.io.output {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("{}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };

    let records = |outputs: Vec<RecordOutput>, out: &mut dyn Write| -> io::Result<bool> {
        let mut ok = true;
        for o in outputs {
            ok &= o.ok;
            writeln!(out, "{}", o.record)?;
        }
        Ok(ok)
    };
    let warn = |warnings: &[String]| {
        for w in warnings {
            eprintln!("warning: {w}");
        }
        warnings.is_empty()
    };

    let io_err = |e: io::Error| format!("writing output: {e}");
    let clean = match cli.command {
        Command::Analyze { components: list, format } => {
            opts.components = components(&list)?;
            opts.format = match format {
                RationaleFormat::Prose => Format::Prose,
                RationaleFormat::Json => Format::Json,
            };
            records(pipeline::map_records(&lines, &opts, pipeline::analyze_record), &mut out).map_err(io_err)?
        }
        Command::Select { reliable, recall } => {
            opts.reliable = reliable.as_deref().map(components).transpose()?;
            opts.set_score = if recall { SetScore::Recall } else { SetScore::Jaccard };
            records(pipeline::map_records(&lines, &opts, pipeline::select_record), &mut out).map_err(io_err)?
        }
        Command::Canon => {
            records(pipeline::map_records(&lines, &opts, pipeline::canon_record), &mut out).map_err(io_err)?
        }
        Command::Score { recall, report } => {
            opts.set_score = if recall { SetScore::Recall } else { SetScore::Jaccard };
            let (rep, warnings) = pipeline::score_records(&lines, &opts);
            match report {
                ReportFormat::Json => writeln!(out, "{}", serde_json::to_string(&rep).expect("report serialises")),
                ReportFormat::Text => write!(out, "{}", rep.to_flat_text()),
            }
            .map_err(io_err)?;
            warn(&warnings)
        }
        Command::Compare { report } => {
            let (rep, warnings) = pipeline::compare_records(&lines);
            match report {
                ReportFormat::Json => writeln!(out, "{}", serde_json::to_string(&rep).expect("report serialises")),
                ReportFormat::Text => write!(out, "{}", rep.to_flat_text()),
            }
            .map_err(io_err)?;
            warn(&warnings)
        }
    };
    out.flush().map_err(io_err)?;
    Ok(clean)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
