mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use report::{Failure, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Classify,
    Spine,
    Skeleton,
    Roots,
    Imaginary,
    Bases,
    Spd,
    Skd,
    OracleCheck,
    Export,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

/// Exact computations on root groupoids of Kac-Moody superalgebras.
#[derive(Parser, Debug)]
#[command(name = "rootgroupoid", version)]
pub struct Cli {
    /// Operation to run.
    #[arg(value_enum)]
    pub verb: Verb,
    /// Built-in family, e.g. "Q(1,1,2)", "C(3)^(1)", "InfinitePiS(t)".
    #[arg(long, conflicts_with = "input")]
    pub family: Option<String>,
    /// Cartan datum as a JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Vertex bound for spine and skeleton exploration.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_vertices: u64,
    /// Height bound for root enumeration.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..))]
    pub max_height: i64,
    /// Length bound for Weyl group enumeration.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_length: u64,
    /// Root in base coordinates ("1,1,1") or a named root of the family ("δ", "α_2").
    #[arg(long, allow_hyphen_values = true)]
    pub root: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (text, code) = match report::run(&cli) {
        Ok(out) => (render(&out, cli.format), 0),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Domain { name, message }) => {
            let v = serde_json::json!({"status": "error", "error": name, "message": message});
            let text = match cli.format {
                Format::Text => format!("error: {name}: {message}\n"),
                _ => format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")),
            };
            (text, 1)
        }
    };
    if let Err(msg) = emit(&cli, &text) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn render(out: &Output, format: Format) -> String {
    match (out, format) {
        (Output::Dot(s), _) => s.clone(),
        (Output::Json(v), Format::Text) => report::to_text(v),
        (Output::Json(v), _) => format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")),
    }
}
