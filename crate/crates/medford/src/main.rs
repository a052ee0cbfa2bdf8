//! Command line front-end for the MEDFORD pipeline.
//!
//! Human-readable output (reports, bag summaries, errors) goes to standard
//! error; machine output (exports, JSON diagnostics) goes to standard
//! output. Exit codes: 0 success, 1 the file or bag has problems, 2 I/O or
//! usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use medford::{
    check, parse, plan_bag, report, to_canonical_export, to_json_line, verify_bag, write_bag,
    Diagnostic, SchemaRegistry,
};

/// Environment variable naming a schema overlay applied before `--schema`.
const SCHEMA_ENV: &str = "MEDFORD_SCHEMA";

#[derive(Parser)]
#[command(
    name = "medford",
    version,
    about = "Validate, export, and compile MEDFORD metadata files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate one or more .mfd files
    Validate {
        /// Input files
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Schema overlay file applied on top of the built-in vocabulary
        #[arg(long)]
        schema: Option<PathBuf>,
        /// Emit one JSON object per diagnostic on standard output
        #[arg(long)]
        json_diagnostics: bool,
    },
    /// Emit the canonical structured export of a file
    Export {
        file: PathBuf,
        /// Write the export here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a file and compile it into a BagIt bag
    Bag {
        file: PathBuf,
        /// Directory to create the bag in (must be absent or empty)
        #[arg(long)]
        out: PathBuf,
        /// Directory referenced paths are resolved against
        /// (defaults to the file's directory)
        #[arg(long)]
        base_dir: Option<PathBuf>,
        /// Schema overlay file applied on top of the built-in vocabulary
        #[arg(long)]
        schema: Option<PathBuf>,
    },
    /// Recompute checksums of an existing bag and report mismatches
    VerifyBag { dir: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("medford: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Validate {
            files,
            schema,
            json_diagnostics,
        } => cmd_validate(&files, schema.as_deref(), json_diagnostics),
        Command::Export { file, out } => cmd_export(&file, out.as_deref()),
        Command::Bag {
            file,
            out,
            base_dir,
            schema,
        } => cmd_bag(&file, &out, base_dir.as_deref(), schema.as_deref()),
        Command::VerifyBag { dir } => cmd_verify_bag(&dir),
    }
}

fn load_registry(schema_flag: Option<&Path>) -> Result<SchemaRegistry, String> {
    let mut registry = medford::builtin_vocabulary();
    if let Ok(env_path) = std::env::var(SCHEMA_ENV) {
        if !env_path.is_empty() {
            overlay_from(&mut registry, Path::new(&env_path))?;
        }
    }
    if let Some(path) = schema_flag {
        overlay_from(&mut registry, path)?;
    }
    Ok(registry)
}

fn overlay_from(registry: &mut SchemaRegistry, path: &Path) -> Result<(), String> {
    let text = read_file(path)?;
    registry
        .overlay_text(&text)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn source_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "document".to_string())
}

fn check_file(path: &Path, registry: &SchemaRegistry) -> Result<Vec<Diagnostic>, String> {
    let text = read_file(path)?;
    let (_, diagnostics) = check(&source_name(path), &text, registry);
    Ok(diagnostics)
}

fn cmd_validate(
    files: &[PathBuf],
    schema: Option<&Path>,
    json_diagnostics: bool,
) -> Result<ExitCode, String> {
    let registry = load_registry(schema)?;

    // Files are checked in parallel; output is serialized in input order.
    let results: Vec<Result<Vec<Diagnostic>, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|path| scope.spawn(|| check_file(path, &registry)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut any_problem = false;
    for (path, result) in files.iter().zip(results) {
        let diagnostics = result?;
        if json_diagnostics {
            for d in &diagnostics {
                println!("{}", to_json_line(d));
            }
        }
        let (text, counts) = report(&diagnostics);
        if counts.total() > 0 {
            any_problem = true;
            if files.len() > 1 {
                eprintln!("{}:", path.display());
            }
            eprint!("{text}");
        }
    }
    Ok(ExitCode::from(u8::from(any_problem)))
}

fn cmd_export(file: &Path, out: Option<&Path>) -> Result<ExitCode, String> {
    let text = read_file(file)?;
    let (document, diagnostics) = parse(&source_name(file), &text);
    let (report_text, _) = report(&diagnostics);
    eprint!("{report_text}");
    let export = to_canonical_export(&document);
    match out {
        Some(path) => fs::write(path, export).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{export}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bag(
    file: &Path,
    out: &Path,
    base_dir: Option<&Path>,
    schema: Option<&Path>,
) -> Result<ExitCode, String> {
    let registry = load_registry(schema)?;
    let text = read_file(file)?;
    let (document, diagnostics) = check(&source_name(file), &text, &registry);
    if !diagnostics.is_empty() {
        let (report_text, _) = report(&diagnostics);
        eprint!("{report_text}");
        eprintln!(
            "medford: {} did not validate; no bag was written",
            file.display()
        );
        return Ok(ExitCode::from(1));
    }
    let default_base = file.parent().unwrap_or(Path::new("."));
    let base = base_dir.unwrap_or(default_base);
    let plan = plan_bag(&document, base).map_err(|e| e.to_string())?;
    write_bag(&plan, out).map_err(|e| e.to_string())?;
    eprintln!(
        "wrote bag {} ({} payload files, {} fetch entries)",
        out.display(),
        plan.payload.len(),
        plan.fetch.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_bag(dir: &Path) -> Result<ExitCode, String> {
    let report = verify_bag(dir).map_err(|e| e.to_string())?;
    if report.is_ok() {
        eprintln!("bag {} ok", dir.display());
        Ok(ExitCode::SUCCESS)
    } else {
        for mismatch in &report.mismatches {
            eprintln!("{mismatch}");
        }
        eprintln!(
            "bag {} has {} mismatched file(s)",
            dir.display(),
            report.mismatches.len()
        );
        Ok(ExitCode::from(1))
    }
}
