use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coalflow::experiment::{run_experiment, ExperimentConfig, Report};
use coalflow::Error;

#[derive(Parser)]
#[command(name = "coalflow", version, about = "Run coalescing-flow crossing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the study described by a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write one JSON line per replica.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to available parallelism.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Render a report file.
    Report {
        report: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: String) -> Self {
        Failure { code, message }
    }

    fn from_core(path: &Path, e: Error) -> Self {
        let code = match e {
            Error::ResourceGuard(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        };
        Failure::new(code, format!("{}: {e}", path.display()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, samples, seed, raw, out, threads } => run(&config, samples, seed, raw, out, threads),
        Command::Report { report, format } => render(&report, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(
    path: &Path,
    samples: Option<u64>,
    seed: Option<u64>,
    raw: bool,
    out: Option<PathBuf>,
    threads: Option<usize>,
) -> Result<(), Failure> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(Failure::new(2, "--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::new(1, format!("thread pool: {e}")))?;
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let mut cfg: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| Failure::from_core(path, Error::Json(e)))?;
    if let Some(s) = samples {
        cfg.samples = s;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = out.or_else(|| cfg.output.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"));
    if let Some(d) = &mut cfg.output {
        *d = dir.display().to_string();
    }
    cfg.validate().map_err(|e| Failure::from_core(path, e))?;

    let output = run_experiment(&cfg).map_err(|e| Failure::from_core(path, e))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let io = |e: std::io::Error| Failure::new(1, format!("{}: {e}", dir.display()));
    fs::create_dir_all(&dir).map_err(io)?;
    let json = output.report.to_json().map_err(|e| Failure::from_core(path, e))?;
    let csv = output.report.to_csv().map_err(|e| Failure::from_core(path, e))?;
    fs::write(dir.join(format!("{stem}.report.json")), json).map_err(io)?;
    fs::write(dir.join(format!("{stem}.csv")), csv).map_err(io)?;
    if raw {
        let mut lines = String::new();
        for r in &output.raw {
            lines.push_str(&r.to_string());
            lines.push('\n');
        }
        fs::write(dir.join(format!("{stem}.replicas.jsonl")), lines).map_err(io)?;
    }
    println!(
        "{} {} [{}]: {} ({:.2}s) -> {}",
        output.report.study,
        output.report.model,
        stem,
        output.report.summary,
        output.report.wall_time,
        dir.display()
    );
    Ok(())
}

fn render(path: &Path, format: Format) -> Result<(), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let report: Report =
        serde_json::from_str(&text).map_err(|e| Failure::new(2, format!("{}: malformed report: {e}", path.display())))?;
    match format {
        Format::Csv => print!("{}", report.to_csv().map_err(|e| Failure::from_core(path, e))?),
        Format::Table => print!("{}", table(&report)),
    }
    Ok(())
}

fn table(r: &Report) -> String {
    let mut s = format!("# {} / {} / seed {} / samples {}\n", r.study, r.model, r.seed, r.samples);
    let cells: Vec<Vec<String>> = r.rows.iter().map(|row| row.iter().map(|v| fmt_cell(*v)).collect()).collect();
    let widths: Vec<usize> = r
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|row| row.get(i).map_or(0, String::len)).max().unwrap_or(0).max(c.len()))
        .collect();
    let line = |items: &[String]| -> String {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    s += &line(&r.columns);
    for row in &cells {
        s += &line(row);
    }
    if let Some(reference) = &r.reference {
        s += &format!("reference: {:.6} ± {:.6}\n", reference.p_hat, reference.stderr);
    }
    s += &format!("monotone: {}\n", r.monotone_flag);
    for (name, ok) in &r.checks {
        s += &format!("check {name}: {}\n", if *ok { "pass" } else { "FAIL" });
    }
    s
}

fn fmt_cell(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.6}")
    }
}
