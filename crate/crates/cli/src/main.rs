//! `setshape`: shape and unshape sequence files, check membership, and run the
//! delta sweep, detection and Huffman experiments.

mod grid;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use setshape::experiments::{
    huffman_compare, simulate_detection, sweep::sweep_delta, ChannelSpec, CompareMode, ExactRow,
    DEFAULT_ENUMERATION_BUDGET,
};
use setshape::experiments::{DetectionReport, HuffmanComparison, SweepRow};
use setshape::{Alphabet, ClassTable, Error, Sequence, ShapingContext, ShapingParams, DEFAULT_CLASS_BUDGET};

const EXIT_DETECTED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "setshape", version, about = "Entropy-ordered shaping codec and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map length-N sequences to their length-(N+K) codewords.
    Shape(CodecArgs),
    /// Invert `shape`; non-codewords are reported as DETECTED (exit 1).
    Unshape(CodecArgs),
    /// Report shaped-set membership of length-(N+K) sequences (exit 1 if any fail).
    Check(CodecArgs),
    /// Average information of X^N versus the shaped set over a parameter grid.
    SweepDelta(SweepArgs),
    /// Detection study: Monte Carlo channel simulation or exact enumeration.
    Detect(DetectArgs),
    /// Per-sequence Huffman coding of source sequences versus their codewords.
    Huffman(HuffmanArgs),
    /// Dump the class table of length-L sequences as JSON.
    Table(TableArgs),
}

#[derive(Args, Clone)]
struct Shaping {
    /// Alphabet size.
    #[arg(long = "h")]
    h: usize,
    /// Source sequence length.
    #[arg(long = "N")]
    n: usize,
    /// Shaping order.
    #[arg(long = "K", default_value_t = 1)]
    k: usize,
    /// Maximum number of type classes per table.
    #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
    class_budget: u64,
}

#[derive(Args)]
struct Io {
    /// Input file (stdin if omitted).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file (stdout if omitted).
    #[arg(long = "out")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct CodecArgs {
    #[command(flatten)]
    shaping: Shaping,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct SweepArgs {
    /// Alphabet sizes, e.g. `2,3,4` or `2..4`.
    #[arg(long = "h")]
    h: String,
    /// Source lengths, e.g. `4..64:4`.
    #[arg(long = "N")]
    n: String,
    /// Shaping orders, e.g. `1,2`.
    #[arg(long = "K", default_value = "1")]
    k: String,
    #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
    class_budget: u64,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    shaping: Shaping,
    /// Enumerate all codewords and error patterns instead of simulating.
    #[arg(long)]
    exact: bool,
    /// Error weights for --exact, as a grid.
    #[arg(long, default_value = "1")]
    weight: String,
    /// Per-symbol substitution probability.
    #[arg(long, default_value_t = 0.01)]
    p: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of (codeword, pattern) pairs for --exact.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct HuffmanArgs {
    #[command(flatten)]
    shaping: Shaping,
    /// Compare every source sequence instead of a sample.
    #[arg(long)]
    exact: bool,
    /// Sample size when not exhaustive.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long = "h")]
    h: usize,
    /// Sequence length.
    #[arg(long = "L")]
    len: usize,
    #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
    class_budget: u64,
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// A failed run: exit code plus message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn io(context: &str, err: io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{context}: {err}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Shape(args) => cmd_shape(&args),
        Command::Unshape(args) => cmd_unshape(&args),
        Command::Check(args) => cmd_check(&args),
        Command::SweepDelta(args) => cmd_sweep(&args),
        Command::Detect(args) => cmd_detect(&args),
        Command::Huffman(args) => cmd_huffman(&args),
        Command::Table(args) => cmd_table(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("setshape: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn context(shaping: &Shaping) -> Result<ShapingContext, Failure> {
    let params = ShapingParams::new(shaping.h, shaping.n, shaping.k)?;
    Ok(ShapingContext::with_budget(params, shaping.class_budget)?)
}

/// Input lines plus whether the input ended with a newline.
struct Lines {
    lines: Vec<String>,
    trailing_newline: bool,
}

fn read_lines(path: Option<&PathBuf>) -> Result<Lines, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = fs::read_to_string(p).map_err(|e| Failure::io(&p.display().to_string(), e))?
        }
        None => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::io("stdin", e))?;
        }
    }
    let trailing_newline = text.ends_with('\n');
    let body = text.strip_suffix('\n').unwrap_or(&text);
    let lines = if text.is_empty() {
        Vec::new()
    } else {
        body.split('\n').map(str::to_owned).collect()
    };
    Ok(Lines {
        lines,
        trailing_newline,
    })
}

fn write_output(path: Option<&PathBuf>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|e| Failure::io(&p.display().to_string(), e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::io("stdout", e))
        }
    }
}

fn join_lines(lines: &[String], trailing_newline: bool) -> String {
    let mut out = lines.join("\n");
    if trailing_newline && !lines.is_empty() {
        out.push('\n');
    }
    out
}

fn parse_line(line: &str, number: usize, alphabet: Alphabet, expected: usize) -> Result<Sequence, Failure> {
    let seq = Sequence::parse(line, alphabet).map_err(|e| Failure::input(format!("line {number}: {e}")))?;
    if seq.len() != expected {
        return Err(Failure::input(format!(
            "line {number}: expected length {expected}, got {}",
            seq.len()
        )));
    }
    Ok(seq)
}

fn cmd_shape(args: &CodecArgs) -> Outcome {
    let ctx = context(&args.shaping)?;
    let input = read_lines(args.io.input.as_ref())?;
    let alphabet = ctx.params().alphabet();
    let mut shaped = Vec::with_capacity(input.lines.len());
    for (i, line) in input.lines.iter().enumerate() {
        let x = parse_line(line, i + 1, alphabet, ctx.params().n)?;
        shaped.push(ctx.shape(&x)?.to_string());
    }
    write_output(args.io.output.as_ref(), &join_lines(&shaped, input.trailing_newline))?;
    Ok(0)
}

fn cmd_unshape(args: &CodecArgs) -> Outcome {
    let ctx = context(&args.shaping)?;
    let input = read_lines(args.io.input.as_ref())?;
    let alphabet = ctx.params().alphabet();
    let mut out = Vec::with_capacity(input.lines.len());
    let mut detected = 0usize;
    for (i, line) in input.lines.iter().enumerate() {
        let y = parse_line(line, i + 1, alphabet, ctx.params().extended_len())?;
        match ctx.unshape(&y) {
            Ok(x) => out.push(x.to_string()),
            Err(Error::NotACodeword) => {
                eprintln!("DETECTED line {}: {}", i + 1, line);
                out.push("DETECTED".to_string());
                detected += 1;
            }
            Err(e) => return Err(Failure::input(format!("line {}: {e}", i + 1))),
        }
    }
    write_output(args.io.output.as_ref(), &join_lines(&out, input.trailing_newline))?;
    Ok(if detected > 0 { EXIT_DETECTED } else { 0 })
}

fn cmd_check(args: &CodecArgs) -> Outcome {
    let ctx = context(&args.shaping)?;
    let input = read_lines(args.io.input.as_ref())?;
    let alphabet = ctx.params().alphabet();
    let mut results = Vec::with_capacity(input.lines.len());
    for (i, line) in input.lines.iter().enumerate() {
        let y = parse_line(line, i + 1, alphabet, ctx.params().extended_len())?;
        results.push((i + 1, line.as_str(), ctx.is_member(&y)?));
    }
    let text = match args.io.format {
        Format::Csv => {
            let mut s = String::from("line,sequence,member\n");
            for (n, line, member) in &results {
                s.push_str(&format!("{n},{line},{member}\n"));
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = results
                .iter()
                .map(|(n, line, member)| serde_json::json!({"line": n, "sequence": line, "member": member}))
                .collect();
            json_text(&rows)
        }
    };
    write_output(args.io.output.as_ref(), &text)?;
    Ok(if results.iter().all(|r| r.2) { 0 } else { EXIT_DETECTED })
}

fn json_text<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv_text(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = format!("{header}\n");
    for row in rows {
        s.push_str(&row);
        s.push('\n');
    }
    s
}

fn cmd_sweep(args: &SweepArgs) -> Outcome {
    let hs = grid::parse_grid(&args.h).map_err(Failure::input)?;
    let ns = grid::parse_grid(&args.n).map_err(Failure::input)?;
    let ks = grid::parse_grid(&args.k).map_err(Failure::input)?;
    let rows = sweep_delta(&hs, &ns, &ks, args.class_budget);
    let text = match args.io.format {
        Format::Csv => csv_text(SweepRow::CSV_HEADER, rows.iter().map(SweepRow::csv_row)),
        Format::Json => {
            let values: Vec<_> = rows
                .iter()
                .map(|r| match &r.result {
                    Ok(report) => {
                        let mut v = serde_json::to_value(report).expect("report serializes");
                        v["sign"] = r.sign().into();
                        v
                    }
                    Err(e) => serde_json::json!({
                        "h": r.h, "N": r.n, "K": r.k, "sign": r.sign(), "error": e.to_string()
                    }),
                })
                .collect();
            json_text(&values)
        }
    };
    write_output(args.io.output.as_ref(), &text)?;
    Ok(0)
}

fn cmd_detect(args: &DetectArgs) -> Outcome {
    let ctx = context(&args.shaping)?;
    let text = if args.exact {
        let weights = grid::parse_grid(&args.weight).map_err(Failure::input)?;
        let rows = weights
            .iter()
            .map(|&w| ExactRow::compute(&ctx, w, args.budget))
            .collect::<Result<Vec<_>, _>>()?;
        match args.io.format {
            Format::Csv => csv_text(ExactRow::CSV_HEADER, rows.iter().map(ExactRow::csv_row)),
            Format::Json => json_text(&rows),
        }
    } else {
        let spec = ChannelSpec::new(args.p)?;
        let report = simulate_detection(&ctx, spec, args.trials, args.seed);
        match args.io.format {
            Format::Csv => csv_text(DetectionReport::CSV_HEADER, [report.csv_row()]),
            Format::Json => json_text(&report),
        }
    };
    write_output(args.io.output.as_ref(), &text)?;
    Ok(0)
}

fn cmd_huffman(args: &HuffmanArgs) -> Outcome {
    let ctx = context(&args.shaping)?;
    let mode = if args.exact {
        CompareMode::Exhaustive
    } else {
        CompareMode::Sample(args.trials)
    };
    let cmp = huffman_compare(&ctx, mode, args.seed, args.budget)?;
    let text = match args.io.format {
        Format::Csv => csv_text(HuffmanComparison::CSV_HEADER, cmp.csv_rows()),
        Format::Json => json_text(&cmp),
    };
    write_output(args.io.output.as_ref(), &text)?;
    Ok(0)
}

fn cmd_table(args: &TableArgs) -> Outcome {
    let alphabet = Alphabet::new(args.h)?;
    let table = ClassTable::build_with_budget(alphabet, args.len, args.class_budget)?;
    write_output(args.output.as_ref(), &json_text(&table.to_json()))?;
    Ok(0)
}
