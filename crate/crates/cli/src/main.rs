use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use segcode::bench::{self, Load};
use segcode::bitio::{self, Frame};
use segcode::oracle;
use segcode::segment::redundancy_formula;
use segcode::{BitString, CodeParams, DecodeReport, Message, Mode, VtCodeword};

#[derive(Parser)]
#[command(
    name = "segcode",
    version,
    about = "Encode, decode and verify marker-delimited VT codes for segmented single-error channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode message bits into a framed stream.
    Encode(EncodeArgs),
    /// Decode a frame or a raw (possibly corrupted) bit stream.
    Decode(DecodeArgs),
    /// Decode every element of the segmented error ball of every stream.
    Verify(VerifyArgs),
    /// Decode seeded random streams through a random segmented channel.
    Fuzz(FuzzArgs),
    /// Print per-segment redundancy against segment length.
    Table(TableArgs),
    /// Measure encode and decode throughput for growing stream sizes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Insdel,
    Edit,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Insdel => Mode::Insdel,
            ModeArg::Edit => Mode::Edit,
        }
    }
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Csv,
}

#[derive(Args)]
struct CodeArgs {
    /// Channel model.
    #[arg(long, value_enum, default_value = "insdel")]
    mode: ModeArg,
    /// Codeword length. Defaults to 7 (insdel) or 8 (edit).
    #[arg(short)]
    k: Option<usize>,
    /// VT residue. Defaults to 1, or 2 when 1 is excluded.
    #[arg(short)]
    a: Option<usize>,
}

impl CodeArgs {
    fn params(&self) -> CliResult<CodeParams> {
        let mode = Mode::from(self.mode);
        let k = self.k.unwrap_or(match mode {
            Mode::Insdel => 7,
            Mode::Edit => 8,
        });
        CodeParams::new(mode, k, self.a).map_err(|e| CliError::Usage(e.into()))
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Message file: ASCII 0/1 (whitespace ignored), or raw bytes with --binary.
    #[arg(long = "in")]
    input: PathBuf,
    /// Frame output file.
    #[arg(long = "out")]
    output: PathBuf,
    /// Required segment count; the message must fill exactly this many.
    #[arg(short)]
    t: Option<usize>,
    /// Treat the input as bytes, unpacked most-significant bit first.
    #[arg(long)]
    binary: bool,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// A frame, or ASCII 0/1 received bits (then -k, -a, --mode and -t apply).
    #[arg(long = "in")]
    input: PathBuf,
    /// Recovered message bits; printed to stdout when omitted.
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Segment count for raw input.
    #[arg(short)]
    t: Option<usize>,
    /// Write recovered messages as packed bytes.
    #[arg(long)]
    binary: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(short, default_value_t = 2)]
    t: usize,
    /// Swap in a wrong first codeword whenever the stream length changed, to
    /// check that the verifier notices.
    #[arg(long, hide = true)]
    negative_control: bool,
}

#[derive(Args)]
struct FuzzArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(short, default_value_t = 3)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    iters: u64,
    /// Per-segment error probability.
    #[arg(long, default_value_t = 0.9)]
    prob: f64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = 14)]
    n_min: usize,
    #[arg(long, default_value_t = 41)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Smallest stream size in bits; sizes grow by factors of ten.
    #[arg(long, default_value_t = 10_000)]
    n_min: usize,
    #[arg(long, default_value_t = 10_000_000)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Minimum measuring time per size, in milliseconds.
    #[arg(long, default_value_t = 300)]
    millis: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

/// Exit status 2 for bad input or parameters, 1 for a failed decode or
/// verification.
enum CliError {
    Usage(anyhow::Error),
    Failed(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Usage(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Verify(a) => verify(a),
        Command::Fuzz(a) => fuzz(a),
        Command::Table(a) => table(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_ascii_bits(path: &Path) -> anyhow::Result<BitString> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing bits in {}", path.display()))
}

fn to_ascii(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn encode(args: EncodeArgs) -> CliResult<()> {
    let params = args.code.params()?;
    let bits = if args.binary {
        let bytes = fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
        bitio::unpack_bits(&bytes, bytes.len() * 8).map_err(anyhow::Error::from)?
    } else {
        read_ascii_bits(&args.input)?
    };
    let len = params.message_len().map_err(anyhow::Error::from)?;
    let t = bits.len().div_ceil(len).max(1);
    if let Some(want) = args.t {
        if want != t {
            return Err(CliError::Usage(anyhow!(
                "message of {} bits fills {t} segments of {len} message bits, not {want}",
                bits.len()
            )));
        }
    }
    let mut padded = bits.clone();
    padded.extend_from_slice(&vec![0; t * len - bits.len()]);
    let messages: Vec<Message> = padded.chunks(len).map(|c| Message::new(c.into())).collect();
    let stream = params.encode(&messages).map_err(anyhow::Error::from)?;
    let frame = Frame {
        params,
        t: u32::try_from(t).context("too many segments")?,
        payload: stream.bits,
        message_bits: Some(bits.len() as u64),
    };
    let bytes = bitio::write_frame(&frame).map_err(anyhow::Error::from)?;
    fs::write(&args.output, bytes).with_context(|| format!("writing {}", args.output.display()))?;
    println!(
        "encoded {} message bits into {t} segments of {} bits (mode={} k={} a={})",
        bits.len(),
        params.n(),
        params.mode(),
        params.k(),
        params.vt().a()
    );
    Ok(())
}

fn decode(args: DecodeArgs) -> CliResult<()> {
    let raw = fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let (params, t, received, message_bits) = if raw.starts_with(bitio::MAGIC) {
        let f = bitio::read_frame(&raw).map_err(anyhow::Error::from)?;
        (f.params, f.t as usize, f.payload, f.message_bits)
    } else {
        let params = args.code.params()?;
        let t = args.t.ok_or_else(|| anyhow!("raw input needs the segment count -t"))?;
        let text = String::from_utf8(raw).context("raw input is neither a frame nor ASCII bits")?;
        let bits: BitString = text.parse().context("parsing received bits")?;
        (params, t, bits, None)
    };
    let report = params
        .decode(&received, t)
        .map_err(|e| CliError::Failed(anyhow!("decode failed: {e}")))?;
    let mut message: BitString = report
        .messages
        .as_ref()
        .ok_or_else(|| anyhow!("modulus has no systematic encoder"))?
        .iter()
        .flat_map(|m| m.bits().iter().copied())
        .collect::<Vec<_>>()
        .as_slice()
        .into();
    if let Some(m) = message_bits {
        let m = usize::try_from(m).context("message bit count")?;
        if m > message.len() {
            return Err(CliError::Usage(anyhow!("frame claims {m} message bits, payload holds {}", message.len())));
        }
        message = message[..m].into();
    }
    print!("{}", summary(&report, args.format));
    match &args.output {
        Some(path) => {
            let out = if args.binary {
                bitio::pack_bits(&message)
            } else {
                (to_ascii(&message) + "\n").into_bytes()
            };
            fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
        }
        None if args.format == Format::Text => println!("message {}", to_ascii(&message)),
        None => {}
    }
    Ok(())
}

fn summary(report: &DecodeReport, format: Format) -> String {
    let mut s = String::new();
    if format == Format::Csv {
        s.push_str("segment,codeword,message,error,boundary,case\n");
    }
    for (i, cw) in report.codewords.iter().enumerate() {
        let msg = report.messages.as_ref().map(|m| to_ascii(m[i].bits())).unwrap_or_default();
        let boundary = report.absolute_boundaries.get(i).map(|p| p.to_string()).unwrap_or_default();
        let case = report.cases.get(i).copied().unwrap_or("");
        let err = report.per_segment_error[i];
        let _ = match format {
            Format::Csv => writeln!(s, "{},{},{msg},{err},{boundary},{case}", i + 1, to_ascii(cw.bits())),
            Format::Text => writeln!(
                s,
                "segment {}: codeword {} error {err}{}",
                i + 1,
                to_ascii(cw.bits()),
                if boundary.is_empty() { String::new() } else { format!(" ends at {boundary} ({case})") }
            ),
        };
    }
    s
}

fn verify(args: VerifyArgs) -> CliResult<()> {
    let params = args.code.params()?;
    let report = if args.negative_control {
        let vt = *params.vt();
        let tamper = |y: &[u8], t: usize| {
            let mut r = params.decode(y, t)?;
            if y.len() != params.n() * t {
                let current = r.codewords[0].bits().clone();
                let other = vt.members().find(|m| *m != current).expect("code has two members");
                r.codewords[0] = VtCodeword::new(other, &vt)?;
            }
            Ok(r)
        };
        oracle::exhaustive_verify_with(&params, args.t, &tamper)
    } else {
        oracle::exhaustive_verify(&params, args.t)
    }
    .map_err(anyhow::Error::from)?;
    print!("{}", report.to_text());
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed(anyhow!("{} failures", report.failure_count)))
    }
}

fn fuzz(args: FuzzArgs) -> CliResult<()> {
    let params = args.code.params()?;
    if !(0.0..=1.0).contains(&args.prob) {
        return Err(CliError::Usage(anyhow!("--prob must lie in [0, 1]")));
    }
    let report = oracle::sampled_verify(&params, args.t, args.iters, args.seed, args.prob)
        .map_err(anyhow::Error::from)?;
    match args.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Csv => {
            println!("mode,k,a,t,seed,iters,prob,decodes,failures,soundness_violations");
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                params.mode(),
                params.k(),
                params.vt().a(),
                args.t,
                args.seed,
                args.iters,
                args.prob,
                report.decodes,
                report.failure_count,
                report.soundness_violations
            );
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed(anyhow!("{} failures (seed {})", report.failure_count, args.seed)))
    }
}

/// Measured redundancy when the segment length admits a systematic code.
fn measured(mode: Mode, n: usize) -> Option<usize> {
    let k = match mode {
        Mode::Insdel => n.checked_sub(7)?,
        Mode::Edit => n.checked_sub(9)?,
    };
    let params = CodeParams::new(mode, k, None).ok()?;
    let messages = bench::random_messages(&params, params.n(), 0).ok()?;
    let stream = params.encode(&messages).ok()?;
    Some(stream.bits.len() - params.message_len().ok()?)
}

fn table(args: TableArgs) -> CliResult<()> {
    if args.n_min > args.n_max || args.n_min < 10 {
        return Err(CliError::Usage(anyhow!("need 10 <= --n-min <= --n-max")));
    }
    let fmt = |v: Option<usize>| v.map(|r| r.to_string()).unwrap_or_else(|| "-".into());
    match args.format {
        Format::Csv => println!("n,insdel_formula,insdel_measured,edit_formula,edit_measured,prior_insdel_bound"),
        Format::Text => println!(
            "{:>5}  {:>14} {:>8}  {:>15} {:>8}  {:>16}",
            "n", "log2(n-6)+7", "C", "log2(n-9)+10", "C'", "prior log2(n+1)+7"
        ),
    }
    for n in args.n_min..=args.n_max {
        let ins = redundancy_formula(Mode::Insdel, n);
        let edit = redundancy_formula(Mode::Edit, n);
        let prior = ((n + 1) as f64).log2() + 7.0;
        let (mi, me) = (fmt(measured(Mode::Insdel, n)), fmt(measured(Mode::Edit, n)));
        match args.format {
            Format::Csv => println!("{n},{ins:.3},{mi},{edit:.3},{me},{prior:.3}"),
            Format::Text => println!("{n:>5}  {ins:>14.3} {mi:>8}  {edit:>15.3} {me:>8}  {prior:>16.3}"),
        }
    }
    Ok(())
}

fn run_bench(args: BenchArgs) -> CliResult<()> {
    let params = args.code.params()?;
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(CliError::Usage(anyhow!("need 0 < --n-min <= --n-max")));
    }
    let min_time = Duration::from_millis(args.millis);
    let mut sizes = vec![];
    let mut n = args.n_min;
    while n <= args.n_max {
        sizes.push(n);
        n = n.saturating_mul(10);
    }
    if args.format == Format::Csv {
        println!("mode,k,op,load,bits,reps,seconds,bits_per_sec");
    }
    let mut worst = 1.0f64;
    for (op, load) in [("encode", Load::Clean), ("decode", Load::Clean), ("decode", Load::MaxErrors)] {
        let mut rates = vec![];
        for &size in &sizes {
            let m = if op == "encode" {
                bench::measure_encode(&params, size, args.seed, min_time)
            } else {
                bench::measure_decode(&params, size, load, args.seed, min_time)
            }
            .map_err(|e| CliError::Failed(e.into()))?;
            let rate = m.bits_per_sec();
            rates.push(rate);
            match args.format {
                Format::Csv => println!(
                    "{},{},{op},{},{},{},{:.6},{rate:.0}",
                    params.mode(),
                    params.k(),
                    load.as_str(),
                    m.bits,
                    m.reps,
                    m.elapsed.as_secs_f64()
                ),
                Format::Text => println!(
                    "{:<6} {:<10} {:>10} bits  {:>14.0} bits/s",
                    op,
                    load.as_str(),
                    m.bits,
                    rate
                ),
            }
        }
        let (lo, hi) = (rates.iter().cloned().fold(f64::MAX, f64::min), rates.iter().cloned().fold(0.0, f64::max));
        let ratio = hi / lo;
        worst = worst.max(ratio);
        if args.format == Format::Text {
            println!("{op} {}: max/min throughput ratio {ratio:.2}", load.as_str());
        }
    }
    if worst > 2.0 {
        return Err(CliError::Failed(anyhow!("throughput varies by {worst:.2}x across sizes")));
    }
    Ok(())
}
