//! Batch front end: every subcommand reads plain text, writes plain text,
//! and is deterministic given identical inputs and seeds. Exit codes:
//! 2 for usage errors, 1 for domain errors, 0 otherwise.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::NonEmptyStringValueParser;
use clap::{CommandFactory, Parser, Subcommand};

use compreco::cyclotomic::en_bounds;
use compreco::interleave::{crlcnf_pair, lower_bound_factors, lower_bound_witness};
use compreco::oracle::{ell_statistics, enumerate_classes_capped, DEFAULT_CAP};
use compreco::poly::equicomposable_poly;
use compreco::reconstruct::{reconstruct, reconstruct_all};
use compreco::{Alphabet, CompositionMultiset, Str};

#[derive(Parser)]
#[command(name = "compreco", version, about = "Composition-multiset toolkit", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the composition multiset of a string as a multiset file
    Gen {
        /// Input string; its multiset covers all contiguous substrings
        #[arg(value_parser = NonEmptyStringValueParser::new())]
        string: String,
        /// Alphabet symbols in order; default is the string's own symbols, sorted
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Recover the strings generating a multiset file (stdin or FILE)
    Reconstruct {
        /// Multiset file; stdin when omitted
        file: Option<PathBuf>,
        /// Maximum number of two-way guesses allowed on one search path
        #[arg(long, default_value_t = 0, conflicts_with = "all")]
        budget: usize,
        /// Deepen the guess budget until the full class is found
        #[arg(long)]
        all: bool,
    },
    /// Group all strings of length n into equicomposability classes
    Enumerate {
        /// String length to enumerate
        #[arg(long)]
        n: usize,
        /// Alphabet symbols in order
        #[arg(long, default_value = "01")]
        alphabet: String,
        /// Maximum number of strings to enumerate
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Print class-size bounds for length n from the factorization of n+1
    Bounds {
        /// String length the bounds apply to
        #[arg(long)]
        n: u64,
    },
    /// Construct families of distinct strings sharing one multiset
    Confuse {
        /// Build the maximal reversal family of interleaved factors at this length
        #[arg(long, conflicts_with_all = ["crlcnf", "core", "seps", "parts"])]
        length: Option<usize>,
        /// Build a two-string pair by interleaving a core into separated parts
        #[arg(long, requires = "core", requires = "parts")]
        crlcnf: bool,
        /// Core string interleaved into every part (reversed in the second output)
        #[arg(long, requires = "crlcnf")]
        core: Option<String>,
        /// Separator symbols, one per junction between parts
        #[arg(long, default_value = "", requires = "crlcnf")]
        seps: String,
        /// Part strings; all must share one symbol composition
        #[arg(requires = "crlcnf")]
        parts: Vec<String>,
    },
    /// Sample the distribution of the guess count over random strings
    Stats {
        /// Length of each sampled string
        #[arg(long)]
        n: usize,
        /// Alphabet size (symbols 0-9 then a-z)
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Number of sampled strings
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Generator seed; trial t uses stream t
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert a binary multiset file (stdin or FILE) to turnpike distances
    Turnpike {
        /// Multiset file; stdin when omitted
        file: Option<PathBuf>,
    },
    /// Cross-check multiset equality against polynomial-product equality
    Verify {
        /// String file, one string per line; all pairs are compared
        file: PathBuf,
        /// Alphabet symbols in order; default is the union of all lines, sorted
        #[arg(long)]
        alphabet: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match run(cli.command, &mut out).and_then(|()| out.flush().map_err(|e| e.to_string())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<(), String> {
    match command {
        Command::Gen { string, alphabet } => {
            let s = parse_with(&string, alphabet.as_deref())?;
            write!(out, "{}", CompositionMultiset::of(&s).to_text()).map_err(fmt_io)
        }
        Command::Reconstruct { file, budget, all } => {
            let text = read_input(file.as_deref())?;
            let ms = CompositionMultiset::parse(&text).map_err(|e| e.to_string())?;
            let found = if all { reconstruct_all(&ms) } else { reconstruct(&ms, budget) }
                .map_err(|e| e.to_string())?;
            for s in found {
                writeln!(out, "{s}").map_err(fmt_io)?;
            }
            Ok(())
        }
        Command::Enumerate { n, alphabet, cap } => {
            let alpha = Alphabet::from_text(&alphabet).map_err(|e| e.to_string())?;
            let table = enumerate_classes_capped(n, &alpha, cap).map_err(|e| e.to_string())?;
            writeln!(
                out,
                "# n={} alphabet={} classes={} e_n={}",
                table.n,
                table.alphabet,
                table.classes.len(),
                table.e_n
            )
            .map_err(fmt_io)?;
            for class in &table.classes {
                write!(out, "{}\t", class.len()).map_err(fmt_io)?;
                for (i, s) in class.iter().enumerate() {
                    let sep = if i == 0 { "" } else { " " };
                    write!(out, "{sep}{s}").map_err(fmt_io)?;
                }
                writeln!(out).map_err(fmt_io)?;
            }
            Ok(())
        }
        Command::Bounds { n } => {
            let report = en_bounds(n);
            let factored = render_signature(&report.prime_signature);
            writeln!(out, "length n       {n}").map_err(fmt_io)?;
            writeln!(out, "n + 1          {} = {factored}", n + 1).map_err(fmt_io)?;
            writeln!(out, "divisor count  {}", report.divisor_count).map_err(fmt_io)?;
            writeln!(out, "lower bound    {}", report.lower).map_err(fmt_io)?;
            writeln!(out, "upper bounds   {} (power of two), {:.6} (polynomial)",
                report.upper_pow2, report.upper_poly)
            .map_err(fmt_io)?;
            let exact = match &report.exact {
                Some(v) => v.to_string(),
                None => "unknown".into(),
            };
            writeln!(out, "exact value    {exact}").map_err(fmt_io)?;
            writeln!(
                out,
                "n={n} lower={} upper_pow2={} upper_poly={:.6} divisors={} exact={exact}",
                report.lower, report.upper_pow2, report.upper_poly, report.divisor_count
            )
            .map_err(fmt_io)
        }
        Command::Confuse { length, crlcnf, core, seps, parts } => {
            confuse(length, crlcnf, core, seps, parts, out)
        }
        Command::Stats { n, k, trials, seed } => {
            if !(2..=36).contains(&k) {
                usage_exit("--k must be between 2 and 36");
            }
            if n < 2 {
                usage_exit("--n must be at least 2");
            }
            if trials == 0 {
                usage_exit("--trials must be positive");
            }
            let d = ell_statistics(n, k, trials, seed);
            writeln!(
                out,
                "# n={} k={} trials={} seed={} rng={} p_hat={:.6} mean={:.6}",
                d.n,
                d.k,
                d.trials,
                d.seed,
                d.rng,
                d.p_hat(),
                d.mean()
            )
            .map_err(fmt_io)?;
            for (ell, count) in &d.histogram {
                writeln!(out, "{ell}\t{count}").map_err(fmt_io)?;
            }
            Ok(())
        }
        Command::Turnpike { file } => {
            let text = read_input(file.as_deref())?;
            let ms = CompositionMultiset::parse(&text).map_err(|e| e.to_string())?;
            for d in ms.to_turnpike().map_err(|e| e.to_string())? {
                writeln!(out, "{d}").map_err(fmt_io)?;
            }
            Ok(())
        }
        Command::Verify { file, alphabet } => verify(&file, alphabet.as_deref(), out),
    }
}

/// Parses a string over the given alphabet text, or over its own symbols.
fn parse_with(text: &str, alphabet: Option<&str>) -> Result<Str, String> {
    let alpha = match alphabet {
        Some(a) => Alphabet::from_text(a),
        None => Alphabet::inferred(text),
    }
    .map_err(|e| e.to_string())?;
    Str::parse(text, &alpha).map_err(|e| e.to_string())
}

fn read_input(file: Option<&std::path::Path>) -> Result<String, String> {
    match file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("reading {}: {e}", path.display())),
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| format!("reading stdin: {e}"))?;
            Ok(text)
        }
    }
}

fn fmt_io(e: io::Error) -> String {
    format!("writing output: {e}")
}

fn render_signature(signature: &[(u64, u32)]) -> String {
    if signature.is_empty() {
        return "1".into();
    }
    signature
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn usage_exit(message: &str) -> ! {
    Cli::command().error(clap::error::ErrorKind::InvalidValue, message).exit()
}

fn confuse(
    length: Option<usize>,
    crlcnf: bool,
    core: Option<String>,
    seps: String,
    parts: Vec<String>,
    out: &mut impl Write,
) -> Result<(), String> {
    if crlcnf {
        let core = core.expect("clap enforces --core with --crlcnf");
        let mut union = parts.concat();
        union.push_str(&core);
        union.push_str(&seps);
        let alpha = Alphabet::inferred(&union).map_err(|e| e.to_string())?;
        let parts: Vec<Str> = parts
            .iter()
            .map(|p| Str::parse(p, &alpha))
            .collect::<compreco::Result<_>>()
            .map_err(|e| e.to_string())?;
        let core = Str::parse(&core, &alpha).map_err(|e| e.to_string())?;
        let seps = Str::parse(&seps, &alpha).map_err(|e| e.to_string())?;
        let (left, right) = crlcnf_pair(&parts, &core, &seps).map_err(|e| e.to_string())?;
        writeln!(out, "{left}").map_err(fmt_io)?;
        writeln!(out, "{right}").map_err(fmt_io)?;
        return Ok(());
    }
    let Some(n) = length else {
        usage_exit("confuse needs either --length or --crlcnf");
    };
    if n == 0 {
        usage_exit("--length must be positive");
    }
    let factors = lower_bound_factors(n);
    let family = lower_bound_witness(n);
    write!(out, "# n={n} size={} factors=", family.len()).map_err(fmt_io)?;
    for (i, f) in factors.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        write!(out, "{sep}{f}").map_err(fmt_io)?;
    }
    writeln!(out).map_err(fmt_io)?;
    for s in family {
        writeln!(out, "{s}").map_err(fmt_io)?;
    }
    Ok(())
}

/// Compares, over all pairs of lines, multiset equality against the
/// polynomial-product criterion; unequal lengths fail both sides.
fn verify(
    path: &std::path::Path,
    alphabet: Option<&str>,
    out: &mut impl Write,
) -> Result<(), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("reading {}: {e}", path.display()))?;
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let alpha = match alphabet {
        Some(a) => Alphabet::from_text(a),
        None => Alphabet::inferred(&lines.concat()),
    }
    .map_err(|e| e.to_string())?;
    let strings: Vec<Str> = lines
        .iter()
        .map(|l| Str::parse(l, &alpha))
        .collect::<compreco::Result<_>>()
        .map_err(|e| e.to_string())?;
    let multisets: Vec<CompositionMultiset> =
        strings.iter().map(CompositionMultiset::of).collect();
    let mut pairs = 0u64;
    let mut disagreements = 0u64;
    for i in 0..strings.len() {
        for j in i + 1..strings.len() {
            pairs += 1;
            let by_multiset =
                strings[i].len() == strings[j].len() && multisets[i] == multisets[j];
            let by_poly = strings[i].len() == strings[j].len()
                && equicomposable_poly(&strings[i], &strings[j]).map_err(|e| e.to_string())?;
            if by_multiset != by_poly {
                disagreements += 1;
                writeln!(
                    out,
                    "disagree: {} {} multiset={by_multiset} polynomial={by_poly}",
                    strings[i], strings[j]
                )
                .map_err(fmt_io)?;
            }
        }
    }
    writeln!(out, "pairs checked: {pairs}").map_err(fmt_io)?;
    writeln!(out, "disagreements: {disagreements}").map_err(fmt_io)?;
    if disagreements > 0 {
        return Err(format!("{disagreements} pairs disagree"));
    }
    Ok(())
}
