//! Command-line driver. Exit codes: 0 success, 1 domain failure (not
//! realizable, not certified, table discrepancy), 2 usage or input error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::constants::{
    paper_runner_up, paper_smp_pair, perturbed_b0, PAPER_A0, PAPER_B0, PAPER_BALANCING_RATIO,
};
use crate::error::Error;
use crate::fricke::{dedup_isospectral, fricke_polynomial, reduced_fricke};
use crate::mat2::{
    dominant_real_eigenvalue, evaluate_word, jsr_bounds, normalized_spectral_radius, realize, Mat2,
    Tuple5,
};
use crate::polytope::{certify, certify_with, Certificate, CertifyOptions, Verdict};
use crate::search::{default_targets, reproduce_table, run_search, SearchConfig};
use crate::words::{chiral_fraction, chiral_pairs, lyndon_words, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "jsrforge", version, about = "Spectrum-maximizing products of 2x2 matrix pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fricke trace polynomial of a word, e.g. `a2bab2`
    Fricke {
        word: Word,
        /// Print the reduced polynomial (u = v = 1)
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        json: bool,
    },
    /// Lyndon words, isospectral classes, chiral pairs and chiral fractions
    Words {
        #[arg(long, default_value_t = 9)]
        max_len: usize,
        /// List chiral pairs instead of Lyndon words
        #[arg(long)]
        chiral: bool,
        /// Keep one word per Fricke polynomial
        #[arg(long)]
        dedup: bool,
        /// Print only the count
        #[arg(long)]
        count: bool,
        /// Print the chiral fraction of Lyndon words of this length
        #[arg(long)]
        fraction: Option<usize>,
    },
    /// A real pair with invariants `x,y,z,u,v` (tr A, tr B, tr AB, det A, det B)
    Realize {
        #[arg(long, value_parser = parse_tuple, allow_hyphen_values = true)]
        tuple: Tuple5,
    },
    /// Lower and upper bounds on the joint spectral radius from products of length k
    Bounds {
        #[arg(long)]
        pair: PathBuf,
        #[arg(short = 'k', default_value_t = 8)]
        k: usize,
    },
    /// Certify candidate spectrum-maximizing products
    Certify {
        #[arg(long)]
        pair: PathBuf,
        /// Comma-separated candidate words
        #[arg(long, value_delimiter = ',', required = true)]
        smp: Vec<Word>,
        /// Fixed balancing ratio of the second candidate (skips the search)
        #[arg(long)]
        ratio: Option<f64>,
    },
    /// Randomized trace-space search for chiral spectrum-maximizing pairs
    Search {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 14)]
        max_len: usize,
        #[arg(long, default_value_t = 9)]
        targets_len: usize,
        /// CSV output file (stdout if absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Screen, realize and certify the rows of the table of chiral examples
    ReproduceTable {
        #[arg(long)]
        json: bool,
    },
    /// Certify the explicit example pair
    PaperExample {
        /// Shift B's (2,1) entry and certify the runner-up product instead
        #[arg(long, allow_hyphen_values = true)]
        perturb_b21: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

/// `{"A": [[..], [..]], "B": [[..], [..]]}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    #[serde(rename = "A")]
    pub a: Mat2,
    #[serde(rename = "B")]
    pub b: Mat2,
}

impl PairFile {
    pub fn read(path: &Path) -> Result<PairFile, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let pair: PairFile =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if !(pair.a.is_finite() && pair.b.is_finite()) {
            return Err(format!("{}: non-finite matrix entries", path.display()));
        }
        Ok(pair)
    }
}

fn parse_tuple(s: &str) -> Result<Tuple5, String> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match vals[..] {
        [x, y, z, u, v] if vals.iter().all(|a| a.is_finite()) => Ok(Tuple5 { x, y, z, u, v }),
        _ => Err("expected five finite numbers x,y,z,u,v".into()),
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidArgument(_) | Error::WordParse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "failed: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Fricke { word, reduced, json } => cmd_fricke(&word, reduced, json, out),
        Command::Words { max_len, chiral, dedup, count, fraction } => {
            cmd_words(max_len, chiral, dedup, count, fraction, out)
        }
        Command::Realize { tuple } => {
            let (a, b) = realize(&tuple)?;
            writeln!(out, "{}", to_json(&PairFile { a, b }))?;
            Ok(EXIT_OK)
        }
        Command::Bounds { pair, k } => {
            let p = PairFile::read(&pair).map_err(Failure::Usage)?;
            let bounds = jsr_bounds(&p.a, &p.b, k)?;
            writeln!(out, "{}", to_json(&bounds))?;
            Ok(EXIT_OK)
        }
        Command::Certify { pair, smp, ratio } => {
            let p = PairFile::read(&pair).map_err(Failure::Usage)?;
            let opts = match ratio {
                Some(r) if r.is_finite() && r > 0.0 => {
                    CertifyOptions { ratios: Some(vec![1.0, r]), ..Default::default() }
                }
                Some(r) => return Err(Failure::Usage(format!("bad ratio {r}"))),
                None => CertifyOptions::default(),
            };
            if ratio.is_some() && smp.len() != 2 {
                return Err(Failure::Usage("--ratio needs exactly two candidates".into()));
            }
            let cert = certify_with(&p.a, &p.b, &smp, &opts);
            writeln!(out, "{}", cert.to_json())?;
            Ok(verdict_code(&cert.verdict))
        }
        Command::Search { samples, seed, max_len, targets_len, out: path } => {
            cmd_search(samples, seed, max_len, targets_len, path, out, err)
        }
        Command::ReproduceTable { json } => {
            let report = reproduce_table()?;
            if json {
                writeln!(out, "{}", to_json(&report))?;
            } else {
                write!(out, "{report}")?;
            }
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::PaperExample { perturb_b21, json } => cmd_paper_example(perturb_b21, json, out, err),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.is_certified() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn cmd_fricke(word: &Word, reduced: bool, json: bool, out: &mut dyn Write) -> Outcome {
    let p = if reduced { reduced_fricke(word) } else { fricke_polynomial(word) };
    if json {
        #[derive(Serialize)]
        struct Doc<'a> {
            word: &'a Word,
            reduced: bool,
            polynomial: String,
        }
        writeln!(out, "{}", to_json(&Doc { word, reduced, polynomial: p.to_string() }))?;
    } else {
        writeln!(out, "{p}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_words(
    max_len: usize,
    chiral: bool,
    dedup: bool,
    count: bool,
    fraction: Option<usize>,
    out: &mut dyn Write,
) -> Outcome {
    if let Some(len) = fraction {
        let f = chiral_fraction(len)?;
        writeln!(out, "{} ({}/{})", *f.numer() as f64 / *f.denom() as f64, f.numer(), f.denom())?;
        return Ok(EXIT_OK);
    }
    if chiral {
        let pairs = chiral_pairs(max_len)?;
        if count {
            writeln!(out, "{}", pairs.len())?;
        } else {
            for (w, m) in pairs {
                writeln!(out, "{} {}", w.to_exponent_string(), m.to_exponent_string())?;
            }
        }
        return Ok(EXIT_OK);
    }
    let mut words = lyndon_words(max_len)?;
    if dedup {
        words = dedup_isospectral(&words);
    }
    if count {
        writeln!(out, "{}", words.len())?;
    } else {
        for w in words {
            writeln!(out, "{w}")?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_search(
    samples: u64,
    seed: u64,
    max_len: usize,
    targets_len: usize,
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let cfg = SearchConfig {
        n_samples: samples,
        max_word_len: max_len,
        target_chirals_max_len: targets_len,
        seed,
        ..Default::default()
    };
    cfg.validate()?;
    let report = run_search(&cfg, &default_targets(targets_len)?)?;
    match path {
        Some(p) => {
            let f = File::create(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            report.write_csv(BufWriter::new(f))?;
        }
        None => report.write_csv(&mut *out)?,
    }
    writeln!(
        err,
        "samples {} realizable {} screened {} certified {}",
        report.samples,
        report.realizable,
        report.screened(),
        report.certified()
    )?;
    Ok(EXIT_OK)
}

/// The explicit example certified with the published balancing ratio.
pub fn paper_example_certificate() -> Certificate {
    let opts = CertifyOptions { ratios: Some(vec![1.0, PAPER_BALANCING_RATIO]), ..Default::default() };
    certify_with(&PAPER_A0, &PAPER_B0, &paper_smp_pair(), &opts)
}

fn summarize(cert: &Certificate, out: &mut dyn Write) -> std::io::Result<()> {
    let words: Vec<String> = cert.smp_words.iter().map(|w| w.to_exponent_string()).collect();
    writeln!(out, "candidates        {}", words.join(", "))?;
    writeln!(out, "verdict           {}", match &cert.verdict {
        Verdict::CertifiedUniquePair => "certified-unique-pair".to_string(),
        Verdict::Certified => "certified".to_string(),
        Verdict::Failed { reason } => format!("failed ({reason})"),
    })?;
    writeln!(out, "rescale factor    {}", cert.rescale_factor)?;
    if cert.verdict.is_certified() {
        writeln!(out, "jsr (rescaled)    {}", cert.jsr.unwrap_or(f64::NAN))?;
        writeln!(out, "balancing ratio   {}", cert.balancing_ratio)?;
        writeln!(out, "vertices          {}", cert.vertex_count())?;
        if let Some(m) = cert.min_interior_margin {
            writeln!(out, "min margin        {m:.4e}")?;
        }
        if let Some(a) = cert.max_interior_angle_deg {
            writeln!(out, "max angle (deg)   {a:.3}")?;
        }
    }
    Ok(())
}

fn cmd_paper_example(perturb: Option<f64>, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if let Some(shift) = perturb {
        if !shift.is_finite() {
            return Err(Failure::Usage(format!("bad shift {shift}")));
        }
        let b = perturbed_b0(shift);
        let pair = certify(&PAPER_A0, &b, &paper_smp_pair());
        let single = certify(&PAPER_A0, &b, &[paper_runner_up()]);
        if json {
            writeln!(out, "{}", single.to_json())?;
        } else {
            writeln!(out, "B(2,1) shifted by {shift}")?;
            summarize(&pair, out)?;
            writeln!(out)?;
            summarize(&single, out)?;
        }
        if pair.verdict.is_certified() {
            writeln!(err, "the chiral pair still certifies after the shift")?;
        }
        return Ok(verdict_code(&single.verdict));
    }
    let cert = paper_example_certificate();
    if json {
        writeln!(out, "{}", cert.to_json())?;
    } else {
        let p = evaluate_word(&paper_smp_pair()[0], &PAPER_A0, &PAPER_B0);
        if let Some(l) = dominant_real_eigenvalue(&p) {
            writeln!(out, "dominant eigenvalue of A0^2 B0 A0 B0^2   {l:.6}")?;
        }
        let f = cert.rescale_factor;
        let runner = normalized_spectral_radius(&paper_runner_up(), &PAPER_A0, &PAPER_B0) / f;
        writeln!(out, "normalized rho of A^3 B A^2 B            {runner:.6}")?;
        summarize(&cert, out)?;
    }
    if cert.verdict == Verdict::CertifiedUniquePair {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_FAILURE)
    }
}
