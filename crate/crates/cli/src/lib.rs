//! `surfaut` command-line front end.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 precondition violation,
//! 1 internal inconsistency between rules.

pub mod document;
pub mod render;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use surfaut_core::blowup::{rational_chain_report, ChainPoint, Stabilizer};
use surfaut_core::classifier::{classify_with, ClassifyError, ClassifyOptions, ReportDetail, MAX_KAPPA_ZERO_INDEX};
use surfaut_core::elliptic::{normalizer_quotient_detailed, BdfDatum, NormalizerOptions, TauClass, TorsionPoint};
use surfaut_core::orbifold::{
    abelianized_orbifold_group, fibre_identification, swap_excluded, OrbifoldSignature,
};

use document::{
    BatchItem, BdfOutput, ChainOutput, ClassifyOutput, CommandOutput, DescriptorFile, OrbifoldOutput, ReportDocument,
    SwapOutput, FORMAT_VERSIONS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "surfaut", version, about = "Component groups of automorphism ladders of compact complex surfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Print SNF witnesses, normalizer elements and chain weights.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a descriptor file, or every *.json file in a directory.
    Classify {
        path: PathBuf,
        /// Worker threads for directories.
        #[arg(long)]
        jobs: Option<usize>,
        /// Fixed torsion level for the hyperelliptic normalizer search.
        #[arg(long)]
        torsion_bound: Option<u64>,
    },
    /// Abelianized orbifold group and the double-fibre swap test.
    Orbifold {
        #[arg(long)]
        genus: u64,
        /// Comma-separated multiplicities, e.g. 2,2,3.
        #[arg(long, value_delimiter = ',')]
        mults: Vec<u64>,
        /// Two 1-based fibre indices.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        swap: Option<Vec<usize>>,
        /// Genus of the base curve for the swap test (defaults to --genus).
        #[arg(long)]
        base_genus: Option<u64>,
    },
    /// Normalizer quotient N_G/G of a hyperelliptic surface.
    Bdf {
        #[arg(long = "type")]
        type_index: u8,
        #[arg(long)]
        curve: TauClass,
        /// 2-torsion translation for type 2, as "x,y" (e.g. "1/2,0").
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        torsion_bound: Option<u64>,
    },
    /// Torus weights along the blow-up chain and the resulting stabilizer.
    BlowupChain {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        point: ChainPoint,
    },
}

/// A failure with its exit code; the message goes to standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PARSE, message: message.into() }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PRECONDITION, message: message.into() }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        let code = match e {
            ClassifyError::Precondition { .. } => EXIT_PRECONDITION,
            ClassifyError::Contradiction { .. } => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Runs the tool; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let (result, code) = execute(&cli);
    match result {
        Ok(output) => {
            let text = match cli.format {
                Format::Json => to_json(&ReportDocument::new(output)),
                Format::Text => render::render(&output, cli.verbose),
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "surfaut: {}", f.message);
            f.code
        }
    }
}

pub fn to_json(doc: &ReportDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> (Result<CommandOutput, Failure>, i32) {
    let single = |r: Result<CommandOutput, Failure>| (r, EXIT_OK);
    match &cli.command {
        Command::Classify { path, jobs, torsion_bound } => {
            let opts = ClassifyOptions { torsion_bound: *torsion_bound };
            if path.is_dir() {
                match classify_dir(path, *jobs, opts, cli.verbose) {
                    Ok(items) => {
                        let code = items.iter().map(|i| i.exit_code).max().unwrap_or(EXIT_OK);
                        (Ok(CommandOutput::ClassifyBatch(items)), code)
                    }
                    Err(f) => (Err(f), EXIT_OK),
                }
            } else {
                single(classify_file(path, opts, cli.verbose).map(CommandOutput::Classify))
            }
        }
        Command::Orbifold { genus, mults, swap, base_genus } => {
            single(cmd_orbifold(*genus, mults, swap.as_deref(), *base_genus, cli.verbose))
        }
        Command::Bdf { type_index, curve, epsilon, torsion_bound } => {
            single(cmd_bdf(*type_index, *curve, epsilon.as_deref(), *torsion_bound, cli.verbose))
        }
        Command::BlowupChain { n, point } => single(Ok(cmd_blowup_chain(*n, *point, cli.verbose))),
    }
}

pub fn parse_descriptor(text: &str) -> Result<DescriptorFile, Failure> {
    let file: DescriptorFile = serde_json::from_str(text).map_err(|e| Failure::parse(format!("parse error: {e}")))?;
    if !FORMAT_VERSIONS.contains(&file.format_version.as_str()) {
        return Err(Failure::parse(format!(
            "unsupported format_version {:?} (supported: {})",
            file.format_version,
            FORMAT_VERSIONS.join(", ")
        )));
    }
    Ok(file)
}

pub fn classify_file(path: &Path, opts: ClassifyOptions, verbose: bool) -> Result<ClassifyOutput, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))?;
    let descriptor = parse_descriptor(&text).map_err(|f| Failure { message: format!("{}: {}", path.display(), f.message), ..f })?;
    let mut report = classify_with(&descriptor.surface, opts).map_err(|e| {
        let f = Failure::from(e);
        Failure { message: format!("{}: {}", path.display(), f.message), ..f }
    })?;
    if !verbose {
        for d in &mut report.details {
            if let ReportDetail::Normalizer(n) = d {
                n.coset_representatives.clear();
            }
        }
    }
    Ok(ClassifyOutput { source: path.display().to_string(), descriptor, report })
}

fn classify_dir(dir: &Path, jobs: Option<usize>, opts: ClassifyOptions, verbose: bool) -> Result<Vec<BatchItem>, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let work = || {
        paths
            .par_iter()
            .map(|p| match classify_file(p, opts, verbose) {
                Ok(o) => BatchItem { source: o.source.clone(), exit_code: EXIT_OK, error: None, output: Some(o) },
                Err(f) => BatchItem {
                    source: p.display().to_string(),
                    exit_code: f.code,
                    error: Some(f.message),
                    output: None,
                },
            })
            .collect::<Vec<_>>()
    };
    let items = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Failure::parse(format!("--jobs: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(items)
}

fn cmd_orbifold(
    genus: u64,
    mults: &[u64],
    swap: Option<&[usize]>,
    base_genus: Option<u64>,
    verbose: bool,
) -> Result<CommandOutput, Failure> {
    let sig = OrbifoldSignature::new(genus, mults.to_vec()).map_err(|e| Failure::parse(e.to_string()))?;
    let ab = abelianized_orbifold_group(&sig);
    let swap = match swap {
        Some(&[i, j]) => {
            let b = base_genus.unwrap_or(genus);
            let verdict = swap_excluded(&sig, b, i, j).map_err(|e| Failure::parse(e.to_string()))?;
            let id = fibre_identification(&sig, i, j).map_err(|e| Failure::parse(e.to_string()))?;
            Some(SwapOutput {
                i,
                j,
                base_genus: b,
                verdict,
                classes_identified: id.identified(),
                identification: verbose.then_some(id),
            })
        }
        Some(_) => return Err(Failure::parse("--swap takes two indices")),
        None => None,
    };
    Ok(CommandOutput::Orbifold(OrbifoldOutput {
        signature: sig,
        abelianization_text: ab.to_string(),
        abelianization: ab,
        swap,
    }))
}

fn parse_fraction(s: &str) -> Option<(i64, i64)> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => Some((p.trim().parse().ok()?, q.trim().parse().ok()?)).filter(|&(_, q)| q != 0),
        None => Some((s.parse().ok()?, 1)),
    }
}

pub fn parse_point(s: &str) -> Option<TorsionPoint> {
    let (x, y) = s.split_once(',')?;
    let (a, b) = parse_fraction(x)?;
    let (c, d) = parse_fraction(y)?;
    Some(TorsionPoint::from_fractions(a, b, c, d))
}

fn cmd_bdf(
    type_index: u8,
    curve: TauClass,
    epsilon: Option<&str>,
    torsion_bound: Option<u64>,
    verbose: bool,
) -> Result<CommandOutput, Failure> {
    let epsilon = match epsilon {
        Some(s) => Some(parse_point(s).ok_or_else(|| Failure::parse(format!("--epsilon: cannot parse {s:?}")))?),
        None => None,
    };
    let datum = BdfDatum::standard(type_index, curve, epsilon).map_err(|e| Failure::precondition(e.to_string()))?;
    let report = normalizer_quotient_detailed(&datum, NormalizerOptions { torsion_bound })
        .map_err(|e| Failure::precondition(e.to_string()))?;
    Ok(CommandOutput::Bdf(BdfOutput {
        type_index,
        curve,
        epsilon,
        quotient_text: report.quotient.to_string(),
        order: report.quotient.order,
        maximum_attained: report.quotient.order == MAX_KAPPA_ZERO_INDEX,
        quotient: report.quotient.clone(),
        normalizer: verbose.then_some(report),
    }))
}

fn cmd_blowup_chain(n: u64, point: ChainPoint, verbose: bool) -> CommandOutput {
    let r = rational_chain_report(n, point);
    let conclusion = match r.aut_q {
        Stabilizer::Mu(1) => "Aut_Q = Aut_* trivial".to_string(),
        Stabilizer::Mu(m) => format!("Aut_Q = Aut_* = Z/{m}"),
        Stabilizer::FullTorus => "Aut_Q = Aut_* contains the full torus".to_string(),
    };
    CommandOutput::BlowupChain(ChainOutput {
        n,
        point,
        final_weights: r.final_weights,
        stabilizer: r.aut_q,
        conclusion,
        weights: verbose.then_some(r.weights),
    })
}
