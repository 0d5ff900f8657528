//! Command-line front end. Exit codes: 0 success, 1 mathematical failure,
//! 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{eval_lie_poly, graded_component_with_limits, Algebra, Component, ComponentLimits};
use crate::cache::{ComponentCache, CACHE_DIR_ENV};
use crate::error::{Error, Result};
use crate::lie::{LiePoly, SpanKind};
use crate::poly::format_rational;
use crate::relations::{
    two_six_two, odd_to_hoffman, regression_suite_with, synthesize_depth_side, verify_dictionary_entry,
    verify_relation_file, HoffmanTarget, RelationCertificate, RelationFile,
};
use crate::series::{
    compare_dimensions_with, comparison_csv, predicted_dimensions, table_csv, uneven_bk_table, DEFAULT_S_MAX,
    DEFAULT_T_MAX,
};
use crate::words::Symbol;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct Config {
    /// Largest weight any command may touch.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    pub weight_max: u32,
    /// Largest Lie degree any command may touch.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree_max: u64,
    /// Component cache directory; caching is off when unset.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Config {
    fn limits(&self) -> ComponentLimits {
        ComponentLimits { max_weight: self.weight_max, max_degree: self.degree_max as usize, ..ComponentLimits::default() }
    }

    fn check(&self, weight: u32, degree: usize) -> Result<()> {
        if weight > self.weight_max || degree as u64 > self.degree_max {
            return Err(Error::ResourceLimit(format!(
                "({weight}, {degree}) exceeds configured cutoffs weight <= {}, degree <= {}",
                self.weight_max, self.degree_max
            )));
        }
        Ok(())
    }

    fn component(&self, algebra: Algebra, weight: u32, degree: usize, kind: SpanKind, err: &mut dyn Write) -> Result<Component> {
        self.check(weight, degree)?;
        match &self.cache_dir {
            Some(dir) => {
                let (c, outcome) = ComponentCache::new(dir).get_or_compute(algebra, weight, degree, kind)?;
                if outcome == crate::cache::CacheOutcome::Recomputed {
                    let _ = writeln!(err, "warning: corrupt cache entry for ({algebra}, {weight}, {degree}) recomputed");
                }
                Ok(c)
            }
            None => graded_component_with_limits(algebra, weight, degree, kind, &self.limits()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "zetalie", version, about = "Exact computations in the depth, block and even graded Lie algebras of motivic multiple zeta values")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// Coefficients of 1/(1 − O(s)t + S(s)t²).
    UnevenBk,
    /// Predicted Lie dimensions against computed ranks.
    Compare,
    /// Predicted Lie dimensions only.
    Lie,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a bracket word or Lie polynomial such as "[3,[5,7]]".
    Bracket {
        #[arg(long, default_value = "depth")]
        algebra: Algebra,
        expr: String,
    },
    /// Verify a relation file and print its certificate.
    Verify { file: PathBuf },
    /// Verify the (2,6,2) relation for given n and a.
    TwoSixTwo {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u32,
    },
    /// Solve for a totally odd depth side of a relation file's block side.
    Synth { file: PathBuf },
    /// Map a totally odd index to its almost-Hoffman counterpart.
    Dict {
        zeta: String,
        /// Also certify the entry.
        #[arg(long)]
        verify: bool,
    },
    /// Print dimension tables as CSV.
    Table {
        #[arg(long, value_enum)]
        kind: TableKind,
        #[arg(long, default_value = "even")]
        algebra: Algebra,
        #[arg(long, default_value_t = DEFAULT_S_MAX)]
        smax: u32,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        tmax: usize,
    },
    /// Rank and left kernel of one graded component.
    Component {
        #[arg(long)]
        algebra: Algebra,
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "lyndon")]
        span: SpanKind,
    },
    /// Check every built-in relation.
    Regress {
        /// Also check the corrected forms of relations that fail as stated.
        #[arg(long)]
        with_corrected: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Precondition(_)
        | Error::InvalidBlocks { .. }
        | Error::EmptyWord
        | Error::ZeroGenerator(_)
        | Error::MixedGrading(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn certificate_exit(out: &mut dyn Write, err: &mut dyn Write, cert: &RelationCertificate) -> Result<i32> {
    print_json(out, cert)?;
    if cert.is_verified() {
        return Ok(EXIT_OK);
    }
    if let Some(w) = &cert.offending_word {
        writeln!(err, "relation fails on bracket word {w}")?;
    }
    Ok(EXIT_FAILURE)
}

fn read_relation(file: &PathBuf) -> Result<RelationFile> {
    Ok(serde_json::from_str(&fs::read_to_string(file)?)?)
}

#[derive(Serialize)]
struct ComponentReport {
    algebra: String,
    weight: u32,
    degree: usize,
    span: String,
    words: Vec<String>,
    rank: usize,
    left_nullspace: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct DictionaryReport {
    source: String,
    target: String,
    scale: String,
    reduced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<RelationCertificate>,
}

#[derive(Serialize)]
struct SynthesisReport {
    depth_side: String,
    certificate: RelationCertificate,
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = &cli.config;
    let format = cfg.format;
    match &cli.command {
        Command::Bracket { algebra, expr } => {
            let lp: LiePoly = expr.parse()?;
            let (w, r) = lp.grading()?;
            cfg.check(w, r)?;
            let p = eval_lie_poly(&lp, *algebra)?;
            match format {
                Some(OutputFormat::Json) => print_json(out, &p.to_json())?,
                _ => writeln!(out, "{p}")?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { file } => {
            let rel = read_relation(file)?;
            cfg.check(rel.weight, rel.lie_degree)?;
            certificate_exit(out, err, &verify_relation_file(&rel)?)
        }
        Command::TwoSixTwo { n, a } => {
            cfg.check(2 * n + 6, 4)?;
            certificate_exit(out, err, &two_six_two(*n, *a)?)
        }
        Command::Synth { file } => {
            let rel = read_relation(file)?;
            cfg.check(rel.weight, rel.lie_degree)?;
            let (rb, _) = rel.sides()?;
            let (rd, certificate) = synthesize_depth_side(&rb, rel.lie_degree, rel.weight)?;
            let verified = certificate.is_verified();
            print_json(out, &SynthesisReport { depth_side: rd.to_string(), certificate })?;
            Ok(if verified { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Dict { zeta, verify } => {
            let z = match zeta.parse::<Symbol>()? {
                Symbol::Zeta(z) => z,
                other => return Err(Error::Precondition(format!("{other} is not a zeta index"))),
            };
            let entry = odd_to_hoffman(&z)?;
            let reduced = matches!(entry.target, HoffmanTarget::Reduced(_));
            let certificate = if *verify { Some(verify_dictionary_entry(&entry)?) } else { None };
            let ok = certificate.as_ref().is_none_or(RelationCertificate::is_verified);
            match format {
                Some(OutputFormat::Json) => print_json(
                    out,
                    &DictionaryReport {
                        source: z.to_string(),
                        target: entry.target.to_string(),
                        scale: format_rational(&entry.scale),
                        reduced,
                        certificate,
                    },
                )?,
                _ => {
                    writeln!(out, "{entry}")?;
                    if *verify {
                        writeln!(out, "{}", if ok { "verified" } else { "failed" })?;
                    }
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Table { kind, algebra, smax, tmax } => {
            match kind {
                TableKind::UnevenBk => write!(out, "{}", table_csv(&uneven_bk_table(*smax, *tmax)?, 0))?,
                TableKind::Lie => write!(out, "{}", table_csv(&predicted_dimensions(*algebra, *smax, *tmax)?, 1))?,
                TableKind::Compare => {
                    let rows = compare_dimensions_with(*algebra, *smax, *tmax, |w, r| {
                        Ok(cfg.component(*algebra, w, r, SpanKind::Lyndon, err)?.rank())
                    })?;
                    match format {
                        Some(OutputFormat::Json) => print_json(out, &rows)?,
                        _ => write!(out, "{}", comparison_csv(&rows))?,
                    }
                    if rows.iter().any(|r| r.mismatch) {
                        return Ok(EXIT_FAILURE);
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Component { algebra, weight, degree, span } => {
            let c = cfg.component(*algebra, *weight, *degree, *span, err)?;
            let report = ComponentReport {
                algebra: algebra.to_string(),
                weight: *weight,
                degree: *degree,
                span: span.tag().into(),
                words: c.words.iter().map(ToString::to_string).collect(),
                rank: c.rank(),
                left_nullspace: c.left_nullspace().iter().map(|v| v.iter().map(format_rational).collect()).collect(),
            };
            match format {
                Some(OutputFormat::Csv) => write!(out, "{}", c.matrix.to_csv())?,
                _ => print_json(out, &report)?,
            }
            Ok(EXIT_OK)
        }
        Command::Regress { with_corrected } => {
            let report = regression_suite_with(*with_corrected);
            match format {
                Some(OutputFormat::Json) => print_json(out, &report)?,
                _ => {
                    for e in &report.entries {
                        writeln!(out, "{} {}: {}", if e.passed { "PASS" } else { "FAIL" }, e.name, e.detail)?;
                    }
                }
            }
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    if let Some(n) = cli.config.threads {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("zetalie").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bracket_and_errors() {
        let (code, out, _) = call(&["bracket", "--algebra", "depth", "[3,9] - 3*[5,7]"]);
        assert_eq!((code, out.trim()), (0, "0"));
        let (code, _, err) = call(&["bracket", "[3,9"]);
        assert_eq!(code, 2);
        assert!(err.contains("error"));
        let (code, ..) = call(&["bracket", "--algebra", "blocky", "[3,9]"]);
        assert_eq!(code, 2);
        let (code, ..) = call(&["--weight-max", "10", "bracket", "[3,9]"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn dictionary_output() {
        assert_eq!(call(&["dict", "z:{3,5}"]).1.trim(), "1/4 * z:{l=1;3,2,2}");
        assert_eq!(call(&["dict", "z:{1,5}"]).1.trim(), "-1/4 * z:{l=2;2,2}");
        assert_eq!(call(&["dict", "z:{2,3}"]).0, 2);
        let (code, out, _) = call(&["dict", "--verify", "z:{3,3,5}"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("verified\n"));
    }

    #[test]
    fn two_six_two_and_component() {
        let (code, out, _) = call(&["two-six-two", "--n", "2", "--a", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"status\": \"verified\""));
        assert_eq!(call(&["two-six-two", "--n", "1", "--a", "1"]).0, 2);
        let (code, out, _) = call(&["component", "--algebra", "even", "--weight", "12", "--degree", "2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rank"], 1);
        assert_eq!(v["left_nullspace"], serde_json::json!([["1", "-3"]]));
    }

    #[test]
    fn tables() {
        let (code, out, _) = call(&["table", "--kind", "uneven-bk", "--smax", "20", "--tmax", "3"]);
        assert_eq!(code, 0);
        let row12: Vec<&str> = out.lines().find(|l| l.starts_with("12,")).unwrap().split(',').collect();
        assert_eq!(row12[3], "3");
        let (code, out, _) = call(&["table", "--kind", "compare", "--algebra", "block", "--smax", "15", "--tmax", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.lines().skip(1).all(|l| l.ends_with(",0")));
    }
}
