//! `walg` command dispatch. [`run`] never touches the process: it returns
//! the exit code and both output streams so tests can drive it in-process.

mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use walg_core::algebra::presets::triplet_p2;
use walg_core::algebra::Engine;
use walg_core::c2::{certificate_to_json, certify_triplet_p2, verify_certificate, NullCoefficients};
use walg_core::derivation::{
    alpha_nonzero_report, derived_triplet_constants, solve_triplet_constants, verify_singular_p2, Bookkeeping,
    MAX_P,
};
use walg_core::qseries::{character, diff_at_level, CharacterKind};
use walg_core::scalar::{fmt_rat, parse_rat, Poly, Rat};
use walg_core::{load_spec, AlgebraSpec, Mode};

/// Exit codes.
pub const OK: i32 = 0;
pub const ASSERTION_FAILED: i32 = 1;
pub const USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "walg", version, about = "Exact computations for triplet W-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Commutator of two modes.
    Bracket {
        /// Algebra-spec JSON; defaults to the Virasoro algebra with symbolic `c`.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Left mode, e.g. `W(-3)`.
        #[arg(long)]
        left: String,
        /// Right mode.
        #[arg(long)]
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Triplet character (or the quotient character with `--kind chi-tilde`).
    Character {
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 40)]
        cutoff: u64,
        #[arg(long, default_value = "triplet")]
        kind: String,
        #[command(flatten)]
        common: Common,
    },
    /// Vacuum Verma module character of W(2, (2p-1)^3).
    VermaCharacter {
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 40)]
        cutoff: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Coefficient difference of two characters at a level above the vacuum.
    CharDiff {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        level: String,
        #[arg(long, default_value_t = 40)]
        cutoff: u64,
        #[command(flatten)]
        common: Common,
    },
    /// The alpha != 0 derivation for one p.
    Derive {
        #[arg(long)]
        p: i64,
        /// `published` or `uniform`.
        #[arg(long, default_value = "published")]
        bookkeeping: String,
        #[command(flatten)]
        common: Common,
    },
    /// C2 membership certificate for the c = -2 triplet algebra.
    CertifyC2 {
        #[command(flatten)]
        common: Common,
    },
    /// L1/L2 annihilation of the level-6 singular vectors at c = -2.
    VerifySingular {
        /// Spec with numeric constants; defaults to the constants fixed by the equations.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Solve for the constants instead of checking them.
        #[arg(long)]
        solve_mode: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome { code: USAGE, stdout: String::new(), stderr: msg.into() }
    }
}

/// Dispatches `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome { code: OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let (common, result) = dispatch(cli.command);
    match result {
        Ok((code, body)) => match &common.out {
            Some(path) => match std::fs::write(path, &body) {
                Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome::usage(format!("cannot write {}: {e}\n", path.display())),
            },
            None => Outcome { code, stdout: body, stderr: String::new() },
        },
        Err(msg) => Outcome::usage(format!("error: {msg}\n")),
    }
}

type Rendered = Result<(i32, String), String>;

fn dispatch(cmd: Command) -> (Common, Rendered) {
    match cmd {
        Command::Bracket { spec, left, right, common } => {
            let r = bracket(spec, &left, &right, common.format);
            (common, r)
        }
        Command::Character { p, cutoff, kind, common } => {
            let r = series(&kind, p, cutoff, common.format);
            (common, r)
        }
        Command::VermaCharacter { p, cutoff, common } => {
            let r = series("verma", p, cutoff, common.format);
            (common, r)
        }
        Command::CharDiff { p, left, right, level, cutoff, common } => {
            let r = char_diff(p, &left, &right, &level, cutoff, common.format);
            (common, r)
        }
        Command::Derive { p, bookkeeping, common } => {
            let r = derive(p, &bookkeeping, common.format);
            (common, r)
        }
        Command::CertifyC2 { common } => {
            let r = certify(common.format);
            (common, r)
        }
        Command::VerifySingular { spec, solve_mode, common } => {
            let r = verify_singular(spec, solve_mode, common.format);
            (common, r)
        }
    }
}

fn read_spec(path: &PathBuf) -> Result<AlgebraSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    load_spec(&text).map_err(|e| e.to_string())
}

fn bracket(spec: Option<PathBuf>, left: &str, right: &str, format: Format) -> Rendered {
    let spec = match spec {
        Some(path) => read_spec(&path)?,
        None => AlgebraSpec::virasoro(Poly::var("c")),
    };
    let a = Mode::parse(left, &spec).map_err(|e| e.to_string())?;
    let b = Mode::parse(right, &spec).map_err(|e| e.to_string())?;
    let engine = Engine::new(spec);
    let sum = engine.bracket(a, b).map_err(|e| e.to_string())?;
    Ok((OK, render::bracket(&sum, a, b, engine.spec(), format)))
}

fn check_p(p: i64) -> Result<(), String> {
    if p < 2 {
        return Err(format!("--p must be at least 2, got {p}"));
    }
    Ok(())
}

fn kind(name: &str) -> Result<CharacterKind, String> {
    name.parse().map_err(|e: walg_core::QSeriesError| e.to_string())
}

fn series(name: &str, p: i64, cutoff: u64, format: Format) -> Rendered {
    check_p(p)?;
    let s = character(kind(name)?, p, cutoff).map_err(|e| e.to_string())?;
    Ok((OK, render::series(&s, format)))
}

fn char_diff(p: i64, left: &str, right: &str, level: &str, cutoff: u64, format: Format) -> Rendered {
    check_p(p)?;
    let level: Rat = parse_rat(level).ok_or_else(|| format!("--level is not a rational number: {level:?}"))?;
    let a = character(kind(left)?, p, cutoff).map_err(|e| e.to_string())?;
    let b = character(kind(right)?, p, cutoff).map_err(|e| e.to_string())?;
    let d = diff_at_level(&a, &b, &level).map_err(|e| e.to_string())?;
    let body = match format {
        Format::Text => format!("{}\n", fmt_rat(&d)),
        Format::Json => render::json(&serde_json::json!({
            "p": p, "left": left, "right": right, "level": fmt_rat(&level), "difference": fmt_rat(&d),
        })),
    };
    Ok((OK, body))
}

fn derive(p: i64, bookkeeping: &str, format: Format) -> Rendered {
    if !(2..=MAX_P).contains(&p) {
        return Err(format!("--p must be in 2..={MAX_P}, got {p}"));
    }
    let mode: Bookkeeping = bookkeeping.parse()?;
    let report = alpha_nonzero_report(p, mode).map_err(|e| e.to_string())?;
    let code = if report.alpha_zero_consistent { ASSERTION_FAILED } else { OK };
    Ok((code, render::derivation(&report, format)))
}

fn certify(format: Format) -> Rendered {
    let spec = triplet_p2(&walg_core::algebra::presets::TripletConstants::symbolic());
    let engine = Engine::new(spec.clone());
    let cert = certify_triplet_p2(&engine, &NullCoefficients::default()).map_err(|e| e.to_string())?;
    let report = verify_certificate(&cert, &spec);
    let code = if report.valid { OK } else { ASSERTION_FAILED };
    let body = match format {
        Format::Json => certificate_to_json(&cert, &spec) + "\n",
        Format::Text => render::certificate(&cert, &report, &spec),
    };
    Ok((code, body))
}

fn verify_singular(spec: Option<PathBuf>, solve_mode: bool, format: Format) -> Rendered {
    let k = NullCoefficients::default();
    if solve_mode {
        if spec.is_some() {
            return Err("--solve-mode treats the constants as unknowns and takes no --spec".into());
        }
        let family = solve_triplet_constants(None).map_err(|e| e.to_string())?;
        let fixed = solve_triplet_constants(Some(&k)).map_err(|e| e.to_string())?;
        let code = if family.has_nonzero_solution() { OK } else { ASSERTION_FAILED };
        return Ok((code, render::solutions(&family, &fixed, format)));
    }
    let spec = match spec {
        Some(path) => read_spec(&path)?,
        None => triplet_p2(&derived_triplet_constants(&k).map_err(|e| e.to_string())?),
    };
    let check = verify_singular_p2(&spec, &k).map_err(|e| e.to_string())?;
    let code = if check.holds { OK } else { ASSERTION_FAILED };
    Ok((code, render::singular(&check, format)))
}
