//! Command-line front end. Every command is a pure function of its input
//! files and flags; reports go to standard output as `key: value` lines
//! ending in `RESULT: pass|fail`, notes about long sweeps go to standard
//! error.
//!
//! Exit codes: 0 when the checked property holds (or the expected result
//! was observed), 1 when it fails, 2 for usage, parse and I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unitals::format::{read_unital_file, unital_to_text};
use unitals::{
    check_condition_i, check_condition_ii, check_condition_iii, classify, find_isomorphism, find_onan,
    is_isomorphism, translations_with_center, verify_design, verify_linear_space, ClassifyOptions, Enumeration,
    HermitianUnital, IsoOutcome, LoadMode, Mode, Unital, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "unitals", version, about = "Construct and analyse finite unitals")]
pub struct Cli {
    /// Worker threads for the parallel sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Print construction details such as the field moduli.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the classical unital of order q in UNITAL v1 format.
    Gen {
        #[arg(long)]
        q: usize,
        /// Output file; the structure is printed to standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check the design axioms, reporting every violation.
    Verify {
        file: PathBuf,
        #[arg(long)]
        linear_space: bool,
    },
    /// Search for an O'Nan configuration.
    Onan {
        file: PathBuf,
        /// Expected outcome; determines the exit code.
        #[arg(long, value_enum, default_value_t = Expect::None)]
        expect: Expect,
        #[arg(long)]
        linear_space: bool,
    },
    /// Compute the translation groups T_[c].
    Translations {
        file: PathBuf,
        #[arg(long)]
        center: Option<usize>,
    },
    /// Check Wilbrink's conditions.
    Wilbrink {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ConditionArg::All)]
        condition: ConditionArg,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        linear_space: bool,
    },
    /// Check the classification hypotheses and search for an isomorphism onto the classical unital.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Search for an isomorphism between two unitals.
    Iso { a: PathBuf, b: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    None,
    Some,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConditionArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    #[value(name = "all")]
    All,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Sampling {
    /// Sample this many instances instead of sweeping exhaustively.
    #[arg(long, requires = "seed")]
    pub samples: Option<u64>,
    /// Seed for sampled sweeps.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Sampling {
    fn mode(&self) -> Option<Mode> {
        self.samples.map(|samples| Mode::Sampled { samples, seed: self.seed.unwrap_or(0) })
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn error(message: impl std::fmt::Display) -> CommandOutcome {
        CommandOutcome { exit_code: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

struct Report {
    out: String,
    err: String,
}

impl Report {
    fn new() -> Report {
        Report { out: String::new(), err: String::new() }
    }

    fn line(&mut self, text: impl std::fmt::Display) {
        writeln!(self.out, "{text}").unwrap();
    }

    fn note(&mut self, text: impl std::fmt::Display) {
        writeln!(self.err, "{text}").unwrap();
    }

    fn finish(mut self, pass: bool) -> CommandOutcome {
        self.line(format!("RESULT: {}", if pass { "pass" } else { "fail" }));
        CommandOutcome { exit_code: if pass { EXIT_OK } else { EXIT_FAIL }, stdout: self.out, stderr: self.err }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return CommandOutcome { exit_code: code, stdout, stderr };
        }
    };
    if cli.threads == 0 {
        return CommandOutcome::error("--threads must be at least 1");
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => return CommandOutcome::error(e),
    };
    pool.install(|| execute(&cli))
}

fn load(path: &PathBuf, mode: LoadMode) -> Result<Unital, CommandOutcome> {
    read_unital_file(path, mode)
        .and_then(|f| f.into_unital(mode))
        .map_err(|e| CommandOutcome::error(format_args!("{}: {e}", path.display())))
}

fn structure_mode(linear_space: bool) -> LoadMode {
    if linear_space {
        LoadMode::LinearSpace
    } else {
        LoadMode::Strict
    }
}

fn execute(cli: &Cli) -> CommandOutcome {
    let result = match &cli.command {
        Command::Gen { q, output } => cmd_gen(*q, output.as_ref(), cli.verbose),
        Command::Verify { file, linear_space } => cmd_verify(file, *linear_space),
        Command::Onan { file, expect, linear_space } => cmd_onan(file, *expect, *linear_space),
        Command::Translations { file, center } => cmd_translations(file, *center),
        Command::Wilbrink { file, condition, sampling, linear_space } => {
            cmd_wilbrink(file, *condition, sampling, *linear_space)
        }
        Command::Classify { file, sampling } => cmd_classify(file, sampling),
        Command::Iso { a, b } => cmd_iso(a, b),
    };
    result.unwrap_or_else(|e| e)
}

fn cmd_gen(q: usize, output: Option<&PathBuf>, verbose: bool) -> Result<CommandOutcome, CommandOutcome> {
    let h = HermitianUnital::new(q).map_err(CommandOutcome::error)?;
    let u = h.unital();
    let text = unital_to_text(u);
    let mut r = Report::new();
    match output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CommandOutcome::error(format_args!("{}: {e}", path.display())))?;
            r.line(format!("order: {q}"));
            r.line(format!("points: {}", u.num_points()));
            r.line(format!("blocks: {}", u.num_blocks()));
            if verbose {
                r.line(format!("field: {}", h.field().modulus_description()));
            }
            r.line(format!("output: {}", path.display()));
            Ok(r.finish(true))
        }
        None => {
            if verbose {
                r.note(format!("field: {}", h.field().modulus_description()));
            }
            Ok(CommandOutcome { exit_code: EXIT_OK, stdout: text, stderr: r.err })
        }
    }
}

fn cmd_verify(file: &PathBuf, linear_space: bool) -> Result<CommandOutcome, CommandOutcome> {
    let mode = if linear_space { LoadMode::LinearSpace } else { LoadMode::Lenient };
    let parsed = read_unital_file(file, mode).map_err(|e| CommandOutcome::error(format_args!("{}: {e}", file.display())))?;
    let report = if linear_space {
        verify_linear_space(&parsed.blocks, parsed.points)
    } else {
        verify_design(&parsed.blocks, parsed.order)
    };
    let mut r = Report::new();
    r.line(format!("order: {}", parsed.order));
    r.line(&report);
    Ok(r.finish(report.pass()))
}

fn cmd_onan(file: &PathBuf, expect: Expect, linear_space: bool) -> Result<CommandOutcome, CommandOutcome> {
    let u = load(file, structure_mode(linear_space))?;
    let mut r = Report::new();
    let found = find_onan(&u);
    match &found {
        Some(w) => {
            r.line(w);
            r.line(format!("witness valid: {}", w.validate(&u)));
        }
        None => r.line("none"),
    }
    r.line(format!("expect: {}", if expect == Expect::None { "none" } else { "some" }));
    let pass = match (expect, &found) {
        (Expect::None, None) => true,
        (Expect::Some, Some(w)) => w.validate(&u),
        _ => false,
    };
    Ok(r.finish(pass))
}

fn cmd_translations(file: &PathBuf, center: Option<usize>) -> Result<CommandOutcome, CommandOutcome> {
    let u = load(file, LoadMode::Strict)?;
    let centers: Vec<usize> = match center {
        Some(c) if c >= u.num_points() => {
            return Err(CommandOutcome::error(format_args!("center {c} out of range 0..{}", u.num_points())))
        }
        Some(c) => vec![c],
        None => (0..u.num_points()).collect(),
    };
    let mut r = Report::new();
    r.line(format!("order: {}", u.order()));
    let mut all = true;
    for c in centers {
        let group = translations_with_center(&u, c);
        r.line(format!("center {c}: {}", group.len()));
        for t in &group {
            r.line(format!("center {c} translation: {}", t.cycle_notation()));
        }
        all &= group.len() == u.order();
    }
    let key = if center.is_some() { "full-group" } else { "admits-all-translations" };
    r.line(format!("{key}: {all}"));
    Ok(r.finish(all))
}

fn cmd_wilbrink(
    file: &PathBuf,
    condition: ConditionArg,
    sampling: &Sampling,
    linear_space: bool,
) -> Result<CommandOutcome, CommandOutcome> {
    let u = load(file, structure_mode(linear_space))?;
    let mode = sampling.mode().unwrap_or(Mode::Exhaustive);
    let mut r = Report::new();
    r.line(format!("order: {}", u.order()));
    let mut pass = true;
    let wants = |c: ConditionArg| condition == c || condition == ConditionArg::All;
    if wants(ConditionArg::I) {
        r.note("checking condition I");
        let report = check_condition_i(&u);
        pass &= report.holds;
        r.line(&report);
    }
    if wants(ConditionArg::II) {
        r.note(format!("checking condition II ({mode})"));
        let report = check_condition_ii(&u, mode);
        pass &= report.holds;
        r.line(&report);
    }
    if wants(ConditionArg::III) {
        r.note(format!("checking condition III ({mode})"));
        let report = check_condition_iii(&u, mode, Enumeration::Full).expect("full enumeration never fails");
        pass &= report.holds;
        r.line(&report);
    }
    Ok(r.finish(pass))
}

fn cmd_classify(file: &PathBuf, sampling: &Sampling) -> Result<CommandOutcome, CommandOutcome> {
    let u = load(file, LoadMode::Strict)?;
    let options = ClassifyOptions { mode: sampling.mode(), seed: sampling.seed.unwrap_or(0) };
    let mut r = Report::new();
    r.note("checking translations, O'Nan configurations, conditions II and III, isomorphism");
    let verdict = classify(&u, &options);
    r.line(&verdict);
    Ok(r.finish(verdict.verdict == Verdict::Classical))
}

fn cmd_iso(a: &PathBuf, b: &PathBuf) -> Result<CommandOutcome, CommandOutcome> {
    let ua = load(a, LoadMode::Strict)?;
    let ub = load(b, LoadMode::Strict)?;
    let mut r = Report::new();
    let pass = match find_isomorphism(&ua, &ub) {
        IsoOutcome::Found(p) => {
            let images: Vec<String> = p.images().iter().map(usize::to_string).collect();
            r.line(format!("isomorphism: {}", images.join(" ")));
            r.line(format!("witness valid: {}", is_isomorphism(&ua, &ub, &p)));
            true
        }
        IsoOutcome::NotIsomorphic => {
            r.line("isomorphism: none");
            false
        }
        IsoOutcome::Mismatch(why) => {
            r.line("isomorphism: none");
            r.line(format!("reason: {why}"));
            false
        }
    };
    Ok(r.finish(pass))
}

