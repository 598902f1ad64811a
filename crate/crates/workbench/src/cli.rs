//! Command dispatch. Output goes to caller-supplied writers so the whole
//! front end can be driven in-process.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fanforge_core::genesis::{standard_generating_system, Policy, Provenance};
use fanforge_core::iso::{build_isomorphism, forest_canonical};
use fanforge_core::order::StratumKind;
use fanforge_core::realize::{check_forest, synthesize_chain, SynthesisBounds};
use fanforge_core::represent::{represent, Representation};
use fanforge_core::ternary::{cap_from_env, CAP_ENV};
use fanforge_core::{CharSpace, Error, Sign3};

use crate::corpus::{generate, CorpusSpec};
use crate::dot::root_system_dot;
use crate::formats::{parse_chain, parse_forest, parse_valid_chain, serialize_chain, serialize_forest};
use crate::suite::run_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Default enumeration cap for `suite`.
pub const SUITE_CAP: usize = 128;

#[derive(Parser, Debug)]
#[command(name = "fanforge", version, about = "Workbench for finite fans and their specialization root systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a chain file against the chain invariants.
    Validate { file: PathBuf },
    /// List every character as `d<depth>:<functional>`.
    Chars { file: PathBuf },
    /// List the characters of each level.
    Levels { file: PathBuf },
    /// Print the specialization root system as a forest file, or as DOT.
    Rootsys {
        file: PathBuf,
        /// Emit Graphviz DOT instead of a forest file.
        #[arg(long)]
        dot: bool,
    },
    /// Print the strata S^k_j and C^k_j.
    Strata { file: PathBuf },
    /// Print a standard generating system.
    Sgs {
        file: PathBuf,
        /// Resolve choices with this seed instead of taking least candidates.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decide isomorphism of two fans and print the map level by level.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Find an element whose evaluation is the given map, or a witness that
    /// none exists.
    Represent {
        file: PathBuf,
        /// One of `+`, `0`, `-` per character, in `chars` order.
        #[arg(long)]
        map: String,
    },
    /// Check a forest file against the necessary conditions RC1 to RC4.
    CheckForest { file: PathBuf },
    /// Search a chain realizing a forest file.
    Realize {
        file: PathBuf,
        #[arg(long, default_value_t = SynthesisBounds::default().max_dim)]
        max_dim: usize,
        #[arg(long, default_value_t = SynthesisBounds::default().max_levels)]
        max_levels: usize,
        /// Transition matrices examined before giving up.
        #[arg(long, default_value_t = SynthesisBounds::default().max_candidates)]
        max_candidates: u64,
    },
    /// Generate a seeded corpus of chains.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 4)]
        maxdim: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Write one file per chain into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every property check over a generated corpus.
    Suite {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 4)]
        maxdim: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(_) => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<CharSpace, Failure> {
    Ok(CharSpace::new(parse_valid_chain(&read(path)?)?)?)
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Resource(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_RESOURCE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file, out),
        Command::Chars { file } => {
            let x = load_space(&file)?;
            for g in x.ids() {
                writeln!(out, "{}", x.character(g))?;
            }
            writeln!(out, "{} characters", x.len())?;
            Ok(EXIT_OK)
        }
        Command::Levels { file } => {
            let x = load_space(&file)?;
            for (i, level) in x.levels().iter().enumerate() {
                let names: Vec<String> = level.iter().map(|&g| x.functional(g).to_string()).collect();
                writeln!(out, "L_{}: {} [{}]", i + 1, level.len(), names.join(" "))?;
            }
            Ok(EXIT_OK)
        }
        Command::Rootsys { file, dot } => {
            let x = load_space(&file)?;
            let text = if dot { root_system_dot(&x) } else { serialize_forest(x.forest()) };
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Strata { file } => strata(&file, out),
        Command::Sgs { file, seed } => {
            let x = load_space(&file)?;
            let sgs = standard_generating_system(&x, policy(seed));
            for (k, level) in sgs.levels.iter().enumerate() {
                writeln!(out, "B_{}:", k + 1)?;
                for (g, how) in level {
                    let how = match how {
                        Provenance::LevelOneTower { j } => format!("tower j={j}"),
                        Provenance::PredecessorBlock { anchor, j } => {
                            format!("block below {} j={j}", x.character(*anchor))
                        }
                        Provenance::Lift { h, j } => format!("lift of {} j={j}", x.character(*h)),
                    };
                    writeln!(out, "  {} ({how})", x.character(*g))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Iso { a, b, seed } => {
            let (x1, x2) = (load_space(&a)?, load_space(&b)?);
            match build_isomorphism(&x1, &x2, policy(seed)) {
                Ok(map) => {
                    for g in x1.ids() {
                        let h = map[g.0];
                        writeln!(out, "depth {}: {} -> {}", x1.depth(g), x1.functional(g), x2.functional(h))?;
                    }
                    Ok(EXIT_OK)
                }
                Err(Error::OrderMismatch { .. }) => {
                    writeln!(out, "not isomorphic")?;
                    writeln!(out, "  {}: {}", a.display(), forest_canonical(x1.forest()))?;
                    writeln!(out, "  {}: {}", b.display(), forest_canonical(x2.forest()))?;
                    Ok(EXIT_NEGATIVE)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Represent { file, map } => {
            let x = load_space(&file)?;
            let f = parse_sign_map(&map)?;
            match represent(&x, &f)? {
                Representation::Element(a) => {
                    writeln!(out, "element {a}")?;
                    Ok(EXIT_OK)
                }
                Representation::NotRepresentable(w) => {
                    writeln!(out, "not representable: {w}")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::CheckForest { file } => {
            let f = parse_forest(&read(&file)?)?;
            let violations = check_forest(&f);
            for v in &violations {
                writeln!(out, "{v}")?;
            }
            if violations.is_empty() {
                writeln!(out, "no violation found")?;
                Ok(EXIT_OK)
            } else {
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Realize { file, max_dim, max_levels, max_candidates } => {
            let f = parse_forest(&read(&file)?)?;
            let violations = check_forest(&f);
            if !violations.is_empty() {
                for v in &violations {
                    writeln!(out, "{v}")?;
                }
                writeln!(out, "not realizable")?;
                return Ok(EXIT_NEGATIVE);
            }
            let bounds = SynthesisBounds { max_dim, max_levels, max_candidates };
            match synthesize_chain(&f, bounds)? {
                Some(c) => {
                    out.write_all(serialize_chain(&c).as_bytes())?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "not realizable")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Gen { seed, levels, maxdim, count, out: dir } => {
            check_corpus_shape(levels, maxdim)?;
            let chains = generate(&CorpusSpec { seed, count, max_levels: levels, max_dim: maxdim });
            match dir {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    for (i, c) in chains.iter().enumerate() {
                        std::fs::write(dir.join(format!("chain-{i:04}.fan")), serialize_chain(c))?;
                    }
                    writeln!(out, "wrote {} chains to {}", chains.len(), dir.display())?;
                }
                None => {
                    for (i, c) in chains.iter().enumerate() {
                        writeln!(out, "# chain {i}")?;
                        out.write_all(serialize_chain(c).as_bytes())?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Suite { seed, levels, maxdim, count } => {
            check_corpus_shape(levels, maxdim)?;
            let chains = generate(&CorpusSpec { seed, count, max_levels: levels, max_dim: maxdim });
            let cap = suite_cap();
            if let Some(c) = chains.iter().find(|c| c.cardinalities().0 > cap as u128) {
                return Err(Failure::Resource(format!(
                    "a corpus table has {} elements, above the enumeration cap {cap}; raise {CAP_ENV}",
                    c.cardinalities().0
                )));
            }
            let spaces = chains.into_iter().map(CharSpace::new).collect::<Result<Vec<_>, _>>()?;
            let mut failures = 0;
            for (name, report) in run_all(&spaces, cap) {
                writeln!(out, "{name}: {} checks, {} failures", report.checked, report.failures.len())?;
                for m in report.failures.iter().take(5) {
                    writeln!(out, "  {m}")?;
                }
                failures += report.failures.len();
            }
            writeln!(out, "total failures: {failures}")?;
            Ok(if failures == 0 { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

/// Cap for the suite's table checks: the environment override when present,
/// otherwise large enough for corpora with 4 levels of dimension 4.
fn suite_cap() -> usize {
    if std::env::var_os(CAP_ENV).is_some() {
        cap_from_env()
    } else {
        SUITE_CAP
    }
}

fn policy(seed: Option<u64>) -> Policy {
    seed.map_or(Policy::Deterministic, Policy::Seeded)
}

fn check_corpus_shape(levels: usize, maxdim: usize) -> Result<(), Failure> {
    if levels == 0 || maxdim == 0 || maxdim > 16 {
        return Err(Failure::Input("--levels must be positive and --maxdim in 1..=16".into()));
    }
    Ok(())
}

fn validate(file: &Path, out: &mut dyn Write) -> Outcome {
    let chain = parse_chain(&read(file)?)?;
    let report = chain.validate();
    if !report.is_empty() {
        for v in report.violations() {
            writeln!(out, "violation: {v}")?;
        }
        return Ok(EXIT_NEGATIVE);
    }
    let dims: Vec<String> = chain.levels().iter().map(|l| l.dim.to_string()).collect();
    let (card_f, card_x) = chain.cardinalities();
    writeln!(out, "valid: n={} dims=[{}] card(F)={card_f} card(X)={card_x}", chain.len(), dims.join(","))?;
    Ok(EXIT_OK)
}

fn strata(file: &Path, out: &mut dyn Write) -> Outcome {
    let x = load_space(file)?;
    let n = x.length();
    for k in 1..=n {
        for j in k..=n {
            for kind in [StratumKind::S, StratumKind::C] {
                let s = x.stratum(kind, k, j)?;
                let names: Vec<String> = s.iter().map(|&g| x.functional(g).to_string()).collect();
                writeln!(out, "{kind}^{k}_{j}: {} [{}]", s.len(), names.join(" "))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn parse_sign_map(text: &str) -> Result<Vec<Sign3>, Failure> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| {
            Sign3::from_symbol(c)
                .ok_or_else(|| Failure::Input(format!("--map accepts only +, 0 and -, found {c:?}")))
        })
        .collect()
}
