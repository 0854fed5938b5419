//! `hurwitz-lab`: command-line front end over `hurwitz_core`.
//!
//! Every command produces a report (`--emit json`, the default, or `text`;
//! poset commands also take `dot`). Exit codes: 0 all checks passed,
//! 1 verification mismatch or runtime failure, 2 a cap was hit, 64 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hurwitz_core::elliptic::{braid_matrix, invariant_splitting};
use hurwitz_core::hurwitz::{classify_orbits, hurwitz_orbit, transitivity_sweep, BraidWord};
use hurwitz_core::poset::{
    export, interval_elliptic_gen, interval_finite, ExportFormat, IntervalPoset,
};
use hurwitz_core::suite::{self, SuiteConfig, CRITERIA, DEFAULT_SEED};
use hurwitz_core::tables::{table_word, verify_tables, TableData};
use hurwitz_core::weyl::reflection_matrix;
use hurwitz_core::{
    build_elliptic, build_finite, coxeter_transformation, enumerate_fac, mark_obstruction,
    reflection_length_finite, Ambient, EllipticType, Error, FiniteRootSystem, FiniteType,
    FiniteWeyl, IMat, LatticeAutomorphism, LatticeVector, ReflectionTuple,
};

const SCHEMA: &str = "hurwitz-lab/1";
const EXIT_MISMATCH: u8 = 1;
const EXIT_TRUNCATED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "hurwitz-lab",
    version,
    about = "Exact computations with finite and tubular elliptic root systems"
)]
struct Cli {
    /// Worker threads for the parallel kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Leave out the timing field so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root systems and their Gram forms.
    #[command(subcommand)]
    Rootsys(RootsysCmd),
    /// Finite Weyl groups: reflection length and factorizations.
    #[command(subcommand)]
    Weyl(WeylCmd),
    /// Hurwitz orbits of reflection factorizations.
    #[command(subcommand)]
    Hurwitz(HurwitzCmd),
    /// Invariant splitting and braid matrices of the tubular types.
    #[command(subcommand)]
    Elliptic(EllipticCmd),
    /// Absolute-order interval posets.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Acceptance checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug)]
struct TypeArg {
    /// Type tag: A<n>, D<n>, E6..E8, F4, or a tubular tag such as D4.1.1.
    #[arg(long = "type")]
    tag: String,
}

#[derive(Subcommand, Debug)]
enum RootsysCmd {
    Build(TypeArg),
}

#[derive(Subcommand, Debug)]
enum WeylCmd {
    /// Reflection length of a word in the simple reflections.
    Length {
        #[command(flatten)]
        ty: TypeArg,
        /// Simple-reflection indices, 1-based, e.g. `1,2,3` or `[1,2,3]`.
        #[arg(long)]
        word: String,
    },
    /// Factorizations of a word's element into `m` reflections.
    Fac {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long)]
        target: String,
        #[arg(long)]
        m: usize,
        /// Only factorizations generating the group.
        #[arg(long)]
        generating: bool,
        #[arg(long, default_value_t = 10_000_000)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum HurwitzCmd {
    /// BFS orbit of a tuple read from a JSON file of root coordinate arrays.
    Orbit {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long = "seed")]
        seed_file: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        cap: usize,
    },
    /// Orbits of the generating factorizations of an element.
    Classify {
        #[command(flatten)]
        ty: TypeArg,
        /// The element as a word in simple reflections.
        #[arg(long)]
        w: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10_000_000)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum EllipticCmd {
    /// Radical components `c_a`, `c_b` of the invariant splitting.
    Splitting(TypeArg),
    /// Braid matrices of the shipped tables.
    #[command(alias = "verify-appendix")]
    VerifyTables(TypeArg),
    /// Matrix of a braid word on the canonical factorization.
    Braid {
        #[command(flatten)]
        ty: TypeArg,
        /// Signed letters, e.g. `[-5,4]`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Read letters with the tables' convention (letter `i` is the inverse move).
        #[arg(long)]
        table_letters: bool,
    },
}

#[derive(Subcommand, Debug)]
enum PosetCmd {
    /// Exact `[1, c]` for the Coxeter element of a finite type.
    Interval(TypeArg),
    /// Windowed generating interval of a tubular type.
    Gen {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, default_value_t = 2)]
        window: i64,
        #[arg(long, default_value_t = 100_000_000)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Every acceptance criterion.
    All {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// One acceptance criterion by number.
    Criterion {
        id: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Braid matrices and membership for one tubular type.
    #[command(alias = "appendix")]
    Tables(TypeArg),
    /// Orbits against multisets for every eligible element of a finite group.
    #[command(alias = "theorem15")]
    Transitivity {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, default_value_t = 10_000_000)]
        cap: usize,
    },
}

/// Result of one command before rendering.
struct Outcome {
    payload: Value,
    passed: bool,
    truncated: bool,
    /// Graphviz rendering when the command produced a poset.
    dot: Option<Vec<u8>>,
    text: Vec<String>,
}

impl Outcome {
    fn ok(payload: Value) -> Outcome {
        Outcome {
            payload,
            passed: true,
            truncated: false,
            dot: None,
            text: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'a str,
    command: Vec<String>,
    passed: bool,
    truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
    payload: &'a Value,
}

type CliResult<T> = Result<T, Fail>;

enum Fail {
    Usage(String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::UnsupportedType(_) | Error::UnknownFormat(_) => Fail::Usage(e.to_string()),
            e => Fail::Core(e),
        }
    }
}

fn parse_word(s: &str) -> CliResult<Vec<i32>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            x.trim()
                .parse::<i32>()
                .map_err(|_| Fail::Usage(format!("bad word `{s}`")))
        })
        .collect()
}

fn finite_type(tag: &str) -> CliResult<FiniteType> {
    tag.parse::<FiniteType>().map_err(Fail::from)
}

fn elliptic_type(tag: &str) -> CliResult<EllipticType> {
    tag.parse::<EllipticType>().map_err(Fail::from)
}

/// Element of a finite Weyl group from a word in simple reflections.
fn finite_element(sys: &FiniteRootSystem, word: &[i32]) -> CliResult<LatticeAutomorphism> {
    let n = sys.rank();
    let mut m = IMat::identity(n);
    for &i in word {
        if i < 1 || i as usize > n {
            return Err(Fail::Usage(format!(
                "simple reflection {i} out of range 1..={n}"
            )));
        }
        m = m.mul(&reflection_matrix(
            &sys.gram,
            &sys.simple_roots[i as usize - 1],
        ));
    }
    Ok(LatticeAutomorphism::new(m))
}

fn coxeter_word(n: usize) -> Vec<i32> {
    (1..=n as i32).collect()
}

fn rootsys_build(tag: &str) -> CliResult<Outcome> {
    if let Ok(t) = tag.parse::<FiniteType>() {
        let sys = build_finite(t)?;
        let payload = json!({
            "type": t.to_string(),
            "rank": sys.rank(),
            "root_count": sys.all_roots.len(),
            "roots": sys.all_roots,
            "gram": sys.gram.to_rows(),
            "highest_root": sys.highest_root,
            "marks": sys.marks,
        });
        let text = vec![format!(
            "{t}: rank {}, {} roots",
            sys.rank(),
            sys.all_roots.len()
        )];
        return Ok(Outcome {
            text,
            ..Outcome::ok(payload)
        });
    }
    let t = elliptic_type(tag)?;
    let sys = build_elliptic(t)?;
    let sig = sys.gram.signature();
    let payload = json!({
        "type": t.to_string(),
        "rank": sys.rank(),
        "ell": sys.ell,
        "gram": sys.gram.matrix().to_rows(),
        "signature": sig,
        "basis": sys.gamma_labels.iter().zip(&sys.basis_gamma).map(|(l, v)| json!({"label": l, "root": v})).collect::<Vec<_>>(),
        "finite_roots": sys.finite_part.all_roots,
        "marks": sys.finite_part.marks,
        "canonical_word": sys.canonical_word(),
        "mark_obstruction": mark_obstruction(&sys),
    });
    let text = vec![format!(
        "{t}: rank {}, signature ({}, {}, {}), level {}",
        sys.rank(),
        sig.positive,
        sig.zero,
        sig.negative,
        sys.ell
    )];
    Ok(Outcome {
        text,
        ..Outcome::ok(payload)
    })
}

fn weyl(cmd: &WeylCmd) -> CliResult<Outcome> {
    match cmd {
        WeylCmd::Length { ty, word } => {
            let sys = build_finite(finite_type(&ty.tag)?)?;
            let w = finite_element(&sys, &parse_word(word)?)?;
            let l = reflection_length_finite(&w, &sys)?;
            Ok(Outcome {
                text: vec![format!("reflection length {l}")],
                ..Outcome::ok(json!({"length": l}))
            })
        }
        WeylCmd::Fac {
            ty,
            target,
            m,
            generating,
            cap,
        } => {
            let sys = build_finite(finite_type(&ty.tag)?)?;
            let w = finite_element(&sys, &parse_word(target)?)?;
            let group = FiniteWeyl::new(sys);
            match enumerate_fac(&group, &w, *m, *generating, *cap) {
                Ok(fac) => {
                    let tuples: Vec<&Vec<LatticeVector>> = fac.iter().map(|t| &t.entries).collect();
                    let text = vec![format!("{} factorizations", fac.len())];
                    Ok(Outcome {
                        text,
                        ..Outcome::ok(json!({"count": fac.len(), "tuples": tuples}))
                    })
                }
                Err(Error::CapExceeded { cap, partial }) => {
                    Ok(truncated(json!({"cap": cap, "partial": partial})))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn truncated(payload: Value) -> Outcome {
    Outcome {
        truncated: true,
        text: vec!["cap exceeded".into()],
        ..Outcome::ok(payload)
    }
}

/// Ambient, seed tuple and class function for a finite or tubular tag. The
/// tubular case classifies roots by the class of their finite projection.
fn hurwitz_orbit_cmd(tag: &str, seed: &PathBuf, cap: usize) -> CliResult<Outcome> {
    let raw = std::fs::read_to_string(seed)
        .map_err(|e| Fail::Usage(format!("{}: {e}", seed.display())))?;
    let roots: Vec<Vec<i64>> =
        serde_json::from_str(&raw).map_err(|e| Fail::Usage(format!("{}: {e}", seed.display())))?;
    let roots: Vec<LatticeVector> = roots.into_iter().map(LatticeVector).collect();
    let (ambient, fin) = if let Ok(t) = tag.parse::<FiniteType>() {
        let sys = build_finite(t)?;
        (Ambient::finite(&sys), sys)
    } else {
        let sys = build_elliptic(elliptic_type(tag)?)?;
        (Ambient::elliptic(&sys), sys.finite_part.clone())
    };
    let n = fin.rank();
    let group = FiniteWeyl::new(fin);
    let t = ReflectionTuple::new(ambient, roots)?;
    let classify = |r: &LatticeVector| {
        group
            .reflection_index(&r.truncate(n).canonical())
            .map(|i| group.class_of(i))
    };
    let rep = hurwitz_orbit(&t, cap, &classify)?;
    let text = vec![format!(
        "orbit size {}, radius {}{}",
        rep.orbit_size,
        rep.radius,
        if rep.truncated { " (truncated)" } else { "" }
    )];
    Ok(Outcome {
        truncated: rep.truncated,
        text,
        ..Outcome::ok(serde_json::to_value(&rep).unwrap())
    })
}

fn hurwitz(cmd: &HurwitzCmd) -> CliResult<Outcome> {
    match cmd {
        HurwitzCmd::Orbit { ty, seed_file, cap } => hurwitz_orbit_cmd(&ty.tag, seed_file, *cap),
        HurwitzCmd::Classify { ty, w, m, cap } => {
            let sys = build_finite(finite_type(&ty.tag)?)?;
            let el = finite_element(&sys, &parse_word(w)?)?;
            let ambient = Ambient::finite(&sys);
            let group = FiniteWeyl::new(sys);
            let wi = group
                .element_index(&el.matrix)
                .ok_or(Fail::Core(Error::NotOrthogonal))?;
            match classify_orbits(&group, &ambient, wi, *m, *cap) {
                Ok(orbits) => {
                    let text = orbits
                        .iter()
                        .map(|o| {
                            format!(
                                "orbit of size {} with classes {:?}",
                                o.orbit_size, o.invariant_multiset
                            )
                        })
                        .collect();
                    Ok(Outcome {
                        text,
                        ..Outcome::ok(json!({"orbits": orbits}))
                    })
                }
                Err(Error::CapExceeded { cap, partial }) => {
                    Ok(truncated(json!({"cap": cap, "partial": partial})))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn tables(tag: &str) -> CliResult<Outcome> {
    let t = elliptic_type(tag)?;
    let data = TableData::load()?;
    let rep = verify_tables(t, &data)?;
    let cert_ok = rep
        .certificate
        .as_ref()
        .is_none_or(|c| c.generates == Some(true));
    let passed = rep.all_members() && rep.all_reproduced() && cert_ok;
    let mut text: Vec<String> = rep
        .rows
        .iter()
        .map(|r| {
            format!(
                "{}: printed {:?}, member {}, reproduced {}",
                r.id,
                r.printed_matrix,
                r.membership,
                r.reproduced()
            )
        })
        .collect();
    if let Some(c) = &rep.certificate {
        text.push(format!("level-2 generation: {:?}", c.generates));
    }
    Ok(Outcome {
        passed,
        text,
        ..Outcome::ok(serde_json::to_value(&rep).unwrap())
    })
}

fn elliptic(cmd: &EllipticCmd) -> CliResult<Outcome> {
    match cmd {
        EllipticCmd::Splitting(ty) => {
            let sys = build_elliptic(elliptic_type(&ty.tag)?)?;
            let s = invariant_splitting(&sys)?;
            let text = vec![
                format!(
                    "c_a = {:?}",
                    hurwitz_core::elliptic::rational_strings(&s.c_a)
                ),
                format!(
                    "c_b = {:?}",
                    hurwitz_core::elliptic::rational_strings(&s.c_b)
                ),
            ];
            Ok(Outcome {
                passed: s.block_diagonal,
                text,
                ..Outcome::ok(s.to_json())
            })
        }
        EllipticCmd::VerifyTables(ty) => tables(&ty.tag),
        EllipticCmd::Braid {
            ty,
            word,
            table_letters,
        } => {
            let sys = build_elliptic(elliptic_type(&ty.tag)?)?;
            let letters = parse_word(word)?;
            let w = if *table_letters {
                table_word(&letters)
            } else {
                BraidWord::new(letters)
            };
            w.validate(sys.rank() + 2)
                .map_err(|e| Fail::Usage(e.to_string()))?;
            let c = coxeter_transformation(&sys);
            let base = ReflectionTuple::new(Ambient::elliptic(&sys), sys.canonical_roots())?;
            match braid_matrix(&sys, &c, &base, &w) {
                Ok(m) => Ok(Outcome {
                    text: vec![format!("{m:?}")],
                    ..Outcome::ok(json!({"matrix": m}))
                }),
                Err(Error::NotStabilizing) => Ok(Outcome {
                    passed: false,
                    text: vec!["braid does not fix the projected factorization".into()],
                    ..Outcome::ok(json!({"matrix": null, "stabilizes": false}))
                }),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn poset_outcome(p: &IntervalPoset, extra: Value, truncated: bool) -> Outcome {
    let mut payload = json!({
        "size": p.len(),
        "level_counts": p.level_counts(),
        "covers": p.covers.len(),
        "graded": p.covers_graded(),
        "poset": p,
    });
    if let (Value::Object(a), Value::Object(b)) = (&mut payload, extra) {
        a.extend(b);
    }
    let text = vec![format!(
        "{} elements, levels {:?}, {} covers",
        p.len(),
        p.level_counts(),
        p.covers.len()
    )];
    Outcome {
        payload,
        passed: true,
        truncated,
        dot: Some(export(p, ExportFormat::Dot)),
        text,
    }
}

fn poset(cmd: &PosetCmd) -> CliResult<Outcome> {
    match cmd {
        PosetCmd::Interval(ty) => {
            let sys = build_finite(finite_type(&ty.tag)?)?;
            let c = finite_element(&sys, &coxeter_word(sys.rank()))?;
            let p = interval_finite(&c, &FiniteWeyl::new(sys))?;
            Ok(poset_outcome(&p, json!({}), false))
        }
        PosetCmd::Gen { ty, window, cap } => {
            if *window < 1 {
                return Err(Fail::Usage("--window must be at least 1".into()));
            }
            let sys = build_elliptic(elliptic_type(&ty.tag)?)?;
            let iv = interval_elliptic_gen(&sys, *window, *cap)?;
            let extra = json!({
                "type": iv.type_tag,
                "window": window,
                "factorizations": iv.factorizations,
                "finite_factorizations": iv.finite_factorizations,
                "carter_certified": iv.carter_certified,
                "quarantined": iv.quarantined.len(),
            });
            Ok(poset_outcome(&iv.poset, extra, iv.truncated))
        }
    }
}

fn verify(cmd: &VerifyCmd) -> CliResult<Outcome> {
    let suite_outcome = |results: Vec<suite::CriterionResult>| {
        let passed = results.iter().all(|r| r.passed);
        let text = results.iter().map(|r| r.line()).collect();
        Outcome {
            passed,
            text,
            ..Outcome::ok(json!({"criteria": results}))
        }
    };
    match cmd {
        VerifyCmd::All { seed } => Ok(suite_outcome(suite::run_all(&SuiteConfig { seed: *seed }))),
        VerifyCmd::Criterion { id, seed } => {
            if !(1..=CRITERIA).contains(id) {
                return Err(Fail::Usage(format!("criterion must be in 1..={CRITERIA}")));
            }
            Ok(suite_outcome(vec![suite::run_criterion(
                *id,
                &SuiteConfig { seed: *seed },
            )]))
        }
        VerifyCmd::Tables(ty) => tables(&ty.tag),
        VerifyCmd::Transitivity { ty, cap } => {
            let group = FiniteWeyl::new(build_finite(finite_type(&ty.tag)?)?);
            match transitivity_sweep(&group, *cap) {
                Ok(s) => {
                    let text = vec![format!(
                        "{}: {} eligible of {} full-length elements, bijection {}",
                        s.group, s.eligible, s.elements_of_full_length, s.holds
                    )];
                    Ok(Outcome {
                        passed: s.holds,
                        text,
                        ..Outcome::ok(serde_json::to_value(&s).unwrap())
                    })
                }
                Err(Error::CapExceeded { cap, partial }) => {
                    Ok(truncated(json!({"cap": cap, "partial": partial})))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Rootsys(RootsysCmd::Build(ty)) => rootsys_build(&ty.tag),
        Command::Weyl(c) => weyl(c),
        Command::Hurwitz(c) => hurwitz(c),
        Command::Elliptic(c) => elliptic(c),
        Command::Poset(c) => poset(c),
        Command::Verify(c) => verify(c),
    }
}

fn write_out(path: &Option<PathBuf>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool set once");
    }
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Fail::Core(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_MISMATCH);
        }
    };
    let elapsed = start.elapsed().as_millis();
    let bytes = match cli.emit {
        Emit::Json => {
            let report = Report {
                schema: SCHEMA,
                command: std::env::args().skip(1).collect(),
                passed: outcome.passed,
                truncated: outcome.truncated,
                elapsed_ms: (!cli.no_timing).then_some(elapsed),
                payload: &outcome.payload,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Emit::Text => {
            let mut s = outcome.text.join("\n");
            s.push('\n');
            s.into_bytes()
        }
        Emit::Dot => match outcome.dot {
            Some(d) => d,
            None => {
                eprintln!("error: --emit dot is only available for poset commands");
                return ExitCode::from(EXIT_USAGE);
            }
        },
    };
    if let Err(e) = write_out(&cli.out, &bytes) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_MISMATCH);
    }
    if outcome.truncated {
        ExitCode::from(EXIT_TRUNCATED)
    } else if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}
