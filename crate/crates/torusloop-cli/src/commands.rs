//! Command-line surface: argument parsing, dispatch and JSON reports.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;
use torusloop::foundation::RatVec;
use torusloop::glue::{overlattice_from_isotropic, DiscriminantForm, FormKind, GlueError};
use torusloop::lattice::{parse_builtin, Lattice, LatticeError, BUILTIN_HELP};
use torusloop::reps::{Kind, LabelSpace, RepsError};
use torusloop::series::{theta_series, SeriesError};
use torusloop::span::{builtin_span, LatticeSpan, SpanError, BUILTIN_SPANS_HELP};

use crate::fock::{FockError, Gram};
use crate::formats::{
    int_json, ints_json, label_json, lattice_from_value, matrix_json, parse_json, parse_rational, series_json,
    span_from_value, vec_json, FormatError,
};
use crate::harness::{fock_check, run as run_suite, FockParams, HarnessError, Suite, Target, SUITE_TABLE};

#[derive(Debug, Parser)]
#[command(name = "torusloop", version, about = "Lattices, gluing, characters, loop-group cocycles and Fock numerics")]
pub struct Cli {
    /// Emit JSON on standard output (always on).
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice arithmetic.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Lattice spans Γ → Λw, Λb.
    #[command(subcommand)]
    Span(SpanCmd),
    /// Positive-energy representation labels and characters.
    #[command(subcommand)]
    Reps(RepsCmd),
    /// Seeded identity suites; exit code 2 on a counterexample.
    #[command(after_help = SUITE_TABLE)]
    Verify(VerifyArgs),
    /// Truncated Fock space numerics.
    #[command(subcommand)]
    Fock(FockCmd),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct LatticeInput {
    /// Builtin lattice name.
    #[arg(long, help = format!("Builtin lattice: {BUILTIN_HELP}"))]
    pub builtin: Option<String>,
    /// Lattice JSON file {"name"?, "gram"}.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SpanInput {
    #[arg(long, help = format!("Builtin span: {BUILTIN_SPANS_HELP}"))]
    pub span: Option<String>,
    /// Span JSON file {"gamma", "white", "black", "embedW", "embedB"}.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct AnyInput {
    #[arg(long, help = format!("Builtin lattice: {BUILTIN_HELP}"))]
    pub builtin: Option<String>,
    #[arg(long, help = format!("Builtin span: {BUILTIN_SPANS_HELP}"))]
    pub span: Option<String>,
    /// Lattice or span JSON file; spans are recognised by their "gamma" key.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    B,
    Q,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Rank, parity, discriminant and number of roots.
    Info(LatticeInput),
    /// Theta series Σ q^{⟨v,v⟩/2} over the lattice or a translate.
    Theta {
        #[command(flatten)]
        input: LatticeInput,
        /// Largest norm ⟨v,v⟩ enumerated.
        #[arg(long, default_value = "4")]
        max_norm: String,
        /// Translate vector, comma-separated rationals in lattice coordinates.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Isotropic subgroups of the discriminant group and their overlattices.
    Overlattices {
        #[command(flatten)]
        input: LatticeInput,
        /// Which form must vanish: b (integral overlattices) or q (even overlattices).
        #[arg(long, value_enum, default_value = "b")]
        kind: KindArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpanCmd {
    /// Level, label groups and discriminants of a span.
    Info(SpanInput),
}

#[derive(Debug, Subcommand)]
pub enum RepsCmd {
    /// Isomorphism classes of irreducible positive-energy representations.
    Classify(AnyInput),
    /// Character series of one label.
    Character(LabelArgs),
    /// Decomposition of a label into translated heads up to a norm bound.
    Restriction {
        #[command(flatten)]
        label: LabelArgs,
        #[arg(long, default_value = "2")]
        max_norm: String,
    },
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[command(flatten)]
    pub input: AnyInput,
    /// Weight l, comma-separated rationals; defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    /// Character χ on (Λw∩Λb)/Γ, comma-separated integers (bicoloured only).
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<String>,
    /// Truncation order in q.
    #[arg(long, default_value_t = 3)]
    pub order: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    pub input: AnyInput,
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON array of loops; checks every triple instead of random samples (cocycle, commutator).
    #[arg(long)]
    pub loops: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FockCmd {
    /// Coherent vectors, Weyl unitarity, Heisenberg phase and rotation covariance at truncation.
    Check(FockArgs),
}

#[derive(Debug, Args)]
pub struct FockArgs {
    /// Dimension of 𝔱 with the standard form.
    #[arg(long, default_value_t = 2, conflicts_with = "builtin")]
    pub dim: usize,
    /// Use the Gram matrix of a builtin lattice as the form on 𝔱.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Fock degree cap K.
    #[arg(long, default_value_t = 20)]
    pub degree: usize,
    /// Highest Fourier mode of the random loops.
    #[arg(long, default_value_t = 4)]
    pub modes: i64,
    #[arg(long, default_value_t = 20)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Span(#[from] SpanError),
    #[error("{0}")]
    Glue(#[from] GlueError),
    #[error("{0}")]
    Series(#[from] SeriesError),
    #[error("{0}")]
    Reps(#[from] RepsError),
    #[error("{0}")]
    Harness(#[from] HarnessError),
    #[error("{0}")]
    Fock(#[from] FockError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                let stdout = line(&json!({ "status": "error", "error": e.kind().to_string() }));
                Output { code, stdout, stderr: text }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok((code, v)) => Output { code, stdout: line(&v), stderr: String::new() },
        Err(e) => {
            let msg = e.to_string();
            Output { code: 1, stdout: line(&json!({ "status": "error", "error": msg })), stderr: format!("error: {msg}\n") }
        }
    }
}

fn line(v: &Value) -> String {
    format!("{v}\n")
}

fn read(path: &PathBuf) -> Result<Value, CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    Ok(parse_json(&text)?)
}

fn lattice_input(i: &LatticeInput) -> Result<Lattice, CommandError> {
    match (&i.builtin, &i.file) {
        (Some(n), _) => Ok(parse_builtin(n)?),
        (_, Some(p)) => Ok(lattice_from_value(&read(p)?)?),
        _ => Err(CommandError::Usage("need --builtin or --file".into())),
    }
}

fn span_input(i: &SpanInput) -> Result<LatticeSpan, CommandError> {
    match (&i.span, &i.file) {
        (Some(n), _) => Ok(builtin_span(n)?),
        (_, Some(p)) => Ok(span_from_value(&read(p)?)?),
        _ => Err(CommandError::Usage("need --span or --file".into())),
    }
}

fn any_input(i: &AnyInput) -> Result<Target, CommandError> {
    match (&i.builtin, &i.span, &i.file) {
        (Some(n), _, _) => Ok(Target::Lattice(parse_builtin(n)?)),
        (_, Some(n), _) => Ok(Target::Span(builtin_span(n)?)),
        (_, _, Some(p)) => {
            let v = read(p)?;
            if v.get("gamma").is_some() {
                Ok(Target::Span(span_from_value(&v)?))
            } else {
                Ok(Target::Lattice(lattice_from_value(&v)?))
            }
        }
        _ => Err(CommandError::Usage("need --builtin, --span or --file".into())),
    }
}

fn rational_flag(name: &str, s: &str) -> Result<BigRational, CommandError> {
    parse_rational(s).ok_or_else(|| CommandError::Usage(format!("--{name}: expected p/q, got {s:?}")))
}

fn rational_list(name: &str, s: Option<&str>, n: usize) -> Result<RatVec, CommandError> {
    let Some(s) = s else {
        return Ok(vec![BigRational::zero(); n]);
    };
    let v: RatVec = s.split(',').map(|x| rational_flag(name, x)).collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(CommandError::Usage(format!("--{name}: expected {n} entries, got {}", v.len())));
    }
    Ok(v)
}

fn label_space(t: &Target) -> Result<LabelSpace, CommandError> {
    Ok(match t {
        Target::Lattice(l) => LabelSpace::unicoloured(l)?,
        Target::Span(s) => LabelSpace::bicoloured(&s.derive())?,
    })
}

fn label(args: &LabelArgs) -> Result<(LabelSpace, torusloop::reps::Label), CommandError> {
    let space = label_space(&any_input(&args.input)?)?;
    let l = rational_list("weight", args.weight.as_deref(), space.rank())?;
    let chi = match (&args.chi, space.character_group()) {
        (None, None) => None,
        (None, Some(c)) => Some(vec![BigInt::zero(); c.invariant_factors().len()]),
        (Some(_), None) => return Err(CommandError::Usage("--chi applies to spans only".into())),
        (Some(s), Some(_)) => Some(
            s.split(',')
                .map(|x| x.trim().parse().map_err(|_| CommandError::Usage(format!("--chi: expected integers, got {x:?}"))))
                .collect::<Result<_, _>>()?,
        ),
    };
    let a = space.label(chi, l)?;
    Ok((space, a))
}

fn factors(g: &torusloop::glue::FiniteAbelianPresentation) -> Value {
    ints_json(g.invariant_factors())
}

fn report(status: &str, payload: Value, counterexample: Option<Value>) -> Value {
    let mut v = json!({ "status": status, "payload": payload });
    if let Some(c) = counterexample {
        v["counterexample"] = c;
    }
    v
}

fn dispatch(cmd: &Command) -> Result<(i32, Value), CommandError> {
    let payload = match cmd {
        Command::Lattice(LatticeCmd::Info(i)) => {
            let l = lattice_input(i)?;
            let roots = l.short_vectors(&BigRational::from_integer(2.into()))?.iter().filter(|v| v.norm == BigRational::from_integer(2.into())).count();
            json!({ "rank": l.rank(), "even": l.is_even(), "disc": int_json(&l.disc()), "roots": roots })
        }
        Command::Lattice(LatticeCmd::Theta { input, max_norm, weight }) => {
            let l = lattice_input(input)?;
            let t = rational_list("weight", weight.as_deref(), l.rank())?;
            let bound = rational_flag("max-norm", max_norm)? / BigRational::from_integer(2.into());
            series_json(&theta_series(&l.as_sublattice(), &t, &bound)?)
        }
        Command::Lattice(LatticeCmd::Overlattices { input, kind }) => {
            let l = lattice_input(input)?;
            let form = DiscriminantForm::new(&l);
            let kind = match kind {
                KindArg::B => FormKind::B,
                KindArg::Q => FormKind::Q,
            };
            let mut out = Vec::new();
            for u in form.isotropic_subgroups(kind)? {
                let o = overlattice_from_isotropic(&form, &u)?;
                out.push(json!({
                    "generators": u.generators.iter().map(|g| ints_json(g)).collect::<Vec<_>>(),
                    "order": int_json(&u.order),
                    "evenOverlattice": o.lattice.is_even(),
                    "gram": matrix_json(o.lattice.gram()),
                }));
            }
            Value::Array(out)
        }
        Command::Span(SpanCmd::Info(i)) => {
            let s = span_input(i)?;
            let d = s.derive();
            let space = LabelSpace::bicoloured(&d)?;
            json!({
                "rank": s.rank(),
                "level": int_json(d.level()),
                "disc": { "gamma": int_json(&s.gamma.disc()), "white": int_json(&s.white.disc()), "black": int_json(&s.black.disc()) },
                "weightGroup": factors(space.weight_group()),
                "characterGroup": factors(space.character_group().expect("bicoloured")),
                "minCover": space.min_cover(),
            })
        }
        Command::Reps(RepsCmd::Classify(i)) => {
            let space = label_space(&any_input(i)?)?;
            let labels = space.classify();
            let kind = match space.kind() {
                Kind::Unicoloured => "unicoloured",
                Kind::Bicoloured => "bicoloured",
            };
            json!({ "kind": kind, "count": labels.len(), "labels": labels.iter().map(label_json).collect::<Vec<_>>() })
        }
        Command::Reps(RepsCmd::Character(args)) => {
            let (space, a) = label(args)?;
            series_json(&space.character(&a, args.order)?)
        }
        Command::Reps(RepsCmd::Restriction { label: args, max_norm }) => {
            let (space, a) = label(args)?;
            let terms = space.restriction(&a, &rational_flag("max-norm", max_norm)?)?;
            Value::Array(
                terms
                    .iter()
                    .map(|t| json!({ "lambda": vec_json(&t.lambda), "label": label_json(&t.label), "head": series_json(&t.head) }))
                    .collect(),
            )
        }
        Command::Verify(v) => {
            let target = any_input(&v.input)?;
            let loops = match &v.loops {
                None => None,
                Some(p) => match read(p)? {
                    Value::Array(a) => Some(a),
                    _ => return Err(CommandError::Usage("--loops: expected a JSON array of loops".into())),
                },
            };
            let o = run_suite(v.suite, &target, v.samples, v.seed, loops.as_deref())?;
            let payload = json!({
                "suite": v.suite.name(),
                "target": target_name(&v.input),
                "seed": v.seed,
                "samples": o.samples,
                "checks": o.checks,
            });
            return Ok(match o.counterexample {
                None => (0, report("pass", payload, None)),
                Some(c) => (2, report("fail", payload, Some(c.to_json()))),
            });
        }
        Command::Fock(FockCmd::Check(f)) => {
            let gram = match &f.builtin {
                Some(n) => Gram::from_rational(&parse_builtin(n)?.gram_rat())?,
                None if f.dim == 0 => return Err(CommandError::Fock(FockError::BadDim(1))),
                None => Gram::identity(f.dim),
            };
            let dim = gram.dim();
            let p = FockParams { gram, degree: f.degree, modes: f.modes.max(1), samples: f.samples, seed: f.seed, tol: f.tol };
            let o = fock_check(&p);
            let worst: serde_json::Map<String, Value> = o.worst.iter().map(|(k, w)| (k.to_string(), json!(w))).collect();
            let payload = json!({
                "dim": dim,
                "degree": f.degree,
                "modes": p.modes,
                "seed": f.seed,
                "samples": o.samples,
                "tol": f.tol,
                "worst": worst,
                "energyDims": o.energy_dims,
            });
            return Ok(match o.counterexample {
                None => (0, report("pass", payload, None)),
                Some(c) => (2, report("fail", payload, Some(c.to_json()))),
            });
        }
    };
    Ok((0, payload))
}

fn target_name(i: &AnyInput) -> Value {
    match (&i.builtin, &i.span, &i.file) {
        (Some(n), _, _) | (_, Some(n), _) => json!(n),
        (_, _, Some(p)) => json!(p.display().to_string()),
        _ => Value::Null,
    }
}
