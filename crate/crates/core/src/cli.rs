//! Command-line front end. Each command prints one report: JSON under the versioned schema
//! `ncline-report/1`, or an indented text rendering of the same payload. JSON reports carry
//! no timing, so identical requests give byte-identical output.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coherence::{
    augmentation_betti, chain_witness, ideal_presentation, rnci_extract, tor_betti, verify_certificate,
};
use crate::error::{Error, Result};
use crate::groebner::{complete_polys, preferred_order, two_sided_gb, ufnarovski_growth};
use crate::hilbert::{default_degree, hilbert_from_gb, hilbert_series, strongly_free_check, RationalSeries};
use crate::linalg::DegreeMatrix;
use crate::poly::NcPolynomial;
use crate::presentation::{parse_presentation_with_field, render_word, AlgebraPresentation};
use crate::qgr::{
    chi_check, cohomology_dims, distinguish_schemes, gamma_recovery, kronecker_endo,
    TruncatedGradedModule,
};
use crate::quadratic::{
    koszul_dual, minimal_decomposition, rank2_subspace_seeded, tensor_rank, zhang_regular_check, zhang_twist,
    GradedAutomorphism, QuadraticTensor,
};
use crate::scalar::{Field, Scalar};
use crate::word::{MonomialOrder, Word};

pub const SCHEMA: &str = "ncline-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ncline", version, about = "Exact computations for finitely presented graded algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Degree bound D.
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    /// Ground field override: `Q` or `F<p>`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for independent sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Presentation file.
    #[arg(long = "in")]
    pub path: Option<PathBuf>,
    /// Presentation text given inline.
    #[arg(long)]
    pub inline: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Two-sided Groebner basis.
    Gb {
        #[command(flatten)]
        input: Input,
        /// Generator precedence, largest first, e.g. `x3,x1,x2`.
        #[arg(long)]
        order: Option<String>,
    },
    /// Normal words of one degree.
    NormalWords {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Hilbert series through D, with the closed form for regular algebras.
    Hilbert {
        #[command(flatten)]
        input: Input,
    },
    /// Tensor rank of a quadratic relation.
    Rank {
        #[command(flatten)]
        input: Input,
    },
    /// Minimal decomposition and rank-two projection of a quadratic relation.
    Decompose {
        #[command(flatten)]
        input: Input,
    },
    /// Regularity test for one-relator algebras.
    Regular {
        #[command(flatten)]
        input: Input,
    },
    /// Strongly-free test for a set of elements via the Hilbert series of the quotient.
    StronglyFree {
        #[command(flatten)]
        input: Input,
        /// Comma-separated elements of X.
        #[arg(long)]
        x: String,
    },
    /// Coherence certificate with an independent re-check.
    CoherenceCert {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 5)]
        tor_degree: u32,
    },
    /// Minimal presentation of a right ideal.
    IdealPres {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        gens: String,
    },
    /// Tor dimensions of A/J, or of k when no generators are given.
    Betti {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        gens: Option<String>,
    },
    /// Strictly ascending chain of right ideals in the cyclic algebra.
    ChainWitness {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        t_max: u32,
    },
    /// Sections of the twisting sheaves in the tails category, compared with A.
    Gamma {
        #[command(flatten)]
        input: Input,
    },
    /// Graded Ext(k, M); M is a sum of `k`, `A` and shifts such as `A[1]`.
    Chi {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "k")]
        module: String,
    },
    /// H^0, H^1 and H^2 of the twisting sheaves on the noncommutative projective line.
    Cohomology {
        #[command(flatten)]
        input: Input,
    },
    /// Endomorphism dimensions of the tilting pair, compared with the Kronecker quiver.
    Kronecker {
        #[command(flatten)]
        input: Input,
    },
    /// Koszul dual presentation and the numerical Koszul identity.
    KoszulDual {
        #[command(flatten)]
        input: Input,
    },
    /// Zhang twist by the automorphism sending the generators to the given images.
    Twist {
        #[command(flatten)]
        input: Input,
        /// Comma-separated images of the generators, in order.
        #[arg(long)]
        sigma: String,
    },
    /// Compares two one-relator algebras by their tails categories.
    Distinguish {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gb { .. } => "gb",
            Command::NormalWords { .. } => "normal-words",
            Command::Hilbert { .. } => "hilbert",
            Command::Rank { .. } => "rank",
            Command::Decompose { .. } => "decompose",
            Command::Regular { .. } => "regular",
            Command::StronglyFree { .. } => "strongly-free",
            Command::CoherenceCert { .. } => "coherence-cert",
            Command::IdealPres { .. } => "ideal-pres",
            Command::Betti { .. } => "betti",
            Command::ChainWitness { .. } => "chain-witness",
            Command::Gamma { .. } => "gamma",
            Command::Chi { .. } => "chi",
            Command::Cohomology { .. } => "cohomology",
            Command::Kronecker { .. } => "kronecker",
            Command::KoszulDual { .. } => "koszul-dual",
            Command::Twist { .. } => "twist",
            Command::Distinguish { .. } => "distinguish",
        }
    }
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Inconclusive,
    Error,
}

#[derive(Serialize, Debug)]
struct Request {
    input: Vec<String>,
    bound: Option<u32>,
    field: Option<String>,
    seed: u64,
}

#[derive(Serialize, Debug)]
struct Report {
    schema: &'static str,
    command: &'static str,
    request: Request,
    status: Status,
    certification: Value,
    result: Value,
    warnings: Vec<String>,
}

/// Payload of a successful command.
struct Payload {
    result: Value,
    certification: Value,
    warnings: Vec<String>,
    status: Status,
}

impl Payload {
    fn ok(result: Value, certification: Value) -> Self {
        Payload {
            result,
            certification,
            warnings: Vec::new(),
            status: Status::Ok,
        }
    }

    fn inconclusive_if(mut self, cond: bool, why: &str) -> Self {
        if cond {
            self.status = Status::Inconclusive;
            self.warnings.push(why.to_string());
        }
        self
    }
}

/// Printed output and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AboveCertification { .. } | Error::WindowTooNarrow { .. } | Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.jobs.unwrap_or(0))
        .build()
        .expect("thread pool");
    let outcome = pool.install(|| dispatch(&cli.command, &cli.common));
    let (status, payload, err) = match outcome {
        Ok(p) => (p.status, Some(p), None),
        Err(e) => {
            let s = if exit_code(&e) == EXIT_INCONCLUSIVE {
                Status::Inconclusive
            } else {
                Status::Error
            };
            (s, None, Some(e))
        }
    };
    let report = Report {
        schema: SCHEMA,
        command: cli.command.name(),
        request: Request {
            input: input_labels(&cli.command),
            bound: cli.common.bound,
            field: cli.common.field.clone(),
            seed: cli.common.seed,
        },
        status,
        certification: payload.as_ref().map_or(json!({}), |p| p.certification.clone()),
        result: match (&payload, &err) {
            (Some(p), _) => p.result.clone(),
            (None, Some(e)) => json!({ "error": e.to_string() }),
            _ => Value::Null,
        },
        warnings: payload.as_ref().map_or_else(Vec::new, |p| p.warnings.clone()),
    };
    let code = match (&err, status) {
        (Some(e), _) => exit_code(e),
        (None, Status::Inconclusive) => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    };
    let stdout = match cli.common.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Text => {
            let mut out = render_text(&report);
            out.push_str(&format!("elapsed: {} ms\n", start.elapsed().as_millis()));
            out
        }
    };
    let stderr = err.map(|e| format!("ncline: {e}\n")).unwrap_or_default();
    Outcome { stdout, stderr, code }
}

fn input_labels(c: &Command) -> Vec<String> {
    let label = |i: &Input| match (&i.path, &i.inline) {
        (Some(p), _) => vec![p.display().to_string()],
        (None, Some(s)) => vec![s.clone()],
        _ => Vec::new(),
    };
    match c {
        Command::Gb { input, .. }
        | Command::NormalWords { input, .. }
        | Command::Hilbert { input }
        | Command::Rank { input }
        | Command::Decompose { input }
        | Command::Regular { input }
        | Command::StronglyFree { input, .. }
        | Command::CoherenceCert { input, .. }
        | Command::IdealPres { input, .. }
        | Command::Betti { input, .. }
        | Command::Gamma { input }
        | Command::Chi { input, .. }
        | Command::Cohomology { input }
        | Command::Kronecker { input }
        | Command::KoszulDual { input }
        | Command::Twist { input, .. } => label(input),
        Command::Distinguish { a, b } => vec![a.display().to_string(), b.display().to_string()],
        Command::ChainWitness { .. } => Vec::new(),
    }
}

fn render_text(r: &Report) -> String {
    let mut out = format!("ncline {} [{}]: {}\n", r.command, SCHEMA, status_word(r.status));
    if r.certification.as_object().is_some_and(|m| !m.is_empty()) {
        out.push_str("certification:\n");
        render_value(&r.certification, 1, &mut out);
    }
    out.push_str("result:\n");
    render_value(&r.result, 1, &mut out);
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Inconclusive => "inconclusive",
        Status::Error => "error",
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match (scalar_text(x), x) {
                    (Some(s), _) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    (None, Value::String(text)) => {
                        out.push_str(&format!("{pad}{k}: |\n"));
                        for line in text.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    (None, _) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        let mut item = String::new();
                        render_value(x, depth + 1, &mut item);
                        match item.strip_prefix(&format!("{pad}  ")) {
                            Some(rest) if !item.is_empty() => out.push_str(&format!("{pad}- {rest}")),
                            _ => out.push_str(&format!("{pad}-\n{item}")),
                        }
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}

pub fn parse_field(s: &str) -> Result<Field> {
    if s == "Q" {
        return Ok(Field::Rational);
    }
    let p = s
        .strip_prefix('F')
        .and_then(|p| p.parse::<u32>().ok())
        .ok_or_else(|| Error::Parameter(format!("unknown field `{s}`; use Q or F<p>")))?;
    Field::prime(p)
}

impl Input {
    fn load(&self, field: Option<Field>) -> Result<AlgebraPresentation> {
        let text = match (&self.path, &self.inline) {
            (Some(p), None) => std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
            (None, Some(s)) => s.clone(),
            (Some(_), Some(_)) => return Err(Error::Parameter("give either --in or --inline, not both".into())),
            (None, None) => return Err(Error::Parameter("missing input: use --in <file> or --inline <text>".into())),
        };
        parse_presentation_with_field(&text, field)
    }
}

fn poly_list(pres: &AlgebraPresentation, s: &str) -> Result<Vec<NcPolynomial>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| pres.parse_poly(t))
        .collect()
}

fn linear_form(pres: &AlgebraPresentation, v: &[Scalar]) -> String {
    let f = pres.field();
    let p = NcPolynomial::from_terms(f, v.iter().enumerate().map(|(i, c)| (Word::letter(i), c.clone())));
    pres.poly_to_string(&p)
}

fn matrix_text(m: &DegreeMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|c| c.to_string()).collect()).collect()
}

fn polys_text(pres: &AlgebraPresentation, ps: &[NcPolynomial]) -> Vec<String> {
    ps.iter().map(|p| pres.poly_to_string(p)).collect()
}

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn single_quadratic(pres: &AlgebraPresentation) -> Result<QuadraticTensor> {
    if pres.relations().len() != 1 || !pres.is_degree_one_generated() {
        return Err(Error::Unsupported("needs one quadratic relation in degree-one generators".into()));
    }
    QuadraticTensor::from_poly(&pres.relations()[0], pres.n())
}

/// `k`, `A`, shifts such as `A[1]` and sums of these.
fn parse_module(pres: &AlgebraPresentation, spec: &str, window: (i32, i32)) -> Result<TruncatedGradedModule> {
    let mut out: Option<TruncatedGradedModule> = None;
    for term in spec.split('+').map(str::trim) {
        let (base, shift) = match term.split_once('[') {
            Some((b, rest)) => {
                let k = rest
                    .strip_suffix(']')
                    .and_then(|k| k.trim().parse::<i32>().ok())
                    .ok_or_else(|| Error::Parameter(format!("bad shift in `{term}`")))?;
                (b.trim(), k)
            }
            None => (term, 0),
        };
        let w = (window.0 + shift, window.1 + shift);
        let m = match base {
            "k" => TruncatedGradedModule::residue_field(pres, w),
            "A" => TruncatedGradedModule::algebra(w),
            _ => return Err(Error::Parameter(format!("unknown module `{base}`; use k, A and shifts"))),
        }
        .shift(shift);
        out = Some(match out {
            None => m,
            Some(acc) => acc.direct_sum(&m, pres.field()),
        });
    }
    out.ok_or_else(|| Error::Parameter("empty module".into()))
}

fn dispatch(cmd: &Command, common: &Common) -> Result<Payload> {
    let field = common.field.as_deref().map(parse_field).transpose()?;
    let bound = |d: u32| common.bound.unwrap_or(d);
    Ok(match cmd {
        Command::Gb { input, order } => {
            let pres = input.load(field)?;
            let d = bound(10);
            let order = match order {
                None => pres.default_order(),
                Some(o) => {
                    let prec = o
                        .split(',')
                        .map(|s| pres.generator_index(s.trim()).ok_or_else(|| Error::UnknownGenerator(s.trim().into())))
                        .collect::<Result<Vec<_>>>()?;
                    MonomialOrder::new(prec, &pres.weights())?
                }
            };
            let gb = two_sided_gb(&pres, &order, d)?;
            let names = pres.names();
            Payload::ok(
                json!({
                    "order": order.precedence().iter().map(|&i| names[i].clone()).collect::<Vec<_>>(),
                    "complete": gb.is_complete(),
                    "size": gb.len(),
                    "elements": polys_text(&pres, &gb.elements()),
                    "elements_by_degree": gb.elements_by_degree(),
                    "normal_word_counts": gb.normal_word_counts(d)?,
                }),
                json!({ "bound": d, "complete": gb.is_complete() }),
            )
            .inconclusive_if(!gb.is_complete(), "basis not complete: overlaps remain above the bound")
        }
        Command::NormalWords { input, degree, limit } => {
            let pres = input.load(field)?;
            let d = degree.unwrap_or(bound(4));
            let gb = two_sided_gb(&pres, &pres.default_order(), d)?;
            let words = gb.normal_words(d)?;
            let names = pres.names();
            Payload::ok(
                json!({
                    "degree": d,
                    "count": words.len(),
                    "words": words.iter().take(*limit).map(|w| render_word(w, &names)).collect::<Vec<_>>(),
                    "truncated": words.len() > *limit,
                }),
                json!({ "bound": d }),
            )
        }
        Command::Hilbert { input } => {
            let pres = input.load(field)?;
            let d = bound(10);
            let gb = two_sided_gb(&pres, &pres.default_order(), d)?;
            let series = hilbert_from_gb(&gb, d)?;
            let growth = (gb.is_complete() && pres.is_degree_one_generated())
                .then(|| ufnarovski_growth(&gb).map(|(g, _)| value(&g)))
                .transpose()?;
            let reg = zhang_regular_check(&pres);
            let rational = reg
                .is_regular
                .then(|| RationalSeries::regular_two(&pres.weights(), reg.gorenstein_shift));
            let rational_matches = rational.as_ref().map(|r| r.expand(d).map(|e| e == series)).transpose()?;
            Payload::ok(
                json!({
                    "coefficients": series.coeffs(),
                    "rational": rational.map(|r| r.to_string()),
                    "rational_matches": rational_matches,
                    "growth": growth,
                }),
                json!({ "bound": d, "complete": gb.is_complete() }),
            )
        }
        Command::Rank { input } => {
            let pres = input.load(field)?;
            let t = single_quadratic(&pres)?;
            Payload::ok(
                json!({ "n": t.n(), "rank": tensor_rank(&t), "matrix": matrix_text(&t.m) }),
                json!({}),
            )
        }
        Command::Decompose { input } => {
            let pres = input.load(field)?;
            let t = single_quadratic(&pres)?;
            let parts = minimal_decomposition(&t);
            let terms: Vec<Value> = parts
                .iter()
                .map(|(l, a)| json!({ "left": linear_form(&pres, l), "right": linear_form(&pres, a) }))
                .collect();
            let split = (parts.len() >= 2)
                .then(|| rank2_subspace_seeded(&t, common.seed))
                .transpose()?
                .map(|s| {
                    json!({
                        "projection": (0..s.p.rows()).map(|r| linear_form(&pres, s.p.row(r))).collect::<Vec<_>>(),
                        "kernel": s.w.iter().map(|w| linear_form(&pres, w)).collect::<Vec<_>>(),
                        "b_prime": matrix_text(&s.b_prime.m),
                    })
                });
            Payload::ok(json!({ "rank": parts.len(), "terms": terms, "rank2_split": split }), json!({}))
        }
        Command::Regular { input } => {
            let pres = input.load(field)?;
            Payload::ok(value(&zhang_regular_check(&pres).summary(&pres)), json!({}))
        }
        Command::StronglyFree { input, x } => {
            let pres = input.load(field)?;
            let d = bound(default_degree(&pres));
            let xs = poly_list(&pres, x)?;
            let r = strongly_free_check(&pres, &xs, d)?;
            let names = pres.names();
            Payload::ok(
                json!({
                    "verdict": value(&r.verdict),
                    "h_a": r.h_a.coeffs(),
                    "h_b": r.h_b.coeffs(),
                    "defect": r.defect_series.coeffs(),
                    "order": r.order.precedence().iter().map(|&i| names[i].clone()).collect::<Vec<_>>(),
                }),
                json!({ "degree": d }),
            )
        }
        Command::CoherenceCert { input, tor_degree } => {
            let pres = input.load(field)?;
            let d = bound(10);
            let cert = rnci_extract(&pres, d)?;
            let check = verify_certificate(&pres, &cert, *tor_degree)?;
            let valid = check.valid;
            Payload::ok(
                json!({ "certificate": value(&cert.report(&pres)), "check": value(&check) }),
                json!({ "bound": d, "tor_degree": tor_degree }),
            )
            .inconclusive_if(!valid, "certificate failed its independent re-check")
        }
        Command::IdealPres { input, gens } => {
            let pres = input.load(field)?;
            let d = bound(8);
            let gb = complete_polys(pres.field(), pres.relations(), &preferred_order(&pres), d, false);
            let g = poly_list(&pres, gens)?;
            let (ip, betti) = ideal_presentation(&gb, &g, d)?;
            let syz: Vec<Value> = ip
                .syzygies
                .iter()
                .map(|s| json!({ "degree": s.degree, "components": polys_text(&pres, &s.components) }))
                .collect();
            let stable = betti.stabilized;
            Payload::ok(
                json!({
                    "generators": polys_text(&pres, &ip.generators),
                    "generator_degrees": ip.generator_degrees,
                    "pruned": ip.pruned,
                    "syzygies": syz,
                    "betti": value(&betti),
                }),
                json!({ "certified_degree": ip.certified_degree }),
            )
            .inconclusive_if(!stable, "syzygies appear near the bound; raise --bound")
        }
        Command::Betti { input, gens } => {
            let pres = input.load(field)?;
            let d = bound(8);
            let betti = match gens {
                Some(g) => tor_betti(&pres, &poly_list(&pres, g)?, d)?,
                None => augmentation_betti(&pres, d)?,
            };
            let stable = betti.stabilized;
            Payload::ok(value(&betti), json!({ "certified_degree": betti.certified_degree }))
                .inconclusive_if(!stable, "syzygies appear near the bound; raise --bound")
        }
        Command::ChainWitness { n, t_max } => {
            let d = bound(12);
            Payload::ok(value(&chain_witness(*n, *t_max, d)?), json!({ "bound": d }))
        }
        Command::Gamma { input } => {
            let pres = input.load(field)?;
            let d = bound(6);
            let g = gamma_recovery(&pres, d)?;
            let open = g.entries.iter().any(|e| !e.stabilized);
            Payload::ok(value(&g), json!({ "degrees": [0, d] }))
                .inconclusive_if(open, "some degrees did not stabilize over three cutoffs")
        }
        Command::Chi { input, module } => {
            let pres = input.load(field)?;
            let d = bound(4);
            let s = zhang_regular_check(&pres).gorenstein_shift as i32;
            let m = parse_module(&pres, module, (0, s + d as i32))?;
            let r = chi_check(&pres, &m, d as i32)?;
            Payload::ok(value(&r), json!({ "window": [r.window.0, r.window.1] }))
        }
        Command::Cohomology { input } => {
            let pres = input.load(field)?;
            let d = bound(4);
            let t = cohomology_dims(&pres, d)?;
            let open = t.h0.iter().chain(&t.h1).any(|e| !e.stabilized);
            Payload::ok(value(&t), json!({ "window": [t.window.0, t.window.1] }))
                .inconclusive_if(open, "some entries did not stabilize over three cutoffs")
        }
        Command::Kronecker { input } => {
            let pres = input.load(field)?;
            let r = kronecker_endo(&pres)?;
            let open = r.dims.iter().any(Option::is_none);
            Payload::ok(value(&r), json!({}))
                .inconclusive_if(open, "some Hom dimensions did not stabilize over three cutoffs")
        }
        Command::KoszulDual { input } => {
            let pres = input.load(field)?;
            let d = bound(10);
            let dual = koszul_dual(&pres)?;
            let (ha, hd) = (hilbert_series(&pres, d), hilbert_series(&dual, d));
            let identity = ha.mul(&hd.alternate()) == crate::hilbert::PowerSeriesTrunc::one(d);
            Payload::ok(
                json!({
                    "dual": dual.render(),
                    "relations": polys_text(&dual, dual.relations()),
                    "hilbert_dual": hd.coeffs(),
                    "koszul_identity": identity,
                }),
                json!({ "degree": d }),
            )
        }
        Command::Twist { input, sigma } => {
            let pres = input.load(field)?;
            let d = bound(10);
            let images = poly_list(&pres, sigma)?;
            if images.len() != pres.n() {
                return Err(Error::Parameter(format!("sigma needs {} images, got {}", pres.n(), images.len())));
            }
            let tw = zhang_twist(&pres, &GradedAutomorphism { images })?;
            Payload::ok(
                json!({
                    "twisted": tw.render(),
                    "relations": polys_text(&tw, tw.relations()),
                    "hilbert_preserved": hilbert_series(&tw, d) == hilbert_series(&pres, d),
                }),
                json!({ "degree": d }),
            )
        }
        Command::Distinguish { a, b } => {
            let load = |p: &PathBuf| {
                Input {
                    path: Some(p.clone()),
                    inline: None,
                }
                .load(field)
            };
            let (pa, pb) = (load(a)?, load(b)?);
            let d = bound(10);
            Payload::ok(value(&distinguish_schemes(&pa, &pb, d)?), json!({ "degree": d.max(4) }))
        }
    })
}
