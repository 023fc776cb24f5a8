//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse error (arguments, JSON syntax,
//! expressions), 3 invalid spec or unsupported input, 4 internal limit
//! exceeded. `BUNDLECHOW_MAX_BASIS` caps the Chow basis size.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::autdesc::{describe_aut_multi, describe_aut_sym, GroupDescriptor};
use crate::chowring::{ChowPresentation, DEFAULT_MAX_BASIS};
use crate::classify::{multi_iso_check, IsoVerdict, ObstructionReason, PsiNote};
use crate::error::Error;
use crate::expr::parse_poly;
use crate::fibration::{
    chow_structure_search, lemma_alg_check, lemma_alg_harness, nilpotent_degree_one_classes, second_fibration_exists,
    MonicSolve, SecondFibration, DEFAULT_BOUND,
};
use crate::par::Strategy;
use crate::poly::Poly;
use crate::spec::{parse_spec, SpecError, SpecFile};
use crate::symgeom::{sym_invariants, sym_iso_check, StratumReport};

pub const MAX_BASIS_ENV: &str = "BUNDLECHOW_MAX_BASIS";

/// Largest search box `(2·bound+1)^(r+1)` a command will sweep.
pub const MAX_SEARCH_BOX: u64 = 5_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub payload: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "bundlechow", version, about = "Chow rings and isomorphism tests for multiprojective bundles over P^n")]
struct Cli {
    #[command(subcommand)]
    group: Group,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized harnesses.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Chow ring presentations.
    Chow {
        #[command(subcommand)]
        cmd: ChowCmd,
    },
    /// Degree-one classes and alternative bundle structures.
    Fib {
        #[command(subcommand)]
        cmd: FibCmd,
    },
    /// Isomorphism tests.
    Iso {
        #[command(subcommand)]
        cmd: IsoCmd,
    },
    /// Relative symmetric powers.
    Sym {
        #[command(subcommand)]
        cmd: SymCmd,
    },
    /// Automorphism group descriptors.
    Aut {
        #[command(subcommand)]
        cmd: AutCmd,
    },
    /// Checks of auxiliary statements on concrete instances.
    Check {
        #[command(subcommand)]
        cmd: CheckCmd,
    },
}

#[derive(Debug, Subcommand)]
enum ChowCmd {
    Build {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Normal form of an expression in t, u1, .., ur.
    Nf {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        expr: String,
    },
    Betti {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum FibCmd {
    /// Primitive degree-one classes x with x^(n+1) = 0.
    Classes {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND as u32)]
        bound: u32,
    },
    /// Whether a second projective-bundle structure exists.
    Exists {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Integer matrix inducing a graded ring isomorphism left -> right.
    Search {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND as u32)]
        bound: u32,
    },
}

#[derive(Debug, Subcommand)]
enum IsoCmd {
    Multi {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Compares S^r of the left factor with S^s of the right factor.
    Sym {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        s: u32,
    },
}

#[derive(Debug, Subcommand)]
enum SymCmd {
    Invariants {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Subcommand)]
enum AutCmd {
    Multi {
        #[arg(long)]
        spec: PathBuf,
    },
    Sym {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        r: u32,
    },
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// One instance (`--matrix`, `--g1`, `--g2`, `--n`) or `--random COUNT` seeded instances.
    LemmaAlg {
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, conflicts_with = "random", requires_all = ["g1", "g2", "n"])]
        matrix: Option<String>,
        #[arg(long)]
        g1: Option<String>,
        #[arg(long)]
        g2: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, required_unless_present = "matrix")]
        random: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChowBuildPayload {
    pub base: u32,
    pub ranks: Vec<usize>,
    pub relations: Vec<String>,
    pub basis: Vec<String>,
    pub betti: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormPayload {
    pub input: String,
    pub normal_form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiPayload {
    pub betti: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassesPayload {
    pub classes: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExistsPayload {
    pub exists: bool,
    pub case: SecondFibration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchPayload {
    pub bound: u32,
    pub matrix: Option<Vec<Vec<i64>>>,
    pub note: String,
}

/// A ring isomorphism is necessary, not sufficient, for the varieties to agree.
pub const SEARCH_NOTE: &str = "ring isomorphism only: necessary, not sufficient, for an isomorphism of varieties";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificatePayload {
    /// 1-based: left factor `i` matches right factor `sigma[i-1]`.
    pub sigma: Vec<usize>,
    pub shifts: Vec<i64>,
    pub psi: PsiNote,
    pub second_fibration: SecondFibration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionPayload {
    pub reason: ObstructionReason,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VerdictPayload {
    Isomorphic { certificate: CertificatePayload },
    NotIsomorphic { obstruction: ObstructionPayload },
}

impl From<IsoVerdict> for VerdictPayload {
    fn from(v: IsoVerdict) -> Self {
        match v {
            IsoVerdict::Isomorphic(c) => VerdictPayload::Isomorphic {
                certificate: CertificatePayload {
                    sigma: c.sigma.iter().map(|s| s + 1).collect(),
                    shifts: c.shifts,
                    psi: c.psi,
                    second_fibration: c.second_fibration,
                },
            },
            IsoVerdict::NotIsomorphic(o) => VerdictPayload::NotIsomorphic {
                obstruction: ObstructionPayload {
                    reason: o.reason,
                    detail: o.detail,
                },
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaAlgPayload {
    pub matrix: Vec<Vec<i64>>,
    pub n: u32,
    pub x_nilpotent: bool,
    /// Monic forms `F_1`, `F_2`, or `None` when no rational solution exists.
    pub forms: Option<Vec<String>>,
    /// Root averages as reduced fractions.
    pub alpha: Vec<String>,
    pub centered: bool,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    pub counterexample: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessPayload {
    pub seed: u64,
    pub instances: usize,
    pub nilpotent: usize,
    pub forms_found: usize,
    pub hypotheses_held: usize,
    pub centered: usize,
    pub counterexamples: Vec<LemmaAlgPayload>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorPayload {
    pub error: String,
    pub exit_code: i32,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::BasisLimit { .. } | Error::Overflow(_) => EXIT_LIMIT,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        let code = match e {
            SpecError::Malformed(_) => EXIT_PARSE,
            SpecError::Invalid(_) => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: message.into(),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit_code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            return CommandResult {
                exit_code,
                payload: e.render().to_string(),
            };
        }
    };
    let format = cli.format;
    match dispatch(cli) {
        Ok(payload) => CommandResult {
            exit_code: EXIT_OK,
            payload,
        },
        Err(f) => CommandResult {
            exit_code: f.code,
            payload: match format {
                Format::Text => format!("error: {}\n", f.message),
                Format::Json => to_json(&ErrorPayload {
                    error: f.message,
                    exit_code: f.code,
                }),
            },
        },
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("payloads serialize");
    s.push('\n');
    s
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Text => text(value),
    }
}

fn read_spec(path: &Path) -> Result<SpecFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_failure(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_spec(&text)?)
}

fn max_basis() -> Result<u128, Failure> {
    match std::env::var(MAX_BASIS_ENV) {
        Err(_) => Ok(DEFAULT_MAX_BASIS),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| parse_failure(format!("{MAX_BASIS_ENV} must be a non-negative integer (got {v:?})"))),
    }
}

fn presentation(spec: &SpecFile) -> Result<ChowPresentation, Failure> {
    Ok(ChowPresentation::build_with_limit(spec.base, &spec.expanded(), max_basis()?)?)
}

fn check_box(dim: usize, bound: u32) -> Result<i64, Failure> {
    let side = 2 * u64::from(bound) + 1;
    match side.checked_pow(dim as u32) {
        Some(size) if size <= MAX_SEARCH_BOX => Ok(i64::from(bound)),
        _ => Err(Failure {
            code: EXIT_LIMIT,
            message: format!("search box ({side})^{dim} exceeds limit {MAX_SEARCH_BOX}"),
        }),
    }
}

fn json_ints<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(T::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn matrix_text(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| json_ints(r)).collect();
    format!("[{}]", rows.join(","))
}

fn verdict_text(v: &VerdictPayload) -> String {
    match v {
        VerdictPayload::Isomorphic { certificate: c } => format!(
            "isomorphic\nsigma: {}\nshifts: {}\npsi: {}\nsecond fibration: {}\n",
            json_ints(&c.sigma),
            json_ints(&c.shifts),
            match c.psi {
                PsiNote::Identity => "identity",
                PsiNote::Unspecified => "unspecified",
            },
            c.second_fibration
        ),
        VerdictPayload::NotIsomorphic { obstruction: o } => {
            format!("not isomorphic\nreason: {}\ndetail: {}\n", o.reason, o.detail)
        }
    }
}

fn group_text(g: &GroupDescriptor) -> String {
    format!(
        "{}\ndimension: {}\ncomponent order: {}\n",
        g.expression, g.dimension, g.component_order
    )
}

fn lemma_payload(r: &crate::fibration::LemmaAlgReport) -> LemmaAlgPayload {
    LemmaAlgPayload {
        matrix: r.matrix.clone(),
        n: r.n,
        x_nilpotent: r.x_nilpotent,
        forms: match &r.forms {
            MonicSolve::Found(fs) => Some(fs.iter().map(ToString::to_string).collect()),
            MonicSolve::Failed { .. } => None,
        },
        alpha: r.alpha.iter().map(ToString::to_string).collect(),
        centered: r.centered,
        hypotheses_hold: r.hypotheses_hold,
        conclusion_holds: r.conclusion_holds,
        counterexample: r.counterexample,
    }
}

fn parse_matrix(src: &str) -> Result<Vec<Vec<i64>>, Failure> {
    src.split(';')
        .map(|row| {
            row.split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| parse_failure(format!("bad matrix entry {c:?}"))))
                .collect()
        })
        .collect()
}

fn dispatch(cli: Cli) -> Result<String, Failure> {
    let fmt = cli.format;
    match cli.group {
        Group::Chow { cmd } => match cmd {
            ChowCmd::Build { spec } => {
                let p = presentation(&read_spec(&spec)?)?;
                let payload = ChowBuildPayload {
                    base: p.n(),
                    ranks: p.ranks().to_vec(),
                    relations: p.relations().iter().map(ToString::to_string).collect(),
                    basis: p
                        .basis()
                        .iter()
                        .map(|m| Poly::term(p.nvars(), m.clone(), 1).to_string())
                        .collect(),
                    betti: p.betti(),
                };
                Ok(render(fmt, &payload, |b| {
                    let mut s = format!("base: P^{}\nranks: {}\nrelations:\n", b.base, json_ints(&b.ranks));
                    for rel in &b.relations {
                        let _ = writeln!(s, "  {rel} = 0");
                    }
                    let _ = writeln!(s, "basis: {}", b.basis.join(", "));
                    let _ = writeln!(s, "betti: {}", json_ints(&b.betti));
                    s
                }))
            }
            ChowCmd::Nf { spec, expr } => {
                let p = presentation(&read_spec(&spec)?)?;
                let f = parse_poly(&expr, p.nvars())?;
                let payload = NormalFormPayload {
                    input: f.to_string(),
                    normal_form: p.normal_form(&f).to_string(),
                };
                Ok(render(fmt, &payload, |nf| format!("{}\n", nf.normal_form)))
            }
            ChowCmd::Betti { spec } => {
                let p = presentation(&read_spec(&spec)?)?;
                let payload = BettiPayload { betti: p.betti() };
                Ok(render(fmt, &payload, |b| format!("{}\n", json_ints(&b.betti))))
            }
        },
        Group::Fib { cmd } => match cmd {
            FibCmd::Classes { spec, bound } => {
                let p = presentation(&read_spec(&spec)?)?;
                let bound = check_box(p.nvars(), bound)?;
                let classes = nilpotent_degree_one_classes(&p, bound);
                let text: Vec<String> = classes.iter().map(ToString::to_string).collect();
                let payload = ClassesPayload {
                    classes: classes.iter().map(|c| c.coeffs().to_vec()).collect(),
                };
                Ok(render(fmt, &payload, |_| text.iter().map(|c| format!("{c}\n")).collect()))
            }
            FibCmd::Exists { spec } => {
                let spec = read_spec(&spec)?;
                let case = second_fibration_exists(spec.base, &spec.expanded())?;
                let payload = ExistsPayload {
                    exists: case.exists(),
                    case,
                };
                Ok(render(fmt, &payload, |e| format!("{} ({})\n", e.exists, e.case)))
            }
            FibCmd::Search { left, right, bound } => {
                let pl = presentation(&read_spec(&left)?)?;
                let pr = presentation(&read_spec(&right)?)?;
                let b = check_box(pr.nvars(), bound)?;
                let payload = SearchPayload {
                    bound,
                    matrix: chow_structure_search(&pl, &pr, b),
                    note: SEARCH_NOTE.to_string(),
                };
                Ok(render(fmt, &payload, |s| match &s.matrix {
                    Some(m) => format!("ring isomorphism: {}\nnote: {}\n", matrix_text(m), s.note),
                    None => format!("no ring isomorphism with entries in [-{0}, {0}]\n", s.bound),
                }))
            }
        },
        Group::Iso { cmd } => {
            let verdict = match cmd {
                IsoCmd::Multi { left, right } => {
                    multi_iso_check(&read_spec(&left)?.to_multi(), &read_spec(&right)?.to_multi())?
                }
                IsoCmd::Sym { left, r, right, s } => {
                    sym_iso_check(&read_spec(&left)?.to_sym(r)?, &read_spec(&right)?.to_sym(s)?)?
                }
            };
            Ok(render(fmt, &VerdictPayload::from(verdict), verdict_text))
        }
        Group::Sym {
            cmd: SymCmd::Invariants { n, r, p },
        } => {
            let report = sym_invariants(n, r, p)?;
            Ok(render(fmt, &report, |s: &StratumReport| {
                format!(
                    "dim: {}\nsing codim: {}\ndiagonal: Sing^{} (dim {})\nempty: Sing^{}\npicard rank: {}\n{}\n",
                    s.total_dim, s.sing_codim, s.diag_level, s.diag_dim, s.empty_level, s.picard_rank, s.class_group_note
                )
            }))
        }
        Group::Aut { cmd } => {
            let g = match cmd {
                AutCmd::Multi { spec } => {
                    let spec = read_spec(&spec)?;
                    describe_aut_multi(spec.base, &spec.grouped())?
                }
                AutCmd::Sym { spec, r } => {
                    let spec = read_spec(&spec)?;
                    describe_aut_sym(spec.base, r, spec.single_factor()?)?
                }
            };
            Ok(render(fmt, &g, group_text))
        }
        Group::Check {
            cmd:
                CheckCmd::LemmaAlg {
                    matrix,
                    g1,
                    g2,
                    n,
                    random,
                },
        } => match (matrix, random) {
            (Some(m), _) => {
                let m = parse_matrix(&m)?;
                let g1 = parse_poly(g1.as_deref().unwrap_or_default(), 3)?;
                let g2 = parse_poly(g2.as_deref().unwrap_or_default(), 3)?;
                let report = lemma_alg_check(&m, &g1, &g2, n.unwrap_or_default())?;
                Ok(render(fmt, &lemma_payload(&report), lemma_text))
            }
            (None, count) => {
                let count = count.unwrap_or_default();
                let summary = lemma_alg_harness(count, cli.seed, Strategy::default())?;
                let payload = HarnessPayload {
                    seed: cli.seed,
                    instances: summary.instances,
                    nilpotent: summary.nilpotent,
                    forms_found: summary.forms_found,
                    hypotheses_held: summary.hypotheses_held,
                    centered: summary.centered,
                    counterexamples: summary.counterexamples.iter().map(lemma_payload).collect(),
                };
                Ok(render(fmt, &payload, |h| {
                    format!(
                        "instances: {}\nx nilpotent: {}\nforms found: {}\ncentered: {}\nhypotheses held: {}\ncounterexamples: {}\n",
                        h.instances,
                        h.nilpotent,
                        h.forms_found,
                        h.centered,
                        h.hypotheses_held,
                        h.counterexamples.len()
                    )
                }))
            }
        },
    }
}

fn lemma_text(l: &LemmaAlgPayload) -> String {
    let forms = l.forms.as_ref().map_or("none".to_string(), |f| f.join("; "));
    format!(
        "x nilpotent: {}\nforms: {}\nalpha: {}\ncentered: {}\nhypotheses hold: {}\nconclusion holds: {}\ncounterexample: {}\n",
        l.x_nilpotent,
        forms,
        l.alpha.join(", "),
        l.centered,
        l.hypotheses_hold,
        l.conclusion_holds,
        l.counterexample
    )
}
