//! Command-line front end: argument parsing, report emission, and the on-disk
//! KL cache.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use pfilt_core::alcove::{AffineWeylGroup, DEFAULT_INTERVAL_CAP};
use pfilt_core::characters::{weyl_character, weyl_dimension, FormalCharacter};
use pfilt_core::g1::baby_verma_char;
use pfilt_core::klpoly::{KlCacheDocument, KlTable};
use pfilt_core::modchar::steinberg_decompose;
use pfilt_core::pfilt::{relabel_as_delta_p, write_csv, FiltrationReport, LCF_NOTE};
use pfilt_core::rootdata::{CartanType, RootSystem, Weight};
use pfilt_core::{Engine, Error, ErrorKind};

pub const CACHE_DIR_ENV: &str = "PFILT_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Cartan type, e.g. A2, B2, G2.
    #[arg(long = "type", value_name = "TYPE")]
    pub cartan_type: CartanType,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Directory holding the KL cache.
    #[arg(long, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,

    /// Largest Bruhat interval to enumerate.
    #[arg(long, default_value_t = DEFAULT_INTERVAL_CAP)]
    pub interval_cap: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Prime {
    #[arg(long)]
    pub p: u32,

    /// Reject p < 2h − 2 instead of flagging it.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Lambdas {
    /// Weight in fundamental-weight coordinates, e.g. 1,0; may be repeated.
    #[arg(long = "lambda", required = true, allow_hyphen_values = true, value_name = "WEIGHT")]
    pub lambdas: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum G1Mode {
    /// Baby Verma character and its G₁T composition factors.
    BabyVerma,
    /// ch Q̂₁(λ₀) via Brauer reciprocity.
    Q1Hat,
    /// ch ∇_p ≤ ch ∇_red ≤ ch Q♯.
    Socle,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Root-system facts.
    Roots {
        #[command(flatten)]
        common: Common,
    },
    /// Weyl characters and dimensions.
    Weylchar {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lambdas: Lambdas,
    },
    /// P_{y,x} for affine Weyl group elements given as wall-index words.
    Klpoly {
        #[command(flatten)]
        common: Common,
        /// Comma-separated wall indices; finite walls 0..rank, then the affine wall.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// χ_KL expansion.
    Lcf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        prime: Prime,
        #[command(flatten)]
        lambdas: Lambdas,
    },
    /// Filtration report for each λ.
    Pfilt {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        prime: Prime,
        #[command(flatten)]
        lambdas: Lambdas,
        /// Label sections as Δ^p(μ) instead of Δ^red(μ).
        #[arg(long)]
        relabel_delta_p: bool,
    },
    /// Filtration reports for every dominant λ with ⟨λ+ρ, α₀^∨⟩ ≤ bound.
    Batch {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        prime: Prime,
        #[arg(long)]
        bound: i64,
    },
    /// G₁T characters.
    G1 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        prime: Prime,
        #[command(flatten)]
        lambdas: Lambdas,
        #[arg(long, value_enum, default_value_t = G1Mode::Socle)]
        mode: G1Mode,
    },
}

#[derive(Debug, Clone, Parser)]
#[command(name = "pfilt", version, about = "Exact Weyl-module, KL and p-filtration computations")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

impl RunConfig {
    pub fn common(&self) -> &Common {
        match &self.command {
            Command::Roots { common }
            | Command::Weylchar { common, .. }
            | Command::Klpoly { common, .. }
            | Command::Lcf { common, .. }
            | Command::Pfilt { common, .. }
            | Command::Batch { common, .. }
            | Command::G1 { common, .. } => common,
        }
    }
}

/// An error with its exit-code class.
#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn domain(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Domain, message: message.into() }
    }

    pub fn resource(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Resource, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.kind)
    }

    /// The structured object written to standard error.
    pub fn to_json(&self) -> String {
        json!({"error": {"kind": self.kind.as_str(), "code": self.exit_code(), "message": self.message}}).to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self { kind: e.kind(), message: e.to_string() }
    }
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Domain => 1,
        ErrorKind::Resource => 2,
        ErrorKind::Consistency => 3,
    }
}

type CliResult<T> = Result<T, CliError>;

/// Output of a successful run; `failure` is set when a batch finished with
/// per-weight errors.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub stdout: String,
    pub failure: Option<CliError>,
}

fn parse_weight(rs: &RootSystem, s: &str) -> CliResult<Weight> {
    let w: Weight = s.parse().map_err(|_| CliError::domain(format!("cannot parse weight {s:?}")))?;
    rs.check_weight(&w)?;
    Ok(w)
}

fn parse_word(s: &str) -> CliResult<Vec<usize>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|c| c.trim().parse::<usize>().map_err(|_| CliError::domain(format!("cannot parse word {s:?}"))))
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output is plain data");
    s.push('\n');
    s
}

fn cache_path(dir: &Path, t: CartanType) -> PathBuf {
    dir.join(format!("kl-{}.json", t.affine_name().replace('~', "-affine")))
}

/// Reads the cache for `t` from `dir` into a fresh table. A missing file gives
/// an empty table; an invalid one is an error and nothing is loaded.
pub fn cache_load(dir: &Path, t: CartanType, interval_cap: usize) -> CliResult<KlTable> {
    let rs = Arc::new(RootSystem::new(t));
    let table = KlTable::new(Arc::new(AffineWeylGroup::with_interval_cap(rs, interval_cap)));
    let path = cache_path(dir, t);
    match fs::read_to_string(&path) {
        Ok(text) => {
            let doc = KlCacheDocument::from_json(&text)
                .map_err(|e| CliError::resource(format!("{}: {}", path.display(), e)))?;
            table.import(&doc).map_err(|e| CliError::resource(format!("{}: {}", path.display(), e)))?;
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(CliError::resource(format!("{}: {e}", path.display()))),
    }
    Ok(table)
}

/// Writes the table to a temporary file in `dir` and renames it into place.
pub fn cache_store(dir: &Path, table: &KlTable) -> CliResult<()> {
    let t = table.group().root_system().cartan_type();
    let io = |e: std::io::Error| CliError::resource(format!("writing KL cache in {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(table.export().to_json().as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(cache_path(dir, t)).map_err(|e| io(e.error))?;
    Ok(())
}

struct Session {
    kl: Arc<KlTable>,
    cache_dir: Option<PathBuf>,
    loaded_columns: usize,
}

impl Session {
    fn open(common: &Common) -> CliResult<Self> {
        let t = common.cartan_type;
        let kl = match &common.cache_dir {
            Some(dir) => cache_load(dir, t, common.interval_cap)?,
            None => {
                let rs = Arc::new(RootSystem::new(t));
                KlTable::new(Arc::new(AffineWeylGroup::with_interval_cap(rs, common.interval_cap)))
            }
        };
        let loaded_columns = kl.num_columns();
        Ok(Self { kl: Arc::new(kl), cache_dir: common.cache_dir.clone(), loaded_columns })
    }

    fn engine(&self, prime: &Prime) -> CliResult<Engine> {
        let e = Engine::with_kl_table(prime.p, self.kl.clone())?;
        if prime.strict && !e.p_ge_2h_minus_2() {
            let h = e.root_system().coxeter_number() as u32;
            return Err(Error::PrimeTooSmall { p: prime.p, required: 2 * h - 2, what: "--strict" }.into());
        }
        Ok(e)
    }

    fn close(&self) -> CliResult<()> {
        match &self.cache_dir {
            Some(dir) if self.kl.num_columns() > self.loaded_columns => cache_store(dir, &self.kl),
            _ => Ok(()),
        }
    }
}

pub fn run(config: &RunConfig) -> CliResult<Output> {
    let common = config.common();
    let rs = RootSystem::new(common.cartan_type);
    let format = common.format;
    match &config.command {
        Command::Roots { .. } => Ok(Output { stdout: roots(&rs, format), failure: None }),
        Command::Weylchar { lambdas, .. } => {
            let ws = lambdas.lambdas.iter().map(|s| parse_weight(&rs, s)).collect::<CliResult<Vec<_>>>()?;
            Ok(Output { stdout: weylchar(&rs, &ws, format)?, failure: None })
        }
        Command::Klpoly { y, x, .. } => {
            let session = Session::open(common)?;
            let out = klpoly(&session.kl, &parse_word(y)?, &parse_word(x)?, format)?;
            session.close()?;
            Ok(Output { stdout: out, failure: None })
        }
        Command::Lcf { prime, lambdas, .. } => {
            let ws = lambdas.lambdas.iter().map(|s| parse_weight(&rs, s)).collect::<CliResult<Vec<_>>>()?;
            let session = Session::open(common)?;
            let out = lcf(&session.engine(prime)?, &ws, format)?;
            session.close()?;
            Ok(Output { stdout: out, failure: None })
        }
        Command::Pfilt { prime, lambdas, relabel_delta_p, .. } => {
            let ws = lambdas.lambdas.iter().map(|s| parse_weight(&rs, s)).collect::<CliResult<Vec<_>>>()?;
            let session = Session::open(common)?;
            let e = session.engine(prime)?;
            let mut reports = Vec::new();
            for w in &ws {
                let r = e.decompose_weyl(w)?;
                reports.push(if *relabel_delta_p { relabel_as_delta_p(&r) } else { r });
            }
            session.close()?;
            let stdout = match format {
                Format::Json if reports.len() == 1 => to_json(&reports[0]),
                Format::Json => to_json(&reports),
                Format::Csv => csv(&reports)?,
                Format::Text => reports.iter().map(|r| report_text(r, *relabel_delta_p)).collect(),
            };
            Ok(Output { stdout, failure: None })
        }
        Command::Batch { prime, bound, .. } => {
            let session = Session::open(common)?;
            let e = session.engine(prime)?;
            let summary = e.batch_verify(*bound);
            session.close()?;
            let stdout = match format {
                Format::Json => to_json(&summary),
                Format::Csv => csv(&summary.reports)?,
                Format::Text => {
                    let mut s = format!(
                        "{} p={} bound={}: {} weights, {} non-negative, {} residual zero, {} dimension identity, \
                         {} regular, {} in Jantzen region, {} with singular LCF weights, {} errors\n",
                        summary.cartan_type,
                        summary.p,
                        summary.bound,
                        summary.total,
                        summary.nonnegative,
                        summary.residual_zero,
                        summary.dimension_identity,
                        summary.regular,
                        summary.in_jantzen_region,
                        summary.with_singular_lcf_weights,
                        summary.failures.len()
                    );
                    for f in &summary.failures {
                        let _ = writeln!(s, "error at {}: {}", f.lambda, f.message);
                    }
                    s
                }
            };
            let failure = summary.worst_error_kind().map(|kind| CliError {
                kind,
                message: format!("{} of {} weights failed", summary.failures.len(), summary.total),
            });
            Ok(Output { stdout, failure })
        }
        Command::G1 { prime, lambdas, mode, .. } => {
            let ws = lambdas.lambdas.iter().map(|s| parse_weight(&rs, s)).collect::<CliResult<Vec<_>>>()?;
            let session = Session::open(common)?;
            let out = g1(&session.engine(prime)?, &ws, *mode, format)?;
            session.close()?;
            Ok(Output { stdout: out, failure: None })
        }
    }
}

fn csv(reports: &[FiltrationReport]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, reports)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

fn roots(rs: &RootSystem, format: Format) -> String {
    let info = json!({
        "cartan_type": rs.cartan_type(),
        "rank": rs.rank(),
        "cartan_matrix": rs.cartan_matrix().rows(),
        "num_positive_roots": rs.num_positive_roots(),
        "positive_roots": rs.positive_roots(),
        "rho": rs.rho(),
        "highest_short_root": rs.positive_roots()[rs.highest_short_root()],
        "coxeter_number": rs.coxeter_number(),
        "lie_algebra_dimension": rs.lie_algebra_dimension(),
        "w0_word": rs.w0_word(),
    });
    match format {
        Format::Text => format!(
            "{}: rank {}, {} positive roots, h = {}, dim g = {}\n",
            rs.cartan_type(),
            rs.rank(),
            rs.num_positive_roots(),
            rs.coxeter_number(),
            rs.lie_algebra_dimension()
        ),
        _ => to_json(&info),
    }
}

fn weylchar(rs: &RootSystem, ws: &[Weight], format: Format) -> CliResult<String> {
    let mut items = Vec::new();
    let mut text = String::new();
    for w in ws {
        let ch = weyl_character(rs, w)?;
        let dim = weyl_dimension(rs, w)?;
        let _ = writeln!(text, "{w} dim={dim}: {}", ch.to_text());
        items.push(json!({"lambda": w, "dimension": dim as u64, "character": ch}));
    }
    Ok(match format {
        Format::Text => text,
        _ => to_json(&items),
    })
}

fn klpoly(kl: &KlTable, y: &[usize], x: &[usize], format: Format) -> CliResult<String> {
    let g = kl.group();
    let ye = g.from_word(y)?;
    let xe = g.from_word(x)?;
    let p = kl.kl_polynomial(&ye, &xe)?;
    let mu = kl.mu_coefficient(&ye, &xe)?;
    Ok(match format {
        Format::Text => format!("P = {p}\n"),
        _ => to_json(&json!({
            "coxeter_type": kl.coxeter_type(),
            "y": g.reduced_word(&ye),
            "x": g.reduced_word(&xe),
            "length_y": g.length(&ye),
            "length_x": g.length(&xe),
            "bruhat_leq": g.bruhat_leq(&ye, &xe),
            "coeffs": p.coeffs(),
            "mu": mu,
            "at_one": p.evaluate_at_one(),
        })),
    })
}

fn lcf(e: &Engine, ws: &[Weight], format: Format) -> CliResult<String> {
    let mut items = Vec::new();
    let mut text = String::new();
    for w in ws {
        let combo = e.chi_kl(w)?;
        let dim = e.expand(&combo)?.mass();
        let terms: Vec<String> = combo.terms().iter().map(|t| format!("{:+}·χ({})", t.coeff, t.weight)).collect();
        let _ = writeln!(text, "χ_KL({w}) = {}  (dim {dim})", terms.join(" "));
        items.push(json!({"lambda": w, "p": e.p(), "chi_kl": &*combo, "dimension": dim as i64, "notes": [LCF_NOTE]}));
    }
    Ok(match format {
        Format::Text => text,
        _ if items.len() == 1 => to_json(&items[0]),
        _ => to_json(&items),
    })
}

fn report_text(r: &FiltrationReport, relabel: bool) -> String {
    let label = if relabel { "Δ^p" } else { "Δ^red" };
    let sections: Vec<String> = r.sections.iter().map(|s| format!("{}·{label}({})", s.multiplicity, s.weight)).collect();
    format!(
        "{} p={} λ={}: ch Δ = {}\n  nonnegative={} residual_zero={} dimension_identity={} regular={} \
         in_jantzen_region={} p_ge_2h_minus_2={}\n",
        r.cartan_type,
        r.p,
        r.lambda,
        sections.join(" + "),
        r.nonnegative,
        r.residual_zero,
        r.dimension_identity,
        r.regular,
        r.in_jantzen_region,
        r.p_ge_2h_minus_2
    )
}

fn char_json(c: &FormalCharacter) -> serde_json::Value {
    json!({"mass": c.mass() as i64, "terms": c})
}

fn pairs_json(v: &[(Weight, i64)]) -> serde_json::Value {
    v.iter().map(|(w, m)| json!({"weight": w, "multiplicity": m})).collect()
}

fn g1(e: &Engine, ws: &[Weight], mode: G1Mode, format: Format) -> CliResult<String> {
    let rs = e.root_system();
    let mut items = Vec::new();
    let mut text = String::new();
    for w in ws {
        match mode {
            G1Mode::BabyVerma => {
                let z = baby_verma_char(rs, w, e.p())?;
                let factors = e.decompose_g1t(&z)?;
                let f: Vec<String> = factors.iter().map(|(n, m)| format!("{m}·L̂({n})")).collect();
                let _ = writeln!(text, "Ẑ₁({w}): mass {}, factors {}", z.mass(), f.join(" + "));
                items.push(json!({"mu": w, "baby_verma": char_json(&z), "composition_factors": pairs_json(&factors)}));
            }
            G1Mode::Q1Hat => {
                let mults = e.q1_hat_verma_multiplicities(w)?;
                let q = e.q1_hat_char(w)?;
                let top = e.q1_hat_top_weight(w);
                let _ = writeln!(text, "Q̂₁({w}): mass {}, top weight {top}, {} baby Verma terms", q.mass(), mults.len());
                items.push(json!({
                    "lambda0": w,
                    "top_weight": top,
                    "baby_verma_multiplicities": pairs_json(&mults),
                    "q1_hat": char_json(&q),
                }));
            }
            G1Mode::Socle => {
                let ok = e.check_socle_bound(w)?;
                let (l0, _) = steinberg_decompose(w, e.p());
                let q = e.q_sharp_char(w)?;
                let _ = writeln!(text, "{w}: ch ∇_p ≤ ch ∇_red ≤ ch Q♯ is {ok} (mass Q♯ = {})", q.mass());
                items.push(json!({
                    "mu": w,
                    "mu0": l0,
                    "socle_bound": ok,
                    "nabla_red_mass": e.ch_nabla_red(w)?.mass() as i64,
                    "q_sharp_mass": q.mass() as i64,
                    "p_ge_2h_minus_2": e.p_ge_2h_minus_2(),
                }));
            }
        }
    }
    Ok(match format {
        Format::Text => text,
        _ if items.len() == 1 => to_json(&items[0]),
        _ => to_json(&items),
    })
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code with the text for standard output and standard error.
pub fn main_with_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => return (0, e.to_string(), String::new()),
        Err(e) => {
            let err = CliError::domain(e.to_string().trim_end().to_string());
            return (err.exit_code(), String::new(), err.to_json() + "\n");
        }
    };
    match run(&config) {
        Ok(Output { stdout, failure: None }) => (0, stdout, String::new()),
        Ok(Output { stdout, failure: Some(err) }) => (err.exit_code(), stdout, err.to_json() + "\n"),
        Err(err) => (err.exit_code(), String::new(), err.to_json() + "\n"),
    }
}
