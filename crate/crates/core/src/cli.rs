//! The `zlab` command line. Each command builds a single report value and
//! renders it as text, JSON or DOT, so the formats cannot drift apart.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{catalog, member_of, satisfies, variety, AlgebraError, AlgebraFile, FiniteZroupoid, SatisfactionReport};
use crate::classify::{
    hasse_dot, induced_partition, inclusion_poset, symmetric_models_up_to, ClassifyError, ModelInfo, PartitionReport,
    Poset, PosetNode,
};
use crate::identity::Identity;
use crate::lemmas::{lemma_suite, LemmaReport, Outcome};
use crate::search::{enumerate_models, Constraint, SearchError, SearchSpec, DEFAULT_SIZE_CAP, LARGE_SIZE_CAP};
use crate::term::Style;
use crate::waid::{category_counts, enumerate_waids, identity_from_name};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const NOT_FOUND: i32 = 1;
    pub const DIFF: i32 = 2;
    pub const CHECK_FAILED: i32 = 3;
    pub const USAGE: i32 = 64;
    pub const DATA: i32 = 65;
}

/// Environment variable overriding the search size cap.
pub const MAX_SIZE_ENV: &str = "ZLAB_MAX_SIZE";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Data(_) => exit::DATA,
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::NotSymmetric(_) => CliError::Data(e.to_string()),
            ClassifyError::Search(s) => s.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "zlab", version, about = "Finite implication zroupoids and weak associative identities")]
pub struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List weak associative identities by name
    List {
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Print per-category tallies instead of identities
        #[arg(long)]
        count: bool,
        /// Keep names matching a glob such as `42*`
        #[arg(long)]
        filter: Option<String>,
    },
    /// Check identities, varieties or lemma clauses on an algebra
    Check {
        /// Catalog name or JSON file
        algebra: String,
        /// Identity name or equation, e.g. `43A12` or `x -> y = y -> x`
        #[arg(long = "identity", short = 'i')]
        identities: Vec<String>,
        #[arg(long = "variety")]
        varieties: Vec<String>,
        #[arg(long)]
        all_waids: bool,
        #[arg(long)]
        lemmas: bool,
    },
    /// Search for models of a given size
    Find {
        #[arg(long)]
        size: usize,
        #[arg(long, value_delimiter = ',')]
        satisfy: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        fail: Vec<String>,
        /// Report every model instead of the first
        #[arg(long)]
        all: bool,
        /// Keep isomorphic copies
        #[arg(long)]
        no_iso: bool,
        /// Raise the search cap from 4 to 5
        #[arg(long)]
        allow_large: bool,
    },
    /// Partition the identities by the models satisfying them
    Classify {
        #[command(flatten)]
        source: ModelSource,
        /// Also write the Hasse diagram to this file
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Add the trivial variety T and Boolean algebras BA to the diagram
        #[arg(long)]
        with_landmarks: bool,
    },
    /// Inclusion order between the blocks
    Hasse {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Add the trivial variety T and Boolean algebras BA
        #[arg(long)]
        with_landmarks: bool,
    },
    /// Show the built-in algebras
    Catalog { name: Option<String> },
}

#[derive(Args, Debug)]
pub struct ModelSource {
    /// Use every symmetric model up to this size (default 4)
    #[arg(long, conflicts_with = "models")]
    pub max_size: Option<usize>,
    /// Use these algebras (catalog names or JSON files)
    #[arg(long, num_args = 1..)]
    pub models: Vec<String>,
    /// Raise the search cap from 4 to 5
    #[arg(long)]
    pub allow_large: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::USAGE;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let format = cli.format;
    match &cli.command {
        Command::List { max_len, count, filter } => {
            let report = cmd_list(*max_len, *count, filter.as_deref())?;
            Ok((render(&report, format, ListReport::text)?, exit::OK))
        }
        Command::Check { algebra, identities, varieties, all_waids, lemmas } => {
            let report = cmd_check(algebra, identities, varieties, *all_waids, *lemmas)?;
            let code = if report.failed == 0 { exit::OK } else { exit::CHECK_FAILED };
            Ok((render(&report, format, CheckReport::text)?, code))
        }
        Command::Find { size, satisfy, fail, all, no_iso, allow_large } => {
            let report = cmd_find(*size, satisfy, fail, *all, !*no_iso, size_cap(*allow_large)?)?;
            let code = if report.count > 0 { exit::OK } else { exit::NOT_FOUND };
            Ok((render(&report, format, FindReport::text)?, code))
        }
        Command::Classify { source, dot, with_landmarks } => {
            let models = source.load()?;
            let report = induced_partition(&enumerate_waids(4).expect("inventory"), &models)?;
            let poset = inclusion_poset(&report, &models, *with_landmarks);
            if let Some(path) = dot {
                write_file(path, &hasse_dot(&poset))?;
            }
            let code = if report.diff.as_ref().is_some_and(|d| !d.is_empty()) { exit::DIFF } else { exit::OK };
            let text = match format {
                Format::Dot => hasse_dot(&poset),
                _ => render(&report, format, PartitionReport::render_text)?,
            };
            Ok((text, code))
        }
        Command::Hasse { source, dot, with_landmarks } => {
            let models = source.load()?;
            let report = induced_partition(&enumerate_waids(4).expect("inventory"), &models)?;
            let poset = inclusion_poset(&report, &models, *with_landmarks);
            let dot_text = hasse_dot(&poset);
            if let Some(path) = dot {
                write_file(path, &dot_text)?;
            }
            let text = match format {
                Format::Dot => dot_text,
                _ => render(&HasseReport::new(&report, &poset), format, HasseReport::text)?,
            };
            Ok((text, exit::OK))
        }
        Command::Catalog { name } => {
            let report = cmd_catalog(name.as_deref())?;
            Ok((render(&report, format, CatalogReport::text)?, exit::OK))
        }
    }
}

fn render<R: Serialize>(report: &R, format: Format, text: impl Fn(&R) -> String) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(text(report)),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Data(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Dot => Err(CliError::Usage("--format dot only applies to classify and hasse".into())),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Search cap from the environment, the large-search flag, or the default.
pub fn size_cap(allow_large: bool) -> Result<usize, CliError> {
    match std::env::var(MAX_SIZE_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{MAX_SIZE_ENV}={v} is not a size"))),
        Err(_) if allow_large => Ok(LARGE_SIZE_CAP),
        Err(_) => Ok(DEFAULT_SIZE_CAP),
    }
}

impl ModelSource {
    fn load(&self) -> Result<Vec<FiniteZroupoid>, CliError> {
        if !self.models.is_empty() {
            return self.models.iter().map(|m| load_algebra(m)).collect();
        }
        let cap = size_cap(self.allow_large)?;
        Ok(symmetric_models_up_to(self.max_size.unwrap_or(4), cap)?)
    }
}

/// A catalog name, or else a path to a JSON algebra file.
pub fn load_algebra(source: &str) -> Result<FiniteZroupoid, CliError> {
    if let Some(a) = catalog().remove(source) {
        return Ok(a);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::Usage(format!("{source} is neither a catalog algebra nor a file")));
    }
    let alg = FiniteZroupoid::load(path).map_err(|e| CliError::Data(format!("{source}: {e}")))?;
    Ok(if alg.name().is_empty() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        alg.with_name(stem)
    } else {
        alg
    })
}

/// An inventory name or alias, or an equation `lhs = rhs`.
pub fn resolve_identity(text: &str) -> Result<Identity, CliError> {
    if let Ok(id) = identity_from_name(text) {
        return Ok(id);
    }
    if text.contains('=') || text.contains('≈') {
        return Identity::parse(text.trim(), text).map_err(|e| CliError::Usage(format!("{text}: {e}")));
    }
    Err(CliError::Usage(format!("unknown identity {text}")))
}

#[derive(Debug, Serialize)]
pub struct ListEntry {
    pub name: String,
    pub canonical: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Serialize)]
pub struct ListReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<Vec<ListEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, usize>>,
    pub total: usize,
}

impl ListReport {
    fn text(&self) -> String {
        let mut s = String::new();
        if let Some(ids) = &self.identities {
            for e in ids {
                let _ = writeln!(s, "{}\t{} ≈ {}", e.name, e.lhs, e.rhs);
            }
        }
        if let Some(counts) = &self.counts {
            for (k, v) in counts {
                let _ = writeln!(s, "{k}: {v}");
            }
            let _ = writeln!(s, "total: {}", self.total);
        }
        s
    }
}

pub fn cmd_list(max_len: usize, count: bool, filter: Option<&str>) -> Result<ListReport, CliError> {
    let all = enumerate_waids(max_len).map_err(|e| CliError::Usage(e.to_string()))?;
    let pattern = filter
        .map(glob::Pattern::new)
        .transpose()
        .map_err(|e| CliError::Usage(format!("bad filter: {e}")))?;
    let ids: Vec<Identity> = all
        .into_iter()
        .filter(|id| {
            pattern.as_ref().is_none_or(|p| p.matches(&id.name) || id.alias.as_deref().is_some_and(|a| p.matches(a)))
        })
        .collect();
    let total = ids.len();
    Ok(if count {
        ListReport { identities: None, counts: Some(category_counts(&ids)), total }
    } else {
        let entries = ids
            .iter()
            .map(|id| ListEntry {
                name: id.display_name().to_string(),
                canonical: id.name.clone(),
                lhs: id.lhs.render(Style::Sugared),
                rhs: id.rhs.render(Style::Sugared),
            })
            .collect();
        ListReport { identities: Some(entries), counts: None, total }
    })
}

#[derive(Debug, Serialize)]
pub struct CheckEntry {
    pub target: String,
    pub kind: &'static str,
    #[serde(flatten)]
    pub report: SatisfactionReport,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub algebra: String,
    pub size: usize,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaReport>,
    pub passed: usize,
    pub failed: usize,
}

impl CheckReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            if c.report.holds {
                let _ = writeln!(s, "{} {}: pass", c.kind, c.target);
            } else {
                let r = &c.report;
                let _ = writeln!(
                    s,
                    "{} {}: FAIL {} at {} ({} vs {})",
                    c.kind,
                    c.target,
                    r.failed.as_deref().unwrap_or(""),
                    r.witness_text(),
                    r.lhs_value.map_or("-".into(), |v| v.to_string()),
                    r.rhs_value.map_or("-".into(), |v| v.to_string()),
                );
            }
        }
        if let Some(l) = &self.lemmas {
            for e in &l.entries {
                let verdict = match &e.outcome {
                    Outcome::Pass => "pass".to_string(),
                    Outcome::Vacuous => "vacuous".to_string(),
                    Outcome::Fail { detail, .. } => format!("FAIL {detail}"),
                };
                let _ = writeln!(s, "lemma {}: {verdict}", e.clause);
            }
        }
        let _ = writeln!(s, "{}: {}/{} pass", self.algebra, self.passed, self.passed + self.failed);
        s
    }
}

pub fn cmd_check(
    algebra: &str,
    identities: &[String],
    varieties: &[String],
    all_waids: bool,
    lemmas: bool,
) -> Result<CheckReport, CliError> {
    if identities.is_empty() && varieties.is_empty() && !all_waids && !lemmas {
        return Err(CliError::Usage("nothing to check: give --identity, --variety, --all-waids or --lemmas".into()));
    }
    let alg = load_algebra(algebra)?;
    let mut checks = Vec::new();
    for v in varieties {
        let d = variety(v).ok_or_else(|| CliError::Usage(format!("unknown variety {v}")))?;
        checks.push(CheckEntry { target: d.name.clone(), kind: "variety", report: member_of(&alg, &d) });
    }
    let mut ids: Vec<Identity> = identities.iter().map(|i| resolve_identity(i)).collect::<Result<_, _>>()?;
    if all_waids {
        ids.extend(enumerate_waids(4).expect("inventory"));
    }
    for id in &ids {
        checks.push(CheckEntry { target: id.display_name().to_string(), kind: "identity", report: satisfies(&alg, id) });
    }
    let lemmas = lemmas.then(|| lemma_suite(&alg));
    let mut failed = checks.iter().filter(|c| !c.report.holds).count();
    let mut passed = checks.len() - failed;
    if let Some(l) = &lemmas {
        let bad = l.count(|o| !o.is_ok());
        failed += bad;
        passed += l.entries.len() - bad;
    }
    Ok(CheckReport { algebra: alg.name().to_string(), size: alg.size(), checks, lemmas, passed, failed })
}

#[derive(Debug, Serialize)]
pub struct FindReport {
    pub size: usize,
    pub satisfy: Vec<String>,
    pub fail: Vec<String>,
    pub iso_reduced: bool,
    pub models: Vec<AlgebraFile>,
    pub count: usize,
}

impl FindReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for m in &self.models {
            let _ = writeln!(s, "{}", serde_json::to_string(m).expect("algebra file serializes"));
        }
        let _ = writeln!(s, "{} model{}", self.count, if self.count == 1 { "" } else { "s" });
        s
    }
}

pub fn cmd_find(
    size: usize,
    satisfy: &[String],
    fail: &[String],
    all: bool,
    iso: bool,
    cap: usize,
) -> Result<FindReport, CliError> {
    let mut spec = SearchSpec::new(size).size_cap(cap).iso_reduce(iso);
    for s in satisfy {
        let c: Constraint = match variety(s) {
            Some(v) => v.into(),
            None => resolve_identity(s)?.into(),
        };
        spec = spec.satisfy(c);
    }
    for f in fail {
        let id = match resolve_identity(f) {
            Ok(id) => id,
            Err(e) => match variety(f) {
                Some(v) if v.defining.len() == 1 => v.defining[0].clone(),
                _ => return Err(e),
            },
        };
        spec = spec.fail(id);
    }
    if !all {
        spec = spec.limit(1);
    }
    let models = enumerate_models(&spec)?;
    Ok(FindReport {
        size,
        satisfy: satisfy.to_vec(),
        fail: fail.to_vec(),
        iso_reduced: iso,
        count: models.len(),
        models: models.iter().map(|m| m.to_file()).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct HasseReport {
    pub models: Vec<ModelInfo>,
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<(String, String)>,
}

impl HasseReport {
    fn new(report: &PartitionReport, poset: &Poset) -> Self {
        HasseReport { models: report.models.clone(), nodes: poset.nodes.clone(), edges: poset.edges() }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for n in &self.nodes {
            let _ = writeln!(s, "level {} {}{}", n.level, n.name, if n.landmark { " (landmark)" } else { "" });
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "{a} -> {b}");
        }
        let _ = writeln!(s, "{} nodes, {} edges", self.nodes.len(), self.edges.len());
        s
    }
}

#[derive(Debug, Serialize)]
pub struct CatalogReport {
    pub algebras: Vec<AlgebraFile>,
}

impl CatalogReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for f in &self.algebras {
            let alg = FiniteZroupoid::from_file(f.clone()).expect("catalog algebra");
            let _ = writeln!(s, "{} (size {})\n{alg}", f.name, f.size);
        }
        s
    }
}

pub fn cmd_catalog(name: Option<&str>) -> Result<CatalogReport, CliError> {
    let cat = catalog();
    let algebras = match name {
        None => cat.values().map(|a| a.to_file()).collect(),
        Some(n) => vec![cat.get(n).ok_or_else(|| CliError::Usage(format!("no catalog algebra {n}")))?.to_file()],
    };
    Ok(CatalogReport { algebras })
}
