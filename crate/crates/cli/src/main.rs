use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rootsample::catalog::{catalog, Payload};
use rootsample::certify::{certify_gap_class, certify_moduli, certify_pair, GapVerdict};
use rootsample::concat::{concat_pairs, PairRealizer, RealizedCouple};
use rootsample::exact::{fraction_string, to_f64};
use rootsample::gaps::gap_report;
use rootsample::report::{certificate_json, gap_report_json, polynomial_json, search_report, verification_report};
use rootsample::rootfile::parse_root_list;
use rootsample::sampler::{search_gap_class, search_moduli, search_pair};
use rootsample::sweep::{couple_label, sweep_moduli, sweep_pairs};
use rootsample::{
    catalog_lookup, ExactRootSpec, GapClass, ModuliCouple, ModuliOrder, PairCouple, RootCountPair,
    SearchConfig, SearchOutcome, SignPattern, Strategy,
};

#[derive(Parser)]
#[command(name = "poly", version, about = "Search for and certify polynomials with prescribed sign and root data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized search for a witness polynomial.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Run a search for every couple of a degree or pattern.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Concatenate two realized couples.
    Concat {
        /// Catalog id or root-list file.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a root list against a claimed couple.
    Verify {
        #[arg(long)]
        roots: PathBuf,
        #[arg(long, requires = "neg", conflicts_with = "order")]
        pos: Option<usize>,
        #[arg(long, requires = "pos")]
        neg: Option<usize>,
        #[arg(long, required_unless_present = "pos")]
        order: Option<String>,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Gap statistics of a real-rooted polynomial.
    Gaps {
        #[arg(long)]
        roots: PathBuf,
        /// Decide the class in exact arithmetic.
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Known results and fixtures.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum SearchCommand {
    Pair {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        pos: usize,
        #[arg(long)]
        neg: usize,
        #[command(flatten)]
        opts: SearchOpts,
    },
    Moduli {
        #[arg(long)]
        sigma: String,
        /// `PN` word or bracket `[u1,...]`.
        #[arg(long)]
        order: String,
        #[command(flatten)]
        opts: SearchOpts,
    },
    Gaps {
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        opts: SearchOpts,
    },
}

#[derive(Subcommand)]
enum SweepCommand {
    Pairs {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        budget: u64,
        /// Include orbit grouping in the report.
        #[arg(long)]
        orbits: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    Moduli {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Show { id: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    Uniform,
    Mixture,
    Multiplicity,
}

#[derive(Args)]
struct SearchOpts {
    /// Maximum attempts.
    #[arg(long = "n")]
    n: Option<u64>,
    /// Sampling half-width.
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "uniform")]
    strategy: StrategyName,
    #[arg(long)]
    narrow_scale: Option<f64>,
    #[arg(long)]
    narrow_fraction: Option<f64>,
    #[arg(long)]
    dup_prob: Option<f64>,
    /// Significant digits kept when rationalizing a hit.
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    no_certify: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// `println!` that stops quietly when stdout is closed.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

enum Failure {
    Invalid(anyhow::Error),
    Internal(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Internal(e.into())
    }
}

type Outcome = Result<bool, Failure>;

fn invalid<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Invalid(anyhow!("{context}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Search(s) => search(s),
        Command::Sweep(s) => sweep(s),
        Command::Concat { left, right, json } => concat(&left, &right, json.as_deref()),
        Command::Verify { roots, pos, neg, order, sigma, json } => {
            verify(&roots, pos.zip(neg), order.as_deref(), &sigma, json.as_deref())
        }
        Command::Gaps { roots, certify, json } => gaps(&roots, certify, json.as_deref()),
        Command::Catalog(c) => show_catalog(c),
    }
}

fn parse_pattern(text: &str) -> Result<SignPattern, Failure> {
    text.parse().map_err(invalid("--sigma"))
}

fn parse_order(text: &str) -> Result<ModuliOrder, Failure> {
    text.parse().map_err(invalid("--order"))
}

fn config(opts: &SearchOpts) -> Result<SearchConfig, Failure> {
    let mut cfg = SearchConfig::default();
    if let Some(n) = opts.n {
        cfg.max_attempts = n;
    }
    if let Some(ell) = opts.ell {
        cfg.half_width = ell;
    }
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    if let Some(digits) = opts.digits {
        cfg.digits = digits;
    }
    cfg.certify = !opts.no_certify;
    let mixture_flags = opts.narrow_scale.is_some() || opts.narrow_fraction.is_some();
    cfg.strategy = match opts.strategy {
        StrategyName::Uniform => Strategy::Uniform,
        StrategyName::Mixture => {
            let Strategy::Mixture { narrow_scale, narrow_fraction } = Strategy::mixture(cfg.half_width) else {
                unreachable!()
            };
            Strategy::Mixture {
                narrow_scale: opts.narrow_scale.unwrap_or(narrow_scale),
                narrow_fraction: opts.narrow_fraction.unwrap_or(narrow_fraction),
            }
        }
        StrategyName::Multiplicity => Strategy::MultiplicityBias { dup_probability: opts.dup_prob.unwrap_or(0.5) },
    };
    if mixture_flags && !matches!(cfg.strategy, Strategy::Mixture { .. }) {
        return Err(Failure::Invalid(anyhow!("--narrow-scale and --narrow-fraction need --strategy mixture")));
    }
    if opts.dup_prob.is_some() && !matches!(cfg.strategy, Strategy::MultiplicityBias { .. }) {
        return Err(Failure::Invalid(anyhow!("--dup-prob needs --strategy multiplicity")));
    }
    cfg.validate().map_err(invalid("configuration"))?;
    Ok(cfg)
}

fn write_json(path: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let Some(path) = path else { return Ok(()) };
    let text = serde_json::to_string_pretty(value)?;
    if path == Path::new("-") {
        out!("{text}");
    } else {
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn print_outcome(out: &SearchOutcome) {
    match out.witness() {
        Some(w) => {
            out!("found at attempt {} ({:.3} s)", w.attempt_index, out.seconds);
            let roots: Vec<String> = w.spec.real_roots.iter().map(|r| format!("{r}")).collect();
            out!("real roots: {}", roots.join(" "));
            for p in &w.spec.complex_pairs {
                out!("complex pair: {} ± {}i", p.re, p.im);
            }
            let coeffs: Vec<String> = w.poly.coefficients().iter().map(|c| format!("{c:.6}")).collect();
            out!("coefficients: {}", coeffs.join(" "));
            if let Some(g) = &w.gap_report {
                out!("gap class: {}", g.class);
            }
            match &w.certificate {
                Some(c) => out!("certified: {}", c.claim),
                None => out!("certification skipped"),
            }
        }
        None => out!("unresolved: no witness in {} attempts ({:.3} s)", out.attempts, out.seconds),
    }
}

fn search(command: SearchCommand) -> Outcome {
    let (name, query, cfg, json_path, out) = match command {
        SearchCommand::Pair { sigma, pos, neg, opts } => {
            let pattern = parse_pattern(&sigma)?;
            let cfg = config(&opts)?;
            let out = search_pair(&pattern, RootCountPair::new(pos, neg), &cfg).map_err(invalid("search"))?;
            let query = json!({ "sigma": pattern.to_string(), "runs": pattern.run_string(), "pos": pos, "neg": neg });
            ("search pair", query, cfg, opts.json, out)
        }
        SearchCommand::Moduli { sigma, order, opts } => {
            let pattern = parse_pattern(&sigma)?;
            let order = parse_order(&order)?;
            let cfg = config(&opts)?;
            let out = search_moduli(&pattern, &order, &cfg).map_err(invalid("search"))?;
            let query = json!({
                "sigma": pattern.to_string(),
                "runs": pattern.run_string(),
                "order": order.bracket_string(),
                "word": order.word_string(),
            });
            ("search moduli", query, cfg, opts.json, out)
        }
        SearchCommand::Gaps { degree, class, opts } => {
            let class: GapClass = class.parse().map_err(invalid("--class"))?;
            let cfg = config(&opts)?;
            let out = search_gap_class(degree, class, &cfg).map_err(invalid("search"))?;
            ("search gaps", json!({ "degree": degree, "class": class.as_str() }), cfg, opts.json, out)
        }
    };
    print_outcome(&out);
    write_json(json_path.as_deref(), &search_report(name, &cfg, query, &out))?;
    Ok(out.is_found())
}

fn sweep(command: SweepCommand) -> Outcome {
    let (report, with_orbits, json_path) = match command {
        SweepCommand::Pairs { degree, budget, orbits, json } => {
            if degree == 0 {
                return Err(Failure::Invalid(anyhow!("--degree must be positive")));
            }
            let cfg = SearchConfig::with_attempts(budget);
            cfg.validate().map_err(invalid("configuration"))?;
            (sweep_pairs(degree, &cfg), orbits, json)
        }
        SweepCommand::Moduli { sigma, budget, json } => {
            let pattern = parse_pattern(&sigma)?;
            let cfg = SearchConfig::with_attempts(budget);
            cfg.validate().map_err(invalid("configuration"))?;
            (sweep_moduli(&pattern, &cfg), false, json)
        }
    };
    for row in &report.rows {
        out!("{:<40} {}", couple_label(&row.couple), row.status.label());
    }
    let t = report.totals();
    out!(
        "{} couples: {} realized, {} forced non-realizable, {} unresolved",
        report.rows.len(),
        t.realized,
        t.forced,
        t.unresolved
    );
    write_json(json_path.as_deref(), &report.to_json(with_orbits))?;
    Ok(t.unresolved == 0)
}

/// Loads roots from a catalog fixture or a root-list file.
fn load_roots(source: &str) -> Result<ExactRootSpec, Failure> {
    if let Ok(entry) = catalog_lookup(source) {
        return match entry.payload {
            Payload::PairFixture { roots, .. } | Payload::ModuliFixture { roots, .. } => Ok(roots),
            Payload::GapFixture { roots, .. } => Ok(ExactRootSpec { real_roots: roots, complex_pairs: vec![] }),
            _ => Err(Failure::Invalid(anyhow!("catalog entry {source} carries no roots"))),
        };
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(Failure::Invalid(anyhow!("{source} is neither a catalog id nor a file")));
    }
    read_root_file(path)
}

fn read_root_file(path: &Path) -> Result<ExactRootSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(anyhow!("{}: {e}", path.display())))?;
    parse_root_list(&text).map_err(|e| Failure::Invalid(anyhow!("{}: {e}", path.display())))
}

fn concat(left: &str, right: &str, json_path: Option<&Path>) -> Outcome {
    let realizer = |source: &str| -> Result<PairRealizer, Failure> {
        PairRealizer::from_exact(load_roots(source)?).map_err(invalid(source))
    };
    let (l, r) = (realizer(left)?, realizer(right)?);
    let out = match concat_pairs(&l, &r) {
        Ok(out) => out,
        Err(e) => {
            out!("concatenation failed: {e}");
            let report = json!({
                "schema_version": rootsample::report::SCHEMA_VERSION,
                "command": "concat",
                "query": { "left": left, "right": right },
                "outcome": { "status": "failed", "error": e.to_string() },
            });
            write_json(json_path, &report)?;
            return Ok(false);
        }
    };
    let claim = match &out.couple {
        RealizedCouple::Pair(c) => couple_json(c),
        RealizedCouple::Moduli(c) => json!({ "pattern": c.pattern().to_string(), "order": c.order().bracket_string() }),
    };
    out!("left:  {}", l.couple);
    out!("right: {}", r.couple);
    out!("epsilon = {} after {} halvings", fraction_string(&out.scale), out.steps);
    out!("certified: {}", out.certificate.claim);
    let details = json!({
        "epsilon": fraction_string(&out.scale),
        "halvings": out.steps,
        "couple": claim,
        "polynomial": polynomial_json(&out.poly),
        "certificate": certificate_json(&out.certificate),
    });
    let query = json!({ "left": left, "right": right });
    write_json(json_path, &verification_report("concat", query, "found", &out.spec, details))?;
    Ok(true)
}

fn couple_json(c: &PairCouple) -> Value {
    json!({ "pattern": c.pattern().to_string(), "runs": c.pattern().run_string(), "pos": c.pair().pos, "neg": c.pair().neg })
}

fn verify(
    roots: &Path,
    pair: Option<(usize, usize)>,
    order: Option<&str>,
    sigma: &str,
    json_path: Option<&Path>,
) -> Outcome {
    let spec = read_root_file(roots)?;
    let pattern = parse_pattern(sigma)?;
    let (query, result) = match (pair, order) {
        (Some((pos, neg)), _) => {
            let couple = PairCouple::new(pattern.clone(), RootCountPair::new(pos, neg)).map_err(invalid("couple"))?;
            (json!({ "sigma": pattern.to_string(), "pos": pos, "neg": neg }), certify_pair(&spec, &couple))
        }
        (None, Some(order)) => {
            let order = parse_order(order)?;
            let couple = ModuliCouple::new(pattern.clone(), order.clone()).map_err(invalid("couple"))?;
            (json!({ "sigma": pattern.to_string(), "order": order.bracket_string() }), certify_moduli(&spec, &couple))
        }
        (None, None) => return Err(Failure::Invalid(anyhow!("give --pos and --neg, or --order"))),
    };
    let (ok, details) = match &result {
        Ok(cert) => {
            out!("verified: {}", cert.claim);
            (true, json!({ "certificate": certificate_json(cert) }))
        }
        Err(e) => {
            out!("not verified: {e}");
            (false, json!({ "error": e.to_string() }))
        }
    };
    let status = if ok { "verified" } else { "mismatch" };
    write_json(json_path, &verification_report("verify", query, status, &spec.to_float(), details))?;
    Ok(ok)
}

fn gaps(roots: &Path, certify: bool, json_path: Option<&Path>) -> Outcome {
    let mut spec = read_root_file(roots)?;
    if !spec.complex_pairs.is_empty() {
        return Err(Failure::Invalid(anyhow!("gap statistics need real roots only")));
    }
    spec.real_roots.sort();
    let x: Vec<f64> = spec.real_roots.iter().map(to_f64).collect();
    let report = gap_report(&x).map_err(invalid("roots"))?;
    let xi: Vec<String> = report.xi.iter().map(|c| format!("{:.10}", c.value)).collect();
    out!("xi: {}", xi.join(" "));
    out!("m(P~) = {:.10}  M(P~) = {:.10}", report.m_tilde, report.big_m_tilde);
    out!("m(P') = {:.10}  M(P') = {:.10}", report.m_prime, report.big_m_prime);
    out!("class: {}", report.class);
    let mut details = json!({ "gap_report": gap_report_json(&report) });
    let mut ok = true;
    if certify {
        if spec.real_roots.len() < 3 {
            return Err(Failure::Invalid(anyhow!("certifying a gap class needs at least three roots")));
        }
        if spec.real_roots.windows(2).any(|w| w[0] == w[1]) {
            return Err(Failure::Invalid(anyhow!("roots must be distinct")));
        }
        match certify_gap_class(&spec.real_roots) {
            GapVerdict::Certified(cert) => {
                out!("certified: {}", cert.claim);
                details["certificate"] = certificate_json(&cert);
            }
            GapVerdict::Undecided { rounds } => {
                out!("undecided after {rounds} refinement rounds");
                details["undecided_rounds"] = json!(rounds);
                ok = false;
            }
        }
    }
    let status = if ok { "verified" } else { "unresolved" };
    write_json(json_path, &verification_report("gaps", json!({ "roots": roots.display().to_string() }), status, &spec.to_float(), details))?;
    Ok(ok)
}

fn show_catalog(command: CatalogCommand) -> Outcome {
    match command {
        CatalogCommand::List => {
            for entry in catalog() {
                out!("{:<24} {:<18} {}", entry.id, entry.kind.as_str(), entry.source);
            }
        }
        CatalogCommand::Show { id } => {
            let entry = catalog_lookup(&id).map_err(invalid("catalog"))?;
            out!("{}", serde_json::to_string_pretty(&entry.to_json())?);
        }
    }
    Ok(true)
}
