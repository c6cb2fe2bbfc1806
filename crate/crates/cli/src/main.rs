use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plap::checks::{self, CHECKS};
use plap::cheeger::{self, cheeger_exact_with_cap, cheeger_orbit_restricted};
use plap::io::{self, round9};
use plap::linear::{model_report, Branching, ModelReport, ModelSpec, ModelValue, Scheme};
use plap::spectral::{first_eigenpair, max_eigenpair_bipartite, EigenPair, SolverConfig};
use plap::symmetry::{self, enumerate_automorphisms, orbits};
use plap::{DirichletDomain, Error};

// Like println!, but a closed stdout (e.g. `| head`) is not a panic.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const INPUT: u8 = 1;
const NO_CONVERGENCE: u8 = 2;
const INVARIANT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "plap", version, about = "Dirichlet p-Laplacian eigenpairs, Cheeger constants and symmetric model graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First (and with --max, maximum bipartite) eigenpair for each p.
    Eigen {
        /// Exponents; repeat the flag or separate with commas.
        #[arg(long = "p", value_delimiter = ',', required = true)]
        ps: Vec<f64>,
        #[arg(long)]
        max: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "TOL")]
        residual_tol: Option<f64>,
        #[arg(long, value_name = "N")]
        max_iterations: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        domain: PathBuf,
    },
    /// Exact Cheeger constant by subset enumeration.
    Cheeger {
        #[arg(long, default_value_t = cheeger::DEFAULT_CAP)]
        cap: usize,
        /// Partition file; only unions of its cells are enumerated.
        #[arg(long = "orbit-restrict", value_name = "PARTS")]
        orbit_restrict: Option<PathBuf>,
        domain: PathBuf,
    },
    /// Automorphism group of the interior with its orbits.
    Autgroup {
        #[arg(long, default_value_t = symmetry::DEFAULT_CAP)]
        cap: usize,
        domain: PathBuf,
    },
    /// Quotient domain by an equitable partition (default: automorphism orbits).
    Quotient {
        #[arg(long, value_name = "PARTS")]
        partition: Option<PathBuf>,
        #[arg(long, default_value_t = symmetry::DEFAULT_CAP)]
        cap: usize,
        domain: PathBuf,
    },
    /// Cheeger constants of a spherically symmetric tree or anti-tree.
    Model {
        family: Option<FamilyArg>,
        /// Anti-tree order: spheres have (r+1)^a vertices.
        #[arg(long)]
        a: Option<u32>,
        /// Constant tree branching.
        #[arg(long)]
        m: Option<u64>,
        /// Branching list such as `2,3,5`; a trailing `...` continues the
        /// arithmetic progression of the listed values.
        #[arg(long = "m-seq", value_name = "LIST")]
        m_seq: Option<String>,
        #[arg(long, value_enum, default_value = "physical")]
        scheme: SchemeArg,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// JSON model description instead of the flags above.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["family", "a", "m", "m_seq"])]
        spec: Option<PathBuf>,
    },
    /// Runs the reproduction suite on bundled fixtures.
    VerifyPaper {
        /// Check names; repeat or separate with commas.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Tree,
    Antitree,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Physical,
    Modified,
    Normalized,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Physical => Scheme::Physical,
            SchemeArg::Modified => Scheme::Modified,
            SchemeArg::Normalized => Scheme::Normalized,
        }
    }
}

const DEFAULT_HORIZON: usize = 200;

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } => NO_CONVERGENCE,
            _ => INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: INPUT,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Eigen {
            ps,
            max,
            seed,
            residual_tol,
            max_iterations,
            format,
            domain,
        } => {
            let mut cfg = SolverConfig::default();
            if let Some(seed) = seed {
                cfg = cfg.with_seed(seed);
            }
            if let Some(tol) = residual_tol {
                cfg.residual_tol = tol;
            }
            if let Some(n) = max_iterations {
                cfg.max_iterations = n;
            }
            cfg.validate()?;
            eigen(&ps, max, &cfg, format, &domain)
        }
        Command::Cheeger {
            cap,
            orbit_restrict,
            domain,
        } => {
            let domain = read_domain(&domain)?;
            let result = match orbit_restrict {
                Some(parts) => {
                    let partition = io::parse_partition(&read(&parts)?, &domain)?;
                    cheeger_orbit_restricted(&domain, &partition, cap)?
                }
                None => cheeger_exact_with_cap(&domain, cap)?,
            };
            print_json(&io::cheeger_to_json(&result, &domain));
            Ok(0)
        }
        Command::Autgroup { cap, domain } => {
            let domain = read_domain(&domain)?;
            let group = enumerate_automorphisms(&domain, cap)?;
            if !symmetry::check_group_axioms(&group) {
                return Err(Failure {
                    code: INVARIANT,
                    message: "automorphisms do not form a group".into(),
                });
            }
            let ids = |perm: &Vec<usize>| -> Vec<&str> { perm.iter().map(|&x| domain.id(x)).collect() };
            print_json(&json!({
                "size": group.size(),
                "orbits": orbits(&group).cell_ids(&domain),
                "elements": group.elements().iter().map(ids).collect::<Vec<_>>(),
            }));
            Ok(0)
        }
        Command::Quotient { partition, cap, domain } => {
            let domain = read_domain(&domain)?;
            let partition = match partition {
                Some(path) => io::parse_partition(&read(&path)?, &domain)?,
                None => orbits(&enumerate_automorphisms(&domain, cap)?),
            };
            let q = symmetry::quotient(&domain, &partition)?;
            print_json(&io::domain_to_json(&q));
            Ok(0)
        }
        Command::Model {
            family,
            a,
            m,
            m_seq,
            scheme,
            horizon,
            format,
            spec,
        } => {
            let (spec, file_horizon) = match spec {
                Some(path) => ModelSpec::from_json(&read(&path)?)?,
                None => (model_spec(family, a, m, m_seq.as_deref(), scheme.into())?, None),
            };
            let horizon = horizon.or(file_horizon).unwrap_or(DEFAULT_HORIZON);
            let report = model_report(&spec, horizon)?;
            print_model(&report, format);
            Ok(0)
        }
        Command::VerifyPaper { only, json } => verify(&only, json),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_domain(path: &Path) -> Result<DirichletDomain, Failure> {
    Ok(io::parse_domain(&read(path)?)?)
}

fn print_json(value: &Value) {
    out!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn eigen(ps: &[f64], max: bool, cfg: &SolverConfig, format: Format, path: &Path) -> Result<u8, Failure> {
    let domain = read_domain(path)?;
    let mut pairs: Vec<(&str, EigenPair)> = Vec::new();
    for &p in ps {
        pairs.push(("first", first_eigenpair(&domain, p, cfg)?));
        if max {
            pairs.push(("max", max_eigenpair_bipartite(&domain, p, cfg)?));
        }
    }
    match format {
        Format::Json => {
            for (_, pair) in &pairs {
                out!("{}", io::eigenpair_to_json(pair, &domain));
            }
        }
        Format::Csv => {
            let ids: Vec<&str> = domain.ids().iter().map(String::as_str).collect();
            out!("kind,p,lambda,residual,certified,{}", ids.join(","));
            for (kind, pair) in &pairs {
                let u: Vec<String> = pair.u.iter().map(|x| round9(*x).to_string()).collect();
                out!(
                    "{kind},{},{},{:e},{},{}",
                    pair.p,
                    round9(pair.lambda),
                    pair.residual,
                    pair.certified,
                    u.join(",")
                );
            }
        }
        Format::Text => {
            for (kind, pair) in &pairs {
                out!(
                    "{kind} p={} lambda={} residual={:.3e} certified={}",
                    pair.p,
                    round9(pair.lambda),
                    pair.residual,
                    pair.certified
                );
                for (id, x) in domain.ids().iter().zip(&pair.u) {
                    out!("  {id} {}", round9(*x));
                }
            }
        }
    }
    if pairs.iter().all(|(_, pair)| pair.certified) {
        Ok(0)
    } else {
        eprintln!("error: an eigenfunction failed its sign certificate");
        Ok(INVARIANT)
    }
}

fn model_spec(
    family: Option<FamilyArg>,
    a: Option<u32>,
    m: Option<u64>,
    m_seq: Option<&str>,
    scheme: Scheme,
) -> Result<ModelSpec, Failure> {
    match family {
        Some(FamilyArg::Antitree) => {
            if m.is_some() || m_seq.is_some() {
                return Err(usage("anti-trees take --a, not --m or --m-seq"));
            }
            let a = a.ok_or_else(|| usage("anti-trees need --a"))?;
            Ok(ModelSpec::antitree(a, scheme)?)
        }
        Some(FamilyArg::Tree) => {
            if a.is_some() {
                return Err(usage("trees take --m or --m-seq, not --a"));
            }
            let branching = match (m, m_seq) {
                (Some(m), None) => Branching::Constant(m),
                (None, Some(list)) => parse_branching(list)?,
                _ => return Err(usage("trees need exactly one of --m and --m-seq")),
            };
            Ok(ModelSpec::tree(branching, scheme)?)
        }
        None => Err(usage("name a family (tree or antitree) or pass --spec")),
    }
}

fn parse_branching(list: &str) -> Result<Branching, Failure> {
    let mut items: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let open = items.last() == Some(&"...");
    if open {
        items.pop();
    }
    let values: Vec<u64> = items
        .iter()
        .map(|s| s.parse().map_err(|_| usage(format!("bad branching entry `{s}`"))))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(usage("empty branching list"));
    }
    if !open {
        return Ok(Branching::List(values));
    }
    if values.len() < 2 || values[1] < values[0] {
        return Err(usage("`...` needs at least two nondecreasing entries"));
    }
    let step = values[1] - values[0];
    if values.windows(2).any(|w| w[1].checked_sub(w[0]) != Some(step)) {
        return Err(usage("entries before `...` must form an arithmetic progression"));
    }
    Ok(Branching::Arithmetic {
        first: values[0],
        step,
    })
}

fn value_json(v: ModelValue) -> Value {
    match v {
        ModelValue::Finite(x) => json!(round9(x)),
        ModelValue::Infinite => json!("INF"),
        ModelValue::Unknown => Value::Null,
    }
}

fn print_model(report: &ModelReport, format: Format) {
    let h = report.h_value();
    let h_inf = report.h_infinity_value();
    let scheme = serde_json::to_value(report.spec.scheme).expect("scheme serializes");
    let scheme = scheme.as_str().unwrap_or_default().to_string();
    match format {
        Format::Json => {
            let mut full = serde_json::to_value(report).expect("report serializes");
            if let Value::Object(map) = &mut full {
                map.insert("hValue".into(), value_json(h));
                map.insert("hInfValue".into(), value_json(h_inf));
            }
            print_json(&full);
        }
        Format::Csv => {
            out!("scheme,horizon,h,h_inf,h_inf_status");
            out!(
                "{scheme},{},{h},{h_inf},{:?}",
                report.horizon, report.h_infinity.status
            );
        }
        Format::Text => {
            out!("scheme   {scheme}");
            out!("horizon  {}", report.horizon);
            out!("h        {h}  (finite minimum {})", report.h.finite_min);
            out!(
                "h_inf    {h_inf}  ({:?} via {:?})",
                report.h_infinity.status, report.h_infinity.method
            );
        }
    }
}

fn verify(only: &[String], as_json: bool) -> Result<u8, Failure> {
    if let Some(bad) = only.iter().find(|o| !CHECKS.contains(&o.as_str())) {
        return Err(usage(format!("unknown check `{bad}`; known: {}", CHECKS.join(", "))));
    }
    let outcomes = checks::run_all(only);
    if as_json {
        print_json(&serde_json::to_value(&outcomes).expect("outcomes serialize"));
    } else {
        for outcome in &outcomes {
            out!("{}", outcome.summary_line());
            for line in outcome.details.iter().skip(1) {
                out!("       {line}");
            }
        }
        let passed = outcomes.iter().filter(|o| o.passed).count();
        out!("{passed}/{} checks passed", outcomes.len());
    }
    Ok(if outcomes.iter().all(|o| o.passed) { 0 } else { INVARIANT })
}
