use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use uminflow::fraisse::{
    back_and_forth, CanonicalOrder, DyadicOrder, GraphPrefix, NaturalOrder, RationalOrder,
};
use uminflow::measure::MeasureRecord;
use uminflow::orders::{parse_event, OrderPrefix, OrderPresentation};
use uminflow::randomizer::{
    compute_randomizer, poset_automorphism_obstruction, verify_certificate, RandomizerCertificate,
};
use uminflow::sampler::{
    bits_from_graph, format_bits, graph_from_bits, pair_unrank, parse_bits, run_ml_tests,
    sample_bits, sample_prefix_with_report, FamilyReport, MLTestFamily, RandomOrderStream, Verdict,
    MAX_SAMPLE_LEN,
};
use uminflow::{Caps, Error};

#[derive(Parser)]
#[command(
    name = "uminflow",
    version,
    about = "Invariant measure on orders of ℕ, ML tests and Fraïssé limits"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest event support for exact enumeration.
    #[arg(long, global = true)]
    cap_support: Option<usize>,
    /// Largest poset whose linear extensions are counted.
    #[arg(long, global = true)]
    cap_poset: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Weight,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Order,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum Presentation {
    Rational,
    Dyadic,
    Natural,
}

impl Presentation {
    fn boxed(self) -> Box<dyn OrderPresentation> {
        match self {
            Presentation::Rational => Box::new(RationalOrder),
            Presentation::Dyadic => Box::new(DyadicOrder),
            Presentation::Natural => Box::new(NaturalOrder),
        }
    }

    fn from_id(id: &str) -> Result<Self> {
        [
            Presentation::Rational,
            Presentation::Dyadic,
            Presentation::Natural,
        ]
        .into_iter()
        .find(|p| p.boxed().id() == id)
        .ok_or_else(|| Error::Format(format!("unknown presentation `{id}`")).into())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Measure of an event expression, e.g. "ord(0<1)&!ord(2<3)".
    Measure {
        expr: String,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        /// Dyadic precision for the weight method.
        #[arg(short = 'k', long, default_value_t = 20)]
        precision: u32,
    },
    /// Sample an order prefix or a random graph on N points.
    Sample {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Kind::Order)]
        kind: Kind,
    },
    /// Run ML test families against an order.
    Test {
        /// Comma-separated: density[(n,m)], unbounded[(n)], poset.
        #[arg(long, default_value = "density,unbounded,poset")]
        families: String,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        /// Test the random order with this seed.
        #[arg(long, conflicts_with_all = ["canon", "order"])]
        seed: Option<u64>,
        /// Test the canonical extension of universal-poset stage N.
        #[arg(long, conflicts_with = "order")]
        canon: Option<usize>,
        /// Test an order prefix file.
        #[arg(long)]
        order: Option<PathBuf>,
    },
    /// Back-and-forth isomorphism between two presentations of the rationals.
    Iso {
        #[arg(long, value_enum, default_value_t = Presentation::Rational)]
        left: Presentation,
        #[arg(long, value_enum, default_value_t = Presentation::Dyadic)]
        right: Presentation,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Certificate for a randomizer prefix, or verification of one.
    Randomizer {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Presentation::Rational)]
        tau: Presentation,
        /// Verify this certificate file instead of computing one.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Universal-poset automorphisms trapped in the extension event.
    Obstruction { n: usize },
    /// Graph edge-list file (or - for stdin) to bits.
    Encode { input: PathBuf },
    /// Bits (binary or hex; file or - for stdin) to a graph edge list.
    Decode { input: PathBuf },
}

/// Raised when a certificate or check fails; exit code 4.
#[derive(Debug)]
struct Unverified(String);

impl std::fmt::Display for Unverified {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for Unverified {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Unverified>().is_some() {
        return 4;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. } | Error::Budget { .. }) => 3,
        Some(Error::Mismatch(_)) => 4,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn caps(cli: &Cli) -> Result<Caps> {
    let mut caps = Caps::from_env()?;
    if let Some(s) = cli.cap_support {
        caps.support = s;
    }
    if let Some(p) = cli.cap_poset {
        caps.poset = p;
    }
    caps.validate()?;
    Ok(caps)
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn emit(cli: &Cli, json: Value, text: impl FnOnce() -> String) -> Result<()> {
    let mut body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&json)?,
        Format::Text => text(),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().write_all(body.as_bytes())?),
    }
}

fn run(cli: &Cli) -> Result<()> {
    let caps = caps(cli)?;
    match &cli.command {
        Command::Measure {
            expr,
            method,
            precision,
        } => {
            let e = parse_event(expr)?;
            let record = match method {
                Method::Exact => MeasureRecord::exact(&e, &caps)?,
                Method::Weight => MeasureRecord::weight(&e, *precision, &caps)?,
            };
            emit(cli, serde_json::to_value(&record)?, || record.mu.clone())
        }
        Command::Sample { n, seed, kind } => match kind {
            Kind::Order => {
                let report = sample_prefix_with_report(*seed, *n)?;
                let json = json!({
                    "kind": "order",
                    "seed": seed,
                    "n": n,
                    "sequence": report.prefix.sequence(),
                    "tie_cap_hits": report.tie_cap_hits,
                });
                emit(cli, json, || report.prefix.to_string())
            }
            Kind::Graph => {
                let pairs = n * n.saturating_sub(1) / 2;
                if pairs > MAX_SAMPLE_LEN {
                    return Err(Error::CapExceeded {
                        what: "graph sample bits",
                        got: pairs,
                        cap: MAX_SAMPLE_LEN,
                    }
                    .into());
                }
                let bits = sample_bits(*seed, pairs);
                let edges = bits
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(r, _)| pair_unrank(r));
                let g = GraphPrefix::from_edges(*n, edges)?;
                let json = json!({
                    "kind": "graph",
                    "seed": seed,
                    "n": n,
                    "edges": g.edges().collect::<Vec<_>>(),
                });
                emit(cli, json, || g.to_string())
            }
        },
        Command::Test {
            families,
            depth,
            seed,
            canon,
            order,
        } => {
            let families = parse_families(families, &caps)?;
            let (id, reports) = if let Some(n) = canon {
                let o = CanonicalOrder::new(*n, caps.stage)?;
                (o.id(), run_ml_tests(&o, &families, *depth))
            } else if let Some(path) = order {
                let o: OrderPrefix = read_input(path)?.parse()?;
                (o.id(), run_ml_tests(&o, &families, *depth))
            } else {
                let o = RandomOrderStream::new(seed.unwrap_or(0));
                (o.id(), run_ml_tests(&o, &families, *depth))
            };
            let json = json!({
                "order": id,
                "depth": depth,
                "families": reports.iter().map(FamilyReport::to_json).collect::<Vec<_>>(),
            });
            emit(cli, json, || test_text(&id, &reports))
        }
        Command::Iso { left, right, depth } => {
            let map = back_and_forth(left.boxed(), right.boxed(), *depth, caps.step_budget)?;
            let json = json!({
                "left": left.boxed().id(),
                "right": right.boxed().id(),
                "depth": depth,
                "pairs": map,
            });
            emit(cli, json, || pairs_text(map.pairs()))
        }
        Command::Randomizer {
            seed,
            depth,
            tau,
            verify,
        } => {
            if let Some(path) = verify {
                let cert: Value = serde_json::from_str(&read_input(path)?)
                    .map_err(|e| Error::Format(e.to_string()))?;
                let cert = RandomizerCertificate::from_json(&cert)?;
                let tau = Presentation::from_id(&cert.tau_id)?.boxed();
                let xi = RandomOrderStream::new(cert.seed);
                if !verify_certificate(&cert, &tau, &xi)? {
                    bail!(Unverified(format!(
                        "certificate for seed {} does not map {} onto the stream",
                        cert.seed, cert.tau_id
                    )));
                }
                let json = json!({"verified": true, "seed": cert.seed, "tau": cert.tau_id, "depth": cert.n});
                return emit(cli, json, || "verified".into());
            }
            let xi = RandomOrderStream::new(*seed);
            let cert = compute_randomizer(tau.boxed(), &xi, *depth, caps.step_budget)?;
            emit(cli, cert.to_json(), || {
                format!(
                    "seed {} tau {} depth {}\n{}",
                    cert.seed,
                    cert.tau_id,
                    cert.n,
                    pairs_text(cert.sigma.pairs())
                )
            })
        }
        Command::Obstruction { n } => {
            let report = poset_automorphism_obstruction(*n, &caps)?;
            emit(cli, serde_json::to_value(&report)?, || {
                format!(
                    "n {}\nautomorphisms {}\ntrapped {}\nmeasure {}",
                    report.n, report.automorphisms, report.trapped, report.measure
                )
            })
        }
        Command::Encode { input } => {
            let g: GraphPrefix = read_input(input)?.parse()?;
            let bits = format_bits(&bits_from_graph(&g));
            let json = json!({"vertices": g.vertex_count(), "bits": bits});
            emit(cli, json, || bits.clone())
        }
        Command::Decode { input } => {
            let text = read_input(input)?;
            let g = graph_from_bits(&parse_bits(&text)?);
            let json =
                json!({"vertices": g.vertex_count(), "edges": g.edges().collect::<Vec<_>>()});
            emit(cli, json, || g.to_string())
        }
    }
}

/// Splits on commas outside parentheses.
fn parse_families(spec: &str, caps: &Caps) -> Result<Vec<MLTestFamily>> {
    let mut items = Vec::new();
    let (mut depth, mut start) = (0usize, 0);
    for (i, c) in spec.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                items.push(&spec[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push(&spec[start..]);
    items
        .into_iter()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (name, args) = match item.split_once('(') {
                Some((name, rest)) => {
                    let inner = rest
                        .strip_suffix(')')
                        .ok_or_else(|| Error::Format(format!("unclosed `(` in `{item}`")))?;
                    let args = inner
                        .split(',')
                        .map(|a| {
                            a.trim()
                                .parse::<usize>()
                                .map_err(|_| Error::Format(format!("bad argument in `{item}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    (name.trim(), args)
                }
                None => (item, Vec::new()),
            };
            let family = match (name, &args[..]) {
                ("density", []) => MLTestFamily::density(0, 1)?,
                ("density", &[n, m]) => MLTestFamily::density(n, m)?,
                ("unbounded", []) => MLTestFamily::unbounded(0),
                ("unbounded", &[n]) => MLTestFamily::unbounded(n),
                ("poset", []) => MLTestFamily::poset(caps),
                _ => {
                    return Err(anyhow!(Error::Format(format!(
                        "unknown test family `{item}`"
                    ))))
                }
            };
            Ok(family)
        })
        .collect()
}

fn test_text(id: &str, reports: &[FamilyReport]) -> String {
    let mut out = format!("order {id}\n");
    for r in reports {
        let verdict = match &r.verdict {
            Verdict::Pass { depth } => format!("pass through level {depth}"),
            Verdict::Fail { level } => format!("fail at level {level}"),
            Verdict::Budget { level, reason } => format!("undecided at level {level}: {reason}"),
        };
        out.push_str(&format!("{}: {verdict}\n", r.family));
        for l in &r.levels {
            out.push_str(&format!(
                "  level {} measure {} {}\n",
                l.k,
                l.exact_mu,
                if l.member { "in" } else { "out" }
            ));
        }
    }
    out
}

fn pairs_text(pairs: impl Iterator<Item = (usize, usize)>) -> String {
    pairs.map(|(a, b)| format!("{a} {b}\n")).collect()
}
