//! `ncpit`: seeded, reproducible command-line access to the identity tests,
//! isolation experiments and fooling-polynomial constructor.

mod input;
mod report;

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncpit::algebra::FieldSpec;
use ncpit::circuit::DEFAULT_DEGREE_LIMIT;
use ncpit::isolation::{
    defeating_family_search, estimate_isolation_probability, estimate_linear_form_isolation,
    find_weight_collection, random_bitset, random_distinct_forms, unique_min_verbose,
    vv_experiment, Universe, WeightAssignment, MAX_TIE_WITNESSES,
};
use ncpit::ncpoly::DEFAULT_TERM_LIMIT;
use ncpit::pit::{
    construct_fooling_polynomial, extract_coefficient, ks_commutative_pit, ks_parameters, nc_pit,
    pit_statistics, PitLimits, PitVerdict, Verdict, DEFAULT_MATRIX_ENTRY_LIMIT,
};
use ncpit::trials::{trial_rng, TrialPlan};
use serde_json::{json, Value};

use input::{format_bit_vector, parse_bit_vectors, parse_monomial, parse_weight_lists, Inputs};
use report::Report;

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
/// Returned for a NonZero verdict under `--fail-on-nonzero`.
const EXIT_NONZERO: u8 = 1;

/// Stream index reserved for setup draws (random families, sets, collections)
/// so they never overlap a trial stream.
const SETUP_STREAM: u64 = u64::MAX;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    /// A library error raised while processing the file at `path`.
    pub fn at(path: &Path, e: ncpit::Error) -> Self {
        let message = match &e {
            ncpit::Error::Parse {
                line,
                column,
                message,
            } => {
                format!("{}:{line}:{column}: parse error: {message}", path.display())
            }
            ncpit::Error::Validation { line, message } => {
                format!("{}:{line}: {message}", path.display())
            }
            other => format!("{}: {other}", path.display()),
        };
        Failure {
            code: exit_code_for(&e),
            message,
        }
    }
}

fn exit_code_for(e: &ncpit::Error) -> u8 {
    if e.is_resource_guard() {
        EXIT_RESOURCE
    } else {
        EXIT_INPUT
    }
}

impl From<ncpit::Error> for Failure {
    fn from(e: ncpit::Error) -> Self {
        Failure {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Parser, Debug)]
#[command(
    name = "ncpit",
    version,
    about = "Randomized identity testing for noncommutative circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for trial loops; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Exit with status 1 when a test reports NonZero.
    #[arg(long, global = true)]
    fail_on_nonzero: bool,
}

#[derive(Args, Debug)]
struct CircuitArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Expected field of the circuit (q or p:<prime>).
    #[arg(long)]
    field: Option<FieldSpec>,
}

#[derive(Args, Debug)]
struct PitArgs {
    #[command(flatten)]
    input: CircuitArgs,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Degree bound; defaults to the circuit's formal degree.
    #[arg(long)]
    degree: Option<u64>,
    /// Largest automaton matrix allowed, in entries.
    #[arg(long, default_value_t = DEFAULT_MATRIX_ENTRY_LIMIT)]
    max_entries: u128,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a circuit into its sorted monomial listing.
    Expand {
        #[command(flatten)]
        input: CircuitArgs,
        #[arg(long, default_value_t = DEFAULT_TERM_LIMIT)]
        max_terms: usize,
    },
    /// Noncommutative randomized identity test.
    PitNc(PitArgs),
    /// Commutative identity test by univariate substitution.
    PitComm(PitArgs),
    /// Exact coefficient of one monomial.
    Coeff {
        #[command(flatten)]
        input: CircuitArgs,
        /// Space-separated variable indices, e.g. "1 2"; "-" for the empty word.
        #[arg(long, allow_hyphen_values = true)]
        monomial: String,
    },
    /// Estimate the probability that random weights isolate a family.
    IsoEstimate {
        #[arg(long)]
        family: PathBuf,
        /// Universe size; defaults to the largest index in the file.
        #[arg(long)]
        n: Option<usize>,
        /// Weight range; defaults to 2n.
        #[arg(long)]
        range: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Also report the minimum under this fixed assignment.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Greedily find weight assignments isolating every given family.
    IsoCover {
        /// Repeat for each family.
        #[arg(long, required = true)]
        family: Vec<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        range: Option<u64>,
        /// Assignments to draw before giving up.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Search for a family tied under every assignment of a collection.
    IsoDefeat {
        #[arg(long)]
        n: usize,
        /// Explicit collection, e.g. "1 1;2 3".
        #[arg(long, conflicts_with = "count")]
        weights: Option<String>,
        /// Number of random assignments when --weights is absent.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        range: Option<u64>,
    },
    /// Estimate unique-minimum frequency for random linear-form families.
    KsIso {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_coeff: u64,
        #[arg(long, default_value_t = 20)]
        forms: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Random-hyperplane isolation experiment over GF(2).
    Vv {
        #[arg(long)]
        t: u32,
        /// Explicit set of t-bit vectors, e.g. "10 01".
        #[arg(long, conflicts_with = "set_size")]
        set: Option<String>,
        /// Size of a random set when --set is absent.
        #[arg(long, default_value_t = 8)]
        set_size: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Build a polynomial that vanishes on every automaton of a collection.
    Fool {
        #[arg(long)]
        n: usize,
        /// Explicit collection, each assignment listing n*n grid values row-major.
        #[arg(long, conflicts_with = "count")]
        weights: Option<String>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
    },
    /// Single-trial detection rate of the noncommutative test.
    Stats {
        #[command(flatten)]
        input: CircuitArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        degree: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MATRIX_ENTRY_LIMIT)]
        max_entries: u128,
    },
    /// Time expansion and both identity tests on one circuit.
    Bench {
        #[command(flatten)]
        input: CircuitArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Expand { .. } => "expand",
            Command::PitNc(_) => "pit-nc",
            Command::PitComm(_) => "pit-comm",
            Command::Coeff { .. } => "coeff",
            Command::IsoEstimate { .. } => "iso-estimate",
            Command::IsoCover { .. } => "iso-cover",
            Command::IsoDefeat { .. } => "iso-defeat",
            Command::KsIso { .. } => "ks-iso",
            Command::Vv { .. } => "vv",
            Command::Fool { .. } => "fool",
            Command::Stats { .. } => "stats",
            Command::Bench { .. } => "bench",
        }
    }

    fn is_randomized(&self) -> bool {
        !matches!(self, Command::Expand { .. } | Command::Coeff { .. })
    }
}

struct Outcome {
    result: Value,
    counters: BTreeMap<String, Value>,
    nonzero: bool,
    /// Replaces the report under `--format tsv` (the expansion listing).
    tsv_override: Option<String>,
}

impl Outcome {
    fn new(result: Value) -> Self {
        Outcome {
            result,
            counters: BTreeMap::new(),
            nonzero: false,
            tsv_override: None,
        }
    }

    fn counter(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.counters.insert(key.to_string(), value.into());
        self
    }
}

fn positive(flag: &str, v: usize) -> Result<usize, Failure> {
    if v == 0 {
        Err(Failure::usage(format!("{flag} must be at least 1")))
    } else {
        Ok(v)
    }
}

fn setup_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    trial_rng(seed, SETUP_STREAM)
}

fn verdict_json(v: &PitVerdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let jobs = positive("--jobs", cli.jobs)?;
    let plan = |trials: usize| TrialPlan::new(trials, cli.seed).with_jobs(jobs);
    match &cli.command {
        Command::Expand { input, max_terms } => {
            let c = inputs.arith_circuit(&input.circuit, input.field)?;
            let f = c.expand_bruteforce(*max_terms)?;
            let mut out = Outcome::new(json!({
                "is_zero": f.is_zero(),
                "num_terms": f.num_terms(),
                "degree": f.degree(),
                "polynomial": f,
            }))
            .counter("gates", c.size());
            out.tsv_override = Some(f.to_listing());
            Ok(out)
        }
        Command::PitNc(args) | Command::PitComm(args) => {
            let c = inputs.arith_circuit(&args.input.circuit, args.input.field)?;
            let trials = positive("--trials", args.trials)?;
            let limits = PitLimits {
                max_matrix_entries: args.max_entries,
                degree_limit: DEFAULT_DEGREE_LIMIT,
            };
            let degree = match args.degree {
                Some(d) => d,
                None => c.formal_degree_with_limit(DEFAULT_DEGREE_LIMIT)?,
            };
            let nc = matches!(cli.command, Command::PitNc(_));
            let v = if nc {
                nc_pit(&c, Some(degree), plan(trials), limits)?
            } else {
                ks_commutative_pit(&c, Some(degree), plan(trials), limits)?
            };
            let mut out = Outcome::new(json!({
                "verdict": v.verdict,
                "witness": v.witness,
                "trials_run": v.trials_run,
                "degree": degree,
            }))
            .counter("gates", c.size());
            let n = c.num_vars() as u64;
            out = if nc {
                out.counter("automaton_states", 2 * n * degree.pow(3) + 2)
            } else {
                let (range, cap) = ks_parameters(c.num_vars(), degree);
                out.counter("weight_range", range)
                    .counter("degree_cap", cap)
            };
            out.nonzero = v.verdict == Verdict::NonZero;
            Ok(out)
        }
        Command::Coeff { input, monomial } => {
            let c = inputs.arith_circuit(&input.circuit, input.field)?;
            let m = parse_monomial(monomial)?;
            if let Some(&bad) = m.letters().iter().find(|&&i| i > c.num_vars()) {
                return Err(Failure::usage(format!(
                    "--monomial: variable {bad} exceeds the circuit's {} variables",
                    c.num_vars()
                )));
            }
            let value = extract_coefficient(&c, &m)?;
            Ok(
                Outcome::new(json!({ "monomial": m.letters(), "coefficient": value }))
                    .counter("gates", c.size()),
            )
        }
        Command::IsoEstimate {
            family,
            n,
            range,
            samples,
            weights,
        } => {
            let f = inputs.family(family, *n)?;
            let n = f.universe_size();
            let range = range.unwrap_or(2 * n as u64);
            if *samples < 100 {
                return Err(Failure::usage("--samples must be at least 100"));
            }
            if range == 0 {
                return Err(Failure::usage("--range must be at least 1"));
            }
            let e = estimate_isolation_probability(&f, range, plan(*samples))?;
            let fixed = match weights {
                Some(text) => {
                    let lists = parse_weight_lists(text)?;
                    let [values] = lists.as_slice() else {
                        return Err(Failure::usage("--weights: expected exactly one assignment"));
                    };
                    let w = WeightAssignment::flat(values.clone(), range)?;
                    Some(unique_min_verbose(&f, &w, MAX_TIE_WITNESSES)?)
                }
                None => None,
            };
            Ok(Outcome::new(
                json!({ "n": n, "range": range, "estimate": e, "fixed_assignment": fixed }),
            )
            .counter("members", f.members()?.len()))
        }
        Command::IsoCover {
            family,
            n,
            range,
            budget,
        } => {
            let families = family
                .iter()
                .map(|p| inputs.family(p, *n))
                .collect::<Result<Vec<_>, _>>()?;
            let size = families[0].universe_size();
            let range = range.unwrap_or(2 * size as u64);
            if range == 0 {
                return Err(Failure::usage("--range must be at least 1"));
            }
            let ws = find_weight_collection(&families, range, *budget, &mut setup_rng(cli.seed))?;
            let collection: Vec<&[u64]> = ws.iter().map(WeightAssignment::values).collect();
            Ok(Outcome::new(json!({
                "n": size,
                "range": range,
                "families": families.len(),
                "collection_size": ws.len(),
                "collection": collection,
            })))
        }
        Command::IsoDefeat {
            n,
            weights,
            count,
            range,
        } => {
            let range = range.unwrap_or(2 * *n as u64);
            let collection = match weights {
                Some(text) => parse_weight_lists(text)?
                    .into_iter()
                    .map(|v| {
                        if v.len() != *n {
                            return Err(Failure::usage(format!(
                                "--weights: each assignment needs {n} values"
                            )));
                        }
                        Ok(WeightAssignment::flat(v, range)?)
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => {
                    if range == 0 {
                        return Err(Failure::usage("--range must be at least 1"));
                    }
                    let mut rng = setup_rng(cli.seed);
                    (0..*count)
                        .map(|_| {
                            WeightAssignment::sample(Universe::Flat { n: *n }, range, &mut rng)
                        })
                        .collect()
                }
            };
            let found = defeating_family_search(&collection, *n)
                .map_err(|e| Failure::usage(format!("--n: {e}")))?;
            let family = found.map(|f| f.members()).transpose()?;
            let values: Vec<&[u64]> = collection.iter().map(WeightAssignment::values).collect();
            Ok(Outcome::new(json!({
                "n": n,
                "range": range,
                "collection": values,
                "found": family.is_some(),
                "family": family,
            })))
        }
        Command::KsIso {
            n,
            max_coeff,
            forms,
            samples,
        } => {
            positive("--n", *n)?;
            positive("--samples", *samples)?;
            let family = random_distinct_forms(*n, *max_coeff, *forms, &mut setup_rng(cli.seed))
                .map_err(|e| Failure::usage(format!("--forms: {e}")))?;
            let e = estimate_linear_form_isolation(&family, plan(*samples))?;
            Ok(Outcome::new(json!({
                "n": n,
                "max_coeff": max_coeff,
                "forms": family.forms(),
                "estimate": e,
            })))
        }
        Command::Vv {
            t,
            set,
            set_size,
            samples,
        } => {
            if *t == 0 || *t > 20 {
                return Err(Failure::usage("--t must be in [1, 20]"));
            }
            positive("--samples", *samples)?;
            let s = match set {
                Some(text) => parse_bit_vectors(text, *t)?,
                None => random_bitset(*t, *set_size, &mut setup_rng(cli.seed))
                    .map_err(|e| Failure::usage(format!("--set-size: {e}")))?,
            };
            if s.is_empty() {
                return Err(Failure::usage("--set: the set must be nonempty"));
            }
            let e = vv_experiment(&s, *t, plan(*samples))?;
            let shown: Vec<String> = s.iter().map(|&v| format_bit_vector(v, *t)).collect();
            Ok(Outcome::new(json!({ "t": t, "set": shown, "estimate": e })))
        }
        Command::Fool {
            n,
            weights,
            count,
            field,
        } => {
            if *n == 0 || *n > 4 {
                return Err(Failure::usage("--n must be in [1, 4]"));
            }
            let universe = Universe::Grid { d: *n, n: *n };
            let range = (2 * n * n) as u64;
            let collection = match weights {
                Some(text) => parse_weight_lists(text)?
                    .into_iter()
                    .map(|v| Ok(WeightAssignment::new(universe, v, range)?))
                    .collect::<Result<Vec<_>, Failure>>()?,
                None => {
                    let mut rng = setup_rng(cli.seed);
                    (0..*count)
                        .map(|_| WeightAssignment::sample(universe, range, &mut rng))
                        .collect()
                }
            };
            let values: Vec<&[u64]> = collection.iter().map(WeightAssignment::values).collect();
            let unknowns = n.pow(*n as u32);
            let result = match construct_fooling_polynomial(*n, &collection, *field) {
                Ok(r) => json!({
                    "status": "found",
                    "n": n,
                    "unknowns": unknowns,
                    "collection": values,
                    "constraints_count": r.constraints_count,
                    "constraint_rank": r.constraint_rank,
                    "polynomial": r.polynomial,
                }),
                Err(ncpit::Error::NoNontrivialSolution { rank, .. }) => json!({
                    "status": "no_nontrivial_solution",
                    "n": n,
                    "unknowns": unknowns,
                    "collection": values,
                    "constraint_rank": rank,
                }),
                Err(e) => return Err(e.into()),
            };
            Ok(Outcome::new(result))
        }
        Command::Stats {
            input,
            samples,
            degree,
            max_entries,
        } => {
            let c = inputs.arith_circuit(&input.circuit, input.field)?;
            positive("--samples", *samples)?;
            let limits = PitLimits {
                max_matrix_entries: *max_entries,
                degree_limit: DEFAULT_DEGREE_LIMIT,
            };
            let e = pit_statistics(&c, *degree, plan(*samples), limits)?;
            Ok(Outcome::new(json!({ "estimate": e })).counter("gates", c.size()))
        }
        Command::Bench { input, trials } => {
            let c = inputs.arith_circuit(&input.circuit, input.field)?;
            let trials = positive("--trials", *trials)?;
            let limits = PitLimits::default();
            let t0 = Instant::now();
            let f = c.expand_bruteforce(DEFAULT_TERM_LIMIT)?;
            let t1 = Instant::now();
            let nc = nc_pit(&c, None, plan(trials), limits)?;
            let t2 = Instant::now();
            let comm = ks_commutative_pit(&c, None, plan(trials), limits)?;
            let t3 = Instant::now();
            let ms = |a: Instant, b: Instant| (b - a).as_secs_f64() * 1e3;
            let mut out = Outcome::new(json!({
                "expansion_terms": f.num_terms(),
                "expansion_is_zero": f.is_zero(),
                "pit_nc": verdict_json(&nc),
                "pit_comm": verdict_json(&comm),
            }))
            .counter("gates", c.size())
            .counter("expand_ms", ms(t0, t1))
            .counter("pit_nc_ms", ms(t1, t2))
            .counter("pit_comm_ms", ms(t2, t3));
            out.nonzero = nc.verdict == Verdict::NonZero;
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs::default();
    match run(&cli, &mut inputs) {
        Ok(outcome) => {
            let report = Report {
                command: cli.command.name().to_string(),
                inputs: inputs.digests,
                seed: cli.command.is_randomized().then_some(cli.seed),
                result: outcome.result,
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
                counters: outcome.counters,
            };
            let text = match (cli.format, outcome.tsv_override) {
                (Format::Tsv, Some(listing)) => listing,
                (Format::Tsv, None) => report.to_tsv(),
                (Format::Json, _) => report.to_json() + "\n",
            };
            // A closed pipe (`| head`) is not an error worth a panic.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if cli.fail_on_nonzero && outcome.nonzero {
                ExitCode::from(EXIT_NONZERO)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
