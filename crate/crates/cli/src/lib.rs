//! Command-line surface for the `grunwald` library.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! exit code together with the text destined for stdout and stderr. Output is
//! one `key=value` pair per line. Failures produce a single
//! `error[kind]: message` line on stderr.

use std::fmt::Write as _;
use std::fs::File;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use grunwald::arith::local_power::QuadraticElement;
use grunwald::arith::{unit_group, Place};
use grunwald::characters::{make_dirichlet, LocalCharacter};
use grunwald::mult_one::{least_nonsplit_prime, scan_family, write_scan_csv, DEFAULT_PRIME_CAP};
use grunwald::powres::{least_non_lth_power_modulus, least_non_lth_power_modulus_with_order};
use grunwald::solver::{bound_report, construct, oracle_minimal, GrunwaldInstance, GrunwaldSolution};
use grunwald::wang::{special_case, FieldDescriptor};
use grunwald::Error;
use num::Zero;
use serde::Deserialize;

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code 2: malformed input or a precondition violation.
pub const EXIT_VALIDATION: u8 = 2;
/// Exit code 3: a search stopped at its cap.
pub const EXIT_SEARCH_CAP: u8 = 3;
/// Exit code 4: a proven statement failed to hold, which signals a bug.
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_VALIDATION, kind: "validation", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let (code, kind) = match e {
            Error::Range(_) => (EXIT_VALIDATION, "range"),
            Error::NonUnit { .. } => (EXIT_VALIDATION, "non-unit"),
            Error::Domain(_) => (EXIT_VALIDATION, "domain"),
            Error::MalformedCharacter(_) => (EXIT_VALIDATION, "malformed-character"),
            Error::NoWitness(_) => (EXIT_VALIDATION, "no-witness"),
            Error::SearchCap { .. } => (EXIT_SEARCH_CAP, "search-cap"),
            Error::NotFoundBelowCap { .. } => (EXIT_SEARCH_CAP, "not-found-below-cap"),
            Error::InternalContradiction(_) => (EXIT_INTERNAL, "internal"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Debug, Parser)]
#[command(name = "grunwald", version, about = "Characters with prescribed local components over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Constructive,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance file.
    Construct {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "constructive")]
        method: Method,
        /// Conductor cap for the oracle method.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Decide whether the special case of Wang occurs.
    SpecialCase {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        m: u64,
        /// Comma-separated places, e.g. `2,3,infinity`; empty for none.
        #[arg(long = "S", default_value = "", allow_hyphen_values = true)]
        s: String,
    },
    /// Least prime outside the excluded set where a character is nontrivial.
    LeastPrime {
        #[arg(long)]
        modulus: u64,
        /// Comma-separated exponents on the canonical generators.
        #[arg(long, default_value = "")]
        exponents: String,
        #[arg(long, default_value = "")]
        exclude: String,
        /// Values are `ζ_M`-exponents; defaults to the exponent of the unit group.
        #[arg(long)]
        exponent_modulus: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_PRIME_CAP)]
        cap: u64,
    },
    /// Least nonsplit primes for every primitive character up to a conductor bound.
    Scan {
        #[arg(long)]
        max_conductor: u64,
        #[arg(long = "S", default_value = "")]
        s: String,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Least modulus modulo which `p` is not an `l`-th power.
    Powres {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u64,
        /// Also require `l^r | φ(N)`.
        #[arg(long)]
        r: Option<u32>,
    },
    /// Construct a solution and print the bound quantities.
    Report {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    m: u64,
    #[serde(default)]
    places: Vec<PlaceRecord>,
    #[serde(default)]
    field: Option<FieldDescriptor>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaceRecord {
    place: Place,
    #[serde(default)]
    conductor_exponent: u32,
    #[serde(default)]
    unit_exponents: Vec<u64>,
    #[serde(default)]
    uniformizer_exponent: u64,
    #[serde(default)]
    sign_exponent: u8,
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.to_string();
            if !e.use_stderr() {
                return Outcome { code: 0, stdout: rendered, stderr: String::new() };
            }
            let message = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            let message = message.strip_prefix("error: ").unwrap_or(&message).to_string();
            return failure(Failure { code: EXIT_VALIDATION, kind: "usage", message });
        }
    };
    match execute(cli.command) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    let message = f.message.replace('\n', " ");
    Outcome { code: f.code, stdout: String::new(), stderr: format!("error[{}]: {message}\n", f.kind) }
}

fn execute(command: Command) -> CliResult<String> {
    match command {
        Command::Construct { instance, method, cap } => {
            let inst = read_instance(&instance)?;
            let sol = match method {
                Method::Constructive => construct(&inst)?,
                Method::Oracle => oracle_minimal(&inst, cap)?,
            };
            let mut out = String::new();
            line(&mut out, "method", format!("{method:?}").to_lowercase());
            instance_lines(&mut out, &inst);
            solution_lines(&mut out, &sol);
            Ok(out)
        }
        Command::SpecialCase { field, m, s } => {
            let k: FieldDescriptor = field.parse()?;
            let places = parse_places(&s, "S")?;
            let rep = special_case(k, m, &places)?;
            let mut out = String::new();
            line(&mut out, "occurs", rep.occurs);
            line(&mut out, "s", rep.s);
            line(&mut out, "a0", rep.a0.as_ref().map(|a| quadratic(a, k)).unwrap_or_else(|| "none".into()));
            line(&mut out, "S0", join(&rep.s0));
            line(&mut out, "failed_condition", rep.failed_condition.map(|c| c.to_string()).unwrap_or("none".into()));
            Ok(out)
        }
        Command::LeastPrime { modulus, exponents, exclude, exponent_modulus, cap } => {
            if modulus == 0 {
                return Err(Failure::validation("modulus: must be positive"));
            }
            let exps = parse_list::<u64>(&exponents, "exponents")?;
            let places = parse_places(&exclude, "exclude")?;
            let m = match exponent_modulus {
                Some(m) => m,
                None => unit_group(modulus)?.exponent(),
            };
            let chi = make_dirichlet(modulus, &exps, m)?;
            let w = if cap == DEFAULT_PRIME_CAP {
                least_nonsplit_prime(&chi, &places)?
            } else {
                grunwald::mult_one::least_nonsplit_prime_with_cap(&chi, &places, cap)?
            };
            let mut out = String::new();
            line(&mut out, "prime", w.prime);
            line(&mut out, "norm", w.norm);
            line(&mut out, "value_exponent", w.value_exponent);
            line(&mut out, "exponent_modulus", m);
            line(&mut out, "conductor", chi.conductor_norm());
            Ok(out)
        }
        Command::Scan { max_conductor, s, epsilon, out: path, cap } => {
            if epsilon.is_nan() || epsilon <= 0.0 {
                return Err(Failure::validation("epsilon: must be positive"));
            }
            let places = parse_places(&s, "S")?;
            let records = scan_family(max_conductor, &places, epsilon, cap)?;
            let file = File::create(&path)
                .map_err(|e| Failure::validation(format!("out: cannot create {}: {e}", path.display())))?;
            write_scan_csv(file, &records, &places)?;
            let mut out = String::new();
            line(&mut out, "records", records.len());
            line(&mut out, "capped", records.iter().filter(|r| r.least_prime.is_none()).count());
            line(&mut out, "max_least_prime", records.iter().filter_map(|r| r.least_prime).max().unwrap_or(0));
            line(&mut out, "out", path.display());
            Ok(out)
        }
        Command::Powres { p, l, r } => {
            let answer = match r {
                None => least_non_lth_power_modulus(p, l)?,
                Some(r) => least_non_lth_power_modulus_with_order(p, l, r)?,
            };
            let c = &answer.certificate;
            let mut out = String::new();
            line(&mut out, "N", answer.modulus);
            line(&mut out, "phi", c.phi);
            line(&mut out, "lth_power_subgroup_size", c.lth_power_subgroup_size);
            line(&mut out, "subgroup_index", c.subgroup_index);
            line(&mut out, "p_exponents", join(&c.p_exponents));
            line(&mut out, "witness_generator", c.witness_generator);
            Ok(out)
        }
        Command::Report { instance, epsilon } => {
            if epsilon.is_nan() || epsilon <= 0.0 {
                return Err(Failure::validation("epsilon: must be positive"));
            }
            let inst = read_instance(&instance)?;
            let sol = construct(&inst)?;
            let rep = bound_report(&inst, &sol, epsilon);
            let mut out = String::new();
            instance_lines(&mut out, &inst);
            solution_lines(&mut out, &sol);
            line(&mut out, "l", rep.l);
            line(&mut out, "r", rep.r);
            line(&mut out, "e", rep.e);
            line(&mut out, "d", rep.d);
            line(&mut out, "delta", rep.delta);
            line(&mut out, "delta_prime", rep.delta_prime);
            line(&mut out, "E1", rep.e1);
            line(&mut out, "selmer_rank", rep.selmer_rank);
            line(&mut out, "epsilon", rep.epsilon);
            line(&mut out, "bound_tm1_shape", rep.bound_tm1_shape);
            line(&mut out, "bound_tm2_exponent", rep.bound_tm2_exponent);
            line(&mut out, "bound_tm3_shape", rep.bound_tm3_shape);
            line(&mut out, "achieved_log_conductor", rep.achieved_log_conductor);
            line(&mut out, "tm1_ratio", rep.tm1_ratio);
            line(&mut out, "tm2_ratio", rep.tm2_ratio.map(|x| x.to_string()).unwrap_or("none".into()));
            line(&mut out, "tm3_ratio", rep.tm3_ratio);
            line(&mut out, "bpi", rep.bpi);
            line(&mut out, "bpv", rep.bpv);
            line(&mut out, "analytic_conductor_s", rep.analytic_conductor_s);
            line(&mut out, "n_s", rep.n_s);
            line(&mut out, "aux_count", rep.aux_count);
            line(&mut out, "expected_aux_count", rep.expected_aux_count);
            line(&mut out, "conductor_bound_holds", rep.conductor_bound_holds);
            Ok(out)
        }
    }
}

fn read_instance(path: &Path) -> CliResult<GrunwaldInstance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("instance: cannot read {}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| Failure::validation(format!("instance: {}", e.to_string().replace('\n', " "))))?;
    let mut places = Vec::with_capacity(file.places.len());
    for rec in file.places {
        let chi = LocalCharacter::new(
            rec.place,
            file.m,
            rec.conductor_exponent,
            rec.unit_exponents,
            rec.uniformizer_exponent,
            rec.sign_exponent,
        )
        .map_err(|e| Failure::from(e).with_context(&format!("places[{}]", rec.place)))?;
        places.push(chi);
    }
    Ok(GrunwaldInstance::new(file.field.unwrap_or(FieldDescriptor::Rationals), file.m, places)?)
}

impl Failure {
    fn with_context(mut self, context: &str) -> Failure {
        self.message = format!("{context}: {}", self.message);
        self
    }
}

fn instance_lines(out: &mut String, inst: &GrunwaldInstance) {
    line(out, "field", inst.field);
    line(out, "m", inst.m);
    line(out, "S", join(&inst.place_set()));
}

fn solution_lines(out: &mut String, sol: &GrunwaldSolution) {
    let chi = &sol.character;
    line(out, "modulus", chi.modulus());
    line(out, "exponent_modulus", chi.exponent_modulus());
    line(out, "exponents", join(chi.exponents()));
    line(out, "conductor", sol.conductor_norm());
    line(out, "order", chi.order());
    line(out, "exponent_achieved", sol.exponent_achieved);
    line(out, "special_case", sol.special_case_flag);
    line(out, "aux_primes", join(&sol.aux_primes));
    line(out, "cycle", &sol.cycle);
    line(out, "solutions_mod_cycle", sol.solutions_mod_cycle);
}

fn line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}={value}");
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn quadratic(a: &QuadraticElement, k: FieldDescriptor) -> String {
    match k {
        FieldDescriptor::Quadratic(d) if !a.b.is_zero() => format!("{}+{}*sqrt({d})", a.a, a.b),
        _ => a.a.to_string(),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, key: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Failure::validation(format!("{key}: cannot parse `{t}`"))))
        .collect()
}

fn parse_places(s: &str, key: &str) -> CliResult<Vec<Place>> {
    let mut places = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Place>().map_err(|e| Failure::from(e).with_context(key)))
        .collect::<CliResult<Vec<_>>>()?;
    places.sort();
    places.dedup();
    Ok(places)
}
