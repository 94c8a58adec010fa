use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use pcforge::deciders::{
    is_absorbed, is_pc_with, is_pc_witness, is_urc_with, is_urc_witness, reduce_pc_irredundant_with,
    reduce_urc_irredundant_with, DeciderConfig, DecisionReport, Strategy, DEFAULT_LIMIT,
};
use pcforge::dimacs::{parse_dimacs, write_cnf, write_dimacs};
use pcforge::dual_rail::{dual_rail, pc_via_dual_rail};
use pcforge::families::{generate, Companion, Family};
use pcforge::propagation::{up_closure, Status};
use pcforge::qhorn::{compile, qhorn_satisfiable, recognize_qhorn};
use pcforge::semantics::{enumerate_models_with_limit, equivalent, is_encoding_of, prime_implicates};
use pcforge::suite::{self, DEFAULT_SEED};
use pcforge::{Clause, CnfFormula, EncodingFormula, Error, Lit, PartialAssignment};

#[derive(Parser, Debug)]
#[command(name = "pcforge", version, about = "Propagation-complete and unit-refutation-complete CNF toolkit")]
struct Cli {
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Largest universe a decider or enumeration accepts.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_LIMIT)]
    limit: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closure of an assignment under unit propagation.
    Up {
        file: PathBuf,
        /// Comma-separated DIMACS literals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        assume: Vec<i32>,
    },
    /// Decide PC or URC.
    Check {
        property: Property,
        file: PathBuf,
        /// Report a failing assignment.
        #[arg(long)]
        witness: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// All prime implicates.
    Primes {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Equivalence of two formulas over the same universe.
    Equiv { left: PathBuf, right: PathBuf },
    /// Whether an encoding represents the function of a plain CNF.
    Encodes { encoding: PathBuf, function: PathBuf },
    /// Dual-rail encoding.
    Dr {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    #[command(subcommand)]
    Qhorn(QHornCommand),
    /// Generate a formula family.
    Gen {
        family: Family,
        param: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Include companion fixtures in the report.
        #[arg(long, requires = "output")]
        companions: bool,
    },
    /// PC- or URC-irredundant subset of a formula.
    Reduce {
        property: ReduceProperty,
        file: PathBuf,
        /// Permute the removal order.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Whether a clause is absorbed by a formula.
    Absorb {
        /// Comma-separated DIMACS literals.
        #[arg(required = true, num_args = 1, value_delimiter = ',', allow_hyphen_values = true)]
        clause: Vec<i32>,
        file: PathBuf,
    },
    /// Run the acceptance matrix.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum QHornCommand {
    /// Find a q-Horn valuation.
    Recognize { file: PathBuf },
    /// Satisfiability by the q-Horn procedure.
    Sat { file: PathBuf },
    /// Compile into a URC encoding.
    Compile {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Check the output is an encoding of the input and URC.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Pc,
    Urc,
    PcDr,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReduceProperty {
    Pc,
    Urc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    Exhaustive,
    Primes,
    ClosedSets,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Primes => Strategy::Primes,
            StrategyArg::ClosedSets => Strategy::ClosedSets,
        }
    }
}

enum Failure {
    Usage(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::LimitExceeded { .. } | Error::ClauseLimitExceeded { .. } => Failure::Limit(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(bool, Map<String, Value>), Failure>;

struct Context {
    limit: usize,
    inputs: Map<String, Value>,
}

impl Context {
    fn read(&mut self, path: &Path) -> Result<EncodingFormula, Failure> {
        let bytes = fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        self.inputs
            .insert(path.display().to_string(), json!(hex::encode(Sha256::digest(&bytes))));
        let text = String::from_utf8(bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        parse_dimacs(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn read_cnf(&mut self, path: &Path) -> Result<CnfFormula, Failure> {
        Ok(self.read(path)?.into_formula())
    }

    fn config(&self, strategy: Strategy) -> DeciderConfig {
        DeciderConfig {
            limit: self.limit,
            strategy,
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn ints(lits: impl IntoIterator<Item = Lit>) -> Value {
    json!(lits.into_iter().map(Lit::to_dimacs).collect::<Vec<_>>())
}

fn lits_of(values: &[i32]) -> Result<Vec<Lit>, Failure> {
    values
        .iter()
        .map(|&v| Lit::from_dimacs(v).ok_or_else(|| Failure::Usage("0 is not a literal".into())))
        .collect()
}

fn clauses_json(f: &CnfFormula) -> Value {
    json!(f.iter().map(Clause::to_ints).collect::<Vec<_>>())
}

fn payload(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn decision(f: &CnfFormula, property: Property, report: DecisionReport, with_witness: bool) -> Outcome {
    let mut out = payload([("verdict", json!(report.verdict))]);
    if with_witness {
        if let Some(alpha) = &report.witness {
            let valid = match (property, report.literal) {
                (Property::Pc, Some(l)) => is_pc_witness(f, alpha, l),
                _ => is_urc_witness(f, alpha),
            };
            if !valid {
                return Err(Failure::Usage("witness failed to re-validate".into()));
            }
            out.insert("witness".into(), ints(alpha.iter()));
            if let Some(l) = report.literal {
                out.insert("literal".into(), json!(l.to_dimacs()));
            }
        }
    }
    Ok((report.verdict, out))
}

fn run(cli: Cli, ctx: &mut Context) -> Outcome {
    match cli.command {
        Command::Up { file, assume } => {
            let f = ctx.read_cnf(&file)?;
            let alpha = PartialAssignment::new(lits_of(&assume)?)?;
            f.check_assignment(&alpha)?;
            let r = up_closure(&f, &alpha);
            let derived = match r.status {
                Status::Conflict => json!("CONFLICT"),
                Status::Stable => ints(r.derived.iter().copied()),
            };
            Ok((true, payload([("derived", derived), ("conflict", json!(r.status == Status::Conflict))])))
        }
        Command::Check {
            property,
            file,
            witness,
            strategy,
        } => {
            let f = ctx.read_cnf(&file)?;
            let config = ctx.config(strategy.into());
            match property {
                Property::Pc => decision(&f, property, is_pc_with(&f, &config)?, witness),
                Property::Urc => decision(&f, property, is_urc_with(&f, &config)?, witness),
                Property::PcDr => {
                    let verdict = pc_via_dual_rail(&f)?;
                    Ok((verdict, payload([("verdict", json!(verdict))])))
                }
            }
        }
        Command::Primes { file, output } => {
            let primes = prime_implicates(&ctx.read_cnf(&file)?)?;
            let mut out = payload([("count", json!(primes.len())), ("clauses", clauses_json(&primes))]);
            if let Some(path) = output {
                write(&path, &write_cnf(&primes))?;
                out.insert("output".into(), json!(path.display().to_string()));
            }
            Ok((true, out))
        }
        Command::Equiv { left, right } => {
            let verdict = equivalent(&ctx.read_cnf(&left)?, &ctx.read_cnf(&right)?)?;
            Ok((verdict, payload([("verdict", json!(verdict))])))
        }
        Command::Encodes { encoding, function } => {
            let enc = ctx.read(&encoding)?;
            let table = enumerate_models_with_limit(&ctx.read_cnf(&function)?, ctx.limit)?;
            let verdict = is_encoding_of(&enc, &table)?;
            Ok((verdict, payload([("verdict", json!(verdict))])))
        }
        Command::Dr { file, output } => {
            let dr = dual_rail(&ctx.read_cnf(&file)?)?;
            let mut text = String::new();
            for i in 0..dr.map.num_meta_vars() {
                let meta = pcforge::Var::from_index(i);
                text.push_str(&format!("c meta {} {}\n", meta.get(), dr.map.literal(meta).to_dimacs()));
            }
            text.push_str(&write_cnf(&dr.horn));
            write(&output, &text)?;
            Ok((
                true,
                payload([
                    ("meta_vars", json!(dr.map.num_meta_vars())),
                    ("clauses", json!(dr.horn.len())),
                    ("output", json!(output.display().to_string())),
                ]),
            ))
        }
        Command::Qhorn(QHornCommand::Recognize { file }) => {
            let f = ctx.read_cnf(&file)?;
            match recognize_qhorn(&f) {
                Ok(v) => {
                    let weights: Map<String, Value> = f
                        .vars()
                        .map(|x| (x.get().to_string(), json!(v.var_weight(x).to_string())))
                        .collect();
                    Ok((true, payload([("qhorn", json!(true)), ("valuation", Value::Object(weights))])))
                }
                Err(Error::NotQHorn) => Ok((false, payload([("qhorn", json!(false)), ("valuation", json!("NOT-QHORN"))]))),
                Err(e) => Err(e.into()),
            }
        }
        Command::Qhorn(QHornCommand::Sat { file }) => {
            let f = ctx.read_cnf(&file)?;
            match qhorn_satisfiable(&f) {
                Ok(sat) => Ok((sat, payload([("result", json!(if sat { "SAT" } else { "UNSAT" }))]))),
                Err(Error::NotQHorn) => Ok((false, payload([("result", json!("NOT-QHORN"))]))),
                Err(e) => Err(e.into()),
            }
        }
        Command::Qhorn(QHornCommand::Compile { file, output, verify }) => {
            let f = ctx.read_cnf(&file)?;
            let c = match compile(&f) {
                Ok(c) => c,
                Err(Error::NotQHorn) => return Ok((false, payload([("qhorn", json!(false))]))),
                Err(e) => return Err(e.into()),
            };
            let mut out = payload([
                ("qhorn", json!(true)),
                ("aux", json!(c.encoding.aux_vars().len())),
                ("aux_bound", json!(c.aux_bound())),
                ("clauses", json!(c.encoding.formula().len())),
                ("groups", json!(c.group_sizes)),
            ]);
            if let Some(path) = output {
                write(&path, &write_dimacs(&c.encoding))?;
                out.insert("output".into(), json!(path.display().to_string()));
            }
            let mut ok = true;
            if verify {
                let table = enumerate_models_with_limit(&f, ctx.limit)?;
                let encoding = is_encoding_of(&c.encoding, &table)?;
                let urc = is_urc_with(c.encoding.formula(), &ctx.config(Strategy::Auto))?.verdict;
                ok = encoding && urc;
                out.insert("encoding".into(), json!(encoding));
                out.insert("urc".into(), json!(urc));
            }
            Ok((ok, out))
        }
        Command::Gen {
            family,
            param,
            output,
            companions,
        } => {
            let generated = generate(family, param)?;
            let text = write_dimacs(&generated.encoding);
            let Some(path) = output else {
                print!("{text}");
                eprintln!("{family} {param}: {} clauses", generated.encoding.formula().len());
                return Ok((true, Map::new()));
            };
            write(&path, &text)?;
            let mut out = payload([
                ("family", json!(family.name())),
                ("param", json!(param)),
                ("vars", json!(generated.encoding.formula().num_vars())),
                ("clauses", json!(generated.encoding.formula().len())),
                ("output", json!(path.display().to_string())),
            ]);
            if companions {
                let value = match generated.companion {
                    Some(Companion::UBar(cs)) => json!({ "ubar": cs.iter().map(Clause::to_ints).collect::<Vec<_>>() }),
                    Some(Companion::EvenSubsets(sets)) => json!({ "even_subsets": sets }),
                    None => Value::Null,
                };
                out.insert("companions".into(), value);
            }
            Ok((true, out))
        }
        Command::Reduce {
            property,
            file,
            seed,
            output,
        } => {
            let f = ctx.read_cnf(&file)?;
            let config = ctx.config(Strategy::Auto);
            let reduced = match property {
                ReduceProperty::Pc => reduce_pc_irredundant_with(&f, seed, &config),
                ReduceProperty::Urc => reduce_urc_irredundant_with(&f, seed, &config),
            };
            let reduced = match reduced {
                Ok(r) => r,
                Err(Error::NotPc | Error::NotUrc) => return Ok((false, payload([("reduced", Value::Null)]))),
                Err(e) => return Err(e.into()),
            };
            let mut out = payload([
                ("before", json!(f.len())),
                ("after", json!(reduced.len())),
                ("reduced", clauses_json(&reduced)),
            ]);
            if let Some(path) = output {
                write(&path, &write_cnf(&reduced))?;
                out.insert("output".into(), json!(path.display().to_string()));
            }
            Ok((true, out))
        }
        Command::Absorb { clause, file } => {
            let f = ctx.read_cnf(&file)?;
            let verdict = is_absorbed(&Clause::new(lits_of(&clause)?), &f)?;
            Ok((verdict, payload([("verdict", json!(verdict))])))
        }
        Command::Suite { seed, only } => {
            let mut all = true;
            let mut rows = Vec::new();
            for criterion in suite::CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
                let outcome = criterion.run(seed);
                eprintln!("{outcome}");
                all &= outcome.passed;
                rows.push(json!({
                    "id": outcome.id,
                    "name": outcome.name,
                    "passed": outcome.passed,
                    "detail": outcome.detail,
                    "elapsed_ms": outcome.elapsed.as_millis() as u64,
                    "budget_ms": outcome.budget.as_millis() as u64,
                }));
            }
            Ok((all, payload([("seed", json!(seed)), ("criteria", json!(rows)), ("passed", json!(all))])))
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Up { .. } => "up",
        Command::Check { .. } => "check",
        Command::Primes { .. } => "primes",
        Command::Equiv { .. } => "equiv",
        Command::Encodes { .. } => "encodes",
        Command::Dr { .. } => "dr",
        Command::Qhorn(QHornCommand::Recognize { .. }) => "qhorn recognize",
        Command::Qhorn(QHornCommand::Sat { .. }) => "qhorn sat",
        Command::Qhorn(QHornCommand::Compile { .. }) => "qhorn compile",
        Command::Gen { .. } => "gen",
        Command::Reduce { .. } => "reduce",
        Command::Absorb { .. } => "absorb",
        Command::Suite { .. } => "suite",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let name = command_name(&cli.command);
    let quiet = matches!(cli.command, Command::Gen { output: None, .. });
    let mut ctx = Context {
        limit: cli.limit,
        inputs: Map::new(),
    };
    let start = Instant::now();
    let result = run(cli, &mut ctx);
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let (code, mut report) = match result {
        Ok((verdict, values)) => (u8::from(!verdict), values),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            (2, payload([("error", json!(message))]))
        }
        Err(Failure::Limit(message)) => {
            eprintln!("error: {message}");
            (3, payload([("error", json!(message))]))
        }
    };
    if quiet && code == 0 {
        return ExitCode::SUCCESS;
    }
    report.insert("command".into(), json!(name));
    report.insert("inputs".into(), Value::Object(ctx.inputs));
    report.insert("timing_ms".into(), json!((elapsed * 1000.0).round() / 1000.0));
    println!("{}", serde_json::to_string_pretty(&Value::Object(report)).expect("json values serialize"));
    ExitCode::from(code)
}
