use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use unipotent::budget::Budget;
use unipotent::characters::{dgg_multiplicity, ggg_multiplicity, parabolic_multiplicity, CachedCharacter, CharCache, UnipotentModule};
use unipotent::coeff_field::{CoeffField, CoeffMode};
use unipotent::combinatorics::{kostka_number, kostka_polynomial, partitions_of, Partition};
use unipotent::error::Error;
use unipotent::finite_field::{make_field, Field};
use unipotent::flag_modules::dimension_table;
use unipotent::verify::{run_suite, Suite, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "unipotent", version, about = "Unipotent modules of GL_n(F_q): dimensions, verification suites, Kostka tables")]
struct Cli {
    /// Rank n of GL_n
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Field size q (a prime power)
    #[arg(long, global = true, default_value_t = 2)]
    q: u64,

    /// Coefficient field: `cyclotomic` or `mod:L` with p | L - 1
    #[arg(long, global = true, default_value = "cyclotomic")]
    coeff: String,

    /// Restrict `dims` to one shape, e.g. "2,1"
    #[arg(long, global = true)]
    lambda: Option<String>,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    /// Maximum number of group elements enumerated at once
    #[arg(long, global = true)]
    budget_elements: Option<u128>,

    /// Maximum dimension of a permutation module
    #[arg(long, global = true)]
    budget_flags: Option<u128>,

    /// Directory for the persistent character-value cache
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// dim M^λ, dim S^λ and dim D^λ for every λ ⊢ n
    Dims,
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Kostka numbers, Kostka polynomials or computed multiplicities
    Tables {
        #[arg(value_enum)]
        kind: TableKind,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Characters,
    Kostka,
    All,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum TableKind {
    Kostka,
    KostkaPoly,
    Multiplicities,
}

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Parse(_)
        | Error::InvalidPartition(_)
        | Error::NotPrimePower(_)
        | Error::FieldTooLarge { .. }
        | Error::InvalidCoeffField(_)
        | Error::SizeMismatch { .. } => EXIT_USAGE,
        _ => EXIT_VERIFY,
    }
}

struct Config {
    n: usize,
    field: Field,
    coeff: CoeffField,
    lambda: Option<Partition>,
    seed: u64,
    format: Format,
    budget: Budget,
    cache_dir: Option<PathBuf>,
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Config, Error> {
        let n = cli.n.ok_or_else(|| Error::Parse("--n is required".into()))?;
        if n == 0 {
            return Err(Error::Parse("--n must be positive".into()));
        }
        let field = make_field(cli.q)?;
        let mode: CoeffMode = cli.coeff.parse()?;
        let coeff = CoeffField::new(mode, field.p())?;
        let lambda = cli.lambda.as_deref().map(str::parse::<Partition>).transpose()?;
        if let Some(l) = &lambda {
            if l.size() != n {
                return Err(Error::InvalidPartition(format!("({l}) is not a partition of {n}")));
            }
        }
        let mut budget = Budget::default();
        if let Some(e) = cli.budget_elements {
            budget.max_elements = e;
        }
        if let Some(f) = cli.budget_flags {
            budget.max_flags = f;
        }
        Ok(Config { n, field, coeff, lambda, seed: cli.seed, format: cli.format, budget, cache_dir: cli.cache_dir.clone() })
    }

    fn header(&self) -> Value {
        json!({ "n": self.n, "q": self.field.q(), "coeff": self.coeff.mode().to_string() })
    }

    fn cache(&self) -> Result<Option<CharCache>, Error> {
        self.cache_dir
            .as_ref()
            .map(|dir| CharCache::open(dir, self.n, self.field.q() as u64, &self.coeff))
            .transpose()
    }
}

/// Output text and exit status.
type Outcome = Result<(String, u8), Error>;

fn dims(cfg: &Config) -> Outcome {
    let mut rows = dimension_table(cfg.n, cfg.field, &cfg.coeff, &cfg.budget);
    if let Some(l) = &cfg.lambda {
        rows.retain(|r| &r.shape == l);
    }
    let status = if rows.iter().any(|r| matches!(r.dims, Err(Error::BudgetExceeded { .. }))) {
        EXIT_BUDGET
    } else if let Some(e) = rows.iter().find_map(|r| r.dims.as_ref().err()) {
        exit_code(e)
    } else {
        0
    };
    let text = match cfg.format {
        Format::Tsv => {
            let mut s = String::from("lambda\tdim_M\tdim_S\tdim_D\n");
            for r in &rows {
                match &r.dims {
                    Ok((m, sd, d)) => s.push_str(&format!("{}\t{m}\t{sd}\t{d}\n", r.shape)),
                    Err(e) => s.push_str(&format!("{}\terror: {e}\n", r.shape)),
                }
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| match &r.dims {
                    Ok((m, s, d)) => json!({ "lambda": r.shape.to_string(), "dim_M": m, "dim_S": s, "dim_D": d }),
                    Err(e) => json!({ "lambda": r.shape.to_string(), "error": e.to_string() }),
                })
                .collect();
            let mut v = cfg.header();
            v["rows"] = Value::Array(rows);
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    Ok((text, status))
}

fn verify(cfg: &Config, suite: SuiteArg) -> Outcome {
    let suite = match suite {
        SuiteArg::Lemmas => Suite::Lemmas,
        SuiteArg::Characters => Suite::Characters,
        SuiteArg::Kostka => Suite::Kostka,
        SuiteArg::All => Suite::All,
    };
    let mut vc = VerifyConfig::new(cfg.n, cfg.field, cfg.coeff.clone());
    vc.budget = cfg.budget;
    vc.seed = cfg.seed;
    let cache = cfg.cache()?;
    let results = run_suite(suite, &vc, cache.as_ref())?;
    let passed = results.iter().all(|r| r.passed());
    let text = match cfg.format {
        Format::Tsv => {
            let mut s = String::from("status\tcheck\tcontext\tcases\tdetail\n");
            for r in &results {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                s.push_str(&format!("{status}\t{}\t{}\t{}\t{}\n", r.name, r.context, r.cases, r.failure.as_deref().unwrap_or("")));
            }
            s
        }
        Format::Json => {
            let checks: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "status": if r.passed() { "PASS" } else { "FAIL" },
                        "check": r.name,
                        "context": r.context,
                        "cases": r.cases,
                        "detail": r.failure.clone().unwrap_or_default(),
                    })
                })
                .collect();
            let mut v = cfg.header();
            v["passed"] = json!(passed);
            v["checks"] = Value::Array(checks);
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    Ok((text, if passed { 0 } else { EXIT_VERIFY }))
}

/// A matrix indexed by partitions, rows μ and columns λ.
struct Table {
    name: &'static str,
    cells: Vec<Vec<Value>>,
    text: Vec<Vec<String>>,
}

fn render_tables(cfg: &Config, tables: &[Table]) -> String {
    let shapes: Vec<String> = partitions_of(cfg.n).iter().map(|p| p.to_string()).collect();
    match cfg.format {
        Format::Tsv => {
            let mut s = String::new();
            for t in tables {
                s.push_str(&format!("# {}\nmu\\lambda\t{}\n", t.name, shapes.join("\t")));
                for (mu, row) in shapes.iter().zip(&t.text) {
                    s.push_str(&format!("{mu}\t{}\n", row.join("\t")));
                }
            }
            s
        }
        Format::Json => {
            let mut v = cfg.header();
            v["partitions"] = json!(shapes);
            for t in tables {
                v[t.name] = json!(t.cells);
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    }
}

fn integer_table(name: &'static str, shapes: &[Partition], f: impl Fn(&Partition, &Partition) -> Result<u64, Error>) -> Result<Table, Error> {
    let mut cells = Vec::new();
    let mut text = Vec::new();
    for mu in shapes {
        let row = shapes.iter().map(|lambda| f(mu, lambda)).collect::<Result<Vec<u64>, Error>>()?;
        text.push(row.iter().map(u64::to_string).collect());
        cells.push(row.into_iter().map(Value::from).collect());
    }
    Ok(Table { name, cells, text })
}

fn tables(cfg: &Config, kind: TableKind) -> Outcome {
    let shapes = partitions_of(cfg.n);
    let q = cfg.field.q() as u64;
    let out = match kind {
        TableKind::Kostka => vec![integer_table("kostka", &shapes, kostka_number)?],
        TableKind::KostkaPoly => {
            let mut cells = Vec::new();
            let mut text = Vec::new();
            for mu in &shapes {
                let row = shapes.iter().map(|l| kostka_polynomial(mu, l)).collect::<Result<Vec<_>, Error>>()?;
                text.push(row.iter().map(|p| p.to_string()).collect());
                cells.push(row.iter().map(|p| json!(p.coeffs())).collect());
            }
            vec![Table { name: "kostka_poly", cells, text }]
        }
        TableKind::Multiplicities => {
            if cfg.coeff.mode() != CoeffMode::Cyclotomic {
                return Err(Error::InvalidCoeffField("multiplicities need --coeff cyclotomic".into()));
            }
            let cache = cfg.cache()?;
            let modules = shapes
                .iter()
                .map(|s| UnipotentModule::new(s, cfg.field, &cfg.coeff, &cfg.budget))
                .collect::<Result<Vec<_>, Error>>()?;
            let chi = |mu: &Partition| {
                let i = shapes.iter().position(|s| s == mu).expect("listed shape");
                CachedCharacter { module: &modules[i], cache: cache.as_ref() }
            };
            let (k, f, b) = (&cfg.coeff, cfg.field, &cfg.budget);
            vec![
                integer_table("gamma", &shapes, |mu, l| ggg_multiplicity(l, &chi(mu), k, f, b))?,
                integer_table("kostka_poly_at_q", &shapes, |mu, l| {
                    u64::try_from(kostka_polynomial(mu, l)?.eval(q)).map_err(|_| Error::NotAnInteger("overflow".into()))
                })?,
                integer_table("psi", &shapes, |mu, l| dgg_multiplicity(l, &chi(mu), k, f, b))?,
                integer_table("parabolic", &shapes, |mu, l| parabolic_multiplicity(l, &chi(mu), k, f, b))?,
            ]
        }
    };
    Ok((render_tables(cfg, &out), 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Config::from_cli(&cli).and_then(|cfg| match cli.command {
        Command::Dims => dims(&cfg),
        Command::Verify { suite } => verify(&cfg, suite),
        Command::Tables { kind } => tables(&cfg, kind),
    });
    match result {
        Ok((text, status)) => {
            print!("{text}");
            ExitCode::from(status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
