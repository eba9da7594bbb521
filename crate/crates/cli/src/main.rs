//! `samuel`: command-line access to orders, asymptotic Samuel functions,
//! saturations, equivalence tests and multiplicities of monomial filtrations.
//!
//! Exit codes: 0 ok, 2 parse error, 3 precondition error, 4 internal limit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use samuel_core::equivalence::{
    projectively_equivalent, recover_valuations, Equivalence, NubarOracle, OmegaOracle, PairsOracle,
};
use samuel_core::multiplicity::{filtration_value, multiplicity_estimate, multiplicity_exact, saturation_check};
use samuel_core::props::{run_suite, DEFAULT_CASES, DEFAULT_SEED, SUITES};
use samuel_core::samuel::{self, NubarKind, DEFAULT_R_MAX};
use samuel_core::wire::{filtration_to_json, parse_filtration};
use samuel_core::{Error, ErrorKind, ExactReal, Filtration, MonomialIdeal, MonomialValuation, Order, SupportPoly};

#[derive(Parser)]
#[command(name = "samuel", version, about = "Asymptotic Samuel functions of monomial filtrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Filtration JSON file (`-` for stdin).
    #[arg(short = 'f', long = "filtration")]
    filtration: PathBuf,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Element {
    /// Exponent vector of a monomial, e.g. `2,1`.
    #[arg(long, conflicts_with = "support")]
    monomial: Option<String>,
    /// Support of a polynomial as `;`-separated exponent vectors, e.g. `2,0;0,3`.
    #[arg(long)]
    support: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Order ν(f) = max{m : f ∈ I_m}.
    Nu {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        element: Element,
    },
    /// Asymptotic Samuel function; `--n-max` forces the sequence estimate.
    Nubar {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        element: Element,
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// Twist m ↦ I_⌈αm⌉.
    Twist {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 5)]
        m_max: u64,
    },
    /// Bracket twist of a discrete valued filtration (a_i ↦ α·a_i).
    Bracket {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 5)]
        m_max: u64,
    },
    /// Saturated filtration K_m = {f : ν̄(f) >= m}.
    K {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 5)]
        m_max: u64,
    },
    /// Integral-closure filtration, with undecided monomials reported.
    Ic {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 5)]
        m_max: u64,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        r_max: u64,
    },
    /// Projective equivalence of two discrete valued filtrations.
    Equiv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Recover an irredundant family from the ν̄ of a filtration.
    Recover {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 12)]
        degree_bound: u64,
    },
    /// Multiplicity: exact for discrete valued filtrations in d <= 3, plus the colength series.
    Mult {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        /// Write the colength series as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Value ν_v(F) = inf ν_v(I_n)/n of a monomial valuation.
    Val {
        #[command(flatten)]
        input: Input,
        /// Weight vector, e.g. `1,1`.
        #[arg(long)]
        valuation: String,
        #[arg(long, default_value_t = 20)]
        n_max: u64,
    },
    /// Compare levels with the saturation over monomial valuations.
    Sat {
        #[command(flatten)]
        input: Input,
        /// `;`-separated weight vectors, e.g. `1,2;2,1`.
        #[arg(long, default_value = "")]
        test_vals: String,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
    },
    /// Integrality of x^ord t^n over R[I] for I_m = (x^(⌈αm⌉+c)).
    Rees1 {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        ord: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Randomized property suites.
    Props {
        /// One suite; all by default.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: u64,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    /// Property suites found counterexamples.
    Props,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Filtration, Failure> {
    let text = read_text(path)?;
    parse_filtration(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())).into(),
        other => other.into(),
    })
}

fn parse_vector(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad exponent {t:?} in {s:?}"))))
        .collect()
}

fn parse_vectors(s: &str) -> Result<Vec<Vec<u64>>, Error> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_vector).collect()
}

fn parse_real(s: &str) -> Result<ExactReal, Error> {
    s.parse()
}

fn element(el: &Element, n: usize) -> Result<SupportPoly, Error> {
    let support = match (&el.monomial, &el.support) {
        (Some(m), _) => vec![parse_vector(m)?],
        (None, Some(s)) => parse_vectors(s)?,
        (None, None) => return Err(Error::Invalid("give --monomial or --support".into())),
    };
    SupportPoly::new(n, support)
}

fn ideal_json(i: &MonomialIdeal) -> Value {
    json!(i.gens())
}

fn levels_json(f: &Filtration, m_max: u64) -> Result<Value, Error> {
    let mut out = Vec::new();
    for m in 0..=m_max {
        out.push(json!({"m": m, "gens": ideal_json(&f.level(m)?)}));
    }
    Ok(Value::Array(out))
}

fn print_levels(f: &Filtration, m_max: u64) -> Result<(), Error> {
    for m in 0..=m_max {
        println!("I_{m} = ({})", f.level(m)?);
    }
    Ok(())
}

fn show_filtration(command: &str, f: &Filtration, m_max: u64, json: bool) -> Result<(), Error> {
    if json {
        emit(json!({"command": command, "filtration": filtration_to_json(f), "levels": levels_json(f, m_max)?}));
    } else {
        println!("{}", serde_json::to_string(&filtration_to_json(f)).expect("values serialize"));
        print_levels(f, m_max)?;
    }
    Ok(())
}

fn emit(v: Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("values serialize"));
}

fn order_json(o: Order) -> Value {
    match o {
        Order::Finite(a) => json!({"kind": "finite", "value": a}),
        Order::Infinite => json!({"kind": "infinite", "value": null}),
        Order::AtLeast(h) => json!({"kind": "at_least", "value": h}),
    }
}

fn pairs_json(pairs: &[(MonomialValuation, ExactReal)]) -> Value {
    pairs.iter().map(|(v, a)| json!({"w": v.weights(), "a": a.to_string()})).collect()
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Nu { input, element: el } => {
            let f = load(&input.filtration)?;
            let p = element(&el, f.n())?;
            let o = f.order(&p)?;
            if input.json {
                emit(json!({"command": "nu", "order": order_json(o), "text": o.to_string()}));
            } else {
                println!("{o}");
            }
        }
        Command::Nubar { input, element: el, n_max } => {
            let f = load(&input.filtration)?;
            let p = element(&el, f.n())?;
            let r = match n_max {
                Some(n) => samuel::nubar_estimate(&f, &p, n)?,
                None => samuel::nubar(&f, &p)?,
            };
            if input.json {
                emit(json!({
                    "command": "nubar",
                    "value": r.value.to_string(),
                    "kind": if r.kind == NubarKind::Exact { "exact" } else { "lower_bound" },
                    "witness_n": r.witness_n,
                    "horizon_limited": r.horizon_limited,
                    "text": r.to_string(),
                }));
            } else {
                println!("{r}");
            }
        }
        Command::Twist { input, alpha, m_max } => {
            let f = load(&input.filtration)?;
            show_filtration("twist", &f.twist(parse_real(&alpha)?)?, m_max, input.json)?;
        }
        Command::Bracket { input, alpha, m_max } => {
            let f = load(&input.filtration)?;
            show_filtration("bracket", &f.bracket_twist(&parse_real(&alpha)?)?, m_max, input.json)?;
        }
        Command::K { input, m_max } => {
            let f = load(&input.filtration)?;
            let k = samuel::k_filtration(&f, m_max)?;
            if input.json {
                emit(json!({"command": "k", "levels": levels_json(&k, m_max)?, "filtration": filtration_to_json(&k)}));
            } else {
                print_levels(&k, m_max)?;
            }
        }
        Command::Ic { input, m_max, r_max } => {
            let f = load(&input.filtration)?;
            let ic = samuel::ic_filtration(&f, m_max, r_max)?;
            let open: Vec<Value> = ic
                .inconclusive
                .iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(m, v)| json!({"m": m, "monomials": v}))
                .collect();
            if input.json {
                emit(json!({
                    "command": "ic",
                    "levels": levels_json(&ic.table, m_max)?,
                    "inconclusive": open,
                    "r_max": r_max,
                    "conclusive": ic.is_conclusive(),
                }));
            } else {
                print_levels(&ic.table, m_max)?;
                for (m, v) in &ic.inconclusive {
                    for e in v {
                        println!("level {m}: {} undecided (r <= {r_max})", samuel_core::monalg::render_monomial(e));
                    }
                }
            }
        }
        Command::Equiv { left, right, json } => {
            let (f, g) = (load(&left)?, load(&right)?);
            let r = projectively_equivalent(&f, &g)?;
            if json {
                let v = match &r {
                    Equivalence::Equivalent { alpha } => {
                        json!({"command": "equiv", "equivalent": true, "alpha": alpha.to_string()})
                    }
                    Equivalence::NotEquivalent { reference, counterexample } => json!({
                        "command": "equiv",
                        "equivalent": false,
                        "reference": reference,
                        "counterexample": counterexample,
                    }),
                };
                emit(v);
            } else {
                println!("{r}");
            }
        }
        Command::Recover { input, degree_bound } => {
            let f = load(&input.filtration)?;
            let rep = match &f {
                Filtration::DiscreteValued(pairs) => {
                    recover_valuations(&PairsOracle::new(pairs.clone())? as &dyn OmegaOracle, degree_bound)?
                }
                other => recover_valuations(&NubarOracle(other), degree_bound)?,
            };
            if input.json {
                emit(json!({"command": "recover", "pairs": pairs_json(rep.pairs())}));
            } else {
                println!("{rep}");
            }
        }
        Command::Mult { input, n_max, csv } => {
            let f = load(&input.filtration)?;
            let exact = match multiplicity_exact(&f) {
                Ok(e) => Some(e),
                Err(Error::NotDiscreteValued | Error::DimensionUnsupported(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let est = multiplicity_estimate(&f, n_max)?;
            let estimate = ExactReal::from_rational(est.estimate.clone());
            if let Some(path) = csv {
                let mut body = String::from("n,colength,normalized\n");
                for s in &est.samples {
                    body.push_str(&format!("{},{},{}\n", s.n, s.colength, s.normalized));
                }
                fs::write(&path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            if input.json {
                emit(json!({
                    "command": "mult",
                    "d": est.d,
                    "exact": exact.as_ref().map(|e| e.to_string()),
                    "estimate": estimate.to_string(),
                    "samples": est.samples,
                }));
            } else {
                match &exact {
                    Some(e) => println!("e = {e} (exact)"),
                    None => println!("e: no exact value for this input"),
                }
                println!("estimate at n = {n_max}: {estimate} ~ {:.6}", estimate.to_f64());
                for s in &est.samples {
                    println!("  n = {:>6}  colength = {:>12}  normalized = {}", s.n, s.colength, s.normalized);
                }
            }
        }
        Command::Val { input, valuation, n_max } => {
            let f = load(&input.filtration)?;
            let v = MonomialValuation::new(parse_vector(&valuation)?)?;
            let r = filtration_value(&v, &f, n_max)?;
            if input.json {
                emit(json!({
                    "command": "val",
                    "exact": r.exact.as_ref().map(|e| e.to_string()),
                    "running_inf": r.running_inf.to_string(),
                    "running_inf_at": r.running_inf_at,
                }));
            } else {
                match &r.exact {
                    Some(e) => println!("nu_v(F) = {e} (exact)"),
                    None => println!("nu_v(F): no closed form"),
                }
                println!("min over n <= {n_max}: {} at n = {}", r.running_inf, r.running_inf_at);
            }
        }
        Command::Sat { input, test_vals, n_max } => {
            let f = load(&input.filtration)?;
            let vals = parse_vectors(&test_vals)?.into_iter().map(MonomialValuation::new).collect::<Result<Vec<_>, _>>()?;
            let rep = saturation_check(&f, &vals, n_max)?;
            if input.json {
                emit(json!({
                    "command": "sat",
                    "valuations": rep.valuations.iter().map(|(v, x)| json!({"w": v.weights(), "value": x.to_string()})).collect::<Vec<_>>(),
                    "levels": rep.levels,
                    "all_equal": rep.all_equal(),
                }));
            } else {
                for (v, x) in &rep.valuations {
                    println!("{v}: nu_v(F) = {x}");
                }
                for l in &rep.levels {
                    println!(
                        "n = {:>3}: I_n in Sat_n {}, I_n = Sat_n {}, K_n = Sat_n {}",
                        l.n, l.level_in_sat, l.level_equals_sat, l.k_equals_sat
                    );
                }
                println!("all levels saturated: {}", rep.all_equal());
            }
        }
        Command::Rees1 { alpha, c, ord, n, json } => {
            let r = samuel::rees_graded_integral_1var(&parse_real(&alpha)?, c, ord, n)?;
            if json {
                emit(json!({"command": "rees1", "integral": r.integral, "witness_d": r.witness_d}));
            } else if let (true, Some(d)) = (r.integral, r.witness_d) {
                println!("integral (d = {d})");
            } else {
                println!("not integral");
            }
        }
        Command::Props { suite, seed, cases, json } => {
            let names: Vec<&str> = match &suite {
                Some(s) => vec![s.as_str()],
                None => SUITES.to_vec(),
            };
            if !json {
                println!("seed {seed}");
            }
            let mut reports = Vec::new();
            for s in names {
                let r = run_suite(s, seed, cases)?;
                if !json {
                    let status = if r.passed() { "PASS" } else { "FAIL" };
                    println!("{status} {s}: {}/{} cases", r.cases - r.failures.len() as u64, r.cases);
                    for f in &r.failures {
                        println!("  reproducer: {f}");
                    }
                }
                reports.push(r);
            }
            let ok = reports.iter().all(|r| r.passed());
            if json {
                emit(json!({"command": "props", "seed": seed, "suites": reports}));
            }
            if !ok {
                return Err(Failure::Props);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli);
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Props) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Precondition => 3,
                ErrorKind::Limit => 4,
            })
        }
    }
}
