use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use continuant::maps::{complete, Completion, DivisorPrefix};
use continuant::seeds::{enumerate_unit_tuples, family_tuples, unit_families};
use continuant::{
    check_condition, classify_n2_solution, continuant, enumerate_factorizations,
    factorization_table, factorization_to_solution, lift, solution_to_factorization, Chain,
    EndState, EquationInstance, Error, FactorizationTriple, IntPolynomial, IntTuple, LiftResult,
    MapExpr, MapOutcome, Parity, ProvenanceSearch, Sign, Solution,
};

const DEFAULT_MAX_STEPS: usize = 64;

#[derive(Parser)]
#[command(
    name = "continuant",
    version,
    about = "Continuants and the equations built from them"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate K_n(x_1..x_n).
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(last = true)]
        xs: Vec<BigInt>,
    },
    /// Report the admissibility condition, and verify a solution if one is given.
    Check {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(last = true)]
        xs: Vec<BigInt>,
    },
    /// Find x_n completing a prefix (x_0..x_{n-1}).
    Lift {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(last = true)]
        xs: Vec<BigInt>,
    },
    /// Extend a solution to the left and right along its chain.
    Extend {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long, default_value_t = 0)]
        left: usize,
        #[arg(long, default_value_t = 0)]
        right: usize,
        #[arg(last = true)]
        xs: Vec<BigInt>,
    },
    /// Walk a chain from a solution or a saved chain file.
    Chain(ChainArgs),
    /// Brute-force tuples with K_n = target in a box.
    Units {
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        target: i64,
    },
    /// List the families of tuples with K_n = 1.
    Families {
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long)]
        n: usize,
        /// Also list the members with entries in [-bound, bound].
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Classify a triple against x1^4 + 1 = (x0 x1 + 1)(x1 x2 + 1).
    Classify {
        #[arg(last = true)]
        xs: Vec<BigInt>,
    },
    /// Apply a map expression such as "g.h" or "f:2" to a divisor prefix.
    Map {
        #[arg(long, default_value = "1,0,0,0,1", allow_hyphen_values = true)]
        poly: IntPolynomial,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long, required_unless_present = "list")]
        expr: Option<MapExpr>,
        /// List the admissible compositions for t instead.
        #[arg(long)]
        list: bool,
        #[arg(last = true)]
        xs: Vec<BigInt>,
    },
    /// Factorizations P(m) = d1 d2 and solutions with t = 1.
    #[command(subcommand)]
    Bridge(BridgeCommand),
}

#[derive(Args)]
struct EquationArgs {
    /// Coefficients c_0,..,c_d.
    #[arg(long, allow_hyphen_values = true)]
    poly: IntPolynomial,
    #[arg(long, allow_negative_numbers = true)]
    t: i64,
    /// Inferred from the tuple length when omitted.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long, required_unless_present = "from", allow_hyphen_values = true)]
    poly: Option<IntPolynomial>,
    #[arg(long, allow_negative_numbers = true, required_unless_present = "from")]
    t: Option<i64>,
    #[arg(long)]
    n: Option<usize>,
    /// Continue a chain saved with --save.
    #[arg(long, conflicts_with_all = ["poly", "t", "n"])]
    from: Option<PathBuf>,
    /// Steps in each direction, unless --left or --right is given.
    #[arg(long, default_value_t = 3)]
    radius: usize,
    #[arg(long)]
    left: Option<usize>,
    #[arg(long)]
    right: Option<usize>,
    #[arg(long)]
    save: Option<PathBuf>,
    #[arg(last = true)]
    xs: Vec<BigInt>,
}

#[derive(Subcommand)]
enum BridgeCommand {
    ToSolution {
        #[arg(long, allow_hyphen_values = true)]
        poly: IntPolynomial,
        #[arg(long)]
        m: BigInt,
        #[arg(long)]
        d1: BigInt,
        /// Defaults to the parity for which the polynomial is admissible.
        #[arg(long)]
        parity: Option<Parity>,
    },
    FromSolution {
        #[arg(long, allow_hyphen_values = true)]
        poly: IntPolynomial,
        #[arg(last = true)]
        xs: Vec<BigInt>,
    },
    Factorize {
        #[arg(long, allow_hyphen_values = true)]
        poly: IntPolynomial,
        #[arg(long)]
        m: BigInt,
    },
    Table {
        #[arg(long, allow_hyphen_values = true)]
        poly: IntPolynomial,
        /// Defaults to the parity for which the polynomial is admissible.
        #[arg(long)]
        parity: Option<Parity>,
        #[arg(long)]
        m_max: u64,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Search for unit seeds and maps reaching each row.
        #[arg(long)]
        provenance: bool,
    },
}

struct Output {
    format: Format,
}

impl Output {
    fn ok(&self, result: Value, text: impl Into<String>) {
        self.line(json!({"ok": true, "result": result}), text.into());
    }

    fn ok_chain(&self, result: Value, chain: &Chain, text: impl Into<String>) {
        let end = json!({
            "left": end_name(chain.left_end()),
            "right": end_name(chain.right_end()),
        });
        self.line(
            json!({"ok": true, "result": result, "end_state": end}),
            text.into(),
        );
    }

    fn line(&self, value: Value, text: String) {
        match self.format {
            Format::Json => println!("{value}"),
            Format::Text => println!("{text}"),
        }
    }

    fn error(&self, e: &Error) {
        match self.format {
            Format::Json => println!("{}", json!({"ok": false, "error": e.to_string()})),
            Format::Text => eprintln!("error: {e}"),
        }
    }
}

fn end_name(e: EndState) -> &'static str {
    match e {
        EndState::Open => "open",
        EndState::Branch => "branch",
    }
}

fn strings(xs: &[BigInt]) -> Value {
    Value::from(xs.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn sign(t: i64) -> Result<Sign, Error> {
    Sign::try_from(t)
}

fn max_steps() -> Result<usize, Error> {
    match std::env::var("CONTINUANT_MAX_STEPS") {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::Parse(format!("CONTINUANT_MAX_STEPS must be a count, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_STEPS),
    }
}

fn check_steps(steps: usize) -> Result<(), Error> {
    let cap = max_steps()?;
    if steps > cap {
        return Err(Error::InvalidInput(format!(
            "{steps} steps requested, CONTINUANT_MAX_STEPS is {cap}"
        )));
    }
    Ok(())
}

fn instance(
    poly: IntPolynomial,
    t: i64,
    n: Option<usize>,
    inferred: usize,
) -> Result<Arc<EquationInstance>, Error> {
    let n = match n {
        Some(n) if n != inferred => {
            return Err(Error::InvalidInput(format!(
                "--n {n} does not match a tuple of this length (n = {inferred})"
            )))
        }
        _ => inferred,
    };
    Ok(Arc::new(EquationInstance::new(poly, sign(t)?, n)?))
}

fn solution(eq: EquationArgs, xs: Vec<BigInt>) -> Result<Solution, Error> {
    let n = xs.len().saturating_sub(1);
    let inst = instance(eq.poly, eq.t, eq.n, n)?;
    Solution::new(inst, IntTuple::new(xs))
}

fn default_parity(poly: &IntPolynomial, parity: Option<Parity>) -> Parity {
    parity.unwrap_or_else(|| {
        if check_condition(poly, Sign::Plus, 2).holds {
            Parity::Even
        } else {
            Parity::Odd
        }
    })
}

fn chain_result(chain: &Chain) -> Value {
    serde_json::from_str(&chain.to_json()).expect("chain JSON is valid")
}

fn chain_text(chain: &Chain) -> String {
    let width = chain.instance().n() + 1;
    let start = chain.base_offset();
    let els = chain.elements();
    let mut parts: Vec<String> = els[..start].iter().map(ToString::to_string).collect();
    parts.push(IntTuple::from(&els[start..start + width]).to_string());
    parts.extend(els[start + width..].iter().map(ToString::to_string));
    let mark = |e| if e == EndState::Branch { "|" } else { "..." };
    format!(
        "{} {} {}",
        mark(chain.left_end()),
        parts.join(","),
        mark(chain.right_end())
    )
}

fn run(cmd: Command, out: &Output) -> Result<(), Error> {
    match cmd {
        Command::Eval { t, xs } => {
            let k = continuant(t, &xs)?;
            out.ok(Value::from(k.to_string()), k.to_string());
        }
        Command::Check { eq, xs } => {
            let poly = eq.poly.clone();
            let t = sign(eq.t)?;
            if xs.is_empty() {
                let n =
                    eq.n.ok_or_else(|| Error::InvalidInput("--n or a tuple is required".into()))?;
                let report = check_condition(&poly, t, n);
                let text = format!("admissible: {}", report.holds);
                out.ok(
                    serde_json::to_value(&report).expect("report serializes"),
                    text,
                );
            } else {
                let n = xs.len().saturating_sub(1);
                let inst = instance(eq.poly, eq.t, eq.n, n)?;
                let holds = continuant::verify_solution(&inst, &xs)?;
                out.ok(json!({"solution": holds}), format!("solution: {holds}"));
            }
        }
        Command::Lift { eq, xs } => {
            let inst = instance(eq.poly, eq.t, eq.n, xs.len())?;
            match lift(&inst, &xs)? {
                LiftResult::Unique(x) => out.ok(Value::from(x.to_string()), x.to_string()),
                LiftResult::Free => out.ok(Value::from("free"), "free"),
                LiftResult::NotLiftable => {
                    return Err(Error::InvalidInput(format!(
                        "{} does not lift to a solution",
                        IntTuple::new(xs)
                    )))
                }
            }
        }
        Command::Extend {
            eq,
            left,
            right,
            xs,
        } => {
            check_steps(left.max(right))?;
            let seed = solution(eq, xs)?;
            let mut chain = Chain::new(&seed);
            chain.ensure(left, right)?;
            out.ok_chain(
                json!({"elements": strings(chain.elements()), "base_offset": chain.base_offset()}),
                &chain,
                chain_text(&chain),
            );
        }
        Command::Chain(args) => {
            let left = args.left.unwrap_or(args.radius);
            let right = args.right.unwrap_or(args.radius);
            check_steps(left.max(right))?;
            let mut chain = match &args.from {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                    Chain::from_json(&text)?
                }
                None => {
                    let eq = EquationArgs {
                        poly: args.poly.expect("required by clap"),
                        t: args.t.expect("required by clap"),
                        n: args.n,
                    };
                    Chain::new(&solution(eq, args.xs)?)
                }
            };
            chain.ensure(left, right)?;
            if let Some(path) = &args.save {
                fs::write(path, chain.to_json())
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            }
            out.ok_chain(chain_result(&chain), &chain, chain_text(&chain));
        }
        Command::Units {
            t,
            n,
            bound,
            target,
        } => {
            let tuples = enumerate_unit_tuples(sign(t)?, n, bound, target);
            let text = tuples
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("\n");
            let list: Vec<String> = tuples.iter().map(ToString::to_string).collect();
            out.ok(json!(list), text);
        }
        Command::Families { t, n, bound } => {
            let t = sign(t)?;
            let fams = unit_families(t, n)?;
            let labels: Vec<&str> = fams.iter().map(|f| f.label()).collect();
            let mut result = json!({"families": labels});
            let mut text = labels.join("\n");
            if let Some(b) = bound {
                let members: Vec<String> = family_tuples(t, n, b)?
                    .iter()
                    .map(ToString::to_string)
                    .collect();
                text = members.join("\n");
                result["tuples"] = json!(members);
            }
            out.ok(result, text);
        }
        Command::Classify { xs } => {
            let [x0, x1, x2] = xs.as_slice() else {
                return Err(Error::InvalidInput("classify takes three integers".into()));
            };
            let cat = classify_n2_solution(x0, x1, x2)?;
            let value = serde_json::to_value(&cat).expect("category serializes");
            let text = value["category"].as_str().unwrap_or_default().to_string();
            out.ok(value, text);
        }
        Command::Map {
            poly,
            t,
            expr,
            list,
            xs,
        } => {
            let t = sign(t)?;
            if list {
                let rules = continuant::maps::valid_compositions(t);
                let text = rules
                    .iter()
                    .map(|r| format!("{} ({:?})", r.expr, r.requires))
                    .collect::<Vec<_>>()
                    .join("\n");
                out.ok(serde_json::to_value(&rules).expect("rules serialize"), text);
                return Ok(());
            }
            let expr = expr.expect("required by clap");
            let prefix = DivisorPrefix::new(Arc::new(poly), t, IntTuple::new(xs))?;
            match expr.apply(&prefix)? {
                MapOutcome::Prefix(p) => {
                    let completion = match complete(&p)? {
                        Completion::Solution(s) => Value::from(s.xs().to_string()),
                        Completion::Free(_) => Value::from("free"),
                    };
                    let text = format!("{} -> {}", p.xs(), completion.as_str().unwrap_or_default());
                    out.ok(
                        json!({"prefix": p.xs().to_string(), "completion": completion}),
                        text,
                    );
                }
                MapOutcome::Solution(s) => {
                    out.ok(json!({"solution": s.xs().to_string()}), s.xs().to_string());
                }
            }
        }
        Command::Bridge(b) => run_bridge(b, out)?,
    }
    Ok(())
}

fn run_bridge(cmd: BridgeCommand, out: &Output) -> Result<(), Error> {
    match cmd {
        BridgeCommand::ToSolution {
            poly,
            m,
            d1,
            parity,
        } => {
            let parity = default_parity(&poly, parity);
            let f = FactorizationTriple::with_d1(&poly, m, d1)?;
            let s = factorization_to_solution(&poly, parity, &f)?;
            out.ok(Value::from(s.xs().to_string()), s.xs().to_string());
        }
        BridgeCommand::FromSolution { poly, xs } => {
            let n = xs.len().saturating_sub(1);
            let inst = instance(poly, 1, None, n)?;
            let f = solution_to_factorization(&Solution::new(inst, IntTuple::new(xs))?)?;
            let text = f.to_string();
            out.ok(serde_json::to_value(&f).expect("triple serializes"), text);
        }
        BridgeCommand::Factorize { poly, m } => {
            let pairs = enumerate_factorizations(&poly, &m)?;
            let text = pairs
                .iter()
                .map(|(a, b)| format!("{a} * {b}"))
                .collect::<Vec<_>>()
                .join("\n");
            let list: Vec<Value> = pairs
                .iter()
                .map(|(a, b)| strings(&[a.clone(), b.clone()]))
                .collect();
            out.ok(Value::from(list), text);
        }
        BridgeCommand::Table {
            poly,
            parity,
            m_max,
            radius,
            provenance,
        } => {
            check_steps(radius)?;
            let parity = default_parity(&poly, parity);
            let search = provenance.then(ProvenanceSearch::default);
            let rows = factorization_table(&poly, parity, m_max, radius, search)?;
            for r in rows {
                let f = &r.factorization;
                let prov = match (&r.provenance, provenance) {
                    (Some(p), _) => Value::from(p.as_str()),
                    (None, true) => Value::from("new?"),
                    (None, false) => Value::Null,
                };
                let text = format!(
                    "{:>4}  {:<28}  {:<48}  {}",
                    f.m,
                    format!("{} * {}", f.d1, f.d2),
                    r.chain_snippet(),
                    prov.as_str().unwrap_or("")
                );
                out.ok(
                    json!({
                        "m": f.m.to_string(),
                        "d1": f.d1.to_string(),
                        "d2": f.d2.to_string(),
                        "solution": r.solution.xs().to_string(),
                        "chain": r.chain_snippet(),
                        "provenance": prov,
                    }),
                    text,
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output { format: cli.format };
    match run(cli.command, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            out.error(&e);
            ExitCode::from(if matches!(e, Error::Parse(_)) { 2 } else { 1 })
        }
    }
}
