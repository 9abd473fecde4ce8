use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use mzv_core::algebra::{binary_to_compositions, shuffle, stuffle};
use mzv_core::detect::{detect, DetectParams};
use mzv_core::dimensions::{count_table, d};
use mzv_core::double_shuffle::{build_relation_matrix, decompose_with_cap, dimension_report, Provenance, DEFAULT_WEIGHT_CAP};
use mzv_core::expr::Expr;
use mzv_core::feynman::{
    is_primitive_log_divergent, kirchhoff_polynomial, match_period, matrix_tree_count, period_monte_carlo, Graph,
};
use mzv_core::numerics::zeta_euler_maclaurin;
use mzv_core::words::GenericWord;
use mzv_core::{BinaryWord, Composition, Error, Precision};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "mzv", version, about = "Multiple zeta values: word algebras, double shuffle relations, numerics and graph periods")]
struct Cli {
    /// Print JSON (result plus run manifest) instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shuffle product of two words: compositions "(2,3)", binary words "10" or f-words "f3f5".
    Shuffle { left: String, right: String },
    /// Stuffle (quasi-shuffle) product of two compositions.
    Stuffle { left: String, right: String },
    /// Double shuffle relations of one weight.
    Relations {
        #[arg(long)]
        weight: u32,
        /// Leave out the relations from ζ(1)·ζ(n).
        #[arg(long)]
        no_hoffman: bool,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_CAP)]
        cap: u32,
    },
    /// Dimension bounds from the relations (--max) or the counting table (--table).
    Dims {
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        max: Option<u32>,
        #[arg(long)]
        table: Option<usize>,
        /// Highest weight whose relation matrix is reduced.
        #[arg(long, default_value_t = DEFAULT_WEIGHT_CAP)]
        cap: u32,
    },
    /// Rewrite ζ(composition) over Hoffman {2,3}-words.
    HoffmanDecompose {
        composition: String,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_CAP)]
        cap: u32,
    },
    /// Evaluate an MZV expression such as "(2,3) - 3*(2)*(3)".
    Eval {
        expression: String,
        #[arg(long, default_value_t = 40)]
        digits: u32,
    },
    /// Evaluate ζ(s) by Euler–Maclaurin summation.
    EvalZeta {
        s: u32,
        #[arg(long, default_value_t = 40)]
        digits: u32,
    },
    /// Search for an integer relation among MZV expressions.
    Detect {
        #[arg(required = true, num_args = 2..)]
        expressions: Vec<String>,
        #[arg(long, default_value_t = 60)]
        digits: u32,
        /// Largest coefficient considered; defaults to the most the precision supports.
        #[arg(long)]
        height: Option<u64>,
    },
    /// Feynman graphs: Kirchhoff polynomial, convergence and period.
    Feynman {
        #[command(subcommand)]
        command: FeynmanCommand,
    },
}

#[derive(Subcommand, Debug)]
enum FeynmanCommand {
    /// Kirchhoff polynomial of a graph (file path, "-" for stdin, or an inline "V=..;" / JSON graph).
    Psi { graph: String },
    /// Whether the graph is primitive log-divergent.
    Check { graph: String },
    /// Monte-Carlo estimate of the parametric period.
    Period {
        graph: String,
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Match the estimate against zeta products of this weight.
        #[arg(long)]
        weight: Option<u32>,
    },
}

/// Accepts `10000000`, `1e7` or `2.5e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= 9.007_199_254_740_992e15 {
        Ok(x as u64)
    } else {
        Err(format!("not a whole number of samples: {s:?}"))
    }
}

/// What a command produced, before it is printed.
struct Outcome {
    text: String,
    result: Value,
    parameters: Value,
    precision: Option<u32>,
    seed: Option<u64>,
}

impl Outcome {
    fn new(text: String, result: impl Serialize, parameters: Value) -> Self {
        Outcome {
            text,
            result: serde_json::to_value(result).expect("results serialize"),
            parameters,
            precision: None,
            seed: None,
        }
    }
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: Value,
    precision: Option<u32>,
    seed: Option<u64>,
    tool_version: &'static str,
    wall_time_seconds: f64,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Shuffle { .. } => "shuffle",
        Command::Stuffle { .. } => "stuffle",
        Command::Relations { .. } => "relations",
        Command::Dims { .. } => "dims",
        Command::HoffmanDecompose { .. } => "hoffman-decompose",
        Command::Eval { .. } => "eval",
        Command::EvalZeta { .. } => "eval-zeta",
        Command::Detect { .. } => "detect",
        Command::Feynman { command: FeynmanCommand::Psi { .. } } => "feynman psi",
        Command::Feynman { command: FeynmanCommand::Check { .. } } => "feynman check",
        Command::Feynman { command: FeynmanCommand::Period { .. } } => "feynman period",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let outcome = run(cli.command);
    let wall = start.elapsed().as_secs_f64();
    match outcome {
        Ok(out) => {
            if cli.json {
                let manifest = RunManifest {
                    command: name.into(),
                    parameters: out.parameters,
                    precision: out.precision,
                    seed: out.seed,
                    tool_version: env!("CARGO_PKG_VERSION"),
                    wall_time_seconds: wall,
                };
                println!("{}", json!({ "manifest": manifest, "result": out.result }));
            } else {
                println!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                let manifest = RunManifest {
                    command: name.into(),
                    parameters: Value::Null,
                    precision: None,
                    seed: None,
                    tool_version: env!("CARGO_PKG_VERSION"),
                    wall_time_seconds: wall,
                };
                println!("{}", json!({ "manifest": manifest, "error": { "message": e.to_string(), "usage": e.is_usage() } }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Shuffle { left, right } => run_shuffle(&left, &right),
        Command::Stuffle { left, right } => {
            let (m, n): (Composition, Composition) = (left.parse()?, right.parse()?);
            let product = stuffle(&m, &n);
            Ok(Outcome::new(
                product.to_string(),
                json!({ "left": m, "right": n, "product": product }),
                json!({ "left": left, "right": right }),
            ))
        }
        Command::Relations { weight, no_hoffman, cap } => run_relations(weight, !no_hoffman, cap),
        Command::Dims { max: Some(max), cap, .. } => run_dims(max, cap),
        Command::Dims { table, .. } => run_table(table.expect("clap requires --max or --table")),
        Command::HoffmanDecompose { composition, cap } => {
            let c: Composition = composition.parse()?;
            let out = decompose_with_cap(&c, cap)?;
            Ok(Outcome::new(
                format!("{c} = {out}"),
                json!({ "composition": c, "decomposition": out }),
                json!({ "composition": composition, "cap": cap }),
            ))
        }
        Command::Eval { expression, digits } => {
            let e: Expr = expression.parse()?;
            let v = e.eval(Precision::new(digits))?;
            let value = v.to_decimal(digits);
            let mut out = Outcome::new(
                value.clone(),
                json!({
                    "expression": e.to_string(),
                    "value": value,
                    "algorithm": "each MZV split at 1/2 into multiple polylogarithm series",
                }),
                json!({ "expression": expression, "digits": digits }),
            );
            out.precision = Some(digits);
            Ok(out)
        }
        Command::EvalZeta { s, digits } => {
            let v = zeta_euler_maclaurin(s, Precision::new(digits))?;
            let value = v.to_decimal(digits);
            let mut out = Outcome::new(
                value.clone(),
                json!({ "s": s, "value": value, "algorithm": "euler-maclaurin" }),
                json!({ "s": s, "digits": digits }),
            );
            out.precision = Some(digits);
            Ok(out)
        }
        Command::Detect { expressions, digits, height } => run_detect(&expressions, digits, height),
        Command::Feynman { command } => run_feynman(command),
    }
}

fn run_shuffle(left: &str, right: &str) -> Result<Outcome, Error> {
    let params = json!({ "left": left, "right": right });
    let kind = |s: &str| match s.trim_start().chars().next() {
        Some('(') => 'c',
        Some('f') => 'f',
        _ => 'b',
    };
    if kind(left) != kind(right) {
        return Err(Error::Parse(format!("{left:?} and {right:?} are words of different kinds")));
    }
    match kind(left) {
        'c' => {
            let (m, n): (Composition, Composition) = (left.parse()?, right.parse()?);
            let product = binary_to_compositions(&shuffle(&m.to_binary(), &n.to_binary()))?;
            Ok(Outcome::new(product.to_string(), json!({ "left": m, "right": n, "product": product }), params))
        }
        'f' => {
            let (u, v): (GenericWord, GenericWord) = (left.parse()?, right.parse()?);
            let product = shuffle(&u, &v);
            Ok(Outcome::new(product.to_string(), json!({ "left": u, "right": v, "product": product }), params))
        }
        _ => {
            let (u, v): (BinaryWord, BinaryWord) = (left.parse()?, right.parse()?);
            let product = shuffle(&u, &v);
            Ok(Outcome::new(product.to_string(), json!({ "left": u, "right": v, "product": product }), params))
        }
    }
}

fn check_cap(weight: u32, cap: u32) -> Result<(), Error> {
    if weight > cap {
        Err(Error::Domain(format!("weight {weight} exceeds the cap {cap}; raise it with --cap")))
    } else {
        Ok(())
    }
}

fn run_relations(weight: u32, include_hoffman: bool, cap: u32) -> Result<Outcome, Error> {
    check_cap(weight, cap)?;
    let m = build_relation_matrix(weight, include_hoffman)?;
    let mut text = String::new();
    for r in &m.rows {
        let source = match &r.provenance {
            Provenance::Pair(a, b) => format!("{a}*{b}"),
            Provenance::Hoffman(n) => format!("(1)*{n}"),
        };
        text.push_str(&format!("[{source}] {} = 0\n", r.coefficients));
    }
    text.push_str(&format!("{} relations among {} compositions of weight {weight}", m.rows.len(), m.basis.len()));
    Ok(Outcome::new(
        text,
        json!({ "weight": weight, "compositions": m.basis.len(), "relations": m.rows }),
        json!({ "weight": weight, "include_hoffman": include_hoffman, "cap": cap }),
    ))
}

#[derive(Serialize)]
struct DimsRow {
    n: u32,
    compositions: usize,
    relations: Option<usize>,
    rank: Option<usize>,
    bound: Option<usize>,
    d: String,
    excess: Option<i64>,
}

fn run_dims(max: u32, cap: u32) -> Result<Outcome, Error> {
    if max < 2 {
        return Err(Error::Domain("--max must be at least 2".into()));
    }
    let mut rows = Vec::new();
    let mut text = format!("{:>3} {:>8} {:>9} {:>6} {:>6} {:>5}\n", "n", "2^(n-2)", "relations", "rank", "bound", "d_n");
    for n in 2..=max {
        let dn = d(n as usize);
        let compositions = 1usize << (n - 2);
        let row = if n <= cap {
            let r = dimension_report(n)?;
            let dn_small: i64 = dn.to_string().parse().expect("d_n is small within the cap");
            DimsRow {
                n,
                compositions,
                relations: Some(r.relations),
                rank: Some(r.rank),
                bound: Some(r.bound),
                d: dn.to_string(),
                excess: Some(r.bound as i64 - dn_small),
            }
        } else {
            DimsRow { n, compositions, relations: None, rank: None, bound: None, d: dn.to_string(), excess: None }
        };
        let show = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        text.push_str(&format!(
            "{:>3} {:>8} {:>9} {:>6} {:>6} {:>5}",
            n,
            compositions,
            show(row.relations),
            show(row.rank),
            show(row.bound),
            row.d
        ));
        if let Some(e) = row.excess.filter(|e| *e > 0) {
            text.push_str(&format!("  bound exceeds d_n by {e}"));
        }
        text.push('\n');
        rows.push(row);
    }
    text.pop();
    Ok(Outcome::new(text, rows, json!({ "max": max, "cap": cap })))
}

fn run_table(max: usize) -> Result<Outcome, Error> {
    let rows = count_table(max);
    let mut text = format!("{:>3} {:>12} {:>12} {:>12} {:>12}\n", "n", "d_n", "2^(n-2)", "hoffman", "f-monomials");
    for r in &rows {
        text.push_str(&format!("{:>3} {:>12} {:>12} {:>12} {:>12}\n", r.n, r.d, r.compositions, r.hoffman_words, r.f_monomials));
    }
    text.pop();
    Ok(Outcome::new(text, &rows, json!({ "table": max })))
}

fn run_detect(expressions: &[String], digits: u32, height: Option<u64>) -> Result<Outcome, Error> {
    let exprs: Vec<Expr> = expressions.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let height = height.unwrap_or_else(|| DetectParams::max_height(exprs.len(), digits));
    let prec = Precision::new(digits);
    let values = exprs.iter().map(|e| e.eval(prec)).collect::<Result<Vec<_>, _>>()?;
    let r = detect(&values, digits, height)?;
    let text = match &r.coefficients {
        Some(cs) => {
            let mut terms = String::new();
            for (c, e) in cs.iter().zip(&exprs) {
                if c.is_zero() {
                    continue;
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                if terms.is_empty() {
                    if c.is_negative() {
                        terms.push('-');
                    }
                } else {
                    terms.push_str(&format!(" {sign} "));
                }
                let mag = c.abs();
                if mag != BigInt::one() {
                    terms.push_str(&format!("{mag}*"));
                }
                terms.push_str(&format!("[{e}]"));
            }
            format!(
                "{terms} = 0\ncoefficients: ({})\nresidual: {:e}\nconfidence: {:.1} digits",
                cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
                r.residual.to_f64(),
                r.confidence
            )
        }
        None => format!(
            "no relation with max |c_i| <= {height}{}",
            r.height_lower_bound.map_or(String::new(), |b| format!("; every relation has height > {b:.3e}"))
        ),
    };
    let mut out = Outcome::new(
        text,
        &r,
        json!({ "expressions": expressions, "digits": digits, "height": height }),
    );
    out.precision = Some(digits);
    Ok(out)
}

fn load_graph(arg: &str) -> Result<Graph, Error> {
    let t = arg.trim_start();
    if t.starts_with("V") || t.starts_with('{') {
        return Graph::parse_any(arg);
    }
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?
    };
    Graph::parse_any(text.trim())
}

fn run_feynman(command: FeynmanCommand) -> Result<Outcome, Error> {
    match command {
        FeynmanCommand::Psi { graph } => {
            let g = load_graph(&graph)?;
            let psi = kirchhoff_polynomial(&g)?;
            let trees = matrix_tree_count(&g);
            let text = format!(
                "Psi = {psi}\nedges: {}, loops: {}, spanning trees: {} (matrix-tree: {trees})",
                g.edge_count(),
                g.loop_number(),
                psi.len()
            );
            Ok(Outcome::new(
                text,
                json!({
                    "graph": g.to_json(),
                    "edges": g.edge_count(),
                    "loops": g.loop_number(),
                    "monomials": psi,
                    "spanning_trees": psi.len(),
                    "matrix_tree_count": trees.to_string(),
                }),
                json!({ "graph": graph }),
            ))
        }
        FeynmanCommand::Check { graph } => {
            let g = load_graph(&graph)?;
            let primitive = is_primitive_log_divergent(&g)?;
            let text = format!(
                "primitive log-divergent: {}\nedges: {}, loops: {}",
                if primitive { "yes" } else { "no" },
                g.edge_count(),
                g.loop_number()
            );
            Ok(Outcome::new(
                text,
                json!({ "graph": g.to_json(), "edges": g.edge_count(), "loops": g.loop_number(), "primitive_log_divergent": primitive }),
                json!({ "graph": graph }),
            ))
        }
        FeynmanCommand::Period { graph, samples, seed, weight } => {
            let g = load_graph(&graph)?;
            let r = period_monte_carlo(&g, samples, seed)?;
            let mut text = format!("period ≈ {} ± {} ({} samples, seed {seed})", r.estimate, r.standard_error, r.samples);
            let candidates = match weight {
                Some(w) => {
                    let c = match_period(r.estimate, r.standard_error, w)?;
                    for cand in c.iter().take(5) {
                        text.push_str(&format!(
                            "\n  {} = {:.6} ({:.2} sigma){}",
                            cand.expression,
                            cand.value,
                            cand.deviation,
                            if cand.known { ", tabulated" } else { "" }
                        ));
                    }
                    Some(c)
                }
                None => None,
            };
            let mut out = Outcome::new(
                text,
                json!({ "estimate": r, "candidates": candidates }),
                json!({ "graph": graph, "samples": samples, "weight": weight }),
            );
            out.seed = Some(seed);
            Ok(out)
        }
    }
}
