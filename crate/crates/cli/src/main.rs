use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gallai_core::bounds::{edge_monotonicity_check, extreme_zero_check, star_bounds_check};
use gallai_core::classify::{algebraic_to_json, decompose, SignClass, ThetaContext};
use gallai_core::corpus::{random_graph, RandomSpec};
use gallai_core::exact::format_rational;
use gallai_core::graph::{parse_graph, to_json_string};
use gallai_core::matchpoly::{matching_polynomial, roots_with_multiplicity};
use gallai_core::pathtree::{annotate_signs, build_path_tree};
use gallai_core::suite::{parse_theta_spec, run_suite, Suite};
use gallai_core::{Error, RatGraph, Verdict};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "gallai", version, about = "Matching polynomials, sign classes and the refined Gallai-Edmonds decomposition")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of μ(G), lowest degree first.
    Poly { file: PathBuf },
    /// Isolating intervals and multiplicities of the roots of μ(G), ascending.
    Roots { file: PathBuf },
    /// Sign classes and decomposition at θ.
    Decompose {
        file: PathBuf,
        /// `rat:<p/q>` or `root:<k>` (k-th distinct root, 1-based).
        #[arg(long)]
        theta: String,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Seeded random instance in the graph JSON format.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        weighted: bool,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Path tree from a vertex, optionally with the class of every node at θ.
    Pathtree {
        file: PathBuf,
        /// 1-based root vertex.
        #[arg(long, default_value_t = 1)]
        root: usize,
        #[arg(long)]
        theta: Option<String>,
    },
    /// Largest zero, the star bound and the checks on extreme zeros.
    Bounds { file: PathBuf },
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn read_graph(file: &PathBuf) -> Result<RatGraph, String> {
    let text = if file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?
    };
    parse_graph(&text).map_err(|e| e.to_string())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let err = |e: Error| e.to_string();
    match &cli.command {
        Command::Poly { file } => {
            let g = read_graph(file)?;
            let mu = matching_polynomial(&g);
            let coeffs: Vec<String> = mu.coeffs().iter().map(format_rational).collect();
            let degree = mu.degree().unwrap_or(0);
            if cli.json {
                print_json(&json!({"coefficients": coeffs, "degree": degree}));
            } else {
                println!("[{}]", coeffs.join(", "));
                println!("degree {degree}");
            }
        }
        Command::Roots { file } => {
            let g = read_graph(file)?;
            let roots = roots_with_multiplicity(&g).map_err(err)?;
            if cli.json {
                let list: Vec<Value> = roots
                    .iter()
                    .map(|(r, m)| {
                        let mut v = algebraic_to_json(r);
                        v["multiplicity"] = json!(m);
                        v
                    })
                    .collect();
                print_json(&json!(list));
            } else {
                let width = gallai_core::Rational::new(1.into(), 1_000_000.into());
                for (r, m) in &roots {
                    let r = r.refine_to_width(&width);
                    let iv = r.interval();
                    println!(
                        "[{}, {}] mult {m} ~ {:.9}",
                        format_rational(iv.lo()),
                        format_rational(iv.hi()),
                        r.approx()
                    );
                }
            }
        }
        Command::Decompose { file, theta } => {
            let g = read_graph(file)?;
            let theta = parse_theta_spec(&g, theta).map_err(err)?;
            let ctx = ThetaContext::new(&g, theta);
            let dec = decompose(&ctx).map_err(err)?;
            if cli.json {
                print_json(&dec.to_json());
            } else {
                let mut out = String::new();
                let _ = writeln!(out, "theta {}", dec.theta);
                let _ = writeln!(out, "m {}", dec.m);
                for v in g.vertices().iter() {
                    let _ = writeln!(out, "  {} {}", v + 1, dec.class_of(v).map_or("-", SignClass::name));
                }
                for (name, set) in
                    [("D", dec.d), ("A", dec.a), ("N-", dec.n_minus), ("N+", dec.n_plus), ("P", dec.p)]
                {
                    let _ = writeln!(out, "{name} {:?}", set);
                }
                let _ = writeln!(out, "critical components {:?}", dec.critical_components);
                print!("{out}");
            }
        }
        Command::Verify { file, suite } => {
            let g = read_graph(file)?;
            let suite: Suite = suite.parse().map_err(err)?;
            let name = file.file_name().map(|s| s.to_string_lossy().into_owned());
            let report = run_suite(&g, suite, name.as_deref()).map_err(err)?;
            if cli.json {
                print_json(&serde_json::to_value(&report).expect("reports serialize"));
            } else {
                print!("{}", report.render_text());
            }
            return Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail });
        }
        Command::Random { n, density, seed, weighted, output } => {
            if !(0.0..=1.0).contains(density) {
                return Err(format!("density must lie in [0, 1], got {density}"));
            }
            let g = random_graph(&RandomSpec { n: *n, density: *density, seed: *seed, weighted: *weighted })
                .map_err(err)?;
            let text = to_json_string(&g);
            match output {
                Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))?,
                None => println!("{text}"),
            }
        }
        Command::Pathtree { file, root, theta } => {
            let g = read_graph(file)?;
            if *root == 0 || !g.vertices().contains(root - 1) {
                return Err(format!("vertex {root} is not in the graph"));
            }
            match theta {
                Some(spec) => {
                    let ctx = ThetaContext::new(&g, parse_theta_spec(&g, spec).map_err(err)?);
                    let ann = annotate_signs(&ctx, root - 1).map_err(err)?;
                    if cli.json {
                        print_json(&ann.render_json());
                    } else {
                        print!("{}", ann.render_text());
                    }
                }
                None => {
                    let tree = build_path_tree(&g, root - 1).map_err(err)?;
                    if cli.json {
                        print_json(&tree.render_json());
                    } else {
                        print!("{}", tree.render_text());
                    }
                }
            }
        }
        Command::Bounds { file } => {
            let g = read_graph(file)?;
            let (bounds, star) = star_bounds_check(&g).map_err(err)?;
            let extreme = extreme_zero_check(&g).map_err(err)?;
            let weakenings: Vec<(String, Verdict)> = g
                .edges()
                .map(|(u, v, w)| (u, v, w.clone()))
                .collect::<Vec<_>>()
                .into_iter()
                .map(|(u, v, w)| {
                    let half = &w / gallai_core::Rational::from_integer(2.into());
                    let label = format!("{}-{} to {}", u + 1, v + 1, format_rational(&half));
                    (label, edge_monotonicity_check(&g, u, v, &half).unwrap_or_else(|e| Verdict::fail(e.to_string())))
                })
                .collect();
            let passed = star.is_pass() && extreme.is_pass() && weakenings.iter().all(|(_, v)| !v.is_fail());
            if cli.json {
                let mut v = bounds.to_json();
                v["star_bounds"] = serde_json::to_value(&star).expect("verdicts serialize");
                v["extreme_zero"] = serde_json::to_value(&extreme).expect("verdicts serialize");
                v["edge_monotonicity"] = weakenings
                    .iter()
                    .map(|(label, verdict)| json!({"edge": label, "verdict": verdict}))
                    .collect::<Vec<_>>()
                    .into();
                print_json(&v);
            } else {
                let iv = |a: &gallai_core::AlgebraicNumber| {
                    format!("[{}, {}] ~ {:.9}", format_rational(a.interval().lo()), format_rational(a.interval().hi()), a.approx())
                };
                println!("z_G    {}", iv(&bounds.z_g));
                println!("z_star {} (star at {})", iv(&bounds.z_star), bounds.center + 1);
                println!("B      {}", format_rational(&bounds.b));
                println!("r_max  {}", format_rational(&bounds.r_max));
                println!("star bounds  {}", verdict_text(&star));
                println!("extreme zero {}", verdict_text(&extreme));
                for (label, verdict) in &weakenings {
                    println!("weaken {label}: {}", verdict_text(verdict));
                }
            }
            return Ok(if passed { Outcome::Pass } else { Outcome::Fail });
        }
    }
    Ok(Outcome::Pass)
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail { detail } => format!("FAIL {detail}"),
        Verdict::NotApplicable { reason } => format!("n/a {reason}"),
    }
}
