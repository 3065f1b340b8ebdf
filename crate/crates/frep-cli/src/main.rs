use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use frep_core::eval::{character, character_table, cycle_representative, eval};
use frep_core::finset::FinFn;
use frep_core::linalg::{q, Rational};
use frep_core::presentation::{load, Presentation};
use frep_core::resolve::{char_poly, dim_poly, k_theory_vector, resolve, to_json, verify_resolution, Resolution};
use frep_core::squish::{lower_squisher, upper_squisher, LOWER_DEFAULT_MAX_K};
use frep_core::Error;

#[derive(Parser)]
#[command(name = "frep", version, about = "Evaluate and resolve uniformly presented 𝓕-representations")]
struct Cli {
    /// Largest coordinate space any evaluation may build.
    #[arg(long, global = true, env = "FREP_ROW_CAP")]
    row_cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension (and optionally characters) of V[n].
    Eval {
        /// A presentation file or a `builtin:` URI.
        source: String,
        #[arg(short = 'n')]
        n: usize,
        /// A permutation of [n] in one-line notation.
        #[arg(long)]
        character: Option<String>,
        /// Print the character at every cycle type.
        #[arg(long)]
        table: bool,
    },
    /// Resolve by Schur projectives and D_k.
    Resolve {
        source: String,
        #[arg(long)]
        json: bool,
        /// Check exactness numerically for n = 0..=N.
        #[arg(long, value_name = "N")]
        verify: Option<usize>,
    },
    /// Print an explicit squisher.
    #[command(group(ArgGroup::new("family").required(true).args(["upper", "lower"])))]
    Squisher {
        /// `k n`: squishes ⊗^n through degree k + 1.
        #[arg(long, num_args = 2, value_names = ["K", "N"])]
        upper: Option<Vec<usize>>,
        #[arg(long, value_name = "K")]
        lower: Option<usize>,
        /// Allow the lower family above its default limit.
        #[arg(long)]
        lift_cap: bool,
    },
    /// Resolve, then compare the resolution and its polynomials with direct evaluation.
    Verify {
        source: String,
        #[arg(long, value_name = "M")]
        n_max: usize,
    },
}

enum Failure {
    Core(Error),
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn load_source(source: &str) -> Result<Presentation, Failure> {
    if source.starts_with("builtin:") {
        return Ok(load(source)?);
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::Input(format!("{source}: {e}")))?;
    Ok(load(&text)?)
}

fn print_resolution(r: &Resolution) -> Result<(), Failure> {
    println!("{}: degree {}", r.target.name, r.target.degree_bound());
    for (i, t) in r.terms.iter().enumerate() {
        println!("term {i}: {t}");
    }
    let dp = dim_poly(r)?;
    println!("dim_poly: {}", dp.poly);
    println!("value_at_zero: {}", dp.at_zero);
    println!("char_poly: {}", char_poly(r));
    println!("k_theory: {}", k_theory_vector(r));
    Ok(())
}

/// `x_i = ` fixed points of `σ^i`, with `x_0 = 0`.
fn power_fixed_points(sigma: &FinFn, m: usize) -> Result<Vec<Rational>, Failure> {
    let mut x = vec![q(0)];
    x.extend(sigma.fixed_point_counts(m)?.into_iter().map(|a| q(a as i64)));
    Ok(x)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Eval { source, n, character: sigma, table } => {
            let p = load_source(&source)?;
            println!("dim = {}", eval(&p, n)?.dim);
            if let Some(s) = sigma {
                let sigma = FinFn::parse(&s, n)?;
                println!("chi({sigma}) = {}", character(&p, n, &sigma)?);
            }
            if table {
                for (mu, chi) in character_table(&p, n)? {
                    println!("{mu}: {chi}");
                }
            }
        }
        Command::Resolve { source, json, verify } => {
            let p = load_source(&source)?;
            let r = resolve(&p)?;
            if let Some(m) = verify {
                verify_resolution(&r, m)?;
            }
            if json {
                let v = to_json(&r, &dim_poly(&r)?, &char_poly(&r));
                println!("{}", serde_json::to_string_pretty(&v).expect("JSON values serialize"));
            } else {
                print_resolution(&r)?;
                if let Some(m) = verify {
                    println!("verified: n = 0..={m}");
                }
            }
        }
        Command::Squisher { upper, lower, lift_cap } => {
            let s = match (upper, lower) {
                (Some(kn), _) => upper_squisher(kn[0], kn[1])?,
                (None, Some(k)) => {
                    if k > LOWER_DEFAULT_MAX_K && !lift_cap {
                        return Err(Failure::Cap(format!("lower squisher for k = {k} is above the default limit {LOWER_DEFAULT_MAX_K}; pass --lift-cap")));
                    }
                    lower_squisher(k, lift_cap)?
                }
                (None, None) => unreachable!("clap requires one family"),
            };
            println!("{}", s.element);
        }
        Command::Verify { source, n_max } => {
            let p = load_source(&source)?;
            let r = resolve(&p)?;
            let report = verify_resolution(&r, n_max)?;
            let dp = dim_poly(&r)?;
            let cp = char_poly(&r);
            let vars = cp.max_var().unwrap_or(0);
            for row in &report.rows {
                let n = row.n;
                if dp.eval(n) != q(row.target_dim as i64) {
                    return Err(Error::Verification(format!("at [{n}]: dim_poly gives {}, evaluation {}", dp.eval(n), row.target_dim)).into());
                }
                if n > 0 {
                    for (mu, chi) in character_table(&p, n)? {
                        let x = power_fixed_points(&cycle_representative(&mu), vars.max(n))?;
                        if cp.eval(&x) != chi {
                            return Err(Error::Verification(format!("at [{n}]: char_poly at {mu} gives {}, evaluation {chi}", cp.eval(&x))).into());
                        }
                    }
                }
                let dims: Vec<String> = row.term_dims.iter().map(ToString::to_string).collect();
                println!("n = {n}: dim {} terms [{}] ok", row.target_dim, dims.join(", "));
            }
            println!("verified {} terms for n = 0..={n_max}", r.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.row_cap {
        // Read back by the core's default limits.
        std::env::set_var("FREP_ROW_CAP", cap.to_string());
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (msg, code) = match f {
                Failure::Input(m) => (m, 2),
                Failure::Cap(m) => (m, 3),
                Failure::Core(e) => {
                    let code = match e {
                        Error::Parse { .. } | Error::Shape(_) | Error::Invalid(_) => 2,
                        Error::Cap { .. } => 3,
                        Error::Verification(_) => 4,
                        Error::NotSubspace | Error::NotInvariant | Error::Internal(_) => 1,
                    };
                    (e.to_string(), code)
                }
            };
            eprintln!("frep: {msg}");
            ExitCode::from(code)
        }
    }
}
