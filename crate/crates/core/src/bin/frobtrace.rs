use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use frobtrace::constants::{
    constant_c, default_max_prime_deg, ConstantRoute, ConstantValue, TruncationParams,
};
use frobtrace::drinfeld::FiniteDrinfeldModule;
use frobtrace::experiment::{reports_csv, run_experiment, BoxSpec, ExperimentConfig, Routes};
use frobtrace::quadratic::ClassNumbers;
use frobtrace::rational::{decimal, HalfPowerRational};
use frobtrace::residue::ResidueField;
use frobtrace::{verify, Error, Fq, Poly, Result};

#[derive(Parser)]
#[command(
    name = "frobtrace",
    version,
    about = "Frobenius traces of rank-2 Drinfeld modules over F_q[T]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frobenius charpoly X² − aX + up of φ_T = T + γτ + δτ² over A/p
    Charpoly {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        delta: String,
    },
    /// Class number h(d) of an imaginary discriminant
    Classnumber {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: String,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Mass H_p of classes with charpoly (a, u)
    Mass {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Truncated constant C(a) with a rigorous tail bound
    Constant {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: String,
        #[arg(long = "U", default_value_t = 6)]
        u: usize,
        #[arg(long = "V", default_value_t = 8)]
        v: usize,
        /// defaults to the largest cutoff ≤ 12 within the size guard
        #[arg(long)]
        max_prime_deg: Option<usize>,
        #[arg(long, value_enum, default_value_t = RouteArg::Euler)]
        route: RouteArg,
        #[arg(long, default_value_t = 30)]
        digits: usize,
    },
    /// Averaged count S(x, 𝒜, ℬ, a, u) against the class-number route and the main term
    Average {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        deg_g: Option<usize>,
        #[arg(long)]
        deg_delta: Option<usize>,
        #[arg(long, default_value = "empirical,classnumber,main")]
        routes: String,
        #[arg(long)]
        max_prime_deg: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Runs the acceptance suite; exits nonzero on any failure
    Verify {
        /// run only these criteria
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Euler,
    Doublesum,
    Both,
}

fn engine(fq: &Fq, cache: &Option<PathBuf>) -> Result<ClassNumbers> {
    let e = ClassNumbers::new(fq);
    if let Some(path) = cache {
        if path.exists() {
            e.load_cache(path)?;
        }
    }
    Ok(e)
}

fn store(e: &ClassNumbers, cache: &Option<PathBuf>) -> Result<()> {
    match cache {
        Some(path) => e.save_cache(path),
        None => Ok(()),
    }
}

fn constant_json(c: &ConstantValue, q: u64, digits: usize) -> Value {
    let v = HalfPowerRational::rational(c.value.clone());
    json!({
        "route": c.route.to_string(),
        "num": v.rational.numer().to_string(),
        "den": v.rational.denom().to_string(),
        "half_power": v.half_power,
        "decimal": decimal(&c.value, digits),
        "tail_bound": decimal(&c.tail_bound, digits),
        "q": q,
    })
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Charpoly { q, p, gamma, delta } => {
            let fq = Fq::new(q)?;
            let field = ResidueField::new(&fq, &Poly::parse(&p, &fq)?)?;
            let m = FiniteDrinfeldModule::new(&field, field.parse(&gamma)?, field.parse(&delta)?)?;
            let cp = m.frobenius_charpoly()?;
            println!(
                "{}",
                json!({ "a": cp.a.to_text(&fq), "u": fq.format(cp.u) })
            );
        }
        Command::Classnumber { q, d, cache } => {
            let fq = Fq::new(q)?;
            let e = engine(&fq, &cache)?;
            println!("{}", e.class_number(&Poly::parse(&d, &fq)?)?);
            store(&e, &cache)?;
        }
        Command::Mass { q, p, a, u, cache } => {
            let fq = Fq::new(q)?;
            let e = engine(&fq, &cache)?;
            println!(
                "{}",
                e.hurwitz_mass(
                    &Poly::parse(&a, &fq)?,
                    fq.parse(&u)?,
                    &Poly::parse(&p, &fq)?
                )?
            );
            store(&e, &cache)?;
        }
        Command::Constant {
            q,
            a,
            u,
            v,
            max_prime_deg,
            route,
            digits,
        } => {
            let fq = Fq::new(q)?;
            let a = Poly::parse(&a, &fq)?;
            let params = TruncationParams {
                u,
                v,
                max_prime_deg: max_prime_deg.unwrap_or_else(|| default_max_prime_deg(q)),
            };
            let routes: &[ConstantRoute] = match route {
                RouteArg::Euler => &[ConstantRoute::Euler],
                RouteArg::Doublesum => &[ConstantRoute::Doublesum],
                RouteArg::Both => &[ConstantRoute::Euler, ConstantRoute::Doublesum],
            };
            let values = routes
                .iter()
                .map(|&r| constant_c(&a, &params, r, &fq))
                .collect::<Result<Vec<_>>>()?;
            let mut out = json!({
                "a": a.to_text(&fq),
                "U": params.u,
                "V": params.v,
                "max_prime_deg": params.max_prime_deg,
                "values": values.iter().map(|c| constant_json(c, q, digits)).collect::<Vec<_>>(),
            });
            if let [e, d] = values.as_slice() {
                out["routes_agree"] = json!(e.agrees_with(d));
            }
            println!("{out}");
        }
        Command::Average {
            q,
            x,
            a,
            u,
            deg_g,
            deg_delta,
            routes,
            max_prime_deg,
            out,
            csv,
            threads,
            cache,
        } => {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| Error::Config(e.to_string()))?;
            }
            let fq = Fq::new(q)?;
            let mut cfg = ExperimentConfig::new(&fq, x, Poly::parse(&a, &fq)?, fq.parse(&u)?);
            cfg.box_spec = BoxSpec::new(deg_g.unwrap_or(x), deg_delta.unwrap_or(x))?;
            cfg.routes = routes.parse::<Routes>()?;
            if let Some(m) = max_prime_deg {
                cfg.max_prime_deg = m;
            }
            let e = engine(&fq, &cache)?;
            let report = run_experiment(&cfg, &e)?;
            store(&e, &cache)?;
            let text =
                serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
            match out {
                Some(path) => fs::write(path, text)?,
                None => println!("{text}"),
            }
            if let Some(path) = csv {
                fs::write(path, reports_csv(&[report]))?;
            }
        }
        Command::Verify { only } => {
            let ids: Vec<u8> = if only.is_empty() {
                verify::CRITERIA.iter().map(|c| c.0).collect()
            } else {
                only
            };
            let mut ok = true;
            for id in ids {
                let outcome = verify::run(id)?;
                println!("{outcome}");
                ok &= outcome.passed();
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
