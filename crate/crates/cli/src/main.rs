//! Batch CLI: JSON descriptors in, deterministic JSON reports out.
//! Exit codes: 0 success, 1 mathematical failure, 2 malformed input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use drinfeld::codec;
use drinfeld::error::Error;
use drinfeld::isogeny;
use drinfeld::local;
use drinfeld::poly::parse_prime_poly;
use drinfeld::selfcheck;
use drinfeld::shtuka;
use drinfeld::tmodule::{self, TModule};
use drinfeld::tmotive;

#[derive(Parser)]
#[command(
    name = "drinfeld",
    about = "Exact computations with Drinfeld modules, t-motives, finite and local shtukas",
    version
)]
struct Cli {
    /// Print the JSON input schemas and exit.
    #[arg(long, global = true)]
    schema: bool,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a module, motive, or shtuka description.
    Validate {
        #[arg(long)]
        module: Option<PathBuf>,
        #[arg(long)]
        motive: Option<PathBuf>,
        #[arg(long)]
        shtuka: Option<PathBuf>,
    },
    /// The t-motive of an abelian t-module.
    Motive {
        #[arg(long)]
        module: PathBuf,
    },
    /// Reconstruct the t-module of an effective motive.
    Inverse {
        #[arg(long)]
        motive: PathBuf,
    },
    /// Module-side and motive-side isogeny predicates for a morphism.
    IsogenyCheck {
        #[arg(long)]
        map: PathBuf,
    },
    /// Kernel points of an isogeny over its splitting field.
    Kernel {
        #[arg(long)]
        map: PathBuf,
        /// Cap on the splitting-field search.
        #[arg(long, default_value_t = tmodule::DEFAULT_EXTENSION_CAP)]
        extension_cap: usize,
    },
    /// Torsion points E[a] with their `A/(a)`-module structure.
    Torsion {
        #[arg(long)]
        module: PathBuf,
        /// Ideal generator, e.g. "t" or "t^2+t+1" (prime-field coefficients).
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = tmodule::DEFAULT_EXTENSION_CAP)]
        extension_cap: usize,
    },
    /// Dual isogeny certificate for a module morphism.
    Dual {
        #[arg(long)]
        map: PathBuf,
    },
    /// Search for an isogeny between two modules.
    Isogenous {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        module2: PathBuf,
        /// Tau-degree bound for the search; defaults to r*d + 4.
        #[arg(long)]
        search_bound: Option<usize>,
    },
    /// The q^l-Frobenius isogeny of a motive.
    Frobenius {
        #[arg(long)]
        motive: PathBuf,
        /// The power l; must be a multiple of `[k : F_q]`.
        #[arg(long)]
        power: usize,
    },
    /// Local shtuka of a module at a prime, with invariants.
    Local {
        #[arg(long)]
        module: PathBuf,
        /// Prime polynomial over F_q; defaults to the characteristic prime.
        #[arg(long)]
        prime: Option<String>,
        #[arg(long, default_value_t = 8)]
        precision: usize,
    },
    /// Run the randomized invariant suites.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Math(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) | Error::InvalidRing(_) | Error::RingMismatch => {
                Failure::Input(e.to_string())
            }
            other => Failure::Math(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema {
        println!("{}", serde_json::to_string_pretty(&schemas()).unwrap());
        return ExitCode::SUCCESS;
    }
    let Some(cmd) = cli.cmd else {
        eprintln!("error: no subcommand given (try --help)");
        return ExitCode::from(2);
    };
    match run(cmd) {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).unwrap());
            ExitCode::SUCCESS
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {}", msg);
            println!(
                "{}",
                serde_json::to_string(&json!({ "error": msg })).unwrap()
            );
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {}", path.display(), e)))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("invalid json in {}: {}", path.display(), e)))
}

fn read_module(path: &PathBuf) -> Result<TModule, Failure> {
    let v = read_json(path)?;
    // structurally bad modules are rejected as bad input
    codec::tmodule_from_json(&v).map_err(|e| Failure::Input(e.to_string()))
}

fn run(cmd: Cmd) -> Result<Value, Failure> {
    match cmd {
        Cmd::Validate { module, motive, shtuka } => {
            if let Some(p) = module {
                let e = read_module(&p)?;
                return Ok(json!({
                    "kind": "module",
                    "d": e.dim,
                    "rank": e.rank,
                    "normalized": e.normalizer.is_some(),
                    "ring_order": e.ring.order(),
                }));
            }
            if let Some(p) = motive {
                let m = codec::tmotive_from_json(&read_json(&p)?)?;
                let (r, d) = tmotive::rank_dim(&m)?;
                return Ok(json!({ "kind": "motive", "rank": r, "dimension": d }));
            }
            if let Some(p) = shtuka {
                let v = codec::fin_shtuka_from_json(&read_json(&p)?)?;
                return Ok(json!({
                    "kind": "shtuka",
                    "n": v.dim,
                    "etale": v.is_etale(),
                    "nilpotent": v.is_nilpotent(),
                }));
            }
            Err(Failure::Input(
                "validate needs --module, --motive or --shtuka".into(),
            ))
        }
        Cmd::Motive { module } => {
            let e = read_module(&module)?;
            let m = tmotive::motive_of(&e)?;
            Ok(codec::tmotive_to_json(&m))
        }
        Cmd::Inverse { motive } => {
            let m = codec::tmotive_from_json(&read_json(&motive)?)?;
            let (e, iso) = tmotive::tmodule_of(&m)?;
            Ok(json!({
                "module": codec::tmodule_to_json(&e),
                "iso_U": codec::poly_mat_to_json(&iso.mat),
            }))
        }
        Cmd::IsogenyCheck { map } => {
            let f = codec::tmodule_morphism_from_json(&read_json(&map)?)?;
            let module_side = tmodule::is_isogeny_module(&f)?;
            let mf = tmotive::motive_of_morphism(&f)?;
            let motive_side = tmotive::is_isogeny_motive(&mf);
            let separable = if module_side {
                Some(tmodule::is_separable_module(&f)?)
            } else {
                None
            };
            Ok(json!({
                "module_side": module_side,
                "motive_side": motive_side,
                "agree": module_side == motive_side,
                "separable": separable,
            }))
        }
        Cmd::Kernel { map, extension_cap } => {
            let f = codec::tmodule_morphism_from_json(&read_json(&map)?)?;
            if !tmodule::is_isogeny_module(&f)? {
                return Err(Failure::Math("morphism is not an isogeny".into()));
            }
            let mf = tmotive::motive_of_morphism(&f)?;
            let v = tmotive::cokernel_shtuka(&mf)?;
            let split = shtuka::connected_etale_split(&v)?;
            let m = shtuka::splitting_degree(&split.etale, extension_cap)?;
            let points = tmodule::kernel_points(&f, m)?;
            let pts: Vec<Value> = points
                .points
                .iter()
                .map(|pt| Value::Array(pt.iter().map(codec::elem_to_json).collect()))
                .collect();
            Ok(json!({
                "count": points.count(),
                "scheme_order_exponent": v.dim,
                "etale_exponent": split.etale.dim,
                "splitting_degree": m,
                "extension_modulus": points.extension.field.modulus().to_vec(),
                "points": pts,
            }))
        }
        Cmd::Torsion { module, ideal, extension_cap } => {
            let e = read_module(&module)?;
            let a = parse_prime_poly(&e.ring, &ideal).map_err(Failure::from)?;
            if a.is_zero() {
                return Err(Failure::Input("ideal generator must be nonzero".into()));
            }
            let data = shtuka::torsion_points(&e, &a, extension_cap)?;
            let pts: Vec<Value> = data
                .points
                .points
                .iter()
                .map(|pt| Value::Array(pt.iter().map(codec::elem_to_json).collect()))
                .collect();
            let factors: Vec<Value> = data
                .invariant_factors
                .iter()
                .map(|f| json!(f.to_string(&data.points.extension.field)))
                .collect();
            Ok(json!({
                "points": pts,
                "module": {
                    "rank": e.rank,
                    "over": format!("F_{}[t]/({})", e.ring.q(), a.to_string(&e.ring)),
                    "free": data.free_of_rank_r,
                    "invariant_factors": factors,
                },
                "splitting_degree": data.splitting_degree,
                "extension_modulus": data.points.extension.field.modulus().to_vec(),
                "etale": shtuka::torsion_is_etale(&e, &a),
                "frobenius_permutation": data.frobenius_permutation,
            }))
        }
        Cmd::Dual { map } => {
            let f = codec::tmodule_morphism_from_json(&read_json(&map)?)?;
            let cert = isogeny::dual_isogeny_module(&f)?;
            let ring = &f.source.ring;
            Ok(json!({
                "g": codec::tmodule_morphism_to_json(&cert.g),
                "a": codec::poly_to_json(&cert.a),
                "a_string": cert.a.to_string(ring),
                "s": cert.s,
                "verified": cert.verified,
            }))
        }
        Cmd::Isogenous { module, module2, search_bound } => {
            let e = read_module(&module)?;
            let e2 = read_module(&module2)?;
            let bound = search_bound.unwrap_or_else(|| isogeny::default_search_bound(&e));
            match isogeny::are_isogenous(&e, &e2, bound)? {
                Some(f) => Ok(json!({
                    "isogenous": true,
                    "morphism": codec::tmodule_morphism_to_json(&f),
                })),
                None => Ok(json!({ "isogenous": false, "search_bound": bound })),
            }
        }
        Cmd::Frobenius { motive, power } => {
            let m = codec::tmotive_from_json(&read_json(&motive)?)?;
            let pi = isogeny::frobenius_isogeny(&m, power)?;
            Ok(json!({
                "power": power,
                "pi": codec::poly_mat_to_json(&pi.mat),
            }))
        }
        Cmd::Local { module, prime, precision } => {
            let e = read_module(&module)?;
            let m = tmotive::motive_of(&e)?;
            let p = match prime {
                Some(s) => parse_prime_poly(&e.ring, &s).map_err(Failure::from)?,
                None => local::char_prime(&e)?,
            };
            let l = local::local_shtuka_at(&m, &p, precision)?;
            let inv = local::local_invariants(&l)?;
            Ok(json!({
                "shtuka": codec::local_shtuka_to_json(&l),
                "invariants": {
                    "order_exponents": inv.order_exponents,
                    "omega_dim": inv.omega_dim,
                    "etale_rank": inv.etale_rank,
                },
                "formal": local::is_formal(&l),
                "divisible": local::divisibility_check(&l),
            }))
        }
        Cmd::Selfcheck { seed } => {
            let reports = selfcheck::run_all(seed);
            let all = reports.iter().all(|r| r.passed);
            let suites: Vec<Value> = reports
                .iter()
                .map(|r| json!({ "name": r.name, "cases": r.cases, "passed": r.passed }))
                .collect();
            for r in &reports {
                eprintln!(
                    "{}: {} ({} cases)",
                    r.name,
                    if r.passed { "ok" } else { "FAILED" },
                    r.cases
                );
            }
            if !all {
                return Err(Failure::Math("selfcheck suites failed".into()));
            }
            Ok(json!({ "seed": seed, "suites": suites, "all_passed": all }))
        }
    }
}

fn schemas() -> Value {
    json!({
        "ring": {
            "p": "prime",
            "q": "power of p; the Frobenius is x -> x^q",
            "kind": "finite_field | truncated",
            "degree": "degree of the field over F_q",
            "modulus": "monic irreducible over F_p, ascending coefficients",
            "nil_index": "truncated kind only: eps^N = 0",
            "theta": "gamma(t) as a coordinate array over F_p",
        },
        "ring_element": "array of F_p-coordinates in the canonical basis",
        "skew_polynomial": { "coeffs": "[ring_element] ascending tau-degree" },
        "module": { "ring": "ring", "d": "dimension", "phi_t": "[[skew_polynomial]] d x d" },
        "module_morphism": { "from": "module", "to": "module", "F": "[[skew_polynomial]] d' x d" },
        "polynomial": "[ring_element] ascending t-degree",
        "motive": { "ring": "ring", "r": "rank", "T": "[[polynomial]] r x r" },
        "motive_morphism": { "from": "motive", "to": "motive", "U": "[[polynomial]]" },
        "finite_shtuka": { "ring": "ring", "n": "dimension", "F": "[[ring_element]]", "t_action": "[[ring_element]], optional" },
        "group_scheme": { "ring": "ring", "n": "generators", "C": "[[ring_element]] relations z_i^q = sum C_ij z_j" },
        "ideal": "string such as \"t^2+t+1\" with prime-field integer coefficients",
    })
}
