//! Command-line front end. Every subcommand is a thin wrapper over
//! `addax_core`; [`run`] returns the exit code and the text to print so
//! the whole interface can be tested without spawning processes.
//!
//! Exit codes: 0 success, 1 invalid input (unreadable file, schema or
//! axiom violation, unsupported structure), 2 usage error.

use std::path::{Path, PathBuf};

use addax_core::action::{rho, rho_symbolic, verify_action_invariance, ActionCheck, ProjPoint};
use addax_core::catalog::{CatalogEntry, BUILTIN};
use addax_core::classify::{classify, BilinearTriple, Classification};
use addax_core::io::{read_entry, resolve_catalog, user_catalog_names, CATALOG_DIR_VAR};
use addax_core::linalg::Matrix;
use addax_core::multilinear::{build_fw, check_invariance, hypersurface_equation, polarize};
use addax_core::poly::{HomPoly, RenderStyle};
use addax_core::{Error, PointedPair, Scalar};
use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Random samples taken by `invariance` after the symbolic check.
const INVARIANCE_TRIALS: usize = 8;
const INVARIANCE_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "addax", version, about = "Additive actions on projective hypersurfaces")]
struct Cli {
    /// Print human-readable text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Algebra JSON file.
    #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
    path: Option<PathBuf>,
    /// Catalog entry `name[:params]`.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the algebra axioms and the pointed pair.
    Validate(Input),
    /// Degree of the hypersurface.
    Degree(Input),
    /// The invariant symmetric form of the pair.
    Form(Input),
    /// Equation of the hypersurface.
    Equation(Input),
    /// The group action on projective space.
    Act {
        #[command(flatten)]
        input: Input,
        /// Print the action with symbolic parameters a1..an.
        #[arg(long, conflicts_with = "params")]
        symbolic: bool,
        /// Comma-separated W coordinates of the group element.
        #[arg(long, required_unless_present = "symbolic", allow_hyphen_values = true)]
        params: Option<String>,
    },
    /// Check invariance of the hypersurface equation, or of `--poly`.
    Invariance {
        #[command(flatten)]
        input: Input,
        /// Homogeneous polynomial in x0..x(N-1).
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Canonical form of the bilinear triple of a degree-2 pair.
    Classify(Input),
    /// List built-in and user catalog entries.
    CatalogList,
}

/// Parses `argv` (program name first) and runs it, reading the user
/// catalog directory from the environment.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let dir = std::env::var_os(CATALOG_DIR_VAR).map(PathBuf::from);
    run_with(argv, dir.as_deref())
}

/// [`run`] with an explicit user catalog directory.
pub fn run_with<I, T>(argv: I, catalog_dir: Option<&Path>) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string().trim_end().to_string());
        }
    };
    match execute(&cli.command, catalog_dir) {
        Ok(out) => (EXIT_OK, if cli.pretty { out.pretty } else { out.json.to_string() }),
        Err(Failure::Usage(msg)) => (EXIT_USAGE, format!("error: {msg}")),
        Err(Failure::Invalid(e)) => {
            let text = if cli.pretty {
                format!("error: {e}")
            } else {
                error_report(&e).to_string()
            };
            (EXIT_INVALID, text)
        }
    }
}

enum Failure {
    Usage(String),
    Invalid(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

struct Output {
    json: Value,
    pretty: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::ZeroDenominator(_) => "zero_denominator",
        Error::DivisionByZero => "division_by_zero",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::InvalidAlgebra(_) => "invalid_algebra",
        Error::InvalidPair(_) => "invalid_pair",
        Error::NotAnIdeal => "not_an_ideal",
        Error::NotInMaximalIdeal => "not_in_maximal_ideal",
        Error::UnknownCatalog(_) => "unknown_catalog",
        Error::MalformedParams(_) => "malformed_params",
        Error::MalformedLambda(_) => "malformed_lambda",
        Error::DegreeTooLow(_) => "degree_too_low",
        Error::ArityMismatch { .. } => "arity_mismatch",
        Error::ZeroPoint => "zero_point",
        Error::NotOnHypersurface => "not_on_hypersurface",
        Error::RankMismatch { .. } => "rank_mismatch",
        Error::KernelNotInW => "kernel_not_in_w",
        Error::InvalidTriple(_) => "invalid_triple",
        Error::NotRepresentable(_) => "not_representable",
        Error::LambdaMismatch(_) => "lambda_mismatch",
        Error::Io(_) => "io",
        Error::Schema(_) => "schema",
    }
}

/// `{"error": kind, "message": text}` plus the axiom witness for invalid
/// algebras.
pub fn error_report(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), json!(error_kind(e)));
    m.insert("message".into(), json!(e.to_string()));
    if let Error::InvalidAlgebra(report) = e {
        m.insert("axiom".into(), json!(report.axiom()));
        m.insert("witness".into(), json!(report.witness()));
    }
    Value::Object(m)
}

fn load(input: &Input, catalog_dir: Option<&Path>) -> Result<CatalogEntry, Failure> {
    match (&input.path, &input.catalog) {
        (Some(p), None) => Ok(read_entry(p)?),
        (None, Some(query)) => Ok(resolve_catalog(query, catalog_dir)?),
        _ => Err(Failure::Usage("give exactly one of a file path or --catalog".into())),
    }
}

fn load_pair(input: &Input, catalog_dir: Option<&Path>) -> Result<PointedPair, Failure> {
    load(input, catalog_dir)?.into_pair().ok_or_else(|| {
        Failure::Invalid(Error::InvalidPair(
            "input is a bare algebra; this command needs W and a complement".into(),
        ))
    })
}

fn scalar_json(s: &Scalar) -> Value {
    json!(s.to_string())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_json).collect()))
            .collect(),
    )
}

fn matrix_text(m: &Matrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_params(text: &str, n: usize) -> Result<Vec<Scalar>, Failure> {
    let params = text
        .split(',')
        .map(|t| t.trim().parse::<Scalar>())
        .collect::<Result<Vec<_>, _>>()?;
    if params.len() != n {
        return Err(Failure::Invalid(Error::DimensionMismatch {
            expected: n,
            found: params.len(),
        }));
    }
    Ok(params)
}

fn execute(cmd: &Command, catalog_dir: Option<&Path>) -> Result<Output, Failure> {
    match cmd {
        Command::Validate(input) => validate(&load(input, catalog_dir)?),
        Command::Degree(input) => {
            let d = load_pair(input, catalog_dir)?.degree();
            Ok(Output {
                json: json!({ "degree": d }),
                pretty: format!("degree: {d}"),
            })
        }
        Command::Form(input) => form(&load_pair(input, catalog_dir)?),
        Command::Equation(input) => {
            let pair = load_pair(input, catalog_dir)?;
            let f = hypersurface_equation(&pair)?;
            let text = f.as_poly().render(&RenderStyle::EQUATION);
            Ok(Output {
                json: json!({ "degree": f.degree(), "equation": text }),
                pretty: text,
            })
        }
        Command::Act {
            input,
            symbolic,
            params,
        } => {
            let pair = load_pair(input, catalog_dir)?;
            if *symbolic {
                let formula = rho_symbolic(&pair).formula();
                let names: Vec<String> = (1..=pair.n()).map(|k| format!("a{k}")).collect();
                return Ok(Output {
                    json: json!({ "params": names, "formula": formula }),
                    pretty: formula,
                });
            }
            let text = params.as_deref().ok_or_else(|| Failure::Usage("--params is required".into()))?;
            let a = parse_params(text, pair.n())?;
            let m = rho(&pair, &a)?;
            let image = addax_core::action::act(&m, &ProjPoint::origin(pair.dim()))?;
            Ok(Output {
                json: json!({
                    "params": a.iter().map(scalar_json).collect::<Vec<_>>(),
                    "matrix": matrix_json(m.matrix()),
                    "origin_image": image.to_string(),
                }),
                pretty: format!("{}\norigin -> {image}", matrix_text(m.matrix())),
            })
        }
        Command::Invariance { input, poly } => invariance(&load_pair(input, catalog_dir)?, poly.as_deref()),
        Command::Classify(input) => {
            let triple = BilinearTriple::from_pair(load_pair(input, catalog_dir)?)?;
            Ok(classification_output(&classify(&triple)?))
        }
        Command::CatalogList => catalog_list(catalog_dir),
    }
}

fn validate(entry: &CatalogEntry) -> Result<Output, Failure> {
    let alg = entry.algebra();
    let mut m = Map::new();
    m.insert("valid".into(), json!(true));
    m.insert("kind".into(), json!(if entry.pair().is_some() { "pair" } else { "algebra" }));
    m.insert("dim".into(), json!(alg.dim()));
    if let Some(name) = alg.name() {
        m.insert("name".into(), json!(name));
    }
    let mut pretty = format!("valid {} of dimension {}", m["kind"].as_str().unwrap(), alg.dim());
    if let Some(p) = entry.pair() {
        m.insert("degree".into(), json!(p.degree()));
        pretty.push_str(&format!(", degree {}", p.degree()));
    }
    Ok(Output {
        json: Value::Object(m),
        pretty,
    })
}

fn form(pair: &PointedPair) -> Result<Output, Failure> {
    let f = build_fw(pair)?;
    let mut entries = Map::new();
    let mut lines = Vec::new();
    for (idx, v) in f.entries() {
        let key = idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        lines.push(format!("F({key}) = {v}"));
        entries.insert(key, scalar_json(v));
    }
    Ok(Output {
        json: json!({ "arity": f.arity(), "dim": f.n_vars(), "entries": entries }),
        pretty: lines.join("\n"),
    })
}

fn invariance(pair: &PointedPair, poly: Option<&str>) -> Result<Output, Failure> {
    let f = match poly {
        Some(text) => HomPoly::parse(text, pair.dim())?,
        None => hypersurface_equation(pair)?,
    };
    let witness = check_invariance(&polarize(&f), pair)?;
    let mut rng = StdRng::seed_from_u64(INVARIANCE_SEED);
    let action = verify_action_invariance(pair, &f, INVARIANCE_TRIALS, &mut rng)?;
    let witness_json = match &witness {
        None => Value::Null,
        Some(w) => json!({ "w_index": w.w_index, "tuple": w.tuple, "value": w.value.to_string() }),
    };
    let action_json = match &action {
        ActionCheck::Invariant => Value::Null,
        ActionCheck::DerivationFails { w_index, image } => json!({
            "w_index": w_index,
            "derivative": image.render(&RenderStyle::EQUATION),
        }),
        ActionCheck::SampleFails { params, point } => json!({
            "params": params.iter().map(scalar_json).collect::<Vec<_>>(),
            "point": point.iter().map(scalar_json).collect::<Vec<_>>(),
        }),
    };
    let text = f.as_poly().render(&RenderStyle::EQUATION);
    let pretty = format!(
        "{text}\nform invariant: {}\naction invariant: {}",
        witness.is_none(),
        action.is_invariant()
    );
    Ok(Output {
        json: json!({
            "polynomial": text,
            "form_invariant": witness.is_none(),
            "form_witness": witness_json,
            "action_invariant": action.is_invariant(),
            "action_witness": action_json,
        }),
        pretty,
    })
}

fn classification_output(c: &Classification) -> Output {
    let lambda = c.lambda.as_ref().map_or(Value::Null, |l| matrix_json(&l.lam));
    let json = json!({
        "rank": c.rank,
        "case": c.case.as_str(),
        "lambda": lambda,
        "label": c.label.text,
        "normalized": c.label.normalized,
        "certificate": {
            "change_of_basis": matrix_json(c.change.matrix()),
            "form_scale": scalar_json(&c.form_scale),
            "identity": c.change.is_identity(),
        },
    });
    let mut pretty = format!("rank {}\ncase {}\nlabel {}", c.rank, c.case, c.label.text);
    if let Some(l) = &c.lambda {
        pretty.push_str(&format!("\nlambda\n{}", matrix_text(&l.lam)));
    }
    pretty.push_str(&format!(
        "\nchange of basis\n{}\nform scale {}",
        matrix_text(c.change.matrix()),
        c.form_scale
    ));
    Output { json, pretty }
}

fn catalog_list(catalog_dir: Option<&Path>) -> Result<Output, Failure> {
    let user = match catalog_dir {
        Some(dir) => user_catalog_names(dir)?,
        None => Vec::new(),
    };
    let builtin: Vec<Value> = BUILTIN
        .iter()
        .map(|b| json!({ "name": b.name, "params": b.params, "description": b.description }))
        .collect();
    let mut lines: Vec<String> = BUILTIN
        .iter()
        .map(|b| {
            if b.params.is_empty() {
                format!("{}  {}", b.name, b.description)
            } else {
                format!("{}:<{}>  {}", b.name, b.params, b.description)
            }
        })
        .collect();
    lines.extend(user.iter().map(|u| format!("{u}  (user)")));
    Ok(Output {
        json: json!({ "builtin": builtin, "user": user }),
        pretty: lines.join("\n"),
    })
}
