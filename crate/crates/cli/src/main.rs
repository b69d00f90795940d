//! `colocal`: JSON front end for the colocal library.
//!
//! Exit status is 0 on success, 1 on a domain error (reported as JSON with
//! the error kind) and 2 on a usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use colocal::io::{self as docs, field, AnyMeasure};
use colocal::scalar::set_float_tolerance;
use colocal::{
    check_iq, conditional_expectation, conserved_quantities, decompose_invariant_form,
    expand_martingale, kernel_basis, martingale_chain_report, project_form, solve_potential,
    uniform_radius, verify_cocycle_identity, BoxWindow, Caps, DecomposeOptions, Error, Measure,
    Result, Scalar, Strategy, System, Q,
};

#[derive(Parser)]
#[command(
    name = "colocal",
    version,
    about = "Conserved quantities, co-local functions and closed forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct RunArgs {
    /// Input document (`-` for stdin).
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Largest number of configurations of any window.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    state_cap: Option<u64>,
    /// Largest window for Martingale expansions.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..64))]
    subset_cap: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Comparison tolerance in float mode.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Subcommand)]
enum Command {
    /// Basis of the ν-centred conserved quantities.
    Conserved,
    /// Irreducible-quantification check on a family of locales.
    Iq,
    /// Martingale expansion and uniform radius.
    Expand,
    /// Conditional expectation of a function or a form.
    Project,
    /// Potential of a closed form, or a cycle witnessing non-closedness.
    Closed,
    /// Dimensions of Ker ∂, C^0 and Z^1 on a window.
    Dims,
    /// Decomposition of an invariant closed form.
    Varadhan,
    /// L² norms along a Martingale chain.
    Martingale,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Conserved => "conserved",
            Command::Iq => "iq",
            Command::Expand => "expand",
            Command::Project => "project",
            Command::Closed => "closed",
            Command::Dims => "dims",
            Command::Varadhan => "varadhan",
            Command::Martingale => "martingale",
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let run = &cli.run;
    match (run.mode, run.tolerance) {
        (Mode::Exact, Some(_)) => return usage("--tolerance only applies with --mode float"),
        (Mode::Float, Some(t)) if !(t.is_finite() && t >= 0.0) => {
            return usage("tolerance must be non-negative")
        }
        (Mode::Float, Some(t)) => set_float_tolerance(t),
        _ => {}
    }
    if let Ok(threads) = std::env::var("COLOCAL_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    return usage(e);
                }
            }
            _ => {
                return usage(format!(
                    "COLOCAL_THREADS must be a positive integer, got `{threads}`"
                ))
            }
        }
    }
    let text = if run.input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(&run.input)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}", run.input)),
    };
    let mut caps = Caps::default();
    if let Some(c) = run.state_cap {
        caps.state_cap = c as usize;
    }
    if let Some(c) = run.subset_cap {
        caps.subset_cap = c as usize;
    }

    let outcome = serde_json::from_str::<Value>(&text)
        .map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
        .and_then(|doc| match run.mode {
            Mode::Exact => execute::<Q>(cli.command, &doc, caps),
            Mode::Float => execute::<f64>(cli.command, &doc, caps),
        });
    let (report, code) = match outcome {
        Ok(result) => (
            json!({
                "schema_version": docs::SCHEMA_VERSION,
                "command": cli.command.name(),
                "mode": if run.mode == Mode::Exact { "exact" } else { "float" },
                "result": result,
            }),
            ExitCode::SUCCESS,
        ),
        Err(e) => (docs::error_json(&e), ExitCode::from(1)),
    };
    let mut body = serde_json::to_string_pretty(&report).expect("serializable");
    body.push('\n');
    let written = match &run.output {
        Some(path) => fs::write(path, body),
        None => io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        return usage(format!("cannot write report: {e}"));
    }
    code
}

fn system(doc: &Value, caps: Caps) -> Result<System> {
    let locale = docs::parse_locale(field(doc, "locale")?)?;
    let interaction = docs::parse_interaction(field(doc, "interaction")?)?;
    Ok(System::new(locale, interaction).with_caps(caps))
}

fn execute<T: Scalar>(command: Command, doc: &Value, caps: Caps) -> Result<Value> {
    docs::check_schema(doc)?;
    match command {
        Command::Conserved => {
            let interaction = docs::parse_interaction(field(doc, "interaction")?)?;
            let nu = docs::parse_state_measure::<T>(field(doc, "measure")?, &interaction)?;
            let basis = conserved_quantities(&interaction, &nu);
            Ok(json!({"dimension": basis.len(), "basis": docs::basis_json(&basis)}))
        }
        Command::Iq => {
            let interaction = docs::parse_interaction(field(doc, "interaction")?)?;
            let nu = docs::parse_state_measure::<T>(field(doc, "measure")?, &interaction)?;
            let locales = field(doc, "locales")?
                .as_array()
                .ok_or_else(|| Error::InvalidInput("`locales` must be an array".into()))?
                .iter()
                .map(docs::parse_locale)
                .collect::<Result<Vec<_>>>()?;
            let report = check_iq(&interaction, &nu, &locales)?;
            Ok(docs::iq_json(&report, |i| locales[i].clone()))
        }
        Command::Expand => {
            let sys = system(doc, caps)?;
            let mu: AnyMeasure<T> = docs::parse_measure(field(doc, "measure")?, &sys)?;
            let f = docs::parse_table::<T>(field(doc, "function")?, &sys)?;
            let expansion = expand_martingale(&sys, &f, &mu)?;
            let radius = uniform_radius(&expansion, sys.locale())?;
            Ok(json!({
                "expansion": docs::expansion_json(&expansion, sys.locale()),
                "nonzero": expansion.nonzero().count(),
                "uniform_radius": radius,
            }))
        }
        Command::Project => {
            let sys = system(doc, caps)?;
            let mu: AnyMeasure<T> = docs::parse_measure(field(doc, "measure")?, &sys)?;
            let target = docs::parse_sites(field(doc, "target")?)?;
            if let Some(form) = doc.get("form") {
                let form = docs::parse_form::<T>(form, &sys)?;
                let projected = project_form(&sys, &form, &target, &mu)?;
                return Ok(json!({"form": docs::form_json(&projected, sys.locale())}));
            }
            let f = docs::parse_table::<T>(field(doc, "function")?, &sys)?;
            let projected = conditional_expectation(&f, &sys.space(&target)?, &mu)?;
            Ok(json!({"function": docs::table_json(&projected, sys.locale())}))
        }
        Command::Closed => {
            let sys = system(doc, caps)?;
            let mu: AnyMeasure<T> = docs::parse_measure(field(doc, "measure")?, &sys)?;
            let form = docs::parse_form::<T>(field(doc, "form")?, &sys)?;
            let potential = solve_potential(&sys, &form, &mu)?;
            Ok(json!({"closed": true, "potential": docs::table_json(&potential, sys.locale())}))
        }
        Command::Dims => {
            let sys = system(doc, caps)?;
            let mu: AnyMeasure<T> = docs::parse_measure(field(doc, "measure")?, &sys)?;
            let sites = match doc.get("siteset") {
                Some(s) => docs::parse_sites(s)?,
                None => sys.locale().sites().clone(),
            };
            let kb = kernel_basis(&sys, &sites, &mu)?;
            Ok(docs::dims_json(&kb.dimensions()))
        }
        Command::Varadhan => {
            let sys = system(doc, caps)?;
            let mu: AnyMeasure<T> = docs::parse_measure(field(doc, "measure")?, &sys)?;
            let nu = mu.homogeneous_factor()?.clone();
            let basis = conserved_quantities(sys.interaction(), &nu);
            let form = docs::parse_invariant_form(field(doc, "form")?, &sys, &basis)?;
            let dim = sys.locale().lattice().map_or(1, |l| l.dim);
            let window = field(doc, "window")?;
            let radius = window
                .get("radius")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::InvalidInput("`window.radius` must be an integer".into()))?;
            let mut options = DecomposeOptions::default();
            if let Some(m) = window.get("margin").and_then(Value::as_i64) {
                options.margin = m;
            }
            options.strategy = match window.get("strategy").and_then(Value::as_str) {
                None | Some("patch") => Strategy::Patch,
                Some("full_window") => Strategy::FullWindow,
                Some(other) => {
                    return Err(Error::InvalidInput(format!("unknown strategy `{other}`")))
                }
            };
            let window = BoxWindow::new(dim, radius)?;
            let d = decompose_invariant_form(&sys, &form, window, &nu, options)?;
            let check = verify_cocycle_identity(&sys, &d.cocycle, window, options.margin)?;
            let mut out = docs::decomposition_json(&d, sys.locale());
            out["cocycle_identity"] = json!(check.holds);
            Ok(out)
        }
        Command::Martingale => {
            let sys = system(doc, caps)?;
            let mu: AnyMeasure<T> = docs::parse_measure(field(doc, "measure")?, &sys)?;
            let product = mu.as_product().ok_or(Error::NonProductMeasure)?.clone();
            let f = docs::parse_table::<T>(field(doc, "function")?, &sys)?;
            let chain = field(doc, "chain")?
                .as_array()
                .ok_or_else(|| Error::InvalidInput("`chain` must be an array".into()))?
                .iter()
                .map(docs::parse_sites)
                .collect::<Result<Vec<_>>>()?;
            let report = martingale_chain_report(&sys, &f, &chain, &product)?;
            Ok(docs::martingale_json(&report, sys.locale()))
        }
    }
}
