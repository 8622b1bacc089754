use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wellpoised::json as js;
use wellpoised::mzv::{regularize_word, stuffle_counts};
use wellpoised::numeric::zeta_value;
use wellpoised::pipeline::{self, Decomposition, Options};
use wellpoised::presets::{self, Mode, SeriesSpec};
use wellpoised::symmetric::orbit_decompose;
use wellpoised::symmetry::is_in_ap;
use wellpoised::{Error, ZCombo};

#[derive(Parser)]
#[command(
    name = "wellpoised",
    version,
    about = "Decompose well-poised multiple series into multiple zeta values"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Json, global = true)]
    emit: Emit,
    /// Decimal digits for numeric evaluation.
    #[arg(long, default_value_t = 64, global = true)]
    digits: u32,
    /// Tolerance for numeric comparisons.
    #[arg(long, default_value_t = 1e-8, global = true)]
    tol: f64,
    /// Truncation K for direct series evaluation.
    #[arg(long, value_name = "K", default_value_t = 2000, global = true)]
    truncation: u64,
    /// Assert the d_n denominator certificate on the partial-fraction table
    /// (after clearing the numerator's denominators relative to n!^{A·p}).
    #[arg(long, global = true)]
    strict_denominators: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Args)]
struct SpecArgs {
    /// Named preset.
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// Series spec as JSON, or @path to a JSON file.
    #[arg(long)]
    spec: Option<String>,
    /// Pipeline override: general, symmetric or decoupled.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a series with its pipeline.
    Decompose(SpecArgs),
    /// Orbit-symmetrized sum at explicit indices (n even).
    Orbit {
        #[arg(long)]
        n: u32,
        /// Shifts, comma-separated.
        #[arg(long)]
        j: String,
        /// Exponents, comma-separated.
        #[arg(long)]
        s: String,
    },
    /// Polynomial Q with ζ_N(w) = Q(H_N) + o(1).
    Regularize { word: String },
    /// Quasi-shuffle product of two words.
    Stuffle { left: String, right: String },
    /// Numeric value of a convergent word.
    Zeta { word: String },
    /// Check a decomposition against its closed form and the series itself.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Expected combo JSON (or @path); defaults to the preset's closed form.
        #[arg(long)]
        expected: Option<String>,
    },
    /// Test membership in the well-poised class.
    CheckSymmetry(SpecArgs),
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if pipeline::is_check_failure(&e) {
            Failure::Check(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn read_arg(text: &str) -> Result<String, Failure> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

fn load_spec(args: &SpecArgs) -> Result<SeriesSpec, Failure> {
    let mut spec = match (&args.preset, &args.spec) {
        (Some(name), None) => presets::preset(name)?,
        (None, Some(text)) => presets::parse_spec(&read_arg(text)?)?,
        _ => return Err(Failure::Usage("give exactly one of --preset or --spec".into())),
    };
    if let Some(m) = &args.mode {
        spec.mode = m.parse::<Mode>()?;
    }
    Ok(spec)
}

fn parse_list(text: &str) -> Result<Vec<u32>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("'{text}' is not a comma-separated list of integers")))
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

fn spec_header(spec: &SeriesSpec) -> Value {
    json!({
        "name": spec.name,
        "n": spec.n,
        "A": spec.a,
        "p": spec.p(),
        "mode": spec.mode.to_string(),
    })
}

fn options(cli: &Cli) -> Options {
    Options {
        digits: cli.digits,
        tol: cli.tol,
        truncation: cli.truncation,
        strict_denominators: cli.strict_denominators,
    }
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let opts = options(cli);
    match &cli.command {
        Command::Decompose(args) => {
            let spec = load_spec(args)?;
            let d = pipeline::decompose(&spec, &opts)?;
            let (mut body, text) = match &d {
                Decomposition::General(q) => (js::asym(q), q.to_string()),
                Decomposition::Symmetric(s) => (js::constrained(&s.decomp), s.value.to_string()),
                Decomposition::Decoupled(c) => (js::combo(c), c.to_string()),
            };
            body["spec"] = spec_header(&spec);
            Ok(Output { json: body, text, ok: true })
        }
        Command::Orbit { n, j, s } => {
            let j = parse_list(j)?;
            let s = parse_list(s)?;
            let o = orbit_decompose(*n, &j, &s)?;
            let mut body = js::asym(&o.asym);
            body["constrained"] = js::constrained(&o.constrained());
            Ok(Output { json: body, text: o.asym.to_string(), ok: true })
        }
        Command::Regularize { word } => {
            let w = presets::parse_word(word)?;
            let q = regularize_word(&w);
            Ok(Output { json: js::asym(&q), text: q.to_string(), ok: true })
        }
        Command::Stuffle { left, right } => {
            let a = presets::parse_word(left)?;
            let b = presets::parse_word(right)?;
            let counts = stuffle_counts(&a, &b);
            let words: Vec<Value> = counts.keys().map(|w| json!(w.entries())).collect();
            let coefficients: Vec<Value> =
                counts.values().map(|c| json!(c.to_string().parse::<u64>().unwrap_or(0))).collect();
            let text = wellpoised::mzv::stuffle(&a, &b).to_string();
            Ok(Output {
                json: json!({"words": words, "coefficients": coefficients}),
                text,
                ok: true,
            })
        }
        Command::Zeta { word } => {
            let w = presets::parse_word(word)?;
            let v = zeta_value(&w, cli.digits)?;
            let value = v.to_decimal(cli.digits);
            let bound = format!("{:.3e}", v.error_bound());
            Ok(Output {
                text: format!("{w} = {value} ± {bound}"),
                json: json!({"word": w.entries(), "value": value, "bound": bound}),
                ok: true,
            })
        }
        Command::Verify { spec, expected } => {
            let spec = load_spec(spec)?;
            let expected: ZCombo = match expected {
                Some(text) => presets::parse_combo(&read_arg(text)?)?,
                None => spec.expected.clone().ok_or_else(|| {
                    Failure::Usage("this spec has no closed form; pass --expected".into())
                })?,
            };
            let v = pipeline::verify(&spec, &expected, &opts)?;
            let mut body = js::report(&v.identity);
            body["status"] = json!(if v.pass() { "pass" } else { "fail" });
            body["direct"] = js::report(&v.direct);
            body["formal"] = json!(v.formal);
            body["spec"] = spec_header(&spec);
            let text = format!(
                "{}: engine vs closed form diff {} (bound {}); engine vs series diff {} (bound {}); formal match: {}",
                if v.pass() { "PASS" } else { "FAIL" },
                v.identity.diff,
                v.identity.bound,
                v.direct.diff,
                v.direct.bound,
                v.formal
            );
            Ok(Output { json: body, text, ok: v.pass() })
        }
        Command::CheckSymmetry(args) => {
            let spec = load_spec(args)?;
            let ok = is_in_ap(&spec.poly, spec.n, spec.a);
            Ok(Output {
                json: json!({"in_ap": ok, "spec": spec_header(&spec)}),
                text: if ok { "in class" } else { "not in class" }.to_string(),
                ok,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            match cli.emit {
                Emit::Json => println!("{}", out.json),
                Emit::Text => println!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
    }
}
