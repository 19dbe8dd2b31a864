//! `fuglede`: tiling and spectral-set checks, constructions and searches on
//! `Z_{p^m} x Z_{p^m}`, with JSON in and out.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fuglede_core::construct::{
    complement_for_spectral, pairs, periodic_replacement, spectrum_for_tile, Certificate, Claim, GroupParams, Method,
    Normalization,
};
use fuglede_core::oracle::{
    find_spectra_budgeted, find_tiling_complements, lemma_check, verify_fuglede, Mode, LEMMA_TAGS,
};
use fuglede_core::spectral::{is_periodic, is_spectral_pair, is_tiling_pair, zero_set};
use fuglede_core::structure::{profile_zero_set, render_grid, StructureCatalog};
use fuglede_core::{Error, Form, GroupContext, SubsetBits};

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONTRADICTION: u8 = 3;

#[derive(Parser)]
#[command(name = "fuglede", version, about = "Tiles and spectral sets in Z_{p^m} x Z_{p^m}")]
struct Cli {
    /// Human-readable output instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Prime p.
    #[arg(long)]
    p: Option<u32>,
    /// Exponent m, so that n = p^m.
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Args, Clone)]
struct Input {
    /// Set as a JSON array of [x1, x2] pairs, or `-` to read JSON from stdin.
    #[arg(long)]
    set: Option<String>,
    /// JSON file holding a set array, or an object with `set`, an optional
    /// partner (`complement`, `spectrum` or `witness`) and optional `group`.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    Tile,
    Spectral,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the set tiles with the given complement, or search for one.
    CheckTile {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        complement: Option<String>,
    },
    /// Decide whether the set is spectral with the given spectrum, or search for one.
    CheckSpectral {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        spectrum: Option<String>,
        #[arg(long, default_value = "symplectic")]
        form: Form,
    },
    /// Frequencies where the transform of the indicator vanishes.
    ZeroSet {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "symplectic")]
        form: Form,
    },
    /// Certificate giving a spectrum of a tile.
    ConstructSpectrum {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        input: Input,
        /// A known tiling complement, used by some cases.
        #[arg(long)]
        complement: Option<String>,
    },
    /// Certificate giving a tiling complement of a spectral set.
    ConstructComplement {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        input: Input,
        /// A spectrum of the set; searched for when omitted.
        #[arg(long)]
        spectrum: Option<String>,
    },
    /// Replace one side of a non-periodic tiling pair by a periodic set.
    PeriodicReplace {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        complement: Option<String>,
    },
    /// List tiling complements and spectra containing the origin.
    Search {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "both")]
        kind: SearchKind,
        #[arg(long, default_value_t = 16)]
        limit: usize,
        #[arg(long, default_value = "symplectic")]
        form: Form,
        /// Node budget for the spectrum search.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Compare tile status with spectral status over a population of subsets.
    VerifyConjecture {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value = "exhaustive")]
        mode: Mode,
        /// Random samples per family in sampled mode.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Run one property of the battery.
    LemmaCheck {
        /// One of the tags listed by `--name list`.
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// ASCII picture of a set, second coordinate increasing upwards.
    Render {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        input: Input,
    },
}

/// Result of one command: exit code, JSON body and optional text for `--pretty`.
struct Output {
    code: u8,
    body: Value,
    text: Option<String>,
    /// Under `--pretty`, print only `text`.
    text_only: bool,
}

impl Output {
    fn json(code: u8, body: Value) -> Self {
        Output {
            code,
            body,
            text: None,
            text_only: false,
        }
    }

    fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    fn text_only(mut self, text: String) -> Self {
        self.text = Some(text);
        self.text_only = true;
        self
    }
}

/// Failure raised before or during a command.
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<Output, Failure>;

/// Parsed `--set` / `--file` payload.
#[derive(Default)]
struct Payload {
    group: Option<(u32, u32)>,
    set: Option<Vec<[i64; 2]>>,
    partner: Option<Vec<[i64; 2]>>,
}

fn read_stdin() -> Result<String, Failure> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
    Ok(buf)
}

fn parse_pairs(text: &str, what: &str) -> Result<Vec<[i64; 2]>, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("malformed {what}: {e}")))
}

fn parse_payload(text: &str) -> Result<Payload, Failure> {
    let value: Value = serde_json::from_str(text).map_err(|e| Failure::Usage(format!("malformed JSON: {e}")))?;
    let pairs_of = |v: &Value, key: &str| -> Result<Vec<[i64; 2]>, Failure> {
        serde_json::from_value(v.clone()).map_err(|e| Failure::Usage(format!("malformed `{key}`: {e}")))
    };
    match &value {
        Value::Array(_) => Ok(Payload {
            set: Some(pairs_of(&value, "set")?),
            ..Payload::default()
        }),
        Value::Object(obj) => {
            let mut payload = Payload::default();
            if let Some(g) = obj.get("group") {
                let g: GroupParams =
                    serde_json::from_value(g.clone()).map_err(|e| Failure::Usage(format!("malformed `group`: {e}")))?;
                payload.group = Some((g.p, g.m));
            }
            if let Some(s) = obj.get("set") {
                payload.set = Some(pairs_of(s, "set")?);
            }
            for key in ["complement", "spectrum", "witness"] {
                if let Some(s) = obj.get(key) {
                    payload.partner = Some(pairs_of(s, key)?);
                }
            }
            Ok(payload)
        }
        _ => Err(Failure::Usage("expected a JSON array or object".into())),
    }
}

impl Input {
    fn payload(&self) -> Result<Payload, Failure> {
        match (&self.set, &self.file) {
            (Some(_), Some(_)) => Err(Failure::Usage("give either --set or --file, not both".into())),
            (Some(s), None) if s == "-" => parse_payload(&read_stdin()?),
            (Some(s), None) => Ok(Payload {
                set: Some(parse_pairs(s, "--set")?),
                ..Payload::default()
            }),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                parse_payload(&text)
            }
            (None, None) => Err(Failure::Usage("a set is required (--set or --file)".into())),
        }
    }
}

fn context(args: &GroupArgs, payload_group: Option<(u32, u32)>) -> Result<GroupContext, Failure> {
    let (p, m) = match (args.p, payload_group) {
        (Some(p), _) => (p, args.m.unwrap_or(2)),
        (None, Some((p, m))) => (p, args.m.unwrap_or(m)),
        (None, None) => return Err(Failure::Usage("--p is required".into())),
    };
    if !(1..=2).contains(&m) {
        return Err(Failure::Usage(format!("m must be 1 or 2, got {m}")));
    }
    Ok(GroupContext::new(p, m)?)
}

fn to_set(ctx: GroupContext, raw: &[[i64; 2]]) -> Result<SubsetBits, Failure> {
    let mut s = SubsetBits::empty(ctx);
    for &[x1, x2] in raw {
        if !s.insert(ctx.element(x1, x2)?) {
            return Err(Failure::Usage(format!("duplicate element [{x1}, {x2}]")));
        }
    }
    Ok(s)
}

/// The group, the main set and an optional partner given by flag or file.
fn load(
    group: &GroupArgs,
    input: &Input,
    partner_flag: Option<&str>,
) -> Result<(GroupContext, SubsetBits, Option<SubsetBits>), Failure> {
    let payload = input.payload()?;
    let ctx = context(group, payload.group)?;
    let raw = payload
        .set
        .ok_or_else(|| Failure::Usage("payload has no `set`".into()))?;
    let set = to_set(ctx, &raw)?;
    if set.is_empty() {
        return Err(Failure::Core(Error::EmptySet));
    }
    let partner = match (partner_flag, payload.partner) {
        (Some(text), _) => Some(parse_pairs(text, "partner set")?),
        (None, raw) => raw,
    };
    let partner = partner.map(|raw| to_set(ctx, &raw)).transpose()?;
    Ok((ctx, set, partner))
}

fn verdict(ok: bool) -> u8 {
    if ok {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn grids(c: &Certificate) -> String {
    let (Ok(a), Ok(w)) = (c.set_bits(), c.witness_bits()) else {
        return String::new();
    };
    format!("set:\n{}witness:\n{}", render_grid(&a), render_grid(&w))
}

fn certificate_output(c: Certificate) -> Outcome {
    let text = grids(&c);
    let body = serde_json::to_value(&c).expect("certificates serialize");
    Ok(Output::json(verdict(c.verified), body).with_text(text))
}

fn check_tile(group: &GroupArgs, input: &Input, complement: Option<&str>) -> Outcome {
    let (_, a, b) = load(group, input, complement)?;
    match b {
        Some(b) => {
            let check = is_tiling_pair(&a, &b)?;
            Ok(Output::json(
                verdict(check.tiles),
                json!({ "tiling_pair": check.tiles }),
            ))
        }
        None => {
            let found = find_tiling_complements(&a, 1);
            let complement = found.first().map(pairs);
            Ok(Output::json(
                verdict(complement.is_some()),
                json!({ "tile": complement.is_some(), "complement": complement }),
            ))
        }
    }
}

fn check_spectral(group: &GroupArgs, input: &Input, spectrum: Option<&str>, form: Form) -> Outcome {
    let (_, a, s) = load(group, input, spectrum)?;
    match s {
        Some(s) => {
            let ok = is_spectral_pair(&a, &s, form)?;
            Ok(Output::json(verdict(ok), json!({ "spectral_pair": ok })))
        }
        None => {
            let search = find_spectra_budgeted(&a, 1, form, u64::MAX);
            let spectrum = search.found.first().map(pairs);
            Ok(Output::json(
                verdict(spectrum.is_some()),
                json!({ "spectral": spectrum.is_some(), "spectrum": spectrum }),
            ))
        }
    }
}

fn zero_set_cmd(group: &GroupArgs, input: &Input, form: Form) -> Outcome {
    let (ctx, a, _) = load(group, input, None)?;
    let zero = zero_set(&a, form)?;
    let mut body = json!({
        "form": form.as_str(),
        "size": zero.len(),
        "zero_set": pairs(zero.members()),
    });
    if ctx.m() == 2 && form == Form::Symplectic {
        let cat = StructureCatalog::new(ctx)?;
        body["profile"] = serde_json::to_value(profile_zero_set(&a, &cat)?).expect("profiles serialize");
    }
    Ok(Output::json(EXIT_TRUE, body).with_text(render_grid(zero.members())))
}

fn construct_complement(group: &GroupArgs, input: &Input, spectrum: Option<&str>) -> Outcome {
    let (_, a, s) = load(group, input, spectrum)?;
    let s = match s {
        Some(s) => s,
        None => match find_spectra_budgeted(&a, 1, Form::Symplectic, u64::MAX)
            .found
            .into_iter()
            .next()
        {
            Some(s) => s,
            None => return Err(Failure::Core(Error::NotSpectral)),
        },
    };
    certificate_output(complement_for_spectral(&a, &s)?)
}

fn periodic_replace(group: &GroupArgs, input: &Input, complement: Option<&str>) -> Outcome {
    let (ctx, a, b) = load(group, input, complement)?;
    let b = b.ok_or_else(|| Failure::Usage("periodic-replace needs --complement".into()))?;
    match periodic_replacement(&a, &b) {
        Ok(r) => {
            let text = grids(&r.certificate);
            let code = verdict(r.certificate.verified);
            Ok(Output::json(code, serde_json::to_value(&r).expect("replacements serialize")).with_text(text))
        }
        Err(Error::AlreadyPeriodic(side)) => {
            let periodic = if side == "A" { &a } else { &b };
            let period = is_periodic(periodic).expect("reported periodic");
            let certificate = Certificate {
                group: GroupParams { p: ctx.p(), m: ctx.m() },
                claim: Claim::Tile,
                set: pairs(&a),
                witness: pairs(&b),
                method: Method::Trivial,
                normalization: Normalization {
                    matrix: [[1, 0], [0, 1]],
                    shift: [0, 0],
                },
                verified: true,
            };
            let text = grids(&certificate);
            let body = json!({
                "identity": true,
                "certificate": certificate,
                "replaced": null,
                "periodic": side.to_lowercase(),
                "period": pairs(period.members()),
            });
            Ok(Output::json(EXIT_TRUE, body).with_text(text))
        }
        Err(e) => Err(e.into()),
    }
}

fn search(group: &GroupArgs, input: &Input, kind: SearchKind, limit: usize, form: Form, budget: u64) -> Outcome {
    let (_, a, _) = load(group, input, None)?;
    let mut body = json!({});
    let mut found_all = true;
    if matches!(kind, SearchKind::Tile | SearchKind::Both) {
        let complements = find_tiling_complements(&a, limit);
        found_all &= !complements.is_empty();
        body["complements"] = json!(complements.iter().map(pairs).collect::<Vec<_>>());
    }
    if matches!(kind, SearchKind::Spectral | SearchKind::Both) {
        let spectra = find_spectra_budgeted(&a, limit, form, budget);
        found_all &= !spectra.found.is_empty();
        body["spectra"] = json!(spectra.found.iter().map(pairs).collect::<Vec<_>>());
        body["spectra_complete"] = json!(spectra.complete);
    }
    Ok(Output::json(verdict(found_all), body))
}

fn verify(group: &GroupArgs, mode: Mode, budget: usize, seed: u64, threads: usize) -> Outcome {
    let ctx = context(group, None)?;
    let report = verify_fuglede(ctx, mode, budget, seed, threads)?;
    Ok(Output::json(
        verdict(report.passed()),
        serde_json::to_value(&report).expect("reports serialize"),
    ))
}

fn lemma(name: &str, trials: usize, seed: u64) -> Outcome {
    if name == "list" {
        return Ok(Output::json(EXIT_TRUE, json!({ "tags": LEMMA_TAGS })).text_only(LEMMA_TAGS.join("\n") + "\n"));
    }
    let report = lemma_check(name, trials, seed)?;
    Ok(Output::json(
        verdict(report.passed()),
        serde_json::to_value(&report).expect("reports serialize"),
    ))
}

fn render(group: &GroupArgs, input: &Input) -> Outcome {
    let (_, a, _) = load(group, input, None)?;
    let grid = render_grid(&a);
    Ok(Output::json(EXIT_TRUE, json!({ "grid": grid })).text_only(grid))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::CheckTile {
            group,
            input,
            complement,
        } => check_tile(group, input, complement.as_deref()),
        Command::CheckSpectral {
            group,
            input,
            spectrum,
            form,
        } => check_spectral(group, input, spectrum.as_deref(), *form),
        Command::ZeroSet { group, input, form } => zero_set_cmd(group, input, *form),
        Command::ConstructSpectrum {
            group,
            input,
            complement,
        } => {
            let (_, a, b) = load(group, input, complement.as_deref())?;
            certificate_output(spectrum_for_tile(&a, b.as_ref())?)
        }
        Command::ConstructComplement { group, input, spectrum } => {
            construct_complement(group, input, spectrum.as_deref())
        }
        Command::PeriodicReplace {
            group,
            input,
            complement,
        } => periodic_replace(group, input, complement.as_deref()),
        Command::Search {
            group,
            input,
            kind,
            limit,
            form,
            budget,
        } => search(group, input, *kind, *limit, *form, *budget),
        Command::VerifyConjecture {
            group,
            mode,
            budget,
            seed,
            threads,
        } => verify(group, *mode, *budget, *seed, *threads),
        Command::LemmaCheck { name, trials, seed } => lemma(name, *trials, *seed),
        Command::Render { group, input } => render(group, input),
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Contradiction { .. } | Error::RouteDisagreement { .. } | Error::ConstructionFailed(_) => {
            EXIT_CONTRADICTION
        }
        Error::NotATile
        | Error::NotSpectral
        | Error::NotATilingPair
        | Error::SizeObstruction { .. }
        | Error::AlreadyPeriodic(_) => EXIT_FALSE,
        _ => EXIT_USAGE,
    }
}

fn error_output(failure: Failure) -> Output {
    match failure {
        Failure::Usage(message) => {
            Output::json(EXIT_USAGE, json!({ "error": { "kind": "usage", "message": message } }))
        }
        Failure::Core(e) => {
            let code = error_code(&e);
            let kind = match code {
                EXIT_CONTRADICTION => "contradiction",
                EXIT_FALSE => "not-constructible",
                _ => "validation",
            };
            let mut body = json!({ "error": { "kind": kind, "message": e.to_string() } });
            if let Error::Contradiction { case, profile } = &e {
                body["error"]["case"] = json!(case);
                body["error"]["profile"] = serde_json::to_value(profile).expect("profiles serialize");
            }
            Output::json(code, body)
        }
    }
}

/// Indented JSON that keeps coordinate lists on one line.
fn pretty_json(v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent + 1);
    let flat = |x: &Value| {
        !x.is_object()
            && x.as_array()
                .is_none_or(|a| a.iter().all(|y| !y.is_object() && !y.is_array()))
    };
    match v {
        Value::Array(items) if items.iter().all(flat) => v.to_string(),
        Value::Array(items) => {
            let inner: Vec<String> = items
                .iter()
                .map(|x| format!("{pad}{}", pretty_json(x, indent + 1)))
                .collect();
            format!("[\n{}\n{}]", inner.join(",\n"), "  ".repeat(indent))
        }
        Value::Object(map) if !map.is_empty() => {
            let inner: Vec<String> = map
                .iter()
                .map(|(k, x)| format!("{pad}{}: {}", Value::from(k.as_str()), pretty_json(x, indent + 1)))
                .collect();
            format!("{{\n{}\n{}}}", inner.join(",\n"), "  ".repeat(indent))
        }
        _ => v.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = run(&cli).unwrap_or_else(error_output);
    let mut rendered = String::new();
    if cli.pretty {
        if !output.text_only {
            rendered = pretty_json(&output.body, 0) + "\n";
        }
        rendered += output.text.as_deref().unwrap_or("");
    } else {
        rendered = output.body.to_string() + "\n";
    }
    let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
    ExitCode::from(output.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let contradiction = Error::Contradiction {
            case: "tile-p2-final",
            profile: None,
        };
        let out = error_output(Failure::Core(contradiction));
        assert_eq!(out.code, EXIT_CONTRADICTION);
        assert_eq!(out.body["error"]["case"], "tile-p2-final");
        assert_eq!(error_output(Failure::Core(Error::NotATile)).code, EXIT_FALSE);
        assert_eq!(error_output(Failure::Core(Error::NotPrime(4))).code, EXIT_USAGE);
        assert_eq!(error_output(Failure::Usage("x".into())).code, EXIT_USAGE);
    }

    #[test]
    fn pretty_keeps_pairs_inline() {
        let v = json!({ "set": [[0, 0], [1, 0]], "group": { "p": 2 } });
        assert_eq!(
            pretty_json(&v, 0),
            "{\n  \"set\": [[0,0],[1,0]],\n  \"group\": {\n    \"p\": 2\n  }\n}"
        );
    }
}
