//! Command-line front end. Every verb reads presentations as JSON files (or
//! `corpus:<name>`), calls one library operation and prints JSON.
//!
//! Exit codes: 0 success, 2 malformed input, 3 undecided verdict, 4 violated
//! precondition. Failures print `{"error": {"code", "message"}}`.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::functors::{apply_functor, holds_in_view, localize, tensor_over_ground, FunctorTag};
use crate::ground::{base_valuation, BaseValuation, GroundTag, GroundValue, ValuationKind};
use crate::presentation::{congruence_equiv, derives, DerivationBudget, FormalSum, Presentation, Verdict};
use crate::spectra::{extended_cone_membership, globalize, kato_fan, prime_k_ideals};
use crate::trop::{
    bend, gg_congruence, macpherson_an, mr_weight, point_in_trop, render_svg, spans_embed_tropically, tropical_hypersurface,
    KDesignation,
};
use crate::valuation::{classify_valuation, is_valuation, ring_terms, ValuationSpec};

#[derive(Parser, Debug)]
#[command(name = "bluebend", version, about = "Exact computations with finitely presented ordered blueprints")]
struct Cli {
    /// Maximum number of rewrite layers in a derivation search.
    #[arg(long, global = true)]
    budget_depth: Option<usize>,
    /// Maximum length of intermediate sums.
    #[arg(long, global = true)]
    budget_len: Option<usize>,
    /// Maximum monomial degree of intermediate sums.
    #[arg(long, global = true)]
    budget_degree: Option<u32>,
    /// Seed for commands that sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Args, Debug)]
struct Input {
    /// Presentation JSON file, or corpus:<name>.
    #[arg(long = "in")]
    input: String,
}

#[derive(Args, Debug)]
struct Base {
    /// trivial | p_adic:<p> | archimedean | lex:<p>,<p>,... | identity
    #[arg(long, default_value = "trivial")]
    base: String,
    /// Target ground tag.
    #[arg(long, default_value = "TROP")]
    target: String,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Print a presentation in canonical JSON.
    Show(Input),
    /// Decide a relation, optionally in a view (core, plus, mon, padd, conic).
    Derives {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rel: String,
        #[arg(long)]
        view: Option<String>,
    },
    /// Apply pos, hull, idem or inv.
    ApplyFunctor {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        functor: String,
    },
    /// Tensor product over a common ground.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        over: String,
    },
    /// Adjoin inverses of monomials.
    Localize {
        #[command(flatten)]
        input: Input,
        #[arg(long = "elem", required = true)]
        elems: Vec<String>,
    },
    /// The bend along a base valuation.
    Bend {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        base: Base,
    },
    /// Degree-bounded circuit congruence of the ideal, compared with the bend.
    Gg {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        base: Base,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Test a point against the bend, or sample seeded points.
    TropCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        base: Base,
        /// JSON object generator -> value string.
        #[arg(long)]
        point: Option<String>,
        /// Number of sampled points with coordinates 2^k, |k| <= 3.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Decide whether an assignment extends the base valuation, and classify it.
    CheckValuation {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        base: Base,
        #[arg(long)]
        assign: String,
    },
    /// Tropical hypersurface of the single relation of a ring presentation.
    Hypersurface {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "trivial")]
        base: String,
    },
    /// Prime k-ideals.
    Spectrum(Input),
    /// Global sections of a spectrum with one closed point.
    Globalize(Input),
    /// Affine Kato fan of a monoid presentation.
    Kato(Input),
    /// Membership of a point in the extended cone of a monoid.
    ConeCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        point: String,
    },
    /// Span fragment of the Macpherson analytification.
    An {
        #[command(flatten)]
        input: Input,
        /// Use the valuation ring of the p-adic valuation instead of the ground.
        #[arg(long)]
        valued: Option<u64>,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, default_value_t = 2)]
        size: usize,
    },
    /// Maclagan-Rincón weight at a point of the tropicalization.
    Weights {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "trivial")]
        base: String,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 4)]
        degree_bound: u32,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_body(code: &str, message: &str) -> String {
    let v = json!({"error": {"code": code, "message": message}});
    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
}

/// Runs the command line `args` (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            return Outcome { code: 2, stdout: String::new(), stderr: error_body("ParseError", e.to_string().trim()) };
        }
    };
    match dispatch(&cli) {
        Ok(Output::Json(v)) => Outcome { code: 0, stdout: format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), stderr: String::new() },
        Ok(Output::Text(s)) => Outcome { code: 0, stdout: s, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: error_body(e.code(), &e.to_string()) },
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn budget(cli: &Cli) -> Result<DerivationBudget> {
    let mut b = DerivationBudget::default();
    if let Ok(s) = std::env::var("BLUEBEND_BUDGET") {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("BLUEBEND_BUDGET must be depth,len,degree; got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        b = DerivationBudget::new(
            parts[0].parse().map_err(|_| bad())?,
            parts[1].parse().map_err(|_| bad())?,
            parts[2].parse().map_err(|_| bad())?,
        )?;
    }
    DerivationBudget::new(
        cli.budget_depth.unwrap_or(b.max_depth),
        cli.budget_len.unwrap_or(b.max_sum_len),
        cli.budget_degree.unwrap_or(b.max_degree),
    )
}

fn load(spec: &str) -> Result<Presentation> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        return crate::corpus::by_name(name);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Invalid(format!("cannot read {spec}: {e}")))?;
    Presentation::from_json_str(&text)
}

fn presentation_json(p: &Presentation) -> Value {
    serde_json::to_value(p.to_json()).expect("presentation serializes")
}

fn parse_base(s: &str, source: GroundTag, target: GroundTag) -> Result<BaseValuation> {
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    let bad = || Error::Parse(format!("bad base valuation {s:?}"));
    let kind = match head {
        "trivial" => ValuationKind::Trivial,
        "identity" => ValuationKind::Identity,
        "archimedean" => ValuationKind::Archimedean,
        "p_adic" | "p-adic" => ValuationKind::PAdic { p: arg.parse().map_err(|_| bad())? },
        "lex" => ValuationKind::LexComposite {
            components: arg.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?,
        },
        _ => return Err(bad()),
    };
    base_valuation(kind, source, target)
}

fn parse_point(s: &str, tag: GroundTag) -> Result<BTreeMap<String, GroundValue>> {
    let v: BTreeMap<String, Value> = serde_json::from_str(s).map_err(|e| Error::Parse(format!("point: {e}")))?;
    v.into_iter()
        .map(|(k, x)| {
            let text = match x {
                Value::String(s) => s,
                Value::Number(n) => n.to_string(),
                other => return Err(Error::Parse(format!("value for {k} must be a string, got {other}"))),
            };
            Ok((k, GroundValue::parse(tag, &text)?))
        })
        .collect()
}

fn verdict_json(v: &Verdict) -> Result<Value> {
    match v {
        Verdict::Proved(trace) => Ok(json!({"verdict": "proved", "trace": trace})),
        Verdict::Disproved(w) => Ok(json!({"verdict": "disproved", "witness": w.to_string()})),
        Verdict::Unknown(why) => Err(Error::Unknown(why.clone())),
    }
}

/// The polynomials `rhs - lhs` of a ring presentation's relations.
fn ideal_generators(p: &Presentation) -> Result<Vec<FormalSum>> {
    if !p.ground.has_minus_one() {
        return Err(Error::UnsupportedGround(format!("{} has no -1", p.ground)));
    }
    p.subaddition.iter().map(|r| Ok(FormalSum::new(ring_terms(&r.lhs, &r.rhs)?))).collect()
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let b = budget(cli)?;
    if cli.format == Format::Svg && !matches!(cli.verb, Verb::Hypersurface { .. }) {
        return Err(Error::Invalid("--format svg is only available for hypersurface".into()));
    }
    let out = match &cli.verb {
        Verb::Show(i) => presentation_json(&load(&i.input)?),
        Verb::Derives { input, rel, view } => {
            let p = load(&input.input)?;
            let r = p.parse_relation(rel)?;
            let v = match view {
                Some(f) => holds_in_view(&p, f.parse::<FunctorTag>()?, &r, b),
                None => derives(&p, &r, b),
            };
            verdict_json(&v)?
        }
        Verb::ApplyFunctor { input, functor } => presentation_json(&apply_functor(&load(&input.input)?, functor.parse()?)?),
        Verb::Tensor { left, right, over } => {
            presentation_json(&tensor_over_ground(&load(left)?, &load(right)?, over.parse()?, b)?)
        }
        Verb::Localize { input, elems } => {
            let p = load(&input.input)?;
            let ms = elems.iter().map(|e| p.parse_monomial(e)).collect::<Result<Vec<_>>>()?;
            presentation_json(&localize(&p, &ms)?)
        }
        Verb::Bend { input, base } => {
            let p = load(&input.input)?;
            let t: GroundTag = base.target.parse()?;
            let bp = bend(&p, &parse_base(&base.base, p.ground, t)?, t)?;
            json!({"presentation": presentation_json(&bp.underlying), "complete": bp.complete})
        }
        Verb::Gg { input, base, degree } => {
            let p = load(&input.input)?;
            let t: GroundTag = base.target.parse()?;
            let v = parse_base(&base.base, p.ground, t)?;
            let gg = gg_congruence(&p.generators, &ideal_generators(&p)?, &v, t, *degree)?;
            let bp = bend(&p, &v, t)?;
            let eq = congruence_equiv(&gg, &bp.underlying, b)?;
            json!({"presentation": presentation_json(&gg), "equivalent_to_bend": verdict_json(&eq)?})
        }
        Verb::TropCheck { input, base, point, sample } => {
            let p = load(&input.input)?;
            let t: GroundTag = base.target.parse()?;
            let bp = bend(&p, &parse_base(&base.base, p.ground, t)?, t)?;
            match (point, sample) {
                (Some(pt), None) => json!({"in_tropicalization": point_in_trop(&bp, &parse_point(pt, t)?)?}),
                (None, Some(n)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    let mut hits = Vec::new();
                    for _ in 0..*n {
                        let mut w = BTreeMap::new();
                        for g in &p.generators {
                            let k: i32 = rng.gen_range(-3..=3);
                            let x = crate::ground::Q::from_integer(2.into()).pow(k);
                            w.insert(g.clone(), GroundValue::rational(t, x)?);
                        }
                        let inside = point_in_trop(&bp, &w)?;
                        let shown: BTreeMap<&String, String> = w.iter().map(|(k, v)| (k, v.to_string())).collect();
                        hits.push(json!({"point": shown, "in_tropicalization": inside}));
                    }
                    json!({"seed": cli.seed, "samples": hits})
                }
                _ => return Err(Error::Invalid("give exactly one of --point and --sample".into())),
            }
        }
        Verb::CheckValuation { input, base, assign } => {
            let p = load(&input.input)?;
            let t: GroundTag = base.target.parse()?;
            let spec = ValuationSpec::new(p.clone(), parse_base(&base.base, p.ground, t)?, parse_point(assign, t)?)?;
            let v = is_valuation(&spec, b)?;
            let class = if v.is_proved() || t.has_minus_one() {
                classify_valuation(&spec, b).ok().map(|c| serde_json::to_value(c).unwrap())
            } else {
                None
            };
            let mut out = verdict_json(&v)?;
            out["class"] = class.unwrap_or(Value::Null);
            out
        }
        Verb::Hypersurface { input, base } => {
            let p = load(&input.input)?;
            let gens = ideal_generators(&p)?;
            if gens.len() != 1 {
                return Err(Error::Invalid(format!("expected one relation, got {}", gens.len())));
            }
            let v = parse_base(base, p.ground, GroundTag::Trop)?;
            let c = tropical_hypersurface(&gens[0], &p.generators, &v)?;
            if cli.format == Format::Svg {
                return Ok(Output::Text(render_svg(&c)?));
            }
            c.to_json()
        }
        Verb::Spectrum(i) => {
            let s = prime_k_ideals(&load(&i.input)?, b)?;
            let mut v = json!({"primes": s.primes.iter().map(|p| p.labels()).collect::<Vec<_>>()});
            if s.tentative() {
                v["tentative"] = json!(true);
            }
            v
        }
        Verb::Globalize(i) => {
            let g = globalize(&load(&i.input)?, b)?;
            json!({"sections": presentation_json(&g.sections), "closed_point": g.closed_point.labels()})
        }
        Verb::Kato(i) => kato_fan(&load(&i.input)?)?.to_json(),
        Verb::ConeCheck { input, point } => {
            let m = load(&input.input)?;
            json!({"in_cone": extended_cone_membership(&m, &parse_point(point, GroundTag::OTrop)?)?})
        }
        Verb::An { input, valued, max_degree, size } => {
            let p = load(&input.input)?;
            let k = match valued {
                Some(q) => KDesignation::Valued(BaseValuation::p_adic(*q, p.ground, GroundTag::Trop)?),
                None => KDesignation::Ground,
            };
            let frag = macpherson_an(&p, &k, *max_degree, *size, b)?;
            let check = spans_embed_tropically(&frag, &k)?;
            json!({
                "spans": frag.spans.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "tentative": frag.tentative,
                "isomorphic_to_bend": verdict_json(&check)?,
            })
        }
        Verb::Weights { input, base, point, degree_bound } => {
            let p = load(&input.input)?;
            let bp = bend(&p, &parse_base(base, p.ground, GroundTag::Trop)?, GroundTag::Trop)?;
            json!({"weight": mr_weight(&bp, &parse_point(point, GroundTag::Trop)?, *degree_bound)?})
        }
    };
    Ok(Output::Json(out))
}
