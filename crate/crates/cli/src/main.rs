use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gradlca::algebra::{
    audit_jacobi, audit_module, audit_skew, parse_param_value, AlgebraSpec, Element, Report,
};
use gradlca::catalog::{build_module, family_spec, Family, ModuleKind, Params};
use gradlca::classify::{
    audit_additivity, audit_degree_bound, classify_v, extend_v_seed, ExtendOutcome, Tag, VSeed,
};
use gradlca::derived::{
    annihilation_truncation, basic_lie_algebra, ecl_ideals, ideal_closure, is_ideal,
    verify_morphism, SubmoduleSpec,
};
use gradlca::poly::Poly;
use gradlca::Error;

const OK: u8 = 0;
const FAILED: u8 = 1;
const MALFORMED: u8 = 2;
const IMPOSSIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "gradlca", version, about = "Build, audit and classify Z-graded Lie conformal algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Catalog family: vir, cur-sl2, v, cl1, cl2, scl2, cl3, ecl, m1, m2.
    #[arg(long, global = true)]
    family: Option<Family>,
    /// JSON input (an algebra, or a seed for classify/extend).
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    /// name=rational or name=free; repeatable.
    #[arg(long = "param", global = true, value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// lo..hi
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, global = true, default_value_t = 10)]
    max_index: u32,
    /// Also audit a module over the algebra: mab or mu.
    #[arg(long, global = true)]
    module: Option<ModuleKind>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Audit skew-symmetry and Jacobi (plus structural audits).
    Verify,
    /// Ideal closures and isomorphism witnesses.
    Ideals,
    /// Classify the algebra generated by degrees -1, 0, 1.
    Classify,
    /// Derived Lie algebras.
    Derive {
        #[command(subcommand)]
        what: Derive,
    },
    /// Extend a seed to a table on the window.
    Extend,
}

#[derive(Subcommand)]
enum Derive {
    Basic,
    Annihilate,
}

struct Outcome {
    json: Value,
    text: String,
    code: u8,
}

fn code_of(e: &Error) -> u8 {
    match e {
        Error::Precondition(_) | Error::Shape(_) | Error::Inconsistent(_) | Error::Factorization(_) => FAILED,
        _ => MALFORMED,
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

impl Cli {
    fn params(&self) -> Result<Params, Error> {
        let mut out = Params::new();
        for p in &self.params {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("--param `{p}` is not name=value")))?;
            out.insert(k.trim().to_string(), parse_param_value(v)?);
        }
        Ok(out)
    }

    fn window(&self) -> Result<(i64, i64), Error> {
        let Some(w) = &self.window else {
            let lo = self.family.and_then(|f| f.min_degree()).map_or(-6, |m| m.max(-6));
            return Ok((lo, 6));
        };
        let bad = || Error::Malformed(format!("--window `{w}` is not lo..hi"));
        let (lo, hi) = w.split_once("..").ok_or_else(bad)?;
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(Error::WindowDomain(format!("empty window {lo}..{hi}")));
        }
        Ok((lo, hi))
    }

    /// Family parameters, and the rest for the module when one is asked for.
    fn split_params(&self) -> Result<(Params, Params), Error> {
        let all = self.params()?;
        let (Some(f), Some(_)) = (self.family, self.module) else {
            return Ok((all, Params::new()));
        };
        Ok(all.into_iter().partition(|(k, _)| f.param_names().contains(&k.as_str())))
    }

    fn algebra(&self) -> Result<AlgebraSpec, Error> {
        match (&self.family, &self.file) {
            (Some(f), None) => family_spec(*f, &self.split_params()?.0, self.window()?),
            (None, Some(p)) => AlgebraSpec::from_json(&read(p)?),
            _ => Err(Error::Malformed("give exactly one of --family and --file".into())),
        }
    }

    fn seed(&self) -> Result<VSeed, Error> {
        match &self.file {
            Some(p) if self.family.is_none() => VSeed::from_json(&read(p)?),
            _ => VSeed::from_spec(&self.algebra()?),
        }
    }

    fn extent(&self) -> Result<u32, Error> {
        let (lo, hi) = self.window()?;
        Ok(lo.unsigned_abs().max(hi.unsigned_abs()).max(2) as u32)
    }
}

fn report_outcome(rep: Report, extra: Value) -> Outcome {
    let code = if rep.passed() { OK } else { FAILED };
    let mut json = json!({ "passed": rep.passed(), "report": rep.to_json() });
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Outcome { json, text: format!("{rep}\n"), code }
}

fn verify(cli: &Cli) -> Result<Outcome, Error> {
    let a = cli.algebra()?;
    let (lo, hi) = cli.window()?;
    let mut rep = audit_skew(&a);
    rep.merge(audit_jacobi(&a, lo, hi));
    if a.support().clip(lo, hi).contains(&0) {
        rep.merge(audit_additivity(&a, lo, hi)?);
        rep.merge(audit_degree_bound(&a, lo, hi)?);
    }
    if let Some(kind) = cli.module {
        let params = if cli.family.is_some() { cli.split_params()?.1 } else { cli.params()? };
        let m = build_module(kind, &params, &a)?;
        rep.merge(audit_module(&m, lo, hi));
    }
    Ok(report_outcome(rep, json!({ "algebra": a.name(), "window": [lo, hi] })))
}

fn parts_json(s: &SubmoduleSpec) -> Value {
    s.to_json()["parts"].clone()
}

fn ideals(cli: &Cli) -> Result<Outcome, Error> {
    let (lo, hi) = cli.window()?;
    let params = cli.params()?;
    let mut found = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    match cli.family {
        Some(Family::ECL) => {
            let ecl = family_spec(Family::ECL, &params, (lo, hi))?;
            let s_only: Params = params.iter().filter(|(k, _)| *k == "s").map(|(k, v)| (k.clone(), v.clone())).collect();
            let mut b0 = s_only.clone();
            b0.insert("b".into(), parse_param_value("0")?);
            let targets = [
                family_spec(Family::CL2, &b0, (lo, hi))?,
                family_spec(Family::CL3, &s_only, (lo, hi))?,
                family_spec(Family::SCL2, &b0, (lo, hi))?,
            ];
            for e in ecl_ideals(&ecl, targets, lo, hi)? {
                let proper = e.closure.ideal.is_proper_in(&ecl, lo, hi);
                let ideal = is_ideal(&ecl, &e.closure.ideal, lo, hi)?.passed();
                let witness = verify_morphism(&e.witness, lo, hi).passed();
                ok &= proper && ideal && witness;
                text += &format!(
                    "seed ({})L_0: proper {proper}, ideal {ideal}, isomorphic to {} {witness}\n",
                    e.seed,
                    e.witness.target.name()
                );
                found.push(json!({
                    "seed": format!("({})L_0", e.seed),
                    "parts": parts_json(&e.closure.ideal),
                    "proper": proper,
                    "is_ideal": ideal,
                    "target": e.witness.target.name(),
                    "witness": e.witness.to_json(),
                    "witness_verified": witness,
                }));
            }
        }
        Some(Family::SCL2) => {
            let cl2 = family_spec(Family::CL2, &params, (lo, hi))?;
            let scl2 = family_spec(Family::SCL2, &params, (lo, hi))?;
            let n0 = scl2
                .labels()
                .iter()
                .find(|(_, l)| l.starts_with('M'))
                .map(|(i, _)| *i)
                .ok_or_else(|| Error::Inconsistent("SCL2 has no modified degree in the window".into()))?;
            let mut parts: BTreeMap<i64, Poly> = cl2.support().clip(lo, hi).into_iter().map(|i| (i, Poly::one())).collect();
            let mult = gradlca::poly::parse("d + 2*s", &cl2.param_set())?;
            parts.insert(n0, mult);
            let sub = SubmoduleSpec::new(parts)?;
            let proper = sub.is_proper_in(&cl2, lo, hi);
            let ideal = is_ideal(&cl2, &sub, lo, hi)?.passed();
            ok &= proper && ideal;
            text += &format!("SCL2 inside {}: proper {proper}, ideal {ideal}\n", cl2.name());
            found.push(json!({
                "ambient": cl2.name(),
                "parts": parts_json(&sub),
                "proper": proper,
                "is_ideal": ideal,
            }));
        }
        _ => {
            let a = cli.algebra()?;
            for i in a.support().clip(lo, hi) {
                let c = ideal_closure(&a, &Element::generator(i), lo, hi)?;
                if c.ideal.is_proper_in(&a, lo, hi) {
                    let ideal = is_ideal(&a, &c.ideal, lo, hi)?.passed();
                    text += &format!("seed L_{i}: proper ideal {ideal}\n");
                    found.push(json!({
                        "seed": format!("L_{i}"),
                        "parts": parts_json(&c.ideal),
                        "proper": true,
                        "is_ideal": ideal,
                    }));
                }
            }
            if found.is_empty() {
                text += "no proper graded ideal found from the generator seeds\n";
            }
        }
    }
    Ok(Outcome {
        json: json!({ "passed": ok, "window": [lo, hi], "ideals": found }),
        text,
        code: if ok { OK } else { FAILED },
    })
}

fn classify(cli: &Cli) -> Result<Outcome, Error> {
    let st = classify_v(&cli.seed()?, cli.extent()?)?;
    let code = if st.tag == Tag::Impossible { IMPOSSIBLE } else { OK };
    Ok(Outcome { json: st.to_json(), text: st.to_string(), code })
}

fn extend(cli: &Cli) -> Result<Outcome, Error> {
    Ok(match extend_v_seed(&cli.seed()?, cli.extent()?)? {
        ExtendOutcome::Table(e) => {
            let scalings: BTreeMap<String, String> =
                e.scalings.iter().map(|(k, c)| (k.to_string(), c.to_string())).collect();
            Outcome {
                text: format!("{}\n", e.spec.to_json()),
                json: json!({ "outcome": "table", "algebra": e.spec.to_json(), "scalings": scalings }),
                code: OK,
            }
        }
        ExtendOutcome::Impossible(c) => Outcome {
            text: c.to_string(),
            json: json!({ "outcome": "impossible", "certificate": c.to_json() }),
            code: IMPOSSIBLE,
        },
    })
}

fn derive(cli: &Cli, what: &Derive) -> Result<Outcome, Error> {
    let a = cli.algebra()?;
    let (lo, hi) = cli.window()?;
    let g = match what {
        Derive::Basic => basic_lie_algebra(&a, lo, hi)?,
        Derive::Annihilate => annihilation_truncation(&a, cli.max_index, lo, hi)?,
    };
    Ok(Outcome {
        json: g.to_json(),
        text: format!("{g}{}", if g.is_abelian() { "abelian\n" } else { "" }),
        code: OK,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Verify => verify(cli),
        Cmd::Ideals => ideals(cli),
        Cmd::Classify => classify(cli),
        Cmd::Extend => extend(cli),
        Cmd::Derive { what } => derive(cli, what),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(code_of(&e));
        }
    };
    let body = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json).expect("json")),
        Format::Text => out.text,
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, body) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(MALFORMED);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(out.code)
}
