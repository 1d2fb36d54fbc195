use std::collections::BTreeSet;
use std::fmt::{Debug, Display};

use rootgroupoid::cartan::CartanDatum;
use rootgroupoid::families::{construct, expected, named_root, registry, spine_oracle, Count, FamilySpec};
use rootgroupoid::groupoid::{explore, MarkedGraph, Mode, Vertex};
use rootgroupoid::roots::{
    classify_component, finite_root_system, is_imaginary, pi_s_enumerate, principal_data, real_roots, root_bases,
    PrincipalData,
};
use rootgroupoid::symmetry::{bilinear_frame, sk_d_structure, sp_d_group, GroupOrder, SpDGroup};
use serde_json::{json, Value};

use crate::{Cli, Format, Verb};

/// Powers checked before an `Sp^D` element is called infinite.
const POWER_BOUND: u32 = 10;

pub enum Output {
    Json(Value),
    Dot(String),
}

pub enum Failure {
    /// Invalid invocation: exit code 2.
    Usage(String),
    /// Error raised by a library module: exit code 1.
    Domain { name: String, message: String },
}

/// `module::Variant` from the `Debug` form of a library error.
fn domain<E: Debug + Display>(module: &'static str) -> impl Fn(E) -> Failure {
    move |e| {
        let dbg = format!("{e:?}");
        let variant = dbg.split(|c: char| !(c.is_alphanumeric() || c == '_')).next().unwrap_or_default();
        Failure::Domain { name: format!("{module}::{variant}"), message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// The input datum, with its family when given by name.
struct Input {
    label: String,
    spec: Option<FamilySpec>,
    datum: CartanDatum,
}

fn load(cli: &Cli) -> Result<Input, Failure> {
    if let Some(name) = &cli.family {
        let spec: FamilySpec = name.parse().map_err(|e| usage(format!("{e}")))?;
        let datum = construct(&spec).map_err(domain("families"))?;
        return Ok(Input { label: spec.to_string(), spec: Some(spec), datum });
    }
    if let Some(path) = &cli.input {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let datum = CartanDatum::from_json(&text).map_err(domain("cartan"))?;
        return Ok(Input { label: path.display().to_string(), spec: None, datum });
    }
    Err(usage("one of --family or --input is required"))
}

fn status(g: &MarkedGraph) -> &'static str {
    if g.status.is_complete() {
        "complete"
    } else {
        "truncated"
    }
}

fn explore_mode(input: &Input, mode: Mode, cli: &Cli) -> MarkedGraph {
    explore(Vertex::base(input.datum.clone()), mode, cli.max_vertices as usize)
}

fn principal(spine: &MarkedGraph) -> Result<PrincipalData, Failure> {
    principal_data(spine).map_err(domain("roots"))
}

fn parse_root(cli: &Cli, input: &Input) -> Result<Vec<i64>, Failure> {
    let raw = cli.root.as_deref().ok_or_else(|| usage("--root is required for this verb"))?;
    let n = input.datum.size();
    let trimmed = raw.trim().trim_start_matches('[').trim_end_matches(']');
    let numeric: Option<Vec<i64>> = trimmed.split(',').map(|x| x.trim().parse().ok()).collect();
    let v = match numeric {
        Some(v) => v,
        None => {
            let spec = input.spec.as_ref().ok_or_else(|| usage(format!("named root {raw:?} needs --family")))?;
            named_root(spec, raw).ok_or_else(|| usage(format!("{spec} has no root named {raw:?}")))?
        }
    };
    if v.len() != n {
        return Err(usage(format!("root has {} coordinates, the datum has rank {n}", v.len())));
    }
    Ok(v)
}

fn class_matches(want: &str, g: &SpDGroup) -> bool {
    match want {
        "trivial" => g.is_trivial(),
        "infinite" => matches!(g.order, GroupOrder::Infinite(_)),
        other => g.class == other,
    }
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    if cli.format == Format::Dot && !matches!(cli.verb, Verb::Spine | Verb::Skeleton) {
        return Err(usage("--format dot is only available for spine and skeleton"));
    }
    if cli.verb == Verb::Export && cli.family.is_none() && cli.input.is_none() {
        return Ok(Output::Json(list_registry()?));
    }
    let input = load(cli)?;
    let v = match cli.verb {
        Verb::Spine | Verb::Skeleton => {
            let mode = if cli.verb == Verb::Spine { Mode::Spine } else { Mode::Skeleton };
            let g = explore_mode(&input, mode, cli);
            if cli.format == Format::Dot {
                let name = if mode == Mode::Spine { "spine" } else { "skeleton" };
                return Ok(Output::Dot(g.to_dot(name)));
            }
            let mut v = g.to_json_value();
            v["input"] = json!(input.label);
            v
        }
        Verb::Classify => classify(cli, &input)?,
        Verb::Roots => roots(cli, &input)?,
        Verb::Imaginary => {
            let mu = parse_root(cli, &input)?;
            let spine = explore_mode(&input, Mode::Spine, cli);
            let pd = principal(&spine)?;
            let answer = is_imaginary(&pd, &mu).map_err(domain("roots"))?;
            json!({"input": input.label, "root": mu, "imaginary": answer, "status": status(&spine), "saturated": pd.saturated})
        }
        Verb::Bases => {
            let spine = explore_mode(&input, Mode::Spine, cli);
            let pd = principal(&spine)?;
            let delta = finite_root_system(&pd, &spine, cli.max_height).map_err(domain("roots"))?;
            let bases: BTreeSet<Vec<Vec<i64>>> =
                root_bases(&delta, pd.rank()).into_iter().map(|s| s.into_iter().collect()).collect();
            json!({"input": input.label, "root_count": delta.len(), "count": bases.len(), "bases": bases, "status": "complete"})
        }
        Verb::Spd => {
            let spine = explore_mode(&input, Mode::Spine, cli);
            let g = sp_d_group(&spine, POWER_BOUND).map_err(domain("symmetry"))?;
            let mut v = g.to_json_value();
            v["input"] = json!(input.label);
            v["status"] = json!(status(&spine));
            v
        }
        Verb::Skd => {
            let spine = explore_mode(&input, Mode::Spine, cli);
            let skeleton = explore_mode(&input, Mode::Skeleton, cli);
            let pd = principal(&spine)?;
            let g = sp_d_group(&spine, POWER_BOUND).map_err(domain("symmetry"))?;
            let frame = bilinear_frame(&input.datum).ok().filter(|f| f.corank() == 1);
            let r = sk_d_structure(&skeleton, &g, &pd, cli.max_length as usize, frame.as_ref())
                .map_err(domain("symmetry"))?;
            let complete = spine.status.is_complete() && skeleton.status.is_complete();
            json!({
                "input": input.label,
                "sp_d_class": g.class,
                "report": serde_json::to_value(&r).expect("serializable"),
                "status": if complete { "complete" } else { "truncated" },
            })
        }
        Verb::OracleCheck => return oracle_check(cli, &input),
        Verb::Export => export(&input),
    };
    Ok(Output::Json(v))
}

fn classify(cli: &Cli, input: &Input) -> Result<Value, Failure> {
    let spine = explore_mode(input, Mode::Spine, cli);
    let pd = principal(&spine)?;
    let c = classify_component(&pd, &spine, cli.max_height).map_err(domain("roots"))?;
    let report = pd.report();
    Ok(json!({
        "input": input.label,
        "type": c.gcm_type,
        "parity_type": c.parity_type,
        "quotient": c.quotient,
        "saturated": c.saturated,
        "sigma_pr": report.sigma_pr,
        "pi": report.pi,
        "b_pi": report.b_pi,
        "status": status(&spine),
    }))
}

fn roots(cli: &Cli, input: &Input) -> Result<Value, Failure> {
    let spine = explore_mode(input, Mode::Spine, cli);
    let pd = principal(&spine)?;
    let real = real_roots(&pd, &spine, cli.max_height).map_err(domain("roots"))?;
    let ps = pi_s_enumerate(&spine);
    let truncated = real.truncated || !spine.status.is_complete();
    Ok(json!({
        "input": input.label,
        "principal": serde_json::to_value(pd.report()).expect("serializable"),
        "anisotropic": real.anisotropic,
        "isotropic": real.isotropic,
        "nonreflectable": real.nonreflectable,
        "pi_s": ps.elements,
        "max_height": cli.max_height,
        "status": if truncated { "truncated" } else { "complete" },
    }))
}

fn oracle_check(cli: &Cli, input: &Input) -> Result<Output, Failure> {
    let spec = input.spec.as_ref().ok_or_else(|| usage("oracle-check needs --family"))?;
    let spine = explore_mode(input, Mode::Spine, cli);
    let meta = expected(spec);
    let mut agree = true;
    let mut checks = serde_json::Map::new();
    match spine_oracle(spec) {
        Ok(oracle) => {
            let iso = oracle.isomorphism(&spine.adjacency()).is_some();
            agree &= iso;
            checks.insert(
                "spine_oracle".into(),
                json!({"oracle_vertices": oracle.len(), "explored_vertices": spine.len(), "isomorphic": iso}),
            );
        }
        Err(_) => {
            checks.insert("spine_oracle".into(), Value::Null);
        }
    }
    if let (Some(Count::Exact(n)), true) = (&meta.spine, spine.status.is_complete()) {
        let ok = *n as usize == spine.len();
        agree &= ok;
        checks.insert("spine_count".into(), json!({"expected": n, "explored": spine.len(), "agree": ok}));
    }
    let pd = principal(&spine)?;
    if meta.gcm_type.is_some() || meta.parity_type.is_some() {
        let c = classify_component(&pd, &spine, cli.max_height).map_err(domain("roots"))?;
        let ok = meta.gcm_type.is_none_or(|t| t == c.gcm_type) && meta.parity_type.is_none_or(|p| p == c.parity_type);
        agree &= ok;
        checks.insert(
            "classification".into(),
            json!({"type": c.gcm_type, "parity_type": c.parity_type, "agree": ok}),
        );
    }
    if let Some(want) = meta.sp_d {
        let g = sp_d_group(&spine, POWER_BOUND).map_err(domain("symmetry"))?;
        let ok = class_matches(want, &g);
        agree &= ok;
        checks.insert("sp_d".into(), json!({"class": g.class, "agree": ok}));
    }
    let v = json!({
        "input": input.label,
        "expected": serde_json::to_value(&meta).expect("serializable"),
        "checks": checks,
        "agree": agree,
        "status": status(&spine),
    });
    if agree {
        Ok(Output::Json(v))
    } else {
        Err(Failure::Domain { name: "cli::OracleMismatch".into(), message: v.to_string() })
    }
}

fn export(input: &Input) -> Value {
    json!({
        "input": input.label,
        "datum": serde_json::to_value(input.datum.to_json_value()).expect("serializable"),
        "flags": serde_json::to_value(input.datum.flags()).expect("serializable"),
        "expected": input.spec.as_ref().map(|s| serde_json::to_value(expected(s)).expect("serializable")),
        "status": "complete",
    })
}

fn list_registry() -> Result<Value, Failure> {
    let mut families = vec![];
    for name in registry() {
        let spec: FamilySpec = name.parse().expect("registry names parse");
        let datum = construct(&spec).map_err(domain("families"))?;
        families.push(json!({
            "name": spec.to_string(),
            "datum": serde_json::to_value(datum.to_json_value()).expect("serializable"),
            "expected": serde_json::to_value(expected(&spec)).expect("serializable"),
        }));
    }
    Ok(json!({"families": families, "status": "complete"}))
}

/// `key: value` lines for the top-level fields of a report.
pub fn to_text(v: &Value) -> String {
    match v.as_object() {
        Some(map) => map.iter().map(|(k, x)| format!("{k}: {x}\n")).collect(),
        None => format!("{v}\n"),
    }
}
