//! Query parsing, dispatch and rendering.

use std::fmt;

use serde_json::{json, Value};

use super::parser::{
    eval_conformal, eval_scalar, eval_vertex, parse_expr, render_definition, Expr,
};
use crate::error::{Error, Result};
use crate::lie_conformal::{
    check_jacobi, check_skew, current, free_boson, free_fermion, neveu_schwarz, superfermion,
    virasoro, AlgebraPresentation, BilinearForm, CheckReport, ConformalElement, LieTable, Parity,
    LAMBDA,
};
use crate::linear::BracketPoly;
use crate::mode_algebra::{commute, verify_mode_jacobi, Indexing, ModeSymbol};
use crate::scalar::Scalar;
use crate::vertex_calc::{
    borcherds_sweep, primary_check, superfermion_virasoro, weight, PrimaryClass, VertexAlgebra,
    VertexElement, WeightResult, WeightTable, DEFAULT_MAX_DEGREE,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
    Ope,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            "ope" => Ok(Format::Ope),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Skew,
    Jacobi,
    Borcherds,
    ModeJacobi,
}

/// An operand as typed, with its parsed form.
#[derive(Debug, Clone, PartialEq)]
pub struct Operand {
    pub text: String,
    pub expr: Expr,
}

impl Operand {
    fn parse(text: &str) -> Result<Self> {
        Ok(Operand {
            text: text.to_string(),
            expr: parse_expr(text)?,
        })
    }

    /// Name used on the left of an OPE line.
    fn label(&self) -> String {
        if self.expr.is_name() {
            self.text.clone()
        } else {
            format!("({})", self.text)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Bracket(Operand, Operand),
    NProduct(Operand, i64, Operand),
    Ope(Operand, Operand),
    /// Mode symbols are resolved against the algebra when run.
    Modes(String, String),
    Check(CheckKind),
    Weight(Operand),
    Primary(Operand, Option<Operand>),
    Show,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub format: Format,
    pub range: Option<i64>,
    pub max_degree: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            format: Format::Text,
            range: None,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

/// Rendered output. `code` is 0 on success and 1 when a check fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            output,
            code: 0,
            diagnostic: None,
        }
    }
}

fn usage(msg: impl fmt::Display) -> Error {
    Error::InvalidArgument(msg.to_string())
}

/// Split a one-string query at top-level whitespace, keeping parenthesized
/// groups and normal words together.
pub fn split_query(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut words = 0i32;
    let mut prev: Option<char> = None;
    let mut prev_open = false;
    for c in s.chars() {
        let mut opened = false;
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            ':' => {
                let opens = match prev {
                    None => true,
                    Some(':') => prev_open,
                    Some(p) => p.is_whitespace() || "([{,+-*/^=".contains(p),
                };
                if opens {
                    words += 1;
                    opened = true;
                } else {
                    words -= 1;
                }
            }
            _ => {}
        }
        if c.is_whitespace() && depth <= 0 && words <= 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(c);
        }
        prev_open = opened;
        prev = Some(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parse query words such as `["bracket", "L", "L"]`.
pub fn parse_query<S: AsRef<str>>(args: &[S]) -> Result<Query> {
    let args: Vec<&str> = args.iter().map(|s| s.as_ref()).collect();
    let Some((&head, rest)) = args.split_first() else {
        return Err(usage("empty query"));
    };
    let arity = |n: usize| -> Result<()> {
        if rest.len() == n {
            Ok(())
        } else {
            Err(usage(format!(
                "`{head}` takes {n} argument(s), got {}",
                rest.len()
            )))
        }
    };
    Ok(match head {
        "bracket" => {
            arity(2)?;
            Query::Bracket(Operand::parse(rest[0])?, Operand::parse(rest[1])?)
        }
        "nproduct" => {
            arity(3)?;
            let n = rest[1]
                .parse::<i64>()
                .map_err(|_| usage(format!("`{}` is not an integer", rest[1])))?;
            Query::NProduct(Operand::parse(rest[0])?, n, Operand::parse(rest[2])?)
        }
        "ope" => {
            arity(2)?;
            Query::Ope(Operand::parse(rest[0])?, Operand::parse(rest[1])?)
        }
        "modes" => {
            arity(2)?;
            Query::Modes(rest[0].to_string(), rest[1].to_string())
        }
        "check" => {
            arity(1)?;
            Query::Check(match rest[0] {
                "skew" => CheckKind::Skew,
                "jacobi" => CheckKind::Jacobi,
                "borcherds" => CheckKind::Borcherds,
                "mode-jacobi" => CheckKind::ModeJacobi,
                other => {
                    return Err(usage(format!(
                        "unknown check `{other}`; expected skew, jacobi, borcherds or mode-jacobi"
                    )))
                }
            })
        }
        "weight" => {
            arity(1)?;
            Query::Weight(Operand::parse(rest[0])?)
        }
        "primary" => match rest.len() {
            1 => Query::Primary(Operand::parse(rest[0])?, None),
            2 => Query::Primary(Operand::parse(rest[0])?, Some(Operand::parse(rest[1])?)),
            n => return Err(usage(format!("`primary` takes 1 or 2 arguments, got {n}"))),
        },
        "show" => {
            arity(0)?;
            Query::Show
        }
        other => {
            return Err(usage(format!(
                "unknown query `{other}`; expected bracket, nproduct, ope, modes, check, weight, primary or show"
            )))
        }
    })
}

pub const BUILTINS: [&str; 7] = [
    "virasoro",
    "neveu_schwarz",
    "ns",
    "free_fermion",
    "free_boson",
    "sl2",
    "superfermion:E,O",
];

/// Built-in presentations by name.
pub fn builtin(name: &str) -> Result<AlgebraPresentation> {
    let s = |n: i64| Scalar::from_int(n);
    match name {
        "virasoro" => Ok(virasoro()),
        "neveu_schwarz" | "ns" => Ok(neveu_schwarz()),
        "free_fermion" => {
            let basis = [
                ("phi1".to_string(), Parity::Odd),
                ("phi2".to_string(), Parity::Odd),
            ];
            free_fermion(&basis, &BilinearForm::identity(2))
        }
        "free_boson" => free_boson(
            &[("a".to_string(), Parity::Even)],
            &BilinearForm::identity(1),
        ),
        "sl2" => {
            let form = BilinearForm(vec![
                vec![s(0), s(0), s(1)],
                vec![s(0), s(2), s(0)],
                vec![s(1), s(0), s(0)],
            ]);
            current("sl2", &LieTable::sl2(), &form)
        }
        _ => {
            if let Some(dims) = name.strip_prefix("superfermion:") {
                let parsed: Option<Vec<usize>> =
                    dims.split(',').map(|d| d.trim().parse().ok()).collect();
                if let Some([e, o]) = parsed.as_deref() {
                    return superfermion(*e, *o);
                }
            }
            Err(usage(format!(
                "unknown builtin `{name}`; available: {}",
                BUILTINS.join(", ")
            )))
        }
    }
}

/// Names that are not declared but still resolve in vertex expressions:
/// `L` is the free-fermion Virasoro element when no symbol is called `L`.
fn extra_names<'a>(
    va: &'a VertexAlgebra<'a>,
) -> impl Fn(&str) -> Option<Result<VertexElement>> + 'a {
    move |n: &str| (n == "L").then(|| superfermion_virasoro(va))
}

fn to_vertex(va: &VertexAlgebra, op: &Operand) -> Result<VertexElement> {
    eval_vertex(&op.expr, va, &extra_names(va))
}

fn envelope(query: &str, result: Value) -> String {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "query": query,
        "result": result,
    });
    serde_json::to_string_pretty(&v).expect("json")
}

fn conformal_json(alg: &AlgebraPresentation, x: &ConformalElement) -> Value {
    Value::Array(
        x.iter()
            .map(|(a, c)| {
                json!({
                    "generator": alg.symbol(a.sym).name,
                    "d": a.d,
                    "coefficient": c.to_string(),
                })
            })
            .collect(),
    )
}

fn guard(p_degree: Option<u32>, limit: u32) -> Result<()> {
    match p_degree {
        Some(d) if d > limit => Err(Error::DegreeGuard { limit, degree: d }),
        _ => Ok(()),
    }
}

fn no_format(query: &str, f: Format) -> Error {
    let name = match f {
        Format::Text => "text",
        Format::Latex => "latex",
        Format::Json => "json",
        Format::Ope => "ope",
    };
    usage(format!("format `{name}` is not available for `{query}`"))
}

fn ope_output(va: &VertexAlgebra, x: &Operand, y: &Operand, format: Format) -> Result<String> {
    let (u, v) = (to_vertex(va, x)?, to_vertex(va, y)?);
    Ok(match format {
        Format::Text | Format::Ope => va.render_ope(&x.label(), &y.label(), &u, &v)?,
        Format::Latex => va.latex_ope(&x.label(), &y.label(), &u, &v)?,
        Format::Json => {
            let prods = va.j_products(&u, &v)?;
            envelope(
                "ope",
                json!({
                    "lhs": x.text,
                    "rhs": y.text,
                    "products": prods.iter().map(|(j, c)| json!({
                        "j": j,
                        "value": va.to_json(c),
                    })).collect::<Vec<_>>(),
                }),
            )
        }
    })
}

fn report_outcome(report: CheckReport, format: Format) -> Result<Outcome> {
    let output = match format {
        Format::Text => report.to_string(),
        Format::Json => envelope("check", report.to_json()),
        f => return Err(no_format("check", f)),
    };
    let passed = report.passed();
    Ok(Outcome {
        output,
        code: if passed { 0 } else { 1 },
        diagnostic: (!passed).then(|| format!("{} check failed", report.check)),
    })
}

/// Resolve `L_{-2}`, `G_{1/2}`, `L_m` (weight indexing) or `L_(n)`
/// (shifted indexing).
pub fn parse_mode(alg: &AlgebraPresentation, text: &str) -> Result<ModeSymbol> {
    let mut gens: Vec<_> = alg.generators().collect();
    gens.sort_by_key(|g| std::cmp::Reverse(alg.symbol(*g).name.len()));
    for g in gens {
        let prefix = format!("{}_", alg.symbol(g).name);
        let Some(rest) = text.strip_prefix(&prefix) else {
            continue;
        };
        let (inner, indexing) =
            if let Some(i) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                (i, Indexing::Shifted)
            } else if let Some(i) = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                (i, Indexing::Weight)
            } else {
                (rest, Indexing::Weight)
            };
        let index = eval_scalar(&parse_expr(inner)?, alg, true)?;
        return ModeSymbol::new(alg, g, index, indexing);
    }
    Err(usage(format!(
        "`{text}` is not a mode of a declared generator"
    )))
}

/// Evaluate a query against a presentation.
pub fn run_query(q: &Query, alg: &AlgebraPresentation, opts: &Options) -> Result<Outcome> {
    let va = VertexAlgebra::with_max_degree(alg, opts.max_degree);
    let format = opts.format;
    let text = match q {
        Query::Bracket(x, y) => {
            if format == Format::Ope {
                return Ok(Outcome::ok(ope_output(&va, x, y, format)?));
            }
            // linear operands stay in the conformal layer, centrals symbolic
            if let (Ok(u), Ok(v)) = (eval_conformal(&x.expr, alg), eval_conformal(&y.expr, alg)) {
                let p = alg.lambda_bracket(&u, &v)?;
                guard(p.degree(), opts.max_degree)?;
                match format {
                    Format::Text => alg.render_bracket(&p),
                    Format::Latex => alg.latex_bracket(&p),
                    _ => envelope(
                        "bracket",
                        json!({
                            "layer": "conformal",
                            "vars": [LAMBDA],
                            "terms": p.terms().map(|(e, c)| json!({
                                "exponents": e,
                                "coefficient": conformal_json(alg, c),
                            })).collect::<Vec<_>>(),
                        }),
                    ),
                }
            } else {
                let (u, v) = (to_vertex(&va, x)?, to_vertex(&va, y)?);
                let p: BracketPoly<VertexElement> = va.bracket(&u, &v)?;
                match format {
                    Format::Text => va.render_bracket(&p),
                    Format::Latex => va.latex_bracket(&p),
                    _ => envelope(
                        "bracket",
                        json!({
                            "layer": "vertex",
                            "vars": [LAMBDA],
                            "terms": p.terms().map(|(e, c)| json!({
                                "exponents": e,
                                "coefficient": va.to_json(c),
                            })).collect::<Vec<_>>(),
                        }),
                    ),
                }
            }
        }
        Query::NProduct(x, n, y) => {
            let r = va.nproduct(&to_vertex(&va, x)?, *n, &to_vertex(&va, y)?)?;
            match format {
                Format::Text => va.render(&r),
                Format::Latex => va.latex(&r),
                Format::Json => envelope("nproduct", va.to_json(&r)),
                f => return Err(no_format("nproduct", f)),
            }
        }
        Query::Ope(x, y) => ope_output(&va, x, y, format)?,
        Query::Modes(a, b) => {
            let (ma, mb) = (parse_mode(alg, a)?, parse_mode(alg, b)?);
            let r = commute(alg, &ma, &mb)?;
            match format {
                Format::Text => r.render(alg),
                Format::Latex => r.latex(alg),
                Format::Json => envelope("modes", r.to_json(alg)),
                f => return Err(no_format("modes", f)),
            }
        }
        Query::Check(kind) => {
            let report = match kind {
                CheckKind::Skew => check_skew(alg),
                CheckKind::Jacobi => check_jacobi(alg),
                CheckKind::Borcherds => borcherds_sweep(&va, opts.range.unwrap_or(3))?,
                CheckKind::ModeJacobi => verify_mode_jacobi(alg, opts.range.unwrap_or(2))?,
            };
            return report_outcome(report, format);
        }
        Query::Weight(x) => {
            let tbl = WeightTable::from_presentation(alg)?;
            let r = weight(&to_vertex(&va, x)?, &tbl)?;
            match format {
                Format::Text | Format::Latex => match r {
                    WeightResult::Weight(w) => w.to_string(),
                    WeightResult::Inhomogeneous => "inhomogeneous".into(),
                    WeightResult::Zero => "zero".into(),
                },
                Format::Json => envelope(
                    "weight",
                    match r {
                        WeightResult::Weight(w) => {
                            json!({"kind": "weight", "weight": w.to_string()})
                        }
                        WeightResult::Inhomogeneous => json!({"kind": "inhomogeneous"}),
                        WeightResult::Zero => json!({"kind": "zero"}),
                    },
                ),
                f => return Err(no_format("weight", f)),
            }
        }
        Query::Primary(a, l) => {
            let x = to_vertex(&va, a)?;
            let l = match l {
                Some(l) => to_vertex(&va, l)?,
                None => {
                    let names = extra_names(&va);
                    match alg.lookup("L") {
                        Some(_) => va.generator("L")?,
                        None => names("L").expect("L")?,
                    }
                }
            };
            let r = primary_check(&va, &x, &l)?;
            match format {
                Format::Text | Format::Latex => match &r {
                    PrimaryClass::Primary(d) => format!("primary, weight {d}"),
                    PrimaryClass::Eigen(d, tail) => {
                        format!("eigen, weight {d}, tail {}", va.render_bracket(tail))
                    }
                    PrimaryClass::Neither => "neither".into(),
                },
                Format::Json => envelope(
                    "primary",
                    match &r {
                        PrimaryClass::Primary(d) => {
                            json!({"kind": "primary", "weight": d.to_string()})
                        }
                        PrimaryClass::Eigen(d, tail) => json!({
                            "kind": "eigen",
                            "weight": d.to_string(),
                            "tail": va.render_bracket(tail),
                        }),
                        PrimaryClass::Neither => json!({"kind": "neither"}),
                    },
                ),
                f => return Err(no_format("primary", f)),
            }
        }
        Query::Show => match format {
            Format::Text => render_definition(alg).trim_end().to_string(),
            Format::Json => envelope("show", presentation_json(alg)),
            f => return Err(no_format("show", f)),
        },
    };
    Ok(Outcome::ok(text))
}

fn presentation_json(alg: &AlgebraPresentation) -> Value {
    use crate::lie_conformal::SymbolKind;
    json!({
        "name": alg.name,
        "params": alg.params(),
        "symbols": alg.symbols().iter().map(|s| json!({
            "name": s.name,
            "parity": s.parity.to_string(),
            "weight": s.weight.as_ref().map(|w| w.to_string()),
            "central": s.is_central(),
            "value": match &s.kind {
                SymbolKind::Central { value: Some(v) } => Some(v.to_string()),
                _ => None,
            },
        })).collect::<Vec<_>>(),
        "brackets": alg.table().iter().map(|((a, b), p)| json!({
            "pair": [alg.symbol(*a).name, alg.symbol(*b).name],
            "value": alg.render_bracket(p),
        })).collect::<Vec<_>>(),
    })
}
