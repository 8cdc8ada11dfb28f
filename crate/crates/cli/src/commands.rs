use std::fmt;
use std::path::Path;

use lidstone::basis;
use lidstone::expand::{self, PartialSum, ResidualOptions};
use lidstone::expr::{parse_expression, Expr};
use lidstone::families::{build_example, default_weights, ExampleKind, ExampleSpec};
use lidstone::growth::{
    self, estimate_directional_type, geometric_grid, polya_threshold, GrowthParams, PipelineOptions, SupNormOptions,
    Verdict,
};
use lidstone::json::{BasisJson, DataSetJson, FrameJson, PolyJson};
use lidstone::rational::{self, Rational};
use lidstone::source::{ExprFunction, Value};
use lidstone::verify::{verify_data_property, Predicate, VerifyOptions};
use lidstone::{AffinePointFrame, ComplexFrame, Error, MultiIndex, MultiPoly};
use serde_json::{json, Value as Json};

use crate::render::{key_values, table};
use crate::{BasisArgs, ExpandArgs, FunctionArgs, GrowthArgs, PredicateArg, ReconstructArgs, ThresholdArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Math(e) if e.is_mathematical() => 2,
            CliError::Math(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Math(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

pub struct Output {
    pub json: Json,
    pub table: String,
    pub warnings: Vec<String>,
    pub success: bool,
}

impl Output {
    fn ok(json: Json, table: String) -> Self {
        Output { json, table, warnings: Vec::new(), success: true }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_file(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn index_text(t: &MultiIndex) -> String {
    t.to_string()
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Exact(r) => rational::to_text(r),
        Value::Numeric(z) if z.im == 0.0 => format!("{:.6e}", z.re),
        Value::Numeric(z) => format!("{:.6e}{:+.6e}i", z.re, z.im),
    }
}

pub fn basis(args: &BasisArgs) -> CliResult<Output> {
    let t = MultiIndex::new(args.t.clone());
    let cap = args.degree_cap.unwrap_or_else(|| basis::default_degree_cap(&t));
    let element = basis::lidstone_basis(args.dim, &t, args.i, cap)?;
    let mut json = serde_json::to_value(BasisJson::from(&element)).expect("serializable");
    json["degree_cap"] = json!(cap);
    let table = key_values(&[
        ("t", index_text(&element.t)),
        ("i", element.i.to_string()),
        ("degree", element.degree.to_string()),
        ("polynomial", element.poly.to_string()),
    ]);
    Ok(Output::ok(json, table))
}

pub fn reconstruct(args: &ReconstructArgs) -> CliResult<Output> {
    let data: DataSetJson = read_json(&args.data)?;
    let data = data.to_dataset()?;
    let bound = args.degree_bound.unwrap_or(data.max_norm() + data.dim() as u32 + 1);
    let p = basis::reconstruct(&data, bound)?;
    let json = json!({
        "degree_bound": bound,
        "polynomial": PolyJson::from(&p),
    });
    let table = key_values(&[("degree bound", bound.to_string()), ("polynomial", p.to_string())]);
    Ok(Output::ok(json, table))
}

enum Function {
    /// Expression with an exact frame.
    Rational(Expr, AffinePointFrame),
    /// Expression with complex frame points (growth diagnostics only).
    Complex(Expr, ComplexFrame),
}

fn parse_rationals(values: &Option<Vec<String>>, n: usize, default: i64, name: &str) -> CliResult<Vec<Rational>> {
    match values {
        None => Ok(vec![rational::int(default); n]),
        Some(v) if v.len() == n => v.iter().map(|s| rational::parse(s).map_err(CliError::from)).collect(),
        Some(v) => Err(CliError::Usage(format!("--{name} needs {n} values, got {}", v.len()))),
    }
}

fn resolve(args: &FunctionArgs) -> CliResult<Function> {
    let n = args.dim;
    if n == 0 {
        return Err(CliError::Usage("dimension must be at least 1".into()));
    }
    if let Some(k) = args.example {
        let kind = ExampleKind::from_number(k)?;
        let g = if args.g.is_empty() {
            default_weights(n)
        } else {
            args.g
                .iter()
                .enumerate()
                .map(|(k, text)| {
                    let i = k + 1;
                    let vars = if i < n { n - i } else { 1 };
                    parse_expression(text)?
                        .to_poly(vars)
                        .ok_or_else(|| CliError::Usage(format!("g_{i} must be a polynomial in x1..x{vars}")))
                })
                .collect::<CliResult<Vec<MultiPoly>>>()?
        };
        let spec = ExampleSpec {
            kind,
            n,
            a: parse_rationals(&args.a, n, 0, "a")?,
            b: parse_rationals(&args.b, n, 1, "b")?,
            g,
        };
        let example = build_example(&spec)?;
        if args.frame.is_some() {
            return Err(CliError::Usage("examples define their own frame; drop --frame".into()));
        }
        return Ok(Function::Rational(example.expr, example.frame));
    }
    let text = match (&args.expr, &args.expr_file) {
        (Some(t), None) => t.clone(),
        (None, Some(path)) => read_file(path)?,
        _ => return Err(CliError::Usage("give one of --expr, --expr-file or --example".into())),
    };
    let expr = parse_expression(text.trim())?;
    if expr.max_var() > n {
        return Err(CliError::Usage(format!("expression uses x{} but n = {n}", expr.max_var())));
    }
    match &args.frame {
        None => Ok(Function::Rational(expr, AffinePointFrame::canonical(n))),
        Some(path) => {
            let frame: FrameJson = read_json(path)?;
            if frame.is_rational() {
                let f = frame.to_rational()?;
                if f.dim() != n {
                    return Err(CliError::Usage(format!("frame has dimension {}, expected {n}", f.dim())));
                }
                Ok(Function::Rational(expr, f))
            } else {
                let f = frame.to_complex()?;
                if f.dim() != n {
                    return Err(CliError::Usage(format!("frame has dimension {}, expected {n}", f.dim())));
                }
                Ok(Function::Complex(expr, f))
            }
        }
    }
}

fn rational_function(args: &FunctionArgs) -> CliResult<(Expr, AffinePointFrame)> {
    match resolve(args)? {
        Function::Rational(e, f) => Ok((e, f)),
        Function::Complex(..) => Err(CliError::Usage("this command needs rational frame coordinates".into())),
    }
}

pub fn verify(args: &VerifyArgs) -> CliResult<Output> {
    let (expr, frame) = rational_function(&args.function)?;
    if !(args.tol >= 0.0) {
        return Err(CliError::Usage("--tol must be nonnegative".into()));
    }
    let options = VerifyOptions {
        max_norm: args.max_norm,
        predicate: match args.predicate {
            PredicateArg::Zero => Predicate::Zero,
            PredicateArg::Integer => Predicate::Integer,
        },
        tol: args.tol,
        restrict_to_index_set: !args.all_even,
    };
    let report = verify_data_property(&expr, &frame, &options)?;
    let failures = report.failures().count();
    let json = json!({
        "expression": expr.to_string(),
        "frame": FrameJson::from(&frame),
        "options": report.options,
        "all_pass": report.all_pass,
        "failures": failures,
        "entries": report.entries,
    });
    let rows: Vec<Vec<String>> = report
        .entries
        .iter()
        .map(|e| {
            vec![
                index_text(&e.t),
                e.i.to_string(),
                value_text(&e.value),
                if e.exact { "exact" } else { "numeric" }.into(),
                if e.admissible { "yes" } else { "no" }.into(),
                if e.pass { "PASS" } else { "FAIL" }.into(),
            ]
        })
        .collect();
    let mut text = table(&["t", "i", "value", "mode", "in index set", "result"], &rows);
    text += &format!(
        "{}: {} of {} checks failed\n",
        if report.all_pass { "PASS" } else { "FAIL" },
        failures,
        report.entries.len()
    );
    Ok(Output { json, table: text, warnings: Vec::new(), success: report.all_pass })
}

fn r_grid(args: &crate::RadiusArgs) -> CliResult<Vec<f64>> {
    Ok(geometric_grid(args.r_min, args.r_max, args.r_count)?)
}

fn sup_options(args: &crate::RadiusArgs) -> CliResult<SupNormOptions> {
    if args.grid < 8 {
        return Err(CliError::Usage("--grid must be at least 8".into()));
    }
    Ok(SupNormOptions { grid: args.grid, ..SupNormOptions::default() })
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::Violated => "violated",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn growth(args: &GrowthArgs) -> CliResult<Output> {
    if !(args.eta > 0.0 && args.eta < 1.0) {
        return Err(CliError::Usage("--eta must lie in (0, 1)".into()));
    }
    let options = PipelineOptions {
        r_grid: r_grid(&args.radii)?,
        sup_norm: sup_options(&args.radii)?,
        default_eta: args.eta,
        tol: args.tol,
    };
    match resolve(&args.function)? {
        Function::Rational(expr, frame) => {
            let n = frame.dim();
            let f = ExprFunction::new(expr.clone(), n)?;
            let poly = expr.to_poly(n);
            let fixture = growth::Fixture { eval: &f, derivatives: &f, polynomial: poly.as_ref() };
            let report = growth::theorem_pipeline(&fixture, &frame, &options)?;
            let gc = &report.growth_condition;
            let tc = &report.type_condition;
            let json = json!({
                "expression": expr.to_string(),
                "frame": FrameJson::from(&frame),
                "r_grid": gc.radii,
                "supnorm_estimates": gc.sup_norms.iter().map(|s| s.value).collect::<Vec<_>>(),
                "order_estimate": tc.directions.iter().map(|d| d.order_estimate).fold(0.0, f64::max),
                "type_estimates": tc.directions.iter().map(|d| d.type_estimate).collect::<Vec<_>>(),
                "condition_1_1": { "verdict": gc.verdict, "margin": finite_or_null(gc.margin) },
                "condition_1_3": { "verdict": tc.verdict, "boundary": tc.boundary },
                "polya_T0": report.t0,
                "eta": report.params.eta,
                "A": report.params.a,
                "exceptions": report.exceptions,
                "certificate": report.certificate,
                "hypotheses_hold": report.hypotheses_hold,
                "options": report.options,
                "estimates_are_numeric": true,
            });
            let mut pairs = vec![
                ("growth condition", format!("{} (margin {:.4})", verdict_text(gc.verdict), gc.margin)),
                ("type condition", verdict_text(tc.verdict).to_string()),
            ];
            for (k, d) in tc.directions.iter().enumerate() {
                pairs.push(("", format!("direction s_{} - s_0: type {:.4}, order {:.3}", k + 1, d.type_estimate, d.order_estimate)));
            }
            pairs.push(("threshold T0", report.t0.to_string()));
            pairs.push(("exceptions below T0", report.exceptions.len().to_string()));
            if let Some(c) = &report.certificate {
                pairs.push((
                    "degree certificate",
                    format!(
                        "{} (degree {}, bound {})",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.degree.map_or("none".into(), |d| d.to_string()),
                        c.bound
                    ),
                ));
            }
            let mut warnings = Vec::new();
            if tc.boundary {
                warnings.push("a directional type is within 5% of pi".into());
            }
            Ok(Output { json, table: key_values(&pairs), warnings, success: true })
        }
        Function::Complex(expr, frame) => {
            let n = frame.dim();
            let f = ExprFunction::new(expr.clone(), n)?;
            let gc = growth::check_growth_condition(&f, frame.max_norm(), &options.r_grid, &options.sup_norm)?;
            let dirs = frame
                .directions()
                .iter()
                .map(|w| estimate_directional_type(&f, w, &options.r_grid, &options.sup_norm))
                .collect::<Result<Vec<_>, _>>()?;
            let json = json!({
                "expression": expr.to_string(),
                "frame": frame,
                "r_grid": gc.radii,
                "supnorm_estimates": gc.sup_norms.iter().map(|s| s.value).collect::<Vec<_>>(),
                "order_estimate": dirs.iter().map(|d| d.order_estimate).fold(0.0, f64::max),
                "type_estimates": dirs.iter().map(|d| d.type_estimate).collect::<Vec<_>>(),
                "condition_1_1": { "verdict": gc.verdict, "margin": finite_or_null(gc.margin) },
                "condition_1_3": { "verdict": type_verdict(&dirs) },
                "polya_T0": Json::Null,
                "options": options,
                "estimates_are_numeric": true,
            });
            let pairs = vec![
                ("growth condition", verdict_text(gc.verdict).to_string()),
                ("type condition", verdict_text(type_verdict(&dirs)).to_string()),
            ];
            Ok(Output::ok(json, key_values(&pairs)))
        }
    }
}

fn type_verdict(dirs: &[growth::DirectionalType]) -> Verdict {
    let pi = std::f64::consts::PI;
    if dirs.iter().any(|d| d.type_estimate > 1.05 * pi) {
        Verdict::Violated
    } else if dirs.iter().any(|d| d.type_estimate >= 0.95 * pi) {
        Verdict::Inconclusive
    } else {
        Verdict::Satisfied
    }
}

fn finite_or_null(x: f64) -> Json {
    if x.is_finite() {
        json!(x)
    } else {
        Json::Null
    }
}

pub fn expand(args: &ExpandArgs, seed: u64) -> CliResult<Output> {
    let (expr, frame) = rational_function(&args.function)?;
    if !frame.is_canonical() {
        return Err(CliError::Usage("expansion uses the canonical points; drop --frame".into()));
    }
    let n = frame.dim();
    let f = ExprFunction::new(expr.clone(), n)?;
    let expansion = expand::expand(&f, args.truncation)?;
    let residual_options = ResidualOptions { grid: args.residual_grid, samples: args.samples, seed };
    let residual = expand::residual(&f, &expansion, &residual_options)?;

    let mut warnings = Vec::new();
    let sup = SupNormOptions::default();
    for (k, w) in frame.to_complex().directions().iter().enumerate() {
        let d = estimate_directional_type(&f, w, &growth::default_r_grid(), &sup)?;
        if d.type_estimate >= 0.95 * std::f64::consts::PI {
            warnings.push(format!(
                "type not < pi in direction s_{} - s_0 (estimate {:.4}); the expansion need not converge to f",
                k + 1,
                d.type_estimate
            ));
        }
    }

    let partial = match &expansion.partial_sum {
        PartialSum::Exact(p) => json!({ "exact": true, "polynomial": PolyJson::from(p) }),
        PartialSum::Numeric(p) => json!({
            "exact": false,
            "terms": p.terms().iter().map(|(e, c)| json!({ "exp": e, "coef": [c.re, c.im] })).collect::<Vec<_>>(),
        }),
    };
    let terms: Vec<Json> = expansion
        .terms
        .iter()
        .map(|t| {
            json!({
                "t": t.t.as_slice(),
                "i": t.i,
                "coefficient": t.coefficient,
                "basis": PolyJson::from(&t.basis),
            })
        })
        .collect();
    let json = json!({
        "expression": expr.to_string(),
        "n": n,
        "truncation": args.truncation,
        "terms": terms,
        "partial_sum": partial,
        "residual": residual,
        "warnings": warnings,
    });
    let rows: Vec<Vec<String>> = expansion
        .nonzero_terms()
        .map(|t| vec![index_text(&t.t), t.i.to_string(), value_text(&t.coefficient), t.basis.to_string()])
        .collect();
    let mut text = table(&["t", "i", "coefficient", "basis polynomial"], &rows);
    text += &key_values(&[
        ("terms", format!("{} ({} nonzero)", expansion.terms.len(), rows.len())),
        ("partial sum", match &expansion.partial_sum {
            PartialSum::Exact(p) => p.to_string(),
            PartialSum::Numeric(_) => "numeric (see JSON)".into(),
        }),
        ("residual on [0,1]^n", format!("{:.3e} (max |f| {:.3e})", residual.grid_max, residual.grid_function_max)),
        ("residual in polydisc", format!("{:.3e}", residual.polydisc_max)),
    ]);
    Ok(Output { json, table: text, warnings, success: true })
}

pub fn threshold(args: &ThresholdArgs) -> CliResult<Output> {
    let params = GrowthParams::new(args.a, args.eta)?;
    let t0 = polya_threshold(&params);
    let json = json!({
        "A": params.a,
        "eta": params.eta,
        "T0": t0,
        "ln_bound_at_T0": growth::ln_polya_bound(&params, t0),
        "window_checked": [t0, 10 * t0],
    });
    let table = key_values(&[("A", params.a.to_string()), ("eta", params.eta.to_string()), ("T0", t0.to_string())]);
    Ok(Output::ok(json, table))
}

