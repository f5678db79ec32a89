use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pavforge_core::error::Error;
use pavforge_core::extension::{extensions_over, limsup_max_estimate, local_degree_sum, newton_power_sums, orbit_is_transitive, ExtensionProblem};
use pavforge_core::fields::parse::parse_qpoly;
use pavforge_core::fields::{parse_element, parse_field, Element, FieldDescriptor};
use pavforge_core::linalg::Matrix;
use pavforge_core::pav::sample::Sampler;
use pavforge_core::pav::{check_pav_axioms, Pav, PavKind};
use pavforge_core::pnorm::{hadamard_check, PseudoNorm};
use pavforge_core::reduction::check_diagram;
use pavforge_core::scalar::{fmt_rational, int, parse_rational, Rational};
use pavforge_core::spaces::{
    check_convergence, density_point, density_target, disc_density_sequence, epsilon_of, point_from_branch, power_flow, separate,
    specification, BranchCoords, FlowExp, Param, SpaceModel,
};
use pavforge_core::suites::{density_functions, run_suite, Status, SuiteOptions, DENSITY_LADDER};

#[derive(Parser, Debug)]
#[command(name = "pavforge", version, about = "Pseudo-absolute values over exact fields")]
struct Cli {
    /// Tolerance for approximate comparisons.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_f64)]
    tol: f64,
    /// Bits for embedding enclosures.
    #[arg(long, global = true, env = "PAVFORGE_PRECISION", default_value_t = 50)]
    precision: u32,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("'{}' is not a positive number", s)),
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PnOp {
    Eval,
    Dual,
    Restrict,
    Quotient,
    Tensor,
    Exterior,
    Det,
    Hadamard,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate |f|_v.
    Eval {
        #[arg(long)]
        field: String,
        #[arg(long)]
        pav: String,
        #[arg(long)]
        expr: String,
    },
    /// Check the PAV axioms on seeded sample pairs.
    Axioms {
        #[arg(long)]
        field: String,
        #[arg(long)]
        pav: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// All extensions of a PAV on Q or Q(T) to a constant extension.
    Extend {
        #[arg(long)]
        base: String,
        #[arg(long)]
        ext: String,
        /// Also check that the Galois group acts transitively.
        #[arg(long)]
        galois: bool,
    },
    /// The weighted sum of local degrees over all extensions.
    DegreeSum {
        #[arg(long)]
        base: String,
        #[arg(long)]
        ext: String,
    },
    /// Power sums of a monic polynomial in x and the limsup estimate of its largest root.
    Newton {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        base: String,
        /// Field of the base PAV.
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
    /// Pseudo-norm operations.
    Pnorm {
        #[arg(long)]
        field: String,
        #[arg(long)]
        norm: String,
        #[arg(long, value_enum)]
        op: PnOp,
        /// JSON list of entries, for eval.
        #[arg(long)]
        vector: Option<String>,
        /// JSON list of vectors, for hadamard.
        #[arg(long)]
        vectors: Option<String>,
        /// JSON list of generator columns, for restrict and quotient.
        #[arg(long)]
        gens: Option<String>,
        /// Second norm, for tensor.
        #[arg(long)]
        other: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Find f and t with |f|_1 < t < |f|_2 (or the reverse).
    Separate {
        /// Field of PAV descriptors; ignored with --model.
        #[arg(long, default_value = "Q")]
        field: String,
        /// `mq` or `disc`; the points are then branch coordinates.
        #[arg(long)]
        model: Option<String>,
        /// Constants and radius of the disc model.
        #[arg(long, default_value = "Q")]
        base: String,
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// The power flow x^s, with eps and the finiteness ring of the result.
    Flow {
        #[arg(long)]
        field: String,
        #[arg(long)]
        pav: String,
        #[arg(long)]
        s: String,
    },
    /// Density sequence towards exp(-c ord_z) in a disc model.
    Density {
        #[arg(long)]
        z: String,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value = "Q")]
        base: String,
        #[arg(long, default_value = "3")]
        radius: String,
        /// Emit the convergence table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Center and Berkovich reduction of a PAV on F(T) over its restriction to F.
    Reduce {
        #[arg(long, default_value = "Q(T)")]
        field: String,
        #[arg(long)]
        pav: String,
        #[arg(long)]
        base: String,
    },
    /// Run a named verification suite.
    Suite { name: String },
}

enum Outcome {
    Pass(Value),
    Fail(Value),
    Undecided(Value),
    Text(String, bool),
}

fn json_arg(s: &str) -> Result<Value, Error> {
    serde_json::from_str(s).map_err(|e| Error::SyntaxError { pos: e.column().saturating_sub(1), msg: format!("invalid JSON: {}", e) })
}

fn field_arg(s: &str) -> Result<FieldDescriptor, Error> {
    parse_field(s)
}

fn pav_arg(field: &FieldDescriptor, s: &str) -> Result<Pav, Error> {
    Pav::from_json(field, &json_arg(s)?)
}

fn rational_arg(s: &str) -> Result<Rational, Error> {
    parse_rational(s).ok_or_else(|| Error::SyntaxError { pos: 0, msg: format!("'{}' is not a rational", s) })
}

// a zero denominator in --expr input is a malformed expression
fn expr_arg(s: &str, field: &FieldDescriptor) -> Result<Element, Error> {
    parse_element(s, field).map_err(|e| match e {
        Error::DivisionByZero => Error::SyntaxError { pos: s.rfind('/').unwrap_or(0), msg: "denominator is zero".into() },
        e => e,
    })
}

fn vector_of(field: &FieldDescriptor, v: &Value) -> Result<Vec<Element>, Error> {
    let items = v.as_array().ok_or_else(|| Error::Json("a vector is a JSON list".into()))?;
    items
        .iter()
        .map(|x| match x {
            Value::String(s) => expr_arg(s, field),
            Value::Number(n) => expr_arg(&n.to_string(), field),
            _ => Err(Error::Json("vector entries are strings or numbers".into())),
        })
        .collect()
}

fn vectors_of(field: &FieldDescriptor, v: &Value) -> Result<Vec<Vec<Element>>, Error> {
    let items = v.as_array().ok_or_else(|| Error::Json("expected a JSON list of vectors".into()))?;
    items.iter().map(|x| vector_of(field, x)).collect()
}

fn need<'a>(o: &'a Option<String>, flag: &str) -> Result<&'a str, Error> {
    o.as_deref().ok_or_else(|| Error::Json(format!("--{} is required for this operation", flag)))
}

/// The field `Q` or `Q(T)` under a constant extension `L` or `L(T)`.
fn base_field_of(ext: &FieldDescriptor) -> Result<FieldDescriptor, Error> {
    match ext {
        FieldDescriptor::FunctionField { var, .. } => FieldDescriptor::function_field(FieldDescriptor::Rationals, var),
        _ => Ok(FieldDescriptor::Rationals),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Eval { field, pav, expr } => {
            let k = field_arg(field)?;
            let v = pav_arg(&k, pav)?;
            let f = expr_arg(expr, &k)?;
            let value = v.eval(&f)?;
            let mut out = json!({"value": value.to_json()});
            if let (PavKind::Arch { emb, .. }, Some(nf), Some(x)) = (v.kind(), k.number_field(), f.as_nf()) {
                let b = nf.embed_eval(x.poly(), *emb, cli.precision)?;
                out["embedding"] = json!({
                    "re": fmt_rational(&b.center.re),
                    "im": fmt_rational(&b.center.im),
                    "radius": fmt_rational(&b.rad),
                    "bits": cli.precision,
                });
            }
            Ok(Outcome::Pass(out))
        }
        Cmd::Axioms { field, pav, samples, seed } => {
            let k = field_arg(field)?;
            let v = pav_arg(&k, pav)?;
            let pairs = Sampler::new(&k, *seed).take_pairs(*samples);
            let r = check_pav_axioms(&v, &pairs)?;
            let out = json!({
                "samples": r.samples,
                "warnings": r.warnings,
                "violations": r.violations.iter().map(|x| json!({"axiom": x.axiom, "witness": x.witness, "values": x.values})).collect::<Vec<_>>(),
            });
            Ok(if r.passed() { Outcome::Pass(out) } else { Outcome::Fail(out) })
        }
        Cmd::Extend { base, ext, galois } => {
            let l = field_arg(ext)?;
            let v = pav_arg(&base_field_of(&l)?, base)?;
            let prob = ExtensionProblem::new(v, l)?;
            let exts = extensions_over(&prob)?;
            let mut out = json!({
                "degree": prob.degree(),
                "extensions": exts.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            });
            if *galois {
                let r = orbit_is_transitive(&prob)?;
                let ok = r.transitive;
                out["orbit"] = r.to_json();
                if !ok {
                    return Ok(Outcome::Fail(out));
                }
            }
            Ok(Outcome::Pass(out))
        }
        Cmd::DegreeSum { base, ext } => {
            let l = field_arg(ext)?;
            let v = pav_arg(&base_field_of(&l)?, base)?;
            let s = local_degree_sum(&ExtensionProblem::new(v, l)?)?;
            let out = json!({"sum": fmt_rational(&s)});
            Ok(if s == int(1) { Outcome::Pass(out) } else { Outcome::Fail(out) })
        }
        Cmd::Newton { poly, base, field, n } => {
            let k = field_arg(field)?;
            let v = pav_arg(&k, base)?;
            let q = parse_qpoly(poly, "x")?;
            let coeffs: Vec<Element> = q.coeffs().iter().map(|c| k.rational(c.clone())).collect();
            let seq = newton_power_sums(&coeffs, *n)?;
            let r = limsup_max_estimate(&coeffs, &v, *n)?;
            let out = json!({
                "sums": seq.sums.iter().map(|s| k.fmt_element(s)).collect::<Vec<_>>(),
                "estimate": r.estimate.to_json(),
                "exact": r.exact.as_ref().map(|x| x.to_json()),
                "gap": r.gap,
                "window": [r.window.0, r.window.1],
            });
            Ok(match r.gap {
                Some(g) if g > cli.tol => Outcome::Fail(out),
                _ => Outcome::Pass(out),
            })
        }
        Cmd::Pnorm { field, norm, op, vector, vectors, gens, other, k } => {
            let f = field_arg(field)?;
            let n = PseudoNorm::from_json(&f, &json_arg(norm)?)?;
            let gens_m = || -> Result<Matrix<Element>, Error> { Ok(Matrix::from_cols(vectors_of(&f, &json_arg(need(gens, "gens")?)?)?)) };
            let out = match op {
                PnOp::Eval => json!({"value": n.eval(&vector_of(&f, &json_arg(need(vector, "vector")?)?)?)?.to_json()}),
                PnOp::Dual => json!({"norm": n.dual().to_json()}),
                PnOp::Restrict => json!({"norm": n.restrict(&gens_m()?)?.to_json()}),
                PnOp::Quotient => {
                    let q = n.quotient(&gens_m()?)?;
                    let rows: Vec<Vec<String>> = q.map.to_rows().iter().map(|r| r.iter().map(|x| f.fmt_element(x)).collect()).collect();
                    json!({"norm": q.norm.to_json(), "map": rows})
                }
                PnOp::Tensor => {
                    let o = PseudoNorm::from_json(&f, &json_arg(need(other, "other")?)?)?;
                    json!({"norm": n.tensor(&o)?.to_json()})
                }
                PnOp::Exterior => {
                    let i = k.ok_or_else(|| Error::Json("--k is required for exterior".into()))?;
                    json!({"norm": n.exterior(i)?.to_json()})
                }
                PnOp::Det => json!({"norm": n.det().to_json()}),
                PnOp::Hadamard => {
                    let h = hadamard_check(&n, &vectors_of(&f, &json_arg(need(vectors, "vectors")?)?)?)?;
                    let out = h.to_json();
                    return Ok(if h.holds() { Outcome::Pass(out) } else { Outcome::Fail(out) });
                }
            };
            Ok(Outcome::Pass(out))
        }
        Cmd::Separate { field, model, base, radius, x, y } => {
            let (v1, v2) = match model.as_deref() {
                None => {
                    let k = field_arg(field)?;
                    (pav_arg(&k, x)?, pav_arg(&k, y)?)
                }
                Some(m) => {
                    let model = match m {
                        "mq" => SpaceModel::MQ,
                        "disc" => SpaceModel::disc(&field_arg(base)?, "T", rational_arg(radius)?)?,
                        other => return Err(Error::Json(format!("unknown model '{}'", other))),
                    };
                    let p = |s: &str| -> Result<Pav, Error> { point_from_branch(&model, &BranchCoords::from_json(&model, &json_arg(s)?)?) };
                    (p(x)?, p(y)?)
                }
            };
            match separate(&v1, &v2) {
                Ok(s) => Ok(Outcome::Pass(s.to_json(v1.field()))),
                Err(Error::NotSeparated { budget }) => Ok(Outcome::Fail(json!({
                    "error": {"kind": "NotSeparated", "message": format!("no separating function found after {} candidates", budget)},
                    "budget": budget,
                    "x": v1.to_json(),
                    "y": v2.to_json(),
                }))),
                Err(e) => Err(e),
            }
        }
        Cmd::Flow { field, pav, s } => {
            let k = field_arg(field)?;
            let v = pav_arg(&k, pav)?;
            let w = power_flow(&v, &FlowExp::parse(s)?)?;
            Ok(Outcome::Pass(json!({"pav": w.to_json(), "eps": fmt_rational(&epsilon_of(&w)), "ring": specification(&w).to_json()})))
        }
        Cmd::Density { z, c, n, base, radius, csv } => {
            let model = SpaceModel::disc(&field_arg(base)?, "T", rational_arg(radius)?)?;
            let zc = expr_arg(z, &model.field().constants())?;
            let c = Param::parse(c)?;
            let mut ladder: Vec<usize> = DENSITY_LADDER.iter().copied().filter(|&k| k < *n).collect();
            ladder.push(*n);
            let mut seq = Vec::new();
            for k in ladder {
                let term = disc_density_sequence(&model, &zc, &c, k)?;
                seq.push((k, density_point(&model, &term)?));
            }
            let target = density_target(&model, &zc, &c)?;
            let rep = check_convergence(&seq, &target, &density_functions(&model, &zc)?, 1e-6)?;
            if *csv {
                return Ok(Outcome::Text(rep.to_csv(), rep.passed));
            }
            let out = json!({"target": target.to_json(), "n": n, "report": rep.to_json()});
            Ok(if rep.passed { Outcome::Pass(out) } else { Outcome::Fail(out) })
        }
        Cmd::Reduce { field, pav, base } => {
            let k = field_arg(field)?;
            let w = pav_arg(&k, pav)?;
            let b = k.base().ok_or_else(|| Error::FieldMismatch("reduction needs a function field".into()))?;
            let v = pav_arg(b, base)?;
            let d = check_diagram(&w, &v)?;
            let out = d.to_json(&k);
            Ok(if d.commutes { Outcome::Pass(out) } else { Outcome::Fail(out) })
        }
        Cmd::Suite { name } => {
            let r = run_suite(name, &SuiteOptions { tol: cli.tol })?;
            let out = r.to_json();
            Ok(match r.status {
                Status::Pass => Outcome::Pass(out),
                Status::Fail => Outcome::Fail(out),
                Status::Indeterminate => Outcome::Undecided(out),
            })
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::UndefinedProduct => "UndefinedProduct",
        Error::SyntaxError { .. } => "SyntaxError",
        Error::DivisionByZero => "DivisionByZero",
        Error::NotAUnit => "NotAUnit",
        Error::FieldMismatch(_) => "FieldMismatch",
        Error::NotUltrametric(_) => "NotUltrametric",
        Error::UnsupportedShape(_) => "UnsupportedShape",
        Error::NotGalois(_) => "NotGalois",
        Error::RankDeficient => "RankDeficient",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::PavMismatch => "PavMismatch",
        Error::OutOfRange(_) => "OutOfRange",
        Error::NotSeparated { .. } => "NotSeparated",
        Error::NotAnExtension(_) => "NotAnExtension",
        Error::Unclassifiable(_) => "Unclassifiable",
        Error::Reducible(_) => "Reducible",
        Error::InvalidPlace(_) => "InvalidPlace",
        Error::Json(_) => "Json",
    }
}

fn error_json(e: &Error) -> Value {
    let mut err = json!({"kind": error_kind(e), "message": e.to_string()});
    if let Error::SyntaxError { pos, .. } = e {
        err["pos"] = json!(pos);
    }
    json!({"error": err})
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    let (text, code) = match outcome {
        Ok(Outcome::Pass(v)) => (v.to_string() + "\n", 0),
        Ok(Outcome::Fail(v)) => (v.to_string() + "\n", 1),
        Ok(Outcome::Undecided(v)) => (v.to_string() + "\n", 3),
        Ok(Outcome::Text(t, ok)) => (t, if ok { 0 } else { 1 }),
        Err(e) => (error_json(&e).to_string() + "\n", 2),
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("pavforge: cannot write output: {}", e);
        return ExitCode::from(2);
    }
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
