//! Command-line front end. Exit codes: 0 success, 1 a sweep row disagrees,
//! 2 invalid input or configuration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use solvmin::curvature::{ricci_closed_form, ricci_operator, MetricData};
use solvmin::derivations::family_derivations;
use solvmin::moduli::{frame_params, metric_to_group, milnor_data, reduce, representative_matrix};
use solvmin::orbit::{orbit_at_in, MINIMAL_TOL};
use solvmin::report::{
    default_families, emit_report, exit_status, verify_main_theorem, Format, Grid, RunConfig,
};
use solvmin::soliton::{soliton_from_frame_in, solvsoliton_check, SolitonVerdict, SOLITON_TOL};
use solvmin::{make_family, Arithmetic, Error, Family, Mat3, Result};

#[derive(Parser)]
#[command(
    name = "solvmin",
    version,
    about = "Solvsolitons and minimal automorphism orbits of 3D solvable Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the supported families
    Families,
    /// Ricci operator at g_λ (closed form) or at a Gram matrix (Koszul)
    Ricci(Target),
    /// Basis of the derivation algebra
    Der(FamilyArgs),
    /// Reduce a Gram matrix to its normal form g_λ
    Reduce(Target),
    /// Solvsoliton test with certificate
    Soliton(Target),
    /// Mean curvature of the orbit through g_λ or through a Gram matrix
    Orbit(Target),
    /// Sweep λ and check that solitons are exactly the minimal orbits
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// h3, r3, r3a, r3pa or r3_1 (also r3a:a=<value>)
    #[arg(long)]
    family: String,
    /// Family parameter for r3a and r3pa
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Exact rational arithmetic for the derivation algebra
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Target {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Representative parameter
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["gram", "gram_file"])]
    lambda: Option<f64>,
    /// Gram matrix, 9 numbers row-major (space or comma separated)
    #[arg(long, num_args = 1..=9, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "gram_file")]
    gram: Option<Vec<f64>>,
    /// Gram matrix as JSON nested arrays
    #[arg(long)]
    gram_file: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Family to sweep; omit with --all
    #[arg(long, required_unless_present = "all")]
    family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Sweep the default family list
    #[arg(long, conflicts_with = "family")]
    all: bool,
    /// start:stop:count, or log:start:stop:count
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda")]
    grid: Option<String>,
    /// Explicit λ values
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    lambda: Option<Vec<f64>>,
    /// Soliton and minimality tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family> {
        parse_family(&self.family, self.a)
    }

    fn mode(&self) -> Arithmetic {
        if self.exact {
            Arithmetic::Exact
        } else {
            Arithmetic::Float
        }
    }
}

fn parse_family(tag: &str, a: Option<f64>) -> Result<Family> {
    if tag.contains(':') {
        if a.is_some() {
            return Err(Error::InvalidFamily(format!(
                "{tag}: parameter given twice"
            )));
        }
        tag.parse()
    } else {
        Family::from_tag(tag, a)
    }
}

enum Point {
    Lambda(f64),
    Gram(Mat3),
}

impl Target {
    fn point(&self) -> Result<Point> {
        if let Some(v) = &self.gram {
            if v.len() != 9 {
                return Err(Error::Parse(format!(
                    "--gram needs 9 numbers, got {}",
                    v.len()
                )));
            }
            return Ok(Point::Gram(Mat3::from_row_slice(v)));
        }
        if let Some(p) = &self.gram_file {
            let rows: Vec<Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(p)?)?;
            if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
                return Err(Error::Parse(
                    "gram file must hold a 3x3 nested array".into(),
                ));
            }
            return Ok(Point::Gram(Mat3::from_fn(|i, j| rows[i][j])));
        }
        Ok(Point::Lambda(self.lambda.unwrap_or(1.0)))
    }
}

fn mat(m: &Mat3) -> Value {
    json!((0..3)
        .map(|i| (0..3).map(|j| m[(i, j)]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn verdict_json(v: &SolitonVerdict) -> Value {
    let cert = v
        .certificate
        .as_ref()
        .map(|c| json!({"c": c.c, "d": mat(&c.d), "residual": c.residual}));
    json!({"is_soliton": v.is_soliton, "is_einstein": v.is_einstein, "certificate": cert})
}

fn cmd_families() -> Value {
    let rows: Vec<Value> = [
        ("h3", "[e1,e2]=e3", "none", "transitive"),
        ("r3", "[e1,e2]=e2+e3, [e1,e3]=e3", "none", "lambda > 0"),
        (
            "r3a",
            "[e1,e2]=e2, [e1,e3]=a e3",
            "-1 <= a <= 1",
            "lambda real",
        ),
        (
            "r3pa",
            "[e1,e2]=a e2-e3, [e1,e3]=e2+a e3",
            "a >= 0",
            "lambda >= 1",
        ),
        ("r3_1", "[e1,e2]=e2, [e1,e3]=e3", "none", "transitive"),
    ]
    .iter()
    .map(|(t, b, a, l)| json!({"family": t, "brackets": b, "a": a, "lambda": l}))
    .collect();
    Value::Array(rows)
}

fn cmd_ricci(t: &Target) -> Result<Value> {
    let f = t.fam.family()?;
    Ok(match t.point()? {
        Point::Lambda(l) => {
            let (a, b, c, d) = frame_params(&f, l)?;
            let r = ricci_closed_form(a, b, c, d);
            json!({"family": f.to_string(), "lambda": l, "frame_params": [a, b, c, d],
                   "ric_frame": mat(&r), "scalar": r.trace()})
        }
        Point::Gram(g) => {
            let r = ricci_operator(&MetricData::new(make_family(&f)?, g)?)?;
            json!({"family": f.to_string(), "gram": mat(&g), "ric_frame": mat(&r.ric_frame),
                   "ric_canonical": mat(&r.ric_canonical), "scalar": r.scalar})
        }
    })
}

fn cmd_der(fa: &FamilyArgs) -> Result<Value> {
    let f = fa.family()?;
    let der = family_derivations(&f, fa.mode())?;
    Ok(json!({"family": f.to_string(), "dim": der.dim(),
              "basis": der.basis().iter().map(mat).collect::<Vec<_>>()}))
}

fn gram_of(t: &Target, f: &Family) -> Result<Mat3> {
    match t.point()? {
        Point::Gram(g) => Ok(g),
        Point::Lambda(l) => solvmin::moduli::group_to_metric(&representative_matrix(f, l)?),
    }
}

fn cmd_reduce(t: &Target) -> Result<Value> {
    let f = t.fam.family()?;
    let gram = gram_of(t, &f)?;
    let g = metric_to_group(&gram)?;
    let (rep, trace) = reduce(&f, &g)?;
    let md = milnor_data(&f, &gram)?;
    let sc = make_family::<f64>(&f)?;
    Ok(json!({
        "family": f.to_string(), "lambda": rep.lambda, "representative": mat(&rep.rep_matrix),
        "scalar": trace.scalar, "automorphism": mat(&trace.auto_part), "orthogonal": mat(&trace.orth),
        "witness_residual": trace.witness_residual(&g, &rep.rep_matrix),
        "automorphism_defect": trace.automorphism_defect(&sc),
        "orthogonality_defect": trace.orthogonality_defect(),
        "milnor_frame": mat(&md.frame), "k_scale": md.k_scale,
        "steps": trace.steps.iter().map(|s| json!({"name": s.name, "matrix": mat(&s.matrix)})).collect::<Vec<_>>(),
    }))
}

fn cmd_soliton(t: &Target) -> Result<Value> {
    let f = t.fam.family()?;
    let tol = t.tol.unwrap_or(SOLITON_TOL);
    Ok(match t.point()? {
        Point::Lambda(l) => {
            let v = soliton_from_frame_in(&f, l, tol, t.fam.mode())?;
            json!({"family": f.to_string(), "lambda": l, "coordinates": "frame", "verdict": verdict_json(&v)})
        }
        Point::Gram(g) => {
            let v = solvsoliton_check(&make_family(&f)?, &g, tol)?;
            json!({"family": f.to_string(), "gram": mat(&g), "coordinates": "canonical", "verdict": verdict_json(&v)})
        }
    })
}

fn cmd_orbit(t: &Target) -> Result<Value> {
    let f = t.fam.family()?;
    let g = match t.point()? {
        Point::Lambda(l) => representative_matrix(&f, l)?,
        Point::Gram(gram) => metric_to_group(&gram)?,
    };
    let r = orbit_at_in(&f, &g, t.fam.mode())?;
    let tol = t.tol.unwrap_or(MINIMAL_TOL);
    Ok(
        json!({"family": f.to_string(), "g": mat(&g), "H": mat(&r.h), "H_norm": r.norm,
              "orbit_dim": r.orbit_dim, "stabilizer_dim": r.stab_dim, "minimal": r.norm < tol}),
    )
}

fn verify_config(v: &VerifyArgs) -> Result<RunConfig> {
    let families = match &v.family {
        Some(tag) => vec![parse_family(tag, v.a)?],
        None => default_families(),
    };
    let grid = match (&v.grid, &v.lambda) {
        (Some(s), _) => Some(s.parse::<Grid>()?),
        (None, Some(l)) => Some(Grid::Explicit(l.clone())),
        (None, None) => None,
    };
    let tol = v.tol.unwrap_or(SOLITON_TOL);
    let cfg = RunConfig {
        families,
        grid,
        soliton_tol: tol,
        minimal_tol: v.tol.unwrap_or(MINIMAL_TOL),
        mode: if v.exact {
            Arithmetic::Exact
        } else {
            Arithmetic::Float
        },
        format: v.format.parse::<Format>()?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    let (value, out) = match &cli.cmd {
        Cmd::Verify(v) => {
            let cfg = verify_config(v)?;
            let rows = verify_main_theorem(&cfg)?;
            write_out(&emit_report(&rows, cfg.format)?, &v.out)?;
            return Ok(exit_status(&rows));
        }
        Cmd::Families => (cmd_families(), &None),
        Cmd::Ricci(t) => (cmd_ricci(t)?, &t.fam.out),
        Cmd::Der(fa) => (cmd_der(fa)?, &fa.out),
        Cmd::Reduce(t) => (cmd_reduce(t)?, &t.fam.out),
        Cmd::Soliton(t) => (cmd_soliton(t)?, &t.fam.out),
        Cmd::Orbit(t) => (cmd_orbit(t)?, &t.fam.out),
    };
    write_out(&(serde_json::to_string_pretty(&value)? + "\n"), out)?;
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
