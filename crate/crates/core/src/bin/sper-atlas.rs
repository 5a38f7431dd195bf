use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use sper_atlas::atlas::{self, RandomParams};
use sper_atlas::chart::{self, ChartSpec};
use sper_atlas::json::{self as js, canonical};
use sper_atlas::lex::{ogm_equiv, q_lin_independent, realized_levels, scalewise_independent, RelCanonicalForm};
use sper_atlas::point::{ExponentField, Point};
use sper_atlas::{example, parse, Error};

/// Exact computations with real-spectrum points given as semi-curvettes.
///
/// Machine-readable output goes to stdout as JSON; messages go to stderr.
/// Exit status: 0 success, 1 a check failed, 2 invalid input.
#[derive(Parser)]
#[command(name = "sper-atlas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Q,
    Qsqrt2,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the coordinates into I, F, G and P.
    Classify { point: PathBuf },
    /// Fine valuation and coarse valuation of a polynomial.
    Value { point: PathBuf, expr: String },
    /// Sign of a polynomial at the point.
    Sign { point: PathBuf, expr: String },
    /// Invert the coordinates in T (1-based, comma separated).
    Transform {
        point: PathBuf,
        #[arg(long = "T", value_delimiter = ',')]
        t: Vec<usize>,
    },
    /// Undo `transform` for the same T.
    InverseTransform {
        point: PathBuf,
        #[arg(long = "T", value_delimiter = ',')]
        t: Vec<usize>,
    },
    /// Decide whether two tuples of lex vectors satisfy the same relations.
    Equiv { a: PathBuf, b: PathBuf },
    /// Scalewise and plain Q-linear independence of a tuple.
    Scalewise { tuple: PathBuf },
    /// Check the valuation properties of the chart transform.
    #[command(name = "verify-prop31")]
    VerifyProp31 {
        point: PathBuf,
        #[arg(long = "T", value_delimiter = ',')]
        t: Vec<usize>,
    },
    /// Membership transfer between the point and its chart image.
    TheoremCheck {
        point: PathBuf,
        #[arg(long = "T", value_delimiter = ',')]
        t: Vec<usize>,
        #[arg(long)]
        anchor: Option<PathBuf>,
    },
    /// Membership in a U-set given by a descriptor file.
    Atlas {
        point: PathBuf,
        #[arg(long)]
        descriptor: PathBuf,
    },
    /// Partition and covering checks on seeded random points.
    PartitionCheck {
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, env = "SPER_ATLAS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, value_enum, default_value_t = FieldArg::Q)]
        field: FieldArg,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
    /// Apply a unimodular monomial substitution (rows of E: x_i = prod x'_j^E_ij).
    Blowup { point: PathBuf, matrix: PathBuf },
    /// Recompute the five-variable worked example.
    ExamplePaper,
}

enum Outcome {
    Ok(Json),
    Failed(Json),
}

fn read_json(path: &Path) -> Result<Json, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    js::parse_text(&text)
}

fn read_point(path: &Path) -> Result<Point, Error> {
    js::point_from_json(&read_json(path)?)
}

fn values_json(values: &[sper_atlas::Value]) -> Json {
    Json::Array(values.iter().map(js::value_to_json).collect())
}

fn ids(s: &std::collections::BTreeSet<usize>) -> Json {
    json!(s.iter().collect::<Vec<_>>())
}

fn classify_json(p: &Point) -> Json {
    let c = p.classify();
    json!({
        "I": ids(&c.i),
        "F": ids(&c.f),
        "G": ids(&c.g),
        "P": ids(&c.p),
        "p": c.p_count(),
        "finite": c.is_finite(),
        "kernel_cut_level": c.delta_kernel.cut_level,
        "fine_values": values_json(&p.coordinate_values()),
        "coarse_values": values_json(&p.coarse_coordinate_values()),
        "coarse_quotient_values": Json::Array(
            p.coarse_coordinate_values()
                .iter()
                .map(|v| match v.finite() {
                    Some(x) => Json::Array(x.coords()[..c.delta_kernel.cut_level - 1].iter().map(js::scalar_to_json).collect()),
                    None => json!("inf"),
                })
                .collect(),
        ),
    })
}

fn example_report() -> Result<Outcome, Error> {
    let d = example::delta();
    let t = ChartSpec::new([3]);
    let star = chart::transform(&d, &t)?;
    let coarse = d.coarse_coordinate_values();
    let star_vals = star.coordinate_values();
    let tail = |vals: &[sper_atlas::Value]| -> Vec<sper_atlas::LexVector> {
        vals[3..].iter().map(|v| v.finite().expect("finite").clone()).collect()
    };
    let equiv = ogm_equiv(&tail(&star_vals), &tail(&coarse))?;
    let prop31 = chart::verify_prop31(&d, &t)?;
    let theorem = atlas::theorem_check(&d, &t, None)?;
    let prime = chart::monomial_substitution(&d, &example::blowup())?;
    let prime_chart = ChartSpec::new([3, 5]);
    let prime_prop31 = chart::verify_prop31(&prime, &prime_chart)?;
    let y5 = star_vals[4].finite().expect("finite").clone();
    let ok = star.point_equal(&example::delta_star())
        && !equiv
        && prime.image(5) == d.image(3)
        && !prop31.any_failed()
        && theorem.violations() == 0
        && !prime_prop31.any_failed();
    let report = json!({
        "point": js::point_to_json(&d),
        "classification": classify_json(&d),
        "chart": [3],
        "delta_star": js::point_to_json(&star),
        "delta_star_values": values_json(&star_vals),
        "y5_erratum": {
            "derived": js::lex_to_json(&y5),
            "published": js::lex_to_json(&example::published_y5_exponent()),
            "note": "y5 = x5 = z*t^(1,0) with z = 1/y3 = t^(0,0,-1,0) forces (1,0,-1,0); the published (1,0,1,0) is treated as a sign typo. Either value breaks the equivalence below.",
        },
        "equiv_tail": {
            "star_values": js::tuple_to_json(&tail(&star_vals)),
            "coarse_values": js::tuple_to_json(&tail(&coarse)),
            "equivalent": equiv,
        },
        "verify_prop31": prop31.to_json(),
        "theorem_check": theorem.to_json(),
        "blowup": {
            "matrix": js::matrix_to_json(&example::blowup()),
            "delta_prime": js::point_to_json(&prime),
            "classification": classify_json(&prime),
            "chart": [3, 5],
            "verify_prop31": prime_prop31.to_json(),
        },
        "note": atlas::CONTINUITY_NOTE,
    });
    Ok(if ok { Outcome::Ok(report) } else { Outcome::Failed(report) })
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    Ok(match cmd {
        Command::Classify { point } => Outcome::Ok(classify_json(&read_point(&point)?)),
        Command::Value { point, expr } => {
            let p = read_point(&point)?;
            let f = parse::parse_polynomial(&expr, p.n())?;
            Outcome::Ok(json!({
                "fine": js::value_to_json(&p.fine_valuation(&f)?),
                "coarse": js::value_to_json(&p.nu_delta(&f)?),
            }))
        }
        Command::Sign { point, expr } => {
            let p = read_point(&point)?;
            let f = parse::parse_polynomial(&expr, p.n())?;
            Outcome::Ok(json!({"sign": p.poly_sign(&f)?}))
        }
        Command::Transform { point, t } => {
            Outcome::Ok(js::point_to_json(&chart::transform(&read_point(&point)?, &ChartSpec::new(t))?))
        }
        Command::InverseTransform { point, t } => Outcome::Ok(js::point_to_json(&chart::inverse_transform(
            &read_point(&point)?,
            &ChartSpec::new(t),
        )?)),
        Command::Equiv { a, b } => {
            let a = js::tuple_from_json(&read_json(&a)?)?;
            let b = js::tuple_from_json(&read_json(&b)?)?;
            let form = |t: &[sper_atlas::LexVector]| -> Result<Json, Error> {
                let f = RelCanonicalForm::of(t)?;
                Ok(Json::Array(
                    f.rows.iter().map(|r| Json::Array(r.iter().map(js::scalar_to_json).collect())).collect(),
                ))
            };
            Outcome::Ok(json!({
                "equivalent": ogm_equiv(&a, &b)?,
                "canonical_a": form(&a)?,
                "canonical_b": form(&b)?,
            }))
        }
        Command::Scalewise { tuple } => {
            let t = js::tuple_from_json(&read_json(&tuple)?)?;
            Outcome::Ok(json!({
                "scalewise": scalewise_independent(&t),
                "q_lin_independent": q_lin_independent(&t),
                "levels": realized_levels(&t),
            }))
        }
        Command::VerifyProp31 { point, t } => {
            let r = chart::verify_prop31(&read_point(&point)?, &ChartSpec::new(t))?;
            if r.any_failed() {
                Outcome::Failed(r.to_json())
            } else {
                Outcome::Ok(r.to_json())
            }
        }
        Command::TheoremCheck { point, t, anchor } => {
            let p = read_point(&point)?;
            let anchor = anchor.map(|a| read_json(&a).and_then(|v| js::tuple_from_json(&v))).transpose()?;
            let mut r = atlas::theorem_check(&p, &ChartSpec::new(t), anchor.as_deref())?;
            r.point_id = point.display().to_string();
            let out = json!({"note": atlas::CONTINUITY_NOTE, "report": r.to_json()});
            if r.violations() > 0 {
                Outcome::Failed(out)
            } else {
                Outcome::Ok(out)
            }
        }
        Command::Atlas { point, descriptor } => {
            let p = read_point(&point)?;
            let d = js::descriptor_from_json(&read_json(&descriptor)?)?;
            Outcome::Ok(json!({"descriptor": js::descriptor_to_json(&d), "member": atlas::u_membership(&p, &d)?}))
        }
        Command::PartitionCheck {
            samples,
            seed,
            n,
            m,
            field,
            density,
        } => {
            if !(1..=8).contains(&n) || !(1..=8).contains(&m) {
                return Err(Error::Invalid("n and m must lie in 1..=8".into()));
            }
            let field = match field {
                FieldArg::Q => ExponentField::Q,
                FieldArg::Qsqrt2 => ExponentField::QSqrt2,
            };
            let params = RandomParams { n, m, field, density };
            let sample: Vec<Point> = (0..samples).map(|k| atlas::random_point(seed.wrapping_add(k), params)).collect();
            let r = atlas::partition_check(&sample);
            if r.violations() > 0 {
                Outcome::Failed(r.to_json())
            } else {
                Outcome::Ok(r.to_json())
            }
        }
        Command::Blowup { point, matrix } => {
            let p = read_point(&point)?;
            let e = js::matrix_from_json(&read_json(&matrix)?)?;
            Outcome::Ok(js::point_to_json(&chart::monomial_substitution(&p, &e)?))
        }
        Command::ExamplePaper => example_report()?,
    })
}

/// Print to stdout, tolerating a closed pipe (e.g. `| head`).
fn emit(v: &Json) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{}", canonical(v));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok(v)) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(v)) => {
            emit(&v);
            eprintln!("sper-atlas: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("sper-atlas: {e}");
            ExitCode::from(2)
        }
    }
}
