use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lueroth_kit::apolarity::{catalecticant, catalecticant_kernel, clebsch_from_lines, lueroth_space_from_pentagon, Pentagon};
use lueroth_kit::bateman::bateman_tuple;
use lueroth_kit::geiser::{self, net_from_qc};
use lueroth_kit::instances::{random_instance, Instance, InstanceKind};
use lueroth_kit::json::{poly_from_json, poly_to_json, LinesJson, MatrixJson};
use lueroth_kit::morley::{calibration, kernel_pencil, morley_matrix, tangent_system};
use lueroth_kit::poly::adjugate_conic;
use lueroth_kit::repcheck::rep_table;
use lueroth_kit::scorza::{scorza_fast, scorza_naive};
use lueroth_kit::verify::{verify_with, Sizes, GROUPS};
use lueroth_kit::{Error, Field, Group, Result, TernaryForm};

/// Exact computations on plane quartics, Bateman seven-tuples and the
/// skew matrix whose kernel recovers them.
#[derive(Parser)]
#[command(name = "lueroth-kit", version)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Tolerance for numeric checks.
    #[arg(long, global = true, default_value_t = geiser::DEFAULT_TOL)]
    tol: f64,
    /// Field for inline expressions: `Q` or a square-free integer d for Q(sqrt(d)).
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Catalecticant matrix, determinant and apolar conics of a quartic.
    Catalecticant {
        /// Quartic in x: a JSON file or an inline expression.
        #[arg(allow_hyphen_values = true)]
        quartic: String,
    },
    /// The quartic sum of fourth powers of the given lines.
    Clebsch {
        /// JSON file with `{"field": ..., "lines": [[a, b, c], ...]}`.
        #[arg(long)]
        lines: String,
    },
    /// Basis of the quartics through the ten vertices of a pentagon.
    Lueroth {
        #[arg(long)]
        lines: String,
    },
    /// The degree-4 covariant of a quartic.
    Scorza {
        #[arg(allow_hyphen_values = true)]
        quartic: String,
        /// Use the literal sum over all index assignments.
        #[arg(long)]
        naive: bool,
    },
    /// Coordinates of the tuple of a conic and a cubic.
    Bateman(PairArgs),
    /// The skew matrix of the tuple of a conic and a cubic.
    Morley {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, group = "what")]
        pfaffian: bool,
        #[arg(long, group = "what")]
        kernel: bool,
        #[arg(long, group = "what")]
        tangent_rank: bool,
    },
    /// Numeric base points, ramification and branch curve of the net of cubics.
    Geiser {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, group = "what")]
        points: bool,
        #[arg(long, group = "what")]
        ramification: bool,
        #[arg(long, group = "what")]
        branch: bool,
        /// Bound on the held-out residual of the quartic fit.
        #[arg(long, default_value_t = geiser::DEFAULT_FIT_TOL)]
        fit_tol: f64,
        #[arg(long, default_value_t = geiser::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Representation-theoretic decompositions next to the stated ones.
    Repcheck,
    /// Run every regression and report pass or fail per statement.
    VerifyPaper {
        /// Restrict to one group of statements.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(GROUPS))]
        only: Option<String>,
    },
    /// Print a seeded random instance.
    Random {
        #[arg(long, value_enum)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    BatemanPair,
    Quartic,
    Pentagon,
}

#[derive(Args)]
struct PairArgs {
    /// Conic: in x (its adjugate is used) or already a dual conic in e.
    #[arg(long = "Q")]
    q: String,
    /// Cubic in x.
    #[arg(long = "C")]
    c: String,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Check(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate(_) | Error::Rank { .. } | Error::Numeric(_) | Error::Calibration(_) => {
                Failure::Check(e.to_string())
            }
            e => Failure::Input(e),
        }
    }
}

fn parse_field(s: &str) -> Result<Field> {
    match s.trim() {
        "Q" | "q" => Ok(Field::Rational),
        d => Field::quadratic(d.parse().map_err(|_| Error::Parse(format!("bad field {s:?}")))?),
    }
}

/// A form from a JSON file, or from an inline expression whose group is
/// read off from its variables.
fn load_form(arg: &str, field: Field, expected_degree: Option<u32>) -> Result<TernaryForm> {
    let p = if Path::new(arg).is_file() {
        poly_from_json(&std::fs::read_to_string(arg)?)?
    } else {
        lueroth_kit::Poly::parse(field, arg)?
    };
    let group = if p.free_of(Group::E) { Group::X } else { Group::E };
    let degree = p.degree_in(group).ok_or_else(|| Error::Parse(format!("not a nonzero form: {arg}")))?;
    let form = TernaryForm::new(p, group, degree)?;
    if let Some(d) = expected_degree {
        if form.degree() != d {
            return Err(Error::Degree { expected: format!("degree {d}"), got: form.to_string() });
        }
    }
    Ok(form)
}

fn load_lines(path: &str) -> Result<Vec<[lueroth_kit::Scalar; 3]>> {
    let text = std::fs::read_to_string(path)?;
    let lj: LinesJson = serde_json::from_str(&text)?;
    lj.decode()
}

/// `(Q, Q*, C)`; `Q` is absent when a dual conic was given.
fn load_pair(p: &PairArgs, field: Field) -> Result<(Option<TernaryForm>, TernaryForm, TernaryForm)> {
    let q = load_form(&p.q, field, Some(2))?;
    let c = load_form(&p.c, field, Some(3))?;
    if c.group() != Group::X {
        return Err(Error::Degree { expected: "cubic in x".into(), got: c.to_string() });
    }
    match q.group() {
        Group::X => Ok((Some(q.clone()), adjugate_conic(&q)?, c)),
        Group::E => Ok((None, q, c)),
    }
}

fn conic_in_x(q: &Option<TernaryForm>, qstar: &TernaryForm) -> Result<TernaryForm> {
    match q {
        Some(q) => Ok(q.clone()),
        None => adjugate_conic(qstar),
    }
}

fn form_value(f: &TernaryForm) -> Value {
    json!({ "text": f.to_string(), "poly": poly_to_json(f.poly()) })
}

fn points_value(points: &[geiser::NumPoint]) -> Value {
    json!(points.iter().map(|p| p.map(|c| [c.re, c.im])).collect::<Vec<_>>())
}

/// Output document and whether all checks it contains passed.
fn run(cli: &Cli) -> std::result::Result<(Value, String, bool), Failure> {
    let field = parse_field(&cli.field)?;
    Ok(match &cli.command {
        Command::Catalecticant { quartic } => {
            let f = load_form(quartic, field, Some(4))?;
            let cat = catalecticant(&f)?;
            let kernel = catalecticant_kernel(&f)?;
            let det = cat.det();
            let table = format!(
                "{}\ndet = {det}\nrank = {}\napolar conics: {}\n",
                cat.matrix,
                cat.rank(),
                kernel.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            );
            let v = json!({
                "matrix": MatrixJson::encode(&cat.matrix),
                "det": det.to_string(),
                "rank": cat.rank(),
                "kernel": kernel.iter().map(form_value).collect::<Vec<_>>(),
            });
            (v, table, true)
        }
        Command::Clebsch { lines } => {
            let lines = load_lines(lines)?;
            let f = clebsch_from_lines(&lines);
            let det = catalecticant(&f)?.det();
            let table = format!("{f}\ncatalecticant det = {det}\n");
            (json!({ "quartic": form_value(&f), "catalecticant_det": det.to_string() }), table, true)
        }
        Command::Lueroth { lines } => {
            let lines = load_lines(lines)?;
            let arr: [_; 5] = lines
                .try_into()
                .map_err(|v: Vec<_>| Error::Shape(format!("a pentagon needs 5 lines, got {}", v.len())))?;
            let p = Pentagon::new(arr)?;
            let basis = lueroth_space_from_pentagon(&p)?;
            let table = format!(
                "generic: {}\ndimension: {}\n{}\n",
                p.is_generic(),
                basis.len(),
                basis.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
            );
            let v = json!({ "generic": p.is_generic(), "dimension": basis.len(), "basis": basis.iter().map(form_value).collect::<Vec<_>>() });
            (v, table, true)
        }
        Command::Scorza { quartic, naive } => {
            let f = load_form(quartic, field, Some(4))?;
            let s = if *naive { scorza_naive(&f)? } else { scorza_fast(&f)? };
            (json!({ "covariant": form_value(&s), "naive": naive }), format!("{s}\n"), true)
        }
        Command::Bateman(pair) => {
            let (q, qstar, c) = load_pair(pair, field)?;
            let q = conic_in_x(&q, &qstar)?;
            let t = bateman_tuple(&q, &c)?;
            let coords = t
                .coords()
                .iter()
                .enumerate()
                .map(|(i, row)| format!("d_{}_*: {}", i + 1, row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")))
                .collect::<Vec<_>>()
                .join("\n");
            (t.to_json(), format!("{coords}\n"), true)
        }
        Command::Morley { pair, pfaffian, kernel, tangent_rank } => {
            let (_, qstar, c) = load_pair(pair, field)?;
            let t = lueroth_kit::bateman::b_pairing(&qstar, &c)?;
            if *pfaffian {
                let pf = morley_matrix(&t).pfaffian();
                (json!({ "pfaffian": pf.to_string() }), format!("Pf = {pf}\n"), true)
            } else if *kernel {
                let pencil = kernel_pencil(&t)?;
                let [a, b] = pencil.generators();
                let contains = pencil.contains(&qstar);
                let v = json!({ "pencil": [form_value(a), form_value(b)], "contains_qstar": contains });
                (v, format!("<{a}, {b}>\ncontains Q*: {contains}\n"), contains)
            } else if *tangent_rank {
                let sys = tangent_system(&qstar, &c)?;
                let rank = sys.rank();
                (json!({ "rank": rank, "system": MatrixJson::encode(&sys) }), format!("{sys}\nrank = {rank}\n"), true)
            } else {
                let m = morley_matrix(&t);
                let conv = calibration()?.chosen;
                let v = json!({ "matrix": MatrixJson::encode(m.matrix()), "rank": m.rank(), "convention": conv });
                (v, format!("{}\nrank = {}\n", m.matrix(), m.rank()), true)
            }
        }
        Command::Geiser { pair, points, ramification, branch, fit_tol, samples } => {
            let (q, qstar, c) = load_pair(pair, field)?;
            let net = net_from_qc(&conic_in_x(&q, &qstar)?, &c)?;
            if *points {
                let bp = geiser::seven_points_numeric(&net, cli.tol)?;
                let ok = bp.max_residual() < cli.tol && geiser::no_six_on_a_conic(&bp.points);
                let table = bp
                    .points
                    .iter()
                    .zip(&bp.residuals)
                    .map(|(p, r)| format!("({:.10}, {:.10}, {:.10})  residual {r:.1e}", p[0], p[1], p[2]))
                    .collect::<Vec<_>>()
                    .join("\n");
                let v = json!({ "points": points_value(&bp.points), "residuals": bp.residuals, "no_six_on_a_conic": geiser::no_six_on_a_conic(&bp.points) });
                (v, format!("{table}\n"), ok)
            } else if *ramification {
                let r = geiser::ramification_sextic(&net);
                (json!({ "sextic": form_value(&r) }), format!("{r}\n"), true)
            } else if *branch {
                let b = geiser::branch_quartic(&net, *samples, *fit_tol, cli.seed)?;
                let ok = b.rank15 == 14;
                let table = format!(
                    "coefficients: {}\nheld-out residual {:.1e}, rank {}\n",
                    b.coefficients.iter().map(|c| format!("{c:.10}")).collect::<Vec<_>>().join(", "),
                    b.residual,
                    b.rank15
                );
                (serde_json::to_value(&b).expect("serializable"), table, ok)
            } else {
                let r = geiser::geiser_suite(&net, cli.seed, cli.tol, *fit_tol)?;
                let ok = r.passes(cli.tol, *fit_tol);
                let table = format!(
                    "base points: {} (residual {:.1e})\nno six on a conic: {} ({:.1e})\nfiber size: {}\nbranch quartic residual {:.1e}, rank {}\n",
                    r.base_points.points.len(),
                    r.max_residual,
                    r.no_six_on_a_conic,
                    r.conic_condition,
                    r.fiber.count,
                    r.branch.residual,
                    r.branch.rank15
                );
                (serde_json::to_value(&r).expect("serializable"), table, ok)
            }
        }
        Command::Repcheck => {
            let rows = rep_table()?;
            let ok = rows.iter().all(|r| !r.blocking || r.agrees.unwrap_or(true));
            let w = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(0);
            let table = rows
                .iter()
                .map(|r| format!("{:<w$}  computed {:<24}  stated {}", r.quantity, r.computed, r.claimed.as_deref().unwrap_or("-")))
                .collect::<Vec<_>>()
                .join("\n");
            (serde_json::to_value(&rows).expect("serializable"), format!("{table}\n"), ok)
        }
        Command::VerifyPaper { only } => {
            let rep = verify_with(cli.seed, only.as_deref(), Sizes::default(), cli.tol, geiser::DEFAULT_FIT_TOL);
            let ok = rep.ok();
            (serde_json::to_value(&rep).expect("serializable"), rep.to_table(), ok)
        }
        Command::Random { kind } => {
            let kind = match kind {
                Kind::BatemanPair => InstanceKind::BatemanPair,
                Kind::Quartic => InstanceKind::Quartic,
                Kind::Pentagon => InstanceKind::Pentagon,
            };
            match random_instance(cli.seed, kind)? {
                Instance::BatemanPair { conic, cubic } => (
                    json!({ "Q": poly_to_json(conic.poly()), "C": poly_to_json(cubic.poly()) }),
                    format!("Q = {conic}\nC = {cubic}\n"),
                    true,
                ),
                Instance::Quartic(f) => (poly_to_json(f.poly()), format!("{f}\n"), true),
                Instance::Pentagon(p) => {
                    let lj = LinesJson::encode(p.field(), p.lines());
                    let table = p
                        .lines()
                        .iter()
                        .map(|l| l.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                        .collect::<Vec<_>>()
                        .join("\n");
                    (serde_json::to_value(lj).expect("serializable"), format!("{table}\n"), true)
                }
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, table, ok)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
                Format::Table => print!("{table}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
