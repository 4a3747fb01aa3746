//! Command-line front end: parses field and function expressions, runs the
//! symbol, commutator, cohomology, and reciprocity computations, and emits
//! deterministic plain or JSON reports.

pub mod expr;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tamesym::field::PrimeField;
use tamesym::geometry;
use tamesym::grcat;
use tamesym::opext::{self, WindowPolicy};
use tamesym::selftest;
use tamesym::symbols::{self, SignMode};

use report::{PlaceEntry, Report, Windows};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    B,
    A,
}

#[derive(Debug, Parser)]
#[command(
    name = "tamesym",
    about = "Exact tame symbols on one- and two-dimensional local fields, \
             with first-principles commutators and reciprocity checks"
)]
pub struct Cli {
    /// Prime modulus of the coefficient field.
    #[arg(short = 'p', long, default_value_t = 7, global = true)]
    pub prime: u64,
    /// Inner window half-size (auto-sized when omitted).
    #[arg(long, global = true)]
    pub n1: Option<i64>,
    /// Outer window half-size (auto-sized when omitted).
    #[arg(long, global = true)]
    pub n2: Option<i64>,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tame symbol of two Laurent series in t.
    Symbol1d { f: String, g: String },
    /// Pairing nu_K of two elements of k((t1))((t2)).
    Nu { f: String, g: String },
    /// Sign of the triple symbol, by either closed formula.
    Sign {
        f: String,
        g: String,
        h: String,
        #[arg(long, value_enum, default_value_t = Mode::B)]
        mode: Mode,
    },
    /// Explicit two-dimensional triple symbol.
    Symbol3 { f: String, g: String, h: String },
    /// Lattice commutator of two elements, from first principles.
    PsiOp { f: String, g: String },
    /// Hexagon commutator of three elements, from first principles.
    PhiOp { f: String, g: String, h: String },
    /// Full first-principles triple symbol sign_V * phi_V.
    TripleOp { f: String, g: String, h: String },
    /// Whole-space commutator on a direct sum; pass f g pairs, one pair per
    /// component.
    DirectSum {
        #[arg(required = true, num_args = 2..)]
        exprs: Vec<String>,
    },
    /// Check a 3-cocycle table file; optionally evaluate its commutator on
    /// a triple "g1 g2 g3" of comma-separated vectors.
    Cocycle {
        file: PathBuf,
        #[arg(long)]
        phi: Option<String>,
    },
    /// Weil reciprocity on the projective line for split functions of t.
    Weil { f: String, g: String },
    /// Parshin reciprocity over the germs through the origin.
    ParshinPoint { f: String, g: String, h: String },
    /// Parshin reciprocity along the curve y = 0, infinity included.
    ParshinCurve { f: String, g: String, h: String },
    /// Run the acceptance battery (all criteria, or one).
    Selftest {
        #[arg(long)]
        criterion: Option<u32>,
    },
}

#[derive(Debug)]
pub struct CliError(pub String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for CliError {}

macro_rules! from_error {
    ($($ty:ty),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError(e.to_string())
            }
        })*
    };
}

from_error!(
    tamesym::field::FieldError,
    tamesym::series::SeriesError,
    tamesym::symbols::SymbolsError,
    tamesym::opext::OpextError,
    tamesym::geometry::GeomError,
    tamesym::grcat::GrcatError,
    expr::ParseError,
);

fn fp_val(v: tamesym::field::Fp) -> u64 {
    v.0
}

fn symbol_windows(info: &opext::EvalInfo) -> Windows {
    Windows {
        n1: Some(info.n1),
        n2: Some(info.n2),
        stability: if info.direct_checked {
            "+2 re-run identical; direct product-window cross-check ran".into()
        } else if info.stability_checked {
            "+2 re-run identical".into()
        } else {
            "n/a".into()
        },
    }
}

/// Execute a command; `Ok` carries the report (whose `pass` field drives
/// the exit status), `Err` is an input or precondition failure.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let field = PrimeField::new(cli.prime)?;
    let policy = WindowPolicy { n1: cli.n1, n2: cli.n2 };
    let p2 = |text: &str| -> Result<tamesym::TwoLocalElement, CliError> {
        Ok(expr::eval_series2(&expr::parse(text)?, field)?)
    };
    match &cli.command {
        Command::Symbol1d { f, g } => {
            let fs = expr::eval_series1(&expr::parse(f)?, field)?;
            let gs = expr::eval_series1(&expr::parse(g)?, field)?;
            let v = symbols::tame1d(&fs, &gs)?;
            Ok(Report {
                command: "symbol1d".into(),
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone()],
                places: vec![],
                aggregate: json!({ "value": fp_val(v.value()) }),
                pass: None,
                windows: Windows::none(),
            })
        }
        Command::Nu { f, g } => {
            let fe = p2(f)?;
            let ge = p2(g)?;
            let v = symbols::nu_k(&fe, &ge)?;
            Ok(Report {
                command: "nu".into(),
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone()],
                places: vec![],
                aggregate: json!({ "value": v }),
                pass: None,
                windows: Windows::none(),
            })
        }
        Command::Sign { f, g, h, mode } => {
            let (fe, ge, he) = (p2(f)?, p2(g)?, p2(h)?);
            let m = match mode {
                Mode::B => SignMode::BFormula,
                Mode::A => SignMode::AFormula,
            };
            let v = symbols::sign_k(&fe, &ge, &he, m)?;
            Ok(Report {
                command: "sign".into(),
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone(), h.clone()],
                places: vec![],
                aggregate: json!({ "value": fp_val(v.value()), "mode": format!("{mode:?}") }),
                pass: None,
                windows: Windows::none(),
            })
        }
        Command::Symbol3 { f, g, h } => {
            let (fe, ge, he) = (p2(f)?, p2(g)?, p2(h)?);
            let v = symbols::triple_symbol(&fe, &ge, &he)?;
            Ok(Report {
                command: "symbol3".into(),
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone(), h.clone()],
                places: vec![],
                aggregate: json!({ "value": fp_val(v.value()) }),
                pass: None,
                windows: Windows::none(),
            })
        }
        Command::PsiOp { f, g } => {
            let (fe, ge) = (p2(f)?, p2(g)?);
            let r = opext::psi_op(&fe, &ge, policy)?;
            Ok(Report {
                command: "psi-op".into(),
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone()],
                places: vec![],
                aggregate: json!({ "value": r.value }),
                pass: None,
                windows: symbol_windows(&r.info),
            })
        }
        Command::PhiOp { f, g, h } => {
            let (fe, ge, he) = (p2(f)?, p2(g)?, p2(h)?);
            let r = opext::phi_op(&fe, &ge, &he, policy)?;
            Ok(Report {
                command: "phi-op".into(),
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone(), h.clone()],
                places: vec![],
                aggregate: json!({ "value": fp_val(r.value.value()) }),
                pass: None,
                windows: symbol_windows(&r.info),
            })
        }
        Command::TripleOp { f, g, h } => {
            let (fe, ge, he) = (p2(f)?, p2(g)?, p2(h)?);
            let r = opext::triple_op(&fe, &ge, &he, policy)?;
            let closed = symbols::triple_symbol(&fe, &ge, &he)?;
            Ok(Report {
                command: "triple-op".into(),
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone(), h.clone()],
                places: vec![],
                aggregate: json!({
                    "value": fp_val(r.value.value()),
                    "closed_form": fp_val(closed.value()),
                }),
                pass: Some(r.value.value() == closed.value()),
                windows: symbol_windows(&r.info),
            })
        }
        Command::DirectSum { exprs } => {
            if exprs.len() % 2 != 0 {
                return Err(CliError(
                    "direct-sum expects f g pairs, one pair per component".into(),
                ));
            }
            let mut parts = Vec::new();
            for pair in exprs.chunks(2) {
                parts.push((p2(&pair[0])?, p2(&pair[1])?));
            }
            let r = opext::psi_direct_sum(&parts, policy)?;
            let places = r
                .per_component
                .iter()
                .enumerate()
                .map(|(i, v)| PlaceEntry {
                    place: format!("component {i}"),
                    nu: Some(*v),
                    symbol: None,
                })
                .collect();
            let sum: i64 = r.per_component.iter().sum();
            Ok(Report {
                command: "direct-sum".into(),
                prime: cli.prime,
                inputs: exprs.clone(),
                places,
                aggregate: json!({ "whole": r.whole, "component_sum": sum }),
                pass: Some(r.whole == sum),
                windows: symbol_windows(&r.info),
            })
        }
        Command::Cocycle { file, phi } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError(format!("cannot read {}: {e}", file.display())))?;
            let table = grcat::load_cocycle_table(field, &text)?;
            let valid = grcat::check_cocycle3(&table)?;
            let mut aggregate = json!({
                "group": table.group().orders(),
                "valid": valid,
            });
            if let Some(triple) = phi {
                let elems: Vec<grcat::GroupElem> = triple
                    .split_whitespace()
                    .map(|tok| {
                        let comps: Vec<i64> = tok
                            .split(',')
                            .map(|c| c.parse::<i64>())
                            .collect::<Result<_, _>>()
                            .map_err(|_| CliError(format!("bad group element '{tok}'")))?;
                        table.group().reduce(&comps).map_err(|e| CliError(e.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
                if elems.len() != 3 {
                    return Err(CliError("--phi expects three group elements".into()));
                }
                let v = grcat::phi_from_cocycle(&table, &elems[0], &elems[1], &elems[2])?;
                aggregate["phi"] = json!(fp_val(v));
            }
            Ok(Report {
                command: "cocycle".into(),
                prime: cli.prime,
                inputs: vec![file.display().to_string(), phi.clone().unwrap_or_default()],
                places: vec![],
                aggregate,
                pass: Some(valid),
                windows: Windows::none(),
            })
        }
        Command::Weil { f, g } => {
            let fr = expr::eval_rational_t(&expr::parse(f)?, field)?;
            let gr = expr::eval_rational_t(&expr::parse(g)?, field)?;
            let r = geometry::weil_check(&fr, &gr)?;
            let places = r
                .points
                .iter()
                .map(|e| PlaceEntry {
                    place: match e.point {
                        Some(a) => format!("t={a}"),
                        None => "infinity".into(),
                    },
                    nu: None,
                    symbol: Some(fp_val(e.symbol)),
                })
                .collect();
            Ok(Report {
                command: "weil".into(),
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone()],
                places,
                aggregate: json!({ "product": fp_val(r.product) }),
                pass: Some(r.pass),
                windows: Windows::none(),
            })
        }
        Command::ParshinPoint { f, g, h } | Command::ParshinCurve { f, g, h } => {
            let curve = matches!(cli.command, Command::ParshinCurve { .. });
            let fr = expr::eval_rational_xy(&expr::parse(f)?, field)?;
            let gr = expr::eval_rational_xy(&expr::parse(g)?, field)?;
            let hr = expr::eval_rational_xy(&expr::parse(h)?, field)?;
            let r = if curve {
                geometry::parshin_curve_check(&fr, &gr, &hr)?
            } else {
                geometry::parshin_point_check(&fr, &gr, &hr)?
            };
            let places = r
                .places
                .iter()
                .map(|e| PlaceEntry {
                    place: e.place.to_string(),
                    nu: Some(e.nu),
                    symbol: Some(fp_val(e.symbol)),
                })
                .collect();
            Ok(Report {
                command: if curve { "parshin-curve".into() } else { "parshin-point".into() },
                prime: cli.prime,
                inputs: vec![f.clone(), g.clone(), h.clone()],
                places,
                aggregate: json!({ "nu_sum": r.nu_sum, "product": fp_val(r.product) }),
                pass: Some(r.pass),
                windows: Windows {
                    n1: Some(r.n1),
                    n2: Some(r.n2),
                    stability: "+2 re-expansion identical".into(),
                },
            })
        }
        Command::Selftest { criterion } => {
            let reports = match criterion {
                None => selftest::run_all(cli.seed),
                Some(n) => match n {
                    1 => vec![selftest::criterion_1()],
                    2 => vec![selftest::criterion_2(cli.seed)],
                    3 => vec![selftest::criterion_3(cli.seed)],
                    4 => vec![selftest::criterion_4(cli.seed)],
                    5 => selftest::run_all(cli.seed)
                        .into_iter()
                        .filter(|r| (3..=5).contains(&r.id))
                        .collect(),
                    6 => vec![selftest::criterion_6(cli.seed)],
                    7 => vec![selftest::criterion_7(cli.seed)],
                    8 => vec![selftest::criterion_8(cli.seed)],
                    9 => vec![selftest::criterion_9(cli.seed)],
                    10 => vec![selftest::criterion_10(cli.seed)],
                    11 => vec![selftest::criterion_11(cli.seed)],
                    _ => return Err(CliError(format!("no criterion {n}"))),
                },
            };
            let passed = reports.iter().filter(|r| r.passed).count();
            let failed = reports.len() - passed;
            let places = reports
                .iter()
                .map(|r| PlaceEntry { place: r.line(), nu: None, symbol: None })
                .collect();
            Ok(Report {
                command: "selftest".into(),
                prime: cli.prime,
                inputs: vec![format!("seed={}", cli.seed)],
                places,
                aggregate: json!({ "passed": passed, "failed": failed }),
                pass: Some(failed == 0),
                windows: Windows::none(),
            })
        }
    }
}

/// Print the report in the chosen format and map it to an exit status:
/// 0 on success, 1 when a verdict failed, 2 on input errors.
pub fn execute(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(report) => {
            match cli.format {
                Format::Plain => print!("{}", report.to_plain()),
                Format::Json => println!("{}", report.to_json()),
            }
            match report.pass {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
