use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use qsl_core::avsp::{avsp_type, classify_avsp, is_tight, reducibility_witness, verify_avsp};
use qsl_core::bridge::{
    avsp_to_spread, check_all_section_bounds, check_lemma_aux, check_section_bound, default_lemma_hyperplane,
    spread_to_avsp, ConstructionInput, SectionBoundReport,
};
use qsl_core::cert::{provenance_to_json, subspace_to_json, Certificate, Payload};
use qsl_core::cover::{Mode, SolveOptions};
use qsl_core::spread::{find_spreads, verify_spread, Spread};
use qsl_core::{Avsp, Elem, Error, Field, Point, QuadraticForm, Subspace};
use serde_json::{json, Value};

use crate::args::{AvspCmd, CheckCmd, ClassifyCmd, Cli, Command, ConvertCmd, ModeArgs, SpreadCmd};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InternalAssertion(_) => EXIT_INTERNAL,
            Error::NotClassified(_) | Error::ExtensionFailure(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Spread(cmd) => spread(cmd),
        Command::Avsp(cmd) => avsp(cmd),
        Command::Convert(cmd) => convert(cmd),
        Command::Classify(cmd) => classify(cmd),
        Command::Check(cmd) => check(cmd),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.message }));
            f.code
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn write_output(output: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) if path.as_os_str() != "-" => {
            fs::write(path, text).map_err(|e| Failure::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))
        }
        _ => {
            write_stdout(text);
            Ok(())
        }
    }
}

fn print_json(v: &Value) {
    write_stdout(&format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")));
}

/// Writes to stdout, ignoring a closed pipe.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn load_spread(path: &Path) -> Result<Spread, Failure> {
    match Certificate::from_json(&read_input(path)?)?.payload {
        Payload::Spread(s) => Ok(s),
        other => Err(Failure::new(EXIT_USAGE, format!("expected a spread certificate, found {}", other.kind()))),
    }
}

fn load_avsp(path: &Path) -> Result<Avsp, Failure> {
    match Certificate::from_json(&read_input(path)?)?.payload {
        Payload::Avsp(a) => Ok(a),
        other => Err(Failure::new(EXIT_USAGE, format!("expected an avsp certificate, found {}", other.kind()))),
    }
}

/// Parses `"a,b,c;d,e,f"` into rows of field elements.
fn parse_rows(f: &Field, text: &str) -> Result<Vec<Vec<Elem>>, Failure> {
    text.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|row| {
            row.split(',')
                .map(|c| {
                    let v: u32 =
                        c.trim().parse().map_err(|_| Failure::new(EXIT_USAGE, format!("bad coordinate {c:?}")))?;
                    Ok(f.check(v)?)
                })
                .collect()
        })
        .collect()
}

fn parse_subspace(f: &Field, n: usize, text: &str) -> Result<Subspace, Failure> {
    Ok(Subspace::from_rows(f, n, &parse_rows(f, text)?)?)
}

fn mode_of(m: &ModeArgs) -> Mode {
    if m.all {
        Mode::All
    } else if m.count {
        Mode::Count
    } else {
        Mode::First
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::First => "first",
        Mode::All => "all",
        Mode::Count => "count",
    }
}

fn spread(cmd: SpreadCmd) -> Outcome {
    match cmd {
        SpreadCmd::Search { quadric, mode, limit, seed_candidate, output } => {
            let field = Field::of_order(quadric.q)?;
            let form = QuadraticForm::standard(quadric.dim, quadric.kind, &field)?;
            let mode = mode_of(&mode);
            let found = find_spreads(&form, mode, SolveOptions { limit, seed_candidate })?;
            let provenance = json!({ "search": {
                "kind": quadric.kind.name(),
                "dim": quadric.dim,
                "q": quadric.q,
                "mode": mode_name(mode),
                "limit": limit,
                "seed_candidate": seed_candidate,
            }});
            match mode {
                Mode::Count => {
                    write_output(output.as_ref(), &format!("{}\n", found.count))?;
                    Ok(if found.count > 0 { EXIT_OK } else { EXIT_FAILED })
                }
                Mode::First => {
                    let Some(s) = found.spreads.into_iter().next() else {
                        return Err(Failure::new(EXIT_FAILED, "no spread"));
                    };
                    write_output(output.as_ref(), &Certificate::new(Payload::Spread(s), Some(provenance)).to_json())?;
                    Ok(EXIT_OK)
                }
                Mode::All => {
                    let certs: Vec<Value> = found
                        .spreads
                        .into_iter()
                        .map(|s| Certificate::new(Payload::Spread(s), Some(provenance.clone())).to_value())
                        .collect();
                    let empty = certs.is_empty();
                    let mut text = serde_json::to_string_pretty(&Value::Array(certs)).expect("serializable");
                    text.push('\n');
                    write_output(output.as_ref(), &text)?;
                    Ok(if empty { EXIT_FAILED } else { EXIT_OK })
                }
            }
        }
        SpreadCmd::Verify { input } => {
            let s = load_spread(&input)?;
            let rep = verify_spread(&s);
            print_json(&json!({
                "generators": rep.generators,
                "disjoint": rep.disjoint,
                "cardinality": rep.cardinality,
                "covers": rep.covers,
                "members": s.members().len(),
                "expected_size": rep.expected_size,
                "messages": rep.messages,
                "passed": rep.passed(),
            }));
            Ok(if rep.passed() { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn avsp(cmd: AvspCmd) -> Outcome {
    let AvspCmd::Verify { input, expect } = cmd;
    let a = load_avsp(&input)?;
    let rep = verify_avsp(&a);
    let mut out = json!({
        "partition": {
            "hyperplane": rep.hyperplane,
            "none_in_h": rep.none_in_h,
            "exact_cover": rep.exact_cover,
            "uncovered": rep.uncovered,
            "overcovered": rep.overcovered,
            "messages": rep.messages,
        },
        "type": null,
        "tight": null,
        "irreducible": null,
        "witness": null,
        "class": null,
        "failure": null,
    });
    let mut class = None;
    if rep.passed() {
        out["type"] = json!(avsp_type(&a)?.to_string());
        out["tight"] = json!(is_tight(&a)?);
        let witness = reducibility_witness(&a)?;
        out["irreducible"] = json!(witness.is_none());
        out["witness"] = witness.as_ref().map(subspace_to_json).unwrap_or(Value::Null);
        match classify_avsp(&a) {
            Ok(c) => {
                class = c.class;
                out["class"] = json!(c.class.map(|k| k.name()));
                out["failure"] = json!(c.failure.map(|f| json!({ "code": f.code(), "message": f.to_string() })));
            }
            Err(Error::MissingContext) => {
                out["failure"] = json!({ "code": "missing-context", "message": Error::MissingContext.to_string() });
            }
            Err(e) => return Err(e.into()),
        }
    }
    let passed = rep.passed() && expect.is_none_or(|k| class == Some(k));
    out["passed"] = json!(passed);
    print_json(&out);
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn convert(cmd: ConvertCmd) -> Outcome {
    match cmd {
        ConvertCmd::SpreadToAvsp { input, sigma_last, output } => {
            let s = load_spread(&input)?;
            let construction = ConstructionInput::with_defaults(&s, sigma_last)?;
            let (a, prov) = spread_to_avsp(&construction)?;
            let cert = Certificate::new(Payload::Avsp(a), Some(provenance_to_json(&prov)));
            write_output(output.as_ref(), &cert.to_json())?;
            Ok(EXIT_OK)
        }
        ConvertCmd::AvspToSpread { input, output } => {
            let a = load_avsp(&input)?;
            let (s, prov) = avsp_to_spread(&a)?;
            let cert = Certificate::new(Payload::Spread(s), Some(provenance_to_json(&prov)));
            write_output(output.as_ref(), &cert.to_json())?;
            Ok(EXIT_OK)
        }
    }
}

fn classify(cmd: ClassifyCmd) -> Outcome {
    let ClassifyCmd::Section { quadric, rows } = cmd;
    let field = Field::of_order(quadric.q)?;
    let form = QuadraticForm::standard(quadric.dim, quadric.kind, &field)?;
    let s = parse_subspace(&field, quadric.dim, &rows)?;
    let class = form.classify_section(&s);
    print_json(&json!({
        "subspace_dim": s.dim(),
        "radical_dim": class.radical_dim,
        "reduced_rank": class.reduced_rank,
        "kind": class.kind.name(),
        "nondegenerate": class.is_nondegenerate(),
    }));
    Ok(EXIT_OK)
}

fn section_json(r: &SectionBoundReport) -> Value {
    json!({
        "section": r.section.name(),
        "contained": r.contained,
        "bound": r.bound,
        "within_bound": r.within_bound,
        "exactly_two": r.exactly_two,
        "passed": r.passed(),
    })
}

fn check(cmd: CheckCmd) -> Outcome {
    match cmd {
        CheckCmd::LemmaAux { input, sigma_last, point, h } => {
            let s = load_spread(&input)?;
            let f = s.quadric().field().clone();
            let n = s.quadric().dim();
            let p = match point {
                Some(text) => {
                    let rows = parse_rows(&f, &text)?;
                    let [coords] = rows.as_slice() else {
                        return Err(Failure::new(EXIT_USAGE, "--point takes exactly one row"));
                    };
                    Point::new(&f, coords)?
                }
                None => ConstructionInput::with_defaults(&s, sigma_last)?.point,
            };
            let h = match h {
                Some(text) => parse_subspace(&f, n, &text)?,
                None => default_lemma_hyperplane(&s, &p)?,
            };
            let rep = check_lemma_aux(&s, &p, &h)?;
            print_json(&json!({
                "sigma_last_index": rep.sigma_last_index,
                "P": p.coords(),
                "H": subspace_to_json(&h),
                "at_most_one": rep.at_most_one,
                "exactly_one": rep.exactly_one,
                "q_coverage": rep.q_coverage,
                "pairs": rep.pairs,
                "points_checked": rep.points_checked,
                "violations": rep.violations,
                "passed": rep.passed(),
            }));
            Ok(if rep.passed() { EXIT_OK } else { EXIT_FAILED })
        }
        CheckCmd::SectionBound { input, hyperplane } => {
            let s = load_spread(&input)?;
            let f = s.quadric().field().clone();
            let (out, passed) = match hyperplane {
                Some(text) => {
                    let hp = parse_subspace(&f, s.quadric().dim(), &text)?;
                    let rep = check_section_bound(&s, &hp)?;
                    (section_json(&rep), rep.passed())
                }
                None => {
                    let all = check_all_section_bounds(&s)?;
                    let failing: Vec<Value> = all
                        .iter()
                        .filter(|(_, r)| !r.passed())
                        .map(|(hp, r)| json!({ "hyperplane": subspace_to_json(hp), "report": section_json(r) }))
                        .collect();
                    let passed = failing.is_empty();
                    let out = json!({
                        "sections": all.len(),
                        "max_contained": all.iter().map(|(_, r)| r.contained).max(),
                        "bound": f.q() + 1,
                        "exactly_two_checked": all.iter().filter(|(_, r)| r.exactly_two.is_some()).count(),
                        "failing": failing,
                        "passed": passed,
                    });
                    (out, passed)
                }
            };
            print_json(&out);
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
    }
}
