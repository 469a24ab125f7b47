//! The subcommands, as functions from arguments to an exit code and output text.

use std::time::Instant;

use rankdrop::classify::{classify_p1, classify_with, ClassifyOptions};
use rankdrop::facesplit::Config;
use rankdrop::invariants::{coble_bar, joubert, six, Sextuple};
use rankdrop::projective::{collinear, reduce_to_line, PointP2};
use rankdrop::sampling::{fuzz_one, Regime};
use rankdrop::surface::{
    cubic_form, line_x, line_y, monomials, pencil_from_config, verify_double_six, LineP3,
    SurfaceError,
};
use rankdrop::synthesis::{completion_y, sixth_pair, sturm_sixth_pair, SynthError};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ConfigFile, InputError};
use crate::report::{matrix, sextuple, ReportFile, Timings};

pub mod exit {
    pub const FULL_RANK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const CONSTRUCTION: i32 = 3;
    pub const NOT_DEFICIENT: i32 = 4;
    pub const DEFICIENT: i32 = 10;
    pub const VIOLATION: i32 = 20;
}

/// What a command prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn out(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(e: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: exit::INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }

    fn construction_error(code: i32, kind: &str, message: String) -> Outcome {
        let body = json!({ "error": { "kind": kind, "message": message } });
        Outcome {
            code,
            stdout: pretty(&body),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthMode {
    SixthPair,
    Completion,
    Sturm,
}

fn load(path: &str) -> Result<ConfigFile, Outcome> {
    ConfigFile::read(path).map_err(Outcome::input_error)
}

fn load_config(path: &str) -> Result<Config, Outcome> {
    load(path)?.config().map_err(Outcome::input_error)
}

/// Joubert invariants of a collinear side of six pairs, y side first.
fn line_joubert(c: &Config) -> Option<Sextuple> {
    if c.k() != 6 {
        return None;
    }
    [c.ys(), c.xs()]
        .into_iter()
        .find(|s| collinear(s))
        .map(|s| {
            let line = reduce_to_line(&s).expect("collinear");
            joubert(six(&line))
        })
}

pub fn check(path: &str, p1: bool, verbose: bool, format: Format) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let start = Instant::now();
    let report = if p1 {
        match file.config_p1() {
            Ok(c) => ReportFile::new(&classify_p1(&c), None, None),
            Err(e) => return Outcome::input_error(e),
        }
    } else {
        match file.config() {
            Ok(c) => {
                let r = classify_with(
                    &c,
                    ClassifyOptions {
                        all_subsets: verbose,
                    },
                );
                ReportFile::new(&r, line_joubert(&c).as_ref(), None)
            }
            Err(e) => return Outcome::input_error(e),
        }
    };
    let report = ReportFile {
        timings: Some(Timings {
            classify_us: start.elapsed().as_micros() as u64,
        }),
        ..report
    };
    let code = if report.deficient {
        exit::DEFICIENT
    } else {
        exit::FULL_RANK
    };
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Outcome::out(code, text)
}

pub fn synth_error_kind(e: &SynthError) -> &'static str {
    match e {
        SynthError::WrongSize { .. } => "WrongSize",
        SynthError::DegenerateInput(_) => "DegenerateInput",
        SynthError::HomographyRelated => "HomographyRelated",
        SynthError::NoCommonPoint => "NoCommonPoint",
        SynthError::CenterNotOnConic => "CenterNotOnConic",
        SynthError::NotDeficient => "NotDeficient",
        SynthError::NoRationalCenter => "NoRationalCenter",
        SynthError::NotCollinear => "NotCollinear",
        SynthError::Degenerate(_) => "Degenerate",
    }
}

fn synth_config(
    mode: SynthMode,
    file: &ConfigFile,
) -> Result<Result<Config, SynthError>, InputError> {
    Ok(match mode {
        SynthMode::SixthPair | SynthMode::Sturm => {
            let c = file.config()?;
            let pair = if mode == SynthMode::Sturm {
                sturm_sixth_pair(&c)
            } else {
                sixth_pair(&c)
            };
            pair.map(|p| c.with_pair(p).expect("five plus one pairs"))
        }
        SynthMode::Completion => {
            let xs = file.x_points()?;
            completion_y(&xs).map(|ys| Config::from_sides(&xs, &ys).expect("six pairs"))
        }
    })
}

pub fn synth(mode: SynthMode, path: &str, verify: bool) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let c = match synth_config(mode, &file) {
        Err(e) => return Outcome::input_error(e),
        Ok(Err(e @ SynthError::WrongSize { .. })) => return Outcome::input_error(e),
        Ok(Err(e)) => {
            return Outcome::construction_error(
                exit::CONSTRUCTION,
                synth_error_kind(&e),
                e.to_string(),
            )
        }
        Ok(Ok(c)) => c,
    };
    if verify {
        let r = classify_with(&c, ClassifyOptions::default());
        if !r.deficient || !r.consistent() {
            return Outcome::construction_error(
                exit::CONSTRUCTION,
                "VerificationFailed",
                "the synthesized configuration did not classify as rank deficient".into(),
            );
        }
    }
    Outcome::out(exit::FULL_RANK, ConfigFile::from_config(&c).to_json())
}

fn surface_error_kind(e: &SurfaceError) -> &'static str {
    match e {
        SurfaceError::NotDeficient => "NotDeficient",
        SurfaceError::WrongNullity(_) => "WrongNullity",
        SurfaceError::RankNotTwo => "RankNotTwo",
        SurfaceError::NotOnSurface => "NotOnSurface",
    }
}

fn surface_error(e: SurfaceError) -> Outcome {
    let code = if e == SurfaceError::NotDeficient {
        exit::NOT_DEFICIENT
    } else {
        exit::CONSTRUCTION
    };
    Outcome::construction_error(code, surface_error_kind(&e), e.to_string())
}

fn plucker(l: &LineP3) -> Vec<String> {
    l.plucker.iter().map(|v| v.to_string()).collect()
}

pub fn surface(path: &str) -> Outcome {
    let c = match load_config(path) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let p = match pencil_from_config(&c) {
        Ok(p) => p,
        Err(e) => return surface_error(e),
    };
    let lx: Result<Vec<LineP3>, _> = c.xs().iter().map(|x| line_x(&p, x)).collect();
    let ly: Result<Vec<LineP3>, _> = c.ys().iter().map(|y| line_y(&p, y)).collect();
    let (lx, ly) = match (lx, ly) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return surface_error(e),
    };
    let form = cubic_form(&p);
    let label = |m: &[usize; 3]| {
        m.iter()
            .map(|i| format!("z{i}"))
            .collect::<Vec<_>>()
            .join("*")
    };
    let lines: Vec<Value> = lx
        .iter()
        .enumerate()
        .map(|(i, l)| json!({ "family": "x", "index": i, "plucker": plucker(l) }))
        .chain(
            ly.iter()
                .enumerate()
                .map(|(j, l)| json!({ "family": "y", "index": j, "plucker": plucker(l) })),
        )
        .collect();
    let body = json!({
        "pencil": p.basis.iter().map(|m| matrix(m).concat()).collect::<Vec<_>>(),
        "monomials": monomials().iter().map(label).collect::<Vec<_>>(),
        "cubic_form": form.coeffs.iter().map(rankdrop::linalg::format_rat).collect::<Vec<_>>(),
        "lines": lines,
        "double_six_verified": verify_double_six(&lx, &ly),
    });
    Outcome::out(exit::FULL_RANK, pretty(&body))
}

pub fn invariants(path: &str) -> Outcome {
    let c = match load_config(path) {
        Ok(c) => c,
        Err(o) => return o,
    };
    if c.k() != 6 {
        return Outcome::input_error(format!("invariants need six pairs, got {}", c.k()));
    }
    let bar = |s: &[&PointP2]| coble_bar(six(s).map(|p| *p));
    let line_j = |s: &[&PointP2]| {
        collinear(s).then(|| sextuple(&joubert(six(&reduce_to_line(s).expect("collinear")))))
    };
    let (bx, by) = (bar(&c.xs()), bar(&c.ys()));
    let mut body = json!({
        "coble_x": sextuple(&bx),
        "coble_y": sextuple(&by),
        "proportional": bx.proportional(&by),
    });
    if let Some(j) = line_j(&c.xs()) {
        body["joubert_x"] = json!(j);
    }
    if let Some(j) = line_j(&c.ys()) {
        body["joubert_y"] = json!(j);
    }
    Outcome::out(exit::FULL_RANK, pretty(&body))
}

pub fn fuzz(seed: u64, count: u64, regimes: &[Regime], ks: &[usize]) -> Outcome {
    let mut runs = Vec::new();
    let mut total = 0u64;
    let mut first: Option<Value> = None;
    for &regime in regimes {
        for &k in ks {
            let outcomes: Vec<_> = (0..count)
                .into_par_iter()
                .map(|i| fuzz_one(regime, k, seed, i))
                .collect();
            let violations: Vec<_> = outcomes.iter().filter(|o| o.violation()).collect();
            total += violations.len() as u64;
            if first.is_none() {
                first = violations.first().map(|o| {
                    json!({
                        "regime": regime.name(),
                        "k": k,
                        "index": o.index,
                        "unexplained": o.unexplained,
                        "contradicted": o.contradicted,
                        "unverified": o.unverified,
                        "config": ConfigFile::from_config(&o.config),
                    })
                });
            }
            runs.push(json!({
                "regime": regime.name(),
                "k": k,
                "configs": count,
                "deficient": outcomes.iter().filter(|o| o.deficient).count(),
                "violations": violations.len(),
            }));
        }
    }
    let mut body = json!({ "seed": seed, "count": count, "runs": runs, "violations": total });
    if let Some(v) = first {
        body["first_violation"] = v;
    }
    Outcome::out(
        if total == 0 {
            exit::FULL_RANK
        } else {
            exit::VIOLATION
        },
        pretty(&body),
    )
}
