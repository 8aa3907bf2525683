//! `ratsos` command-line front end.
//!
//! Exit codes: 0 success or positive definite, 1 certificate rejected by
//! `verify`, 2 usage, parse or malformed-file error, 10 positive
//! semidefinite, 20 not nonnegative, 30 infeasible, 31 search exhausted,
//! 70 internal verification failure.

mod args;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use args::{CertifyArgs, CheckArgs, Cli, Command, InputArgs, VerifyArgs};
use ratsos::ddp::{Exhausted, InfeasibilityWitness, SearchConfig};
use ratsos::parse_io::{
    parse_poly, parse_structured, render_certificate, to_multi_certificate, Format,
};
use ratsos::pipeline::{certify_univariate, PipelineError, UniOutcome};
use ratsos::positivity::{classify, Classification};
use ratsos::projectlift::{
    certify_multivariate, power_sequence, LiftError, MultiOutcome, ProjectionTrace,
};
use ratsos::ratpoly::{multi_to_uni, substitute_powers};
use ratsos::scalar::{to_compact_string, to_fraction_string};
use ratsos::{MultiCertificate, MultiPoly, Rational, UniPoly};

const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const SEMIDEFINITE: u8 = 10;
const NEGATIVE: u8 = 20;
const INFEASIBLE: u8 = 30;
const EXHAUSTED: u8 = 31;
const INTERNAL: u8 = 70;

/// A terminal condition: exit code plus a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => check(a),
        Command::Certify(a) => certify(a, a.trace),
        Command::Lift(a) => certify(a, true),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(input: &str) -> Result<String, Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::new(USAGE, format!("cannot read stdin: {e}")))?;
        s
    } else if let Some(path) = input.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::new(USAGE, format!("cannot read {path}: {e}")))?
    } else {
        input.to_string()
    };
    Ok(text.trim().to_string())
}

fn parse(text: &str, vars: &[String]) -> Result<MultiPoly, Failure> {
    parse_poly(text, vars)
        .map_err(|e| Failure::new(USAGE, format!("parse error {e}\n{}", e.caret(text))))
}

fn read_poly(input: &InputArgs) -> Result<(String, MultiPoly), Failure> {
    let text = read_input(&input.input)?;
    let p = parse(&text, &input.vars)?;
    Ok((text, p))
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn check(a: &CheckArgs) -> Outcome {
    let (_, p) = read_poly(&a.input)?;
    let u =
        multi_to_uni(&p).ok_or_else(|| Failure::new(USAGE, "check needs exactly one variable"))?;
    let var = &a.input.vars[0];
    let (classification, roots, witness) = if u.is_constant() {
        let c = u.coeff(0);
        if c.is_negative() {
            (Classification::NotNonnegative, 0, Some(Rational::zero()))
        } else if c.is_zero() {
            (Classification::PositiveSemiDefinite, 0, None)
        } else {
            (Classification::PositiveDefinite, 0, None)
        }
    } else {
        let r = classify(&u).map_err(|e| Failure::new(USAGE, e.to_string()))?;
        (r.classification, r.real_root_count, r.witness)
    };
    let value = witness.as_ref().map(|w| u.eval(w));
    match a.input.output {
        Format::Text => {
            let mut lines = vec![classification.to_string(), format!("real roots: {roots}")];
            if let (Some(w), Some(v)) = (&witness, &value) {
                lines.push(format!(
                    "witness: {var} = {}, value {}",
                    to_compact_string(w),
                    to_compact_string(v)
                ));
            }
            emit(&lines.join("\n"));
        }
        Format::Structured => emit(&pretty(&json!({
            "classification": classification.to_string(),
            "real_roots": roots,
            "witness": witness.as_ref().map(to_fraction_string),
            "value": value.as_ref().map(to_fraction_string),
        }))),
    }
    Ok(match classification {
        Classification::PositiveDefinite => 0,
        Classification::PositiveSemiDefinite => SEMIDEFINITE,
        Classification::NotNonnegative => NEGATIVE,
    })
}

/// Final state of a certify run, before rendering.
enum Report {
    Certified(MultiCertificate),
    Negative {
        point: Vec<Rational>,
        value: Rational,
    },
    Infeasible(InfeasibilityWitness),
    Exhausted(Exhausted),
}

fn certify(a: &CertifyArgs, trace: bool) -> Outcome {
    let (text, p) = read_poly(&a.input)?;
    let vars = &a.input.vars;
    let config = a.config();
    let report = if let Some(c) = p.constant_value() {
        if c.is_negative() {
            Report::Negative {
                point: vec![Rational::zero(); vars.len()],
                value: c,
            }
        } else {
            Report::Certified(MultiCertificate::constant_only(c))
        }
    } else if let Some(u) = multi_to_uni(&p) {
        certify_one(&u, &vars[0], &config)?
    } else {
        certify_many(&p, &config, trace, a.input.output)?
    };
    let format = a.input.output;
    match report {
        Report::Certified(cert) => {
            if !cert.verify(&p) {
                return Err(Failure::new(
                    INTERNAL,
                    "internal error: certificate does not verify",
                ));
            }
            emit(&render_certificate(&cert, format, vars, &text, true));
            if let Some(path) = &a.out {
                let doc = render_certificate(&cert, Format::Structured, vars, &text, true);
                std::fs::write(path, doc + "\n").map_err(|e| {
                    Failure::new(USAGE, format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(0)
        }
        Report::Negative { point, value } => {
            match format {
                Format::Text => {
                    let at: Vec<String> = vars
                        .iter()
                        .zip(&point)
                        .map(|(v, x)| format!("{v} = {}", to_compact_string(x)))
                        .collect();
                    emit(&format!(
                        "not nonnegative: value {} at {}",
                        to_compact_string(&value),
                        at.join(", ")
                    ));
                }
                Format::Structured => emit(&pretty(&json!({
                    "outcome": "not_nonnegative",
                    "point": point.iter().map(to_fraction_string).collect::<Vec<_>>(),
                    "value": to_fraction_string(&value),
                }))),
            }
            Ok(NEGATIVE)
        }
        Report::Infeasible(w) => {
            match format {
                Format::Text => emit(&format!(
                    "infeasible at t^{}: forced value {}\n{}",
                    w.exponent,
                    to_compact_string(&w.forced_value),
                    w.explanation
                )),
                Format::Structured => emit(&pretty(&json!({
                    "outcome": "infeasible",
                    "exponent": w.exponent,
                    "forced_value": to_fraction_string(&w.forced_value),
                    "kind": format!("{:?}", w.kind),
                    "explanation": w.explanation,
                }))),
            }
            Ok(INFEASIBLE)
        }
        Report::Exhausted(e) => {
            match format {
                Format::Text => {
                    let mut msg = format!("no certificate found after {} points", e.points_tested);
                    if let Some(r) = &e.reason {
                        msg.push_str(&format!(": {r}"));
                    }
                    emit(&msg);
                }
                Format::Structured => emit(&pretty(&json!({
                    "outcome": "exhausted",
                    "points_tested": e.points_tested,
                    "reason": e.reason,
                }))),
            }
            Ok(EXHAUSTED)
        }
    }
}

fn certify_one(u: &UniPoly, var: &str, config: &SearchConfig) -> Result<Report, Failure> {
    let outcome = certify_univariate(u, config).map_err(|e| match e {
        PipelineError::VerificationFailed => Failure::new(INTERNAL, e.to_string()),
        other => Failure::new(USAGE, other.to_string()),
    })?;
    Ok(match outcome {
        UniOutcome::Certified(c) => Report::Certified(to_multi_certificate(&c, var)),
        UniOutcome::NotNonnegative { witness } => Report::Negative {
            value: u.eval(&witness),
            point: vec![witness],
        },
        UniOutcome::Infeasible(w) => Report::Infeasible(w),
        UniOutcome::Exhausted(e) => Report::Exhausted(e),
    })
}

fn certify_many(
    p: &MultiPoly,
    config: &SearchConfig,
    trace: bool,
    format: Format,
) -> Result<Report, Failure> {
    let powers = power_sequence(p).map_err(|e| Failure::new(USAGE, e.to_string()))?;
    let g = substitute_powers(p, powers.powers());
    if let Some(t) = negative_point(&g) {
        let point: Vec<Rational> = powers.powers().iter().map(|&k| pow(&t, k)).collect();
        return Ok(Report::Negative {
            value: p.eval(&point),
            point,
        });
    }
    let result = certify_multivariate(p, config).map_err(|e| match e {
        LiftError::LiftMismatch(_) | LiftError::InvalidSigns => {
            Failure::new(INTERNAL, e.to_string())
        }
        other => Failure::new(EXHAUSTED, format!("no certificate: {other}")),
    })?;
    if trace {
        print_trace(&result.trace, &result.zero_rows, format);
    }
    Ok(match result.outcome {
        MultiOutcome::Certified(c) => Report::Certified(*c),
        MultiOutcome::Infeasible(w) => Report::Infeasible(w),
        MultiOutcome::Exhausted(e) => Report::Exhausted(e),
    })
}

/// Stage trace; on stderr when stdout carries a structured document.
fn print_trace(t: &ProjectionTrace, zero_rows: &[u64], format: Format) {
    let mut lines = vec![
        format!("powers: {}", t.powers),
        format!("projection: G(t) = {}", t.projected.display_with("t")),
        format!("support: {}", t.support),
    ];
    if !zero_rows.is_empty() {
        let rows: Vec<String> = zero_rows.iter().map(|e| format!("t^{e}")).collect();
        lines.push(format!("dropped squares: {}", rows.join(", ")));
    }
    let text = lines.join("\n");
    match format {
        Format::Text => emit(&text),
        Format::Structured => eprintln!("{text}"),
    }
}

/// A `t` with `g(t) < 0` when the leading behaviour of `g` forces one.
fn negative_point(g: &UniPoly) -> Option<Rational> {
    let degree = g.degree()?;
    let lc = g.leading_coeff()?;
    if degree % 2 == 0 && lc.is_positive() {
        return None;
    }
    let sign = if lc.is_negative() {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut t = sign;
    for _ in 0..256 {
        if g.eval(&t).is_negative() {
            return Some(t);
        }
        t = &t * Rational::from_integer(2.into());
    }
    None
}

fn pow(t: &Rational, k: u64) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * t)
}

fn verify(a: &VerifyArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.certificate).map_err(|e| {
        Failure::new(
            USAGE,
            format!("cannot read {}: {e}", a.certificate.display()),
        )
    })?;
    let (doc, cert) = parse_structured(&text).map_err(|e| {
        Failure::new(
            USAGE,
            format!("malformed certificate {}: {e}", a.certificate.display()),
        )
    })?;
    let vars = a.vars.clone().unwrap_or_else(|| doc.variables.clone());
    if vars != doc.variables {
        return Err(Failure::new(
            USAGE,
            format!(
                "certificate is over ({}) but --vars gives ({})",
                doc.variables.join(", "),
                vars.join(", ")
            ),
        ));
    }
    let poly_text = match &a.polynomial {
        Some(s) => read_input(s)?,
        None => doc.input.clone(),
    };
    let p = parse(&poly_text, &vars)?;
    if cert.verify(&p) {
        emit("verified");
        Ok(0)
    } else {
        emit("verification failed");
        Ok(VERIFY_FAILED)
    }
}
