//! Polynomial text input and certificate output.
//!
//! Input is a small infix grammar (see [`parse_poly`]). Certificates render
//! either as a human-readable identity or as a lossless JSON document whose
//! rationals are all `"num/den"` strings.

mod parser;
mod structured;

use std::fmt;
use std::str::FromStr;

use num_traits::One;

pub use parser::{monomial, parse_poly};
pub use structured::{
    parse_structured, render_structured, CertificateDocument, MonomialDocument, TermDocument,
};

use crate::certificate::{SosCertificate, SquareTerm};
use crate::ratpoly::{uni_to_multi, PolyRing};
use crate::scalar::to_compact_string;
use crate::{MultiCertificate, UniCertificate};

/// A parse failure with the byte offset it was detected at.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }

    /// Two-line caret diagnostic under `text`.
    pub fn caret(&self, text: &str) -> String {
        let col = text[..self.position.min(text.len())].chars().count();
        format!("{text}\n{}^ {}", " ".repeat(col), self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "structured" | "json" => Ok(Format::Structured),
            other => Err(format!(
                "unknown format '{other}' (expected text or structured)"
            )),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Structured => "structured",
        })
    }
}

/// Renders `scale*(b*(q)^2 + ... + c0)`; unit multipliers and scale are
/// omitted, a zero constant is dropped unless nothing else remains.
pub fn render_text<P>(cert: &SosCertificate<P>) -> String
where
    P: PolyRing<Scalar = crate::Rational> + fmt::Display,
{
    let mut parts: Vec<String> = cert
        .terms
        .iter()
        .map(|t| {
            if t.multiplier.is_one() {
                format!("({})^2", t.poly)
            } else {
                format!("{}*({})^2", to_compact_string(&t.multiplier), t.poly)
            }
        })
        .collect();
    if parts.is_empty() || cert.constant != crate::Rational::from_integer(0.into()) {
        parts.push(to_compact_string(&cert.constant));
    }
    let body = parts.join(" + ");
    if cert.scale.is_one() {
        body
    } else if parts.len() == 1 {
        format!("{}*{}", to_compact_string(&cert.scale), body)
    } else {
        format!("{}*({})", to_compact_string(&cert.scale), body)
    }
}

/// Reinterprets a univariate certificate over the variable `var`.
pub fn to_multi_certificate(cert: &UniCertificate, var: &str) -> MultiCertificate {
    SosCertificate {
        scale: cert.scale.clone(),
        terms: cert
            .terms
            .iter()
            .map(|t| SquareTerm::new(t.multiplier.clone(), uni_to_multi(&t.poly, var)))
            .collect(),
        constant: cert.constant.clone(),
        support: cert.support.clone(),
        strategy: cert.strategy.clone(),
    }
}

/// Renders a certificate in the requested format. `input` is the original
/// polynomial text, recorded by the structured form.
pub fn render_certificate(
    cert: &MultiCertificate,
    format: Format,
    variables: &[String],
    input: &str,
    verified: bool,
) -> String {
    match format {
        Format::Text => render_text(cert),
        Format::Structured => render_structured(cert, variables, input, verified),
    }
}
