//! Lossless JSON form of a certificate.

use serde::{Deserialize, Serialize};

use super::ParseError;
use crate::certificate::{SosCertificate, SquareTerm};
use crate::ratpoly::Monomial;
use crate::scalar::{parse_rational, to_fraction_string};
use crate::{MultiCertificate, MultiPoly};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialDocument {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDocument {
    pub multiplier: String,
    pub polynomial: Vec<MonomialDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub input: String,
    pub variables: Vec<String>,
    pub scale: String,
    pub terms: Vec<TermDocument>,
    pub constant: String,
    pub support: Vec<u64>,
    pub strategy: String,
    pub verified: bool,
}

impl CertificateDocument {
    pub fn from_certificate(
        cert: &MultiCertificate,
        variables: &[String],
        input: &str,
        verified: bool,
    ) -> Self {
        Self {
            input: input.to_string(),
            variables: variables.to_vec(),
            scale: to_fraction_string(&cert.scale),
            terms: cert
                .terms
                .iter()
                .map(|t| TermDocument {
                    multiplier: to_fraction_string(&t.multiplier),
                    polynomial: t
                        .poly
                        .terms()
                        .rev()
                        .map(|(m, c)| MonomialDocument {
                            exponents: m.0.clone(),
                            coefficient: to_fraction_string(c),
                        })
                        .collect(),
                })
                .collect(),
            constant: to_fraction_string(&cert.constant),
            support: cert.support.clone(),
            strategy: cert.strategy.clone(),
            verified,
        }
    }

    /// Rebuilds the certificate; fails on malformed rationals or exponent
    /// vectors of the wrong length.
    pub fn to_certificate(&self) -> Result<MultiCertificate, ParseError> {
        let rational = |field: &str, text: &str| {
            parse_rational(text)
                .ok_or_else(|| ParseError::new(0, format!("{field}: invalid rational '{text}'")))
        };
        let nvars = self.variables.len();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            let multiplier = rational(&format!("terms[{i}].multiplier"), &t.multiplier)?;
            let mut poly = MultiPoly::zero(self.variables.clone());
            for (j, m) in t.polynomial.iter().enumerate() {
                if m.exponents.len() != nvars {
                    return Err(ParseError::new(
                        0,
                        format!(
                            "terms[{i}].polynomial[{j}]: expected {nvars} exponents, got {}",
                            m.exponents.len()
                        ),
                    ));
                }
                let c = rational(
                    &format!("terms[{i}].polynomial[{j}].coefficient"),
                    &m.coefficient,
                )?;
                poly.add_term(Monomial(m.exponents.clone()), c);
            }
            terms.push(SquareTerm::new(multiplier, poly));
        }
        let cert: SosCertificate<MultiPoly> = SosCertificate::new(
            rational("scale", &self.scale)?,
            terms,
            rational("constant", &self.constant)?,
        )
        .with_support(self.support.clone())
        .with_strategy(self.strategy.clone());
        Ok(cert)
    }
}

/// Pretty-printed JSON for `cert`.
pub fn render_structured(
    cert: &MultiCertificate,
    variables: &[String],
    input: &str,
    verified: bool,
) -> String {
    let doc = CertificateDocument::from_certificate(cert, variables, input, verified);
    serde_json::to_string_pretty(&doc).expect("documents serialize")
}

/// Parses a JSON certificate; the position of a JSON error is its byte
/// offset when it can be recovered.
pub fn parse_structured(text: &str) -> Result<(CertificateDocument, MultiCertificate), ParseError> {
    let doc: CertificateDocument = serde_json::from_str(text).map_err(|e| {
        let offset = text
            .lines()
            .take(e.line().saturating_sub(1))
            .map(|l| l.len() + 1)
            .sum::<usize>()
            + e.column().saturating_sub(1);
        ParseError::new(offset.min(text.len()), e.to_string())
    })?;
    let cert = doc.to_certificate()?;
    Ok((doc, cert))
}
