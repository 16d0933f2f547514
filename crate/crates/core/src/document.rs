//! The `.ncx` document: a JSON description of a spectral form.
//!
//! ```json
//! { "order": 1, "domain": [-1, 1], "xi": 0,
//!   "mu_minus": { "atoms": [[0, 1]], "density": null, "cantor": [] },
//!   "mu_plus":  { "atoms": [[0, 1]], "density": null, "cantor": [] },
//!   "poly": [0] }
//! ```
//!
//! Every field is required (`density` may be `null`) and unknown fields are
//! rejected. Numbers are written in shortest round-trip form, so a document
//! written back out reloads to bitwise identical values.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::Error;
use crate::measure::{Atom, CantorPart, Measure};
use crate::polynomial::{PiecewisePoly, Polynomial};
use crate::spectral::SpectralForm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub order: usize,
    pub domain: [f64; 2],
    pub xi: f64,
    pub mu_minus: MeasureDoc,
    pub mu_plus: MeasureDoc,
    pub poly: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub atoms: Vec<[f64; 2]>,
    #[serde(deserialize_with = "Option::deserialize")]
    pub density: Option<DensityDoc>,
    pub cantor: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityDoc {
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Vec<f64>>,
}

/// Why a document could not be loaded: syntax and shape errors carry the
/// JSON path and position, semantic errors the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}, column {}: ", self.line, self.column)?;
        }
        if !self.path.is_empty() && self.path != "." && self.path != "?" {
            write!(f, "at `{}`: ", self.path)?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for DocumentError {}

/// serde_json appends the position to its messages; it is reported separately.
fn strip_position(message: &str, line: usize, column: usize) -> String {
    let suffix = format!(" at line {line} column {column}");
    message.strip_suffix(&suffix).unwrap_or(message).to_string()
}

impl DocumentError {
    fn field(path: &str, err: Error) -> Self {
        Self {
            path: path.to_string(),
            line: 0,
            column: 0,
            message: err.to_string(),
        }
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            DocumentError {
                path,
                line: inner.line(),
                column: inner.column(),
                message: strip_position(&inner.to_string(), inner.line(), inner.column()),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, DocumentError> {
        let text = std::fs::read_to_string(path).map_err(|e| DocumentError {
            path: String::new(),
            line: 0,
            column: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn to_form(&self) -> Result<SpectralForm, DocumentError> {
        let domain =
            Domain::new(self.domain[0], self.domain[1]).map_err(|e| DocumentError::field("domain", e))?;
        let minus = self.mu_minus.to_measure(domain, "mu_minus")?;
        let plus = self.mu_plus.to_measure(domain, "mu_plus")?;
        if self.poly.len() > self.order + 1 {
            return Err(DocumentError::field(
                "poly",
                Error::InvalidInput(format!(
                    "{} coefficients exceed degree {}",
                    self.poly.len(),
                    self.order
                )),
            ));
        }
        SpectralForm::new(self.order, self.xi, minus, plus, Polynomial::new(self.poly.clone()))
            .map_err(|e| DocumentError::field(".", e))
    }

    pub fn from_form(form: &SpectralForm) -> Self {
        let dom = form.domain();
        let mut poly = form.poly().coeffs().to_vec();
        if poly.len() < form.order() + 1 {
            poly.resize(form.order() + 1, 0.0);
        }
        Self {
            order: form.order(),
            domain: [dom.start(), dom.end()],
            xi: form.xi(),
            mu_minus: MeasureDoc::from_measure(form.mu_minus()),
            mu_plus: MeasureDoc::from_measure(form.mu_plus()),
            poly,
        }
    }
}

impl MeasureDoc {
    pub fn to_measure(&self, domain: Domain, name: &str) -> Result<Measure, DocumentError> {
        let atoms = self.atoms.iter().map(|[x, m]| Atom::new(*x, *m)).collect();
        let density = match &self.density {
            None => None,
            Some(d) => Some(
                PiecewisePoly::new(
                    d.breakpoints.clone(),
                    d.pieces.iter().map(|c| Polynomial::new(c.clone())).collect(),
                )
                .map_err(|e| DocumentError::field(&format!("{name}.density"), e))?,
            ),
        };
        if let Some(d) = &self.density {
            if let Some(i) = d.pieces.iter().position(|c| c.len() > 4) {
                return Err(DocumentError::field(
                    &format!("{name}.density.pieces[{i}]"),
                    Error::InvalidInput("density pieces take at most 4 coefficients".into()),
                ));
            }
        }
        let cantor = self.cantor.iter().map(|[c, d, m]| CantorPart::new(*c, *d, *m)).collect();
        Measure::new(domain, atoms, density, cantor).map_err(|e| DocumentError::field(name, e))
    }

    pub fn from_measure(mu: &Measure) -> Self {
        Self {
            atoms: mu.atoms().iter().map(|a| [a.location, a.mass]).collect(),
            density: mu.density().map(|rho| DensityDoc {
                breakpoints: rho.breakpoints().to_vec(),
                pieces: rho.pieces().iter().map(|p| p.coeffs().to_vec()).collect(),
            }),
            cantor: mu.singular().iter().map(|p| [p.start, p.end, p.mass]).collect(),
        }
    }
}
