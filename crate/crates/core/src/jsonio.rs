//! JSON schemas for the file formats consumed and produced by the CLI.
//!
//! Matrix entries are JSON numbers when they fit in 64 bits and decimal
//! strings otherwise; both are accepted on input.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::forms::{QuadraticRefinement, SkewForm};
use crate::halgebra::{BigradedSeries, FreeCdgaPresentation, GenSpec, Parity};
use crate::matrix::IntMatrix;
use crate::simplicial::SimplicialComplex;

/// A big integer that serializes as a number when possible and as a
/// decimal string beyond 64 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(JsonInt(BigInt::from(i)))
                } else if let Some(u) = n.as_u64() {
                    Ok(JsonInt(BigInt::from(u)))
                } else {
                    Err(D::Error::custom("matrix entries must be integers"))
                }
            }
            serde_json::Value::String(s) => s
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(|e| D::Error::custom(format!("bad integer string: {e}"))),
            other => Err(D::Error::custom(format!(
                "expected integer or string, got {other}"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<JsonInt>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| JsonInt(m.get(i, j).clone())).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<IntMatrix> {
        if self.entries.len() != self.rows
            || self.entries.iter().any(|r| r.len() != self.cols)
        {
            return Err(Error::DimensionMismatch(
                "entry grid does not match rows x cols".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .flat_map(|r| r.iter().map(|e| e.0.clone()))
            .collect();
        IntMatrix::new(self.rows, self.cols, entries)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormJson {
    pub gram: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qvals: Option<Vec<u8>>,
}

impl FormJson {
    pub fn from_form(f: &SkewForm) -> Self {
        FormJson {
            gram: MatrixJson::from_matrix(f.gram()),
            qvals: None,
        }
    }

    pub fn to_form(&self) -> Result<SkewForm> {
        SkewForm::new(self.gram.to_matrix()?)
    }

    pub fn to_refinement(&self) -> Result<(SkewForm, QuadraticRefinement)> {
        let form = self.to_form()?;
        let Some(qvals) = &self.qvals else {
            return Err(Error::InvalidInput(
                "refinement input needs a qvals array".into(),
            ));
        };
        let q = QuadraticRefinement::from_general(&form, qvals)?;
        Ok((form, q))
    }
}

/// Complex files list vertex labels and maximal simplices as index arrays
/// into the vertex list; the downward closure is computed on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<serde_json::Value>,
    pub maximal_simplices: Vec<Vec<u32>>,
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        let labels: Vec<String> = self
            .vertices
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        SimplicialComplex::from_maximal(labels, &self.maximal_simplices)
    }

    pub fn from_complex(c: &SimplicialComplex) -> Self {
        // A simplex is maximal iff it has no coface one dimension up, so
        // one facet-marking sweep per level suffices.
        let mut maximal: Vec<Vec<u32>> = Vec::new();
        let dim = c.dim();
        for k in 0..=dim.max(0) as usize {
            let Some(level) = c.level(k) else { continue };
            let mut has_coface = vec![false; level.len()];
            if let Some(upper) = c.level(k + 1) {
                let mut face = Vec::with_capacity(k + 1);
                for s in upper.iter() {
                    for drop in 0..s.len() {
                        face.clear();
                        face.extend(
                            s.iter()
                                .enumerate()
                                .filter(|&(i, _)| i != drop)
                                .map(|(_, &v)| v),
                        );
                        if let Some(ix) = level.position(&face) {
                            has_coface[ix] = true;
                        }
                    }
                }
            }
            for (i, s) in level.iter().enumerate() {
                if !has_coface[i] {
                    maximal.push(s.to_vec());
                }
            }
        }
        maximal.sort();
        ComplexJson {
            vertices: c
                .labels()
                .iter()
                .map(|l| serde_json::Value::String(l.clone()))
                .collect(),
            maximal_simplices: maximal,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub g: u32,
    pub d: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub differential: std::collections::BTreeMap<String, String>,
}

impl PresentationJson {
    pub fn to_generators(&self) -> Result<Vec<GenSpec>> {
        self.generators
            .iter()
            .map(|g| {
                let parity = match g.parity.as_deref() {
                    None => Parity::of_degree(g.d),
                    Some("even") => Parity::Even,
                    Some("odd") => Parity::Odd,
                    Some(other) => {
                        return Err(Error::Parse(format!(
                            "parity must be \"even\" or \"odd\", got {other:?}"
                        )))
                    }
                };
                Ok(GenSpec::with_parity(&g.name, g.g, g.d, parity))
            })
            .collect()
    }

    pub fn to_presentation(&self) -> Result<FreeCdgaPresentation> {
        let gens = self.to_generators()?;
        let mut diffs = vec![None; gens.len()];
        for (name, poly) in &self.differential {
            let Some(ix) = gens.iter().position(|g| &g.name == name) else {
                return Err(Error::Parse(format!(
                    "differential given for unknown generator {name}"
                )));
            };
            diffs[ix] = Some(crate::halgebra::parse_polynomial(&gens, poly)?);
        }
        FreeCdgaPresentation::new(gens, diffs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesEntryJson {
    pub g: u32,
    pub d: u32,
    pub dim: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub max_g: u32,
    pub max_d: u32,
    pub support: Vec<SeriesEntryJson>,
}

impl SeriesJson {
    pub fn from_series(s: &BigradedSeries) -> Self {
        SeriesJson {
            max_g: s.max_g(),
            max_d: s.max_d(),
            support: s
                .support()
                .into_iter()
                .map(|(g, d, v)| SeriesEntryJson {
                    g,
                    d,
                    dim: if v.is_integer() {
                        v.numer().to_string()
                    } else {
                        v.to_string()
                    },
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_with_big_entries() {
        let mut m = IntMatrix::zero(2, 2);
        m.set(0, 0, BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap());
        m.set(1, 1, BigInt::from(-7));
        let j = MatrixJson::from_matrix(&m);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"123456789012345678901234567890\""));
        assert!(text.contains("-7"));
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn form_round_trip() {
        let f = SkewForm::hyperbolic(2);
        let j = FormJson::from_form(&f);
        let text = serde_json::to_string_pretty(&j).unwrap();
        let back: FormJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_form().unwrap(), f);
    }

    #[test]
    fn complex_round_trip() {
        let c = SimplicialComplex::simplex_boundary(2);
        let j = ComplexJson::from_complex(&c);
        assert_eq!(j.maximal_simplices.len(), 4);
        let back = j.to_complex().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn presentation_parsing() {
        let text = r#"{
            "generators": [
                {"name": "s1", "g": 1, "d": 0},
                {"name": "rho", "g": 2, "d": 1}
            ],
            "differential": {"rho": "s1^2"}
        }"#;
        let j: PresentationJson = serde_json::from_str(text).unwrap();
        let pres = j.to_presentation().unwrap();
        assert_eq!(pres.generators.len(), 2);
        assert!(pres.differentials[1].is_some());
    }
}
