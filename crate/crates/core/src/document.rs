//! JSON exchange format for form tuples. Coefficients are strings (`"3"`,
//! `"-2/5"`) so no binary float ever enters the pipeline.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::Rational;
use crate::forms::{BinaryForm, FormTuple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleDocument {
    pub d: usize,
    pub r: usize,
    /// `r + 1` rows of `d + 1` coefficients, `forms[i][j] = s_ij`.
    pub forms: Vec<Vec<String>>,
}

/// Parses `"p/q"` or an integer. Rejects a zero denominator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    Rational::from_str(s).map_err(|e| Error::Parse(format!("{s:?} is not a rational number: {e}")))
}

impl TupleDocument {
    pub fn from_tuple(t: &FormTuple) -> Self {
        Self {
            d: t.degree(),
            r: t.r(),
            forms: t
                .forms()
                .iter()
                .map(|f| f.coeffs().iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn to_tuple(&self) -> Result<FormTuple> {
        if self.forms.len() != self.r + 1 {
            return Err(Error::Parse(format!(
                "r = {} needs {} forms, found {}",
                self.r,
                self.r + 1,
                self.forms.len()
            )));
        }
        let forms = self
            .forms
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.d + 1 {
                    return Err(Error::Parse(format!(
                        "form {i} has {} coefficients, expected d + 1 = {}",
                        row.len(),
                        self.d + 1
                    )));
                }
                let coeffs = row
                    .iter()
                    .map(|c| parse_rational(c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(BinaryForm::new(coeffs))
            })
            .collect::<Result<Vec<_>>>()?;
        FormTuple::new(forms)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// Reads a document and builds the tuple in one step.
    pub fn parse_tuple(text: &str) -> Result<FormTuple> {
        Self::from_json(text)?.to_tuple()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ratio;

    #[test]
    fn parses_integers_and_fractions() {
        let doc =
            TupleDocument::from_json(r#"{"d":2,"r":1,"forms":[["1","0","-3/6"],["0"," 2 ","0"]]}"#)
                .unwrap();
        let t = doc.to_tuple().unwrap();
        assert_eq!(t.coeff(0, 2), ratio(-1, 2));
        assert_eq!(
            TupleDocument::from_tuple(&t).forms[0],
            vec!["1", "0", "-1/2"]
        );
    }

    #[test]
    fn rejects_bad_input() {
        let zero_den = r#"{"d":1,"r":0,"forms":[["1/0","1"]]}"#;
        assert!(matches!(
            TupleDocument::parse_tuple(zero_den),
            Err(Error::Parse(_))
        ));
        let short = r#"{"d":2,"r":0,"forms":[["1","1"]]}"#;
        assert!(matches!(
            TupleDocument::parse_tuple(short),
            Err(Error::Parse(_))
        ));
        let forms = r#"{"d":1,"r":1,"forms":[["1","1"]]}"#;
        assert!(matches!(
            TupleDocument::parse_tuple(forms),
            Err(Error::Parse(_))
        ));
        let zero = r#"{"d":1,"r":0,"forms":[["0","0"]]}"#;
        assert_eq!(TupleDocument::parse_tuple(zero), Err(Error::AllZeroTuple));
        assert!(matches!(
            TupleDocument::parse_tuple("{"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_rational("1.5"), Err(Error::Parse(_))));
    }

    #[test]
    fn round_trip() {
        let t = FormTuple::from_i64(&[&[1, -2, 0], &[0, 5, 7]]).unwrap();
        let doc = TupleDocument::from_tuple(&t);
        assert_eq!(TupleDocument::from_json(&doc.to_json()).unwrap(), doc);
        assert_eq!(doc.to_tuple().unwrap(), t);
    }
}
