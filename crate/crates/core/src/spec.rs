//! JSON spec files:
//! `{"base": n, "factors": [{"kind":"split","twists":[..]} | {"kind":"tangent"}], "multiplicities": [..]}`.

use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::chowring::BundleDescriptor;
use crate::classify::MultiBundleSpec;
use crate::symgeom::SymPowerSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error("invalid spec: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub base: u32,
    pub factors: Vec<BundleDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<u32>>,
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecError> {
    let spec: SpecFile = serde_json::from_str(text).map_err(|e| match e.classify() {
        Category::Data => SpecError::Invalid(e.to_string()),
        Category::Syntax | Category::Eof | Category::Io => SpecError::Malformed(e.to_string()),
    })?;
    spec.validate()?;
    Ok(spec)
}

impl SpecFile {
    pub fn validate(&self) -> Result<(), SpecError> {
        let invalid = |e: crate::error::Error| SpecError::Invalid(e.to_string());
        MultiBundleSpec::new(self.base, self.factors.clone()).map_err(invalid)?;
        if let Some(m) = &self.multiplicities {
            if m.len() != self.factors.len() {
                return Err(SpecError::Invalid(format!(
                    "{} multiplicities for {} factors",
                    m.len(),
                    self.factors.len()
                )));
            }
            if m.contains(&0) {
                return Err(SpecError::Invalid("multiplicities must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn multiplicity(&self, i: usize) -> u32 {
        self.multiplicities.as_ref().map_or(1, |m| m[i])
    }

    /// Factor list with each factor repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<BundleDescriptor> {
        self.factors
            .iter()
            .enumerate()
            .flat_map(|(i, d)| std::iter::repeat_n(d.clone(), self.multiplicity(i) as usize))
            .collect()
    }

    pub fn to_multi(&self) -> MultiBundleSpec {
        MultiBundleSpec {
            n: self.base,
            factors: self.expanded(),
        }
    }

    /// Distinct normalized factors with summed multiplicities, in first-seen order.
    pub fn grouped(&self) -> Vec<(BundleDescriptor, u32)> {
        let mut out: Vec<(BundleDescriptor, u32)> = Vec::new();
        for (i, d) in self.factors.iter().enumerate() {
            let norm = d.normalized();
            match out.iter_mut().find(|(e, _)| *e == norm) {
                Some((_, a)) => *a += self.multiplicity(i),
                None => out.push((norm, self.multiplicity(i))),
            }
        }
        out
    }

    /// The single factor of a symmetric-power spec.
    pub fn single_factor(&self) -> Result<&BundleDescriptor, SpecError> {
        match (self.factors.as_slice(), self.multiplicity(0)) {
            ([d], 1) => Ok(d),
            _ => Err(SpecError::Invalid("symmetric power needs exactly one factor of multiplicity 1".into())),
        }
    }

    pub fn to_sym(&self, r: u32) -> Result<SymPowerSpec, SpecError> {
        SymPowerSpec::new(self.base, self.single_factor()?.clone(), r).map_err(|e| SpecError::Invalid(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_split() {
        let s = parse_spec(r#"{"base":1,"factors":[{"kind":"split","twists":[0,1]}]}"#).unwrap();
        assert_eq!(s.base, 1);
        assert_eq!(s.factors, vec![BundleDescriptor::split(vec![0, 1])]);
        assert_eq!(s.to_multi().factors.len(), 1);
    }

    #[test]
    fn rejects_invalid() {
        let cases = [
            r#"{"base":1,"factors":[{"kind":"tangent"}]}"#,
            r#"{"base":2,"factors":[{"kind":"split","twists":[3]}]}"#,
            r#"{"base":2,"factors":[{"kind":"split","twists":[0,0]}],"multiplicities":[1,1]}"#,
            r#"{"base":2,"factors":[{"kind":"split","twists":[0,0]}],"multiplicities":[0]}"#,
            r#"{"base":2,"factors":[{"kind":"split","twists":[0,0]}],"extra":1}"#,
            r#"{"base":2,"factors":[{"kind":"cotangent"}]}"#,
            r#"{"base":0,"factors":[{"kind":"split","twists":[0,0]}]}"#,
            r#"{"base":-1,"factors":[{"kind":"split","twists":[0,0]}]}"#,
            r#"{"base":2,"factors":[]}"#,
        ];
        for c in cases {
            assert!(matches!(parse_spec(c), Err(SpecError::Invalid(_))), "{c}");
        }
    }

    #[test]
    fn rejects_malformed() {
        for c in ["", "{", r#"{"base":1,"factors":[}"#, "not json"] {
            assert!(matches!(parse_spec(c), Err(SpecError::Malformed(_))), "{c:?}");
        }
    }

    #[test]
    fn round_trip_is_lossless() {
        for text in [
            r#"{"base":2,"factors":[{"kind":"split","twists":[0,1,3]},{"kind":"tangent"}],"multiplicities":[2,1]}"#,
            r#"{"base":1,"factors":[{"kind":"split","twists":[5,5]}]}"#,
        ] {
            let s = parse_spec(text).unwrap();
            let back = parse_spec(&serde_json::to_string(&s).unwrap()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn grouping_merges_twists() {
        let s = parse_spec(
            r#"{"base":1,"factors":[{"kind":"split","twists":[0,1]},{"kind":"split","twists":[4,3]},{"kind":"split","twists":[0,0]}],"multiplicities":[1,2,1]}"#,
        )
        .unwrap();
        assert_eq!(
            s.grouped(),
            vec![(BundleDescriptor::split(vec![0, 1]), 3), (BundleDescriptor::split(vec![0, 0]), 1)]
        );
        assert_eq!(s.expanded().len(), 4);
    }
}
