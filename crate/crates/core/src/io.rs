//! The family file: a JSON document `{"n": .., "sets": [[..], ..]}` with
//! 1-based, strictly increasing inner lists.
//!
//! [`to_canonical_json`] is the only writer. It orders sets by mask value
//! and lays the document out one set per line, so parsing and re-emitting a
//! canonical file reproduces it byte for byte.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setcore::Family;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

impl FamilyFile {
    pub fn into_family(self) -> Result<Family> {
        for set in &self.sets {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotStrictlyIncreasing(set.clone()));
            }
        }
        Family::from_sets(self.n, &self.sets)
    }
}

impl From<&Family> for FamilyFile {
    fn from(f: &Family) -> Self {
        FamilyFile { n: f.n(), sets: f.to_element_lists() }
    }
}

pub fn parse_family(text: &str) -> Result<Family> {
    let file: FamilyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_family()
}

pub fn to_canonical_json(f: &Family) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"n\": {},\n  \"sets\": [", f.n());
    for (i, m) in f.iter().enumerate() {
        out.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
        for (j, e) in m.elements().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{e}");
        }
        out.push(']');
    }
    if !f.is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_layout() {
        let f = Family::from_sets(3, &[vec![1, 2], vec![], vec![1]]).unwrap();
        let text = to_canonical_json(&f);
        assert_eq!(text, "{\n  \"n\": 3,\n  \"sets\": [\n    [],\n    [1],\n    [1, 2]\n  ]\n}\n");
        assert_eq!(parse_family(&text).unwrap(), f);
        assert_eq!(to_canonical_json(&parse_family(&text).unwrap()), text);

        let empty = Family::empty(4).unwrap();
        assert_eq!(to_canonical_json(&empty), "{\n  \"n\": 4,\n  \"sets\": []\n}\n");
    }

    #[test]
    fn parse_accepts_any_layout_but_checks_content() {
        let f = parse_family(r#"{"sets": [[2,3],[1]], "n": 3}"#).unwrap();
        assert_eq!(f.to_element_lists(), vec![vec![1], vec![2, 3]]);
        assert_eq!(
            parse_family(r#"{"n": 3, "sets": [[2,1]]}"#),
            Err(Error::NotStrictlyIncreasing(vec![2, 1]))
        );
        assert!(matches!(parse_family(r#"{"n": 3, "sets": [[1],[1]]}"#), Err(Error::DuplicateSet(_))));
        assert!(matches!(parse_family(r#"{"n": 3}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_family(r#"{"n": 3, "sets": [], "x": 1}"#), Err(Error::Parse(_))));
    }
}
