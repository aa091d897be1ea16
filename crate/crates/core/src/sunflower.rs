//! Constructive sunflower extraction.
//!
//! Follows the inductive argument behind the `k!(r-1)^k` threshold: take a
//! maximal pairwise disjoint subfamily; if it is large enough it is itself a
//! sunflower with empty center, otherwise every member meets its union, and
//! some element `x` of that union lies in many members. Recursing on the
//! link `{S - x : x in S}` and putting `x` back yields the sunflower.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::setcore::{Family, SetMask};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sunflower {
    pub center: SetMask,
    pub petals: Family,
}

impl Sunflower {
    /// Petals with the center removed (pairwise disjoint).
    pub fn cores(&self) -> Vec<SetMask> {
        self.petals.iter().map(|p| p ^ self.center).collect()
    }
}

/// Finds an `r`-petal sunflower inside a uniform family.
///
/// Always succeeds when `|a| > k!(r-1)^k`. Below the threshold it may still
/// find one; `None` means this search found none, not that none exists.
pub fn extract_sunflower(a: &Family, r: usize) -> Result<Option<Sunflower>> {
    if r == 0 {
        return Err(Error::ParamOutOfRange("r must be positive".into()));
    }
    let m = a.members();
    if let Some(first) = m.first() {
        if let Some(bad) = m.iter().find(|s| s.len() != first.len()) {
            return Err(Error::NotUniform(first.len(), bad.len()));
        }
    }
    Ok(extract(m, r).map(|(center, petals)| {
        let petals = Family::new(a.n(), petals).expect("petals are distinct members");
        Sunflower { center, petals }
    }))
}

fn extract(family: &[SetMask], r: usize) -> Option<(SetMask, Vec<SetMask>)> {
    let first = *family.first()?;
    if r == 1 {
        return Some((first, vec![first]));
    }
    // greedy maximal pairwise disjoint subfamily, ascending mask order
    let mut disjoint = Vec::new();
    let mut covered = SetMask::EMPTY;
    for &s in family {
        if s.is_disjoint(covered) {
            disjoint.push(s);
            covered = covered | s;
        }
    }
    if disjoint.len() >= r {
        disjoint.truncate(r);
        return Some((SetMask::EMPTY, disjoint));
    }
    for x in covered.elements() {
        let mut link: Vec<SetMask> = family.iter().filter(|s| s.contains(x)).map(|s| s.without(x)).collect();
        if link.len() < r {
            continue;
        }
        link.sort_unstable();
        if let Some((center, petals)) = extract(&link, r) {
            return Some((center.with(x), petals.into_iter().map(|p| p.with(x)).collect()));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicates::sunflower_check;

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::from_sets(n, sets).unwrap()
    }

    #[test]
    fn disjoint_singletons() {
        let a = fam(3, &[&[1], &[2], &[3]]);
        let sf = extract_sunflower(&a, 3).unwrap().unwrap();
        assert_eq!(sf.petals, a);
        assert!(sf.center.is_empty());
    }

    #[test]
    fn triangle_has_no_three_petals() {
        let a = fam(3, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(extract_sunflower(&a, 3).unwrap(), None);
        let two = extract_sunflower(&a, 2).unwrap().unwrap();
        assert_eq!(two.petals.len(), 2);
        assert!(sunflower_check(&two.petals).is_sunflower);
    }

    #[test]
    fn star_center_is_exact() {
        let a = fam(5, &[&[1, 2, 3], &[1, 2, 4], &[1, 2, 5]]);
        let sf = extract_sunflower(&a, 3).unwrap().unwrap();
        assert_eq!(sf.center, SetMask::from_elements(5, &[1, 2]).unwrap());
        assert_eq!(sf.cores().len(), 3);
    }

    #[test]
    fn single_petal_and_errors() {
        let a = fam(4, &[&[2, 3], &[1, 4]]);
        let sf = extract_sunflower(&a, 1).unwrap().unwrap();
        assert_eq!(sf.center, SetMask::from_elements(4, &[2, 3]).unwrap());
        assert_eq!(extract_sunflower(&Family::empty(4).unwrap(), 1).unwrap(), None);
        assert!(extract_sunflower(&a, 0).is_err());
        assert_eq!(extract_sunflower(&fam(4, &[&[1], &[2, 3]]), 2), Err(Error::NotUniform(1, 2)));
        // the empty set alone: one petal only
        let e = fam(2, &[&[]]);
        assert!(extract_sunflower(&e, 1).unwrap().is_some());
        assert!(extract_sunflower(&e, 2).unwrap().is_none());
    }
}
