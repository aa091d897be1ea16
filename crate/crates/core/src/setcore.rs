//! Subsets of a small ground set `[n]` as bit masks, and duplicate-free
//! families of them.
//!
//! Element `p` of `[n]` (1-based, as users write it) lives in bit `p - 1`.
//! The translation happens only in [`SetMask::from_elements`],
//! [`SetMask::elements`] and the family file layer in [`crate::io`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground set. Every mask fits a `u32`.
pub const MAX_N: usize = 30;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::NOutOfRange(n))
    }
}

/// One subset of `[n]`. The mask does not remember `n`; the owning
/// [`Family`] guarantees that no bit at position `>= n` is set.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetMask(u32);

impl SetMask {
    pub const EMPTY: SetMask = SetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        SetMask(bits)
    }

    /// The whole ground set `[n]`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_N);
        SetMask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(element: usize) -> Self {
        debug_assert!((1..=MAX_N).contains(&element));
        SetMask(1 << (element - 1))
    }

    pub fn from_elements(n: usize, elements: &[usize]) -> Result<Self> {
        check_n(n)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SetMask(bits))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, element: usize) -> bool {
        element >= 1 && element <= 32 && self.0 >> (element - 1) & 1 == 1
    }

    pub const fn is_subset(self, other: SetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: SetMask) -> bool {
        self.0 & other.0 == 0
    }

    pub const fn with(self, element: usize) -> Self {
        SetMask(self.0 | 1 << (element - 1))
    }

    pub const fn without(self, element: usize) -> Self {
        SetMask(self.0 & !(1 << (element - 1)))
    }

    /// `[n] - self`.
    pub fn complement(self, n: usize) -> Self {
        SetMask(!self.0 & SetMask::full(n).0)
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(p + 1)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }
}

impl BitOr for SetMask {
    type Output = SetMask;
    fn bitor(self, rhs: SetMask) -> SetMask {
        SetMask(self.0 | rhs.0)
    }
}

impl BitAnd for SetMask {
    type Output = SetMask;
    fn bitand(self, rhs: SetMask) -> SetMask {
        SetMask(self.0 & rhs.0)
    }
}

impl BitXor for SetMask {
    type Output = SetMask;
    fn bitxor(self, rhs: SetMask) -> SetMask {
        SetMask(self.0 ^ rhs.0)
    }
}

/// Raw bitwise negation; callers mask with [`SetMask::full`] as needed.
impl Not for SetMask {
    type Output = SetMask;
    fn not(self) -> SetMask {
        SetMask(!self.0)
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as the list of its 1-based elements.
impl Serialize for SetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for e in self.elements() {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

/// All `k`-subsets of `[n]` in increasing mask order (which is colex order).
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = SetMask> {
    let limit = 1u64 << n;
    let mut next = if k > n { limit } else { (1u64 << k) - 1 };
    std::iter::from_fn(move || {
        if next >= limit {
            return None;
        }
        let cur = next;
        next = if cur == 0 {
            limit
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            (((r ^ cur) >> 2) / c) | r
        };
        Some(SetMask(cur as u32))
    })
}

/// A duplicate-free set system over `[n]`, stored in strictly increasing
/// mask order so that two families are equal iff their member lists are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: usize,
    members: Vec<SetMask>,
}

impl Family {
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Family { n, members: Vec::new() })
    }

    /// Builds a family from masks in any order. Duplicates are an error.
    pub fn new(n: usize, members: impl IntoIterator<Item = SetMask>) -> Result<Self> {
        check_n(n)?;
        let full = SetMask::full(n);
        let mut members: Vec<SetMask> = members.into_iter().collect();
        for m in &members {
            if !m.is_subset(full) {
                let element = (m.bits() & !full.bits()).trailing_zeros() as usize + 1;
                return Err(Error::ElementOutOfRange { element, n });
            }
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSet(w[0].to_string()));
        }
        Ok(Family { n, members })
    }

    /// `make_family`: 1-based element lists to a canonical family.
    pub fn from_sets<S: AsRef<[usize]>>(n: usize, sets: &[S]) -> Result<Self> {
        check_n(n)?;
        let masks = sets
            .iter()
            .map(|s| SetMask::from_elements(n, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Family::new(n, masks)
    }

    pub(crate) fn from_sorted(n: usize, members: Vec<SetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family { n, members }
    }

    pub fn power_set(n: usize) -> Result<Self> {
        check_n(n)?;
        let members = (0..1u64 << n).map(|b| SetMask(b as u32)).collect();
        Ok(Family { n, members })
    }

    /// The complete layer `([n] choose k)`.
    pub fn layer(n: usize, k: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Family { n, members: k_subsets(n, k).collect() })
    }

    /// Every subset of `[n]` with at least `k` elements.
    pub fn at_least(n: usize, k: usize) -> Result<Self> {
        check_n(n)?;
        let members = (0..1u64 << n)
            .map(|b| SetMask(b as u32))
            .filter(|m| m.len() >= k)
            .collect();
        Ok(Family { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = SetMask> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, set: SetMask) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    pub fn to_element_lists(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.to_vec()).collect()
    }

    /// Members common to both families. Both must live over the same `[n]`.
    pub fn intersection(&self, other: &Family) -> Family {
        assert_eq!(self.n, other.n, "families over different ground sets");
        let members = self.iter().filter(|m| other.contains(*m)).collect();
        Family::from_sorted(self.n, members)
    }

    /// Union of two families over the same `[n]`.
    pub fn union(&self, other: &Family) -> Family {
        assert_eq!(self.n, other.n, "families over different ground sets");
        let set: BTreeSet<SetMask> = self.iter().chain(other.iter()).collect();
        Family::from_sorted(self.n, set.into_iter().collect())
    }

    /// `F^i`: the members with exactly `i` elements.
    pub fn level(&self, i: usize) -> Family {
        let members = self.iter().filter(|m| m.len() == i).collect();
        Family::from_sorted(self.n, members)
    }

    /// `|F^i|` for `i = 0..=n`.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n + 1];
        for m in &self.members {
            sizes[m.len()] += 1;
        }
        sizes
    }

    /// Common member size, or `None` for an empty or mixed family.
    pub fn uniformity(&self) -> Option<usize> {
        let k = self.members.first()?.len();
        self.members.iter().all(|m| m.len() == k).then_some(k)
    }

    /// `F' = { [n] - F : F in F }`.
    pub fn complement(&self) -> Family {
        let mut members: Vec<SetMask> = self.iter().map(|m| m.complement(self.n)).collect();
        members.sort_unstable();
        Family::from_sorted(self.n, members)
    }

    /// `G = F ∩ F'`: members whose complement is also a member.
    pub fn self_complementary_core(&self) -> Family {
        let members = self
            .iter()
            .filter(|m| self.contains(m.complement(self.n)))
            .collect();
        Family::from_sorted(self.n, members)
    }

    /// Closed under supersets. Checking one-element extensions suffices.
    pub fn is_upset(&self) -> bool {
        self.first_upward_gap().is_none()
    }

    /// Smallest member `A` (by mask) having a one-element extension `B`
    /// outside the family, together with the smallest such `B`.
    fn first_upward_gap(&self) -> Option<(SetMask, SetMask)> {
        self.members.iter().find_map(|&a| {
            (1..=self.n)
                .filter(|&x| !a.contains(x))
                .map(|x| a.with(x))
                .find(|&b| !self.contains(b))
                .map(|b| (a, b))
        })
    }

    /// Repeatedly replaces a member `A` by a superset `B` not in the
    /// family until the family is an upset. Size is preserved.
    ///
    /// Each step takes the violating pair with the smallest `|B - A|`, ties
    /// broken by the smallest `A` and then the smallest `B`. A non-upset
    /// always has a violation with `|B - A| = 1` (walk any chain from `A` to
    /// `B` and stop at the first step leaving the family), so only
    /// one-element extensions are ever inspected. The sum of member sizes
    /// grows every step, which bounds the number of steps.
    pub fn compress_to_upset(&self) -> Family {
        let mut set: BTreeSet<SetMask> = self.iter().collect();
        loop {
            let gap = set.iter().find_map(|&a| {
                (1..=self.n)
                    .filter(|&x| !a.contains(x))
                    .map(|x| a.with(x))
                    .find(|b| !set.contains(b))
                    .map(|b| (a, b))
            });
            match gap {
                Some((a, b)) => {
                    set.remove(&a);
                    set.insert(b);
                }
                None => break,
            }
        }
        Family::from_sorted(self.n, set.into_iter().collect())
    }
}

/// Serialized in the family file shape `{"n": .., "sets": [..]}`.
impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Family", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("sets", &self.members)?;
        st.end()
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, ", self.n)?;
        f.debug_list().entries(self.members.iter()).finish()?;
        f.write_str(")")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Which extremal problem a parameter bundle refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "kebab-case")]
pub enum Regime {
    /// Pairwise unions are `l`-intersecting.
    UnionL { l: usize },
    /// `(s,t)`-union-intersecting, `s <= t`.
    St { s: usize, t: usize },
    /// `k`-uniform and `(s,t)`-union-intersecting, `s <= t`.
    Uniform { k: usize, s: usize, t: usize },
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Regime::UnionL { l } => write!(f, "union-{l}-intersecting"),
            Regime::St { s, t } => write!(f, "({s},{t})-union-intersecting"),
            Regime::Uniform { k, s, t } => write!(f, "{k}-uniform ({s},{t})-union-intersecting"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub n: usize,
    #[serde(flatten)]
    pub regime: Regime,
}

impl ProblemSpec {
    pub fn union_l(n: usize, l: usize) -> Result<Self> {
        check_n(n)?;
        if n < 3 {
            return Err(Error::ParamOutOfRange(format!("n = {n} < 3")));
        }
        if l == 0 {
            return Err(Error::ParamOutOfRange("l must be positive".into()));
        }
        Ok(ProblemSpec { n, regime: Regime::UnionL { l } })
    }

    /// `s` and `t` are swapped if needed so that `s <= t`.
    pub fn st(n: usize, s: usize, t: usize) -> Result<Self> {
        check_n(n)?;
        if n < 3 {
            return Err(Error::ParamOutOfRange(format!("n = {n} < 3")));
        }
        let (s, t) = normalize_st(s, t)?;
        Ok(ProblemSpec { n, regime: Regime::St { s, t } })
    }

    pub fn uniform(n: usize, k: usize, s: usize, t: usize) -> Result<Self> {
        check_n(n)?;
        if k == 0 || k > n {
            return Err(Error::ParamOutOfRange(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        let (s, t) = normalize_st(s, t)?;
        Ok(ProblemSpec { n, regime: Regime::Uniform { k, s, t } })
    }
}

pub(crate) fn normalize_st(s: usize, t: usize) -> Result<(usize, usize)> {
    if s == 0 || t == 0 {
        return Err(Error::ParamOutOfRange("s and t must be positive".into()));
    }
    Ok((s.min(t), s.max(t)))
}
