//! Decision procedures for the intersection properties of set systems.
//!
//! Each `find_*` function returns the first violating configuration it
//! meets, and the matching `is_*` function is its negation. A
//! [`Violation`] always names two groups of members whose unions
//! intersect in too few elements.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::setcore::{Family, ProblemSpec, Regime, SetMask};

/// Two groups of members whose unions meet in too few elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub left: Vec<SetMask>,
    pub right: Vec<SetMask>,
}

impl Violation {
    pub fn left_union(&self) -> SetMask {
        self.left.iter().fold(SetMask::EMPTY, |acc, &m| acc | m)
    }

    pub fn right_union(&self) -> SetMask {
        self.right.iter().fold(SetMask::EMPTY, |acc, &m| acc | m)
    }

    /// Size of the intersection of the two unions.
    pub fn overlap(&self) -> usize {
        (self.left_union() & self.right_union()).len()
    }
}

/// `|A ∩ B| >= l` for all members `A`, `B`, including `A = B`.
pub fn is_l_intersecting(f: &Family, l: usize) -> bool {
    find_l_intersecting_violation(f, l).is_none()
}

pub fn find_l_intersecting_violation(f: &Family, l: usize) -> Option<Violation> {
    let m = f.members();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i..] {
            if (a & b).len() < l {
                return Some(Violation { left: vec![a], right: vec![b] });
            }
        }
    }
    None
}

/// `|(F1 ∪ F2) ∩ (G1 ∪ G2)| >= l` whenever `F1 != F2` and `G1 != G2`.
///
/// The two pairs may share members or coincide; in particular every union
/// of two distinct members must itself have at least `l` elements.
pub fn is_union_l_intersecting(f: &Family, l: usize) -> bool {
    find_union_l_violation(f, l).is_none()
}

pub fn find_union_l_violation(f: &Family, l: usize) -> Option<Violation> {
    let m = f.members();
    // distinct pairwise unions, each with the first pair producing it
    let mut unions: BTreeMap<SetMask, (SetMask, SetMask)> = BTreeMap::new();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            unions.entry(a | b).or_insert((a, b));
        }
    }
    let unions: Vec<_> = unions.into_iter().collect();
    for (i, &(u, (f1, f2))) in unions.iter().enumerate() {
        for &(v, (g1, g2)) in &unions[i..] {
            if (u & v).len() < l {
                return Some(Violation { left: vec![f1, f2], right: vec![g1, g2] });
            }
        }
    }
    None
}

/// How [`find_st_violation_by`] looks for disjoint unions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StRoute {
    /// Subset-sum counts of members below every mask of `[n]`; linear in
    /// `2^n`, independent of `s` and `t`.
    Counting,
    /// Enumerate the smaller group, count members avoiding its union.
    Combinations,
}

const COUNTING_MAX_N: usize = 16;

/// For all `s + t` pairwise different members `F_1..F_s, G_1..G_t`, the
/// union of the `F_i` meets the union of the `G_j`.
pub fn is_st_union_intersecting(f: &Family, s: usize, t: usize) -> bool {
    find_st_violation(f, s, t).is_none()
}

pub fn find_st_violation(f: &Family, s: usize, t: usize) -> Option<Violation> {
    let route = if f.n() <= COUNTING_MAX_N { StRoute::Counting } else { StRoute::Combinations };
    find_st_violation_by(f, s, t, route)
}

/// The returned violation has `s` members on the left and `t` on the right.
pub fn find_st_violation_by(f: &Family, s: usize, t: usize, route: StRoute) -> Option<Violation> {
    assert!(s >= 1 && t >= 1, "s and t must be positive");
    if f.len() < s + t {
        return None;
    }
    match route {
        StRoute::Counting => st_by_counting(f, s, t),
        StRoute::Combinations => st_by_combinations(f, s, t),
    }
}

/// A violation exists iff some `U` has `s` members below it and `t` other
/// members below `[n] - U`. Nonempty members below `U` and below its
/// complement are automatically distinct; only the empty set can sit on
/// both sides and it may be used once.
fn st_by_counting(f: &Family, s: usize, t: usize) -> Option<Violation> {
    let n = f.n();
    assert!(n <= COUNTING_MAX_N, "counting route needs n <= {COUNTING_MAX_N}");
    let size = 1usize << n;
    let full = size - 1;
    let mut below = vec![0u32; size];
    for m in f.iter().filter(|m| !m.is_empty()) {
        below[m.bits() as usize] = 1;
    }
    for bit in 0..n {
        let b = 1 << bit;
        for mask in 0..size {
            if mask & b != 0 {
                below[mask] += below[mask ^ b];
            }
        }
    }
    let has_empty = usize::from(f.contains(SetMask::EMPTY));
    let (s32, t32) = (s as u32, t as u32);
    let e = has_empty as u32;

    for u in 0..size {
        let (a, b) = (below[u], below[full ^ u]);
        let empty_left = if a >= s32 && b + e >= t32 {
            false
        } else if a + e >= s32 && b >= t32 {
            true
        } else {
            continue;
        };
        let pick = |within: usize, count: usize| -> Vec<SetMask> {
            f.iter()
                .filter(|m| !m.is_empty() && m.bits() as usize & !within == 0)
                .take(count)
                .collect()
        };
        let (mut left, mut right) = if empty_left {
            (pick(u, s - 1), pick(full ^ u, t))
        } else {
            (pick(u, s), pick(full ^ u, t))
        };
        if empty_left {
            left.insert(0, SetMask::EMPTY);
        } else if right.len() < t {
            right.insert(0, SetMask::EMPTY);
        }
        return Some(Violation { left, right });
    }
    None
}

fn st_by_combinations(f: &Family, s: usize, t: usize) -> Option<Violation> {
    let m = f.members();
    let (small, large) = (s.min(t), s.max(t));
    let mut chosen = Vec::with_capacity(small);
    let found = choose_group(m, small, large, 0, SetMask::EMPTY, &mut chosen)?;
    let (group, others) = found;
    Some(if small == s {
        Violation { left: group, right: others }
    } else {
        Violation { left: others, right: group }
    })
}

fn choose_group(
    m: &[SetMask],
    small: usize,
    large: usize,
    from: usize,
    union: SetMask,
    chosen: &mut Vec<usize>,
) -> Option<(Vec<SetMask>, Vec<SetMask>)> {
    if chosen.len() == small {
        let others: Vec<SetMask> = m
            .iter()
            .enumerate()
            .filter(|(i, x)| !chosen.contains(i) && x.is_disjoint(union))
            .map(|(_, &x)| x)
            .take(large)
            .collect();
        return (others.len() == large)
            .then(|| (chosen.iter().map(|&i| m[i]).collect(), others));
    }
    for i in from..m.len() {
        chosen.push(i);
        if let Some(found) = choose_group(m, small, large, i + 1, union | m[i], chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// The poset `K_xy`: `x` minimal elements, each below all `y` maximal ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PosetPattern {
    pub x: usize,
    pub y: usize,
}

impl PosetPattern {
    pub fn new(x: usize, y: usize) -> Option<Self> {
        (x >= 1 && y >= 1).then_some(PosetPattern { x, y })
    }
}

/// An injective copy of `K_xy`: every `lower` member is contained in every
/// `upper` member, and all `x + y` members are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub lower: Vec<SetMask>,
    pub upper: Vec<SetMask>,
}

pub fn contains_pattern(f: &Family, p: PosetPattern) -> bool {
    find_pattern(f, p).is_some()
}

/// Picks the upper sets first, keeping the common strict-subset pool of the
/// chosen ones, and gives up on a branch once the pool is smaller than `x`.
pub fn find_pattern(f: &Family, p: PosetPattern) -> Option<Embedding> {
    let m = f.members();
    let below: Vec<Vec<usize>> = m
        .iter()
        .map(|&b| (0..m.len()).filter(|&a| m[a] != b && m[a].is_subset(b)).collect())
        .collect();
    let uppers: Vec<usize> = (0..m.len()).filter(|&b| below[b].len() >= p.x).collect();
    let all: Vec<usize> = (0..m.len()).collect();
    let mut chosen = Vec::with_capacity(p.y);
    let lower = pick_uppers(&below, &uppers, p, 0, &all, &mut chosen)?;
    Some(Embedding {
        lower: lower.into_iter().take(p.x).map(|i| m[i]).collect(),
        upper: chosen.iter().map(|&i| m[i]).collect(),
    })
}

fn pick_uppers(
    below: &[Vec<usize>],
    uppers: &[usize],
    p: PosetPattern,
    from: usize,
    pool: &[usize],
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if chosen.len() == p.y {
        return Some(pool.to_vec());
    }
    for (idx, &b) in uppers.iter().enumerate().skip(from) {
        let next: Vec<usize> = pool.iter().copied().filter(|a| below[b].binary_search(a).is_ok()).collect();
        if next.len() < p.x {
            continue;
        }
        chosen.push(b);
        if let Some(found) = pick_uppers(below, uppers, p, idx + 1, &next, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SunflowerCheck {
    pub center: SetMask,
    pub is_sunflower: bool,
}

/// All pairwise intersections equal. A single set is a sunflower whose
/// center is the set itself; an empty family is not a sunflower.
pub fn sunflower_check(sets: &Family) -> SunflowerCheck {
    let m = sets.members();
    let center = match m {
        [] => return SunflowerCheck { center: SetMask::EMPTY, is_sunflower: false },
        [only] => *only,
        [a, b, ..] => *a & *b,
    };
    let is_sunflower = m
        .iter()
        .enumerate()
        .all(|(i, &a)| m[i + 1..].iter().all(|&b| a & b == center));
    SunflowerCheck { center, is_sunflower }
}

/// The property that defines `spec`'s regime, with its first violation.
/// A member of the wrong size in a uniform regime is reported as a
/// one-sided violation naming that member.
pub fn find_regime_violation(spec: &ProblemSpec, f: &Family) -> Option<Violation> {
    match spec.regime {
        Regime::UnionL { l } => find_union_l_violation(f, l),
        Regime::St { s, t } => find_st_violation(f, s, t),
        Regime::Uniform { k, s, t } => match f.iter().find(|m| m.len() != k) {
            Some(bad) => Some(Violation { left: vec![bad], right: vec![] }),
            None => find_st_violation(f, s, t),
        },
    }
}

pub fn satisfies(spec: &ProblemSpec, f: &Family) -> bool {
    f.n() == spec.n && find_regime_violation(spec, f).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::from_sets(n, sets).unwrap()
    }

    #[test]
    fn l_intersecting() {
        assert!(is_l_intersecting(&fam(4, &[&[1, 2], &[1, 3], &[1, 4]]), 1));
        assert!(!is_l_intersecting(&fam(4, &[&[1, 2], &[3, 4]]), 1));
        // self-intersection counts: a single 1-set is not 2-intersecting
        assert!(!is_l_intersecting(&fam(4, &[&[1]]), 2));
        assert!(is_l_intersecting(&Family::empty(4).unwrap(), 3));
    }

    #[test]
    fn union_l_examples() {
        assert!(is_union_l_intersecting(&Family::at_least(3, 2).unwrap(), 3));
        assert!(is_union_l_intersecting(&fam(5, &[&[1]]), 4));
        // every union of two of these has three or more of the four points
        let f = fam(4, &[&[1, 2], &[3, 4], &[1, 3], &[2, 4]]);
        assert!(is_union_l_intersecting(&f, 1));
        assert!(!is_union_l_intersecting(&f, 3));
        let f = fam(4, &[&[1], &[2], &[3], &[4]]);
        let w = find_union_l_violation(&f, 1).unwrap();
        assert_eq!(w.overlap(), 0);
        assert_eq!(w.left, vec![SetMask::from_bits(0b0001), SetMask::from_bits(0b0010)]);
        assert_eq!(w.right, vec![SetMask::from_bits(0b0100), SetMask::from_bits(0b1000)]);
    }

    #[test]
    fn union_l_pairs_may_coincide() {
        // {1} ∪ {2} has two elements, so l = 3 fails on the single pair
        let f = fam(4, &[&[1], &[2]]);
        assert!(is_union_l_intersecting(&f, 2));
        let w = find_union_l_violation(&f, 3).unwrap();
        assert_eq!(w.left, w.right);
        // but the (2,2) property is vacuous with two members
        assert!(is_st_union_intersecting(&f, 2, 2));
    }

    #[test]
    fn st_examples() {
        let star: Vec<Vec<usize>> = vec![vec![1], vec![1, 2], vec![1, 3], vec![1, 2, 3]];
        assert!(is_st_union_intersecting(&Family::from_sets(3, &star).unwrap(), 1, 1));
        assert!(!is_st_union_intersecting(&fam(4, &[&[1, 2], &[3, 4], &[1]]), 1, 1));
        let f = fam(6, &[&[1, 2], &[1, 3], &[1, 4], &[1, 5], &[1, 6], &[2, 3]]);
        assert!(is_st_union_intersecting(&f, 2, 2));
    }

    #[test]
    fn st_routes_agree_on_empty_set_cases() {
        // ∅ may serve on either side, but only once
        let f = fam(3, &[&[], &[1], &[2]]);
        for route in [StRoute::Counting, StRoute::Combinations] {
            let w = find_st_violation_by(&f, 1, 2, route).unwrap();
            assert_eq!((w.left.len(), w.right.len()), (1, 2));
            assert_eq!(w.overlap(), 0);
            assert!(find_st_violation_by(&f, 2, 2, route).is_none());
        }
        let g = fam(3, &[&[], &[1], &[2], &[3]]);
        for route in [StRoute::Counting, StRoute::Combinations] {
            let w = find_st_violation_by(&g, 3, 1, route).unwrap();
            assert_eq!((w.left.len(), w.right.len()), (3, 1));
            assert_eq!(w.overlap(), 0);
        }
    }

    #[test]
    fn pattern_examples() {
        let chain = fam(3, &[&[1], &[1, 2], &[1, 2, 3]]);
        let e = find_pattern(&chain, PosetPattern::new(1, 2).unwrap()).unwrap();
        assert_eq!(e.lower, vec![SetMask::from_bits(1)]);
        let antichain = Family::layer(4, 2).unwrap();
        for (x, y) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!(!contains_pattern(&antichain, PosetPattern::new(x, y).unwrap()));
        }
        let f = fam(4, &[&[1], &[2], &[1, 2, 3], &[1, 2, 4]]);
        assert!(contains_pattern(&f, PosetPattern::new(2, 2).unwrap()));
        assert!(!contains_pattern(&f, PosetPattern::new(3, 1).unwrap()));
        assert!(PosetPattern::new(0, 1).is_none());
    }

    #[test]
    fn sunflowers() {
        let c = sunflower_check(&fam(4, &[&[1, 2], &[1, 3], &[1, 4]]));
        assert!(c.is_sunflower);
        assert_eq!(c.center, SetMask::singleton(1));
        let c = sunflower_check(&fam(3, &[&[1], &[2], &[3]]));
        assert!(c.is_sunflower && c.center.is_empty());
        assert!(!sunflower_check(&fam(3, &[&[1, 2], &[2, 3], &[1, 3]])).is_sunflower);
        let c = sunflower_check(&fam(3, &[&[1, 2]]));
        assert!(c.is_sunflower);
        assert_eq!(c.center, SetMask::from_bits(0b011));
        assert!(!sunflower_check(&Family::empty(3).unwrap()).is_sunflower);
    }
}
