//! Disjointness matchings between two levels of the Boolean lattice, and the
//! level-pair inequalities they imply for upsets.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::bounds::{self, binomial};
use crate::error::{Error, Result};
use crate::predicates::{is_l_intersecting, is_union_l_intersecting};
use crate::setcore::{check_n, k_subsets, Family, SetMask};

/// Largest ground set accepted by [`disjointness_matching`].
pub const MATCHING_MAX_N: usize = 16;

/// Which vertex class a matching saturates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Covered {
    Lower,
    Upper,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingCertificate {
    pub n: usize,
    pub lower_level: usize,
    pub upper_level: usize,
    /// `(A, B)` with `|A| = lower_level`, `|B| = upper_level`, sorted by `A`.
    pub pairs: Vec<(SetMask, SetMask)>,
    pub covered: Covered,
}

impl MatchingCertificate {
    /// Re-checks the certificate from scratch: sizes, disjointness, vertex
    /// disjointness, and that the claimed class is saturated.
    pub fn verify(&self) -> bool {
        let full = SetMask::full(self.n);
        let mut lefts = Vec::with_capacity(self.pairs.len());
        let mut rights = Vec::with_capacity(self.pairs.len());
        for &(a, b) in &self.pairs {
            if a.len() != self.lower_level
                || b.len() != self.upper_level
                || !a.is_disjoint(b)
                || !a.is_subset(full)
                || !b.is_subset(full)
            {
                return false;
            }
            lefts.push(a);
            rights.push(b);
        }
        for side in [&mut lefts, &mut rights] {
            side.sort_unstable();
            if side.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        let n = self.n as u64;
        let lower = binomial(n, self.lower_level as i64) as usize;
        let upper = binomial(n, self.upper_level as i64) as usize;
        let k = self.pairs.len();
        match self.covered {
            Covered::Lower => k == lower,
            Covered::Upper => k == upper,
            Covered::Both => k == lower && k == upper,
        }
    }
}

/// A maximum matching between level `i` and level `j` of `[n]`, joining
/// disjoint sets. Vertices are processed in ascending mask order, so the
/// output is deterministic.
pub fn disjointness_matching(n: usize, i: usize, j: usize) -> Result<MatchingCertificate> {
    check_n(n)?;
    if n > MATCHING_MAX_N {
        return Err(Error::TooLarge(format!("matching needs n <= {MATCHING_MAX_N}, got {n}")));
    }
    if i > j {
        return Err(Error::ParamOutOfRange(format!("need i <= j, got i={i} j={j}")));
    }
    if i + j > n {
        return Err(Error::NoEdges { n, i, j });
    }
    let mut lower: Vec<SetMask> = k_subsets(n, i).collect();
    let mut upper: Vec<SetMask> = k_subsets(n, j).collect();
    lower.sort_unstable();
    upper.sort_unstable();
    let swap = upper.len() < lower.len();
    let (left, right) = if swap { (&upper, &lower) } else { (&lower, &upper) };
    let index: HashMap<SetMask, usize> = right.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let full = SetMask::full(n);
    let right_size = if swap { i } else { j };
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|&a| {
            let rest = a.complement(n) & full;
            let mut nb: Vec<usize> = sub_subsets(rest, right_size).map(|b| index[&b]).collect();
            nb.sort_unstable();
            nb
        })
        .collect();
    let mate = hopcroft_karp(&adj, right.len());
    let mut pairs: Vec<(SetMask, SetMask)> = mate
        .iter()
        .enumerate()
        .filter_map(|(u, m)| m.map(|v| if swap { (right[v], left[u]) } else { (left[u], right[v]) }))
        .collect();
    pairs.sort_unstable();
    let covered = match lower.len().cmp(&upper.len()) {
        std::cmp::Ordering::Less => Covered::Lower,
        std::cmp::Ordering::Greater => Covered::Upper,
        std::cmp::Ordering::Equal => Covered::Both,
    };
    Ok(MatchingCertificate { n, lower_level: i, upper_level: j, pairs, covered })
}

/// All `k`-element subsets of `set`.
fn sub_subsets(set: SetMask, k: usize) -> impl Iterator<Item = SetMask> {
    let elems: Vec<usize> = set.elements().collect();
    let m = elems.len();
    k_subsets(m, k).map(move |pick| pick.elements().fold(SetMask::EMPTY, |acc, p| acc.with(elems[p - 1])))
}

/// Returns the partner of each left vertex.
fn hopcroft_karp(adj: &[Vec<usize>], right_len: usize) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let left_len = adj.len();
    let mut mate_l: Vec<Option<usize>> = vec![None; left_len];
    let mut mate_r: Vec<Option<usize>> = vec![None; right_len];
    let mut dist = vec![INF; left_len];
    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left_len {
            if mate_l[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match mate_r[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; left_len];
        for u in 0..left_len {
            if mate_l[u].is_none() {
                augment(u, adj, &mut mate_l, &mut mate_r, &mut dist, &mut next);
            }
        }
    }
    mate_l
}

fn augment(
    root: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [Option<usize>],
    mate_r: &mut [Option<usize>],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    // iterative DFS along the BFS layers
    let mut path: Vec<(usize, usize)> = Vec::new();
    let mut u = root;
    loop {
        if next[u] < adj[u].len() {
            let v = adj[u][next[u]];
            next[u] += 1;
            match mate_r[v] {
                None => {
                    path.push((u, v));
                    for &(a, b) in &path {
                        mate_l[a] = Some(b);
                        mate_r[b] = Some(a);
                    }
                    return true;
                }
                Some(w) if dist[w] == dist[u].wrapping_add(1) => {
                    path.push((u, v));
                    u = w;
                }
                Some(_) => {}
            }
        } else {
            dist[u] = usize::MAX;
            match path.pop() {
                Some((prev, _)) => u = prev,
                None => return false,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRow {
    pub i: usize,
    pub j: usize,
    pub size_i: usize,
    pub size_j: usize,
    pub bound: u64,
    pub pass: bool,
}

impl LevelRow {
    pub fn sum(&self) -> usize {
        self.size_i + self.size_j
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub n: usize,
    pub rows: Vec<LevelRow>,
    pub pass: bool,
}

fn level_report(
    f: &Family,
    range: impl Iterator<Item = usize>,
    total: usize,
    bound: impl Fn(usize) -> Result<u64>,
) -> Result<LevelReport> {
    let sizes = f.level_sizes();
    let rows = range
        .map(|i| {
            let j = total - i;
            let b = bound(i)?;
            let (size_i, size_j) = (sizes[i], sizes[j]);
            Ok(LevelRow { i, j, size_i, size_j, bound: b, pass: (size_i + size_j) as u64 <= b })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = rows.iter().all(|r| r.pass);
    Ok(LevelReport { n: f.n(), rows, pass })
}

/// `|F^i| + |F^{n+l-3-i}| <= C(n, n+l-3-i)` for a union-`l`-intersecting upset.
pub fn verify_level_inequalities(f: &Family, l: usize) -> Result<LevelReport> {
    if l == 0 {
        return Err(Error::ParamOutOfRange("l must be positive".into()));
    }
    if !f.is_upset() {
        return Err(Error::PreconditionFailed("family is not an upset".into()));
    }
    if !is_union_l_intersecting(f, l) {
        return Err(Error::PreconditionFailed(format!("family is not union-{l}-intersecting")));
    }
    let n = f.n();
    level_report(f, bounds::level_pair_range(n, l), n + l - 3, |i| bounds::level_pair_bound(n, l, i))
}

/// `|F^i| + |F^{n+t-1-i}| <= C(n, n+t-1-i)` for a `t`-intersecting family.
pub fn verify_katona_inequalities(f: &Family, t: usize) -> Result<LevelReport> {
    if t == 0 {
        return Err(Error::ParamOutOfRange("t must be positive".into()));
    }
    if !is_l_intersecting(f, t) {
        return Err(Error::PreconditionFailed(format!("family is not {t}-intersecting")));
    }
    let n = f.n();
    level_report(f, bounds::katona_range(n, t), n + t - 1, |i| bounds::katona_level_bound(n, t, i))
}
