//! Exact maximum families by depth-first branch and bound.
//!
//! Every mode works over a universe of at most 64 candidate sets, indexed in
//! decision order, so a family is a `u64` of indices. Sets are decided in
//! index order with the include branch first. Including a set forward-checks
//! every undecided candidate and kills the ones that can no longer be added;
//! the bound is the current size plus the live candidates left.
//!
//! Top-level branches run on a rayon pool sharing a monotone best size. The
//! reported witness is the first maximum in sequential DFS order whatever the
//! thread count: a branch is cut only when its bound is at most its own best
//! or strictly below the shared best, and ties between branches go to the
//! earliest one.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bounds::binomial;
use crate::error::{Error, Result};
use crate::predicates::satisfies;
use crate::setcore::{k_subsets, Family, ProblemSpec, Regime, SetMask};

/// Largest `n` for [`max_family_bruteforce`].
pub const FULL_MAX_N: usize = 4;
/// Largest `n` for [`max_family_upset`] without the opt-in flag.
pub const UPSET_MAX_N: usize = 5;
/// Largest layer size for [`max_uniform_family`].
pub const UNIFORM_MAX_SETS: u64 = 40;
/// Largest `s + t` for upset search at `n >= 5`.
pub const ST_MAX_GROUPS: usize = 6;

const FRONTIER_TARGET: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    FullEnum,
    UpsetEnum,
    UniformBB,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::FullEnum => "full",
            Method::UpsetEnum => "upset",
            Method::UniformBB => "uniform-bb",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; 0 means rayon's default.
    pub threads: usize,
    /// Lift the upset search cap from `n = 5` to `n = 6`.
    pub allow_n6: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { threads: 1, allow_n6: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub optimum: usize,
    pub witness: Family,
    pub method: Method,
    pub nodes: u64,
    #[serde(rename = "elapsed-ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

/// Picks the method from the regime: uniform layer search for uniform
/// specs, upset enumeration otherwise.
pub fn search(spec: &ProblemSpec, opts: SearchOptions) -> Result<SearchResult> {
    match spec.regime {
        Regime::Uniform { .. } => max_uniform_family(spec, opts),
        _ => max_family_upset(spec, opts),
    }
}

pub fn search_with(spec: &ProblemSpec, method: Method, opts: SearchOptions) -> Result<SearchResult> {
    match method {
        Method::FullEnum => max_family_bruteforce(spec, opts),
        Method::UpsetEnum => max_family_upset(spec, opts),
        Method::UniformBB => max_uniform_family(spec, opts),
    }
}

fn unsupported(method: Method, spec: &ProblemSpec) -> Error {
    Error::UnsupportedRegime { method: method.tag().into(), regime: spec.regime.to_string() }
}

/// Maximum over all families of subsets of `[n]`, `n <= 4`.
pub fn max_family_bruteforce(spec: &ProblemSpec, opts: SearchOptions) -> Result<SearchResult> {
    if matches!(spec.regime, Regime::Uniform { .. }) {
        return Err(unsupported(Method::FullEnum, spec));
    }
    if spec.n > FULL_MAX_N {
        return Err(Error::TooLarge(format!("full enumeration needs n <= {FULL_MAX_N}, got {}", spec.n)));
    }
    run(spec, Method::FullEnum, decreasing_cardinality(spec.n), false, opts)
}

/// Maximum over upsets of `[n]`; compression shows this is the global
/// maximum. `n <= 5`, or `n <= 6` with `allow_n6`.
pub fn max_family_upset(spec: &ProblemSpec, opts: SearchOptions) -> Result<SearchResult> {
    if matches!(spec.regime, Regime::Uniform { .. }) {
        return Err(unsupported(Method::UpsetEnum, spec));
    }
    let cap = if opts.allow_n6 { UPSET_MAX_N + 1 } else { UPSET_MAX_N };
    if spec.n > cap {
        let hint = if spec.n == UPSET_MAX_N + 1 { " (n = 6 needs the opt-in flag)" } else { "" };
        return Err(Error::TooLarge(format!("upset search needs n <= {cap}, got {}{hint}", spec.n)));
    }
    if let Regime::St { s, t } = spec.regime {
        if spec.n > FULL_MAX_N && s + t > ST_MAX_GROUPS {
            return Err(Error::TooLarge(format!("s + t = {} > {ST_MAX_GROUPS} at n = {}", s + t, spec.n)));
        }
    }
    run(spec, Method::UpsetEnum, decreasing_cardinality(spec.n), true, opts)
}

/// Maximum `(s,t)`-union-intersecting subfamily of the `k`-th layer, which
/// may hold at most 40 sets. Sets through element 1 are decided first.
pub fn max_uniform_family(spec: &ProblemSpec, opts: SearchOptions) -> Result<SearchResult> {
    let Regime::Uniform { k, .. } = spec.regime else {
        return Err(unsupported(Method::UniformBB, spec));
    };
    let size = binomial(spec.n as u64, k as i64);
    if size > UNIFORM_MAX_SETS {
        return Err(Error::TooLarge(format!("C({}, {k}) = {size} > {UNIFORM_MAX_SETS} sets", spec.n)));
    }
    let (mut order, rest): (Vec<SetMask>, Vec<SetMask>) = k_subsets(spec.n, k).partition(|m| m.contains(1));
    order.sort_unstable();
    let mut rest = rest;
    rest.sort_unstable();
    order.extend(rest);
    run(spec, Method::UniformBB, order, false, opts)
}

/// All subsets of `[n]`, larger first, ties by mask.
fn decreasing_cardinality(n: usize) -> Vec<SetMask> {
    let mut all: Vec<SetMask> = (0..1u32 << n).map(SetMask::from_bits).collect();
    all.sort_by_key(|m| (std::cmp::Reverse(m.len()), *m));
    all
}

fn run(spec: &ProblemSpec, method: Method, sets: Vec<SetMask>, upset: bool, opts: SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    let universe = Universe::new(sets, upset);
    let (best, fam, nodes) = match spec.regime {
        Regime::UnionL { l } => solve(&universe, &UnionKernel::new(&universe, spec.n, l), opts)?,
        Regime::St { s, t } | Regime::Uniform { s, t, .. } => solve(&universe, &StKernel::new(&universe, s, t), opts)?,
    };
    let witness = Family::new(spec.n, universe.members(fam)).expect("universe sets are distinct");
    debug_assert_eq!(witness.len(), best);
    if !satisfies(spec, &witness) {
        return Err(Error::WitnessRejected);
    }
    Ok(SearchResult { optimum: best, witness, method, nodes, elapsed: start.elapsed() })
}

struct Universe {
    sets: Vec<SetMask>,
    /// In upset mode, the indices of the strict subsets of each set.
    down: Vec<u64>,
    upset: bool,
}

impl Universe {
    fn new(sets: Vec<SetMask>, upset: bool) -> Self {
        assert!(sets.len() <= 64);
        let down = if upset {
            sets.iter()
                .map(|&a| index_bits(&sets, |b| b != a && b.is_subset(a)))
                .collect()
        } else {
            Vec::new()
        };
        Universe { sets, down, upset }
    }

    fn len(&self) -> usize {
        self.sets.len()
    }

    fn members(&self, fam: u64) -> impl Iterator<Item = SetMask> + '_ {
        bits(fam).map(|i| self.sets[i])
    }

    /// Indices that become unavailable once index `i` is ruled out.
    fn kill(&self, i: usize) -> u64 {
        let own = 1u64 << i;
        if self.upset {
            own | self.down[i]
        } else {
            own
        }
    }
}

fn index_bits(sets: &[SetMask], keep: impl Fn(SetMask) -> bool) -> u64 {
    sets.iter().enumerate().filter(|(_, &m)| keep(m)).fold(0, |acc, (i, _)| acc | 1 << i)
}

fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            return None;
        }
        let i = word.trailing_zeros() as usize;
        word &= word - 1;
        Some(i)
    })
}

/// Incremental regime check: may `x` join a valid family `fam`?
trait Kernel: Sync {
    type State: Copy + Send + Sync;
    fn initial(&self) -> Self::State;
    fn admits(&self, fam: u64, state: Self::State, x: usize) -> bool;
    fn add(&self, fam: u64, state: Self::State, x: usize) -> Self::State;
}

/// `(s,t)` check: look for violations that use `x`, via per-set bitsets of
/// disjoint members.
struct StKernel {
    s: usize,
    t: usize,
    disj: Vec<u64>,
}

impl StKernel {
    fn new(u: &Universe, s: usize, t: usize) -> Self {
        let disj = u
            .sets
            .iter()
            .enumerate()
            .map(|(i, &a)| index_bits(&u.sets, |b| b.is_disjoint(a)) & !(1u64 << i))
            .collect();
        StKernel { s, t, disj }
    }

    /// Can `need` more members be picked from `pool` so that at least `other`
    /// members of the family stay disjoint from the group's union?
    fn extend(&self, pool: u64, acc: u64, need: usize, other: usize) -> bool {
        if (acc.count_ones() as usize) < other {
            return false;
        }
        if need == 0 {
            return true;
        }
        let mut rest = pool;
        while rest != 0 {
            let g = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (rest.count_ones() as usize) + 1 < need {
                break;
            }
            if self.extend(rest, acc & self.disj[g], need - 1, other) {
                return true;
            }
        }
        false
    }
}

impl Kernel for StKernel {
    type State = ();

    fn initial(&self) {}

    fn admits(&self, fam: u64, _: (), x: usize) -> bool {
        let others = fam & !(1u64 << x);
        if (others.count_ones() as usize) + 1 < self.s + self.t {
            return true;
        }
        let start = others & self.disj[x];
        let sides: &[(usize, usize)] = if self.s == self.t { &[(self.s, self.t)] } else { &[(self.s, self.t), (self.t, self.s)] };
        !sides.iter().any(|&(own, other)| self.extend(others, start, own - 1, other))
    }

    fn add(&self, _: u64, _: (), _: usize) {}
}

/// Union-`l` check for universes of masks below 64: the state is the set of
/// pairwise unions present, as a bitset over masks.
struct UnionKernel {
    /// Bitset over masks `v` with `|u & v| < l`, for each mask `u`.
    bad: Vec<u64>,
    masks: Vec<u32>,
}

impl UnionKernel {
    fn new(u: &Universe, n: usize, l: usize) -> Self {
        assert!(n <= 6);
        let size = 1usize << n;
        let bad = (0..size)
            .map(|a| (0..size).filter(|&b| ((a & b) as u32).count_ones() < l as u32).fold(0u64, |acc, b| acc | 1 << b))
            .collect();
        UnionKernel { bad, masks: u.sets.iter().map(|m| m.bits()).collect() }
    }

    fn new_unions(&self, fam: u64, x: usize) -> u64 {
        let mx = self.masks[x];
        bits(fam & !(1u64 << x)).fold(0u64, |acc, y| acc | 1 << (mx | self.masks[y]))
    }
}

impl Kernel for UnionKernel {
    type State = u64;

    fn initial(&self) -> u64 {
        0
    }

    fn admits(&self, fam: u64, unions: u64, x: usize) -> bool {
        let fresh = self.new_unions(fam, x);
        let all = unions | fresh;
        bits(fresh & !unions).all(|u| self.bad[u] & all == 0)
    }

    fn add(&self, fam: u64, unions: u64, x: usize) -> u64 {
        unions | self.new_unions(fam, x)
    }
}

#[derive(Clone, Copy)]
struct Node<S> {
    next: usize,
    fam: u64,
    /// Undecided indices that can still be included.
    live: u64,
    state: S,
}

impl<S: Copy> Node<S> {
    fn bound(&self) -> usize {
        (self.fam.count_ones() + self.live.count_ones()) as usize
    }
}

fn root<K: Kernel>(u: &Universe, k: &K) -> Node<K::State> {
    let all = if u.len() == 64 { u64::MAX } else { (1u64 << u.len()) - 1 };
    let mut live = all;
    for x in 0..u.len() {
        if live >> x & 1 == 1 && !k.admits(0, k.initial(), x) {
            live &= !u.kill(x);
        }
    }
    Node { next: 0, fam: 0, live, state: k.initial() }
}

/// Children in DFS order: include (if possible) then exclude. A node with
/// no live index left is a leaf.
fn children<K: Kernel>(u: &Universe, k: &K, node: &Node<K::State>) -> Vec<Node<K::State>> {
    let rest = node.live & !((1u64 << node.next) - 1);
    if rest == 0 {
        return Vec::new();
    }
    let x = rest.trailing_zeros() as usize;
    let mut out = Vec::with_capacity(2);
    let fam = node.fam | 1 << x;
    let state = k.add(node.fam, node.state, x);
    let mut live = node.live & !(1u64 << x);
    for y in bits(live & !((1u64 << (x + 1)) - 1)) {
        if live >> y & 1 == 1 && !k.admits(fam, state, y) {
            live &= !u.kill(y);
        }
    }
    out.push(Node { next: x + 1, fam, live, state });
    out.push(Node { next: x + 1, fam: node.fam, live: node.live & !u.kill(x), state: node.state });
    out
}

#[derive(Default)]
struct Best {
    /// Size and family of the first maximum leaf met in this subtree.
    found: Option<(usize, u64)>,
    nodes: u64,
}

fn dfs<K: Kernel>(u: &Universe, k: &K, node: Node<K::State>, best: &mut Best, shared: &AtomicUsize) {
    best.nodes += 1;
    let bound = node.bound();
    if best.found.is_some_and(|(size, _)| bound <= size) || bound < shared.load(Ordering::Relaxed) {
        return;
    }
    let kids = children(u, k, &node);
    if kids.is_empty() {
        let size = node.fam.count_ones() as usize;
        best.found = Some((size, node.fam));
        shared.fetch_max(size, Ordering::Relaxed);
        return;
    }
    for kid in kids {
        dfs(u, k, kid, best, shared);
    }
}

fn solve<K: Kernel>(u: &Universe, k: &K, opts: SearchOptions) -> Result<(usize, u64, u64)> {
    // breadth-first expansion that keeps DFS order along the frontier
    let mut frontier = vec![root(u, k)];
    let mut expanded = 0u64;
    while frontier.len() < FRONTIER_TARGET {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        let mut grew = false;
        for node in &frontier {
            let kids = children(u, k, node);
            if kids.is_empty() {
                next.push(*node);
            } else {
                expanded += 1;
                grew = true;
                next.extend(kids);
            }
        }
        frontier = next;
        if !grew {
            break;
        }
    }
    let shared = AtomicUsize::new(0);
    let work = || {
        frontier
            .par_iter()
            .map(|&node| {
                let mut best = Best::default();
                dfs(u, k, node, &mut best, &shared);
                best
            })
            .collect::<Vec<Best>>()
    };
    let results = if opts.threads == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::ParamOutOfRange(format!("thread pool: {e}")))?
            .install(work)
    };
    let nodes = expanded + results.iter().map(|b| b.nodes).sum::<u64>();
    // max size, earliest branch on ties
    let (size, fam) = results
        .iter()
        .filter_map(|b| b.found)
        .fold(None::<(usize, u64)>, |acc, cur| match acc {
            Some(a) if a.0 >= cur.0 => Some(a),
            _ => Some(cur),
        })
        .expect("some branch reaches the optimum");
    Ok((size, fam, nodes))
}
