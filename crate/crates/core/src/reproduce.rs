//! The comparison grid: closed-form values against constructions and exact
//! search, plus seeded property sweeps.

use rand::Rng;
use serde::Serialize;

use crate::bounds::{self, binomial, BoundReport};
use crate::constructions::{construct_st_extremal, construct_uniform_star_plus, construct_union_l_extremal};
use crate::error::{Error, Result};
use crate::matching::{disjointness_matching, verify_katona_inequalities, verify_level_inequalities};
use crate::predicates::{is_l_intersecting, is_st_union_intersecting, is_union_l_intersecting, satisfies, sunflower_check};
use crate::sample::{random_family, random_subfamily, random_uniform_family, random_upset, rng};
use crate::search::{self, SearchOptions};
use crate::setcore::{Family, ProblemSpec, Regime};
use crate::sunflower::extract_sunflower;

/// The `(s,t)` pairs in the grid.
pub const ST_PAIRS: [(usize, usize); 6] = [(1, 1), (1, 2), (2, 2), (1, 3), (1, 4), (2, 3)];
/// The `l` values in the grid.
pub const UNION_L: [usize; 3] = [1, 2, 3];
/// `(n, k, s, t)` probes of the uniform regime.
pub const UNIFORM_PROBES: [(usize, usize, usize, usize); 3] = [(6, 2, 2, 2), (7, 2, 1, 2), (7, 2, 2, 2)];

#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub spec: ProblemSpec,
    pub bound: BoundReport,
    pub construction: usize,
    pub construction_valid: bool,
    pub upset_optimum: usize,
    /// Present for `n <= 4`, where full enumeration is cheap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_optimum: Option<usize>,
    pub pass: bool,
}

impl GridRow {
    pub fn label(&self) -> String {
        match self.spec.regime {
            Regime::UnionL { l } => format!("union-{l}"),
            Regime::St { s, t } => format!("st({s},{t})"),
            Regime::Uniform { k, s, t } => format!("uniform(k={k},{s},{t})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformRow {
    pub spec: ProblemSpec,
    pub bound: u64,
    pub construction: usize,
    pub optimum: usize,
    /// The optimum exceeds `C(n-1,k-1) + s - 1` at this `n`.
    pub above_bound: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AkRow {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub value: u64,
    pub expected: u64,
    /// Where the expected value came from: a closed form or a search.
    pub source: &'static str,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyRow {
    pub name: &'static str,
    pub samples: usize,
    pub failures: usize,
}

impl PropertyRow {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reproduction {
    pub max_n: usize,
    pub seed: u64,
    pub grid: Vec<GridRow>,
    pub uniform: Vec<UniformRow>,
    pub ak: Vec<AkRow>,
    pub properties: Vec<PropertyRow>,
    pub pass: bool,
}

/// One grid row. Exact cases must agree on bound, construction and every
/// search; interval cases need the construction on the lower end and the
/// optimum at or above it.
pub fn grid_row(spec: ProblemSpec, opts: SearchOptions) -> Result<GridRow> {
    let n = spec.n;
    let (bound, construction) = match spec.regime {
        Regime::UnionL { l } => (bounds::union_l_upper_bound(n, l)?, construct_union_l_extremal(n, l)?),
        Regime::St { s, t } => (bounds::f_value(n, s, t)?, construct_st_extremal(n, s, t)?),
        Regime::Uniform { .. } => {
            return Err(Error::UnsupportedRegime { method: "grid".into(), regime: spec.regime.to_string() })
        }
    };
    let construction_valid = satisfies(&spec, &construction);
    let upset = search::max_family_upset(&spec, opts)?;
    let full_optimum = if n <= search::FULL_MAX_N {
        Some(search::max_family_bruteforce(&spec, opts)?.optimum)
    } else {
        None
    };
    let c = construction.len() as u64;
    let opt = upset.optimum as u64;
    let agree = full_optimum.map_or(true, |f| f == upset.optimum);
    let pass = construction_valid
        && agree
        && match bound.exact() {
            Some(v) => c == v && opt == v,
            None => c == bound.lower() && opt >= bound.lower(),
        };
    Ok(GridRow {
        spec,
        bound,
        construction: construction.len(),
        construction_valid,
        upset_optimum: upset.optimum,
        full_optimum,
        pass,
    })
}

pub fn grid(max_n: usize, opts: SearchOptions) -> Result<Vec<GridRow>> {
    let mut rows = Vec::new();
    for n in 3..=max_n {
        for (s, t) in ST_PAIRS {
            rows.push(grid_row(ProblemSpec::st(n, s, t)?, opts)?);
        }
        for l in UNION_L {
            rows.push(grid_row(ProblemSpec::union_l(n, l)?, opts)?);
        }
    }
    Ok(rows)
}

pub fn uniform_row(n: usize, k: usize, s: usize, t: usize, opts: SearchOptions) -> Result<UniformRow> {
    let spec = ProblemSpec::uniform(n, k, s, t)?;
    let bound = bounds::uniform_upper_bound(n, k, s)?.lower();
    let construction = construct_uniform_star_plus(n, k, s, None)?;
    let result = search::max_uniform_family(&spec, opts)?;
    let construction_ok = is_st_union_intersecting(&construction, s, t);
    Ok(UniformRow {
        spec,
        bound,
        construction: construction.len(),
        optimum: result.optimum,
        above_bound: result.optimum as u64 > bound,
        pass: construction_ok && result.optimum >= construction.len(),
    })
}

/// `AK(n, n/2-1, 1) = C(n-1, n/2-2)` for even `n` in `4..=12`, and the
/// `(7,3,1)` value against a uniform search.
pub fn ak_rows(opts: SearchOptions) -> Result<Vec<AkRow>> {
    let mut rows = Vec::new();
    for n in (4..=12).step_by(2) {
        let (k, l) = (n / 2 - 1, 1);
        let value = bounds::ak_bound(n, k, l)?.lower();
        let expected = binomial(n as u64 - 1, n as i64 / 2 - 2);
        rows.push(AkRow { n, k, l, value, expected, source: "closed-form", pass: value == expected });
    }
    let value = bounds::ak_bound(7, 3, 1)?.lower();
    let expected = search::max_uniform_family(&ProblemSpec::uniform(7, 3, 1, 1)?, opts)?.optimum as u64;
    rows.push(AkRow { n: 7, k: 3, l: 1, value, expected, source: "empirical-search", pass: value == expected });
    Ok(rows)
}

fn sweep(name: &'static str, samples: usize, mut check: impl FnMut() -> Result<bool>) -> Result<PropertyRow> {
    let mut failures = 0;
    for _ in 0..samples {
        if !check()? {
            failures += 1;
        }
    }
    Ok(PropertyRow { name, samples, failures })
}

/// Random `k`-uniform families just above the sunflower threshold always
/// yield an `r`-petal sunflower, for `k <= 3`, `r <= 4`, on `[12]`.
pub fn sunflower_sweep(seed: u64, per_case: usize) -> Result<PropertyRow> {
    let mut r = rng(seed);
    let cases: Vec<(usize, usize)> = (1..=3).flat_map(|k| (1..=4).map(move |p| (k, p))).collect();
    let mut failures = 0;
    for &(k, petals) in &cases {
        let size = bounds::sunflower_threshold(k, petals)? as usize + 1;
        for _ in 0..per_case {
            let a = random_uniform_family(&mut r, 12, k, size)?;
            let ok = match extract_sunflower(&a, petals)? {
                Some(sf) => {
                    sf.petals.len() == petals
                        && sf.petals.intersection(&a) == sf.petals
                        && sunflower_check(&sf.petals).is_sunflower
                        && sunflower_check(&sf.petals).center == sf.center
                }
                None => false,
            };
            failures += usize::from(!ok);
        }
    }
    Ok(PropertyRow { name: "sunflower-above-threshold", samples: cases.len() * per_case, failures })
}

/// Union-`l` upsets satisfy the level-pair inequalities, `n <= 5`, `l <= 3`.
/// Draws random upsets until `per_case` of them pass the predicate.
pub fn level_sweep(seed: u64, per_case: usize) -> Result<PropertyRow> {
    let mut r = rng(seed);
    let mut samples = 0;
    let mut failures = 0;
    for n in 3..=5 {
        for l in 1..=3 {
            let mut kept = 0;
            while kept < per_case {
                let f = random_upset(&mut r, n)?;
                if !is_union_l_intersecting(&f, l) {
                    continue;
                }
                kept += 1;
                failures += usize::from(!verify_level_inequalities(&f, l)?.pass);
            }
            samples += kept;
        }
    }
    Ok(PropertyRow { name: "union-l-level-pairs", samples, failures })
}

/// `t`-intersecting families satisfy the `t`-intersecting level pairing,
/// `n <= 5`, `t <= 3`. Half the samples are upsets, half random
/// subfamilies of them.
pub fn katona_sweep(seed: u64, per_case: usize) -> Result<PropertyRow> {
    let mut r = rng(seed);
    let mut samples = 0;
    let mut failures = 0;
    for n in 3..=5 {
        for t in 1..=3 {
            let mut kept = 0;
            while kept < per_case {
                let up = random_upset(&mut r, n)?;
                let f = if r.gen_bool(0.5) { random_subfamily(&mut r, &up) } else { up };
                if !is_l_intersecting(&f, t) {
                    continue;
                }
                kept += 1;
                failures += usize::from(!verify_katona_inequalities(&f, t)?.pass);
            }
            samples += kept;
        }
    }
    Ok(PropertyRow { name: "t-intersecting-level-pairs", samples, failures })
}

/// Disjointness matchings saturate the smaller level, `n <= max_n`.
pub fn matching_sweep(max_n: usize) -> Result<PropertyRow> {
    let mut samples = 0;
    let mut failures = 0;
    for n in 1..=max_n {
        for i in 0..=n {
            for j in i..=n - i {
                let m = disjointness_matching(n, i, j)?;
                let want = binomial(n as u64, i as i64).min(binomial(n as u64, j as i64)) as usize;
                samples += 1;
                failures += usize::from(!(m.verify() && m.pairs.len() == want));
            }
        }
    }
    Ok(PropertyRow { name: "matching-certificates", samples, failures })
}

/// Compression keeps the size and every property the family had, for
/// random families on `[n]`, `n <= 5`.
pub fn compression_sweep(seed: u64, samples: usize) -> Result<PropertyRow> {
    let mut r = rng(seed);
    sweep("compression-preserves", samples, || {
        let n = r.gen_range(1..=5);
        let f = random_family(&mut r, n)?;
        let g = f.compress_to_upset();
        let mut ok = g.len() == f.len() && g.is_upset();
        for l in 1..=3 {
            ok &= !is_l_intersecting(&f, l) || is_l_intersecting(&g, l);
            ok &= !is_union_l_intersecting(&f, l) || is_union_l_intersecting(&g, l);
        }
        for s in 1..=4 {
            for t in s..=5 - s {
                ok &= !is_st_union_intersecting(&f, s, t) || is_st_union_intersecting(&g, s, t);
            }
        }
        Ok(ok)
    })
}

pub fn properties(seed: u64) -> Result<Vec<PropertyRow>> {
    Ok(vec![
        sunflower_sweep(seed, 200)?,
        level_sweep(seed, 1000)?,
        katona_sweep(seed, 1000)?,
        matching_sweep(10)?,
        compression_sweep(seed, 2000)?,
    ])
}

/// Everything above for `3 <= n <= max_n`.
pub fn reproduce(max_n: usize, seed: u64, opts: SearchOptions) -> Result<Reproduction> {
    let grid = grid(max_n, opts)?;
    let uniform = UNIFORM_PROBES
        .iter()
        .map(|&(n, k, s, t)| uniform_row(n, k, s, t, opts))
        .collect::<Result<Vec<_>>>()?;
    let ak = ak_rows(opts)?;
    let properties = properties(seed)?;
    let pass = grid.iter().all(|r| r.pass)
        && uniform.iter().all(|r| r.pass)
        && ak.iter().all(|r| r.pass)
        && properties.iter().all(PropertyRow::pass);
    Ok(Reproduction { max_n, seed, grid, uniform, ak, properties, pass })
}

/// A family the grid row for `spec` would build.
pub fn construction_for(spec: &ProblemSpec) -> Result<Family> {
    match spec.regime {
        Regime::UnionL { l } => construct_union_l_extremal(spec.n, l),
        Regime::St { s, t } => construct_st_extremal(spec.n, s, t),
        Regime::Uniform { k, s, .. } => construct_uniform_star_plus(spec.n, k, s, None),
    }
}
