//! Witness families that meet each bound with equality (or, for the
//! interval cases, the proved lower bound). The fixed element is always 1.

use crate::bounds;
use crate::error::{Error, Result};
use crate::setcore::{check_n, k_subsets, normalize_st, Family, SetMask};

/// `F_i`: the `k`-subsets of `[n]` meeting `[l+2i]` in at least `l+i` elements.
pub fn construct_ak_family(n: usize, k: usize, l: usize, i: usize) -> Result<Family> {
    bounds::ak_candidate_size(n, k, l, i)?;
    let core = SetMask::full(l + 2 * i);
    let members = k_subsets(n, k).filter(|m| (*m & core).len() >= l + i).collect();
    Ok(Family::from_sorted(n, members))
}

fn at_least(n: usize, size: usize) -> Family {
    Family::at_least(n, size).expect("n already validated")
}

fn layer_where(n: usize, k: usize, keep: impl Fn(SetMask) -> bool) -> Family {
    Family::from_sorted(n, k_subsets(n, k).filter(|m| keep(*m)).collect())
}

fn theorem_n(n: usize) -> Result<()> {
    check_n(n)?;
    if n < 3 {
        return Err(Error::ParamOutOfRange(format!("n = {n} < 3")));
    }
    Ok(())
}

/// All sets of size at least `(n+l)/2 - 1` when `n + l` is even; otherwise
/// the sets of size at least `(n+l-1)/2` together with an optimal
/// `(n+l-3)/2`-uniform `l`-intersecting family.
pub fn construct_union_l_extremal(n: usize, l: usize) -> Result<Family> {
    let report = bounds::union_l_upper_bound(n, l)?;
    if (n + l) % 2 == 0 {
        return Ok(at_least(n, (n + l) / 2 - 1));
    }
    let upper = at_least(n, (n + l - 1) / 2);
    let k = (n + l - 3) / 2;
    Ok(match report.argmax {
        Some(i) => upper.union(&construct_ak_family(n, k, l, i)?),
        None => upper,
    })
}

/// The extremal family for the `(s,t)` regime. For `(1,t)` with `t >= 4`
/// this is the `(1,3)` family; for `s >= 2, t >= 3` the `(2,2)` family.
pub fn construct_st_extremal(n: usize, s: usize, t: usize) -> Result<Family> {
    theorem_n(n)?;
    let (s, t) = normalize_st(s, t)?;
    let even = n % 2 == 0;
    Ok(match (s, t) {
        (1, 1) => Family::from_sorted(
            n,
            (0..1u32 << n).map(SetMask::from_bits).filter(|m| m.contains(1)).collect(),
        ),
        (1, _) if even => at_least(n, n / 2),
        (1, 2) => at_least(n, (n + 1) / 2).union(&layer_where(n, (n - 1) / 2, |m| m.contains(1))),
        (1, _) => at_least(n, (n + 1) / 2).union(&layer_where(n, (n - 1) / 2, |m| !m.contains(1))),
        _ => construct_union_l_extremal(n, 1)?,
    })
}

/// All `k`-sets through element 1 plus `s - 1` further `k`-sets avoiding it.
/// By default the extras are the smallest such sets in colex order.
pub fn construct_uniform_star_plus(
    n: usize,
    k: usize,
    s: usize,
    extras: Option<&[SetMask]>,
) -> Result<Family> {
    check_n(n)?;
    if k == 0 || k > n || s == 0 {
        return Err(Error::ParamOutOfRange(format!("need 1 <= k <= n and s >= 1, got k={k} s={s}")));
    }
    let avoiding = |m: &SetMask| !m.contains(1);
    let extras: Vec<SetMask> = match extras {
        Some(given) => {
            if given.len() != s - 1 {
                return Err(Error::BadExtras(format!("expected {} sets, got {}", s - 1, given.len())));
            }
            if let Some(bad) = given.iter().find(|m| m.len() != k || !avoiding(m) || !m.is_subset(SetMask::full(n))) {
                return Err(Error::BadExtras(format!("{bad} is not a {k}-subset of {{2..{n}}}")));
            }
            given.to_vec()
        }
        None => {
            let picked: Vec<SetMask> = k_subsets(n, k).filter(avoiding).take(s - 1).collect();
            if picked.len() < s - 1 {
                return Err(Error::ParamOutOfRange(format!(
                    "only {} {k}-sets avoid element 1, need {}",
                    picked.len(),
                    s - 1
                )));
            }
            picked
        }
    };
    let star = k_subsets(n, k).filter(|m| m.contains(1));
    Family::new(n, star.chain(extras)).map_err(|e| match e {
        Error::DuplicateSet(set) => Error::BadExtras(format!("{set} given twice")),
        other => other,
    })
}
