//! Closed-form values of every bound: the Ahlswede–Khachatrian maximum,
//! union-`l` maxima, `f(n,s,t)`, the uniform star bound and the counting
//! bounds used along the way. All arithmetic is exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::setcore::{check_n, normalize_st};

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> u64 {
    if k < 0 || k as u64 > n {
        return 0;
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

fn c(n: usize, k: i64) -> u64 {
    binomial(n as u64, k)
}

/// Which closed form produced a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    /// Maximum over the candidate families `F_i`.
    AhlswedeKhachatrian,
    /// Union-`l` maximum, `n + l` even: all sets of size `>= (n+l)/2 - 1`.
    UnionLEven,
    /// Union-`l` maximum, `n + l` odd: upper levels plus an AK middle level.
    UnionLOdd,
    /// `f(n,1,1) = 2^(n-1)`.
    St11,
    St12Even,
    St12Odd,
    St22Even,
    St22Odd,
    St13Even,
    St13Odd,
    /// `f(n,1,t)`, `t >= 4`: exact lower bound `f(n,1,3)`, asymptotic upper bound.
    St1tInterval,
    /// `f(n,s,t)`, `s >= 2`, `t >= 3`: exact lower bound `f(n,2,2)`.
    StGeneralInterval,
    /// `C(n-1,k-1) + s - 1` for large `n`.
    UniformStar,
}

impl BoundCase {
    pub fn tag(self) -> &'static str {
        match self {
            BoundCase::AhlswedeKhachatrian => "ak",
            BoundCase::UnionLEven => "union-l-even",
            BoundCase::UnionLOdd => "union-l-odd",
            BoundCase::St11 => "st-1-1",
            BoundCase::St12Even => "st-1-2-even",
            BoundCase::St12Odd => "st-1-2-odd",
            BoundCase::St22Even => "st-2-2-even",
            BoundCase::St22Odd => "st-2-2-odd",
            BoundCase::St13Even => "st-1-3-even",
            BoundCase::St13Odd => "st-1-3-odd",
            BoundCase::St1tInterval => "st-1-t-interval",
            BoundCase::StGeneralInterval => "st-s-t-interval",
            BoundCase::UniformStar => "uniform-star",
        }
    }

    /// Exact value cases (as opposed to intervals or conditional bounds).
    pub fn is_exact(self) -> bool {
        !matches!(
            self,
            BoundCase::St1tInterval | BoundCase::StGeneralInterval | BoundCase::UniformStar
        )
    }
}

/// Serialized as its [`BoundCase::tag`].
impl Serialize for BoundCase {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundValue {
    Single { value: u64 },
    /// `upper` is absent when only an asymptotic form is known.
    Interval { lower: u64, upper: Option<u64> },
}

impl BoundValue {
    /// The exact value, or the lower end of an interval.
    pub fn lower(&self) -> u64 {
        match *self {
            BoundValue::Single { value } => value,
            BoundValue::Interval { lower, .. } => lower,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub label: String,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub case: BoundCase,
    pub value: BoundValue,
    pub components: Vec<Component>,
    /// For the AK maximum: the smallest maximizing index `i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<usize>,
    /// Symbolic form of an upper bound with unknown constants.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_symbolic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

impl BoundReport {
    fn new(case: BoundCase, value: BoundValue, components: Vec<Component>) -> Self {
        let sum: u64 = components.iter().map(|c| c.value).sum();
        assert_eq!(sum, value.lower(), "components of {case:?} do not add up");
        if let BoundValue::Interval { lower, upper: Some(upper) } = value {
            assert!(lower <= upper);
        }
        BoundReport { case, value, components, argmax: None, upper_symbolic: None, caveat: None }
    }

    fn single(case: BoundCase, components: Vec<Component>) -> Self {
        let value = components.iter().map(|c| c.value).sum();
        BoundReport::new(case, BoundValue::Single { value }, components)
    }

    pub fn lower(&self) -> u64 {
        self.value.lower()
    }

    /// The value of an exact case.
    pub fn exact(&self) -> Option<u64> {
        match self.value {
            BoundValue::Single { value } if self.case.is_exact() => Some(value),
            _ => None,
        }
    }
}

fn level_components(n: usize, from: usize) -> Vec<Component> {
    (from..=n)
        .map(|i| Component { label: format!("C({n},{i})"), value: c(n, i as i64) })
        .collect()
}

fn theorem_n(n: usize) -> Result<()> {
    check_n(n)?;
    if n < 3 {
        return Err(Error::ParamOutOfRange(format!("n = {n} < 3")));
    }
    Ok(())
}

/// `|F_i|` for `F_i = { F in ([n] choose k) : |F ∩ [l+2i]| >= l+i }`.
pub fn ak_candidate_size(n: usize, k: usize, l: usize, i: usize) -> Result<u64> {
    if !(1 <= l && l <= k && k <= n) {
        return Err(Error::ParamOutOfRange(format!("need 1 <= l <= k <= n, got n={n} k={k} l={l}")));
    }
    if l + 2 * i > n {
        return Err(Error::ParamOutOfRange(format!("i = {i} exceeds (n-l)/2")));
    }
    let core = l + 2 * i;
    Ok((l + i..=k.min(core))
        .map(|j| c(core, j as i64) * c(n - core, k as i64 - j as i64))
        .sum())
}

/// `AK(n,k,l)`: the largest candidate family. Zero when `k < l`, since no
/// `k`-set is `l`-intersecting with itself.
pub fn ak_bound(n: usize, k: usize, l: usize) -> Result<BoundReport> {
    if k > n || l == 0 {
        return Err(Error::ParamOutOfRange(format!("need k <= n and l >= 1, got n={n} k={k} l={l}")));
    }
    if k < l {
        let mut r = BoundReport::single(BoundCase::AhlswedeKhachatrian, vec![]);
        r.caveat = Some("k < l: empty".into());
        return Ok(r);
    }
    let mut best = (0, 0);
    for i in 0..=(n - l) / 2 {
        let size = ak_candidate_size(n, k, l, i)?;
        if size > best.1 {
            best = (i, size);
        }
    }
    let mut r = BoundReport::single(
        BoundCase::AhlswedeKhachatrian,
        vec![Component { label: format!("|F_{}|", best.0), value: best.1 }],
    );
    r.argmax = Some(best.0);
    Ok(r)
}

/// Largest union-`l`-intersecting family on `[n]`; requires `n >= 3` and
/// `1 <= l <= n`.
pub fn union_l_upper_bound(n: usize, l: usize) -> Result<BoundReport> {
    theorem_n(n)?;
    if l == 0 || l > n {
        return Err(Error::ParamOutOfRange(format!("need 1 <= l <= n, got l = {l}")));
    }
    if (n + l) % 2 == 0 {
        Ok(BoundReport::single(BoundCase::UnionLEven, level_components(n, (n + l) / 2 - 1)))
    } else {
        let k = (n + l - 3) / 2;
        let ak = ak_bound(n, k, l)?;
        let mut parts = vec![Component { label: format!("AK({n},{k},{l})"), value: ak.lower() }];
        parts.extend(level_components(n, (n + l - 1) / 2));
        let mut r = BoundReport::single(BoundCase::UnionLOdd, parts);
        r.argmax = ak.argmax;
        Ok(r)
    }
}

/// `f(n,s,t)`: exact for `s + t <= 4`, an interval with exact lower end
/// otherwise. `s` and `t` may be given in either order.
pub fn f_value(n: usize, s: usize, t: usize) -> Result<BoundReport> {
    theorem_n(n)?;
    let (s, t) = normalize_st(s, t)?;
    let even = n % 2 == 0;
    let half_up = (n + 1) / 2;
    let report = match (s, t) {
        (1, 1) => BoundReport::single(
            BoundCase::St11,
            vec![Component { label: format!("2^{}", n - 1), value: 1 << (n - 1) }],
        ),
        (1, 2) if even => BoundReport::single(BoundCase::St12Even, level_components(n, n / 2)),
        (1, 2) => {
            let mut parts = vec![star_slice(n - 1, ((n - 3) / 2) as i64)];
            parts.extend(level_components(n, half_up));
            BoundReport::single(BoundCase::St12Odd, parts)
        }
        (2, 2) if even => {
            let mut parts = vec![star_slice(n - 1, n as i64 / 2 - 2)];
            parts.extend(level_components(n, n / 2));
            BoundReport::single(BoundCase::St22Even, parts)
        }
        (2, 2) => BoundReport::single(BoundCase::St22Odd, level_components(n, (n - 1) / 2)),
        (1, 3) if even => BoundReport::single(BoundCase::St13Even, level_components(n, n / 2)),
        (1, 3) => {
            let mut parts = vec![star_slice(n - 1, ((n - 1) / 2) as i64)];
            parts.extend(level_components(n, half_up));
            BoundReport::single(BoundCase::St13Odd, parts)
        }
        (1, t) => {
            let base = f_value(n, 1, 3)?;
            let mut r = BoundReport::new(
                BoundCase::St1tInterval,
                BoundValue::Interval { lower: base.lower(), upper: None },
                base.components,
            );
            r.upper_symbolic = Some(format!(
                "2^{} + C({n},{}) * (1/2 + {}/{n} + O(n^-2))",
                n - 1,
                n / 2,
                t - 2
            ));
            r
        }
        (_, _) => {
            let base = f_value(n, 2, 2)?;
            let mut r = BoundReport::new(
                BoundCase::StGeneralInterval,
                BoundValue::Interval { lower: base.lower(), upper: None },
                base.components,
            );
            r.upper_symbolic = Some(format!(
                "2^{} + C({n},{}) * (1 + {}/{n} + O(n^-2))",
                n - 1,
                n / 2,
                s + t - 3
            ));
            r
        }
    };
    Ok(report)
}

fn star_slice(m: usize, j: i64) -> Component {
    Component { label: format!("C({m},{j})"), value: c(m, j) }
}

/// `C(n-1,k-1) + s - 1`, valid only beyond an unspecified threshold in `n`.
pub fn uniform_upper_bound(n: usize, k: usize, s: usize) -> Result<BoundReport> {
    check_n(n)?;
    if k == 0 || k > n || s == 0 {
        return Err(Error::ParamOutOfRange(format!("need 1 <= k <= n and s >= 1, got k={k} s={s}")));
    }
    let mut r = BoundReport::single(
        BoundCase::UniformStar,
        vec![
            Component { label: format!("C({},{})", n - 1, k - 1), value: c(n - 1, k as i64 - 1) },
            Component { label: "s-1".into(), value: s as u64 - 1 },
        ],
    );
    r.caveat = Some("valid only for n > n(k,t); the threshold is unknown".into());
    Ok(r)
}

/// `k! (r-1)^k`: any larger `k`-uniform family has an `r`-petal sunflower.
pub fn sunflower_threshold(k: usize, r: usize) -> Result<u128> {
    if r == 0 {
        return Err(Error::ParamOutOfRange("r must be positive".into()));
    }
    let overflow = || Error::ParamOutOfRange(format!("k!(r-1)^k overflows for k={k} r={r}"));
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc.checked_mul(i).ok_or_else(overflow)?;
        acc = acc.checked_mul(r as u128 - 1).ok_or_else(overflow)?;
    }
    Ok(acc)
}

/// `sum_{i=2}^{c} C(c,i) C(n-c,k-i)`: the number of `k`-sets meeting a
/// fixed `c`-set in at least two elements.
pub fn double_hit_bound(n: usize, k: usize, c_size: usize) -> Result<u64> {
    if !(2 <= c_size && c_size <= n && k <= n) {
        return Err(Error::ParamOutOfRange(format!("need 2 <= c <= n and k <= n, got n={n} k={k} c={c_size}")));
    }
    Ok((2..=c_size)
        .map(|i| c(c_size, i as i64) * c(n - c_size, k as i64 - i as i64))
        .sum())
}

/// Right-hand side of `|F^i| + |F^j| <= C(n, j)` with `j = total - i`,
/// for `0 <= i < total/2` and `j <= n`.
fn paired_level_bound(n: usize, total: usize, i: usize) -> Result<u64> {
    if 2 * i >= total {
        return Err(Error::ParamOutOfRange(format!("need i < {total}/2, got i = {i}")));
    }
    let j = total - i;
    if j > n {
        return Err(Error::ParamOutOfRange(format!("partner level {j} exceeds n = {n}")));
    }
    Ok(c(n, j as i64))
}

/// `C(n, n+l-3-i)`, pairing level `i` with level `n+l-3-i` in a
/// union-`l`-intersecting upset.
pub fn level_pair_bound(n: usize, l: usize, i: usize) -> Result<u64> {
    if l == 0 || n + l < 3 {
        return Err(Error::ParamOutOfRange(format!("invalid n={n} l={l}")));
    }
    paired_level_bound(n, n + l - 3, i)
}

/// `C(n, n+t-1-i)` for a `t`-intersecting family.
pub fn katona_level_bound(n: usize, t: usize, i: usize) -> Result<u64> {
    if t == 0 {
        return Err(Error::ParamOutOfRange("t must be positive".into()));
    }
    paired_level_bound(n, n + t - 1, i)
}

/// Levels `i` for which the union-`l` pairing inequality is stated.
pub fn level_pair_range(n: usize, l: usize) -> impl Iterator<Item = usize> {
    let total = n + l;
    let lo = l.saturating_sub(3);
    (lo..n + 1).take_while(move |&i| total >= 3 && 2 * i < total - 3)
}

/// Levels `i` for which the `t`-intersecting pairing inequality is stated.
pub fn katona_range(n: usize, t: usize) -> impl Iterator<Item = usize> {
    let lo = t.saturating_sub(1);
    (lo..n + 1).take_while(move |&i| t >= 1 && 2 * i < n + t - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(30, 15), 155_117_520);
        for n in 0..=30u64 {
            let row: u64 = (0..=n as i64).map(|k| binomial(n, k)).sum();
            assert_eq!(row, 1 << n);
        }
    }

    #[test]
    fn ak_candidates() {
        assert_eq!(ak_candidate_size(6, 2, 1, 0).unwrap(), 5);
        assert_eq!(ak_candidate_size(6, 2, 1, 1).unwrap(), 3);
        assert_eq!(ak_candidate_size(7, 3, 1, 1).unwrap(), 13);
        assert!(ak_candidate_size(6, 2, 3, 0).is_err());
        assert!(ak_candidate_size(6, 2, 1, 3).is_err());
    }

    #[test]
    fn ak_maxima() {
        let r = ak_bound(6, 2, 1).unwrap();
        assert_eq!((r.lower(), r.argmax), (5, Some(0)));
        assert_eq!(ak_bound(3, 1, 2).unwrap().lower(), 0);
        assert_eq!(ak_bound(7, 3, 1).unwrap().lower(), 15);
        for n in (4..=12).step_by(2) {
            let r = ak_bound(n, n / 2 - 1, 1).unwrap();
            assert_eq!(r.lower(), binomial(n as u64 - 1, n as i64 / 2 - 2), "n = {n}");
        }
    }

    #[test]
    fn union_l_values() {
        assert_eq!(union_l_upper_bound(3, 1).unwrap().exact(), Some(7));
        assert_eq!(union_l_upper_bound(4, 2).unwrap().exact(), Some(11));
        assert_eq!(union_l_upper_bound(3, 2).unwrap().exact(), Some(4));
        assert_eq!(union_l_upper_bound(3, 3).unwrap().exact(), Some(4));
        assert_eq!(union_l_upper_bound(4, 1).unwrap().exact(), Some(12));
        assert_eq!(union_l_upper_bound(5, 2).unwrap().exact(), Some(17));
        assert!(union_l_upper_bound(2, 1).is_err());
        assert!(union_l_upper_bound(4, 5).is_err());
    }

    #[test]
    fn f_values() {
        let cases = [
            ((3, 1, 1), 4),
            ((3, 1, 2), 5),
            ((4, 1, 2), 11),
            ((3, 2, 2), 7),
            ((4, 2, 2), 12),
            ((5, 2, 2), 26),
            ((3, 1, 3), 6),
            ((5, 1, 3), 22),
            ((4, 1, 3), 11),
            ((5, 1, 2), 20),
        ];
        for ((n, s, t), v) in cases {
            assert_eq!(f_value(n, s, t).unwrap().exact(), Some(v), "f({n},{s},{t})");
        }
        assert_eq!(f_value(5, 2, 1).unwrap(), f_value(5, 1, 2).unwrap());
        let r = f_value(10, 1, 4).unwrap();
        assert_eq!(r.case, BoundCase::St1tInterval);
        assert_eq!(
            r.value,
            BoundValue::Interval { lower: f_value(10, 1, 3).unwrap().lower(), upper: None }
        );
        assert!(r.upper_symbolic.is_some());
        let r = f_value(7, 3, 2).unwrap();
        assert_eq!(r.case, BoundCase::StGeneralInterval);
        assert_eq!(r.lower(), f_value(7, 2, 2).unwrap().lower());
    }

    #[test]
    fn f_value_identities() {
        for n in 3..=12 {
            assert_eq!(
                union_l_upper_bound(n, 1).unwrap().exact(),
                f_value(n, 2, 2).unwrap().exact(),
                "n = {n}"
            );
            let f12 = f_value(n, 1, 2).unwrap().lower();
            let f13 = f_value(n, 1, 3).unwrap().lower();
            if n % 2 == 0 {
                assert_eq!(f12, f13);
            } else {
                let gap = binomial(n as u64 - 1, (n as i64 - 1) / 2) - binomial(n as u64 - 1, (n as i64 - 3) / 2);
                assert_eq!(f13 - f12, gap);
            }
            // f(n,1,3) = 2^(n-1) + C(n-1, floor((n-1)/2))
            assert_eq!(f13, (1 << (n - 1)) + binomial(n as u64 - 1, (n as i64 - 1) / 2));
        }
    }

    #[test]
    fn f22_against_rational_lower_form() {
        // f(n,2,2) >= 2^(n-1) + C(n, n/2) n/(n+2), equality for even n
        for n in 3..=30usize {
            let f22 = f_value(n, 2, 2).unwrap().lower() as u128;
            let lhs = f22 * (n as u128 + 2);
            let rhs = (1u128 << (n - 1)) * (n as u128 + 2) + binomial(n as u64, n as i64 / 2) as u128 * n as u128;
            if n % 2 == 0 {
                assert_eq!(lhs, rhs, "n = {n}");
            } else {
                assert!(lhs > rhs, "n = {n}");
            }
        }
    }

    #[test]
    fn uniform_and_sunflower_values() {
        assert_eq!(uniform_upper_bound(6, 2, 2).unwrap().lower(), 6);
        assert_eq!(uniform_upper_bound(8, 3, 1).unwrap().lower(), 21);
        assert_eq!(uniform_upper_bound(5, 2, 3).unwrap().lower(), 6);
        assert_eq!(sunflower_threshold(2, 3).unwrap(), 8);
        assert_eq!(sunflower_threshold(0, 5).unwrap(), 1);
        assert_eq!(sunflower_threshold(3, 3).unwrap(), 48);
        assert_eq!(sunflower_threshold(3, 1).unwrap(), 0);
        assert!(sunflower_threshold(2, 0).is_err());
        assert!(sunflower_threshold(60, 1000).is_err());
    }

    #[test]
    fn counting_bounds() {
        assert_eq!(double_hit_bound(10, 3, 4).unwrap(), 40);
        for n in 2..=10 {
            assert_eq!(double_hit_bound(n, 2, 2).unwrap(), 1);
        }
        assert!(double_hit_bound(10, 3, 1).is_err());
        assert_eq!(level_pair_bound(5, 1, 0).unwrap(), 10);
        assert_eq!(level_pair_bound(3, 1, 0).unwrap(), 3);
        assert_eq!(level_pair_bound(4, 2, 1).unwrap(), 6);
        assert!(level_pair_bound(3, 1, 1).is_err());
        assert_eq!(katona_level_bound(5, 1, 1).unwrap(), 5);
        assert_eq!(katona_level_bound(5, 1, 2).unwrap(), 10);
        assert!(katona_level_bound(4, 2, 0).is_err());
        assert_eq!(katona_level_bound(6, 2, 2).unwrap(), 6);
        assert_eq!(level_pair_range(5, 1).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(level_pair_range(3, 1).collect::<Vec<_>>(), vec![0]);
        assert_eq!(katona_range(4, 2).collect::<Vec<_>>(), vec![1, 2]);
    }
}
