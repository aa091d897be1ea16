//! Seeded random families for property checks.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::setcore::{check_n, k_subsets, Family, SetMask};

/// The generator every seeded routine in this crate uses.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random `size`-subset of `[n]`.
pub fn random_set<R: Rng>(rng: &mut R, n: usize, size: usize) -> SetMask {
    index::sample(rng, n, size.min(n)).iter().fold(SetMask::EMPTY, |acc, p| acc.with(p + 1))
}

/// The upset generated by a few random sets, drawn mostly from the upper
/// half of the lattice so that intersecting-type properties are common.
pub fn random_upset<R: Rng>(rng: &mut R, n: usize) -> Result<Family> {
    check_n(n)?;
    if n > 16 {
        return Err(Error::TooLarge(format!("random upsets need n <= 16, got {n}")));
    }
    let count = rng.gen_range(1..=4);
    let generators: Vec<SetMask> = (0..count)
        .map(|_| {
            let size = if rng.gen_bool(0.75) { rng.gen_range(n / 2..=n) } else { rng.gen_range(0..=n) };
            random_set(rng, n, size)
        })
        .collect();
    let members = (0..1u32 << n)
        .map(SetMask::from_bits)
        .filter(|m| generators.iter().any(|g| g.is_subset(*m)));
    Ok(Family::new(n, members).expect("masks are distinct"))
}

/// Every subset of `[n]` independently with a random density.
pub fn random_family<R: Rng>(rng: &mut R, n: usize) -> Result<Family> {
    check_n(n)?;
    if n > 16 {
        return Err(Error::TooLarge(format!("random families need n <= 16, got {n}")));
    }
    let p: f64 = rng.gen_range(0.05..0.95);
    let members: Vec<SetMask> = (0..1u32 << n).map(SetMask::from_bits).filter(|_| rng.gen_bool(p)).collect();
    Ok(Family::new(n, members).expect("masks are distinct"))
}

/// Each member kept with probability one half.
pub fn random_subfamily<R: Rng>(rng: &mut R, f: &Family) -> Family {
    let kept: Vec<SetMask> = f.iter().filter(|_| rng.gen_bool(0.5)).collect();
    Family::new(f.n(), kept).expect("subfamily of a family")
}

/// `size` distinct `k`-subsets of `[n]`, uniformly at random.
pub fn random_uniform_family<R: Rng>(rng: &mut R, n: usize, k: usize, size: usize) -> Result<Family> {
    check_n(n)?;
    let mut layer: Vec<SetMask> = k_subsets(n, k).collect();
    if size > layer.len() {
        return Err(Error::ParamOutOfRange(format!("only {} {k}-subsets of [{n}], asked for {size}", layer.len())));
    }
    let (picked, _) = layer.partial_shuffle(rng, size);
    Ok(Family::new(n, picked.iter().copied()).expect("layer sets are distinct"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_shaped() {
        let a = random_upset(&mut rng(7), 5).unwrap();
        let b = random_upset(&mut rng(7), 5).unwrap();
        assert_eq!(a, b);
        assert!(a.is_upset() && !a.is_empty());

        let mut r = rng(1);
        for _ in 0..50 {
            let f = random_uniform_family(&mut r, 12, 3, 163).unwrap();
            assert_eq!(f.len(), 163);
            assert_eq!(f.uniformity(), Some(3));
        }
        assert!(random_uniform_family(&mut r, 4, 2, 7).is_err());

        let f = random_family(&mut r, 4).unwrap();
        let g = random_subfamily(&mut r, &f);
        assert_eq!(g.intersection(&f), g);
        assert_eq!(random_set(&mut r, 6, 6), SetMask::full(6));
    }
}
