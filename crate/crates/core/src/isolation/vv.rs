use rand::Rng;

use crate::error::{Error, Result};
use crate::trials::{Estimate, TrialPlan};

/// Largest dimension accepted by [`vv_experiment`].
pub const VV_MAX_T: u32 = 20;

fn dot(a: u32, b: u32) -> bool {
    (a & b).count_ones() % 2 == 1
}

/// Estimates the probability that some `S_i = { v in S : v.w_j = 0 for all
/// j <= i }`, `1 <= i <= t`, has exactly one element, for `w_1..w_t` uniform
/// in `{0,1}^t`. Vectors are bitmasks of length `t`.
pub fn vv_experiment(set: &[u32], t: u32, plan: TrialPlan) -> Result<Estimate> {
    if t == 0 || t > VV_MAX_T {
        return Err(Error::InvalidArgument(format!(
            "t must be in [1, {VV_MAX_T}], got {t}"
        )));
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&v) = set.iter().find(|&&v| v >> t != 0) {
        return Err(Error::InvalidArgument(format!(
            "vector {v:#b} has more than {t} bits"
        )));
    }
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    let outcomes = plan.map(|_, rng| {
        let mut current = s.clone();
        for _ in 0..t {
            let w: u32 = rng.gen_range(0..1u32 << t);
            current.retain(|&v| !dot(v, w));
            if current.len() == 1 {
                return Ok(true);
            }
        }
        Ok(false)
    })?;
    Ok(Estimate::from_outcomes(&outcomes))
}

/// `size` distinct vectors of `{0,1}^t`.
pub fn random_bitset(t: u32, size: usize, rng: &mut impl Rng) -> Result<Vec<u32>> {
    if t == 0 || t > VV_MAX_T {
        return Err(Error::InvalidArgument(format!(
            "t must be in [1, {VV_MAX_T}], got {t}"
        )));
    }
    if size as u64 > 1u64 << t {
        return Err(Error::InvalidArgument(format!(
            "{{0,1}}^{t} has fewer than {size} vectors"
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let v = rng.gen_range(0..1u32 << t);
        if seen.insert(v) {
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exact success probability by enumerating every `(w_1, ..., w_t)`.
    fn exact(set: &[u32], t: u32) -> f64 {
        let choices = 1u64 << t;
        let total = choices.pow(t);
        let mut hits = 0u64;
        for code in 0..total {
            let mut current = set.to_vec();
            let mut c = code;
            let mut ok = false;
            for _ in 0..t {
                let w = (c % choices) as u32;
                c /= choices;
                current.retain(|&v| !dot(v, w));
                if current.len() == 1 {
                    ok = true;
                    break;
                }
            }
            hits += ok as u64;
        }
        hits as f64 / total as f64
    }

    #[test]
    fn single_vector_in_two_dims() {
        // S_2 is contained in S_1, so success iff v.w_1 = 0.
        assert_eq!(exact(&[0b01], 2), 0.5);
        let e = vv_experiment(&[0b01], 2, TrialPlan::new(10_000, 4)).unwrap();
        assert!(e.consistent_with(0.5), "{e:?}");
    }

    #[test]
    fn zero_vector_always_isolated() {
        let e = vv_experiment(&[0], 3, TrialPlan::new(200, 1)).unwrap();
        assert_eq!(e.p_hat, 1.0);
    }

    #[test]
    fn matches_enumeration_in_three_dims() {
        let set = [0b001, 0b011, 0b110];
        let p = exact(&set, 3);
        let e = vv_experiment(&set, 3, TrialPlan::new(20_000, 12).with_jobs(3)).unwrap();
        assert!(e.consistent_with(p), "exact {p}, {e:?}");
    }

    #[test]
    fn validation() {
        assert_eq!(
            vv_experiment(&[], 2, TrialPlan::new(10, 0)),
            Err(Error::EmptySet)
        );
        assert!(vv_experiment(&[4], 2, TrialPlan::new(10, 0)).is_err());
        assert!(vv_experiment(&[1], 21, TrialPlan::new(10, 0)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(random_bitset(3, 8, &mut rng).unwrap().len(), 8);
        assert!(random_bitset(3, 9, &mut rng).is_err());
    }
}
