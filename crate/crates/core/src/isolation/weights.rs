use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Domain of a weight function: `[n]`, or the grid `[d] x [n]` of
/// (position, variable) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Universe {
    Flat { n: usize },
    Grid { d: usize, n: usize },
}

impl Universe {
    pub fn size(&self) -> usize {
        match *self {
            Universe::Flat { n } => n,
            Universe::Grid { d, n } => d * n,
        }
    }
}

/// A total map from a universe to `[1, range_max]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightAssignment {
    universe: Universe,
    values: Vec<u64>,
    range_max: u64,
}

impl WeightAssignment {
    /// `values` are listed row-major for grids: `(1,1), (1,2), ..., (d,n)`.
    pub fn new(universe: Universe, values: Vec<u64>, range_max: u64) -> Result<Self> {
        if values.len() != universe.size() {
            return Err(Error::ArityMismatch {
                expected: universe.size(),
                got: values.len(),
            });
        }
        let w = WeightAssignment {
            universe,
            values,
            range_max,
        };
        if let Some(k) = w.values.iter().position(|&v| v == 0 || v > range_max) {
            return Err(Error::WeightOutOfRange {
                position: w.position_name(k),
                value: w.values[k],
                max: range_max,
            });
        }
        Ok(w)
    }

    pub fn flat(values: Vec<u64>, range_max: u64) -> Result<Self> {
        Self::new(Universe::Flat { n: values.len() }, values, range_max)
    }

    /// Independent uniform values in `[1, range_max]`.
    pub fn sample(universe: Universe, range_max: u64, rng: &mut impl Rng) -> Self {
        assert!(
            range_max >= 1 || universe.size() == 0,
            "range_max must be positive"
        );
        let values = (0..universe.size())
            .map(|_| rng.gen_range(1..=range_max))
            .collect();
        WeightAssignment {
            universe,
            values,
            range_max,
        }
    }

    fn position_name(&self, k: usize) -> String {
        match self.universe {
            Universe::Flat { .. } => format!("{}", k + 1),
            Universe::Grid { n, .. } => format!("({}, {})", k / n + 1, k % n + 1),
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn range_max(&self) -> u64 {
        self.range_max
    }

    /// Weight of element `i` (1-based) of a flat universe.
    pub fn get(&self, i: usize) -> u64 {
        self.values[i - 1]
    }

    /// Weight of grid cell `(position, var)`, both 1-based.
    pub fn get_cell(&self, position: usize, var: usize) -> u64 {
        match self.universe {
            Universe::Grid { n, .. } => self.values[(position - 1) * n + (var - 1)],
            Universe::Flat { .. } => panic!("get_cell on a flat weight assignment"),
        }
    }

    /// `w(S)` for a subset of a flat universe given as a bitmask (bit `i - 1`
    /// is element `i`).
    pub fn weight_of_mask(&self, mask: u64) -> u64 {
        let mut total = 0;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            total += self.values[i];
            m &= m - 1;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_values_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let w = WeightAssignment::sample(Universe::Flat { n: 3 }, 6, &mut rng);
            assert!(w.values().iter().all(|&v| (1..=6).contains(&v)));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let u = Universe::Grid { d: 3, n: 2 };
        let a = WeightAssignment::sample(u, 12, &mut ChaCha8Rng::seed_from_u64(7));
        let b = WeightAssignment::sample(u, 12, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
    }

    #[test]
    fn marginal_is_uniform() {
        // Chi-square test of w(1) over 10^4 draws, 6 bins (5 dof).
        // The 0.999 quantile of chi^2_5 is 20.52.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = [0usize; 6];
        let draws = 10_000;
        for _ in 0..draws {
            let w = WeightAssignment::sample(Universe::Flat { n: 3 }, 6, &mut rng);
            counts[(w.get(1) - 1) as usize] += 1;
        }
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 20.52, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn grid_indexing_and_validation() {
        let w = WeightAssignment::new(Universe::Grid { d: 2, n: 2 }, vec![3, 1, 4, 5], 8).unwrap();
        assert_eq!(w.get_cell(1, 1), 3);
        assert_eq!(w.get_cell(2, 2), 5);
        assert!(matches!(
            WeightAssignment::new(Universe::Grid { d: 2, n: 2 }, vec![3, 1, 9, 5], 8),
            Err(Error::WeightOutOfRange { value: 9, .. })
        ));
        assert!(WeightAssignment::flat(vec![0, 1], 2).is_err());
        assert!(WeightAssignment::new(Universe::Flat { n: 3 }, vec![1], 2).is_err());
    }

    #[test]
    fn subset_weight() {
        let w = WeightAssignment::flat(vec![1, 2, 4], 6).unwrap();
        assert_eq!(w.weight_of_mask(0), 0);
        assert_eq!(w.weight_of_mask(0b101), 5);
    }
}
