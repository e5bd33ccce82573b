use rand::Rng;

use crate::error::{Error, Result};
use crate::trials::{Estimate, TrialPlan};

/// A family of linear forms `L(z) = sum_i a_i z_i` with coefficients in
/// `[0, K]`, kept in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormFamily {
    n: usize,
    k: u64,
    forms: Vec<Vec<u64>>,
}

/// Outcome of minimizing a form family at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearMin {
    /// `index` is 0-based into the family.
    Unique {
        index: usize,
        value: u64,
    },
    Tie {
        value: u64,
    },
}

impl LinearMin {
    pub fn is_unique(&self) -> bool {
        matches!(self, LinearMin::Unique { .. })
    }
}

impl LinearFormFamily {
    pub fn new(n: usize, k: u64, forms: Vec<Vec<u64>>) -> Result<Self> {
        for (i, f) in forms.iter().enumerate() {
            if f.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: f.len(),
                });
            }
            if let Some(&a) = f.iter().find(|&&a| a > k) {
                return Err(Error::InvalidArgument(format!(
                    "form {i} has coefficient {a} > K = {k}"
                )));
            }
        }
        Ok(LinearFormFamily { n, k, forms })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn max_coeff(&self) -> u64 {
        self.k
    }

    pub fn forms(&self) -> &[Vec<u64>] {
        &self.forms
    }

    /// Points are drawn from `{0, ..., 2Kn}^n`.
    pub fn point_range(&self) -> u64 {
        2 * self.k * self.n as u64
    }
}

/// Minimizes every form at `z`.
pub fn ks_unique_min(family: &LinearFormFamily, z: &[u64]) -> Result<LinearMin> {
    if z.len() != family.n {
        return Err(Error::ArityMismatch {
            expected: family.n,
            got: z.len(),
        });
    }
    if let Some(&v) = z.iter().find(|&&v| v > family.point_range()) {
        return Err(Error::InvalidArgument(format!(
            "point coordinate {v} outside [0, {}]",
            family.point_range()
        )));
    }
    let mut best: Option<(u64, usize)> = None;
    let mut count = 0;
    for (i, f) in family.forms.iter().enumerate() {
        let v: u64 = f.iter().zip(z).map(|(a, b)| a * b).sum();
        match best {
            Some((b, _)) if v > b => {}
            Some((b, _)) if v == b => count += 1,
            _ => {
                best = Some((v, i));
                count = 1;
            }
        }
    }
    match best {
        None => Err(Error::EmptyFamily),
        Some((value, index)) if count == 1 => Ok(LinearMin::Unique { index, value }),
        Some((value, _)) => Ok(LinearMin::Tie { value }),
    }
}

/// Monte-Carlo estimate of the unique-minimum probability for uniform `z`.
pub fn estimate_linear_form_isolation(
    family: &LinearFormFamily,
    plan: TrialPlan,
) -> Result<Estimate> {
    if family.forms.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let top = family.point_range();
    let outcomes = plan.map(|_, rng| {
        let z: Vec<u64> = (0..family.n).map(|_| rng.gen_range(0..=top)).collect();
        Ok(ks_unique_min(family, &z)?.is_unique())
    })?;
    Ok(Estimate::from_outcomes(&outcomes))
}

/// `count` pairwise distinct forms with coefficients uniform in `[0, k]`.
pub fn random_distinct_forms(
    n: usize,
    k: u64,
    count: usize,
    rng: &mut impl Rng,
) -> Result<LinearFormFamily> {
    let available = (k + 1).checked_pow(n as u32);
    if available.is_some_and(|a| (count as u64) > a) {
        return Err(Error::InvalidArgument(format!(
            "only {} distinct forms exist for n = {n}, K = {k}",
            available.unwrap_or(0)
        )));
    }
    let mut seen = std::collections::HashSet::new();
    let mut forms = Vec::with_capacity(count);
    while forms.len() < count {
        let f: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=k)).collect();
        if seen.insert(f.clone()) {
            forms.push(f);
        }
    }
    LinearFormFamily::new(n, k, forms)
}
