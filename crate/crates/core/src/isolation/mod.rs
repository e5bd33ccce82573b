//! Isolation-lemma tooling: weight sampling, unique-minimum checks for
//! explicit and circuit-defined set families, Monte-Carlo estimates, a greedy
//! search for weight collections that isolate a list of families, and an
//! exhaustive search for families no given collection isolates.

mod linear;
mod vv;
mod weights;

pub use linear::{
    estimate_linear_form_isolation, ks_unique_min, random_distinct_forms, LinearFormFamily,
    LinearMin,
};
pub use vv::{random_bitset, vv_experiment};
pub use weights::{Universe, WeightAssignment};

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::circuit::BoolCircuit;
use crate::error::{Error, Result};
use crate::trials::{Estimate, TrialPlan};

/// Circuit-defined families are enumerated only up to this many inputs.
pub const ENUMERATION_GUARD: usize = 24;
/// Witness cap for [`unique_min_verbose`].
pub const MAX_TIE_WITNESSES: usize = 16;

/// A subset of `[n]` as a bitmask: bit `i - 1` is element `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "Vec<usize>")]
pub struct Subset(pub u64);

impl Subset {
    pub fn from_elements(elements: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in elements {
            if i == 0 || i > 64 {
                return Err(Error::InvalidArgument(format!(
                    "element {i} outside [1, 64]"
                )));
            }
            mask |= 1 << (i - 1);
        }
        Ok(Subset(mask))
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..64)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

impl From<Subset> for Vec<usize> {
    fn from(s: Subset) -> Self {
        s.elements()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A family of subsets of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetFamily {
    /// Sorted and deduplicated.
    Explicit { n: usize, sets: Vec<Subset> },
    /// `F_C = { S : C(chi_S) = 1 }`.
    CircuitDefined(BoolCircuit),
}

impl SetFamily {
    pub fn explicit(n: usize, sets: impl IntoIterator<Item = Subset>) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidArgument(format!(
                "universe size {n} exceeds 64"
            )));
        }
        let mut sets: Vec<Subset> = sets.into_iter().collect();
        let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if let Some(bad) = sets.iter().find(|s| s.0 & !limit != 0) {
            return Err(Error::InvalidArgument(format!(
                "set {bad} is not a subset of [{n}]"
            )));
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(SetFamily::Explicit { n, sets })
    }

    pub fn from_lists(n: usize, lists: &[&[usize]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| Subset::from_elements(l))
            .collect::<Result<Vec<_>>>()?;
        Self::explicit(n, sets)
    }

    /// All nonempty subsets of `[n]`.
    pub fn all_nonempty(n: usize) -> Result<Self> {
        if n > ENUMERATION_GUARD {
            return Err(Error::EnumerationTooLarge {
                n,
                limit: ENUMERATION_GUARD,
            });
        }
        Self::explicit(n, (1..1u64 << n).map(Subset))
    }

    pub fn universe_size(&self) -> usize {
        match self {
            SetFamily::Explicit { n, .. } => *n,
            SetFamily::CircuitDefined(c) => c.num_inputs(),
        }
    }

    fn check_enumerable(&self) -> Result<()> {
        let n = self.universe_size();
        if matches!(self, SetFamily::CircuitDefined(_)) && n > ENUMERATION_GUARD {
            return Err(Error::EnumerationTooLarge {
                n,
                limit: ENUMERATION_GUARD,
            });
        }
        Ok(())
    }

    /// Visits every member in increasing bitmask order.
    fn for_each_member(&self, mut f: impl FnMut(Subset)) -> Result<()> {
        self.check_enumerable()?;
        match self {
            SetFamily::Explicit { sets, .. } => sets.iter().copied().for_each(f),
            SetFamily::CircuitDefined(c) => {
                for mask in 0..1u64 << c.num_inputs() {
                    if c.eval_mask(mask) {
                        f(Subset(mask));
                    }
                }
            }
        }
        Ok(())
    }

    /// The explicit member list.
    pub fn members(&self) -> Result<Vec<Subset>> {
        let mut out = Vec::new();
        self.for_each_member(|s| out.push(s))?;
        Ok(out)
    }

    /// The same family with its members listed explicitly.
    pub fn materialize(&self) -> Result<SetFamily> {
        Ok(SetFamily::Explicit {
            n: self.universe_size(),
            sets: self.members()?,
        })
    }
}

/// Parses a family file: one subset per line as space-separated 1-based
/// indices, `-` for the empty set, or a single `@circuit <path>` line whose
/// path is handed to `load_circuit`. `#` starts a comment. Without an explicit
/// `n`, the universe is `[max index]`.
pub fn parse_family(
    text: &str,
    n: Option<usize>,
    mut load_circuit: impl FnMut(&str) -> Result<BoolCircuit>,
) -> Result<SetFamily> {
    let mut sets = Vec::new();
    let mut circuit: Option<(usize, BoolCircuit)> = None;
    let mut max_index = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if circuit.is_some() {
            return Err(Error::validation(
                line,
                "`@circuit` must be the only entry of a family file",
            ));
        }
        if let Some(rest) = content.strip_prefix("@circuit") {
            let path = rest.trim();
            if path.is_empty() || !rest.starts_with(char::is_whitespace) {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: "expected `@circuit <path>`".into(),
                });
            }
            if !sets.is_empty() {
                return Err(Error::validation(
                    line,
                    "`@circuit` cannot be mixed with explicit sets",
                ));
            }
            circuit = Some((line, load_circuit(path)?));
            continue;
        }
        if content == "-" {
            sets.push(Subset(0));
            continue;
        }
        let mut elements = Vec::new();
        let mut column = raw.len() - raw.trim_start().len() + 1;
        for token in content.split_whitespace() {
            let i: usize = token.parse().map_err(|_| Error::Parse {
                line,
                column,
                message: format!("expected an element index, found `{token}`"),
            })?;
            if i == 0 || i > 64 || n.is_some_and(|n| i > n) {
                return Err(Error::validation(
                    line,
                    format!("element {i} outside [1, {}]", n.unwrap_or(64).min(64)),
                ));
            }
            max_index = max_index.max(i);
            elements.push(i);
            column += token.len() + 1;
        }
        sets.push(Subset::from_elements(&elements)?);
    }
    match circuit {
        Some((line, c)) => {
            if n.is_some_and(|n| n != c.num_inputs()) {
                return Err(Error::validation(
                    line,
                    format!(
                        "circuit has {} inputs, expected {}",
                        c.num_inputs(),
                        n.unwrap_or(0)
                    ),
                ));
            }
            Ok(SetFamily::CircuitDefined(c))
        }
        None => SetFamily::explicit(n.unwrap_or(max_index), sets),
    }
}

/// Outcome of a minimum-weight query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MinOutcome {
    Unique {
        set: Subset,
        weight: u64,
    },
    /// At least two members attain `weight`. `witnesses` lists up to
    /// [`MAX_TIE_WITNESSES`] of them in verbose mode and is empty otherwise.
    Tie {
        weight: u64,
        witnesses: Vec<Subset>,
    },
    EmptyFamily,
}

impl MinOutcome {
    pub fn is_unique(&self) -> bool {
        matches!(self, MinOutcome::Unique { .. })
    }
}

struct MinScan {
    best: Option<(u64, Subset)>,
    count: usize,
    witnesses: Vec<Subset>,
    keep: usize,
}

impl MinScan {
    fn new(keep: usize) -> Self {
        MinScan {
            best: None,
            count: 0,
            witnesses: Vec::new(),
            keep,
        }
    }

    fn offer(&mut self, weight: u64, s: Subset) {
        match self.best {
            Some((b, _)) if weight > b => {}
            Some((b, _)) if weight == b => {
                self.count += 1;
                if self.witnesses.len() < self.keep {
                    self.witnesses.push(s);
                }
            }
            _ => {
                self.best = Some((weight, s));
                self.count = 1;
                self.witnesses.clear();
                if self.keep > 0 {
                    self.witnesses.push(s);
                }
            }
        }
    }

    fn finish(self) -> MinOutcome {
        match self.best {
            None => MinOutcome::EmptyFamily,
            Some((weight, set)) if self.count == 1 => MinOutcome::Unique { set, weight },
            Some((weight, _)) => MinOutcome::Tie {
                weight,
                witnesses: self.witnesses,
            },
        }
    }
}

fn check_flat(family: &SetFamily, w: &WeightAssignment) -> Result<()> {
    let n = family.universe_size();
    if w.universe() != (Universe::Flat { n }) {
        return Err(Error::InvalidArgument(format!(
            "weights over {:?} do not match a family on [{n}]",
            w.universe()
        )));
    }
    Ok(())
}

/// The unique minimum-weight member, where `w(T)` sums the weights of the
/// elements of `T` and the empty set weighs 0.
pub fn unique_min(family: &SetFamily, w: &WeightAssignment) -> Result<MinOutcome> {
    unique_min_verbose(family, w, 0)
}

/// As [`unique_min`], reporting up to `max_witnesses` (capped at 16) tied
/// minimizers.
pub fn unique_min_verbose(
    family: &SetFamily,
    w: &WeightAssignment,
    max_witnesses: usize,
) -> Result<MinOutcome> {
    check_flat(family, w)?;
    let mut scan = MinScan::new(max_witnesses.min(MAX_TIE_WITNESSES));
    family.for_each_member(|s| scan.offer(w.weight_of_mask(s.0), s))?;
    Ok(scan.finish())
}

fn unique_min_of(members: &[Subset], w: &WeightAssignment) -> bool {
    let mut scan = MinScan::new(0);
    for &s in members {
        scan.offer(w.weight_of_mask(s.0), s);
    }
    scan.finish().is_unique()
}

/// Monte-Carlo estimate of `P_w[unique minimum]` for `w` uniform on
/// `[1, range_max]^n`.
pub fn estimate_isolation_probability(
    family: &SetFamily,
    range_max: u64,
    plan: TrialPlan,
) -> Result<Estimate> {
    if plan.trials < 100 {
        return Err(Error::InvalidArgument(format!(
            "at least 100 samples required, got {}",
            plan.trials
        )));
    }
    if range_max == 0 {
        return Err(Error::InvalidArgument(
            "range_max must be at least 1".into(),
        ));
    }
    let members = family.members()?;
    let universe = Universe::Flat {
        n: family.universe_size(),
    };
    let outcomes = plan.map(|_, rng| {
        let w = WeightAssignment::sample(universe, range_max, rng);
        Ok(unique_min_of(&members, &w))
    })?;
    Ok(Estimate::from_outcomes(&outcomes))
}

/// Greedy randomized cover: draws up to `budget` assignments and keeps each
/// one that isolates a family not yet covered. Every returned assignment has
/// been checked against the families it is credited with.
pub fn find_weight_collection(
    families: &[SetFamily],
    range_max: u64,
    budget: usize,
    rng: &mut impl Rng,
) -> Result<Vec<WeightAssignment>> {
    let Some(first) = families.first() else {
        return Ok(Vec::new());
    };
    let n = first.universe_size();
    if let Some(k) = families.iter().position(|f| f.universe_size() != n) {
        return Err(Error::InvalidArgument(format!(
            "family {k} is over [{}], expected [{n}]",
            families[k].universe_size()
        )));
    }
    let members = families
        .iter()
        .map(SetFamily::members)
        .collect::<Result<Vec<_>>>()?;
    let mut uncovered: Vec<usize> = (0..families.len()).collect();
    let mut collection = Vec::new();
    for _ in 0..budget {
        if uncovered.is_empty() {
            break;
        }
        let w = WeightAssignment::sample(Universe::Flat { n }, range_max, rng);
        let before = uncovered.len();
        uncovered.retain(|&k| !unique_min_of(&members[k], &w));
        if uncovered.len() < before {
            collection.push(w);
        }
    }
    if uncovered.is_empty() {
        Ok(collection)
    } else {
        Err(Error::BudgetExhausted { uncovered })
    }
}

/// True when every family has a unique minimum under some assignment.
pub fn verify_cover(families: &[SetFamily], collection: &[WeightAssignment]) -> Result<bool> {
    for f in families {
        let mut covered = false;
        for w in collection {
            if unique_min(f, w)?.is_unique() {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest universe [`defeating_family_search`] accepts.
pub const DEFEATING_SEARCH_MAX_N: usize = 4;

/// Searches for a family of subsets of `[n]` that has a tied minimum under
/// every assignment of the collection.
///
/// Families of equal-cardinality sets are tried first, smallest cardinality
/// first; then all `2^(2^n)` families in increasing bitmask order. `None`
/// means no such family exists at this `n`.
pub fn defeating_family_search(
    collection: &[WeightAssignment],
    n: usize,
) -> Result<Option<SetFamily>> {
    if n == 0 || n > DEFEATING_SEARCH_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "defeating-family search needs 1 <= n <= {DEFEATING_SEARCH_MAX_N}, got {n}"
        )));
    }
    if let Some(w) = collection
        .iter()
        .find(|w| w.universe() != (Universe::Flat { n }))
    {
        return Err(Error::InvalidArgument(format!(
            "assignment over {:?}, expected a flat universe of size {n}",
            w.universe()
        )));
    }
    // weights[k][s] = w_k(s) for every subset s of [n].
    let weights: Vec<Vec<u64>> = collection
        .iter()
        .map(|w| (0..1u64 << n).map(|s| w.weight_of_mask(s)).collect())
        .collect();
    let defeats = |members: &[u64]| -> bool {
        members.len() >= 2
            && weights.iter().all(|ws| {
                let min = members.iter().map(|&s| ws[s as usize]).min().unwrap_or(0);
                members.iter().filter(|&&s| ws[s as usize] == min).count() >= 2
            })
    };
    let found =
        |members: Vec<u64>| SetFamily::explicit(n, members.into_iter().map(Subset)).map(Some);

    for k in 1..=n as u32 {
        let layer: Vec<u64> = (0..1u64 << n).filter(|s| s.count_ones() == k).collect();
        for pick in 1..1u64 << layer.len() {
            let members: Vec<u64> = select(&layer, pick);
            if defeats(&members) {
                return found(members);
            }
        }
    }
    let all: Vec<u64> = (0..1u64 << n).collect();
    for pick in 1..=(u64::MAX >> (64 - (1u32 << n))) {
        let members = select(&all, pick);
        if defeats(&members) {
            return found(members);
        }
    }
    Ok(None)
}

fn select(items: &[u64], pick: u64) -> Vec<u64> {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| pick >> i & 1 == 1)
        .map(|(_, &s)| s)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_bool_circuit, BoolGate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists).unwrap()
    }

    fn flat(v: &[u64], range: u64) -> WeightAssignment {
        WeightAssignment::flat(v.to_vec(), range).unwrap()
    }

    fn and_family() -> SetFamily {
        SetFamily::CircuitDefined(
            BoolCircuit::new(
                2,
                vec![BoolGate::Input(1), BoolGate::Input(2), BoolGate::And(0, 1)],
                2,
            )
            .unwrap(),
        )
    }

    #[test]
    fn unique_and_tie() {
        let f = fam(2, &[&[1], &[2]]);
        assert_eq!(
            unique_min(&f, &flat(&[1, 2], 4)).unwrap(),
            MinOutcome::Unique {
                set: Subset(0b01),
                weight: 1
            }
        );
        assert_eq!(
            unique_min(&f, &flat(&[1, 1], 4)).unwrap(),
            MinOutcome::Tie {
                weight: 1,
                witnesses: vec![]
            }
        );
        assert_eq!(
            unique_min_verbose(&f, &flat(&[1, 1], 4), 16).unwrap(),
            MinOutcome::Tie {
                weight: 1,
                witnesses: vec![Subset(0b01), Subset(0b10)]
            }
        );
        assert_eq!(
            unique_min(&fam(2, &[]), &flat(&[1, 1], 4)).unwrap(),
            MinOutcome::EmptyFamily
        );
    }

    #[test]
    fn empty_set_weighs_zero() {
        let f = fam(2, &[&[], &[1]]);
        assert_eq!(
            unique_min(&f, &flat(&[1, 1], 4)).unwrap(),
            MinOutcome::Unique {
                set: Subset(0),
                weight: 0
            }
        );
    }

    #[test]
    fn circuit_family_singleton() {
        let f = and_family();
        for w in [[1, 1], [3, 4], [4, 2]] {
            assert_eq!(
                unique_min(&f, &flat(&w, 4)).unwrap(),
                MinOutcome::Unique {
                    set: Subset(0b11),
                    weight: w[0] + w[1]
                }
            );
        }
    }

    #[test]
    fn circuit_defined_matches_enumerated() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..30 {
            let n = 1 + trial % 10;
            let c = random_bool_circuit(n, n + 12, &mut rng);
            let f = SetFamily::CircuitDefined(c);
            let explicit = f.materialize().unwrap();
            for _ in 0..5 {
                let w = WeightAssignment::sample(Universe::Flat { n }, 2 * n as u64, &mut rng);
                assert_eq!(
                    unique_min_verbose(&f, &w, 16).unwrap(),
                    unique_min_verbose(&explicit, &w, 16).unwrap()
                );
            }
        }
    }

    #[test]
    fn enumeration_guard() {
        let c = BoolCircuit::new(25, vec![BoolGate::Input(1)], 0).unwrap();
        let f = SetFamily::CircuitDefined(c);
        let w = WeightAssignment::sample(
            Universe::Flat { n: 25 },
            50,
            &mut ChaCha8Rng::seed_from_u64(0),
        );
        assert_eq!(
            unique_min(&f, &w),
            Err(Error::EnumerationTooLarge {
                n: 25,
                limit: ENUMERATION_GUARD
            })
        );
    }

    #[test]
    fn mismatched_universe() {
        let f = fam(2, &[&[1]]);
        assert!(unique_min(&f, &flat(&[1, 1, 1], 4)).is_err());
        assert!(SetFamily::from_lists(2, &[&[3]]).is_err());
    }

    #[test]
    fn estimate_singleton_is_exactly_one() {
        let f = fam(3, &[&[1, 3]]);
        let e = estimate_isolation_probability(&f, 6, TrialPlan::new(500, 1)).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert!(estimate_isolation_probability(&f, 6, TrialPlan::new(99, 1)).is_err());
    }

    #[test]
    fn estimate_all_nonempty_subsets_of_two() {
        // Exhaustive oracle over the 16 weight pairs in [4]^2.
        let f = SetFamily::all_nonempty(2).unwrap();
        let mut unique = 0;
        for a in 1..=4 {
            for b in 1..=4 {
                if unique_min(&f, &flat(&[a, b], 4)).unwrap().is_unique() {
                    unique += 1;
                }
            }
        }
        assert_eq!(unique, 12);
        let e = estimate_isolation_probability(&f, 4, TrialPlan::new(4000, 3)).unwrap();
        assert!(e.consistent_with(0.75), "{e:?}");
        let par =
            estimate_isolation_probability(&f, 4, TrialPlan::new(4000, 3).with_jobs(4)).unwrap();
        assert_eq!(e, par);
    }

    #[test]
    fn cover_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let single = vec![fam(3, &[&[2]])];
        assert_eq!(
            find_weight_collection(&single, 6, 10, &mut rng)
                .unwrap()
                .len(),
            1
        );

        let pair = vec![fam(2, &[&[1], &[2]])];
        let ws = find_weight_collection(&pair, 4, 100, &mut rng).unwrap();
        assert_eq!(ws.len(), 1);
        assert_ne!(ws[0].get(1), ws[0].get(2));

        let never = vec![fam(2, &[])];
        assert_eq!(
            find_weight_collection(&never, 4, 10, &mut rng),
            Err(Error::BudgetExhausted { uncovered: vec![0] })
        );
    }

    #[test]
    fn cover_random_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let families: Vec<SetFamily> = (0..8)
                .map(|_| {
                    let k = rng.gen_range(2..12);
                    SetFamily::explicit(6, (0..k).map(|_| Subset(rng.gen_range(1..64)))).unwrap()
                })
                .collect();
            let ws = find_weight_collection(&families, 12, 500, &mut rng).unwrap();
            assert!(verify_cover(&families, &ws).unwrap());
        }
    }

    #[test]
    fn defeating_n1_never_exists() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let ws: Vec<_> = (0..3)
                .map(|_| WeightAssignment::sample(Universe::Flat { n: 1 }, 2, &mut rng))
                .collect();
            assert_eq!(defeating_family_search(&ws, 1).unwrap(), None);
        }
    }

    #[test]
    fn defeating_equal_weights() {
        let f = defeating_family_search(&[flat(&[1, 1], 4)], 2)
            .unwrap()
            .unwrap();
        assert_eq!(f, fam(2, &[&[1], &[2]]));
    }

    #[test]
    fn defeating_results_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..=4 {
            for size in 1..=4 {
                let ws: Vec<_> = (0..size)
                    .map(|_| WeightAssignment::sample(Universe::Flat { n }, 2 * n as u64, &mut rng))
                    .collect();
                if let Some(f) = defeating_family_search(&ws, n).unwrap() {
                    for w in &ws {
                        assert!(matches!(unique_min(&f, w).unwrap(), MinOutcome::Tie { .. }));
                    }
                }
            }
        }
        assert!(defeating_family_search(&[], 5).is_err());
    }

    #[test]
    fn family_file() {
        let f = parse_family("# family\n1 2\n-\n3\n2 1\n", None, |_| unreachable!()).unwrap();
        assert_eq!(f, fam(3, &[&[1, 2], &[], &[3]]));
        assert_eq!(f.universe_size(), 3);
        let f = parse_family("1\n", Some(5), |_| unreachable!()).unwrap();
        assert_eq!(f.universe_size(), 5);
        assert!(matches!(
            parse_family("1\n1 x\n", None, |_| unreachable!()),
            Err(Error::Parse {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            parse_family("1 6\n", Some(4), |_| unreachable!()),
            Err(Error::Validation { line: 1, .. })
        ));
        assert!(matches!(
            parse_family("0\n", None, |_| unreachable!()),
            Err(Error::Validation { line: 1, .. })
        ));
        let c = BoolCircuit::new(2, vec![BoolGate::Input(1)], 0).unwrap();
        let f = parse_family("@circuit and.bc\n", None, |p| {
            assert_eq!(p, "and.bc");
            Ok(c.clone())
        })
        .unwrap();
        assert_eq!(f, SetFamily::CircuitDefined(c.clone()));
        assert!(parse_family("1\n@circuit x\n", None, |_| Ok(c.clone())).is_err());
        assert!(parse_family("@circuit x\n1\n", None, |_| Ok(c.clone())).is_err());
        assert!(parse_family("@circuit x\n", Some(3), |_| Ok(c.clone())).is_err());
    }

    #[test]
    fn subset_display() {
        assert_eq!(Subset(0b101).to_string(), "{1,3}");
        assert_eq!(Subset(0).to_string(), "{}");
        assert_eq!(Subset::from_elements(&[2, 3]).unwrap(), Subset(0b110));
    }
}
