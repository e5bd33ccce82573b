//! Identity-testing drivers: the randomized noncommutative test over layered
//! weight automata, coefficient extraction, the commutative univariate
//! substitution test, and the fooling-polynomial constructor.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{FieldElement, FieldSpec, RowEchelon, SquareMatrix};
use crate::automata::{monomial_dfa, run_circuit_on_automaton, LayerState, LayeredWeightAutomaton};
use crate::circuit::{ArithCircuit, GateAlgebra, DEFAULT_DEGREE_LIMIT};
use crate::error::{Error, Result};
use crate::isolation::{Universe, WeightAssignment};
use crate::ncpoly::{NcPoly, Word};
use crate::trials::{Estimate, TrialPlan};

/// Default cap on `(2nd^3 + 2)^2`, the entry count of one automaton matrix.
pub const DEFAULT_MATRIX_ENTRY_LIMIT: u128 = 100_000_000;
/// Largest `n` accepted by [`construct_fooling_polynomial`].
pub const FOOLING_MAX_N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PitLimits {
    pub max_matrix_entries: u128,
    pub degree_limit: u64,
}

impl Default for PitLimits {
    fn default() -> Self {
        PitLimits {
            max_matrix_entries: DEFAULT_MATRIX_ENTRY_LIMIT,
            degree_limit: DEFAULT_DEGREE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Zero,
    NonZero,
}

/// Where a nonzero value was observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessLocation {
    /// Entry `(start, (position, weight))` of the output matrix; position 0
    /// is the start state itself (constant term).
    AutomatonEntry { position: usize, weight: u64 },
    /// Coefficient of `y^exponent` after univariate substitution.
    UnivariateCoefficient { exponent: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub weights: WeightAssignment,
    pub location: WitnessLocation,
    pub value: FieldElement,
    pub trial: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PitVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub trials_run: usize,
    pub seed: u64,
}

impl PitVerdict {
    pub fn is_zero(&self) -> bool {
        self.verdict == Verdict::Zero
    }

    fn from_hit(hit: Option<(usize, Witness)>, trials_run: usize, seed: u64) -> Self {
        match hit {
            Some((_, witness)) => PitVerdict {
                verdict: Verdict::NonZero,
                witness: Some(witness),
                trials_run,
                seed,
            },
            None => PitVerdict {
                verdict: Verdict::Zero,
                witness: None,
                trials_run,
                seed,
            },
        }
    }
}

fn resolve_degree(c: &ArithCircuit, degree: Option<u64>, limits: PitLimits) -> Result<u64> {
    match degree {
        Some(d) => Ok(d),
        None => c.formal_degree_with_limit(limits.degree_limit),
    }
}

fn check_automaton_size(n: usize, d: u64, limits: PitLimits) -> Result<usize> {
    let states = 2 * (n as u128) * (d as u128).pow(3) + 2;
    if states * states > limits.max_matrix_entries {
        return Err(Error::ResourceLimit(format!(
            "automaton with {states} states needs {} matrix entries, limit {}",
            states * states,
            limits.max_matrix_entries
        )));
    }
    usize::try_from(d)
        .map_err(|_| Error::ResourceLimit(format!("degree {d} does not fit in memory")))
}

/// Output-matrix entries `(start, q)` for every non-sink state `q`, as
/// `(state, value)` pairs in state order.
fn start_row(
    c: &ArithCircuit,
    automaton: &LayeredWeightAutomaton,
) -> Result<Vec<(usize, FieldElement)>> {
    let out = c.eval_on_matrices(&automaton.transition_matrices(c.field()))?;
    let sink = automaton.sink();
    Ok(out
        .row(automaton.start())
        .iter()
        .filter(|(q, _)| *q != sink)
        .cloned()
        .collect())
}

fn location_of(automaton: &LayeredWeightAutomaton, q: usize) -> WitnessLocation {
    match automaton.state_label(q) {
        LayerState::Layer { position, weight } => {
            WitnessLocation::AutomatonEntry { position, weight }
        }
        _ => WitnessLocation::AutomatonEntry {
            position: 0,
            weight: 0,
        },
    }
}

fn nc_trial(
    c: &ArithCircuit,
    d: usize,
    trial: usize,
    rng: &mut impl Rng,
) -> Result<Option<Witness>> {
    let n = c.num_vars();
    let universe = Universe::Grid { d, n };
    let weights = WeightAssignment::sample(universe, (2 * d * n) as u64, rng);
    let automaton = LayeredWeightAutomaton::build(n, d, &weights)?;
    let row = start_row(c, &automaton)?;
    Ok(row.into_iter().next().map(|(q, value)| Witness {
        location: location_of(&automaton, q),
        weights,
        value,
        trial,
    }))
}

/// Randomized noncommutative identity test.
///
/// Each trial draws `w : [d] x [n] -> [2dn]`, evaluates the circuit once on
/// the layered automaton's transition matrices and scans the start row. The
/// entry at `(start, (t, V))` is the sum of the coefficients of the degree-`t`
/// monomials of weight `V`, and the `(start, start)` entry is the constant
/// term, so a nonzero entry certifies `f != 0`.
pub fn nc_pit(
    c: &ArithCircuit,
    degree: Option<u64>,
    plan: TrialPlan,
    limits: PitLimits,
) -> Result<PitVerdict> {
    if plan.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial required".into()));
    }
    let d = check_automaton_size(c.num_vars(), resolve_degree(c, degree, limits)?, limits)?;
    let (hit, trials_run) = plan.find_first(|i, rng| nc_trial(c, d, i, rng))?;
    Ok(PitVerdict::from_hit(hit, trials_run, plan.seed))
}

/// Re-evaluates the circuit on the witness automaton and checks that the
/// recorded entry is reproduced and nonzero.
pub fn verify_nc_witness(c: &ArithCircuit, witness: &Witness) -> Result<bool> {
    let Universe::Grid { d, n } = witness.weights.universe() else {
        return Ok(false);
    };
    if n != c.num_vars() || witness.value.is_zero() {
        return Ok(false);
    }
    let WitnessLocation::AutomatonEntry { position, weight } = witness.location else {
        return Ok(false);
    };
    let automaton = LayeredWeightAutomaton::build(n, d, &witness.weights)?;
    let q = if position == 0 {
        automaton.start()
    } else if position <= d && (1..=automaton.max_weight()).contains(&weight) {
        automaton.index_of(LayerState::Layer { position, weight })
    } else {
        return Ok(false);
    };
    let out = c.eval_on_matrices(&automaton.transition_matrices(c.field()))?;
    out.entry(automaton.start(), q)?.equals(&witness.value)
}

/// Exact coefficient of `m` in the polynomial computed by `c`.
pub fn extract_coefficient(c: &ArithCircuit, m: &Word) -> Result<FieldElement> {
    m.check_vars(c.num_vars())?;
    let dfa = monomial_dfa(m, c.num_vars())?;
    let out = run_circuit_on_automaton(c, &dfa)?;
    out.entry(dfa.start(), dfa.finals()[0])
}

/// Dense univariate polynomials with a degree cap; index = exponent, no
/// trailing zeros.
struct Univariate {
    field: FieldSpec,
    weights: Vec<u64>,
    cap: u64,
}

impl Univariate {
    fn trim(mut v: Vec<FieldElement>) -> Vec<FieldElement> {
        while v.last().is_some_and(FieldElement::is_zero) {
            v.pop();
        }
        v
    }
}

impl GateAlgebra for Univariate {
    type Value = Vec<FieldElement>;

    fn var(&self, index: usize) -> Result<Self::Value> {
        let e = self.weights[index - 1];
        if e > self.cap {
            return Err(Error::DegreeOverflow {
                degree: e,
                limit: self.cap,
            });
        }
        let mut v = vec![self.field.zero(); e as usize + 1];
        v[e as usize] = self.field.one();
        Ok(v)
    }

    fn constant(&self, c: &FieldElement) -> Result<Self::Value> {
        Ok(Self::trim(vec![c.clone()]))
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.clone();
        for (o, x) in out.iter_mut().zip(short) {
            o.add_assign_unchecked(x);
        }
        Ok(Self::trim(out))
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        if a.is_empty() || b.is_empty() {
            return Ok(Vec::new());
        }
        let degree = (a.len() + b.len() - 2) as u64;
        if degree > self.cap {
            return Err(Error::DegreeOverflow {
                degree,
                limit: self.cap,
            });
        }
        let mut out = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j].add_assign_unchecked(&x.mul_unchecked(y));
                }
            }
        }
        Ok(Self::trim(out))
    }
}

/// Evaluates `c` commutatively under `x_i <- y^{w(i)}` and returns the dense
/// coefficient vector of the resulting univariate polynomial (empty for 0).
/// Any intermediate of degree above `cap` is a [`Error::DegreeOverflow`].
pub fn ks_substitute(
    c: &ArithCircuit,
    weights: &WeightAssignment,
    cap: u64,
) -> Result<Vec<FieldElement>> {
    if weights.universe() != (Universe::Flat { n: c.num_vars() }) {
        return Err(Error::InvalidArgument(format!(
            "weights over {:?} do not match {} variables",
            weights.universe(),
            c.num_vars()
        )));
    }
    c.evaluate(&Univariate {
        field: c.field(),
        weights: weights.values().to_vec(),
        cap,
    })
}

/// `(range, cap)`: weights are drawn from `[1, max(1, 2nd)]` and intermediates
/// may have degree at most `d * range`.
pub fn ks_parameters(n: usize, d: u64) -> (u64, u64) {
    let range = (2 * n as u64 * d).max(1);
    (range, d * range)
}

/// Randomized commutative identity test by substitution into one variable.
pub fn ks_commutative_pit(
    c: &ArithCircuit,
    degree: Option<u64>,
    plan: TrialPlan,
    limits: PitLimits,
) -> Result<PitVerdict> {
    if plan.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial required".into()));
    }
    let n = c.num_vars();
    let d = resolve_degree(c, degree, limits)?;
    let (range, cap) = ks_parameters(n, d);
    let (hit, trials_run) = plan.find_first(|i, rng| {
        let weights = WeightAssignment::sample(Universe::Flat { n }, range, rng);
        let poly = ks_substitute(c, &weights, cap)?;
        Ok(poly.iter().position(|x| !x.is_zero()).map(|e| Witness {
            location: WitnessLocation::UnivariateCoefficient { exponent: e as u64 },
            value: poly[e].clone(),
            weights,
            trial: i,
        }))
    })?;
    Ok(PitVerdict::from_hit(hit, trials_run, plan.seed))
}

/// Fraction of single noncommutative trials that detect `c != 0`.
pub fn pit_statistics(
    c: &ArithCircuit,
    degree: Option<u64>,
    plan: TrialPlan,
    limits: PitLimits,
) -> Result<Estimate> {
    let d = check_automaton_size(c.num_vars(), resolve_degree(c, degree, limits)?, limits)?;
    let outcomes = plan.map(|i, rng| Ok(nc_trial(c, d, i, rng)?.is_some()))?;
    Ok(Estimate::from_outcomes(&outcomes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoolingResult {
    /// Homogeneous of degree `n`, nonzero.
    pub polynomial: NcPoly,
    /// Distinct nontrivial linear constraints generated.
    pub constraints_count: usize,
    pub constraint_rank: usize,
    pub weight_functions_used: Vec<WeightAssignment>,
}

/// Finds a nonzero homogeneous degree-`n` polynomial in `n` variables whose
/// image under every automaton of the collection (with `d = n`) is the zero
/// matrix, by solving one 0/1 linear constraint per matrix entry.
pub fn construct_fooling_polynomial(
    n: usize,
    collection: &[WeightAssignment],
    field: FieldSpec,
) -> Result<FoolingResult> {
    if n == 0 || n > FOOLING_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "n must be in [1, {FOOLING_MAX_N}], got {n}"
        )));
    }
    let words = Word::all_of_length(n, n);
    let automata = collection
        .iter()
        .map(|w| LayeredWeightAutomaton::build(n, n, w))
        .collect::<Result<Vec<_>>>()?;

    // Entry (q, q') of f(M) is the sum of c_alpha over words alpha driving q to q'.
    let mut constraints: BTreeSet<Vec<bool>> = BTreeSet::new();
    for a in &automata {
        let symbols: Vec<Vec<usize>> = words
            .iter()
            .map(|w| w.letters().iter().map(|i| i - 1).collect())
            .collect();
        for q in 0..a.num_states() {
            let mut by_target: std::collections::BTreeMap<usize, Vec<bool>> = Default::default();
            for (k, s) in symbols.iter().enumerate() {
                let target = a.dfa().run_from(q, s)?;
                by_target
                    .entry(target)
                    .or_insert_with(|| vec![false; words.len()])[k] = true;
            }
            constraints.extend(by_target.into_values());
        }
    }
    let rows: Vec<Vec<FieldElement>> = constraints
        .iter()
        .map(|r| {
            r.iter()
                .map(|&b| if b { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    let echelon = RowEchelon::reduce(field, &rows, words.len())?;
    let solution = echelon.kernel_vector(field)?;
    let polynomial = NcPoly::from_terms(n, field, words.into_iter().zip(solution))?;

    for a in &automata {
        let image: SquareMatrix = polynomial.eval_on_matrices(&a.transition_matrices(field))?;
        if !image.is_zero() {
            return Err(Error::SelfCheck(
                "fooling polynomial has a nonzero matrix image".into(),
            ));
        }
    }
    if polynomial.is_zero() {
        return Err(Error::SelfCheck("fooling polynomial is zero".into()));
    }
    Ok(FoolingResult {
        polynomial,
        constraints_count: constraints.len(),
        constraint_rank: echelon.rank(),
        weight_functions_used: collection.to_vec(),
    })
}
