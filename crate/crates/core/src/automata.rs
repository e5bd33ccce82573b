//! Deterministic automata and their transition matrices.
//!
//! For a DFA with states `Q`, symbol `b` gives the 0-1 matrix `M_b` with
//! `M_b[q][q'] = 1` iff `delta(q, b) = q'`. Word matrices multiply along the
//! word, so `M_w[q0][qf] = 1` exactly when the DFA accepts `w`. Evaluating an
//! arithmetic circuit on the matrices `M_{v_i}` of the variable codes yields a
//! matrix whose `(q0, qf)` entry is the sum of the coefficients of the
//! accepted monomials.
//!
//! Symbols are 0-based here: binary automata read `0` and `1`, the layered
//! automata read symbol `j - 1` for variable `x_j`.

use crate::algebra::{FieldSpec, SquareMatrix};
use crate::circuit::ArithCircuit;
use crate::error::{Error, Result};
use crate::isolation::{Universe, WeightAssignment};
use crate::ncpoly::Word;

/// A complete DFA. `finals` may hold several states; each one is a separate
/// acceptance query against the same transition structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    num_states: usize,
    alphabet_size: usize,
    delta: Vec<usize>,
    start: usize,
    finals: Vec<usize>,
}

impl Dfa {
    /// `delta` is row-major: `delta[q * alphabet_size + b]`.
    pub fn new(
        num_states: usize,
        alphabet_size: usize,
        delta: Vec<usize>,
        start: usize,
        finals: Vec<usize>,
    ) -> Result<Self> {
        if num_states == 0 || alphabet_size == 0 {
            return Err(Error::InvalidArgument(
                "a DFA needs states and symbols".into(),
            ));
        }
        if delta.len() != num_states * alphabet_size {
            return Err(Error::ArityMismatch {
                expected: num_states * alphabet_size,
                got: delta.len(),
            });
        }
        if let Some(bad) = delta
            .iter()
            .chain(&finals)
            .chain([&start])
            .find(|&&q| q >= num_states)
        {
            return Err(Error::InvalidArgument(format!(
                "state {bad} outside [0, {num_states})"
            )));
        }
        Ok(Dfa {
            num_states,
            alphabet_size,
            delta,
            start,
            finals,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn step(&self, q: usize, symbol: usize) -> usize {
        self.delta[q * self.alphabet_size + symbol]
    }

    /// `delta_w(q)`.
    pub fn run_from(&self, q: usize, word: &[usize]) -> Result<usize> {
        let mut q = q;
        for &b in word {
            self.check_symbol(b)?;
            q = self.step(q, b);
        }
        Ok(q)
    }

    pub fn accepts(&self, word: &[usize]) -> Result<bool> {
        let q = self.run_from(self.start, word)?;
        Ok(self.finals.contains(&q))
    }

    fn check_symbol(&self, b: usize) -> Result<()> {
        if b >= self.alphabet_size {
            return Err(Error::InvalidArgument(format!(
                "symbol {b} outside alphabet of size {}",
                self.alphabet_size
            )));
        }
        Ok(())
    }

    /// One 0-1 matrix per symbol.
    pub fn transition_matrices(&self, field: FieldSpec) -> Vec<SquareMatrix> {
        (0..self.alphabet_size)
            .map(|b| {
                let targets: Vec<usize> = (0..self.num_states).map(|q| self.step(q, b)).collect();
                SquareMatrix::functional(field, &targets).expect("targets are states")
            })
            .collect()
    }

    /// Ordered product `M_{w_1} ... M_{w_k}`; identity for the empty word.
    pub fn word_matrix(&self, word: &[usize], field: FieldSpec) -> Result<SquareMatrix> {
        let letters = self.transition_matrices(field);
        let mut m = SquareMatrix::identity(field, self.num_states);
        for &b in word {
            self.check_symbol(b)?;
            m = m.mul(&letters[b])?;
        }
        Ok(m)
    }
}

/// Binary code of a monomial: `x_i` becomes `0 1^i 0`, concatenated left to
/// right.
pub fn encode_monomial(word: &Word) -> String {
    let mut s = String::with_capacity(word.letters().iter().map(|i| i + 2).sum());
    for &i in word.letters() {
        s.push('0');
        s.extend(std::iter::repeat_n('1', i));
        s.push('0');
    }
    s
}

/// Symbol sequence of a binary string.
pub fn bits(s: &str) -> Vec<usize> {
    s.bytes().map(|b| (b == b'1') as usize).collect()
}

/// String matcher for the code of `m`: states `0..=L` track the matched
/// prefix, `L` is the unique accepting state and `L + 1` is dead.
pub fn monomial_dfa(m: &Word, n: usize) -> Result<Dfa> {
    m.check_vars(n)?;
    let code = bits(&encode_monomial(m));
    let len = code.len();
    let dead = len + 1;
    let mut delta = Vec::with_capacity(2 * (len + 2));
    for q in 0..len + 2 {
        for b in 0..2 {
            delta.push(if q < len && code[q] == b { q + 1 } else { dead });
        }
    }
    Dfa::new(len + 2, 2, delta, 0, vec![len])
}

/// The output matrix of `c` on a binary automaton: every `x_i` is replaced by
/// the word matrix of its code.
pub fn run_circuit_on_automaton(c: &ArithCircuit, a: &Dfa) -> Result<SquareMatrix> {
    if a.alphabet_size() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a binary automaton, alphabet size is {}",
            a.alphabet_size()
        )));
    }
    let field = c.field();
    let letters = a.transition_matrices(field);
    let assignment = (1..=c.num_vars())
        .map(|i| {
            let code = bits(&encode_monomial(&Word::new(vec![i])));
            code.iter()
                .try_fold(SquareMatrix::identity(field, a.num_states()), |m, &b| {
                    m.mul(&letters[b])
                })
        })
        .collect::<Result<Vec<_>>>()?;
    c.eval_on_matrices(&assignment)
}

/// A state of the layered automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerState {
    Start,
    /// `(position, accumulated weight)` with `position` in `[1, d]`.
    Layer {
        position: usize,
        weight: u64,
    },
    Sink,
}

/// Automaton over `{x_1, ..., x_n}` whose state after reading `u` (with
/// `|u| = t <= d`) is `(t, sum_j w(j, u_j))`.
///
/// States are `(0,0)`, `[d] x [2nd^2]` and an explicit sink, `2nd^3 + 2` in
/// all. Reading past position `d` falls into the sink, as does any transition
/// whose target weight would leave `[1, 2nd^2]`; the latter only occurs from
/// states the start cannot reach.
#[derive(Debug, Clone)]
pub struct LayeredWeightAutomaton {
    n: usize,
    d: usize,
    max_weight: u64,
    weights: WeightAssignment,
    dfa: Dfa,
}

impl LayeredWeightAutomaton {
    pub fn build(n: usize, d: usize, weights: &WeightAssignment) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one variable".into()));
        }
        if weights.universe() != (Universe::Grid { d, n }) {
            return Err(Error::InvalidArgument(format!(
                "weights are over {:?}, expected a {d} x {n} grid",
                weights.universe()
            )));
        }
        let range = (2 * d * n) as u64;
        if let Some(k) = weights.values().iter().position(|&v| v == 0 || v > range) {
            return Err(Error::WeightOutOfRange {
                position: format!("({}, {})", k / n + 1, k % n + 1),
                value: weights.values()[k],
                max: range,
            });
        }
        let max_weight = (2 * n * d * d) as u64;
        let num_states = Self::state_count(n, d);
        let sink = num_states - 1;

        let mut automaton = LayeredWeightAutomaton {
            n,
            d,
            max_weight,
            weights: weights.clone(),
            dfa: Dfa::new(1, 1, vec![0], 0, vec![])?,
        };
        let mut delta = Vec::with_capacity(num_states * n);
        for q in 0..num_states {
            for j in 1..=n {
                let target = match automaton.state_label(q) {
                    LayerState::Start if d >= 1 => automaton.index_of(LayerState::Layer {
                        position: 1,
                        weight: weights.get_cell(1, j),
                    }),
                    LayerState::Layer { position, weight } if position < d => {
                        let next = weight + weights.get_cell(position + 1, j);
                        if next <= max_weight {
                            automaton.index_of(LayerState::Layer {
                                position: position + 1,
                                weight: next,
                            })
                        } else {
                            sink
                        }
                    }
                    _ => sink,
                };
                delta.push(target);
            }
        }
        let finals = (1..sink).collect();
        automaton.dfa = Dfa::new(num_states, n, delta, 0, finals)?;
        Ok(automaton)
    }

    /// `2nd^3 + 2`.
    pub fn state_count(n: usize, d: usize) -> usize {
        2 * n * d * d * d + 2
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `2nd^2`, the largest weight a layer state can carry.
    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    pub fn weights(&self) -> &WeightAssignment {
        &self.weights
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        Self::state_count(self.n, self.d) - 1
    }

    pub fn index_of(&self, s: LayerState) -> usize {
        match s {
            LayerState::Start => 0,
            LayerState::Layer { position, weight } => {
                assert!(
                    (1..=self.d).contains(&position) && (1..=self.max_weight).contains(&weight)
                );
                1 + (position - 1) * self.max_weight as usize + (weight as usize - 1)
            }
            LayerState::Sink => self.sink(),
        }
    }

    pub fn state_label(&self, q: usize) -> LayerState {
        if q == 0 {
            LayerState::Start
        } else if q == self.sink() {
            LayerState::Sink
        } else {
            let k = q - 1;
            let per = self.max_weight as usize;
            LayerState::Layer {
                position: k / per + 1,
                weight: (k % per + 1) as u64,
            }
        }
    }

    /// State reached from the start on a word over 1-based variable indices.
    pub fn reached(&self, word: &Word) -> Result<LayerState> {
        word.check_vars(self.n)?;
        let symbols: Vec<usize> = word.letters().iter().map(|i| i - 1).collect();
        Ok(self.state_label(self.dfa.run_from(0, &symbols)?))
    }

    /// `M_{x_1}, ..., M_{x_n}`.
    pub fn transition_matrices(&self, field: FieldSpec) -> Vec<SquareMatrix> {
        self.dfa.transition_matrices(field)
    }
}
