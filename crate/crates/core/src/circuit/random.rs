use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{FieldElement, FieldSpec};

use super::{ArithCircuit, BoolCircuit, BoolGate, Gate};

fn random_constant(field: FieldSpec, rng: &mut impl Rng) -> FieldElement {
    match field {
        FieldSpec::Rational => {
            let num = rng.gen_range(-3i64..=3);
            let den = if rng.gen_bool(0.2) { 2 } else { 1 };
            field.from_ratio(num, den).expect("nonzero denominator")
        }
        FieldSpec::Prime(p) => {
            // Small magnitudes on either side of zero make cancellation likely.
            let v = rng.gen_range(-3i64..=3);
            if p > 7 {
                field.from_i64(v)
            } else {
                field.from_i64(rng.gen_range(0..p as i64))
            }
        }
    }
}

/// A random circuit with exactly `max_gates` gates over `n` variables whose
/// every gate has formal degree at most `degree_bound`. The output is the last
/// gate. Deterministic for a given rng state.
pub fn random_circuit(
    n: usize,
    max_gates: usize,
    degree_bound: u64,
    field: FieldSpec,
    rng: &mut impl Rng,
) -> ArithCircuit {
    assert!(n >= 1 && max_gates >= 1, "parameters must be positive");
    let mut gates: Vec<Gate> = Vec::with_capacity(max_gates);
    let mut degrees: Vec<u64> = Vec::with_capacity(max_gates);

    while gates.len() < max_gates {
        let k = gates.len();
        let leaf = k < 2 || rng.gen_bool(0.25);
        let (gate, degree) = if leaf {
            if degree_bound >= 1 && rng.gen_bool(0.75) {
                (Gate::Var(rng.gen_range(1..=n)), 1)
            } else {
                (Gate::Const(random_constant(field, rng)), 0)
            }
        } else {
            // Prefer recent gates so the output depends on most of the circuit.
            let pick = |rng: &mut dyn rand::RngCore| {
                let lo = k.saturating_sub(6);
                if rng.gen_bool(0.7) {
                    rng.gen_range(lo..k)
                } else {
                    rng.gen_range(0..k)
                }
            };
            let a = pick(rng);
            let b = pick(rng);
            if rng.gen_bool(0.5) && degrees[a] + degrees[b] <= degree_bound {
                (Gate::Mul(a, b), degrees[a] + degrees[b])
            } else if rng.gen_bool(0.3) && k + 3 <= max_gates {
                // a - b, spelled with a -1 constant.
                gates.push(Gate::Const(field.from_i64(-1)));
                degrees.push(0);
                gates.push(Gate::Mul(k, b));
                degrees.push(degrees[b]);
                (Gate::Add(a, k + 1), degrees[a].max(degrees[b]))
            } else {
                (Gate::Add(a, b), degrees[a].max(degrees[b]))
            }
        };
        gates.push(gate);
        degrees.push(degree);
    }
    let output = gates.len() - 1;
    ArithCircuit::new(field, n, gates, output).expect("generator emits valid circuits")
}

/// A random boolean circuit with `num_gates` gates over `n` inputs.
pub fn random_bool_circuit(n: usize, num_gates: usize, rng: &mut impl Rng) -> BoolCircuit {
    assert!(n >= 1 && num_gates >= 1);
    let mut gates = Vec::with_capacity(num_gates);
    // Start with every input so the family depends on all coordinates.
    let mut inputs: Vec<usize> = (1..=n).collect();
    inputs.shuffle(rng);
    for i in inputs.into_iter().take(num_gates) {
        gates.push(BoolGate::Input(i));
    }
    while gates.len() < num_gates {
        let k = gates.len();
        let a = rng.gen_range(0..k);
        let b = rng.gen_range(0..k);
        gates.push(match rng.gen_range(0..7) {
            0..=2 => BoolGate::And(a, b),
            3..=5 => BoolGate::Or(a, b),
            _ => BoolGate::Not(a),
        });
    }
    BoolCircuit::new(n, gates, num_gates - 1).expect("generator emits valid circuits")
}
