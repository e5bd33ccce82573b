use crate::error::{Error, Result};

/// Input indices are 1-based; operands point at earlier gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolGate {
    Input(usize),
    ConstBit(bool),
    And(usize, usize),
    Or(usize, usize),
    Not(usize),
}

/// A boolean circuit; `F_C` is the family of sets whose characteristic
/// vectors it accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolCircuit {
    num_inputs: usize,
    gates: Vec<BoolGate>,
    output: usize,
}

impl BoolCircuit {
    pub fn new(num_inputs: usize, gates: Vec<BoolGate>, output: usize) -> Result<Self> {
        for (k, g) in gates.iter().enumerate() {
            let bad = match *g {
                BoolGate::Input(i) => i == 0 || i > num_inputs,
                BoolGate::ConstBit(_) => false,
                BoolGate::And(a, b) | BoolGate::Or(a, b) => a >= k || b >= k,
                BoolGate::Not(a) => a >= k,
            };
            if bad {
                return Err(Error::validation(0, format!("bool gate {k} is malformed")));
            }
        }
        if output >= gates.len() {
            return Err(Error::validation(
                0,
                format!("output gate {output} does not exist"),
            ));
        }
        Ok(BoolCircuit {
            num_inputs,
            gates,
            output,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn gates(&self) -> &[BoolGate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn eval(&self, bits: &[bool]) -> Result<bool> {
        if bits.len() != self.num_inputs {
            return Err(Error::ArityMismatch {
                expected: self.num_inputs,
                got: bits.len(),
            });
        }
        Ok(self.eval_with(|i| bits[i - 1]))
    }

    /// Evaluates on the characteristic vector of a bitmask (bit `i - 1` is
    /// input `i`).
    pub fn eval_mask(&self, mask: u64) -> bool {
        self.eval_with(|i| (mask >> (i - 1)) & 1 == 1)
    }

    fn eval_with(&self, input: impl Fn(usize) -> bool) -> bool {
        let mut vals = Vec::with_capacity(self.gates.len());
        for g in &self.gates[..=self.output] {
            let v = match *g {
                BoolGate::Input(i) => input(i),
                BoolGate::ConstBit(b) => b,
                BoolGate::And(a, b) => vals[a] && vals[b],
                BoolGate::Or(a, b) => vals[a] || vals[b],
                BoolGate::Not(a) => !vals[a],
            };
            vals.push(v);
        }
        vals[self.output]
    }
}
