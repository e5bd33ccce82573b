//! Arithmetic circuits over noncommuting variables, boolean circuits, their
//! text format, and evaluation.

mod boolean;
mod random;
mod text;

pub use boolean::{BoolCircuit, BoolGate};
pub use random::{random_bool_circuit, random_circuit};
pub use text::{parse_arith, parse_bool, parse_circuit, ParsedCircuit};

use crate::algebra::{FieldElement, FieldSpec, SquareMatrix};
use crate::error::{Error, Result};
use crate::ncpoly::NcPoly;

pub const DEFAULT_DEGREE_LIMIT: u64 = 1_000_000;

/// Gate ids are indices into the gate list; operands always point at
/// earlier gates. Variable indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Var(usize),
    Const(FieldElement),
    Add(usize, usize),
    /// Ordered product: left operand times right operand.
    Mul(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithCircuit {
    field: FieldSpec,
    num_vars: usize,
    gates: Vec<Gate>,
    output: usize,
}

/// A ring the circuit can be evaluated in.
pub trait GateAlgebra {
    type Value;

    fn var(&self, index: usize) -> Result<Self::Value>;
    fn constant(&self, c: &FieldElement) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
}

impl ArithCircuit {
    pub fn new(field: FieldSpec, num_vars: usize, gates: Vec<Gate>, output: usize) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::validation(0, "circuit needs at least one variable"));
        }
        for (k, g) in gates.iter().enumerate() {
            match g {
                Gate::Var(i) if *i == 0 || *i > num_vars => {
                    return Err(Error::validation(
                        0,
                        format!("gate {k}: variable index {i} outside [1, {num_vars}]"),
                    ))
                }
                Gate::Const(c) if c.spec() != field => {
                    return Err(Error::validation(
                        0,
                        format!("gate {k}: constant outside field {field}"),
                    ))
                }
                Gate::Add(a, b) | Gate::Mul(a, b) if *a >= k || *b >= k => {
                    return Err(Error::validation(0, format!("gate {k}: forward reference")))
                }
                _ => {}
            }
        }
        if output >= gates.len() {
            return Err(Error::validation(
                0,
                format!("output gate {output} does not exist"),
            ));
        }
        Ok(ArithCircuit {
            field,
            num_vars,
            gates,
            output,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Syntactic degree bound: `Var -> 1`, `Const -> 0`, `Add -> max`,
    /// `Mul -> sum`, with the default limit.
    pub fn formal_degree(&self) -> Result<u64> {
        self.formal_degree_with_limit(DEFAULT_DEGREE_LIMIT)
    }

    pub fn formal_degree_with_limit(&self, limit: u64) -> Result<u64> {
        let degrees = self.gate_degrees();
        let d = degrees[self.output];
        if d > limit {
            return Err(Error::DegreeOverflow { degree: d, limit });
        }
        Ok(d)
    }

    /// Formal degree of every gate (saturating).
    pub fn gate_degrees(&self) -> Vec<u64> {
        let mut deg: Vec<u64> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let d = match g {
                Gate::Var(_) => 1,
                Gate::Const(_) => 0,
                Gate::Add(a, b) => deg[*a].max(deg[*b]),
                Gate::Mul(a, b) => deg[*a].saturating_add(deg[*b]),
            };
            deg.push(d);
        }
        deg
    }

    /// Evaluates the gates the output depends on, dropping each value after
    /// its last use.
    pub fn evaluate<A: GateAlgebra>(&self, algebra: &A) -> Result<A::Value> {
        let n = self.gates.len();
        let mut live = vec![false; n];
        live[self.output] = true;
        let mut last_use = vec![0usize; n];
        for k in (0..n).rev() {
            if !live[k] {
                continue;
            }
            if let Gate::Add(a, b) | Gate::Mul(a, b) = self.gates[k] {
                for operand in [a, b] {
                    live[operand] = true;
                    last_use[operand] = last_use[operand].max(k);
                }
            }
        }

        let mut values: Vec<Option<A::Value>> = (0..n).map(|_| None).collect();
        for k in 0..=self.output {
            if !live[k] {
                continue;
            }
            let v = match &self.gates[k] {
                Gate::Var(i) => algebra.var(*i)?,
                Gate::Const(c) => algebra.constant(c)?,
                Gate::Add(a, b) | Gate::Mul(a, b) => {
                    let (x, y) = (operand(&values, *a), operand(&values, *b));
                    let v = if matches!(self.gates[k], Gate::Add(..)) {
                        algebra.add(x, y)?
                    } else {
                        algebra.mul(x, y)?
                    };
                    for o in [*a, *b] {
                        if last_use[o] == k && o != self.output {
                            values[o] = None;
                        }
                    }
                    v
                }
            };
            values[k] = Some(v);
        }
        Ok(values[self.output].take().expect("output evaluated"))
    }

    /// Substitutes one matrix per variable; constants become `c * I`.
    pub fn eval_on_matrices(&self, assignment: &[SquareMatrix]) -> Result<SquareMatrix> {
        if assignment.len() != self.num_vars {
            return Err(Error::ArityMismatch {
                expected: self.num_vars,
                got: assignment.len(),
            });
        }
        let dim = assignment[0].dim();
        for m in assignment {
            if m.field() != self.field {
                return Err(Error::FieldMismatch {
                    left: self.field.to_string(),
                    right: m.field().to_string(),
                });
            }
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: m.dim(),
                });
            }
        }
        self.evaluate(&MatrixAlgebra {
            field: self.field,
            dim,
            assignment,
        })
    }

    /// Full noncommutative expansion; fails once any intermediate polynomial
    /// holds more than `max_terms` terms.
    pub fn expand_bruteforce(&self, max_terms: usize) -> Result<NcPoly> {
        self.evaluate(&ExpansionAlgebra {
            n: self.num_vars,
            field: self.field,
            max_terms,
        })
    }

    /// Circuit for `self - other`.
    pub fn sub(&self, other: &ArithCircuit) -> Result<ArithCircuit> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        let n = self.num_vars.max(other.num_vars);
        let mut gates = self.gates.clone();
        let offset = gates.len();
        gates.extend(other.gates.iter().map(|g| match g {
            Gate::Add(a, b) => Gate::Add(a + offset, b + offset),
            Gate::Mul(a, b) => Gate::Mul(a + offset, b + offset),
            other => other.clone(),
        }));
        let minus_one = gates.len();
        gates.push(Gate::Const(self.field.from_i64(-1)));
        gates.push(Gate::Mul(minus_one, other.output + offset));
        gates.push(Gate::Add(self.output, minus_one + 1));
        let out = gates.len() - 1;
        ArithCircuit::new(self.field, n, gates, out)
    }

    /// Sum-of-monomials circuit computing `p`.
    pub fn from_poly(p: &NcPoly) -> Result<ArithCircuit> {
        let mut gates = Vec::new();
        let mut sum: Option<usize> = None;
        for (w, c) in p.terms() {
            gates.push(Gate::Const(c.clone()));
            let mut acc = gates.len() - 1;
            for &i in w.letters() {
                gates.push(Gate::Var(i));
                gates.push(Gate::Mul(acc, gates.len() - 1));
                acc = gates.len() - 1;
            }
            sum = Some(match sum {
                None => acc,
                Some(s) => {
                    gates.push(Gate::Add(s, acc));
                    gates.len() - 1
                }
            });
        }
        let out = match sum {
            Some(s) => s,
            None => {
                gates.push(Gate::Const(p.field().zero()));
                0
            }
        };
        ArithCircuit::new(p.field(), p.num_vars(), gates, out)
    }

    /// Same polynomial, different structure: every addition has its operands
    /// exchanged.
    pub fn with_swapped_additions(&self) -> ArithCircuit {
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Add(a, b) => Gate::Add(*b, *a),
                other => other.clone(),
            })
            .collect();
        ArithCircuit {
            gates,
            ..self.clone()
        }
    }
}

fn operand<V>(values: &[Option<V>], k: usize) -> &V {
    values[k].as_ref().expect("operand evaluated before use")
}

struct MatrixAlgebra<'a> {
    field: FieldSpec,
    dim: usize,
    assignment: &'a [SquareMatrix],
}

impl GateAlgebra for MatrixAlgebra<'_> {
    type Value = SquareMatrix;

    fn var(&self, index: usize) -> Result<SquareMatrix> {
        Ok(self.assignment[index - 1].clone())
    }

    fn constant(&self, c: &FieldElement) -> Result<SquareMatrix> {
        Ok(SquareMatrix::scalar(c.clone(), self.field, self.dim))
    }

    fn add(&self, a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
        a.add(b)
    }

    fn mul(&self, a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
        a.mul(b)
    }
}

struct ExpansionAlgebra {
    n: usize,
    field: FieldSpec,
    max_terms: usize,
}

impl GateAlgebra for ExpansionAlgebra {
    type Value = NcPoly;

    fn var(&self, index: usize) -> Result<NcPoly> {
        Ok(NcPoly::var(self.n, self.field, index)?.with_term_limit(self.max_terms))
    }

    fn constant(&self, c: &FieldElement) -> Result<NcPoly> {
        Ok(NcPoly::constant(self.n, c.clone())?.with_term_limit(self.max_terms))
    }

    fn add(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        a.add(b)
    }

    fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        a.mul(b)
    }
}

/// Incremental construction with gate ids handed back to the caller.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    field: FieldSpec,
    num_vars: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(field: FieldSpec, num_vars: usize) -> Self {
        CircuitBuilder {
            field,
            num_vars,
            gates: Vec::new(),
        }
    }

    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn var(&mut self, i: usize) -> usize {
        self.push(Gate::Var(i))
    }

    pub fn constant(&mut self, c: FieldElement) -> usize {
        self.push(Gate::Const(c))
    }

    pub fn int(&mut self, v: i64) -> usize {
        let c = self.field.from_i64(v);
        self.constant(c)
    }

    pub fn add(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Add(a, b))
    }

    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Mul(a, b))
    }

    /// `a - b` as `a + (-1) * b`.
    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        let m = self.int(-1);
        let nb = self.mul(m, b);
        self.add(a, nb)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn finish(self, output: usize) -> Result<ArithCircuit> {
        ArithCircuit::new(self.field, self.num_vars, self.gates, output)
    }
}
