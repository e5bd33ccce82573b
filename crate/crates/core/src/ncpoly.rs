//! Sparse noncommutative polynomials, the ground-truth representation used by
//! the brute-force oracles.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{FieldElement, FieldSpec, SquareMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_TERM_LIMIT: usize = 1_000_000;

/// A monomial in noncommuting variables: a word over 1-based variable
/// indices. The empty word is the constant monomial.
///
/// Words order by length first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn check_vars(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > n) {
            Some(bad) => Err(Error::InvalidArgument(format!(
                "variable index {bad} outside [1, {n}]"
            ))),
            None => Ok(()),
        }
    }

    /// Exponent vector of the commutative image.
    pub fn exponents(&self, n: usize) -> Vec<u32> {
        let mut e = vec![0u32; n];
        for &i in &self.0 {
            e[i - 1] += 1;
        }
        e
    }

    /// All `n^len` words of the given length, in canonical order.
    pub fn all_of_length(n: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (1..=n).map(move |i| w.concat(&Word(vec![i]))))
                .collect();
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A polynomial in `F{x_1, ..., x_n}`: a finite map from words to nonzero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    n: usize,
    field: FieldSpec,
    terms: BTreeMap<Word, FieldElement>,
    term_limit: usize,
}

impl NcPoly {
    pub fn zero(n: usize, field: FieldSpec) -> Self {
        NcPoly {
            n,
            field,
            terms: BTreeMap::new(),
            term_limit: DEFAULT_TERM_LIMIT,
        }
    }

    pub fn with_term_limit(mut self, limit: usize) -> Self {
        self.term_limit = limit;
        self
    }

    pub fn constant(n: usize, c: FieldElement) -> Result<Self> {
        Self::monomial(n, Word::empty(), c)
    }

    pub fn var(n: usize, field: FieldSpec, i: usize) -> Result<Self> {
        Self::monomial(n, Word(vec![i]), field.one())
    }

    pub fn monomial(n: usize, word: Word, c: FieldElement) -> Result<Self> {
        Self::from_terms(n, c.spec(), [(word, c)])
    }

    /// Sums the given terms; repeated words accumulate.
    pub fn from_terms(
        n: usize,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Word, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n, field);
        for (w, c) in terms {
            w.check_vars(n)?;
            field.check(&c)?;
            p.accumulate(w, &c)?;
        }
        Ok(p)
    }

    fn accumulate(&mut self, w: Word, c: &FieldElement) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                existing.add_assign_unchecked(c);
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                if self.terms.len() >= self.term_limit {
                    return Err(Error::TermLimitExceeded {
                        limit: self.term_limit,
                    });
                }
                self.terms.insert(w, c.clone());
            }
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest word; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn coeff_of(&self, w: &Word) -> FieldElement {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn conform(&self, other: &NcPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly> {
        self.conform(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly> {
        self.add(&other.scale(&self.field.from_i64(-1))?)
    }

    /// Product with word concatenation; `self` supplies the left factor.
    pub fn mul(&self, other: &NcPoly) -> Result<NcPoly> {
        self.conform(other)?;
        let mut out = NcPoly::zero(self.n, self.field).with_term_limit(self.term_limit);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.accumulate(u.concat(v), &a.mul_unchecked(b))?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<NcPoly> {
        self.field.check(c)?;
        let mut out = NcPoly::zero(self.n, self.field).with_term_limit(self.term_limit);
        if c.is_zero() {
            return Ok(out);
        }
        out.terms = self
            .terms
            .iter()
            .map(|(w, a)| (w.clone(), a.mul_unchecked(c)))
            .collect();
        Ok(out)
    }

    /// Sum of `c_w * M_w` where `M_w` is the ordered product of the assigned
    /// matrices along `w` (identity for the empty word).
    pub fn eval_on_matrices(&self, assignment: &[SquareMatrix]) -> Result<SquareMatrix> {
        if assignment.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: assignment.len(),
            });
        }
        let dim = assignment.first().map_or(1, SquareMatrix::dim);
        let mut acc = SquareMatrix::zeros(self.field, dim);
        for (w, c) in &self.terms {
            let mut m = SquareMatrix::identity(self.field, dim);
            for &i in w.letters() {
                m = m.mul(&assignment[i - 1])?;
            }
            acc = acc.add(&m.scalar_mul(c)?)?;
        }
        Ok(acc)
    }

    /// Merges words with the same multiset of letters.
    pub fn commutative_project(&self) -> CommPoly {
        let mut out = CommPoly::zero(self.n, self.field);
        for (w, c) in &self.terms {
            out.accumulate(w.exponents(self.n), c);
        }
        out
    }

    /// One term per line: `<coeff> <i_1> ... <i_k>`, `<coeff> -` for the
    /// empty word, in canonical word order.
    pub fn to_listing(&self) -> String {
        self.listing_lines().into_iter().map(|l| l + "\n").collect()
    }

    pub fn listing_lines(&self) -> Vec<String> {
        self.terms.iter().map(|(w, c)| format!("{c} {w}")).collect()
    }
}

/// A commutative polynomial keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommPoly {
    n: usize,
    field: FieldSpec,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl CommPoly {
    pub fn zero(n: usize, field: FieldSpec) -> Self {
        CommPoly {
            n,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n: usize,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n, field);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            field.check(&c)?;
            p.accumulate(e, &c);
        }
        Ok(p)
    }

    fn accumulate(&mut self, e: Vec<u32>, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                existing.add_assign_unchecked(c);
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, exponents: &[u32]) -> FieldElement {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn mul(&self, other: &CommPoly) -> Result<CommPoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = CommPoly::zero(self.n, self.field);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.accumulate(e, &x.mul_unchecked(y));
            }
        }
        Ok(out)
    }
}

impl serde::Serialize for NcPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(serde::Serialize)]
        struct Term<'a> {
            coeff: &'a FieldElement,
            word: &'a [usize],
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(w, c)| Term {
                coeff: c,
                word: w.letters(),
            })
            .collect();
        let mut st = s.serialize_struct("NcPoly", 3)?;
        st.serialize_field("num_vars", &self.n)?;
        st.serialize_field("field", &self.field.to_string())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
