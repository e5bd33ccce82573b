//! Line-oriented circuit files.
//!
//! ```text
//! ncircuit q 2          # or: ncircuit p:101 2
//! g1 = var 1
//! g2 = var 2
//! g3 = add g1 g2
//! g4 = mul g3 g3
//! output g4
//! ```
//!
//! Boolean circuits use the header `bcircuit <num_inputs>` and the gate kinds
//! `input <i>`, `const 0|1`, `and`, `or`, `not`. Gate ids must increase;
//! `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::FieldSpec;
use crate::error::{Error, Result};

use super::{ArithCircuit, BoolCircuit, BoolGate, Gate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedCircuit {
    Arith(ArithCircuit),
    Bool(BoolCircuit),
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    /// Column just past the last token, for "missing token" errors.
    end: usize,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in content.char_indices().chain([(content.len(), ' ')]) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &content[s..i],
                        column: content[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: idx + 1,
                end: content.trim_end().chars().count() + 1,
                tokens,
            });
        }
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl<'a> Line<'a> {
    fn token(&self, i: usize, what: &str) -> Result<Token<'a>> {
        self.tokens
            .get(i)
            .copied()
            .ok_or_else(|| parse_err(self.number, self.end, format!("expected {what}")))
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        match self.tokens.get(n) {
            Some(t) => Err(parse_err(
                self.number,
                t.column,
                format!("unexpected token '{}'", t.text),
            )),
            None => Ok(()),
        }
    }

    fn number_at(&self, i: usize, what: &str) -> Result<usize> {
        let t = self.token(i, what)?;
        t.text.parse().map_err(|_| {
            parse_err(
                self.number,
                t.column,
                format!("expected {what}, found '{}'", t.text),
            )
        })
    }
}

/// Maps file gate ids (`g<k>`) to positions and enforces increasing order.
struct GateIds {
    positions: HashMap<u64, usize>,
    last: Option<u64>,
}

impl GateIds {
    fn new() -> Self {
        GateIds {
            positions: HashMap::new(),
            last: None,
        }
    }

    fn parse_id(line: &Line<'_>, tok: Token<'_>) -> Result<u64> {
        tok.text
            .strip_prefix('g')
            .and_then(|d| d.parse::<u64>().ok())
            .ok_or_else(|| {
                parse_err(
                    line.number,
                    tok.column,
                    format!("expected gate id g<k>, found '{}'", tok.text),
                )
            })
    }

    fn declare(&mut self, line: &Line<'_>, tok: Token<'_>) -> Result<()> {
        let id = Self::parse_id(line, tok)?;
        if let Some(last) = self.last {
            if id <= last {
                return Err(Error::validation(
                    line.number,
                    format!("gate id g{id} is not greater than previous id g{last}"),
                ));
            }
        }
        self.last = Some(id);
        let pos = self.positions.len();
        self.positions.insert(id, pos);
        Ok(())
    }

    fn resolve(&self, line: &Line<'_>, tok: Token<'_>) -> Result<usize> {
        let id = Self::parse_id(line, tok)?;
        self.positions.get(&id).copied().ok_or_else(|| {
            Error::validation(
                line.number,
                format!("reference to undeclared or later gate g{id}"),
            )
        })
    }
}

/// Shared skeleton: header, gate lines, and a final `output` line.
fn parse_body<'a, G>(
    body: &[Line<'a>],
    eof_line: usize,
    mut gate: impl FnMut(&Line<'a>, &GateIds) -> Result<G>,
) -> Result<(Vec<G>, usize, usize)> {
    let mut ids = GateIds::new();
    let mut gates = Vec::new();
    for (k, line) in body.iter().enumerate() {
        let first = line.tokens[0];
        if first.text == "output" {
            let target = line.token(1, "gate id")?;
            line.expect_len(2)?;
            let out = ids.resolve(line, target)?;
            if let Some(extra) = body.get(k + 1) {
                return Err(parse_err(
                    extra.number,
                    extra.tokens[0].column,
                    "content after output line",
                ));
            }
            return Ok((gates, out, line.number));
        }
        let eq = line.token(1, "'='")?;
        if eq.text != "=" {
            return Err(parse_err(
                line.number,
                eq.column,
                format!("expected '=', found '{}'", eq.text),
            ));
        }
        // Ids are checked before the gate so self-references read as undeclared.
        let g = gate(line, &ids)?;
        ids.declare(line, first)?;
        gates.push(g);
    }
    Err(parse_err(eof_line, 1, "missing 'output g<k>' line"))
}

pub fn parse_arith(text: &str) -> Result<ArithCircuit> {
    match parse_circuit(text)? {
        ParsedCircuit::Arith(c) => Ok(c),
        ParsedCircuit::Bool(_) => Err(parse_err(1, 1, "expected an 'ncircuit' header")),
    }
}

pub fn parse_bool(text: &str) -> Result<BoolCircuit> {
    match parse_circuit(text)? {
        ParsedCircuit::Bool(c) => Ok(c),
        ParsedCircuit::Arith(_) => Err(parse_err(1, 1, "expected a 'bcircuit' header")),
    }
}

pub fn parse_circuit(text: &str) -> Result<ParsedCircuit> {
    let all = lines(text);
    let eof_line = text.lines().count() + 1;
    let Some(header) = all.first() else {
        return Err(parse_err(1, 1, "empty circuit file"));
    };
    let kind = header.tokens[0];
    match kind.text {
        "ncircuit" => parse_arith_lines(header, &all[1..], eof_line).map(ParsedCircuit::Arith),
        "bcircuit" => parse_bool_lines(header, &all[1..], eof_line).map(ParsedCircuit::Bool),
        other => Err(parse_err(
            header.number,
            kind.column,
            format!("expected 'ncircuit' or 'bcircuit', found '{other}'"),
        )),
    }
}

fn parse_arith_lines(
    header: &Line<'_>,
    body: &[Line<'_>],
    eof_line: usize,
) -> Result<ArithCircuit> {
    let field_tok = header.token(1, "field")?;
    if !(field_tok.text == "q" || field_tok.text.starts_with("p:")) {
        return Err(parse_err(
            header.number,
            field_tok.column,
            "field must be 'q' or 'p:<prime>'",
        ));
    }
    let field: FieldSpec = field_tok.text.parse().map_err(|e: Error| match e {
        Error::InvalidField(msg) => Error::validation(header.number, msg),
        other => other,
    })?;
    let n = header.number_at(2, "variable count")?;
    header.expect_len(3)?;
    if n == 0 {
        return Err(Error::validation(
            header.number,
            "variable count must be at least 1",
        ));
    }

    let (gates, output, _) = parse_body(body, eof_line, |line, ids| {
        let op = line.token(2, "gate kind")?;
        let g = match op.text {
            "var" => {
                let i = line.number_at(3, "variable index")?;
                if i == 0 || i > n {
                    return Err(Error::validation(
                        line.number,
                        format!("variable index {i} outside [1, {n}]"),
                    ));
                }
                Gate::Var(i)
            }
            "const" => {
                let lit = line.token(3, "constant")?;
                let c = field.parse_element(lit.text).map_err(|e| {
                    Error::validation(line.number, format!("constant outside field {field}: {e}"))
                })?;
                Gate::Const(c)
            }
            "add" | "mul" => {
                let a = ids.resolve(line, line.token(3, "left operand")?)?;
                let b = ids.resolve(line, line.token(4, "right operand")?)?;
                line.expect_len(5)?;
                return Ok(if op.text == "add" {
                    Gate::Add(a, b)
                } else {
                    Gate::Mul(a, b)
                });
            }
            other => {
                return Err(parse_err(
                    line.number,
                    op.column,
                    format!("unknown gate kind '{other}'"),
                ))
            }
        };
        line.expect_len(4)?;
        Ok(g)
    })?;
    ArithCircuit::new(field, n, gates, output)
}

fn parse_bool_lines(header: &Line<'_>, body: &[Line<'_>], eof_line: usize) -> Result<BoolCircuit> {
    let n = header.number_at(1, "input count")?;
    header.expect_len(2)?;
    let (gates, output, _) = parse_body(body, eof_line, |line, ids| {
        let op = line.token(2, "gate kind")?;
        let g = match op.text {
            "input" => {
                let i = line.number_at(3, "input index")?;
                if i == 0 || i > n {
                    return Err(Error::validation(
                        line.number,
                        format!("input index {i} outside [1, {n}]"),
                    ));
                }
                line.expect_len(4)?;
                BoolGate::Input(i)
            }
            "const" => {
                let t = line.token(3, "0 or 1")?;
                let b = match t.text {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(Error::validation(
                            line.number,
                            format!("boolean constant must be 0 or 1, found '{other}'"),
                        ))
                    }
                };
                line.expect_len(4)?;
                BoolGate::ConstBit(b)
            }
            "not" => {
                let a = ids.resolve(line, line.token(3, "operand")?)?;
                line.expect_len(4)?;
                BoolGate::Not(a)
            }
            "and" | "or" => {
                let a = ids.resolve(line, line.token(3, "left operand")?)?;
                let b = ids.resolve(line, line.token(4, "right operand")?)?;
                line.expect_len(5)?;
                if op.text == "and" {
                    BoolGate::And(a, b)
                } else {
                    BoolGate::Or(a, b)
                }
            }
            other => {
                return Err(parse_err(
                    line.number,
                    op.column,
                    format!("unknown gate kind '{other}'"),
                ))
            }
        };
        Ok(g)
    })?;
    BoolCircuit::new(n, gates, output)
}

impl ArithCircuit {
    /// Canonical text: gates numbered `g1..gm` in order.
    pub fn to_text(&self) -> String {
        let mut s = format!("ncircuit {} {}\n", self.field, self.num_vars);
        for (k, g) in self.gates.iter().enumerate() {
            let _ = match g {
                Gate::Var(i) => writeln!(s, "g{} = var {i}", k + 1),
                Gate::Const(c) => writeln!(s, "g{} = const {c}", k + 1),
                Gate::Add(a, b) => writeln!(s, "g{} = add g{} g{}", k + 1, a + 1, b + 1),
                Gate::Mul(a, b) => writeln!(s, "g{} = mul g{} g{}", k + 1, a + 1, b + 1),
            };
        }
        let _ = writeln!(s, "output g{}", self.output + 1);
        s
    }
}

impl BoolCircuit {
    pub fn to_text(&self) -> String {
        let mut s = format!("bcircuit {}\n", self.num_inputs());
        for (k, g) in self.gates().iter().enumerate() {
            let _ = match *g {
                BoolGate::Input(i) => writeln!(s, "g{} = input {i}", k + 1),
                BoolGate::ConstBit(b) => writeln!(s, "g{} = const {}", k + 1, b as u8),
                BoolGate::And(a, b) => writeln!(s, "g{} = and g{} g{}", k + 1, a + 1, b + 1),
                BoolGate::Or(a, b) => writeln!(s, "g{} = or g{} g{}", k + 1, a + 1, b + 1),
                BoolGate::Not(a) => writeln!(s, "g{} = not g{}", k + 1, a + 1),
            };
        }
        let _ = writeln!(s, "output g{}", self.output() + 1);
        s
    }
}
