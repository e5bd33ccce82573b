use std::path::{Path, PathBuf};

use ncpit::algebra::FieldSpec;
use ncpit::circuit::{parse_circuit, ArithCircuit, BoolCircuit, ParsedCircuit};
use ncpit::isolation::{parse_family, SetFamily};
use ncpit::ncpoly::Word;
use sha2::{Digest, Sha256};

use crate::report::InputDigest;
use crate::Failure;

/// Reads input files and remembers their digests for the report.
#[derive(Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        self.digests.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes)
            .map_err(|_| Failure::input(format!("{}: not valid UTF-8", path.display())))
    }

    pub fn arith_circuit(
        &mut self,
        path: &Path,
        field: Option<FieldSpec>,
    ) -> Result<ArithCircuit, Failure> {
        let text = self.read(path)?;
        match parse_circuit(&text).map_err(|e| Failure::at(path, e))? {
            ParsedCircuit::Arith(c) => {
                if let Some(f) = field.filter(|&f| f != c.field()) {
                    return Err(Failure::input(format!(
                        "{}: circuit is over {}, but --field says {f}",
                        path.display(),
                        c.field()
                    )));
                }
                Ok(c)
            }
            ParsedCircuit::Bool(_) => Err(Failure::input(format!(
                "{}:1: expected an `ncircuit` header, found a boolean circuit",
                path.display()
            ))),
        }
    }

    pub fn bool_circuit(&mut self, path: &Path) -> Result<BoolCircuit, Failure> {
        let text = self.read(path)?;
        match parse_circuit(&text).map_err(|e| Failure::at(path, e))? {
            ParsedCircuit::Bool(c) => Ok(c),
            ParsedCircuit::Arith(_) => Err(Failure::input(format!(
                "{}:1: expected a `bcircuit` header, found an arithmetic circuit",
                path.display()
            ))),
        }
    }

    /// `@circuit` paths are resolved against the family file's directory.
    pub fn family(&mut self, path: &Path, n: Option<usize>) -> Result<SetFamily, Failure> {
        let text = self.read(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut nested: Option<Failure> = None;
        let parsed = parse_family(&text, n, |p| {
            let target: PathBuf = base.join(p);
            self.bool_circuit(&target).map_err(|f| {
                let msg = f.message.clone();
                nested = Some(f);
                ncpit::Error::InvalidArgument(msg)
            })
        });
        match (parsed, nested) {
            (Ok(f), _) => Ok(f),
            (Err(_), Some(f)) => Err(f),
            (Err(e), None) => Err(Failure::at(path, e)),
        }
    }
}

pub fn parse_monomial(text: &str) -> Result<Word, Failure> {
    let text = text.trim();
    if text.is_empty() || text == "-" {
        return Ok(Word::empty());
    }
    text.split_whitespace()
        .map(|t| match t.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i),
            _ => Err(Failure::usage(format!(
                "--monomial: `{t}` is not a variable index (1-based)"
            ))),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Word::new)
}

/// `"1 2;3 4"`: assignments separated by `;`, values by whitespace.
pub fn parse_weight_lists(text: &str) -> Result<Vec<Vec<u64>>, Failure> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            part.split_whitespace()
                .map(|t| {
                    t.parse::<u64>().map_err(|_| {
                        Failure::usage(format!("--weights: `{t}` is not a positive integer"))
                    })
                })
                .collect()
        })
        .collect()
}

/// `"10 01"`: bit strings, character `i` is coordinate `i + 1`.
pub fn parse_bit_vectors(text: &str, t: u32) -> Result<Vec<u32>, Failure> {
    text.split_whitespace()
        .map(|s| {
            if s.len() != t as usize || !s.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Failure::usage(format!(
                    "--set: `{s}` is not a {t}-bit vector"
                )));
            }
            Ok(s.bytes()
                .enumerate()
                .fold(0u32, |v, (i, b)| v | (((b - b'0') as u32) << i)))
        })
        .collect()
}

pub fn format_bit_vector(v: u32, t: u32) -> String {
    (0..t)
        .map(|i| if v >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials() {
        assert_eq!(parse_monomial("1 2").unwrap(), Word::new(vec![1, 2]));
        assert_eq!(parse_monomial("-").unwrap(), Word::empty());
        assert!(parse_monomial("0").is_err());
        assert!(parse_monomial("a").is_err());
    }

    #[test]
    fn weights_and_bits() {
        assert_eq!(
            parse_weight_lists("1 2; 3 4").unwrap(),
            vec![vec![1, 2], vec![3, 4]]
        );
        assert!(parse_weight_lists("1 x").is_err());
        assert_eq!(parse_bit_vectors("10 01", 2).unwrap(), vec![1, 2]);
        assert!(parse_bit_vectors("1", 2).is_err());
        assert_eq!(format_bit_vector(1, 3), "100");
    }
}
