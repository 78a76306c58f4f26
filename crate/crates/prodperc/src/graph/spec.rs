//! The graph expression language.
//!
//! ```text
//! expr := term ("x" term)*
//! term := atom ("^" uint)?
//! atom := ("K" | "C" | "P") uint     complete / cycle / path
//!       | "Q" uint                   shorthand: Q n == K2^n
//!       | "file(" path ")"           edge-list file
//! ```
//!
//! Whitespace is ignored outside of file paths, atom letters are accepted
//! in either case, and parse errors carry the byte offset of the problem.

use crate::error::{Error, Result};

/// A single factor kind before powering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Complete(u16),
    Cycle(u16),
    Path(u16),
    File(String),
}

impl Atom {
    pub fn print(&self) -> String {
        match self {
            Atom::Complete(k) => format!("K{k}"),
            Atom::Cycle(k) => format!("C{k}"),
            Atom::Path(k) => format!("P{k}"),
            Atom::File(p) => format!("file({p})"),
        }
    }
}

/// A parsed product expression: an ordered list of powered atoms.
/// `Q n` is expanded at parse time, so it prints back as `K2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub factors: Vec<(Atom, u32)>,
}

impl GraphSpec {
    /// Canonical text form; `parse_graph_expr(print())` round-trips to an
    /// equal value.
    pub fn print(&self) -> String {
        self.factors
            .iter()
            .map(|(a, p)| {
                if *p == 1 {
                    a.print()
                } else {
                    format!("{}^{}", a.print(), p)
                }
            })
            .collect::<Vec<_>>()
            .join(" x ")
    }

    /// Total number of dimensions after powers are expanded.
    pub fn dimension(&self) -> u64 {
        self.factors.iter().map(|(_, p)| *p as u64).sum()
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn uint(&mut self, what: &str) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(b) = self.peek() {
            if !b.is_ascii_digit() {
                break;
            }
            value = value * 10 + (b - b'0') as u64;
            if value > u32::MAX as u64 {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("{what} is too large"),
                });
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(format!("expected {what}")));
        }
        Ok(value as u32)
    }

    fn atom(&mut self) -> Result<Atom> {
        self.skip_ws();
        let start = self.pos;
        let b = self
            .peek()
            .ok_or_else(|| self.err("expected an atom (K/C/P/Q n or file(path))"))?;
        match b.to_ascii_uppercase() {
            b'F' => {
                let rest = &self.bytes[self.pos..];
                let lower: Vec<u8> = rest
                    .iter()
                    .take(5)
                    .map(|c| c.to_ascii_lowercase())
                    .collect();
                if lower != b"file(" {
                    return Err(self.err("expected `file(`"));
                }
                self.pos += 5;
                let path_start = self.pos;
                while let Some(c) = self.peek() {
                    if c == b')' {
                        let path = std::str::from_utf8(&self.bytes[path_start..self.pos])
                            .expect("input was a str")
                            .trim()
                            .to_string();
                        self.pos += 1;
                        if path.is_empty() {
                            return Err(Error::Parse {
                                offset: path_start,
                                message: "empty file path".into(),
                            });
                        }
                        return Ok(Atom::File(path));
                    }
                    self.pos += 1;
                }
                Err(Error::Parse {
                    offset: start,
                    message: "unterminated file( atom".into(),
                })
            }
            letter @ (b'K' | b'C' | b'P' | b'Q') => {
                self.pos += 1;
                let k_pos = self.pos;
                let k = self.uint("atom order")?;
                let too_small = |min: u32| Error::Parse {
                    offset: k_pos,
                    message: format!(
                        "{} needs order >= {min}, got {k}",
                        (letter as char).to_ascii_uppercase()
                    ),
                };
                match letter {
                    b'K' => {
                        if k < 2 {
                            return Err(too_small(2));
                        }
                        Ok(Atom::Complete(k as u16))
                    }
                    b'C' => {
                        if k < 3 {
                            return Err(too_small(3));
                        }
                        Ok(Atom::Cycle(k as u16))
                    }
                    b'P' => {
                        if k < 2 {
                            return Err(too_small(2));
                        }
                        Ok(Atom::Path(k as u16))
                    }
                    _ => {
                        // Q n: hypercube shorthand, K2 to the n-th power.
                        if k < 1 {
                            return Err(Error::Parse {
                                offset: k_pos,
                                message: "Q needs dimension >= 1".into(),
                            });
                        }
                        Ok(Atom::Complete(2))
                    }
                }
            }
            _ => Err(self.err("expected an atom (K/C/P/Q n or file(path))")),
        }
    }
}

/// Parse a product expression. See the module docs for the grammar.
pub fn parse_graph_expr(text: &str) -> Result<GraphSpec> {
    let mut sc = Scanner::new(text);
    let mut factors: Vec<(Atom, u32)> = Vec::new();
    loop {
        sc.skip_ws();
        let atom_start = sc.pos;
        // Re-scan the atom to learn whether it was a Q (whose count is a
        // power, not an order).
        let is_q = sc.peek().map(|b| b.to_ascii_uppercase() == b'Q') == Some(true);
        let atom = sc.atom()?;
        let mut power: u32 = if is_q {
            // The digits already consumed were the hypercube dimension.
            let digits = &text[atom_start + 1..sc.pos];
            digits.trim().parse().map_err(|_| Error::Parse {
                offset: atom_start + 1,
                message: "Q needs a dimension".into(),
            })?
        } else {
            1
        };
        sc.skip_ws();
        if sc.peek() == Some(b'^') {
            sc.pos += 1;
            let p_pos = sc.pos;
            let p = sc.uint("power")?;
            if p == 0 {
                return Err(Error::Parse {
                    offset: p_pos,
                    message: "power must be >= 1".into(),
                });
            }
            power = power.checked_mul(p).ok_or(Error::Parse {
                offset: p_pos,
                message: "power is too large".into(),
            })?;
        }
        factors.push((atom, power));
        sc.skip_ws();
        match sc.peek() {
            None => break,
            Some(b'x') | Some(b'X') => {
                sc.pos += 1;
            }
            Some(_) => return Err(sc.err("expected `x` between factors or end of input")),
        }
    }
    if factors.is_empty() {
        return Err(Error::Parse {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    Ok(GraphSpec { factors })
}
