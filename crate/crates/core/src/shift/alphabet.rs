use std::fmt;

use crate::error::{Error, Result};

/// Finite ordered alphabet of single-character symbols.
///
/// Symbols are referred to by their index (`u8`) everywhere else in the crate;
/// the alphabet order fixes the lexicographic order of patterns and rule tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidParameter("alphabet must be nonempty".into()));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::InvalidParameter("alphabet has more than 255 symbols".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidParameter(format!("duplicate symbol {c:?}")));
            }
            if c.is_whitespace() || matches!(c, '#' | '=' | ';' | ',') {
                return Err(Error::InvalidParameter(format!("symbol {c:?} is reserved")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// `{0, 1, .., n-1}` written with decimal digits (then letters past 9).
    pub fn digits(n: usize) -> Self {
        const CHARS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";
        assert!((1..=CHARS.len()).contains(&n), "digits alphabet supports 1..=36 symbols");
        Alphabet {
            symbols: CHARS[..n].iter().map(|&b| b as char).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, index: u8) -> char {
        self.symbols[index as usize]
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    /// Symbol string to indices.
    pub fn encode(&self, word: &str) -> Result<Vec<u8>> {
        word.chars()
            .map(|c| {
                self.index_of(c)
                    .ok_or_else(|| Error::InvalidParameter(format!("symbol {c:?} is not in the alphabet")))
            })
            .collect()
    }

    pub fn decode(&self, word: &[u8]) -> String {
        word.iter().map(|&i| self.symbol(i)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
