//! Line-based files for subshifts and local rules, and named presets.
//!
//! A subshift file:
//!
//! ```text
//! # no two adjacent 1s
//! group lattice:1
//! alphabet 01
//! memory 0 1
//! allow 00
//! allow 01
//! allow 10
//! ```
//!
//! `forbid <word>` lines give the complement form instead; the two cannot be mixed.
//! Words list symbols in the order the memory cells are written.
//!
//! A rule file:
//!
//! ```text
//! alphabet 012
//! memory -1 0
//! default 0
//! 01 -> 1
//! ```

use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::Path;

use crate::automaton::LocalRule;
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupModel};
use crate::shift::builders;
use crate::shift::{Alphabet, Subshift};

const GROUP: &str = "`group lattice:<rank>`";
const ALPHABET: &str = "`alphabet <symbols>`";
const MEMORY: &str = "`memory <element> <element> ...`";
const PATTERN: &str = "`allow <word>` or `forbid <word>`";
const RULE_LINE: &str = "`<word> -> <symbol>` or `default <symbol>`";
const SUBSHIFT_LINE: &str = "`group`, `alphabet`, `memory`, `allow` or `forbid` line";

/// A parsed value with non-fatal notes (such as duplicate lines).
#[derive(Clone, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Shared header state: group, alphabet and memory in written order.
#[derive(Default)]
struct Header {
    group: Option<GroupModel>,
    alphabet: Option<Alphabet>,
    memory: Option<Vec<GroupElement>>,
}

impl Header {
    /// Consumes a header line; `Ok(false)` if the line is not a header.
    fn take(&mut self, line: usize, key: &str, rest: &str) -> Result<bool> {
        match key {
            "group" => {
                if self.memory.is_some() {
                    return Err(Error::parse(line, "group must come before memory", MEMORY));
                }
                let g = GroupModel::parse(rest).map_err(|e| Error::parse(line, e.to_string(), GROUP))?;
                if g.lattice_rank().is_none() {
                    return Err(Error::parse(line, format!("{g} is not a lattice"), GROUP));
                }
                self.group = Some(g);
            }
            "alphabet" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(Error::parse(line, "symbols must be one run of characters", ALPHABET));
                }
                let a = Alphabet::new(rest.chars()).map_err(|e| Error::parse(line, e.to_string(), ALPHABET))?;
                self.alphabet = Some(a);
            }
            "memory" => {
                let g = self.group();
                let cells = rest
                    .split_whitespace()
                    .map(|t| g.parse_element(t))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::parse(line, e.to_string(), MEMORY))?;
                let distinct: BTreeSet<&GroupElement> = cells.iter().collect();
                if cells.is_empty() || distinct.len() != cells.len() {
                    return Err(Error::parse(line, "memory cells must be nonempty and distinct", MEMORY));
                }
                self.memory = Some(cells);
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn group(&self) -> GroupModel {
        self.group.unwrap_or(GroupModel::Lattice(1))
    }

    fn ready(&self, line: usize) -> Result<(&Alphabet, &[GroupElement])> {
        let a = self.alphabet.as_ref().ok_or_else(|| Error::parse(line, "alphabet not declared yet", ALPHABET))?;
        let m = self.memory.as_deref().ok_or_else(|| Error::parse(line, "memory not declared yet", MEMORY))?;
        Ok((a, m))
    }

    /// Word in written memory order, returned in sorted memory order.
    fn word(&self, line: usize, word: &str, expected: &'static str) -> Result<Vec<u8>> {
        let (a, m) = self.ready(line)?;
        let values = a.encode(word).map_err(|e| Error::parse(line, e.to_string(), expected))?;
        if values.len() != m.len() {
            return Err(Error::parse(
                line,
                format!("word {word:?} has {} symbols for {} memory cells", values.len(), m.len()),
                expected,
            ));
        }
        let mut order: Vec<usize> = (0..m.len()).collect();
        order.sort_by(|&i, &j| m[i].cmp(&m[j]));
        Ok(order.iter().map(|&i| values[i]).collect())
    }

    fn memory_set(&self) -> FiniteSubset {
        FiniteSubset::new(self.group(), self.memory.clone().unwrap()).unwrap()
    }
}

pub fn parse_subshift(text: &str) -> Result<Parsed<Subshift>> {
    let mut header = Header::default();
    let mut words = BTreeSet::new();
    let mut forbid = None;
    let mut warnings = Vec::new();
    let mut last = 1;
    for (line, body) in lines(text) {
        last = line;
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        if !words.is_empty() && matches!(key, "group" | "alphabet" | "memory") {
            return Err(Error::parse(line, "header lines must come before patterns", PATTERN));
        }
        if header.take(line, key, rest)? {
            continue;
        }
        let f = match key {
            "allow" => false,
            "forbid" => true,
            _ => return Err(Error::parse(line, format!("unknown keyword {key:?}"), SUBSHIFT_LINE)),
        };
        if forbid.is_some_and(|prev| prev != f) {
            return Err(Error::parse(line, "allow and forbid lines cannot be mixed", PATTERN));
        }
        forbid = Some(f);
        let w = header.word(line, rest, PATTERN)?;
        if !words.insert(w) {
            warnings.push(format!("line {line}: duplicate pattern {rest:?} ignored"));
        }
    }
    let (alphabet, _) = header.ready(last)?;
    let alphabet = alphabet.clone();
    let memory = header.memory_set();
    let x = if forbid == Some(true) {
        Subshift::from_forbidden(alphabet, header.group(), memory, words)
    } else {
        Subshift::new(alphabet, header.group(), memory, words)
    };
    let value = x.map_err(|e| Error::parse(last, e.to_string(), PATTERN))?;
    Ok(Parsed { value, warnings })
}

/// Canonical text: memory in sorted order, one `allow` line per admissible pattern.
pub fn serialize_subshift(x: &Subshift) -> String {
    let mut out = String::new();
    writeln!(out, "group {}", x.group()).unwrap();
    writeln!(out, "alphabet {}", x.alphabet().symbols().iter().collect::<String>()).unwrap();
    let cells: Vec<String> = x.memory().iter().map(|g| g.to_string()).collect();
    writeln!(out, "memory {}", cells.join(" ")).unwrap();
    for p in x.admissible() {
        writeln!(out, "allow {}", x.alphabet().decode(p)).unwrap();
    }
    out
}

pub fn parse_rule(text: &str) -> Result<Parsed<(Alphabet, LocalRule)>> {
    let mut header = Header::default();
    let mut default = None;
    let mut entries: Vec<(usize, Vec<u8>, u8)> = Vec::new();
    let mut warnings = Vec::new();
    let mut last = 1;
    for (line, body) in lines(text) {
        last = line;
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        if header.take(line, key, rest)? {
            continue;
        }
        let symbol = |s: &str| -> Result<u8> {
            let (a, _) = header.ready(line)?;
            let mut chars = s.chars();
            match (chars.next().and_then(|c| a.index_of(c)), chars.next()) {
                (Some(v), None) => Ok(v),
                _ => Err(Error::parse(line, format!("{s:?} is not a symbol of the alphabet"), RULE_LINE)),
            }
        };
        if key == "default" {
            default = Some(symbol(rest)?);
            continue;
        }
        let (w, v) = body
            .split_once("->")
            .ok_or_else(|| Error::parse(line, format!("unrecognized line {body:?}"), RULE_LINE))?;
        let word = header.word(line, w.trim(), RULE_LINE)?;
        let v = symbol(v.trim())?;
        if let Some(prev) = entries.iter().find(|e| e.1 == word) {
            if prev.2 != v {
                return Err(Error::parse(line, format!("conflicts with line {}", prev.0), RULE_LINE));
            }
            warnings.push(format!("line {line}: duplicate entry ignored"));
            continue;
        }
        entries.push((line, word, v));
    }
    let (alphabet, _) = header.ready(last)?;
    let alphabet = alphabet.clone();
    let memory = header.memory_set();
    let k = alphabet.len();
    let n = memory.len();
    let size = k.checked_pow(n as u32).filter(|&s| s <= 1 << 24);
    let size = size.ok_or_else(|| Error::parse(last, "rule table too large", MEMORY))?;
    let mut table = vec![None; size];
    for (_, w, v) in &entries {
        table[crate::shift::subshift::encode(w, k)] = Some(*v);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(c, v)| {
            v.or(default).ok_or_else(|| {
                let w = alphabet.decode(&crate::shift::subshift::decode(c, k, n));
                Error::parse(last, format!("no output for {w:?} (sorted memory order) and no default"), RULE_LINE)
            })
        })
        .collect::<Result<Vec<u8>>>()?;
    let rule = LocalRule::new(k, memory, table).map_err(|e| Error::parse(last, e.to_string(), RULE_LINE))?;
    Ok(Parsed { value: (alphabet, rule), warnings })
}

/// Canonical text: explicit entry for every pattern in lexicographic order.
pub fn serialize_rule(alphabet: &Alphabet, rule: &LocalRule) -> String {
    let mut out = String::new();
    writeln!(out, "group {}", rule.memory().model()).unwrap();
    writeln!(out, "alphabet {}", alphabet.symbols().iter().collect::<String>()).unwrap();
    let cells: Vec<String> = rule.memory().iter().map(|g| g.to_string()).collect();
    writeln!(out, "memory {}", cells.join(" ")).unwrap();
    let k = rule.symbols();
    let n = rule.offsets().len();
    for (c, &v) in rule.table().iter().enumerate() {
        let w = crate::shift::subshift::decode(c, k, n);
        writeln!(out, "{} -> {}", alphabet.decode(&w), alphabet.symbol(v)).unwrap();
    }
    out
}

pub fn parse_subshift_file(path: impl AsRef<Path>) -> Result<Parsed<Subshift>> {
    parse_subshift(&std::fs::read_to_string(path)?)
}

pub fn parse_rule_file(path: impl AsRef<Path>) -> Result<Parsed<(Alphabet, LocalRule)>> {
    parse_rule(&std::fs::read_to_string(path)?)
}

/// Names accepted by [`preset`].
pub const PRESETS: &[&str] = &["golden-mean", "weiss", "full:k=<k>", "zero", "hard-square", "hard-ball:d=<rank>"];

/// `golden-mean`, `weiss`, `full:k=2`, `zero` (the fixed point `0^Z` on `{0,1}`),
/// `hard-square`, `hard-ball:d=2` (no two 1s at distance `e_i`).
pub fn preset(name: &str) -> Result<Subshift> {
    let bad = || Error::InvalidParameter(format!("unknown preset {name:?}; known: {}", PRESETS.join(", ")));
    let param = |prefix: &str| -> Result<Option<usize>> {
        match name.strip_prefix(prefix) {
            Some(v) => v.parse().map(Some).map_err(|_| bad()),
            None => Ok(None),
        }
    };
    match name {
        "golden-mean" => return Ok(builders::golden_mean()),
        "weiss" => return Ok(builders::weiss_sft()),
        "zero" => return Ok(builders::forbidding_symbols(2, &[1])),
        "hard-square" => return Ok(builders::hard_square()),
        _ => {}
    }
    if let Some(k) = param("full:k=")? {
        if !(1..=36).contains(&k) {
            return Err(bad());
        }
        return Ok(builders::full_shift(k));
    }
    if let Some(d) = param("hard-ball:d=")? {
        if d == 0 {
            return Err(bad());
        }
        let f: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        return builders::hard_ball(d, &f);
    }
    Err(bad())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::builders::{golden_mean, hard_square, weiss_sft};

    #[test]
    fn golden_mean_file() {
        let text = "# golden mean\ngroup lattice:1\nalphabet 01\nmemory 0 1\nallow 00\nallow 01\nallow 10\n";
        let p = parse_subshift(text).unwrap();
        assert_eq!(p.value, golden_mean());
        assert!(p.warnings.is_empty());
        let f = parse_subshift("alphabet 01\nmemory 0 1\nforbid 11\n").unwrap();
        assert_eq!(f.value, golden_mean());
    }

    #[test]
    fn memory_order_is_respected() {
        // written as (1, 0): the word "10" means x(1) = 1, x(0) = 0
        let text = "alphabet 01\nmemory 1 0\nallow 00\nallow 10\nallow 01\n";
        assert_eq!(parse_subshift(text).unwrap().value, golden_mean());
        let text = "alphabet 01\nmemory 1 0\nallow 00\nallow 10\n";
        let x = parse_subshift(text).unwrap().value;
        assert!(x.allows(&[0, 1]) && !x.allows(&[1, 0]));
    }

    #[test]
    fn duplicates_warn() {
        let text = "alphabet 01\nmemory 0 1\nallow 00\nallow 01\nallow 10\nallow 01\n";
        let p = parse_subshift(text).unwrap();
        assert_eq!(p.value, golden_mean());
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].starts_with("line 6"));
    }

    #[test]
    fn errors_carry_line_and_production() {
        let cases: &[(&str, usize, &str)] = &[
            ("alphabet 01\nmemory 0 1\nallow 02\n", 3, PATTERN),
            ("alphabet 01\nmemory 0 1\nallow 0\n", 3, PATTERN),
            ("alphabet 01\n\nmemory 0 x\n", 3, MEMORY),
            ("group free:2\n", 1, GROUP),
            ("alphabet 01\nmemory 0\nallow 0\nforbid 1\n", 4, PATTERN),
            ("alphabet 01\nmemory 0\nbogus 1\n", 3, SUBSHIFT_LINE),
            ("memory 0\nallow 0\n", 2, ALPHABET),
            ("alphabet 0 1\n", 1, ALPHABET),
        ];
        for &(text, line, expected) in cases {
            match parse_subshift(text) {
                Err(Error::Parse { line: l, expected: e, .. }) => {
                    assert_eq!((l, e), (line, expected), "{text:?}");
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn subshift_round_trips() {
        for x in [golden_mean(), weiss_sft(), hard_square(), preset("hard-ball:d=2").unwrap(), preset("full:k=3").unwrap()] {
            let text = serialize_subshift(&x);
            let y = parse_subshift(&text).unwrap().value;
            assert_eq!(x, y);
            assert_eq!(serialize_subshift(&y), text);
        }
    }

    #[test]
    fn rules_round_trip() {
        let text = "alphabet 012\nmemory -1 0\ndefault 0\n00 -> 0\n01 -> 1\n11 -> 1\n12 -> 1\n22 -> 2\n20 -> 2\n";
        let (a, r) = parse_rule(text).unwrap().value;
        assert_eq!(r.memory(), &FiniteSubset::integers([-1, 0]));
        let again = parse_rule(&serialize_rule(&a, &r)).unwrap().value;
        assert_eq!(again.1, r);
        assert_eq!(serialize_rule(&again.0, &again.1), serialize_rule(&a, &r));
        let weiss = crate::automaton::LocalRule::weiss();
        let digits = Alphabet::digits(3);
        assert_eq!(parse_rule(&serialize_rule(&digits, &weiss)).unwrap().value.1, weiss);
    }

    #[test]
    fn rule_errors() {
        match parse_rule("alphabet 01\nmemory 0\n0 -> 1\n") {
            Err(Error::Parse { line: 3, expected: RULE_LINE, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_rule("alphabet 01\nmemory 0\n0 -> 2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_rule("alphabet 01\nmemory 0\n0 -> 1\n0 -> 0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn presets_match_builders() {
        assert_eq!(preset("golden-mean").unwrap(), golden_mean());
        assert_eq!(preset("hard-ball:d=2").unwrap(), hard_square());
        assert!(preset("hard-ball:d=x").is_err());
        assert!(preset("nope").is_err());
    }
}
