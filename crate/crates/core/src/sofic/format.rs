//! Text dump of an approximation:
//!
//! ```text
//! group lattice:1
//! d 3
//! construction cyclic
//! -1: 2 0 1
//! 0: 0 1 2
//! 1: 1 2 0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::group::GroupModel;
use crate::sofic::{Construction, Permutation, SoficApproximation};

const HEADER: &str = "`group <model>`, `d <size>`, `construction <cyclic|torus|word-extension-random(seed=N)>`";
const ROW: &str = "`<element>: <image> ... <image>`";

pub(super) fn dump(a: &SoficApproximation) -> String {
    let mut out = String::new();
    writeln!(out, "group {}", a.model).unwrap();
    writeln!(out, "d {}", a.d).unwrap();
    writeln!(out, "construction {}", a.construction).unwrap();
    for (g, p) in &a.table {
        let images: Vec<String> = p.images().iter().map(|i| i.to_string()).collect();
        writeln!(out, "{g}: {}", images.join(" ")).unwrap();
    }
    out
}

fn construction(text: &str, line: usize) -> Result<Construction> {
    match text {
        "cyclic" => Ok(Construction::Cyclic),
        "torus" => Ok(Construction::Torus),
        _ => {
            let seed = text
                .strip_prefix("word-extension-random(seed=")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(line, format!("unknown construction {text:?}"), HEADER))?;
            Ok(Construction::WordExtensionRandom { seed })
        }
    }
}

pub(super) fn parse(text: &str) -> Result<SoficApproximation> {
    let mut model = None;
    let mut d = None;
    let mut tag = None;
    let mut table = BTreeMap::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let (Some(m), Some(d), Some(_)) = (model, d, tag) else {
            let (key, value) = body
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(line, format!("malformed header {body:?}"), HEADER))?;
            let value = value.trim();
            match key {
                "group" if model.is_none() => {
                    model = Some(GroupModel::parse(value).map_err(|e| Error::parse(line, e.to_string(), HEADER))?);
                }
                "d" if d.is_none() => {
                    d = Some(value.parse::<usize>().map_err(|_| Error::parse(line, format!("bad size {value:?}"), HEADER))?);
                }
                "construction" if tag.is_none() => tag = Some(construction(value, line)?),
                _ => return Err(Error::parse(line, format!("unexpected header {key:?}"), HEADER)),
            }
            continue;
        };
        let (elem, images) = body
            .rsplit_once(':')
            .ok_or_else(|| Error::parse(line, "missing ':'", ROW))?;
        let g = m.parse_element(elem).map_err(|e| Error::parse(line, e.to_string(), ROW))?;
        let images = images
            .split_whitespace()
            .map(|s| s.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(line, "images must be nonnegative integers", ROW))?;
        if images.len() != d {
            return Err(Error::parse(line, format!("expected {d} images, found {}", images.len()), ROW));
        }
        let p = Permutation::new(images).map_err(|e| Error::parse(line, e.to_string(), ROW))?;
        if table.insert(g.clone(), p).is_some() {
            return Err(Error::parse(line, format!("element {g} listed twice"), ROW));
        }
    }
    let (Some(model), Some(d), Some(tag)) = (model, d, tag) else {
        return Err(Error::parse(last.max(1), "incomplete header", HEADER));
    };
    SoficApproximation::new(model, d, table, tag).map_err(|e| Error::parse(last.max(1), e.to_string(), ROW))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sofic::{cyclic_approximation, torus_approximation, word_extension_random};

    #[test]
    fn round_trips() {
        for a in [
            cyclic_approximation(3).unwrap(),
            torus_approximation(3, 2).unwrap(),
            word_extension_random(2, 6, 11, 2).unwrap(),
        ] {
            let text = a.dump();
            let b = SoficApproximation::parse(&text).unwrap();
            assert_eq!(a, b);
            assert_eq!(b.dump(), text);
        }
    }

    #[test]
    fn reports_lines() {
        let text = "group lattice:1\nd 3\nconstruction cyclic\n0: 0 1 2\n1: 1 2\n";
        match parse(text) {
            Err(Error::Parse { line, expected, .. }) => {
                assert_eq!(line, 5);
                assert_eq!(expected, ROW);
            }
            other => panic!("{other:?}"),
        }
        let text = "group lattice:1\nsize 3\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 2, .. })));
        let text = "group lattice:1\nd 2\nconstruction cyclic\n0: 0 1\n1: 1 1\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 5, .. })));
        // 1 without -1 breaks inverse closure
        let text = "group lattice:1\nd 2\nconstruction cyclic\n0: 0 1\n1: 1 0\n";
        assert!(parse(text).is_err());
    }
}
