use std::path::PathBuf;

use proptest::prelude::*;
use symdyn::automaton::LocalRule;
use symdyn::group::{FiniteSubset, GroupModel};
use symdyn::io::{parse_rule, parse_rule_file, parse_subshift, parse_subshift_file, serialize_rule, serialize_subshift};
use symdyn::shift::builders::{golden_mean, hard_ball, weiss_sft};
use symdyn::shift::{Alphabet, Subshift};
use symdyn::Error;

fn preset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presets").join(name)
}

#[test]
fn preset_files_match_builders() {
    assert_eq!(parse_subshift_file(preset("golden-mean.sft")).unwrap().value, golden_mean());
    assert_eq!(parse_subshift_file(preset("weiss.sft")).unwrap().value, weiss_sft());
    let hb = hard_ball(2, &[vec![1, 0], vec![0, 1]]).unwrap();
    assert_eq!(parse_subshift_file(preset("hard-ball-2.sft")).unwrap().value, hb);
    let (alphabet, rule) = parse_rule_file(preset("weiss.rule")).unwrap().value;
    assert_eq!(&alphabet, weiss_sft().alphabet());
    assert_eq!(rule, LocalRule::weiss());
}

#[test]
fn duplicates_warn_and_unknown_symbols_fail() {
    let p = parse_subshift("alphabet 01\nmemory 0 1\nallow 00\nallow 01\nallow 00\n").unwrap();
    assert_eq!(p.warnings.len(), 1);
    assert_eq!(p.value.admissible().len(), 2);
    match parse_subshift("alphabet 01\nmemory 0 1\n\nallow 0a\n").unwrap_err() {
        Error::Parse { line, expected, .. } => {
            assert_eq!(line, 4);
            assert!(expected.contains("allow"));
        }
        e => panic!("unexpected {e}"),
    }
    match parse_rule("alphabet 01\nmemory 0\n0 -> 1\n0 -> 0\n").unwrap_err() {
        Error::Parse { line, .. } => assert_eq!(line, 4),
        e => panic!("unexpected {e}"),
    }
    assert!(matches!(parse_subshift("alphabet 01\nwindow 0 1\n"), Err(Error::Parse { line: 2, .. })));
}

fn subshifts() -> impl Strategy<Value = Subshift> {
    let memories = prop_oneof![
        Just(vec![vec![0]]),
        Just(vec![vec![0], vec![1]]),
        Just(vec![vec![-1], vec![1]]),
        Just(vec![vec![0, 0], vec![1, 0]]),
        Just(vec![vec![0, 0], vec![0, 1], vec![1, 1]]),
    ];
    (2usize..4, memories).prop_flat_map(|(k, mem)| {
        let cells = mem.len() as u32;
        let size = k.pow(cells);
        proptest::collection::vec(any::<bool>(), size).prop_map(move |keep| {
            let rank = mem[0].len();
            let memory = FiniteSubset::from_coords(rank, mem.clone()).unwrap();
            let n = memory.len() as u32;
            let allowed = (0..k.pow(n)).filter(|&c| keep[c]).map(|mut c| {
                let mut w = vec![0u8; n as usize];
                for i in (0..n as usize).rev() {
                    w[i] = (c % k) as u8;
                    c /= k;
                }
                w
            });
            Subshift::new(Alphabet::digits(k), GroupModel::Lattice(rank), memory, allowed).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn subshift_round_trip(x in subshifts()) {
        let text = serialize_subshift(&x);
        let back = parse_subshift(&text).unwrap();
        prop_assert!(back.warnings.is_empty());
        prop_assert_eq!(&back.value, &x);
        prop_assert_eq!(serialize_subshift(&back.value), text);
    }

    #[test]
    fn rule_round_trip(k in 2usize..4, index in any::<u64>(), wide in any::<bool>()) {
        let memory = if wide { FiniteSubset::integers(-1..=1) } else { FiniteSubset::integers([0, 1]) };
        let total = LocalRule::count(k, &memory).unwrap();
        let rule = LocalRule::from_index(k, memory, index as u128 % total).unwrap();
        let alphabet = Alphabet::digits(k);
        let text = serialize_rule(&alphabet, &rule);
        let (a, back) = parse_rule(&text).unwrap().value;
        prop_assert_eq!(a, alphabet);
        prop_assert_eq!(back, rule);
    }
}
