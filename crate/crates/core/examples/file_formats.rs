//! Reading and writing subshift and rule files.

use symdyn::io::{parse_rule, parse_subshift, serialize_rule, serialize_subshift};

const SUBSHIFT: &str = "\
# no two adjacent 1s
alphabet 01
memory 0 1
forbid 11
forbid 11
";

const RULE: &str = "\
alphabet 01
memory 0 1
default 0
10 -> 1
";

fn main() -> symdyn::Result<()> {
    let parsed = parse_subshift(SUBSHIFT)?;
    for w in &parsed.warnings {
        println!("warning: {w}");
    }
    let canonical = serialize_subshift(&parsed.value);
    print!("{canonical}");
    assert_eq!(parse_subshift(&canonical)?.value, parsed.value);

    let (alphabet, rule) = parse_rule(RULE)?.value;
    print!("{}", serialize_rule(&alphabet, &rule));

    match parse_subshift("alphabet 01\nmemory 0 1\nallow 12\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
