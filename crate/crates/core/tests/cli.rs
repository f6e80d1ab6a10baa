use std::process::Command;

fn symdyn(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().unwrap()
}

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn presets() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

#[test]
fn weiss_recipe_reports_the_orphan() {
    let o = symdyn(&["recipe", "weiss-counterexample", "--seed", "11"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("# experiment = decide\n# recipe = weiss-counterexample\n# seed = 11\n"), "{csv}");
    assert!(csv.contains("surjective,false,orphan 012"), "{csv}");
    assert!(csv.contains("strong_irreducibility,refuted"));
    assert!(csv.contains("splicable,certified"));
}

#[test]
fn gromov_weiss_recipe_has_no_violations() {
    let o = symdyn(&["recipe", "gromov-weiss"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("0 violations"), "{err}");
}

#[test]
fn output_is_deterministic() {
    let args = ["approx", "quality", "--group", "free:2", "--kind", "word-extension", "--d", "300", "--test", "2", "--seed", "5"];
    let a = stdout(&symdyn(&args));
    let b = stdout(&symdyn(&args));
    assert_eq!(a, b);
    assert!(a.contains("# seed = 5"));
    let c = stdout(&symdyn(&["approx", "quality", "--group", "free:2", "--kind", "word-extension", "--d", "300", "--test", "2", "--seed", "6"]));
    assert_ne!(a, c);
}

#[test]
fn hyphenated_lists_and_presets() {
    let o = symdyn(&["--threads", "2", "sweep", "--preset", "weiss", "--memory", "-1 0", "--budget", "50"]);
    // over budget: reported as an error naming the module
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("sweep budget"));
    let o = symdyn(&["certify", "--preset", "golden-mean", "--delta", "-1 0 1", "--budget", "6"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.contains("strong_irreducibility,certified,exact"), "{csv}");
    assert!(csv.contains("# delta = {-1, 0, 1}"));
}

#[test]
fn floats_have_nine_decimals() {
    let o = symdyn(&["entropy", "estimate", "--preset", "full:k=2", "--d", "6"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let row = csv.lines().last().unwrap();
    assert!(row.contains(",0.693147181,"), "{row}");
}

#[test]
fn config_files_run_and_write_output() {
    let dir = tempfile::tempdir().unwrap();
    let sft = dir.path().join("golden.sft");
    std::fs::copy(presets().join("golden-mean.sft"), &sft).unwrap();
    let cfg = dir.path().join("plateau.cfg");
    std::fs::write(&cfg, "experiment = entropy\nsubshift = golden.sft\nd = 10\neps = 1/8\nseed = 3\noutput = out.csv\n").unwrap();
    let o = symdyn(&["run", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert!(csv.starts_with("# experiment = entropy\n# seed = 3\n"), "{csv}");
    assert!(csv.contains("\n10,10,123,0,123,0.481218436,"), "{csv}");

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "experiment = decide\nsubshift = golden.sft\n\nrule = nowhere.rule\n").unwrap();
    let o = symdyn(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 4"));
}

#[test]
fn shipped_config_decides_weiss() {
    let o = symdyn(&["run", presets().join("weiss-decide.cfg").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("injective,true"));
}

#[test]
fn approx_build_round_trips_through_quality() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("cyc.txt");
    let o = symdyn(&["approx", "build", "--d", "16", "--out", table.to_str().unwrap()]);
    assert!(o.status.success());
    let o = symdyn(&["approx", "quality", "--file", table.to_str().unwrap(), "--test", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("# construction = cyclic"));
}
