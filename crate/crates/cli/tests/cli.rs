use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn k3w(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3w"))
        .args(args)
        .env_remove("K3W_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn four_n1_report() {
    let o = k3w(&["classify", "--json", &fixture("four_n1.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    let places = r["places"].as_array().unwrap();
    assert_eq!(places.len(), 4);
    for p in places {
        assert_eq!(p["fiber"], "N1");
        assert_eq!(p["degree"], 1);
        assert_eq!((p["v_a"].clone(), p["v_b"].clone()), (2.into(), 3.into()));
        assert_eq!(p["v_delta"], "inf");
    }
    assert_eq!(r["deg_l"], "2");
    assert_eq!(r["git_class"], "SLC_JINF");
    assert_eq!(r["schema_version"], "1");
}

#[test]
fn two_n2_is_the_polystable_corner() {
    let o = k3w(&["classify", &fixture("two_n2.json")]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.matches(" N2 ").count(), 2, "{out}");
    assert!(out.contains("deg L: 2"));
    assert!(out.contains("GIT class: POLYSTABLE_CORNER"));
}

#[test]
fn generic_k3_counts_24() {
    let o = k3w(&["classify", "--json", &fixture("generic_k3.json")]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["discriminant_total"], 24);
    assert_eq!(r["git_class"], "INTERIOR_ADE");
    assert!(r["deg_l"].is_null());
}

#[test]
fn zero_denominator_is_an_input_error() {
    let o = k3w(&["classify", &fixture("bad_rational.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("DenominatorZero"), "{}", stderr(&o));
    assert!(stderr(&o).contains("a[3]"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = std::env::temp_dir().join(format!("k3w-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\n  \"kind\": \"weierstrass\",\n  \"n\": ,\n}\n").unwrap();
    let o = k3w(&["classify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = k3w(&["classify", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn wrong_document_kind() {
    let o = k3w(&["git-check", &fixture("generic_k3.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("expected a `triple` document"));
}

#[test]
fn unstable_triple_witness() {
    let o = k3w(&["git-check", &fixture("unstable_triple.json")]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("status: UNSTABLE"));
    assert!(
        out.contains("witness: T0  profile (5, 7, 14)  v_l 0"),
        "{out}"
    );

    let o = k3w(&[
        "git-check",
        "--oracle",
        "--json",
        &fixture("unstable_triple.json"),
    ]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["witness"]["place"], "T0");
    assert_eq!(r["oracle"], "agrees");
}

#[test]
fn stable_triple() {
    let o = k3w(&["git-check", "--oracle", &fixture("stable_triple.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("status: STABLE"));
    assert!(stdout(&o).contains("oracle: agrees"));
}

#[test]
fn random_triples_agree_with_oracle() {
    for seed in 0..8 {
        let o = Command::new(env!("CARGO_BIN_EXE_k3w"))
            .args(["gen-random", "--kind", "triple"])
            .env("K3W_SEED", seed.to_string())
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        let dir = std::env::temp_dir().join(format!("k3w-rand-{}-{seed}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.json");
        std::fs::write(&path, &o.stdout).unwrap();
        let check = k3w(&["git-check", "--oracle", path.to_str().unwrap()]);
        assert!(matches!(code(&check), 0 | 1), "{}", stderr(&check));
    }
}

#[test]
fn seed_makes_generation_reproducible() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_k3w"))
            .arg("gen-random")
            .env("K3W_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("11"), run("11"));
    assert_ne!(run("11"), run("12"));
}

#[test]
fn wall_table() {
    let o = k3w(&["walls"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "5/12 W_III ContractFiberTree(II)"));
    assert_eq!(out.lines().count(), 37);
    assert!(!out.contains('.'));

    let above = stdout(&k3w(&["walls", "--above", "1/12"]));
    for n in 13..=19 {
        assert!(!above.lines().any(|l| l.starts_with(&format!("1/{n} "))));
    }
    assert!(above.lines().all(|l| !l.starts_with("1/12 ")));

    // The only wall above 1/2 is the one at 1.
    let top = stdout(&k3w(&["walls", "--above", "1/2"]));
    assert_eq!(top, "1 W_II PseudoellipticFlip(1)\n");
    assert_eq!(stdout(&k3w(&["walls", "--above", "1"])), "");

    let o = k3w(&["walls", "--above", "1/0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn weight_query_models() {
    let o = k3w(&["walls", "--json", "--query", &fixture("weight_query.json")]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let models = r["models"].as_array().unwrap();
    assert_eq!(models[0]["fiber"], "II");
    assert_eq!(models[0]["model"], "weierstrass");
    assert_eq!(models[1]["model"], "intermediate");
    assert_eq!(r["wall_at_or_below"]["value"], "1/2");
    assert_eq!(r["wall_above"]["value"], "1");
}

#[test]
fn strata_listing_and_counts() {
    let o = k3w(&["strata", "--family", "III0", "--r", "1", "--s", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 2);

    let o = k3w(&["strata", "--family", "II", "--json"]);
    let r = json(&o);
    assert_eq!(r["count"], 2);
    let fams: Vec<_> = r["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["family"].clone())
        .collect();
    assert_eq!(fams, vec!["II", "II_INF"]);

    for args in [
        vec!["--family", "III1", "--max-n", "3"],
        vec!["--family", "III2", "--canonical", "--max-n", "2"],
        vec!["--dim", "15", "--max-n", "3"],
    ] {
        let listed = stdout(&k3w(&[&["strata"], args.as_slice()].concat()))
            .lines()
            .count();
        let counted: usize = stdout(&k3w(&[&["strata", "--count"], args.as_slice()].concat()))
            .trim()
            .parse()
            .unwrap();
        assert_eq!(listed, counted, "{args:?}");
    }

    let o = k3w(&["strata", "--family", "IV"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn validation_exit_codes() {
    let o = k3w(&["validate", &fixture("type_e.json")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o), "valid\n");

    let o = k3w(&[
        "validate",
        "--mode",
        "epsilon-catalog",
        &fixture("type_b.json"),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let o = k3w(&["validate", "--json", &fixture("gluing_ii_iii.json")]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["violations"][0]["name"], "IllegalGluing");
    assert_eq!(r["violations"][0]["condition"], 1);

    let o = k3w(&["validate", &fixture("not_tree.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("GraphError"));
}

#[test]
fn canonical_fixtures_round_trip() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures"].iter().collect();
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name == "bad_rational.json" {
            continue;
        }
        let o = k3w(&["fmt", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
        assert_eq!(
            o.stdout,
            std::fs::read(&path).unwrap(),
            "{name} is not canonical"
        );
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn fmt_reduces_to_canonical_form() {
    let dir = std::env::temp_dir().join(format!("k3w-fmt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q.json");
    std::fs::write(
        &path,
        r#"{"schema_version":"1","kind":"weight_query","a":" 4/8 "}"#,
    )
    .unwrap();
    let once = k3w(&["fmt", path.to_str().unwrap()]).stdout;
    assert_eq!(
        String::from_utf8_lossy(&once),
        "{\n  \"kind\": \"weight_query\",\n  \"schema_version\": \"1\",\n  \"a\": \"1/2\"\n}\n"
    );
    std::fs::write(&path, &once).unwrap();
    assert_eq!(k3w(&["fmt", path.to_str().unwrap()]).stdout, once);
}
