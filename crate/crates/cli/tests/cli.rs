use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruling-lab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

#[test]
fn invalid_front_exits_2() {
    let o = run(&["validate", &path("bad_rightcusp.front")]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["rulings", "/nonexistent.front"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn check_kv_on_pinched_trefoil() {
    let o = run(&["check-kv", &path("pinched_trefoil.front")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equal"));
}

#[test]
fn rulings_of_trefoil() {
    let o = run(&["rulings", "--rho", "0", &path("trefoil.front")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "R = 2z^-1 + z");
}

#[test]
fn corpus_verifies() {
    let dir = corpus("");
    let o = run(&["corpus-verify", "--dir", &dir.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn zero_moves_keep_the_file() {
    let f = path("chekanov_5_2.front");
    let o = run(&["moves", "--shuffle", "0", &f]);
    assert_eq!(o.status.code(), Some(0));
    let a = ruling_lab::FrontDiagram::from_text(&stdout(&o)).unwrap();
    let b = ruling_lab::FrontDiagram::from_text(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn shuffled_front_keeps_rulings() {
    let f = path("trefoil.front");
    let o = run(&["moves", "--shuffle", "30", "--seed", "3", &f]);
    let tmp = std::env::temp_dir().join(format!("ruling-lab-moves-{}.front", std::process::id()));
    std::fs::write(&tmp, stdout(&o)).unwrap();
    let a = run(&["rulings", "--rho", "0", &f]);
    let b = run(&["rulings", "--rho", "0", &tmp.to_string_lossy()]);
    std::fs::remove_file(&tmp).unwrap();
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn json_output_parses() {
    for args in [
        vec!["--json", "rulings", "--list"],
        vec!["--json", "tb"],
        vec!["--json", "kauffman"],
        vec!["--json", "dga"],
        vec!["--json", "ruling-matrix"],
        vec!["--json", "check-equiv"],
    ] {
        let mut args = args.clone();
        let f = path("trefoil.front");
        args.push(&f);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{:?}", args);
        serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap();
    }
}

#[test]
fn output_is_byte_stable() {
    let f = path("pinched_trefoil.front");
    for cmd in ["rulings", "ruling-matrix", "resolve", "kauffman"] {
        let a = run(&[cmd, &f]);
        let b = run(&[cmd, &f]);
        assert_eq!(a.stdout, b.stdout, "{}", cmd);
    }
    let a = run(&["moves", "--shuffle", "20", "--seed", "9", &f]);
    let b = run(&["moves", "--shuffle", "20", "--seed", "9", &f]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tb_reports_writhes() {
    let o = run(&["--json", "tb", &path("theta4.front")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tb"], -2);
    assert_eq!(v["writhes"], serde_json::json!([-1, -1]));
}
