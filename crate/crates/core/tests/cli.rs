use std::io::Write;
use std::process::{Command, Output};

fn catlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catlogic")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn report(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn report_shape() {
    let o = catlogic(&["stone", &fixture("props.theory"), "XOR"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["command"][0], "stone");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["pass"] == true));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pass"));
}

#[test]
fn input_errors_exit_two() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "theory T prop {{ letters x; axiom and(x, ; }}").unwrap();
    let o = catlogic(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(&o)["error"]["spans"][0]["line"], 1);
    assert_eq!(catlogic(&["check", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(catlogic(&["models"]).status.code(), Some(2));

    let mut b = tempfile::NamedTempFile::new().unwrap();
    write!(b, "brain {{ neuron a atoms=2 }}").unwrap();
    assert_eq!(catlogic(&["brain", "run", b.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn validation_failures_exit_one() {
    let o = catlogic(&["check", &fixture("broken_arity.theory")]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert!(r["verdicts"].as_array().unwrap().iter().any(|v| v["pass"] == false));
    assert_eq!(catlogic(&["brain", "check", &fixture("brains/broken_composite.brain")]).status.code(), Some(1));
}

#[test]
fn digest_tracks_input() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "theory A prop {{ letters x; }}").unwrap();
    let path = f.path().to_str().unwrap().to_string();
    let first = report(&catlogic(&["check", &path]))["input"]["sha256"].clone();
    write!(f, "\ntheory B prop {{ }}").unwrap();
    let second = report(&catlogic(&["check", &path]));
    assert_ne!(first, second["input"]["sha256"]);
    assert_eq!(second["result"]["theories"].as_array().unwrap().len(), 2);
}

#[test]
fn dot_export_is_plain_dot() {
    let o = catlogic(&["brain", "export", &fixture("brains/chain.brain"), "--dot"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("digraph \"chain\" {") && text.trim_end().ends_with('}'));
    assert_eq!(text.matches(" -> ").count(), 6);
}

#[test]
fn seed_is_recorded() {
    let p = fixture("props.theory");
    let r = report(&catlogic(&["adjoint", &p, "XOR", "--seed", "17"]));
    assert_eq!(r["seed"], 17);
    let d = report(&catlogic(&["adjoint", &p, "XOR"]));
    assert_eq!(d["seed"], catlogic::cli::DEFAULT_SEED);
}
