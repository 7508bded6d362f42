use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Output};

fn hseries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hseries")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_hermite() {
    let o = hseries(&["expand", "hermite", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "16*x^4 - 48*x^2 + 12");
    let o = hseries(&["expand", "r-exp-poly", "2", "--r", "1"]);
    assert_eq!(stdout(&o).trim(), "x^2 + x");
}

#[test]
fn seq_bell_prints_ten_values() {
    let o = hseries(&["seq", "bell", "10"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines, ["1", "1", "2", "5", "15", "52", "203", "877", "4140", "21147"]);
    let h = hseries(&["seq", "harmonic", "4"]);
    assert_eq!(stdout(&h).lines().collect::<Vec<_>>(), ["0", "1", "3/2", "11/6"]);
}

#[test]
fn seq_stirling_triangle_is_tab_separated() {
    let o = hseries(&["seq", "stirling", "4"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3], "0\t1\t3\t1");
}

fn transform_file(kind: &str, input: &str, extra: &[&str]) -> Output {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(input.as_bytes()).unwrap();
    let path = f.path().to_str().unwrap().to_string();
    let mut args = vec!["transform", kind, "--input", path.as_str()];
    args.extend_from_slice(extra);
    hseries(&args)
}

#[test]
fn transform_binomial_of_ones() {
    let o = transform_file("binomial", "# constant sequence\n1\n1\n1\n1\n", &[]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["1", "0", "0", "0"]);
}

#[test]
fn transform_round_trip_and_euler() {
    let o = transform_file("inverse-binomial", "1\n1/2\n1/3\n1/4\n", &[]);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["1", "1/2", "1/3", "1/4"]);
    let o = transform_file("euler", "0\n1\n1/2\n1/3\n", &["--lambda", "1", "--mu", "-1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["0", "-1", "-3/2", "-11/6"]);
}

#[test]
fn verify_json_schema() {
    let o = hseries(&["verify", "--ids", "EQ1", "--order", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let want: BTreeSet<&str> =
        ["identity", "paper_eq", "order", "compared_order", "status", "first_mismatch", "millis"].into();
    assert_eq!(keys, want);
    assert_eq!(v["identity"], "EQ1");
    assert_eq!(v["status"], "pass");
    assert!(v["first_mismatch"].is_null());
}

fn status_set_text(out: &str) -> BTreeSet<(String, String)> {
    out.lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .map(|l| {
            let mut w = l.split_whitespace();
            let status = w.next().unwrap().to_lowercase();
            (w.next().unwrap().to_string(), status)
        })
        .collect()
}

fn status_set_json(out: &str) -> BTreeSet<(String, String)> {
    out.lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            (v["identity"].as_str().unwrap().to_string(), v["status"].as_str().unwrap().to_string())
        })
        .collect()
}

#[test]
fn text_and_json_agree_on_pass_fail() {
    for extra in [&[][..], &["--perturb", "bell=2"][..]] {
        let mut base = vec!["verify", "--order", "8", "--parallelism", "4"];
        base.extend_from_slice(extra);
        let text = hseries(&base);
        let mut json_args = base.clone();
        json_args.extend_from_slice(&["--format", "json"]);
        let json = hseries(&json_args);
        assert_eq!(text.status.code(), json.status.code());
        let a = status_set_text(&stdout(&text));
        assert!(a.len() >= 55);
        assert_eq!(a, status_set_json(&stdout(&json)));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(hseries(&["verify", "--ids", "EQ1,EQ12", "-n", "6"]).status.code(), Some(0));
    let fault = hseries(&["verify", "-n", "8", "--perturb", "fibonacci=0,2"]);
    assert_eq!(fault.status.code(), Some(1));
    assert!(stdout(&fault).contains("FAIL"));
    assert_eq!(hseries(&["verify", "--perturb", "stirling=1,0,2", "-n", "8"]).status.code(), Some(1));
    assert_eq!(hseries(&["verify", "--ids", "EQ9999"]).status.code(), Some(2));
    assert_eq!(hseries(&["verify", "--order", "many"]).status.code(), Some(2));
    assert_eq!(hseries(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(transform_file("binomial", "1\nnot-a-number\n", &[]).status.code(), Some(2));
    let far = hseries(&["eval", "--ids", "EQ1", "--point", "0.3,0,0,0.3"]);
    assert_eq!(far.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&far.stderr).contains("domain"));
}

#[test]
fn eval_and_accel_csv() {
    let o = hseries(&["eval", "--ids", "EQ1,EQ40-MEHLER", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "identity,x,y,z,t,truncation,lhs,rhs,absdiff");
    for line in lines {
        let absdiff: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(absdiff < 1e-10, "{line}");
    }
    let o = hseries(&["accel", "--ids", "EQ19", "--point", "0.5,0,0,0.2", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn list_shows_catalogue() {
    let o = hseries(&["list", "--format", "json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().count() >= 55);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert!(first["kind"].is_string());
}
