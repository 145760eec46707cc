use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use usdl_trust_core::engine::{aggregate_trust, default_weight_profile, rank};
use usdl_trust_core::stad::{extract_profile, parse_document};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

fn trustctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trustctl"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn legal_weights(dir: &Path) -> PathBuf {
    let mut w: Value = serde_json::from_str(&default_weight_profile().to_json()).unwrap();
    w["name"] = "legal".into();
    for (_, v) in w["weights"].as_object_mut().unwrap() {
        *v = 0.0.into();
    }
    w["weights"]["LegalData"] = 1.0.into();
    let path = dir.join("legal.json");
    std::fs::write(&path, w.to_string()).unwrap();
    path
}

const PREFIXES: &str = "@prefix usdl: <https://vocab.example.org/usdl#> .\n\
@prefix usdl-trust: <https://vocab.example.org/usdl-trust#> .\n\
@prefix schema: <https://schema.org/> .\n";

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = trustctl(&["validate", arg(&fixture("acme.stad"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);

    let acme = std::fs::read_to_string(fixture("acme.stad")).unwrap();
    let truncated = dir.path().join("truncated.stad");
    std::fs::write(&truncated, &acme[..acme.len() / 2]).unwrap();
    let out = trustctl(&["validate", arg(&truncated)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_json(&out)["parse_error"]["code"].is_string());

    let broken = dir.path().join("broken.stad");
    std::fs::write(&broken, acme.replace("usdl-trust:standard \"ISO 14001\"", "schema:name \"x\"")).unwrap();
    let out = trustctl(&["validate", arg(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["errors"][0]["code"], "E101");

    let out = trustctl(&["validate", arg(&dir.path().join("missing.stad"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn score_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = trustctl(&["score", arg(&fixture("acme.stad"))]);
    assert_eq!(out.status.code(), Some(0));
    let profile = extract_profile(&parse_document(&std::fs::read_to_string(fixture("acme.stad")).unwrap()).unwrap()).unwrap();
    let offline = aggregate_trust(&profile, &default_weight_profile(), None, &[]).to_json();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), offline);

    let empty = dir.path().join("empty.stad");
    std::fs::write(&empty, format!("{PREFIXES}<https://e.example/p> a usdl:Provider .\n")).unwrap();
    let out = trustctl(&["score", arg(&empty)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"aggregate\":0.0000"));

    let weights = legal_weights(dir.path());
    let out = trustctl(&["score", arg(&fixture("legal-only.stad")), "--profile", arg(&weights)]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"aggregate\":1.0000"));
    assert_eq!(stdout_json(&out)["weight_profile"], "legal");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\":\"bad\",\"weights\":{\"LegalData\":2}}").unwrap();
    let out = trustctl(&["score", arg(&fixture("acme.stad")), "--profile", arg(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let out = trustctl(&["score", arg(&fixture("acme.stad")), "--profile", arg(&dir.path().join("none.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rank_matches_engine() {
    let out = trustctl(&["rank", arg(&fixtures())]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let got: Vec<&str> = v["ranking"].as_array().unwrap().iter().map(|r| r["provider_id"].as_str().unwrap()).collect();
    let reports: Vec<_> = ["acme.stad", "coatline.stad", "legal-only.stad"]
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(fixture(f)).unwrap();
            aggregate_trust(&extract_profile(&parse_document(&text).unwrap()).unwrap(), &default_weight_profile(), None, &[])
        })
        .collect();
    assert_eq!(got, rank(&reports));
}

#[test]
fn rank_ties_and_skips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["b.stad", "a.stad"] {
        std::fs::copy(fixture("coatline.stad"), dir.path().join(name)).unwrap();
    }
    for (name, iri) in [("z.stad", "https://a.example/p"), ("y.stad", "https://b.example/p")] {
        std::fs::write(dir.path().join(name), format!("{PREFIXES}<{iri}> a usdl:Provider .\n")).unwrap();
    }
    std::fs::write(dir.path().join("corrupt.stad"), "@prefix x: <oops").unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let out = trustctl(&["rank", arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("skipped") && stderr.contains("corrupt.stad"), "{stderr}");
    let rows = stdout_json(&out)["ranking"].as_array().unwrap().clone();
    let files: Vec<String> = rows
        .iter()
        .map(|r| Path::new(r["file"].as_str().unwrap()).file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(files, vec!["a.stad", "b.stad", "z.stad", "y.stad"]);
    assert_eq!(rows[0]["id"], rows[1]["id"]);
    assert_eq!(rows[0]["aggregate"], rows[1]["aggregate"]);
    assert_eq!(rows[2]["aggregate"], rows[3]["aggregate"]);

    let only_bad = tempfile::tempdir().unwrap();
    std::fs::write(only_bad.path().join("x.stad"), "garbage").unwrap();
    let out = trustctl(&["rank", arg(only_bad.path())]);
    assert_eq!(out.status.code(), Some(1));
    let out = trustctl(&["rank", arg(&only_bad.path().join("absent"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn diff_isolates_a_category() {
    let out = trustctl(&["diff", arg(&fixture("acme.stad")), arg(&fixture("acme.stad"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["aggregate_delta"].as_f64(), Some(0.0));
    assert!(v["categories"].as_array().unwrap().iter().all(|c| c["delta"].as_f64() == Some(0.0)));

    let dir = tempfile::tempdir().unwrap();
    let acme = std::fs::read_to_string(fixture("acme.stad")).unwrap();
    let start = acme.find("# Certificates").unwrap();
    let end = acme.find("# Customer references").unwrap();
    let stripped = acme[..start].to_string() + &acme[end..];
    let stripped = stripped.replace("    usdl-trust:hasCertification acme:iso9001 , acme:iso14001 ;\n", "");
    let minus = dir.path().join("minus.stad");
    std::fs::write(&minus, stripped).unwrap();
    let out = trustctl(&["diff", arg(&fixture("acme.stad")), arg(&minus)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    for c in v["categories"].as_array().unwrap() {
        let nonzero = c["delta"].as_f64() != Some(0.0);
        assert_eq!(nonzero, c["category"] == "Certification", "{c}");
    }
    assert!(v["aggregate_delta"].as_f64().unwrap() > 0.0);
}

#[test]
fn gen_corpus_is_deterministic_and_valid() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = trustctl(&["gen-corpus", "--n", "10", "--seed", "42", "--out", arg(dir.path())]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_json(&out)["n"], 10);
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 10);
    for name in &names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y);
        let out = trustctl(&["validate", arg(&a.path().join(name))]);
        assert_eq!(out.status.code(), Some(0));
    }

    let empty = tempfile::tempdir().unwrap();
    let out_dir = empty.path().join("corpus");
    let out = trustctl(&["gen-corpus", "--n", "0", "--seed", "1", "--out", arg(&out_dir)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&out_dir).unwrap().count(), 0);

    let prevalence = empty.path().join("p.json");
    std::fs::write(&prevalence, json!({"certifications": 0.0}).to_string()).unwrap();
    let none = empty.path().join("none");
    let out = trustctl(&["gen-corpus", "--n", "20", "--seed", "3", "--out", arg(&none), "--prevalence", arg(&prevalence)]);
    assert_eq!(out.status.code(), Some(0));
    for entry in std::fs::read_dir(&none).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        assert!(!text.contains("Certification"));
    }
    std::fs::write(&prevalence, json!({"certifications": 1.5}).to_string()).unwrap();
    let out = trustctl(&["gen-corpus", "--n", "1", "--seed", "3", "--out", arg(&none), "--prevalence", arg(&prevalence)]);
    assert_eq!(out.status.code(), Some(1));

    let help = trustctl(&["gen-corpus", "--help"]);
    let text = String::from_utf8_lossy(&help.stdout);
    assert!(text.contains("1-5 references") && text.contains("ChaCha8"));
}

fn http(port: u16, method: &str, path: &str, body: &str) -> (u16, String) {
    let mut stream = TcpStream::connect(("127.0.0.1", port)).unwrap();
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    let status = response.split(' ').nth(1).unwrap().parse().unwrap();
    let body = response.split("\r\n\r\n").nth(1).unwrap_or_default().to_string();
    (status, body)
}

#[test]
fn serve_accepts_registrations() {
    let store = tempfile::tempdir().unwrap();
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut child = Command::new(env!("CARGO_BIN_EXE_trustctl"))
        .args(["serve", "--port", &port.to_string()])
        .env("TRUSTCTL_STORE", store.path())
        .env("RUST_LOG", "warn")
        .spawn()
        .unwrap();
    let deadline = Instant::now() + Duration::from_secs(20);
    while TcpStream::connect(("127.0.0.1", port)).is_err() {
        assert!(Instant::now() < deadline, "service did not start");
        std::thread::sleep(Duration::from_millis(50));
    }
    let acme = std::fs::read_to_string(fixture("acme.stad")).unwrap();
    let (status, body) = http(port, "POST", "/providers", &acme);
    let (status_again, _) = http(port, "POST", "/providers", &acme);
    let (rank_status, _) = http(port, "GET", "/rank", "");
    child.kill().unwrap();
    child.wait().unwrap();
    assert_eq!(status, 201, "{body}");
    assert_eq!(status_again, 200);
    assert_eq!(rank_status, 200);
    assert!(store.path().join("providers").read_dir().unwrap().count() == 1);
}
