use std::fs;
use std::path::Path;
use std::process::Command;

fn brokenline(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_brokenline")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("brokenline-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).expect("csv written")
}

#[test]
fn reruns_into_different_directories_are_byte_identical() {
    let (a, b) = (scratch("a"), scratch("b"));
    for dir in [&a, &b] {
        let out = brokenline(&["specfun", "--out", dir.to_str().unwrap(), "--seed", "3", "--threads", "1"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let first = read(&a, "specfun.csv");
    assert!(first.lines().next().unwrap().starts_with('#'));
    assert!(!first.contains("# status: failed"));
    assert_eq!(first, read(&b, "specfun.csv"));
    let _ = fs::remove_dir_all(a);
    let _ = fs::remove_dir_all(b);
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = scratch("cfg");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    fs::write(&path, "no_such_key = 1\n").unwrap();
    let out = brokenline(&["run", "--config", path.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let _ = fs::remove_dir_all(dir);
}

#[test]
fn list_experiments_names_every_subcommand_target() {
    let out = brokenline(&["list-experiments"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["specfun", "appendix-exponents", "hh-strong", "tij-envelopes"] {
        assert!(text.contains(id), "missing {id}");
    }
}
