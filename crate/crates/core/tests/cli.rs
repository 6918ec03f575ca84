use std::fs;
use std::path::Path;
use std::process::Command;

fn embeval() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_embeval"));
    c.env_remove("EMBEVAL_JOBS");
    c
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = walk(dir)
        .into_iter()
        .map(|p| (p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn gen_fixtures_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["a", "b"] {
        let status = embeval()
            .args(["gen-fixtures", "--seed", "11", "--out"])
            .arg(dir.path().join(sub))
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    }
    let a = read_dir_sorted(&dir.path().join("a"));
    assert!(a.iter().any(|(n, _)| n.ends_with("analogy.txt")));
    assert_eq!(a, read_dir_sorted(&dir.path().join("b")));
}

#[test]
fn inspect_vectors_prints_both_norms() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("v.txt");
    fs::write(&p, "x 3 4\ny 0 2\n").unwrap();
    let out = embeval().arg("inspect-vectors").arg(&p).arg("x").output().unwrap();
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("x\t5.000000"), "{s}");
    assert!(s.contains("y\t2.000000"), "{s}");
    assert!(s.contains("x: y 0.8000"), "{s}");
}

fn write_run(dir: &Path, extra: &str) -> std::path::PathBuf {
    fs::write(dir.join("v.txt"), "a 1 0\nb 0.9 0.1\nc 0 1\nd 0.2 0.9\n").unwrap();
    fs::write(dir.join("ws.txt"), "a b 9\nc d 8\na c 1\nb d 2\n").unwrap();
    let cfg = format!(
        "[[model]]\nname = \"m\"\npath = \"v.txt\"\n[[dataset]]\nname = \"ws\"\nkind = \"similarity\"\npath = \"ws.txt\"\n{extra}"
    );
    let p = dir.join("run.toml");
    fs::write(&p, cfg).unwrap();
    p
}

#[test]
fn eval_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write_run(dir.path(), "[[task]]\ndataset = \"ws\"\n");
    let out = embeval()
        .args(["eval", "--jobs", "1", "--config"])
        .arg(&ok)
        .arg("--out")
        .arg(dir.path().join("r"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("r/manifest.json").exists());

    // no tasks: a config error
    let empty = write_run(dir.path(), "");
    let out = embeval().args(["eval", "--config"]).arg(&empty).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // missing dataset file: an input error naming the file
    let missing = write_run(dir.path(), "[[task]]\ndataset = \"ws\"\n");
    fs::remove_file(dir.path().join("ws.txt")).unwrap();
    let out = embeval().args(["eval", "--config"]).arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ws.txt"));

    // evaluator failure: reports are written, exit 4
    let failing = write_run(dir.path(), "[[task]]\ndataset = \"ws\"\n");
    fs::write(dir.path().join("ws.txt"), "a zz 1\nb yy 2\n").unwrap();
    let out = embeval()
        .args(["eval", "--config"])
        .arg(&failing)
        .arg("--out")
        .arg(dir.path().join("f"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(dir.path().join("f/scores.json").exists());
}

#[test]
fn jobs_env_var_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_run(dir.path(), "[[task]]\ndataset = \"ws\"\n");
    let out = embeval()
        .env("EMBEVAL_JOBS", "0")
        .args(["eval", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("r"))
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
    let out = embeval()
        .env("EMBEVAL_JOBS", "3")
        .args(["eval", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("r"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn correlate_reads_a_score_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    fs::write(
        &p,
        "model,metric,kind,direction,value\n\
         m1,ws,intrinsic,higher,0.1\nm1,ppl,extrinsic,lower,30\n\
         m2,ws,intrinsic,higher,0.2\nm2,ppl,extrinsic,lower,20\n\
         m3,ws,intrinsic,higher,0.3\nm3,ppl,extrinsic,lower,10\n",
    )
    .unwrap();
    let out = embeval().arg("correlate").arg(&p).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "intrinsic,ppl,n:ppl\nws,1,3\n");
}
