use std::path::PathBuf;
use std::process::{Command, Output};

fn qstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qstab"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("qstab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ghz_counts_per_factor() {
    let o = qstab(&["canonicalize", "--state", &data("ghz6.stab"), "--parts", "1/2/3", "--verify"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("counts") && l.contains("m_ABC=1")).count(), 2);
}

#[test]
fn pentagon_subcode_bound() {
    let o = qstab(&["channel", "--code", &data("pentagon_v0.code"), "--B", "1,2", "--C", "3,4,5", "--subcode"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Q_C >= 1 (log2 units)"));
    let o = qstab(&["channel", "--code", &data("pentagon_v1.code"), "--B", "1,2", "--C", "3,4,5", "--subcode"]);
    let out = stdout(&o);
    assert!(out.contains("C_B >= 1 (log2 units)") && out.contains("C_C >= 1 (log2 units)"));
}

#[test]
fn reports_survive_oracle_verify() {
    let state = scratch("r.stab");
    assert!(qstab(&["random-state", "--n", "5", "--d", "6", "--seed", "3", "--out", &state]).status.success());
    let nf = scratch("r.nf");
    let o = qstab(&["canonicalize", "--state", &state, "--parts", "1,2/3/4,5", "--out", &nf]);
    assert!(o.status.success());
    let o = qstab(&["oracle-verify", &nf]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let code = scratch("r.code");
    assert!(qstab(&["random-code", "--n", "4", "--k", "2", "--d", "3", "--seed", "5", "--out", &code]).status.success());
    let rep = scratch("r.chan");
    let choi = scratch("r.choi");
    let o = qstab(&["channel", "--code", &code, "--B", "1,3", "--C", "2,4", "--emit-choi", &choi, "--out", &rep]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&choi).unwrap().starts_with("QSTAB1 stabilizer"));
    let o = qstab(&["oracle-verify", &rep]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn tampered_report_fails() {
    let nf = scratch("bad.nf");
    let o = qstab(&["canonicalize", "--state", &data("ghz6.stab"), "--parts", "1/2/3", "--out", &nf]);
    assert!(o.status.success());
    let good = std::fs::read_to_string(&nf).unwrap();
    for (from, to) in [("S 1 2", "S 1 1"), ("m_ABC=1", "m_ABC=0")] {
        assert!(good.contains(from));
        std::fs::write(&nf, good.replacen(from, to, 1)).unwrap();
        let o = qstab(&["oracle-verify", &nf]);
        assert_eq!(o.status.code(), Some(1), "tampering `{from}` went unnoticed");
    }
}

#[test]
fn crt_split_writes_one_file_per_prime() {
    let prefix = scratch("split");
    let o = qstab(&["crt-decompose", "--state", &data("ghz6.stab"), "--out-prefix", &prefix]);
    assert!(o.status.success());
    for p in [2, 3] {
        let text = std::fs::read_to_string(format!("{prefix}.p{p}.stab")).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with(&format!("{p} 3 3")));
    }
}

#[test]
fn exit_codes() {
    // usage error
    assert_eq!(qstab(&["canonicalize"]).status.code(), Some(2));
    assert_eq!(qstab(&["no-such-verb"]).status.code(), Some(2));
    // domain error: D = 4 is not squarefree
    let o = qstab(&["random-state", "--n", "2", "--d", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("NotSquarefree"));
    // composite channel dimension
    let code = scratch("d6.code");
    std::fs::write(&code, "QSTAB1 code\n6 1\nCODING 1\n0 | 0 | 1\n").unwrap();
    let o = qstab(&["channel", "--code", &code, "--B", "1", "--C", ""]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("NonPrimeD"));
    // bad partition
    let o = qstab(&["canonicalize", "--state", &data("ghz6.stab"), "--parts", "1/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("InvalidPartition"));
}
