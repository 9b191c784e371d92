use std::path::Path;
use std::process::Command;

use sparsediv::cli::{run, EXIT_NO, EXIT_NOT_APPLICABLE, EXIT_OK, EXIT_USAGE};

fn sd(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sparsediv").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_then_div_recovers_quotient() {
    let dir = tempfile::tempdir().unwrap();
    for (ring, degree) in [("Fq:1000003", "1099511627776"), ("Fq:4611686018427387847", "1000000"), ("ZZ", "100000")] {
        let (code, _, err) = sd(&["gen", "--ring", ring, "--terms", "12", "--degree", degree, "--seed", "7", "--out-dir", p(dir.path())]);
        assert_eq!(code, EXIT_OK, "{err}");
        let f = dir.path().join("F.sp");
        let g = dir.path().join("G.sp");
        let (code, quotient, err) = sd(&["div", "--dividend", p(&f), "--divisor", p(&g), "--seed", "42"]);
        assert_eq!(code, EXIT_OK, "{ring}: {err}");
        assert_eq!(quotient, std::fs::read_to_string(dir.path().join("Q.sp")).unwrap(), "{ring}");
        let q = dir.path().join("Q.sp");
        let (code, out, _) = sd(&["verify", "--dividend", p(&f), "--divisor", p(&g), "--quotient", p(&q), "--seed", "1"]);
        assert_eq!((code, out.as_str()), (EXIT_OK, "true\n"));
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        sd(&["gen", "--ring", "Fq:65537", "--terms", "20", "--degree", "50000", "--seed", "3", "--out-dir", p(dir.path())]);
    }
    for name in ["F.sp", "G.sp", "Q.sp"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap());
    }
    let f = a.path().join("F.sp");
    let g = a.path().join("G.sp");
    let args = ["div", "--dividend", p(&f), "--divisor", p(&g), "--seed", "9", "--threads", "0"];
    assert_eq!(sd(&args), sd(&args));
    // Threads change scheduling, not the answer.
    let (_, threaded, _) = sd(&["div", "--dividend", p(&f), "--divisor", p(&g), "--seed", "9", "--threads", "3"]);
    assert_eq!(threaded, sd(&args).1);
}

#[test]
fn divides_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let n = 64;
    // F = X^{2n-1} - X^n - X^{n-1} + X^2 - X + 1, G = (1 - X) + X^{n-1} (1 - X)
    let f = write(d, "f.sp", &format!("Fq 1000003\n1 {}\n-1 {n}\n-1 {}\n1 2\n-1 1\n1 0\n", 2 * n - 1, n - 1));
    let g = write(d, "g.sp", &format!("Fq 1000003\n1 0\n-1 1\n1 {}\n-1 {n}\n", n - 1));
    let (oracle_code, _, _) = sd(&["oracle-div", "--dividend", &f, "--divisor", &g]);
    for budget in ["32", "100000"] {
        let (code, out, _) = sd(&["divides", "--dividend", &f, "--divisor", &g, "--budget", budget]);
        assert_eq!(code, oracle_code);
        assert_eq!(out, if code == EXIT_OK { "true\n" } else { "false\n" });
    }

    let f = write(d, "f2.sp", "Fq 1000003\n1 3\n-1 0\n");
    let g = write(d, "g2.sp", "Fq 1000003\n1 2\n-1 1\n1 0\n");
    assert_eq!(sd(&["divides", "--dividend", &f, "--divisor", &g]).0, EXIT_NO);

    let f = write(d, "f3.sp", "Fq 1000003\n1 100000000000\n1 0\n");
    let g: String = (0..21).map(|i| format!("1 {}\n", i as u64 * 1_000_000_000)).collect();
    let g = write(d, "g3.sp", &format!("Fq 1000003\n{g}"));
    let (code, out, _) = sd(&["divides", "--dividend", &f, "--divisor", &g]);
    assert_eq!((code, out.as_str()), (EXIT_NOT_APPLICABLE, "not-applicable\n"));

    let f = write(d, "f4.sp", "ZZ\n1 4\n-1 0\n");
    let g = write(d, "g4.sp", "ZZ\n1 2\n-1 0\n");
    assert_eq!(sd(&["divides", "--dividend", &f, "--divisor", &g]).0, EXIT_OK);
    let g = write(d, "g5.sp", "ZZ\n2 2\n-1 0\n");
    assert_eq!(sd(&["divides", "--dividend", &f, "--divisor", &g]).0, EXIT_NO);
}

#[test]
fn oracle_div_writes_quotient_and_remainder() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let f = write(d, "f.sp", "Fq 7\n1 5\n-1 0\n");
    let g = write(d, "g.sp", "Fq 7\n1 2\n1 0\n");
    let r = d.join("r.sp");
    let (code, q, _) = sd(&["oracle-div", "--dividend", &f, "--divisor", &g, "--remainder", p(&r)]);
    assert_eq!(code, EXIT_NO);
    // X^5 - 1 = (X^2 + 1)(X^3 - X) + (X - 1)
    assert_eq!(q, "Fq 7\n6 1\n1 3\n");
    assert_eq!(std::fs::read_to_string(r).unwrap(), "Fq 7\n6 0\n1 1\n");
}

#[test]
fn integer_division_with_signed_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let f = write(d, "f.sp", "ZZ\n2 4\n2 3\n3 1\n3 0\n");
    let g = write(d, "g.sp", "ZZ\n1 1\n1 0\n");
    let (code, q, _) = sd(&["div", "--dividend", &f, "--divisor", &g, "--seed", "5"]);
    assert_eq!((code, q.as_str()), (EXIT_OK, "ZZ\n3 0\n2 3\n"));
    let f = write(d, "f2.sp", "ZZ\n1 2\n-1 0\n");
    let g = write(d, "g2.sp", "ZZ\n1 1\n1 0\n");
    let (code, q, _) = sd(&["div", "--dividend", &f, "--divisor", &g, "--seed", "5"]);
    assert_eq!((code, q.as_str()), (EXIT_OK, "ZZ\n-1 0\n1 1\n"));
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let f = write(d, "f.sp", "Fq 101\n1 6\n1 0\n");
    let g = write(d, "g.sp", "Fq 101\n1 1\n-1 0\n");
    let (code, _, err) = sd(&["div", "--dividend", &f, "--divisor", &g, "--seed", "1"]);
    assert_eq!(code, EXIT_NO, "{err}");
    let q = write(d, "q.sp", "Fq 101\n1 5\n");
    let (code, out, _) = sd(&["verify", "--dividend", &f, "--divisor", &g, "--quotient", &q, "--seed", "1"]);
    assert_eq!((code, out.as_str()), (EXIT_NO, "false\n"));

    let bad = write(d, "bad.sp", "Fq 101\n1 2\noops 3\n");
    let (code, _, err) = sd(&["div", "--dividend", &bad, "--divisor", &g]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 3"), "{err}");

    let other = write(d, "other.sp", "Fq 103\n1 1\n");
    assert_eq!(sd(&["div", "--dividend", &f, "--divisor", &other]).0, EXIT_USAGE);
    assert_eq!(sd(&["div", "--dividend", &f]).0, EXIT_USAGE);
    assert_eq!(sd(&["div", "--dividend", &f, "--divisor", &g, "--epsilon", "2"]).0, EXIT_USAGE);
    assert_eq!(sd(&["--help"]).0, EXIT_OK);
}

#[test]
fn bench_emits_csv() {
    let (code, out, _) = sd(&["bench", "--terms", "4,8", "--log-degree", "16", "--reps", "1", "--seed", "2"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "T,logD,ring,algorithm,wall_ns,verified");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("4,16,Fq:") && lines[1].ends_with(",true"));
}

#[test]
fn binary_reports_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.sp", "Fq 7\n1 4\n-1 0\n");
    let g = write(dir.path(), "g.sp", "Fq 7\n1 2\n-1 0\n");
    let out = Command::new(env!("CARGO_BIN_EXE_sparsediv")).args(["divides", "--dividend", &f, "--divisor", &g]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "true\n");
    let out = Command::new(env!("CARGO_BIN_EXE_sparsediv")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
