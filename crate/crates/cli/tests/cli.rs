use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use qalb_cli::run;

fn qalb(dir: &Path, args: &[&str]) -> i32 {
    let mut full = vec!["qalb".to_string()];
    full.extend(args.iter().map(|a| a.replace("{dir}", dir.to_str().unwrap())));
    run(full)
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn out(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[test]
fn classical_single_site_format_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qalb(d, &["classical", "--out", "{dir}/c.csv"]), 0);
    let text = std::fs::read_to_string(out(d, "c.csv")).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,f_0,f_1,f_2,rho,u_x"));
    assert_eq!(text.lines().count(), 1002);
    let numeric = regex_like_sci;
    for field in text.lines().nth(5).unwrap().split(',') {
        assert!(numeric(field), "{field}");
    }
    let meta = std::fs::read_to_string(out(d, "c.csv.meta")).unwrap();
    assert!(meta.contains(&format!("# artifact: qalb-cli {}", env!("CARGO_PKG_VERSION"))));
    assert!(meta.contains("\ntau = 1.0\n"));
}

/// `d.dddddddddddddddde[-]x` with 17 significant digits.
fn regex_like_sci(s: &str) -> bool {
    let Some((mant, exp)) = s.split_once('e') else { return false };
    let mant = mant.strip_prefix('-').unwrap_or(mant);
    let Some((int, frac)) = mant.split_once('.') else { return false };
    int.len() == 1 && frac.len() == 16 && exp.parse::<i32>().is_ok()
}

#[test]
fn rerun_from_sidecar_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qalb(d, &["bounds", "--set", "dt=1e-5", "--out", "{dir}/a.csv"]), 0);
    assert_eq!(qalb(d, &["bounds", "--config", "{dir}/a.csv.meta", "--out", "{dir}/b.csv"]), 0);
    for tag in ["", ".feasibility", ".epsilon"] {
        let a = std::fs::read(out(d, &format!("a{tag}.csv"))).unwrap();
        let b = std::fs::read(out(d, &format!("b{tag}.csv"))).unwrap();
        assert_eq!(a, b, "{tag}");
    }
}

#[test]
fn equilibrium_preset_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        qalb(d, &["classical", "--set", "f0=equilibrium", "--set", "steps=50", "--out", "{dir}/e.csv"]),
        0
    );
    let (h, rows) = read_csv(&out(d, "e.csv"));
    for name in ["f_0", "f_1", "f_2"] {
        let c = column(&h, &rows, name);
        assert!(c.iter().all(|&x| x == c[0]), "{name}");
    }
}

#[test]
fn stream_only_grid_permutes_columns() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "classical", "--set", "grid=8", "--set", "mode=stream-only", "--set", "init=random", "--set", "seed=5",
        "--set", "steps=10", "--out", "{dir}/g.csv",
    ];
    assert_eq!(qalb(d, &args), 0);
    let (h, rows) = read_csv(&out(d, "g.csv"));
    assert_eq!(rows.len(), 11 * 8);
    for name in ["f_0", "f_1", "f_2"] {
        let c = column(&h, &rows, name);
        let mut first: Vec<f64> = c[..8].to_vec();
        first.sort_by(f64::total_cmp);
        for block in c.chunks(8) {
            let mut b = block.to_vec();
            b.sort_by(f64::total_cmp);
            assert_eq!(b, first, "{name}");
        }
    }
}

#[test]
fn quantum_columns_and_shared_start() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qalb(d, &["quantum", "--set", "qc=2,3", "--set", "steps=20", "--out", "{dir}/q.csv"]), 0);
    let (h, rows) = read_csv(&out(d, "q.csv"));
    assert_eq!(rows.len(), 21);
    for qc in [2, 3] {
        for i in 0..3 {
            let a = column(&h, &rows, &format!("herm_qc{qc}_f_{i}"));
            let b = column(&h, &rows, &format!("nonherm_qc{qc}_f_{i}"));
            assert_eq!(a[0], b[0]);
        }
        let norms = column(&h, &rows, &format!("herm_qc{qc}_norm"));
        assert!(norms.windows(2).all(|w| (w[1] - w[0]).abs() <= 1e-9));
    }
}

#[test]
fn quantum_divergence_exit_code_keeps_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = qalb(d, &["quantum", "--set", "qc=2", "--set", "method=nonhermitian", "--out", "{dir}/q.csv"]);
    assert_eq!(code, 4);
    let (h, rows) = read_csv(&out(d, "q.csv"));
    assert_eq!(rows.len(), 1001);
    let flag = column(&h, &rows, "nonherm_qc2_diverged");
    let first = flag.iter().position(|&x| x == 1.0).unwrap();
    assert!(flag[first..].iter().all(|&x| x == 1.0));
    assert!(column(&h, &rows, "nonherm_qc2_relerr")[first] > 1.0);
    let meta = std::fs::read_to_string(out(d, "q.csv.meta")).unwrap();
    assert!(meta.contains(&format!("# note: nonherm_qc2 diverged at step {first}")));
}

#[test]
fn quantum_dimension_guard() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qalb(dir.path(), &["quantum", "--set", "qc=5", "--out", "{dir}/q.csv"]), 3);
    assert_eq!(
        qalb(dir.path(), &["quantum", "--set", "f0=0.5,0.5,0.5", "--out", "{dir}/q.csv"]),
        2
    );
}

#[test]
fn carleman_curves() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qalb(d, &["carleman", "--out", "{dir}/k.csv"]), 0);
    let (h, rows) = read_csv(&out(d, "k.csv"));
    let t = column(&h, &rows, "t");
    let o1 = column(&h, &rows, "order_1");
    for (x, y) in t.iter().zip(&o1) {
        assert!((y - 0.01 * (-x).exp()).abs() <= 1e-12);
    }
    let maxerr = |k: usize| column(&h, &rows, &format!("abserr_{k}")).into_iter().fold(0.0, f64::max);
    for k in 1..4 {
        assert!(maxerr(k + 1) < maxerr(k));
    }
    assert_eq!(qalb(d, &["carleman", "--set", "f0=0.5", "--out", "{dir}/k5.csv"]), 0);
    let (h5, rows5) = read_csv(&out(d, "k5.csv"));
    // Row 100 is t = 1.
    for k in 1..=4 {
        let small = column(&h, &rows, &format!("abserr_{k}"))[100];
        let big = column(&h5, &rows5, &format!("abserr_{k}"))[100];
        assert!(big >= 10.0 * small, "order {k}");
    }
}

#[test]
fn carleman_singular_time_is_a_guard() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qalb(dir.path(), &["carleman", "--set", "f0=2", "--out", "{dir}/k.csv"]), 3);
}

#[test]
fn streaming_demo_text() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qalb(d, &["streaming-demo", "--out", "{dir}/s.txt"]), 0);
    let text = std::fs::read_to_string(out(d, "s.txt")).unwrap();
    assert!(text.contains("\n3: 1 2 3 4 5 6 7 0\n"));
    assert!(text.contains("round trip +1 then -1 is the identity: true"));
    let moved: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("# D2Q9 compass"))
        .skip(1)
        .filter(|l| l.split_whitespace().nth(2) != Some("(1,3)"))
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(moved, ["Southwest", "West", "Northwest"]);
    assert_eq!(qalb(d, &["streaming-demo", "--set", "sites=6", "--out", "{dir}/s.txt"]), 2);
}

#[test]
fn complexity_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qalb(d, &["complexity", "--out", "{dir}/x.csv"]), 0);
    let (h, rows) = read_csv(&out(d, "x.csv"));
    let labels: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(labels[1], "X**");
    let qubits = column(&h, &rows, "qubits");
    assert_eq!(qubits[1], (9.0f64 * 256.0).log2() + 4.0);
    let meta = std::fs::read_to_string(out(d, "x.csv.meta")).unwrap();
    assert!(meta.contains("qubits for Re = 1e8: 6.0000000000000000e1"));
    assert_eq!(qalb(d, &["complexity", "--set", "q=8", "--out", "{dir}/x.csv"]), 2);
}

#[test]
fn bounds_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qalb(d, &["bounds", "--out", "{dir}/b.csv"]), 0);
    let (h, rows) = read_csv(&out(d, "b.csv"));
    assert_eq!(rows.len(), 2 * 21);
    assert!(column(&h, &rows, "abs_diff").iter().all(|&x| x <= 1e-10));
    let (_, feas) = read_csv(&out(d, "b.feasibility.csv"));
    let verdicts: BTreeMap<(String, String), String> = feas
        .iter()
        .map(|r| ((r[0].clone(), r[1].clone()), r[8].clone()))
        .collect();
    for v in ["inflate-c0", "inflate-a"] {
        assert_eq!(verdicts[&(v.to_string(), "9.9999999999999995e-7".to_string())], "feasible");
        assert_eq!(verdicts[&(v.to_string(), "1.0000000000000000e0".to_string())], "infeasible");
    }
    let (he, eps) = read_csv(&out(d, "b.epsilon.csv"));
    assert_eq!(eps.len(), 15);
    assert!(column(&he, &eps, "eps_n").iter().all(|&e| e <= 1.0));
}

#[test]
fn config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.cfg"), "tau = 1.0\ntua = 2\n").unwrap();
    std::fs::write(d.join("syntax.cfg"), "# fine\ntau 1.0\n").unwrap();
    std::fs::write(d.join("ok.cfg"), "tau = 0.9 # slower\nsteps = 3\n").unwrap();
    assert_eq!(qalb(d, &["classical", "--config", "{dir}/bad.cfg", "--out", "{dir}/o.csv"]), 2);
    assert_eq!(qalb(d, &["classical", "--config", "{dir}/syntax.cfg", "--out", "{dir}/o.csv"]), 2);
    assert_eq!(qalb(d, &["classical", "--config", "{dir}/missing.cfg", "--out", "{dir}/o.csv"]), 2);
    assert_eq!(qalb(d, &["classical", "--set", "tau", "--out", "{dir}/o.csv"]), 2);
    assert_eq!(qalb(d, &["classical", "--set", "tau=0.1", "--set", "dt=1", "--out", "{dir}/o.csv"]), 3);
    assert_eq!(qalb(d, &["classical"]), 2);
    assert_eq!(qalb(d, &["classical", "--config", "{dir}/ok.cfg", "--out", "{dir}/o.csv"]), 0);
    assert!(!d.join("never.csv").exists());
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_qalb");
    let status = |args: &[&str]| Command::new(bin).args(args).current_dir(dir.path()).status().unwrap().code();
    assert_eq!(status(&["complexity", "--out", "x.csv"]), Some(0));
    assert_eq!(status(&["complexity", "--set", "nope=1", "--out", "x.csv"]), Some(2));
    assert_eq!(status(&["bounds", "--keys"]), Some(0));
    assert_eq!(status(&["carleman", "--set", "f0=2", "--out", "k.csv"]), Some(3));
}
