use std::fs;
use std::path::Path;
use std::process::Command;

fn lab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_soliton-lab")).args(args).output().unwrap()
}

fn run_in(dir: &Path, command: &str, config: Option<&str>) -> (i32, String) {
    let out = dir.join(command);
    let mut args = vec![command.to_string(), "--out".into(), out.display().to_string(), "--seed".into(), "4".into()];
    if let Some(text) = config {
        let p = dir.join(format!("{command}.cfg"));
        fs::write(&p, text).unwrap();
        args.extend(["--config".into(), p.display().to_string()]);
    }
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = lab(&refs);
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn verify_line_cigar_passes_with_exact_edge_limit() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run_in(dir.path(), "verify", Some("stations = 20\n"));
    assert_eq!(code, 0, "{err}");
    let report = rows(&dir.path().join("verify/identity_report.csv"));
    let edge = report.iter().find(|r| r[0] == "edge_limit").unwrap();
    assert_eq!(edge[1].parse::<f64>().unwrap(), 0.0);
    assert!(report.iter().all(|r| r[4] == "true"));
}

#[test]
fn surface_flow_area_strictly_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run_in(dir.path(), "surface-flow", Some("i = 2\ncells = 64\n"));
    assert_eq!(code, 0, "{err}");
    let area: Vec<f64> = rows(&dir.path().join("surface-flow/trajectory.csv"))
        .iter()
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert!(area.len() > 10);
    assert!(area.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn manifest_lists_every_file_with_its_hash() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), "cone-angle", Some("s_max = 100\n")).0, 0);
    let out = dir.path().join("cone-angle");
    let manifest = fs::read_to_string(out.join("manifest.txt")).unwrap();
    let mut listed = Vec::new();
    for line in manifest.lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(f.len(), 3, "{line}");
        assert_eq!(fs::metadata(out.join(f[2])).unwrap().len().to_string(), f[1]);
        listed.push(f[2].to_string());
    }
    let mut on_disk: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.txt")
        .collect();
    on_disk.sort();
    assert_eq!(listed, on_disk);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "model = bryant\ns_max = 200\nstations = 30\n";
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    fs::create_dir_all(&a).unwrap();
    fs::create_dir_all(&b).unwrap();
    assert_eq!(run_in(&a, "verify", Some(cfg)).0, 0);
    assert_eq!(run_in(&b, "verify", Some(cfg)).0, 0);
    assert_eq!(
        fs::read(a.join("verify/manifest.txt")).unwrap(),
        fs::read(b.join("verify/manifest.txt")).unwrap()
    );
}

#[test]
fn config_errors_exit_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    for (cfg, needle) in [
        ("r_max = 50\nbogus = 1\n", "line 2"),
        ("r_max = -1\n", "line 1"),
        ("r_max 50\n", "line 1"),
        ("step = 1e-3\nstep = 1e-3\n", "line 2"),
    ] {
        let (code, err) = run_in(dir.path(), "cigar", Some(cfg));
        assert_eq!(code, 2, "{cfg}");
        assert!(err.contains(needle), "{err}");
    }
    let missing = dir.path().join("nope.cfg");
    let o = lab(&["cigar", "--config", missing.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(lab(&["not-a-command"]).status.code(), Some(2));
}

#[test]
fn failing_gate_exits_one() {
    // the bent wing on a short strip misses its identity gates
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run_in(dir.path(), "wing", Some("half_length = 6\nnodes_u = 97\nnodes_v = 49\n"));
    assert_eq!(code, 1, "{err}");
    let report = rows(&dir.path().join("wing/identity_report.csv"));
    assert!(report.iter().any(|r| r[4] == "false"));
    assert!(report.iter().any(|r| r[0] == "newton_residual" && r[4] == "true"));
}
