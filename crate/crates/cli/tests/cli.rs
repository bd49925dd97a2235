use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn loewner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loewner"))
        .args(args)
        .output()
        .expect("spawn loewner")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Numeric columns of a CSV file keyed by header name.
fn column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn trajectory_csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let out = loewner(&[
            "trajectory",
            "--z0",
            "0.5+0.4i",
            "--sign",
            "minus",
            "--T",
            "2",
            "--out",
            path_str(p),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn optimal_trajectory_residual_column() {
    let out = loewner(&["trajectory", "--z0", "0.5 + 0.4i", "--sign", "plus"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.starts_with("t,re,im,rho,phi_lifted,theta_driver,rho_closed,phi_closed,residual\n")
    );
    let residual = column(&text, "residual");
    assert_eq!(residual.len(), 5001);
    assert!(residual.iter().all(|r| *r < 1e-8));
}

#[test]
fn one_knot_driver_file() {
    let dir = tempfile::tempdir().unwrap();
    let driver = dir.path().join("drive.txt");
    fs::write(&driver, "# constant control\ninterp: constant\n0 1.5\n").unwrap();
    let out = loewner(&[
        "trajectory",
        "--z0",
        "0.3i",
        "--driver",
        path_str(&driver),
        "--T",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rho = column(&stdout(&out), "rho");
    assert!(rho.windows(2).all(|w| w[1] < w[0]));
    assert!(column(&stdout(&out), "theta_driver")
        .iter()
        .all(|&th| th == 1.5));
}

#[test]
fn chordal_zero_driver_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let driver = dir.path().join("zero.txt");
    fs::write(&driver, "0 0\n").unwrap();
    let out = loewner(&[
        "trajectory",
        "--mode",
        "halfplane",
        "--z0",
        "i",
        "--driver",
        path_str(&driver),
        "--T",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let (t, re, im) = (column(&text, "t"), column(&text, "re"), column(&text, "im"));
    for k in 0..t.len() {
        assert!(re[k].abs() < 1e-14);
        assert!((im[k] - (4.0 * t[k] + 1.0).sqrt()).abs() < 1e-10);
    }
}

#[test]
fn chordal_line_driver_reaches_target() {
    let out = loewner(&[
        "trajectory",
        "--mode",
        "halfplane",
        "--z0",
        "i",
        "--driver",
        "line",
        "--target",
        "3+2i",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let (re, im) = (column(&text, "re"), column(&text, "im"));
    assert!((re.last().unwrap() - 3.0).abs() < 1e-7);
    assert!((im.last().unwrap() - 2.0).abs() < 1e-7);
}

#[test]
fn region_svg_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("region.svg");
    let out = loewner(&[
        "region",
        "--z0",
        "0.7+0.65i",
        "--format",
        "svg",
        "--out",
        path_str(&svg),
    ]);
    assert_eq!(code(&out), 0);
    let summary = stdout(&out);
    assert!(summary.contains("is_convex: false"));
    assert!(summary.contains("origin_isolated: true"));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert!(text.trim_end().ends_with("</svg>"));
    assert!(text.contains("width=\"800\"") && text.contains("<polygon"));
    assert_eq!(text.matches('<').count(), text.matches('>').count());
}

#[test]
fn region_csv_to_stdout_and_summary_to_stderr() {
    let out = loewner(&["region", "--z0", "0.5+0.4i", "--samples", "64"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("t_param,re,im,rho,phi_lifted\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 64);
    let summary = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(summary.contains("is_convex: true"));
    assert!(summary.contains("t_max: inf"));
}

#[test]
fn region_at_origin_is_degenerate() {
    let out = loewner(&["region", "--z0", "0"]);
    assert_eq!(code(&out), 0);
    let summary = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(summary.contains("degenerate: true"));
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&loewner(&["region", "--z0", "1.2"])), 2);
    assert_eq!(code(&loewner(&["region", "--z0", "garbage"])), 2);
    assert_eq!(code(&loewner(&["region"])), 2);
    assert_eq!(
        code(&loewner(&[
            "trajectory",
            "--mode",
            "halfplane",
            "--z0",
            "-i",
            "--target",
            "2i"
        ])),
        2
    );
    assert_eq!(code(&loewner(&["verify", "--trials", "0"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n0.5 x\n").unwrap();
    assert_eq!(
        code(&loewner(&[
            "trajectory",
            "--z0",
            "0.5",
            "--driver",
            path_str(&bad)
        ])),
        2
    );
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        code(&loewner(&[
            "trajectory",
            "--z0",
            "0.5",
            "--driver",
            path_str(&missing)
        ])),
        3
    );
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(
        code(&loewner(&[
            "region",
            "--z0",
            "0.5",
            "--out",
            path_str(&unwritable)
        ])),
        3
    );
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = [
        "verify", "--z0", "0.5+0.4i", "--trials", "300", "--seed", "7",
    ];
    let first = loewner(&args);
    assert_eq!(code(&first), 0);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let second = loewner(&seq);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).ends_with("result: PASS\n"));

    let chordal = loewner(&["verify", "--mode", "halfplane", "--trials", "300"]);
    assert_eq!(code(&chordal), 0);
    assert!(stdout(&chordal).contains("containment_failures: 0"));
}

#[test]
fn verify_fails_on_violation() {
    // RK4 at step 0.5 leaves the optimal trajectories far off the boundary
    let out = loewner(&["verify", "--trials", "20", "--step", "0.5", "--tol", "1e-7"]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).ends_with("result: FAIL\n"));
    assert_eq!(code(&loewner(&["verify", "--trials", "20", "--tol=-1"])), 2);
}
