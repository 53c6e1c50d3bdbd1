//! Behavior of the command-line surface: exit codes, file emission,
//! configuration handling.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vortex-modes"))
}

fn temp_dir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("vortex-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn check_passes_on_fresh_build() {
    let output = bin().arg("check").output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("all passed"), "{stdout}");
}

#[test]
fn check_json_is_machine_readable() {
    let output = bin().args(["check", "--json"]).output().unwrap();
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(report["results"].as_array().unwrap().len() >= 10);
}

#[test]
fn corrupted_kernel_branch_fails_check() {
    let output = bin().args(["check", "--inject-kernel-fault"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn solve_writes_stamped_outputs() {
    let dir = temp_dir("solve");
    let output = bin().args(["solve", "--eps", "0.1", "-o"]).arg(&dir).output().unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let eigen: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("eigen_0.1.json")).unwrap()).unwrap();
    assert_eq!(eigen["schema_version"], 1);
    assert!(eigen["config_hash"].as_str().unwrap().len() == 16);
    let residuals: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("residuals_0.1.json")).unwrap())
            .unwrap();
    for key in ["left_max", "right_max", "physical_max"] {
        assert!(residuals[key].as_f64().unwrap() < 1e-6);
    }
    let mode = std::fs::read_to_string(dir.join("mode_0.1.csv")).unwrap();
    assert!(mode.contains("# config_hash="));
    assert!(mode.contains("side,x,r,h,h_prime,f_star,w_n"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn invalid_config_exits_with_code_3() {
    let dir = temp_dir("badcfg");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "n = 4\nunknown_key = 1\n").unwrap();
    let output = bin().args(["solve", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown configuration key"), "{stderr}");

    std::fs::write(&cfg, "n = 1\n").unwrap();
    let output = bin().args(["solve", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_file_and_env_var_control_output_dir() {
    let dir = temp_dir("envout");
    let cfg_dir = temp_dir("envcfg");
    std::fs::create_dir_all(&cfg_dir).unwrap();
    let cfg = cfg_dir.join("run.conf");
    std::fs::write(&cfg, "epsilon = 0.1\n").unwrap();
    let output = bin()
        .args(["profile", "--dump", "--config"])
        .arg(&cfg)
        .env("VORTEX_MODES_OUT", &dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(dir.join("profile_0.1.csv").exists());
    let _ = std::fs::remove_dir_all(&dir);
    let _ = std::fs::remove_dir_all(&cfg_dir);
}

#[test]
fn figures_are_self_contained_svg() {
    let dir = temp_dir("figs");
    let output = bin().args(["figures", "--eps", "0.1", "-o"]).arg(&dir).output().unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    for name in ["profiles.svg", "c_gap.svg", "c_gap_zoom.svg", "mode_radial.svg", "mode_heatmap.svg"] {
        let svg = std::fs::read_to_string(dir.join(name)).unwrap();
        assert!(svg.starts_with("<svg"), "{name} is not an svg");
        assert!(svg.trim_end().ends_with("</svg>"), "{name} is truncated");
        assert!(!svg.contains("href"), "{name} references external assets");
    }
    // Deterministic figure bytes.
    let first = std::fs::read(dir.join("profiles.svg")).unwrap();
    let output = bin().args(["figures", "--eps", "0.1", "-o"]).arg(&dir).output().unwrap();
    assert!(output.status.success());
    let second = std::fs::read(dir.join("profiles.svg")).unwrap();
    assert_eq!(first, second);
    let _ = std::fs::remove_dir_all(&dir);
}
