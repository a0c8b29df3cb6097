//! End-to-end checks of the command-line interface and exit codes.

use std::process::Command;

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_spunnorm")
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn info_on_native_and_snappea() {
    for file in ["fig8.json", "fig8.tri"] {
        let out = Command::new(exe())
            .args(["info", &fixture(file)])
            .output()
            .unwrap();
        assert!(out.status.success(), "{file}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("tetrahedra: 2"));
        assert!(text.contains("b1 = 1"));
        assert!(text.contains("homological longitude (0, 1), order 1"));
    }
}

#[test]
fn surface_subcommand_oriented() {
    // The 2.5 vector in serialization order: q03^0 = q12^0 = q02^1 = 1.
    let vecfile = "/tmp/spunnorm_cli_vec.json";
    std::fs::write(vecfile, "[0,0,1,1,0,0,0,1,0,0,0,0]").unwrap();
    let out = Command::new(exe())
        .args([
            "surface",
            &fixture("fig8.json"),
            "--vector",
            vecfile,
            "--oriented",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["connected"], true);
    assert_eq!(json["orientable"], true);
    assert_eq!(json["euler"], -1);
    assert_eq!(json["boundary"], 3);
    assert_eq!(json["type"], "S_0,3");
    assert_eq!(json["embedded"], false);
    assert_eq!(json["ends_embedded"], false);
    assert_eq!(json["slopes"]["outward"][0][0], "2");
    assert_eq!(json["slopes"]["outward"][0][1], "1");
    assert_eq!(json["slopes"]["inward"][0][0], "-2");
    assert_eq!(json["slopes"]["inward"][0][1], "0");
}

#[test]
fn surface_subcommand_unoriented() {
    let vecfile = "/tmp/spunnorm_cli_uvec.json";
    std::fs::write(vecfile, "[0,0,2,0,1,0]").unwrap();
    let out = Command::new(exe())
        .args(["surface", &fixture("fig8.json"), "--vector", vecfile])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["type"], "N_2,1");
    assert_eq!(json["orientable"], false);
    assert_eq!(json["slopes"], serde_json::Value::Null);
}

#[test]
fn surface_rejects_bad_vectors() {
    let vecfile = "/tmp/spunnorm_cli_bad.json";
    // Wrong length.
    std::fs::write(vecfile, "[1,2,3]").unwrap();
    let out = Command::new(exe())
        .args(["surface", &fixture("fig8.json"), "--vector", vecfile])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Inadmissible: two kinds in one tetrahedron.
    std::fs::write(vecfile, "[1,1,0,0,0,0]").unwrap();
    let out = Command::new(exe())
        .args(["surface", &fixture("fig8.json"), "--vector", vecfile])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Admissible but not in the cone.
    std::fs::write(vecfile, "[1,0,0,0,0,0]").unwrap();
    let out = Command::new(exe())
        .args(["surface", &fixture("fig8.json"), "--vector", vecfile])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn normball_exit_codes() {
    // b1 = 1: exit 4 with the report still produced.
    let out = Command::new(exe())
        .args([
            "normball",
            &fixture("fig8.json"),
            "--json",
            "/tmp/spunnorm_cli_ball.json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string("/tmp/spunnorm_cli_ball.json").unwrap())
            .unwrap();
    assert_eq!(report["ball"]["kind"], "upper_bound");
    assert_eq!(report["ball"]["upper_bound"]["bound"], "1");

    // b1 = 2: certified branch, exit 0.
    let out = Command::new(exe())
        .args([
            "normball",
            &fixture("b1_2_example.json"),
            "--json",
            "/tmp/spunnorm_cli_ball2.json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // Invalid input: exit 2.
    std::fs::write("/tmp/spunnorm_cli_garbage.json", "{not json").unwrap();
    let out = Command::new(exe())
        .args(["normball", "/tmp/spunnorm_cli_garbage.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn angles_subcommand() {
    let out = Command::new(exe())
        .args(["angles", &fixture("fig8.json")])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("holonomy ledger"));
    assert!(text.contains("h(mu) = 0"));
}

#[test]
fn qtons_subcommand_with_index() {
    let out = Command::new(exe())
        .args(["qtons", &fixture("fig8.json"), "--index", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("qtons 3"));
    assert!(text.contains("S_0,3"));
    let out = Command::new(exe())
        .args(["qtons", &fixture("fig8.json"), "--index", "99"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
