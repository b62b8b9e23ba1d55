use std::io::Write as _;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_kstab");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn kstab_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let out = Command::new(BIN).args(args).envs(env.iter().copied()).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn kstab(args: &[&str]) -> Run {
    kstab_env(args, &[])
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let r = kstab(&full);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).expect("valid json")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn sinv_qtilde_report() {
    let v = json(&["sinv", "--model", "bl_p3_quintic", "--divisor", "Qtilde", "--A", "1"]);
    assert_eq!(v["S"], "19/22");
    assert_eq!(v["beta"], "3/22");
    assert_eq!(v["verdict"], "positive");
    assert_eq!(v["chambers"].as_array().unwrap().len(), 2);
    assert_eq!(v["chambers"][1]["interval"], serde_json::json!(["1", "2"]));
    assert!(!v["references"].as_array().unwrap().is_empty());
}

#[test]
fn sinv_a_override_and_unstable_witness() {
    let v = json(&["sinv", "--model", "bl_p3_quintic", "--divisor", "E", "--A", "1/4"]);
    assert_eq!(v["beta"], "0");
    assert_eq!(v["verdict"], "semistable-boundary");
    // 1 + 1/44 > A = 1
    let v = json(&["sinv", "--model", "sing_line(12,1)", "--divisor", "E"]);
    assert_eq!(v["S"], "45/44");
    assert_eq!(v["verdict"], "unstable-witness");
}

#[test]
fn flag_sinv_values() {
    let v = json(&["flag-sinv", "--model", "bl_p3_quintic", "--surface", "dp4", "--curve", "L"]);
    assert_eq!(v["value"], "53/88");
    assert_eq!(v["chambers"][0]["cells"].as_array().unwrap().len(), 2);
    let v = json(&["flag-sinv", "--model", "bl_p3_quintic", "--surface", "quadric", "--curve", "f1 + f2"]);
    assert_eq!(v["value"], "1/2");
}

#[test]
fn zariski_report_is_certified() {
    let v = json(&["zariski", "--model", "dp4", "--class", "9/4 L - e1 - e2 - e3 - e4 - e5"]);
    assert_eq!(v["P"], "5/4 L - 1/2 e1 - 1/2 e2 - 1/2 e3 - 1/2 e4 - 1/2 e5");
    assert_eq!(v["vol"], "5/16");
    assert_eq!(v["N"][0]["coefficient"], "1/2");
    for p in v["pairings"].as_array().unwrap() {
        assert!(!p["P.C"].as_str().unwrap().starts_with('-'), "{p}");
    }
}

#[test]
fn zariski_rejects_non_pseudo_effective() {
    let r = kstab(&["zariski", "--model", "dp4", "--class", "-L"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not pseudo-effective"), "{}", r.stderr);
}

#[test]
fn lattice_commands() {
    let v = json(&["lattice", "primitive", "--gram", "22 0; 0 -2"]);
    assert_eq!(v["forced"], true);
    assert_eq!(v["isotropic_nonzero"], serde_json::json!([]));
    let v = json(&["lattice", "primitive", "--gram", "2 0; 0 -2"]);
    assert_eq!(v["forced"], false);
    let v = json(&["lattice", "disc", "--gram", "22 0; 0 -2"]);
    assert_eq!(v["factors"], serde_json::json!(["2", "22"]));
    assert_eq!(v["order"], "44");
    let v = json(&["lattice", "overlattices", "--gram", "2 0; 0 -2"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["overlattices"][1]["det"], "-1");
    let v = json(&["lattice", "saturate", "--gram", "22 11 6; 11 4 1; 6 1 -2", "--basis", "1 0 0; 0 1 0"]);
    assert_eq!(v["saturated"], true);
    let v = json(&["lattice", "saturate", "--gram", "22 11 6; 11 4 1; 6 1 -2", "--basis", "2 0 0; 0 1 0"]);
    assert_eq!(v["saturated"], false);
}

#[test]
fn lattice_search_reports_scope() {
    let v = json(&[
        "lattice",
        "search",
        "--form",
        "-8*a^2 + 28*a*b - 22*b^2 + 40",
        "--cmp",
        ">",
        "--box",
        "1..100,-100..-1",
    ]);
    assert_eq!(v["count"], 0);
    assert_eq!(v["scope"], "verified within box");
    let v = json(&["lattice", "search", "--form", "-22 + 28*c - 8*c^2", "--box", "-100..100"]);
    assert_eq!(v["solutions"], serde_json::json!([[2]]));
}

#[test]
fn enum_bound_env_var() {
    let r = kstab_env(&["lattice", "primitive", "--gram", "22 0; 0 -2"], &[("KSTAB_ENUM_BOUND", "10")]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    let r = kstab_env(&["lattice", "primitive", "--gram", "22 0; 0 -2"], &[("KSTAB_ENUM_BOUND", "many")]);
    assert_eq!(r.code, 64);
}

#[test]
fn nl_classify_double_tag() {
    let v = json(&["nl", "classify", "--h", "11", "--m", "4"]);
    assert_eq!(v["det"], "-33");
    assert_eq!(v["type"], "type-I");
    assert_eq!(v["bn_excluding"], true);
    assert_eq!(v["signature"], serde_json::json!([1, 1, 0]));
    let v = json(&["nl", "classify", "--h", "0", "--m", "-2"]);
    assert_eq!(v["bn_excluding"], false);
    assert_eq!(v["tags"], serde_json::json!(["nodal"]));
}

#[test]
fn toric_check_prism_file() {
    let f = temp_file("-1 -1 -1\n1 0 -1\n0 1 -1\n-1 -1 1\n1 0 1\n0 1 1\n");
    let v = json(&["toric", "check", "--vertices", f.path().to_str().unwrap()]);
    assert_eq!(v["reflexive"], true);
    assert_eq!(v["degree"], "18");
    assert_eq!(v["kps"], true);
    assert_eq!(v["barycenter"], serde_json::json!(["0", "0", "0"]));
    let bad = temp_file("1 2\n");
    assert_eq!(kstab(&["toric", "check", "--vertices", bad.path().to_str().unwrap()]).code, 2);
}

#[test]
fn models_list_and_show() {
    let v = json(&["models", "list"]);
    assert_eq!(v["models"].as_array().unwrap().len(), 6);
    let v = json(&["models", "show", "dp4"]);
    assert!(v["text"].as_str().unwrap().starts_with("kstab-model v1\n"));
}

#[test]
fn user_model_files_extend_but_do_not_shadow() {
    let text = json(&["models", "show", "bl_p3_quintic"])["text"].as_str().unwrap().to_string();
    let shadow = temp_file(&text);
    let r = kstab(&["sinv", "--model", shadow.path().to_str().unwrap(), "--divisor", "E"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("shadows"));
    let renamed = temp_file(&text.replace("name = bl_p3_quintic", "name = my_quintic"));
    let r = json(&["sinv", "--model", renamed.path().to_str().unwrap(), "--divisor", "Qtilde"]);
    assert_eq!(r["model"], "my_quintic");
    assert_eq!(r["S"], "19/22");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(kstab(&["bogus"]).code, 64);
    assert_eq!(kstab(&["sinv", "--model", "bl_p3_quintic"]).code, 64);
    assert_eq!(kstab(&["sinv", "--model", "bl_p3_quintic", "--divisor", "E", "--A", "x"]).code, 64);
    assert_eq!(kstab(&["lattice", "disc", "--gram", "1 two; 3 4"]).code, 64);
    assert_eq!(kstab(&["sinv", "--model", "no_such_model", "--divisor", "E"]).code, 64);
    assert_eq!(kstab(&["--help"]).code, 0);
}

#[test]
fn computation_errors_exit_2_with_structure() {
    let r = kstab(&["--json", "sinv", "--model", "bl_p3_quintic", "--divisor", "X"]);
    assert_eq!(r.code, 2);
    let v: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "kstab");
    assert_eq!(kstab(&["sinv", "--model", "sing_line(2,0)", "--divisor", "E"]).code, 2);
    assert_eq!(kstab(&["lattice", "disc", "--gram", "1 1; 1 1"]).code, 2);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["--json", "flag-sinv", "--model", "bl_p3_quintic", "--surface", "dp4", "--curve", "L - e1 - e2"],
        vec!["lattice", "overlattices", "--gram", "2 0; 0 -2"],
    ] {
        assert_eq!(kstab(&args).stdout, kstab(&args).stdout);
    }
}

#[test]
fn approx_column_is_opt_in() {
    let v = json(&["sinv", "--model", "bl_p3_quintic", "--divisor", "Qtilde"]);
    assert!(v.get("approx").is_none());
    let v = json(&["--approx", "sinv", "--model", "bl_p3_quintic", "--divisor", "Qtilde"]);
    assert_eq!(v["approx"]["S"], "0.863636364");
}

fn verify_rows(args: &[&str]) -> (i32, Vec<Value>) {
    let r = kstab(args);
    let v: Value = serde_json::from_str(&r.stdout).expect("json table");
    (r.code, v["rows"].as_array().unwrap().clone())
}

fn failing_checks(rows: &[Value]) -> Vec<String> {
    rows.iter()
        .filter(|r| r["status"] == "FAIL")
        .map(|r| r["check"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn verify_paper_table() {
    let (code, rows) = verify_rows(&["verify-paper", "--json"]);
    // The only mismatch is the flag on L - e1 - e2, whose recorded value comes
    // from cells that are not a Zariski decomposition.
    assert_eq!(failing_checks(&rows), vec!["flag S on dp4, Z = L - e1 - e2".to_string()]);
    assert_eq!(code, 1);
    let printed = rows
        .iter()
        .find(|r| r["check"].as_str().unwrap().contains("printed cells"))
        .unwrap();
    assert_eq!(printed["computed"], "29/44");
    assert_eq!(printed["status"], "NOTE");
}

#[test]
fn verify_paper_negative_control() {
    let text = json(&["models", "show", "bl_p3_quintic"])["text"].as_str().unwrap().to_string();
    assert!(text.contains("E E E = -18"));
    let perturbed = text
        .replace("name = bl_p3_quintic", "name = perturbed_quintic")
        .replace("E E E = -18", "E E E = -17");
    let f = temp_file(&perturbed);
    let (code, rows) = verify_rows(&["verify-paper", "--json", "--quintic-model", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let qtilde = rows.iter().find(|r| r["check"] == "S(Qtilde) on bl_p3_quintic").unwrap();
    assert_eq!(qtilde["status"], "FAIL");
    assert_eq!(qtilde["expected"], "19/22");
    assert_ne!(qtilde["computed"], "19/22");
}
