use hypgrowth_cli::config::RunConfig;
use hypgrowth_cli::record::strip_runtime;
use proptest::prelude::*;
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["hypgrowth"];
    full.extend_from_slice(args);
    let code = hypgrowth_cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn record(out: &str) -> Value {
    serde_json::from_str(out.trim()).unwrap()
}

#[test]
fn growth_writes_csv_and_one_record() {
    let dir = std::env::temp_dir().join(format!("hypgrowth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("g.csv");
    let (code, out, _) = cli(&["growth", "--model", "f2", "--gens", "a,b", "--depth", "3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
    let r = record(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "growth");
    assert_eq!(r["ledger"]["a_den"], 33762);
    assert_eq!(r["payload"]["table"]["balls"], serde_json::json!([1, 5, 17, 53]));
    assert!(r["config"].get("shards").is_none());
    assert_eq!(
        std::fs::read_to_string(&csv).unwrap(),
        "n,sphere,ball\n0,1,1\n1,4,5\n2,12,17\n3,36,53\n"
    );
}

#[test]
fn exit_codes() {
    let (code, out, err) = cli(&["growth", "--gens", "a,b)"]);
    assert_eq!((code, out.as_str()), (1, ""));
    assert!(err.contains("position 3"), "{err}");
    assert_eq!(cli(&["growth", "--model", "fp:2,x"]).0, 1);
    assert_eq!(cli(&["no-such-command"]).0, 1);
    let (code, out, _) = cli(&["audit", "--model", "f2", "--gens", "a"]);
    assert_eq!(code, 2);
    assert_eq!(record(&out)["payload"]["failed_stage"], "non-elementary");
    let (code, out, _) = cli(&["free-pair", "--gens", "a,aaa"]);
    assert_eq!(code, 2);
    assert!(record(&out)["error"].as_str().unwrap().starts_with("elementary"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = std::env::temp_dir().join(format!("hypgrowth-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(&path, "model = \"fp:2,3\"\ndepth = 2\nconstants-D = 2\n").unwrap();
    let (code, out, _) = cli(&["growth", "--model", "f2", "--depth", "5", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = record(&out);
    assert_eq!(r["config"]["model"], "fp:2,3");
    assert_eq!(r["ledger"]["D"], 2);
    assert_eq!(r["payload"]["table"]["balls"], serde_json::json!([1, 4, 8]));
    std::fs::write(&path, "modle = \"f2\"\n").unwrap();
    let (code, _, err) = cli(&["growth", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown field"), "{err}");
}

#[test]
fn limit_command() {
    let (code, out, _) = cli(&[
        "limit", "--model", "f2", "--templates", "a, a^n b A^n", "--length", "2", "--horizon", "8",
        "--relations", "abAB", "--limit-model", "f2", "--depth", "4",
    ]);
    assert_eq!(code, 0);
    let r = record(&out);
    assert_eq!(r["payload"]["factoring"]["n0"], Value::Null);
    assert_eq!(r["payload"]["continuity"]["inequality_holds"], true);
    assert_eq!(cli(&["limit"]).0, 1);
}

#[test]
fn scans_plot_and_are_shard_independent() {
    let dir = std::env::temp_dir().join(format!("hypgrowth-plot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("xi.svg");
    let base = ["xi-scan", "--model", "f2", "--depth", "5", "--no-lower", "--plot", svg.to_str().unwrap()];
    let (code, one, _) = cli(&[&base[..], &["--shards", "1"]].concat());
    assert_eq!(code, 0);
    let (_, four, _) = cli(&[&base[..], &["--shards", "4"]].concat());
    assert_eq!(strip_runtime(&one), strip_runtime(&four));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let r = record(&one);
    assert_eq!(r["payload"]["rows"][0]["set"], serde_json::json!(["a", "b"]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn config_round_trips_through_toml(depth in 0usize..100, d in 1u64..5, seed in any::<u64>(), hyp in any::<bool>()) {
        let c = RunConfig {
            model: Some("fp:2,3".into()),
            depth: Some(depth),
            constants_d: Some(d),
            seed: Some(seed),
            require_hyperbolic: Some(hyp),
            ..RunConfig::default()
        };
        let text = toml::to_string(&c).unwrap();
        prop_assert_eq!(RunConfig::parse_toml(&text).unwrap(), c);
    }
}
