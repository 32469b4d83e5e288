mod support;

use serde_json::Value;
use support::{chunksel, data_str};

fn json(out: &support::Output) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn weight(report: &Value, id: &str) -> f64 {
    report["weights"][id].as_f64().unwrap()
}

#[test]
fn addition_report_flags_the_tie() {
    let r = json(&chunksel(
        &["select", "--technique", "addition", "--format", "json"],
        "",
    ));
    assert_eq!(r["strategy"], "simple-addition");
    assert_eq!(r["verification"]["verdict"]["status"], "refine-needed");
    assert_eq!(
        r["verification"]["top"],
        serde_json::json!(["misuse-cases", "nfr-framework"])
    );

    let text = chunksel(&["select", "--technique", "addition"], "");
    assert_eq!(text.code, 0);
    assert!(text.stdout.contains("total"));
    assert!(text.stdout.contains("guidance, formalism"));
}

#[test]
fn separation_flag_accepts_the_tie() {
    let r = json(&chunksel(
        &[
            "select",
            "--technique",
            "addition",
            "--separation",
            "2",
            "--format",
            "json",
        ],
        "",
    ));
    assert_eq!(r["verification"]["verdict"]["status"], "sufficient");
}

#[test]
fn exit_codes() {
    assert_eq!(chunksel(&["select", "--technique", "wsum"], "").code, 2);
    assert_eq!(chunksel(&["frobnicate"], "").code, 1);
    assert_eq!(chunksel(&["select", "--technique", "bogus"], "").code, 1);
    assert_eq!(
        chunksel(&["select", "--criteria", "/nonexistent/criteria.json"], "").code,
        2
    );
    assert_eq!(chunksel(&["--help"], "").code, 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = chunksel(&["select", "--criteria", bad.to_str().unwrap()], "");
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error:"));
}

#[test]
fn unknown_criterion_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    std::fs::write(&c, r#"[{"id": "no-such-thing", "direction": "maximize"}]"#).unwrap();
    let out = chunksel(&["select", "--criteria", c.to_str().unwrap()], "");
    assert_eq!(out.code, 2, "{}", out.stderr);
}

#[test]
fn repository_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let repo = dir.path().join("repo.json");
    let repo_s = repo.to_str().unwrap();
    assert_eq!(chunksel(&["repo", "init", repo_s], "").code, 0);
    assert_eq!(chunksel(&["repo", "init", repo_s], "").code, 1);
    assert_eq!(chunksel(&["repo", "init", repo_s, "--force"], "").code, 0);

    let chunk = dir.path().join("chunk.json");
    std::fs::write(
        &chunk,
        r#"{"id": "threat-modeling", "name": "Threat modeling", "valuations": {"impact": "high", "expertise": "normal"}}"#,
    )
    .unwrap();
    let added = chunksel(&["repo", "add", repo_s, chunk.to_str().unwrap()], "");
    assert_eq!(added.code, 0, "{}", added.stderr);
    assert!(added.stdout.contains("threat-modeling"));
    assert_eq!(chunksel(&["repo", "add", repo_s, chunk.to_str().unwrap()], "").code, 2);

    std::fs::write(
        &chunk,
        r#"{"id": "x", "name": "X", "valuations": {"impact": "enormous"}}"#,
    )
    .unwrap();
    assert_eq!(chunksel(&["repo", "add", repo_s, chunk.to_str().unwrap()], "").code, 2);

    let v = chunksel(&["repo", "validate", repo_s], "");
    assert_eq!(v.code, 0);
    assert!(v.stdout.contains("1 chunks over 29 characteristics"));
    let list = chunksel(&["--repo", repo_s, "repo", "list"], "");
    assert!(list.stdout.starts_with("threat-modeling\t"));

    let example = dir.path().join("example.json");
    assert_eq!(
        chunksel(&["repo", "init", example.to_str().unwrap(), "--example"], "").code,
        0
    );
    assert_eq!(
        std::fs::read_to_string(&example).unwrap(),
        chunksel_core::example::REPOSITORY_JSON
    );
}

#[test]
fn typology_export() {
    let count = |out: support::Output| {
        serde_json::from_str::<Value>(&out.stdout)
            .unwrap()
            .as_array()
            .unwrap()
            .len()
    };
    assert_eq!(count(chunksel(&["typology", "export"], "")), 29);
    assert_eq!(count(chunksel(&["typology", "export", "--from-repo"], "")), 32);
}

#[test]
fn profile_drives_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("profile.json");
    let p_s = p.to_str().unwrap();
    assert_eq!(chunksel(&["profile", "new", p_s], "").code, 0);
    assert_eq!(
        chunksel(&["profile", "set", p_s, "impact", "high", "--critical"], "").code,
        0
    );
    assert_eq!(chunksel(&["profile", "set", p_s, "expertise", "low"], "").code, 0);
    assert_eq!(chunksel(&["profile", "set", p_s, "impact", "colossal"], "").code, 2);
    assert_eq!(chunksel(&["profile", "set", p_s, "no-such", "x"], "").code, 2);

    let show = chunksel(&["profile", "show", p_s], "");
    assert!(show.stdout.contains(r#"impact = "high" (critical)"#));
    assert!(show.stdout.contains(r#"expertise = "low""#));

    let r = json(&chunksel(
        &[
            "select",
            "--technique",
            "addition",
            "--profile",
            p_s,
            "--format",
            "json",
        ],
        "",
    ));
    let candidates = r["candidates"].as_array().unwrap();
    assert_eq!(candidates.len(), 5);
    let top = candidates[0]["matches"].as_u64().unwrap();
    assert!(candidates.iter().all(|c| c["matches"].as_u64().unwrap() <= top));
}

#[test]
fn report_rerenders_saved_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let sel = chunksel(
        &[
            "select",
            "--technique",
            "electre",
            "--criteria",
            &data_str("criteria-full.json"),
            "--schedule",
            &data_str("schedule.json"),
            "--format",
            "json",
            "--out",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(sel.code, 0, "{}", sel.stderr);
    let saved = std::fs::read_to_string(&out).unwrap();
    let again = chunksel(&["report", "--input", out.to_str().unwrap(), "--format", "json"], "");
    assert_eq!(again.stdout, saved);
    let text = chunksel(&["report", "--input", out.to_str().unwrap()], "");
    assert!(text.stdout.contains("Concordance"), "{}", text.stdout);
    assert!(text.stdout.contains("nfr-framework"));
}

#[test]
fn interactive_smart_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("transcript.json");
    let t_s = t.to_str().unwrap();
    let out = chunksel(
        &[
            "select",
            "--technique",
            "wsum",
            "--elicit",
            "smart",
            "--save-transcript",
            t_s,
            "--format",
            "json",
        ],
        "sixty\n60\n40\n100\n",
    );
    let r = json(&out);
    assert!(out.stderr.contains("Importance of `impact`"));
    assert!(
        out.stderr.matches("Importance of `impact`").count() >= 2,
        "malformed answer is asked again"
    );
    for (id, w) in [("impact", 0.3), ("level-of-innovation", 0.2), ("expertise", 0.5)] {
        assert!((weight(&r, id) - w).abs() < 1e-9);
    }
    assert_eq!(r["ranking"]["entries"][0]["alternative"], "misuse-cases");

    let replayed = chunksel(
        &["select", "--technique", "wsum", "--transcript", t_s, "--format", "json"],
        "",
    );
    assert_eq!(replayed.code, 0, "{}", replayed.stderr);
    assert_eq!(replayed.stdout, out.stdout);
}

#[test]
fn interactive_swing_and_tradeoff() {
    let swing = json(&chunksel(
        &["select", "--technique", "wsum", "--elicit", "swing", "--format", "json"],
        "expertise, impact, level-of-innovation\n60\n40\n",
    ));
    for (id, w) in [("expertise", 0.5), ("impact", 0.3), ("level-of-innovation", 0.2)] {
        assert!((weight(&swing, id) - w).abs() < 1e-9, "{id}");
    }

    let out = chunksel(
        &[
            "select",
            "--technique",
            "wsum",
            "--elicit",
            "tradeoff",
            "--format",
            "json",
        ],
        "0.666666666666666667\n1.666666666666666667\nskip\n",
    );
    let r = json(&out);
    let sum: f64 = ["impact", "level-of-innovation", "expertise"]
        .iter()
        .map(|id| weight(&r, id))
        .sum();
    assert!((sum - 1.0).abs() < 1e-9);
}

#[test]
fn auto_picks_weighted_outranking_for_mixed_weighted_data() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(
        &w,
        r#"{"impact": 0.2, "level-of-innovation": 0.1, "expertise": 0.3, "guidance": 0.2, "approach": 0.1, "formalism": 0.1}"#,
    )
    .unwrap();
    let criteria = data_str("criteria-full.json");
    let r = json(&chunksel(
        &[
            "select",
            "--criteria",
            &criteria,
            "--weights",
            w.to_str().unwrap(),
            "--format",
            "json",
        ],
        "",
    ));
    assert_eq!(r["strategy"], "weighted-outranking");
    assert_eq!(r["recommendation"]["strategy"], "weighted-outranking");

    let plain = json(&chunksel(&["select", "--criteria", &criteria, "--format", "json"], ""));
    assert_eq!(plain["strategy"], "outranking");
    let quantified = json(&chunksel(&["select", "--format", "json"], ""));
    assert_eq!(quantified["strategy"], "simple-addition");
}
