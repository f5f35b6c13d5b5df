use teleport_cli::commands::{bounds, concentrate, simulate_cmd, synthesize};
use teleport_cli::{ProblemSpec, ReportDoc};
use teleport_core::Method;

fn problem(text: &str) -> ProblemSpec {
    ProblemSpec::from_json(text).unwrap()
}

#[test]
fn reports_round_trip_through_json() {
    let p = problem(
        r#"{"d": 2, "spectrum": ["1/2", "1/3", 0.16666666666666666], "inputState": [[0.6, 0], [0, 0.8]], "seed": 9}"#,
    );
    let docs = [
        bounds(&p).unwrap(),
        synthesize(&p, Method::Auto, false).unwrap(),
        simulate_cmd(&p, Method::General, false, Some(7), None).unwrap(),
        concentrate("0.5,0.25,0.25", 3, 2).unwrap(),
    ];
    for doc in docs {
        let text = doc.to_json();
        let back = ReportDoc::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn problem_specs_round_trip() {
    let p = problem(r#"{"d": 3, "spectrum": [0.1, "1/3", "0.5666666666666667"], "trials": 4}"#);
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(ProblemSpec::from_json(&text).unwrap(), p);
}
