//! Builds a circuit document, renders it the way the CLI does, and runs it
//! through the same entry point as the `dgsim` binary.

use dgsim::cli::{self, CircuitDoc, InputDoc, MeasureDoc, CIRCUIT_SCHEMA};
use dgsim::unitary::Gate;

fn main() {
    let doc = CircuitDoc {
        schema: CIRCUIT_SCHEMA.into(),
        n: 2,
        input: InputDoc::Lambdas(vec![1.0, 1.0]),
        gates: vec![Gate::Matchgate { axes: [2, 3], angle: 0.5 }],
        measure: MeasureDoc { lines: vec![1, 2], x: Some("01".into()), shots: None, seed: None },
    };
    let text = cli::to_json(&doc).expect("finite document");
    println!("{text}");
    let path = std::env::temp_dir().join("dgsim-example-circuit.json");
    std::fs::write(&path, &text).expect("temp dir is writable");
    for args in [vec!["run"], vec!["oracle-verify"]] {
        let mut argv = vec!["dgsim"];
        argv.extend(args);
        argv.push(path.to_str().expect("utf-8 path"));
        let out = cli::execute(argv);
        println!("exit {}\n{}", out.code, out.stdout);
    }
}
