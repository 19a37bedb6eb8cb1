//! Acceptance criteria on the reference parameters, one PASS/FAIL line each.
//! Runs without the libtest harness so the lines are never captured.

use jobswitch::Model;
use jobswitch_cli::acceptance::{run_all, Settings};

fn main() {
    let model = Model::reference();
    let scratch = tempfile::tempdir().expect("temporary directory");
    let results = match run_all(&model, &Settings::full(&model), scratch.path(), |c| println!("{}", c.line())) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL acceptance run aborted: {e}");
            std::process::exit(1);
        }
    };
    let failed: Vec<u8> = results.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    println!("acceptance: {} of {} criteria pass", results.len() - failed.len(), results.len());
    if results.len() != 8 || !failed.is_empty() {
        std::process::exit(1);
    }
}
