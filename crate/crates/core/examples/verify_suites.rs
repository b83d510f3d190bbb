//! All construction checks at a reduced size, one line per suite.

use mukit::error::Result;
use mukit::verify::{verify_all, SuiteResult, VerifyConfig};

pub fn run_example() -> Result<Vec<SuiteResult>> {
    let cfg = VerifyConfig {
        instances: 3,
        probes: 200,
        index_n: 128,
        index_queries: 16,
        ..VerifyConfig::default()
    };
    let suites = verify_all(&cfg)?;
    for s in &suites {
        println!("{}", s.line());
    }
    Ok(suites)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
