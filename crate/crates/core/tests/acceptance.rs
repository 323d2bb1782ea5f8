use std::process::ExitCode;

use p3c_core::verify::{run_all, total_time};

fn main() -> ExitCode {
    let seed = std::env::var("P3C_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20240601);
    let results = run_all(seed);
    for r in &results {
        println!("{r}");
        for d in &r.details {
            println!("    {d}");
        }
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} of {} criteria pass ({:.1}s)", results.len() - failed, results.len(), total_time(&results).as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
