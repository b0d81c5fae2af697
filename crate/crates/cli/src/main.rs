use clap::Parser;

use posmaps_cli::{run, RunConfig};

fn main() {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            // Usage errors share exit code 1 with other parse errors; 2 is
            // reserved for unmet certificate preconditions.
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    std::process::exit(run(&cfg));
}
