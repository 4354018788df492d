use anyhow::Context;
use std::io::Write;

fn main() -> anyhow::Result<()> {
    let out = catlogic::cli::run(std::env::args());
    std::io::stdout().write_all(out.stdout.as_bytes()).context("writing report")?;
    std::io::stderr().write_all(out.stderr.as_bytes()).context("writing summary")?;
    std::process::exit(out.exit_code)
}
