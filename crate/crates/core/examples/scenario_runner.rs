//! Run a TOML scenario and regenerate a table, as the CLI does.
use std::path::PathBuf;

use growthlab::scenario::{self, ScenarioConfig, Target};

fn main() -> growthlab::Result<()> {
    let dir = std::env::temp_dir().join("growthlab-example");
    let config_path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/digital.toml");

    let mut config = ScenarioConfig::load(&config_path)?;
    config.apply_seed_override()?;
    let manifest = scenario::run(&config, &dir.join("digital"))?;
    for file in &manifest.files {
        println!("{:<16} {:>7} bytes  {}", file.path, file.bytes, &file.sha256[..16]);
    }

    scenario::reproduce(Target::Table3, &dir.join("table3"))?;
    for check in scenario::reproduce_checks(Target::Table3)? {
        println!("{:<18} {:>12.2} {}", check.quantity, check.computed, if check.pass { "ok" } else { "off" });
    }
    println!("outputs in {}", dir.display());
    Ok(())
}
