// Generate fixtures, describe a run in TOML, and write the report bundle.

use std::fs;

use embeval::run::{run, RunConfig};
use embeval::synthgen::{generate, PlantedSpec, Structure};

pub fn run_example() -> embeval::Result<()> {
    let dir = tempfile::tempdir()?;
    for (name, seed) in [("model-a", 1), ("model-b", 2)] {
        let f = generate(&PlantedSpec::new(seed, 120, 12, Structure::SimilarityMonotone { pairs: 60 }))?;
        f.write_to(&dir.path().join(name))?;
    }
    let blobs = generate(&PlantedSpec::new(3, 120, 6, Structure::Blobs { k: 3, separation: 10.0 }))?;
    blobs.write_to(&dir.path().join("blobs"))?;

    let config = r#"
seed = 42
out = "reports"

[[model]]
name = "a"
path = "model-a/vectors.txt"

[[model]]
name = "b"
path = "model-b/vectors.txt"

[[dataset]]
name = "sim-a"
kind = "similarity"
path = "model-a/similarity.txt"

[[dataset]]
name = "categories"
kind = "categorization"
path = "blobs/categorization.txt"

[[task]]
dataset = "sim-a"

[[task]]
dataset = "categories"

[[external]]
model = "a"
metric = "sentiment"
value = 0.81

[[external]]
model = "b"
metric = "sentiment"
value = 0.77
"#;
    let path = dir.path().join("run.toml");
    fs::write(&path, config)?;
    let cfg = RunConfig::from_path(&path)?;
    let bundle = run(&cfg, 2)?;
    let out = cfg.out_dir().expect("out is set");
    for p in bundle.write(&out)? {
        println!("wrote {}", p.file_name().unwrap().to_string_lossy());
    }
    print!("{}", bundle.summary());
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
