// Outlier detection with compactness scores: accuracy and OPP.

use embeval::datasets::{parse_outliers, OutlierFormat};
use embeval::intrinsic::{detect_outlier, eval_outlier};
use embeval::synthgen::{generate, Gold, PlantedSpec, Structure};

pub fn run_example() -> embeval::Result<()> {
    let f = generate(&PlantedSpec::new(
        3,
        80,
        20,
        Structure::OutlierGroups {
            groups: 10,
            group_size: 8,
        },
    ))?;
    let Gold::Outlier(ds) = &f.gold else { unreachable!() };

    // Round-trip through the cluster / outlier block grammar.
    let reparsed = parse_outliers("planted", &ds.to_text(), OutlierFormat::WordSim500)?;
    let first = detect_outlier(&f.store, &reparsed.groups[0])?.expect("in vocabulary");
    println!(
        "group 0: outlier {} at position {}/{}",
        reparsed.groups[0].outlier_word(),
        first.position,
        first.n
    );

    let s = eval_outlier(&f.store, &reparsed)?;
    println!("accuracy {:.4}, OPP {:.4}", s.components["accuracy"], s.components["opp"]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
