// Analogy questions `a : a* :: b : ?` with 3CosAdd and 3CosMul.

use embeval::intrinsic::{eval_analogy, solve_analogy, AnalogyMethod};
use embeval::synthgen::{generate, Gold, PlantedSpec, Structure};

pub fn run_example() -> embeval::Result<()> {
    let spec = PlantedSpec::new(
        7,
        120,
        80,
        Structure::AnalogyOffsets {
            relations: 3,
            questions: 150,
        },
    );
    let f = generate(&spec)?;
    let Gold::Analogy(ds) = &f.gold else { unreachable!() };

    let (_, q) = ds.questions().next().expect("questions");
    let answer = solve_analogy(&f.store, &q.a, &q.a_star, &q.b, AnalogyMethod::CosAdd)?;
    println!("{} : {} :: {} : {}", q.a, q.a_star, q.b, answer);

    for method in [AnalogyMethod::CosAdd, AnalogyMethod::cos_mul()] {
        let s = eval_analogy(&f.store, ds, method)?;
        println!("{:<8} accuracy {:.4} over {} questions", method.name(), s.primary, ds.len());
        for (name, v) in s.components.iter().filter(|(k, _)| k.starts_with("section:")) {
            println!("  {name} {v:.4}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
