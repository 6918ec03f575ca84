//! Acceptance checks. Each criterion runs under `catch_unwind` and reports
//! one PASS/FAIL line; the process exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng as _;

use embeval::analysis::{consistency_matrix, pearson, spearman, table_from_rows, MetricDescriptor, MetricKind};
use embeval::datasets::{parse_analogy, AnalogyFormat, LinguisticMatrix, OutlierDataset, OutlierGroup};
use embeval::extrinsic::{evaluate_tagging, train, TrainConfig, WindowTagger, WINDOW};
use embeval::intrinsic::{
    compactness, eval_analogy, eval_categorization, eval_outlier, eval_similarity, kmeans, qvec, solve_analogy,
    AnalogyMethod, SimTable,
};
use embeval::rng::{normal, seeded};
use embeval::run::{run, RunConfig};
use embeval::synthgen::{generate, Gold, PlantedSpec, Structure};
use embeval::vecstore::{load_binary_embeddings, store_binary_embeddings};
use embeval::{Direction, VecStore};

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn check(name: &'static str, f: impl FnOnce() -> String) -> Outcome {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    match result {
        Ok(detail) => Outcome {
            name,
            passed: true,
            detail,
            elapsed,
        },
        Err(e) => {
            let detail = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome {
                name,
                passed: false,
                detail,
                elapsed,
            }
        }
    }
}

fn gaussian_store(seed: u64, n: usize, dim: usize) -> VecStore {
    let mut rng = seeded(seed);
    let data: Vec<f64> = (0..n * dim).map(|_| normal(&mut rng)).collect();
    let words = (0..n).map(|i| format!("w{i}")).collect();
    VecStore::from_rows(words, data, dim).unwrap()
}

// ---------------------------------------------------------------------------
// 1

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn cos(u: &[f64], v: &[f64]) -> f64 {
    let d: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    d / (nu * nv)
}

/// Full scan over raw rows, query words excluded, ties to the lower index.
fn naive_analogy(store: &VecStore, q: [usize; 3], method: AnalogyMethod) -> usize {
    let [a, a_star, b] = q;
    let (ua, us, ub) = (unit(store.row(a)), unit(store.row(a_star)), unit(store.row(b)));
    let target: Vec<f64> = (0..store.dim()).map(|k| us[k] - ua[k] + ub[k]).collect();
    let mut best = (usize::MAX, f64::NEG_INFINITY);
    for c in 0..store.len() {
        if q.contains(&c) {
            continue;
        }
        let r = store.row(c);
        let score = match method {
            AnalogyMethod::CosAdd => cos(r, &target),
            AnalogyMethod::CosMul { epsilon } => {
                let s = |x: f64| (x + 1.0) / 2.0;
                s(cos(r, store.row(b))) * s(cos(r, store.row(a_star))) / (s(cos(r, store.row(a))) + epsilon)
            }
        };
        if score > best.1 {
            best = (c, score);
        }
    }
    best.0
}

fn criterion_1() -> String {
    let store = gaussian_store(1, 10_000, 50);
    let mut rng = seeded(2);
    let questions: Vec<[usize; 3]> = (0..200)
        .map(|_| loop {
            let q = [0, 1, 2].map(|_| rng.gen_range(0..store.len()));
            if q[0] != q[1] && q[1] != q[2] && q[0] != q[2] {
                break q;
            }
        })
        .collect();
    let start = Instant::now();
    let normalized = store.unit_normalize();
    let mut answers = Vec::new();
    for method in [AnalogyMethod::CosAdd, AnalogyMethod::cos_mul()] {
        for q in &questions {
            let w = |i: usize| store.word(i);
            answers.push(solve_analogy(&normalized, w(q[0]), w(q[1]), w(q[2]), method).unwrap());
        }
    }
    let solve_time = start.elapsed();
    assert!(solve_time < Duration::from_secs(10), "solving took {solve_time:?}");
    let mut agree = 0;
    let mut k = 0;
    for method in [AnalogyMethod::CosAdd, AnalogyMethod::cos_mul()] {
        for q in &questions {
            let expected = store.word(naive_analogy(&store, *q, method));
            assert_eq!(answers[k], expected, "{} on {:?}", method.name(), q);
            agree += 1;
            k += 1;
        }
    }
    format!("{agree}/400 answers agree, solver {:.2?}", solve_time)
}

// ---------------------------------------------------------------------------
// 2

fn criterion_2() -> String {
    let spec = PlantedSpec::new(3, 300, 16, Structure::SimilarityMonotone { pairs: 200 });
    let f = generate(&spec).unwrap();
    let Gold::Similarity(mut ds) = f.gold else { panic!("wrong gold") };
    let up = eval_similarity(&f.store, &ds).unwrap().primary;
    assert_eq!(up, 1.0);
    for p in &mut ds.pairs {
        p.gold = -p.gold;
    }
    let down = eval_similarity(&f.store, &ds).unwrap().primary;
    assert_eq!(down, -1.0);
    format!("spearman {up} / reversed {down}")
}

// ---------------------------------------------------------------------------
// 3

fn criterion_3() -> String {
    let spec = PlantedSpec::new(
        4,
        200,
        110,
        Structure::AnalogyOffsets {
            relations: 5,
            questions: 500,
        },
    );
    let f = generate(&spec).unwrap();
    let Gold::Analogy(mut ds) = f.gold else { panic!("wrong gold") };
    assert_eq!(ds.len(), 500);
    let add = eval_analogy(&f.store, &ds, AnalogyMethod::CosAdd).unwrap().primary;
    let mul = eval_analogy(&f.store, &ds, AnalogyMethod::cos_mul()).unwrap().primary;
    assert_eq!((add, mul), (1.0, 1.0));

    // Replace every tenth answer with another word of the same state.
    let mut k = 0;
    let mut corrupted = 0;
    for s in &mut ds.sections {
        let pool: Vec<String> = s.questions.iter().map(|q| q.b_star.clone()).collect();
        for q in &mut s.questions {
            if k % 10 == 0 {
                let other = pool.iter().find(|w| **w != q.b_star).expect("another target").clone();
                q.b_star = other;
                corrupted += 1;
            }
            k += 1;
        }
    }
    assert_eq!(corrupted, 50);
    let add_c = eval_analogy(&f.store, &ds, AnalogyMethod::CosAdd).unwrap().primary;
    let mul_c = eval_analogy(&f.store, &ds, AnalogyMethod::cos_mul()).unwrap().primary;
    assert_eq!((add_c, mul_c), (0.9, 0.9));
    format!("3CosAdd {add}, 3CosMul {mul}; corrupted {add_c}, {mul_c}")
}

// ---------------------------------------------------------------------------
// 4

fn criterion_4() -> String {
    let mut rng = seeded(5);
    for t in 0..1000 {
        let sim = SimTable::from_fn(8, |_, _| rng.gen_range(-1.0..1.0));
        let by_compactness = (0..8)
            .max_by(|&a, &b| compactness(&sim, a).unwrap().total_cmp(&compactness(&sim, b).unwrap()))
            .unwrap();
        let row_sum = |w: usize| (0..8).filter(|&j| j != w).map(|j| sim.get(w, j)).sum::<f64>();
        let by_row_sum = (0..8).min_by(|&a, &b| row_sum(a).total_cmp(&row_sum(b))).unwrap();
        assert_eq!(by_compactness, by_row_sum, "table {t}");
    }

    // Member k of a group is e0 + t_k e_{k+1}; cos(i, j) = f_i f_j with
    // f = 1/√(1 + t²), so a larger t means a lower row sum and a higher
    // compactness. The outlier's position is the number of words with a
    // smaller t.
    let positions = [7usize, 7, 7, 7, 7, 6, 5, 3, 0, 7];
    let mut pairs = Vec::new();
    let mut groups = Vec::new();
    for (g, &p) in positions.iter().enumerate() {
        let ts: Vec<f64> = (1..=8).map(|k| 0.1 * k as f64).collect();
        let outlier_t = ts[p];
        let member_ts: Vec<f64> = ts.iter().copied().filter(|&t| t != outlier_t).collect();
        let mut words = Vec::new();
        for (k, t) in member_ts.iter().chain(std::iter::once(&outlier_t)).enumerate() {
            let mut v = vec![0.0; 9];
            v[0] = 1.0;
            v[k + 1] = *t;
            let w = format!("g{g}w{k}");
            pairs.push((w.clone(), v));
            words.push(w);
        }
        groups.push(OutlierGroup::new(words, 7).unwrap());
    }
    let store = VecStore::from_pairs(pairs).unwrap();
    let ds = OutlierDataset {
        name: "tally".into(),
        groups,
    };
    let s = eval_outlier(&store, &ds).unwrap();
    // tally: 6 of 10 groups detected; OPP = (6·7 + 6 + 5 + 3 + 0) / 70 = 56/70
    assert_eq!(s.components["accuracy"], 0.6);
    assert!((s.components["opp"] - 56.0 / 70.0).abs() < 1e-15, "opp {}", s.components["opp"]);
    format!("1000/1000 tables agree; accuracy {} OPP {}", s.components["accuracy"], s.components["opp"])
}

// ---------------------------------------------------------------------------
// 5

fn best_two_partition(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    let wcss = |idx: &[usize]| -> f64 {
        if idx.is_empty() {
            return 0.0;
        }
        let d = points[0].len();
        let c: Vec<f64> = (0..d)
            .map(|k| idx.iter().map(|&i| points[i][k]).sum::<f64>() / idx.len() as f64)
            .collect();
        idx.iter()
            .map(|&i| points[i].iter().zip(&c).map(|(x, m)| (x - m) * (x - m)).sum::<f64>())
            .sum()
    };
    let mut best = f64::INFINITY;
    // point 0 always in side A; side B non-empty
    for mask in 1u32..(1 << (n - 1)) {
        let (mut a, mut b) = (vec![0], Vec::new());
        for i in 1..n {
            if mask & (1 << (i - 1)) != 0 {
                b.push(i);
            } else {
                a.push(i);
            }
        }
        best = best.min(wcss(&a) + wcss(&b));
    }
    best
}

fn criterion_5() -> String {
    let f = generate(&PlantedSpec::new(42, 90, 8, Structure::Blobs { k: 3, separation: 10.0 })).unwrap();
    let Gold::Categorization(ds) = f.gold else { panic!("wrong gold") };
    let purity = eval_categorization(&f.store, &ds).unwrap().primary;
    assert_eq!(purity, 1.0);

    // Two planted blobs, separation at least 10x the intra-cluster spread,
    // with uneven sizes and random placement.
    let mut rng = seeded(6);
    let mut worst: f64 = 0.0;
    for trial in 0..50 {
        let n = rng.gen_range(3..=12);
        let left = rng.gen_range(1..n);
        let dim = rng.gen_range(2..=4);
        let offset: Vec<f64> = (0..dim).map(|_| normal(&mut rng)).collect();
        let offset = unit(&offset);
        let spread = 0.1;
        let points: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let side = if i < left { 0.0 } else { 1.0 };
                (0..dim)
                    .map(|k| side * offset[k] * 10.0 * spread + spread * rng.gen_range(-0.5..0.5))
                    .collect()
            })
            .collect();
        let opt = best_two_partition(&points);
        let got = kmeans(&points, 2, 42, 10).unwrap().wcss;
        assert!((got - opt).abs() <= 1e-9, "trial {trial}: k-means {got} vs optimum {opt}");
        worst = worst.max((got - opt).abs());
    }
    format!("purity {purity}; 50 two-blob exhaustive checks, max gap {worst:.1e}")
}

// ---------------------------------------------------------------------------
// 6

fn as_linguistic(store: &VecStore, perm: &[usize]) -> LinguisticMatrix {
    let props = perm.iter().map(|j| format!("p{j}")).collect();
    let values = store.rows().flat_map(|r| perm.iter().map(move |&j| r[j])).collect();
    LinguisticMatrix::new(store.words().to_vec(), props, values).unwrap()
}

fn criterion_6() -> String {
    let x = gaussian_store(7, 40, 12);
    let identity: Vec<usize> = (0..12).collect();
    let q = qvec(&x, &as_linguistic(&x, &identity)).unwrap().primary;
    assert!((q - 12.0).abs() < 1e-9, "qvec(X, X) = {q}");
    let mut perm = identity.clone();
    perm.reverse();
    perm.swap(0, 5);
    let qp = qvec(&x, &as_linguistic(&x, &perm)).unwrap().primary;
    assert!((q - qp).abs() < 1e-12);

    // 3 words × 2 dims against 2 properties, by hand.
    let store = VecStore::from_pairs([("a", vec![1.0, 2.0]), ("b", vec![2.0, 1.0]), ("c", vec![4.0, 0.0])]).unwrap();
    let ling = LinguisticMatrix::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec!["s".into(), "t".into()],
        vec![0.0, 1.0, 1.0, 0.0, 1.0, 1.0],
    )
    .unwrap();
    let r = |x: [f64; 3], y: [f64; 3]| {
        let (mx, my) = (x.iter().sum::<f64>() / 3.0, y.iter().sum::<f64>() / 3.0);
        let sxy: f64 = (0..3).map(|i| (x[i] - mx) * (y[i] - my)).sum();
        let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
        let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
        sxy / (sxx * syy).sqrt()
    };
    let (d0, d1) = ([1.0, 2.0, 4.0], [2.0, 1.0, 0.0]);
    let (s, t) = ([0.0, 1.0, 1.0], [1.0, 0.0, 1.0]);
    let expected = r(d0, s).max(r(d0, t)) + r(d1, s).max(r(d1, t));
    let got = qvec(&store, &ling).unwrap().primary;
    assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    format!("qvec(X,X) = {q:.12}; 3x2 fixture {got:.12}")
}

// ---------------------------------------------------------------------------
// 7

fn criterion_7() -> String {
    let mut rng = seeded(8);
    let tags: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let input = WINDOW * 4;
    let t = WindowTagger::init(input, 8, tags, &mut rng);
    let batch: Vec<(Vec<f64>, usize)> = (0..10)
        .map(|_| ((0..input).map(|_| normal(&mut rng)).collect(), rng.gen_range(0..3)))
        .collect();
    let (_, g) = t.loss_and_gradients(&batch).unwrap();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for which in 0..4 {
        let len = [g.w1.len(), g.b1.len(), g.w2.len(), g.b2.len()][which];
        for i in 0..len {
            let shifted = |delta: f64| {
                let mut m = t.clone();
                let p = match which {
                    0 => &mut m.w1,
                    1 => &mut m.b1,
                    2 => &mut m.w2,
                    _ => &mut m.b2,
                };
                p[i] += delta;
                m.loss_and_gradients(&batch).unwrap().0
            };
            let numeric = (shifted(h) - shifted(-h)) / (2.0 * h);
            let analytic = [&g.w1, &g.b1, &g.w2, &g.b2][which][i];
            let rel = (numeric - analytic).abs() / (numeric.abs() + analytic.abs()).max(1e-6);
            assert!(rel < 1e-4, "tensor {which} entry {i}: {analytic} vs {numeric}");
            worst = worst.max(rel);
            checked += 1;
        }
    }

    let f = generate(&PlantedSpec::new(9, 1000, 50, Structure::SeparableTagging { sentences: 2000 })).unwrap();
    let Gold::Tagging { corpus, .. } = &f.gold else { panic!("wrong gold") };
    let start = Instant::now();
    let trained = train(&f.store, corpus, &TrainConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let acc = evaluate_tagging(&trained.tagger, &f.store, corpus).unwrap().token_accuracy;
    assert!(acc >= 0.99, "training accuracy {acc}");
    assert!(elapsed < Duration::from_secs(60), "training took {elapsed:?}");
    format!(
        "{checked} gradient entries, max rel err {worst:.1e}; accuracy {acc:.4} in {:.1?}",
        elapsed
    )
}

// ---------------------------------------------------------------------------
// 8

fn criterion_8() -> String {
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    assert!(close(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap(), 1.0));
    assert!(close(pearson(&[1.0, 2.0, 3.0], &[6.0, 4.0, 2.0]).unwrap(), -1.0));
    assert!(close(pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap(), 0.5));
    assert!(close(spearman(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap(), 1.0));
    assert!(close(spearman(&[1.0, 2.0, 3.0], &[6.0, 4.0, 2.0]).unwrap(), -1.0));
    assert!(close(spearman(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap(), 0.5));

    let mut rng = seeded(10);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(3..60);
        let x: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
        let y: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
        let (sa, sc) = (rng.gen::<bool>(), rng.gen::<bool>());
        let (mut a, mut c) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        if sa {
            a = -a;
        }
        if sc {
            c = -c;
        }
        let (b, d) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let ax: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let cy: Vec<f64> = y.iter().map(|v| c * v + d).collect();
        let r = pearson(&x, &y).unwrap();
        let r2 = pearson(&ax, &cy).unwrap();
        let expected = if (a < 0.0) != (c < 0.0) { -r } else { r };
        worst = worst.max((r2 - expected).abs());
        assert!((r2 - expected).abs() < 1e-12, "{r2} vs {expected}");
    }
    format!("closed forms exact; affine max err {worst:.1e}")
}

// ---------------------------------------------------------------------------
// 9

fn criterion_9() -> String {
    let n = 16;
    let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let mean = (n - 1) as f64 / 2.0;
    let pos: Vec<f64> = x.iter().map(|v| 0.5 + 0.01 * v).collect();
    let ner: Vec<f64> = x.iter().map(|v| (v - mean).powi(2)).collect();
    // Metrics planted against the "pos" column.
    let plus: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
    let minus: Vec<f64> = x.iter().map(|v| 2.0 - 3.0 * v).collect();
    // symmetric around the mean, so uncorrelated with anything linear in x
    let zero: Vec<f64> = ner.clone();

    let build = |ner_dir: Direction| {
        let metrics = vec![
            MetricDescriptor::new("plus", MetricKind::Intrinsic, Direction::HigherBetter),
            MetricDescriptor::new("minus", MetricKind::Intrinsic, Direction::HigherBetter),
            MetricDescriptor::new("zero", MetricKind::Intrinsic, Direction::HigherBetter),
            MetricDescriptor::new("pos", MetricKind::Extrinsic, Direction::HigherBetter),
            MetricDescriptor::new("ner", MetricKind::Extrinsic, ner_dir),
        ];
        let names: Vec<String> = (0..n).map(|i| format!("model{i}")).collect();
        let rows: Vec<(&str, Vec<Option<f64>>)> = (0..n)
            .map(|i| {
                (
                    names[i].as_str(),
                    vec![Some(plus[i]), Some(minus[i]), Some(zero[i]), Some(pos[i]), Some(ner[i])],
                )
            })
            .collect();
        consistency_matrix(&table_from_rows(&metrics, &rows).unwrap())
    };
    let m = build(Direction::HigherBetter);
    let planted = [("plus", 1.0), ("minus", -1.0), ("zero", 0.0)];
    for (row, want) in planted {
        let got = m.get(row, "pos").unwrap();
        assert!((got - want).abs() < 1e-12, "{row}/pos = {got}, planted {want}");
        assert_eq!(m.n[m.rows.iter().position(|r| r == row).unwrap()][0], 16);
    }
    let flipped = build(Direction::LowerBetter);
    for row in ["plus", "minus", "zero"] {
        assert_eq!(flipped.get(row, "pos"), m.get(row, "pos"));
        let (a, b) = (m.get(row, "ner").unwrap(), flipped.get(row, "ner").unwrap());
        assert_eq!(b, -a, "{row}/ner");
    }
    format!(
        "planted cells recovered; flip negates ner column ({:.3} -> {:.3})",
        m.get("zero", "ner").unwrap(),
        flipped.get("zero", "ner").unwrap()
    )
}

// ---------------------------------------------------------------------------
// 10

const GOOGLE_SECTIONS: [(&str, usize); 14] = [
    ("capital-common-countries", 506),
    ("capital-world", 4524),
    ("currency", 866),
    ("city-in-state", 2467),
    ("family", 506),
    ("gram1-adjective-to-adverb", 992),
    ("gram2-opposite", 812),
    ("gram3-comparative", 1332),
    ("gram4-superlative", 1122),
    ("gram5-present-participle", 1056),
    ("gram6-nationality-adjective", 1599),
    ("gram7-past-tense", 1560),
    ("gram8-plural", 1332),
    ("gram9-plural-verbs", 870),
];

fn criterion_10() -> String {
    let mut rng = seeded(11);
    for size in [1usize, 100, 10_000] {
        let dim = 16;
        // f32-exact values so the binary format loses nothing
        let data: Vec<f64> = (0..size * dim).map(|_| normal(&mut rng) as f32 as f64).collect();
        let words = (0..size).map(|i| format!("tok{i}")).collect();
        let store = VecStore::from_rows(words, data, dim).unwrap();
        let mut first = Vec::new();
        store_binary_embeddings(&store, &mut first).unwrap();
        let back = load_binary_embeddings(&first[..]).unwrap();
        assert_eq!(back, store, "size {size}");
        let mut second = Vec::new();
        store_binary_embeddings(&back, &mut second).unwrap();
        assert_eq!(first, second, "size {size}");
    }

    let mut text = String::new();
    for (name, count) in GOOGLE_SECTIONS {
        let _ = writeln!(text, ": {name}");
        for i in 0..count {
            let _ = writeln!(text, "a{i} b{i} c{i} d{i}");
        }
    }
    let ds = parse_analogy("google", &text, AnalogyFormat::Google).unwrap();
    assert_eq!(ds.len(), 19_544);
    assert_eq!(ds.split_counts(), (8_869, 10_675));
    "binary round-trips at 1/100/10000 bit-identical; 19544 = 8869 + 10675".into()
}

// ---------------------------------------------------------------------------
// 11

fn criterion_11() -> String {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let write = |name: &str, spec: PlantedSpec| generate(&spec).unwrap().write_to(&p.join(name)).unwrap();
    write("sim", PlantedSpec::new(1, 120, 24, Structure::SimilarityMonotone { pairs: 80 }));
    write("noise", PlantedSpec::new(2, 120, 24, Structure::Random));
    write("ana", PlantedSpec::new(3, 120, 100, Structure::AnalogyOffsets { relations: 3, questions: 90 }));
    write("blobs", PlantedSpec::new(4, 120, 24, Structure::Blobs { k: 4, separation: 10.0 }));
    write("out", PlantedSpec::new(5, 120, 24, Structure::OutlierGroups { groups: 10, group_size: 8 }));
    write("tag", PlantedSpec::new(6, 120, 24, Structure::SeparableTagging { sentences: 60 }));
    let config = r#"
seed = 42
formats = ["csv", "json"]

[[model]]
name = "sim"
path = "sim/vectors.txt"
[[model]]
name = "noise"
path = "noise/vectors.txt"
[[model]]
name = "blobs"
path = "blobs/vectors.txt"

[[dataset]]
name = "ws"
kind = "similarity"
path = "sim/similarity.txt"
[[dataset]]
name = "cats"
kind = "categorization"
path = "blobs/categorization.txt"
[[dataset]]
name = "odd"
kind = "outlier"
path = "out/outliers.txt"
[[dataset]]
name = "ana"
kind = "analogy"
path = "ana/analogy.txt"
[[dataset]]
name = "tags"
kind = "tagging"
path = "tag/tagging.conll"

[[task]]
dataset = "ws"
[[task]]
dataset = "cats"
[[task]]
dataset = "odd"
metric = "odd-opp"
component = "opp"
[[task]]
dataset = "ana"
method = "3cosmul"
[[task]]
dataset = "tags"
hidden = 16
epochs = 2

[[external]]
model = "sim"
metric = "ppl"
value = 30.5
direction = "lower"
[[external]]
model = "noise"
metric = "ppl"
value = 44.0
direction = "lower"
[[external]]
model = "blobs"
metric = "ppl"
value = 41.0
direction = "lower"
"#;
    let cfg_path = p.join("run.toml");
    std::fs::write(&cfg_path, config).unwrap();
    let cfg = RunConfig::from_path(&cfg_path).unwrap();
    let a = run(&cfg, 1).unwrap().render().unwrap();
    let b = run(&cfg, 3).unwrap().render().unwrap();
    assert_eq!(a.len(), b.len());
    for ((na, ba), (nb, bb)) in a.iter().zip(&b) {
        assert_eq!(na, nb);
        assert!(ba == bb, "{na} differs between runs");
    }
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    let distinct: HashSet<&str> = names.iter().copied().collect();
    assert_eq!(distinct.len(), names.len());
    format!("{} files byte-identical across runs (1 and 3 jobs)", a.len())
}

fn main() {
    let outcomes = [
        check("1 analogy oracle equivalence", criterion_1),
        check("2 planted similarity", criterion_2),
        check("3 planted analogy", criterion_3),
        check("4 outlier identity and tally", criterion_4),
        check("5 clustering", criterion_5),
        check("6 qvec", criterion_6),
        check("7 tagger gradients and training", criterion_7),
        check("8 statistics", criterion_8),
        check("9 consistency matrix", criterion_9),
        check("10 formats", criterion_10),
        check("11 determinism", criterion_11),
    ];
    for o in &outcomes {
        println!(
            "[{}] {} ({:.2?}): {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.elapsed,
            o.detail
        );
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
