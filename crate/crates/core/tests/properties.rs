use std::collections::HashSet;

use proptest::prelude::*;

use embeval::analysis::{consistency_matrix, pearson, spearman, table_from_rows, MetricDescriptor, MetricKind};
use embeval::datasets::{
    coverage, parse_analogy, parse_conll, parse_linguistic_matrix, parse_similarity, AnalogyDataset, AnalogyFormat,
    AnalogyQuestion, AnalogySection, LinguisticMatrix, SequenceCorpus, SimilarityDataset, SimilarityPair,
};
use embeval::extrinsic::WindowTagger;
use embeval::intrinsic::{compactness, SimTable};
use embeval::rng::seeded;
use embeval::synthgen::{generate, PlantedSpec, Structure};
use embeval::vecstore::{
    cosine, load_binary_embeddings, load_text_embeddings, store_binary_embeddings, store_text_embeddings, Header,
};
use embeval::{Direction, VecStore};

fn vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim)
}

fn nonzero(v: &[f64]) -> bool {
    v.iter().any(|x| x.abs() > 1e-3)
}

fn store(max_words: usize, dim: usize) -> impl Strategy<Value = VecStore> {
    prop::collection::vec(vector(dim).prop_filter("zero row", |v| nonzero(v)), 1..max_words).prop_map(move |rows| {
        let words = (0..rows.len()).map(|i| format!("w{i}")).collect();
        VecStore::from_rows(words, rows.concat(), dim).unwrap()
    })
}

fn word() -> impl Strategy<Value = String> {
    "[a-z]{1,8}"
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cosine_is_symmetric_and_scale_invariant(
        (u, v) in (1usize..12).prop_flat_map(|d| (vector(d), vector(d))),
        s in 0.01f64..100.0,
    ) {
        prop_assume!(nonzero(&u) && nonzero(&v));
        let c = cosine(&u, &v).unwrap();
        prop_assert_eq!(c, cosine(&v, &u).unwrap());
        let scaled: Vec<f64> = u.iter().map(|x| x * s).collect();
        prop_assert!(close(c, cosine(&scaled, &v).unwrap(), 1e-12));
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn nearest_matches_a_full_scan(s in store(40, 5), q in vector(5), k in 1usize..8, skip in 0usize..40) {
        prop_assume!(nonzero(&q));
        let excluded = format!("w{skip}");
        let exclude: HashSet<&str> = [excluded.as_str()].into();
        let got = s.nearest(&q, k, &exclude).unwrap();
        let mut scan: Vec<(f64, usize)> = (0..s.len())
            .filter(|&i| s.word(i) != excluded)
            .map(|i| (cosine(&q, s.row(i)).unwrap(), i))
            .collect();
        scan.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scan.truncate(k);
        prop_assert_eq!(got.len(), scan.len());
        for (n, (score, i)) in got.iter().zip(&scan) {
            prop_assert!(close(n.score, *score, 1e-12));
            if n.word != s.word(*i) {
                // only a near-tie may reorder
                let other = cosine(&q, s.row(s.index_of(&n.word).unwrap())).unwrap();
                prop_assert!(close(other, *score, 1e-12));
            }
        }
    }

    #[test]
    fn binary_round_trip_is_exact(s in store(30, 7)) {
        let f32_rows: Vec<f64> = s.rows().flat_map(|r| r.iter().map(|&x| x as f32 as f64)).collect();
        let s = VecStore::from_rows(s.words().to_vec(), f32_rows, s.dim()).unwrap();
        let mut bytes = Vec::new();
        store_binary_embeddings(&s, &mut bytes).unwrap();
        let back = load_binary_embeddings(&bytes[..]).unwrap();
        prop_assert_eq!(&back, &s);
        let mut again = Vec::new();
        store_binary_embeddings(&back, &mut again).unwrap();
        prop_assert_eq!(bytes, again);
    }

    #[test]
    fn text_round_trip_is_exact(s in store(30, 4), header in any::<bool>()) {
        let h = if header { Header::Present } else { Header::Absent };
        let mut bytes = Vec::new();
        store_text_embeddings(&s, h, &mut bytes).unwrap();
        prop_assert_eq!(load_text_embeddings(&bytes[..], h).unwrap(), s);
    }

    #[test]
    fn similarity_text_round_trips(pairs in prop::collection::vec((word(), word(), -10.0f64..10.0), 2..30)) {
        let ds = SimilarityDataset {
            name: "p".into(),
            pairs: pairs.into_iter().map(|(word1, word2, gold)| SimilarityPair { word1, word2, gold }).collect(),
        };
        prop_assert_eq!(parse_similarity("p", &ds.to_text()).unwrap(), ds);
    }

    #[test]
    fn analogy_text_round_trips(
        sections in prop::collection::vec(
            ("(gram)?[a-z]{1,6}", prop::collection::vec([word(), word(), word(), word()], 1..10)),
            1..5,
        ),
    ) {
        let ds = AnalogyDataset {
            name: "g".into(),
            format: AnalogyFormat::Google,
            sections: sections
                .into_iter()
                .map(|(name, qs)| AnalogySection {
                    name,
                    questions: qs
                        .into_iter()
                        .map(|[a, a_star, b, b_star]| AnalogyQuestion { a, a_star, b, b_star })
                        .collect(),
                })
                .collect(),
        };
        prop_assert_eq!(parse_analogy("g", &ds.to_text(), AnalogyFormat::Google).unwrap(), ds);
    }

    #[test]
    fn linguistic_matrix_round_trips(rows in 1usize..8, cols in 1usize..5, seed in any::<u64>()) {
        use rand::Rng as _;
        let mut rng = seeded(seed);
        let values = (0..rows * cols).map(|_| rng.gen_range(0.0..1.0)).collect();
        let m = LinguisticMatrix::new(
            (0..rows).map(|i| format!("w{i}")).collect(),
            (0..cols).map(|j| format!("p{j}")).collect(),
            values,
        )
        .unwrap();
        prop_assert_eq!(parse_linguistic_matrix(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn conll_round_trips(
        sents in prop::collection::vec(prop::collection::vec((word(), prop::sample::select(vec!["NN", "VB", "DT"])), 1..8), 1..8),
    ) {
        let sentences = sents.iter().map(|s| s.iter().map(|(w, _)| w.clone()).collect()).collect();
        let labels = sents.iter().map(|s| s.iter().map(|(_, t)| t.to_string()).collect()).collect();
        let corpus = SequenceCorpus::new(sentences, labels).unwrap();
        prop_assert_eq!(parse_conll(&corpus.to_text()).unwrap(), corpus);
    }

    #[test]
    fn coverage_never_drops_when_the_vocabulary_grows(
        keep in prop::collection::vec(any::<bool>(), 20),
        extra in prop::collection::vec(any::<bool>(), 20),
        pairs in prop::collection::vec((0usize..20, 0usize..20), 1..30),
    ) {
        let build = |mask: &dyn Fn(usize) -> bool| {
            let rows: Vec<(String, Vec<f64>)> =
                (0..20).filter(|&i| mask(i)).map(|i| (format!("w{i}"), vec![1.0, i as f64])).collect();
            VecStore::from_pairs(rows)
        };
        let ds = SimilarityDataset {
            name: "c".into(),
            pairs: pairs
                .iter()
                .map(|&(a, b)| SimilarityPair { word1: format!("w{a}"), word2: format!("w{b}"), gold: 0.0 })
                .collect(),
        };
        let (Ok(small), Ok(big)) = (build(&|i| keep[i]), build(&|i| keep[i] || extra[i])) else {
            return Ok(());
        };
        prop_assert!(coverage(&ds, &small).usable <= coverage(&ds, &big).usable);
    }

    #[test]
    fn pearson_is_affine_invariant(
        xy in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40),
        a in prop::sample::select(vec![-7.5, -0.3, 0.2, 4.0]),
        c in prop::sample::select(vec![-2.0, -0.5, 0.7, 9.0]),
        b in -50.0f64..50.0,
        d in -50.0f64..50.0,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        let Ok(r) = pearson(&x, &y) else { return Ok(()) };
        let ax: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let cy: Vec<f64> = y.iter().map(|v| c * v + d).collect();
        let r2 = pearson(&ax, &cy).unwrap();
        let expected = if (a < 0.0) != (c < 0.0) { -r } else { r };
        prop_assert!((r2 - expected).abs() < 1e-9, "{} vs {}", r2, expected);
    }

    #[test]
    fn spearman_ignores_monotone_transforms(xy in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3..40)) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        let Ok(r) = spearman(&x, &y) else { return Ok(()) };
        let tx: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let ty: Vec<f64> = y.iter().map(|v| v * v * v + v).collect();
        prop_assert!((spearman(&tx, &ty).unwrap() - r).abs() < 1e-12);
    }

    #[test]
    fn least_compact_word_has_the_lowest_row_sum(n in 3usize..10, seed in any::<u64>()) {
        use rand::Rng as _;
        let mut rng = seeded(seed);
        let sim = SimTable::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let c: Vec<f64> = (0..n).map(|w| compactness(&sim, w).unwrap()).collect();
        let row: Vec<f64> = (0..n).map(|w| (0..n).filter(|&j| j != w).map(|j| sim.get(w, j)).sum()).collect();
        let argmax = (0..n).max_by(|&a, &b| c[a].total_cmp(&c[b])).unwrap();
        let argmin = (0..n).min_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap();
        prop_assert_eq!(argmax, argmin);
    }

    #[test]
    fn matrix_ignores_model_order(
        rows in prop::collection::vec(prop::collection::vec(prop::option::weighted(0.9, -5.0f64..5.0), 4), 3..12),
        shift in 1usize..12,
    ) {
        let metrics = descriptors(Direction::HigherBetter);
        let names: Vec<String> = (0..rows.len()).map(|i| format!("m{i}")).collect();
        let table = |order: &[usize]| {
            let r: Vec<(&str, Vec<Option<f64>>)> = order.iter().map(|&i| (names[i].as_str(), rows[i].clone())).collect();
            consistency_matrix(&table_from_rows(&metrics, &r).unwrap())
        };
        let forward: Vec<usize> = (0..rows.len()).collect();
        let mut rotated = forward.clone();
        rotated.rotate_left(shift % rows.len());
        let (m1, m2) = (table(&forward), table(&rotated));
        prop_assert_eq!(&m1.n, &m2.n);
        for (r1, r2) in m1.r.iter().flatten().zip(m2.r.iter().flatten()) {
            match (r1, r2) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
                (None, None) => {}
                _ => prop_assert!(false, "presence differs"),
            }
        }
    }

    #[test]
    fn sign_flip_negates_exactly_one_column(
        rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 4), 3..12),
    ) {
        let names: Vec<String> = (0..rows.len()).map(|i| format!("m{i}")).collect();
        let build = |dir| {
            let r: Vec<(&str, Vec<Option<f64>>)> =
                rows.iter().zip(&names).map(|(v, n)| (n.as_str(), v.iter().copied().map(Some).collect())).collect();
            consistency_matrix(&table_from_rows(&descriptors(dir), &r).unwrap())
        };
        let (plain, flipped) = (build(Direction::HigherBetter), build(Direction::LowerBetter));
        for i in 0..plain.rows.len() {
            prop_assert_eq!(plain.r[i][0], flipped.r[i][0]);
            prop_assert_eq!(plain.r[i][1].map(|v| -v), flipped.r[i][1]);
        }
    }

    #[test]
    fn forward_lies_on_the_simplex(x in vector(15), hidden in 1usize..10, classes in 1usize..6, seed in any::<u64>()) {
        let tags = (0..classes).map(|i| format!("t{i}")).collect();
        let t = WindowTagger::init(15, hidden, tags, &mut seeded(seed));
        let p = t.forward(&x).unwrap();
        prop_assert_eq!(p.len(), classes);
        prop_assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

/// Two intrinsic metrics against two extrinsic ones; the second extrinsic
/// metric takes `dir`.
fn descriptors(dir: Direction) -> Vec<MetricDescriptor> {
    vec![
        MetricDescriptor::new("i1", MetricKind::Intrinsic, Direction::HigherBetter),
        MetricDescriptor::new("i2", MetricKind::Intrinsic, Direction::HigherBetter),
        MetricDescriptor::new("e1", MetricKind::Extrinsic, Direction::HigherBetter),
        MetricDescriptor::new("e2", MetricKind::Extrinsic, dir),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn synthgen_is_deterministic(seed in any::<u64>(), which in 0usize..3) {
        let structure = match which {
            0 => Structure::Random,
            1 => Structure::Blobs { k: 3, separation: 10.0 },
            _ => Structure::OutlierGroups { groups: 4, group_size: 5 },
        };
        let spec = PlantedSpec::new(seed, 60, 12, structure);
        let (a, b) = (generate(&spec).unwrap(), generate(&spec).unwrap());
        prop_assert_eq!(a.store, b.store);
        prop_assert_eq!(a.gold.to_text(), b.gold.to_text());
    }
}
