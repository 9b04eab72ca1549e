mod common;

use common::{random_coverage, random_modular, random_points, subset};
use robust_submod::objective::{
    dominating_objective, kmedoid_objective, logdet_objective, movie_objective, KMedoid, LogDet, Metric, Movie,
};
use robust_submod::{ids, ElementId, ObjectiveOracle, RngHandle};

fn zoo(rng: &mut RngHandle, n: usize) -> Vec<ObjectiveOracle<f64>> {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.below(8) == 0)
        .collect();
    let features: Vec<Vec<f64>> = (0..n).map(|_| (0..5).map(|_| rng.unit()).collect()).collect();
    let user: Vec<f64> = (0..5).map(|_| rng.unit() - 0.3).collect();
    let points = random_points(rng, n);
    vec![
        random_modular(rng, n),
        random_coverage(rng, n, 2 * n),
        dominating_objective(n, &edges).unwrap(),
        movie_objective(user, features, 0.4).unwrap(),
        kmedoid_objective(points.clone(), ElementId(0), Metric::Euclidean).unwrap(),
        logdet_objective(points, 0.3, 10.0, Metric::Euclidean).unwrap(),
    ]
}

fn random_subset(rng: &mut RngHandle, n: usize, keep_one_in: usize) -> Vec<ElementId> {
    (0..n).filter(|_| rng.below(keep_one_in) == 0).map(ElementId).collect()
}

#[test]
fn normalized() {
    let mut rng = RngHandle::new(21, 0);
    for f in zoo(&mut rng, 20) {
        assert_eq!(f.value(&[]).unwrap(), 0.0, "{}", f.kind());
    }
}

#[test]
fn monotone_and_submodular_on_random_chains() {
    let mut rng = RngHandle::new(22, 0);
    let n = 48;
    for f in zoo(&mut rng, n) {
        for _ in 0..1000 {
            let y = random_subset(&mut rng, n, 3);
            let x: Vec<ElementId> = y.iter().copied().filter(|_| rng.below(2) == 0).collect();
            let e = ElementId(rng.below(n));
            let mx = f.marginal(e, &x).unwrap();
            let my = f.marginal(e, &y).unwrap();
            assert!(mx >= -1e-9 && my >= -1e-9, "{}: negative marginal", f.kind());
            assert!(mx >= my - 1e-9, "{}: {mx} < {my}", f.kind());
        }
    }
}

#[test]
fn cache_matches_scratch_under_fuzz() {
    let mut rng = RngHandle::new(23, 0);
    let n = 40;
    for f in zoo(&mut rng, n) {
        let obj = f.objective();
        let mut cache = f.cache_at(&[]).unwrap();
        for step in 0..10_000 {
            let e = ElementId(rng.below(n));
            match rng.below(10) {
                0 if !cache.members().contains(&e) => cache.insert(e),
                1 if step % 97 == 0 => {
                    let s = random_subset(&mut rng, n, 4);
                    cache.reset_to(&s);
                }
                _ => {
                    let s = cache.members().to_vec();
                    let mut with = s.clone();
                    if !with.contains(&e) {
                        with.push(e);
                    }
                    let scratch = obj.evaluate(&with) - obj.evaluate(&s);
                    let cached = cache.gain(e);
                    let tol = 1e-9 * scratch.abs().max(cached.abs()) + 1e-9;
                    assert!((scratch - cached).abs() <= tol, "{}: {cached} vs {scratch}", f.kind());
                    let value = obj.evaluate(&s);
                    assert!((cache.value() - value).abs() <= 1e-9 * value.abs() + 1e-9);
                }
            }
        }
    }
}

#[test]
fn counter_matches_invocations() {
    let mut rng = RngHandle::new(24, 0);
    for f in zoo(&mut rng, 12) {
        let mut expected = 0;
        for _ in 0..50 {
            let s = random_subset(&mut rng, 12, 2);
            match rng.below(3) {
                0 => {
                    f.value(&s).unwrap();
                }
                1 => {
                    f.marginal(ElementId(rng.below(12)), &s).unwrap();
                }
                _ => {
                    let c = f.cache_at(&s).unwrap();
                    c.gain(ElementId(rng.below(12)));
                }
            }
            expected += 1;
        }
        assert_eq!(f.calls(), expected, "{}", f.kind());
    }
}

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

#[test]
fn logdet_matches_cofactor_determinant() {
    let mut rng = RngHandle::new(25, 0);
    let points = random_points(&mut rng, 6);
    for metric in [Metric::Euclidean, Metric::Haversine] {
        let raw = LogDet::new(points.clone(), 0.4, 10.0, metric).unwrap();
        let f = ObjectiveOracle::new(raw.clone());
        for mask in 0..1u64 << 6 {
            let s = subset(&ids(0..6), mask);
            let expected = cofactor_det(&raw.regularized_gram(&s)).ln();
            let got = f.value(&s).unwrap();
            assert!((got - expected).abs() <= 1e-9 * expected.abs().max(1.0), "{s:?}: {got} vs {expected}");
        }
    }
}

#[test]
fn logdet_kernel_entries() {
    let raw = LogDet::new(vec![vec![0.0, 0.0], vec![3.0, 4.0]], 5.0, 10.0, Metric::Euclidean).unwrap();
    assert!((raw.kernel(ElementId(0), ElementId(1)) - (-1.0f64).exp()).abs() < 1e-15);
    assert_eq!(raw.kernel(ElementId(1), ElementId(1)), 1.0);
}

#[test]
fn kmedoid_matches_direct_loss() {
    let mut rng = RngHandle::new(26, 0);
    let points = random_points(&mut rng, 6);
    let e0 = ElementId(0);
    let dist = |a: &[f64], b: &[f64]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let loss = |s: &[ElementId]| {
        points
            .iter()
            .map(|v| s.iter().map(|e| dist(&points[e.0], v)).fold(f64::INFINITY, f64::min))
            .sum::<f64>()
            / points.len() as f64
    };
    let raw = KMedoid::new(points.clone(), e0, Metric::Euclidean).unwrap();
    let f = ObjectiveOracle::new(raw.clone());
    for mask in 0..1u64 << 6 {
        let s = subset(&ids(0..6), mask);
        let mut with = s.clone();
        with.push(e0);
        let expected = loss(&[e0]) - loss(&with);
        assert!((f.value(&s).unwrap() - expected).abs() < 1e-12);
        assert!((raw.loss_with_auxiliary(&s) - loss(&with)).abs() < 1e-12);
    }
}

#[test]
fn movie_matches_hand_formula_exhaustively() {
    let mut rng = RngHandle::new(27, 0);
    let dim = 30;
    let movies: Vec<Vec<f64>> = (0..10).map(|_| (0..dim).map(|_| rng.unit()).collect()).collect();
    let user: Vec<f64> = (0..dim).map(|_| rng.unit() - 0.5).collect();
    let alpha = 0.7;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let raw = Movie::new(user.clone(), movies.clone(), alpha).unwrap();
    assert_eq!(raw.negative_similarity_pairs(), 0);
    let f = ObjectiveOracle::new(raw);
    for mask in 0..1u64 << 10 {
        let s = subset(&ids(0..10), mask);
        let linear: f64 = s.iter().map(|e| dot(&user, &movies[e.0]).max(0.0)).sum();
        let facility: f64 = if s.is_empty() {
            0.0
        } else {
            movies
                .iter()
                .map(|m| s.iter().map(|e| dot(m, &movies[e.0])).fold(f64::NEG_INFINITY, f64::max))
                .sum()
        };
        let expected = (1.0 - alpha) * linear + alpha * facility;
        assert!((f.value(&s).unwrap() - expected).abs() <= 1e-9 * expected.abs().max(1.0));
    }
}

#[test]
fn f32_objectives_agree_with_f64() {
    let mut rng = RngHandle::new(28, 0);
    let points = random_points(&mut rng, 8);
    let p32: Vec<Vec<f32>> = points.iter().map(|p| p.iter().map(|&x| x as f32).collect()).collect();
    let f64o = logdet_objective(points, 0.5, 10.0, Metric::Euclidean).unwrap();
    let f32o = logdet_objective(p32, 0.5f32, 10.0f32, Metric::Euclidean).unwrap();
    for mask in 0..1u64 << 8 {
        let s = subset(&ids(0..8), mask);
        let a = f64o.value(&s).unwrap();
        let b = f32o.value(&s).unwrap() as f64;
        assert!((a - b).abs() <= 1e-4 * a.abs().max(1.0));
    }
}
