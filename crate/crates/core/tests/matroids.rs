mod common;

use common::{random_laminar, random_partition, subset};
use robust_submod::oracle::check_matroid_axioms;
use robust_submod::matroid::truncate;
use robust_submod::{ids, ElementId, Laminar, Matroid, RngHandle, Uniform};

fn assert_circuits<M: Matroid + ?Sized>(m: &M) {
    let n = m.ground_size();
    let v = ids(0..n);
    for mask in 0..1u64 << n {
        let a = subset(&v, mask);
        if !m.independent(&a) {
            continue;
        }
        for e in (0..n).map(ElementId).filter(|e| !a.contains(e)) {
            if m.can_add(&a, e) {
                continue;
            }
            let c = m.fundamental_circuit(&a, e).unwrap().members;
            assert!(c.contains(&e));
            assert!(!m.independent(&c), "{c:?} should be dependent");
            for x in &c {
                let minus: Vec<ElementId> = c.iter().copied().filter(|y| y != x).collect();
                assert!(m.independent(&minus), "{minus:?} should be independent");
            }
            // Unique circuit: the brute-force minimal dependent subset of a + e through e.
            let mut with = a.clone();
            with.push(e);
            let brute = (0..1u64 << with.len())
                .map(|mk| subset(&with, mk))
                .filter(|s| s.contains(&e) && !m.independent(s))
                .min_by_key(Vec::len)
                .unwrap();
            let mut brute = brute;
            brute.sort_unstable();
            assert_eq!(c, brute);
        }
    }
}

fn assert_equal_bases<M: Matroid + ?Sized>(m: &M) {
    let n = m.ground_size();
    let v = ids(0..n);
    for mask in 0..1u64 << n {
        let s = subset(&v, mask);
        if !m.independent(&s) {
            continue;
        }
        let maximal = (0..n).map(ElementId).all(|e| s.contains(&e) || !m.can_add(&s, e));
        if maximal {
            assert_eq!(s.len(), m.rank(), "basis {s:?}");
        }
    }
}

#[test]
fn implemented_families_satisfy_axioms() {
    let mut rng = RngHandle::new(11, 0);
    for n in 1..=10 {
        assert_eq!(check_matroid_axioms(&Uniform::new(n, n / 2), n).unwrap(), None);
        let p = random_partition(&mut rng, n);
        assert_eq!(check_matroid_axioms(&p, n).unwrap(), None);
        let l = random_laminar(&mut rng, n);
        assert_eq!(check_matroid_axioms(&l, n).unwrap(), None, "{l:?}");
        let t = truncate(random_laminar(&mut rng, n), 1 + n / 3);
        assert_eq!(check_matroid_axioms(&t, n).unwrap(), None);
    }
}

#[test]
fn random_laminar_families_on_eight() {
    let mut rng = RngHandle::new(12, 0);
    for _ in 0..30 {
        let l = random_laminar(&mut rng, 8);
        assert_eq!(check_matroid_axioms(&l, 8).unwrap(), None, "{l:?}");
        assert_equal_bases(&l);
        assert!(l.independent(&[]));
    }
}

#[test]
fn circuits_match_brute_force() {
    let mut rng = RngHandle::new(13, 0);
    for _ in 0..10 {
        assert_circuits(&random_laminar(&mut rng, 8));
        assert_circuits(&random_partition(&mut rng, 7));
    }
    assert_circuits(&Uniform::new(6, 3));
    assert_circuits(&truncate(Laminar::from_parts(&[0, 0, 1, 1, 1, 2, 2], 2), 3));
}

#[test]
fn truncation_matches_definition() {
    let mut rng = RngHandle::new(14, 0);
    let v = ids(0..10);
    for k in 0..=6 {
        let inner = random_laminar(&mut rng, 10);
        let t = truncate(inner.clone(), k);
        for mask in 0..1u64 << 10 {
            let s = subset(&v, mask);
            assert_eq!(t.independent(&s), inner.independent(&s) && s.len() <= k);
        }
        assert_eq!(t.rank(), k.min(inner.rank()));
    }
}

#[test]
fn empty_set_is_independent_everywhere() {
    let mut rng = RngHandle::new(15, 0);
    let all: Vec<Box<dyn Matroid>> = vec![
        Box::new(Uniform::new(4, 0)),
        Box::new(random_partition(&mut rng, 5)),
        Box::new(random_laminar(&mut rng, 6)),
        Box::new(truncate(Uniform::new(3, 3), 0)),
    ];
    for m in &all {
        assert!(m.is_independent(&[]).unwrap());
    }
}
