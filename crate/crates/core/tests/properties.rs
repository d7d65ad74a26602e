use proptest::prelude::*;
use transversal_core::perm::{self, Perm};
use transversal_core::quasigroup::{self, RightQuasigroup};
use transversal_core::extension;

fn perm_of(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

/// A size, a seed, and a relabeling fixing 0.
fn relabelled() -> impl Strategy<Value = (usize, u64, Perm)> {
    (2usize..7)
        .prop_flat_map(|n| (Just(n), any::<u64>(), Just((1..n).collect::<Vec<_>>()).prop_shuffle()))
        .prop_map(|(n, seed, rest)| {
            let images = std::iter::once(0).chain(rest).collect();
            (n, seed, Perm::from_images(images).unwrap())
        })
}

fn three_perms() -> impl Strategy<Value = (Perm, Perm, Perm)> {
    (1usize..8).prop_flat_map(|n| (perm_of(n), perm_of(n), perm_of(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative((p, q, r) in three_perms()) {
        let left = perm::compose(&perm::compose(&p, &q).unwrap(), &r).unwrap();
        let right = perm::compose(&p, &perm::compose(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_reads_left_to_right((p, q, _r) in three_perms()) {
        let pq = perm::compose(&p, &q).unwrap();
        for x in 0..p.degree() {
            prop_assert_eq!(pq.apply(x), q.apply(p.apply(x)));
        }
        prop_assert!(perm::compose(&p, &perm::inverse(&p)).unwrap().is_identity());
    }

    #[test]
    fn closure_is_idempotent((p, q, _r) in three_perms()) {
        let n = p.degree();
        let g = perm::generate(n, &[p.clone(), q.clone()]).unwrap();
        let again = perm::generate(n, g.elements()).unwrap();
        prop_assert!(perm::equal_groups(&g, &again));
        prop_assert!(g.contains(&p) && g.contains(&q));
        prop_assert_eq!(factorial(n) % g.order(), 0);
    }

    #[test]
    fn left_division_round_trips(n in 1usize..9, seed in any::<u64>()) {
        let q = RightQuasigroup::random(n, seed);
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(q.op(q.ldiv(x, y), x), y);
                prop_assert_eq!(q.ldiv(x, q.op(y, x)), y);
            }
            prop_assert_eq!(q.op(q.left_inverse(x), x), 0);
        }
    }

    #[test]
    fn random_tables_validate(n in 1usize..9, seed in any::<u64>()) {
        let q = RightQuasigroup::random(n, seed);
        let again = RightQuasigroup::validate(&q.rows(), 0).unwrap();
        prop_assert!(again.same_table(&q));
        let file = q.to_file();
        let text = file.to_json();
        prop_assert_eq!(quasigroup::TableFile::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn isomorphism_search_finds_relabelings((n, seed, beta) in relabelled()) {
        let q = RightQuasigroup::random(n, seed);
        let r = q.relabel(&beta).unwrap();
        let found = quasigroup::isomorphic(&q, &r);
        prop_assert!(found.is_some());
        let back = quasigroup::isomorphic(&r, &q);
        prop_assert!(back.is_some());
        let map = found.unwrap();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(map[q.op(x, y)], r.op(map[x], map[y]));
            }
        }
    }

    #[test]
    fn isomorphism_is_symmetric(n in 2usize..6, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = RightQuasigroup::random(n, s1);
        let b = RightQuasigroup::random(n, s2);
        prop_assert_eq!(quasigroup::isomorphic(&a, &b).is_some(), quasigroup::isomorphic(&b, &a).is_some());
        if quasigroup::isomorphic(&a, &b).is_some() {
            prop_assert_eq!(quasigroup::invariant(&a), quasigroup::invariant(&b));
        }
    }

    #[test]
    fn torsion_extension_product_is_closed(n in 2usize..6, seed in any::<u64>()) {
        let q = RightQuasigroup::random(n, seed);
        let e = extension::build_torsion_extension(&q).unwrap();
        prop_assert_eq!(e.check_axioms(1_000, seed, extension::DEFAULT_TABLE_CAP).unwrap(), None);
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}
