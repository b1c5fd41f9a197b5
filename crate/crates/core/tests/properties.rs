mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sepmon::exact_linalg::{self, IntMatrix, Lattice};
use sepmon::hilbert::in_monoid_span;
use sepmon::{
    atoms, check_separating, check_separating_general, enumerate_b_up_to, realize_from_lattice, Characteristic,
    ExponentVector, MonomialFamily, SearchOptions,
};

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows).unwrap())
    })
}

fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small_vectors(n: usize, max_len: u32) -> Vec<ExponentVector> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=max_len - used).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(ExponentVector::new).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_is_canonical(m in matrix(5, 6, 20), seed in any::<u64>()) {
        let (h, u) = exact_linalg::hnf(&m);
        prop_assert_eq!(m.mul(&u).unwrap(), h.clone());
        prop_assert!(u.determinant().unwrap().abs().is_one());
        prop_assert!(exact_linalg::is_column_hnf(&h));
        // same lattice from a shuffled, padded generator list gives the same basis
        let mut cols = m.columns();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::seq::SliceRandom;
        cols.shuffle(&mut rng);
        let doubled: Vec<BigInt> = cols[0].iter().map(|x| x * 2).collect();
        cols.push(doubled);
        let other = exact_linalg::lattice_from_generators(m.rows(), &cols).unwrap();
        prop_assert_eq!(Lattice::from_matrix(&m), other);
    }

    #[test]
    fn snf_identities(m in matrix(5, 5, 30)) {
        let (s, u, v) = exact_linalg::snf(&m);
        prop_assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), s.clone());
        prop_assert!(u.determinant().unwrap().abs().is_one());
        prop_assert!(v.determinant().unwrap().abs().is_one());
        let k = s.rows().min(s.cols());
        for i in 1..k {
            let (a, b) = (&s[(i - 1, i - 1)], &s[(i, i)]);
            prop_assert!(!a.is_negative());
            if a.is_zero() {
                prop_assert!(b.is_zero());
            } else {
                prop_assert!((b % a).is_zero());
            }
        }
    }

    #[test]
    fn membership_of_combinations(m in matrix(4, 4, 9), coeffs in prop::collection::vec(-5i64..=5, 4)) {
        let l = Lattice::from_matrix(&m);
        let c = bigs(&coeffs[..m.cols()]);
        let v = m.mul_vec(&c).unwrap();
        let coords = l.contains(&v).unwrap().expect("combination must be a member");
        prop_assert_eq!(l.basis().mul_vec(&coords).unwrap(), v.clone());
        // perturbing by a vector outside the span is caught
        let mut w = v;
        w[0] += 1;
        let in_l = l.contains(&w).unwrap().is_some();
        let e0 = {
            let mut e = vec![BigInt::from(0); m.rows()];
            e[0] = BigInt::one();
            e
        };
        prop_assert_eq!(in_l, l.contains(&e0).unwrap().is_some());
    }

    #[test]
    fn quotient_order_is_index(m in matrix(3, 3, 7)) {
        let l = Lattice::from_matrix(&m);
        let q = exact_linalg::lattice_quotient(&Lattice::full(m.rows()), &l).unwrap();
        prop_assert_eq!(q.free_rank_defect, m.rows() - l.rank());
        if l.rank() == m.rows() {
            let det = l.basis().select_columns(&(0..l.rank()).collect::<Vec<_>>()).determinant().unwrap().abs();
            prop_assert_eq!(q.order().unwrap(), det);
        }
    }

    #[test]
    fn realize_round_trip(m in matrix(4, 3, 5)) {
        let l = Lattice::from_matrix(&m);
        let rep = realize_from_lattice(&l);
        for v in enumerate_b_up_to(&rep, 5) {
            prop_assert!(l.contains(&v.to_bigints()).unwrap().is_some());
        }
        // and conversely every small vector of l is invariant
        for v in small_vectors(m.rows(), 4) {
            prop_assert_eq!(rep.in_b(&v).unwrap(), l.contains(&v.to_bigints()).unwrap().is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn monoid_closure_and_generation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random_rep(&mut rng);
        let Ok(a) = atoms(&rep, &test_limits()) else { return Ok(()) };
        let elems = enumerate_b_up_to(&rep, 6);
        for x in elems.iter().take(12) {
            for y in elems.iter().take(12) {
                let sum: Vec<u32> = x.coords().iter().zip(y.coords()).map(|(p, q)| p + q).collect();
                prop_assert!(rep.in_b(&ExponentVector::new(sum)).unwrap());
            }
        }
        for e in &elems {
            prop_assert!(in_monoid_span(a.atoms(), e));
        }
    }

    #[test]
    fn separating_is_monotone(seed in any::<u64>(), mask in any::<u32>(), extra in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random_rep(&mut rng);
        let Ok(a) = atoms(&rep, &test_limits()) else { return Ok(()) };
        let pick = |bits: u32| -> Vec<ExponentVector> {
            a.atoms().iter().enumerate().filter(|(i, _)| bits >> (i % 32) & 1 == 1).map(|(_, v)| v.clone()).collect()
        };
        let small = pick(mask);
        let large = pick(mask | extra);
        let opts = SearchOptions::default();
        for c in [Characteristic::Zero, Characteristic::Prime(2), Characteristic::Prime(3)] {
            let s = check_separating(&rep, &a, &small, c, &opts).unwrap().is_separating;
            let l = check_separating(&rep, &a, &large, c, &opts).unwrap().is_separating;
            prop_assert!(!s || l);
            // all atoms always separate
            prop_assert!(check_separating(&rep, &a, a.atoms(), c, &opts).unwrap().is_separating);
            // a characteristic-0 separating set separates in every characteristic
            if c == Characteristic::Zero && s {
                prop_assert!(check_separating(&rep, &a, &small, Characteristic::Prime(5), &opts).unwrap().is_separating);
            }
        }
    }

    #[test]
    fn general_check_agrees_on_atoms(seed in any::<u64>(), mask in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random_rep(&mut rng);
        let Ok(a) = atoms(&rep, &test_limits()) else { return Ok(()) };
        let m: Vec<ExponentVector> =
            a.atoms().iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, v)| v.clone()).collect();
        let family = MonomialFamily::new(rep.n(), a.atoms().to_vec()).unwrap();
        for c in [Characteristic::Zero, Characteristic::Prime(2), Characteristic::Prime(3)] {
            let general = check_separating_general(&family, &m, c).unwrap();
            let specific = check_separating(&rep, &a, &m, c, &SearchOptions::default()).unwrap();
            prop_assert_eq!(general.is_separating, specific.is_separating);
            for w in &general.witnesses {
                let m_j: Vec<ExponentVector> =
                    m.iter().filter(|v| v.support().iter().all(|j| w.subset.contains(j))).cloned().collect();
                prop_assert!(w.certificate.validate(&w.subset, &m_j, &w.atom, c));
            }
        }
    }
}
