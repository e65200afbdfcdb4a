use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snfc::gf::{Field, Matrix};

/// Every GF(p^m) with q ≤ 256.
fn small_fields() -> &'static [Field] {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        let mut out = Vec::new();
        for p in (2u32..=256).filter(|&p| (2..p).all(|d| p % d != 0)) {
            let mut m = 1;
            while p.pow(m) <= 256 {
                out.push(Field::new(p, m).unwrap());
                m += 1;
            }
        }
        out
    })
}

fn random_matrix(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let data: Vec<Vec<u32>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(0..f.order())).collect())
        .collect();
    Matrix::from_rows_with_cols(f, &data, cols).unwrap()
}

fn field_and_rng() -> impl Strategy<Value = (Field, ChaCha8Rng)> {
    (0..small_fields().len(), any::<u64>()).prop_map(|(i, seed)| (small_fields()[i].clone(), ChaCha8Rng::seed_from_u64(seed)))
}

#[test]
fn field_census() {
    // 54 primes below 256, plus the proper prime powers
    let proper = small_fields().iter().filter(|f| f.degree() > 1).count();
    assert_eq!(small_fields().len() - proper, 54);
    assert_eq!(proper, 16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn field_axioms((f, mut rng) in field_and_rng()) {
        let q = f.order();
        let [a, b, c] = [0; 3].map(|_| rng.random_range(0..q));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        } else {
            prop_assert!(f.inv(a).is_err());
        }
    }

    #[test]
    fn rank_subadditive((f, mut rng) in field_and_rng(), n in 1usize..6, k1 in 0usize..4, k2 in 0usize..4) {
        // low-rank factors make dependent column spaces common
        let inner = rng.random_range(1..=n);
        let u = random_matrix(&f, n, inner, &mut rng).mul(&random_matrix(&f, inner, k1, &mut rng)).unwrap();
        let v = if rng.random_bool(0.5) {
            random_matrix(&f, n, k2, &mut rng)
        } else {
            u.mul(&random_matrix(&f, k1, k2, &mut rng)).unwrap()
        };
        let joint = u.hstack(&v).unwrap().rank();
        prop_assert!(joint <= u.rank() + v.rank());
        prop_assert_eq!(joint == u.rank() + v.rank(), u.intersects_trivially(&v).unwrap());
    }

    #[test]
    fn rank_of_product((f, mut rng) in field_and_rng(), a in 1usize..5, b in 1usize..5, c in 1usize..5) {
        let x = random_matrix(&f, a, b, &mut rng);
        let y = random_matrix(&f, b, c, &mut rng);
        let xy = x.mul(&y).unwrap();
        prop_assert!(xy.rank() <= x.rank().min(y.rank()));
        prop_assert_eq!(x.rank(), x.transpose().rank());
    }

    #[test]
    fn solve_right_is_sound((f, mut rng) in field_and_rng(), n in 1usize..5, k in 1usize..5, w in 1usize..3) {
        let a = random_matrix(&f, n, k, &mut rng);
        let y = if rng.random_bool(0.5) {
            a.mul(&random_matrix(&f, k, w, &mut rng)).unwrap()
        } else {
            random_matrix(&f, n, w, &mut rng)
        };
        match a.solve_right(&y).unwrap() {
            Some(x) => prop_assert_eq!(a.mul(&x).unwrap(), y),
            None => prop_assert!(a.hstack(&y).unwrap().rank() > a.rank()),
        }
    }

    #[test]
    fn companion_is_homomorphism(idx in 0usize..16, seed in any::<u64>(), n in 1usize..4, k in 1usize..4, m in 1usize..4) {
        let ext: Vec<&Field> = small_fields().iter().filter(|f| f.degree() > 1).collect();
        let f = ext[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(f, n, k, &mut rng);
        let b = random_matrix(f, k, m, &mut rng);
        let c = random_matrix(f, n, k, &mut rng);
        let ab = a.mul(&b).unwrap().companion_expand().unwrap();
        prop_assert_eq!(ab, a.companion_expand().unwrap().mul(&b.companion_expand().unwrap()).unwrap());
        let sum = a.add(&c).unwrap().companion_expand().unwrap();
        prop_assert_eq!(sum, a.companion_expand().unwrap().add(&c.companion_expand().unwrap()).unwrap());
    }
}

#[test]
fn inverse_on_random_invertible_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for f in small_fields() {
        let mut found = 0;
        while found < 1000 {
            let n = rng.random_range(1..=5);
            let m = random_matrix(f, n, n, &mut rng);
            match m.inverse() {
                Ok(inv) => {
                    assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(f, n), "GF({})", f.order());
                    assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f, n));
                    found += 1;
                }
                Err(_) => assert!(m.rank() < n),
            }
        }
    }
}
