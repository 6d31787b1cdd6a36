use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::*;
use crate::fixtures;
use crate::gamma::{build_complex, ComplexKind};
use crate::homology::oracle::{rank_mod_prime, RANK_PRIME};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Columns of `m` moved to the positions given by `index`.
fn relabel_columns(m: &SparseMatrix, index: &[usize]) -> SparseMatrix {
    let trip = m.triplets().map(|(r, c, v)| (r, index[c], v)).collect();
    SparseMatrix::from_triplets(m.rows(), index.len(), trip)
}

fn stack(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    SparseMatrix::assemble(a.rows() + b.rows(), a.cols(), &[(0, 0, a), (a.rows(), 0, b)])
}

/// Same kernel over `ℤ/p` for the given primes.
fn same_kernel(a: &SparseMatrix, b: &SparseMatrix) -> bool {
    [2, 3, RANK_PRIME].iter().all(|&p| {
        let (ra, rb, rs) = (rank_mod_prime(a, p), rank_mod_prime(b, p), rank_mod_prime(&stack(a, b), p));
        ra == rs && rb == rs
    })
}

#[test]
fn pair_identities_cut_out_the_kac_kernel() {
    for (name, mp) in fixtures::all() {
        let c = build_complex(&mp, ComplexKind::KacC, 2).unwrap();
        let d2 = c.differential(2).unwrap();
        let inst = pair_identities(&mp);
        let cons = relabel_columns(&constraint_matrix(&inst, pair_to_kac_index(&mp).len()), &pair_to_kac_index(&mp));
        assert!(same_kernel(&cons, d2), "{name}");
    }
}

#[test]
fn trivial_pairs_are_kac_coboundaries() {
    for (name, mp) in fixtures::all() {
        let c = build_complex(&mp, ComplexKind::KacC, 2).unwrap();
        let d1 = c.differential(1).unwrap();
        let rows = pair_to_kac_index(&mp);
        let cols = one_cochain_index(&mp);
        let terms = trivial_pair_terms(&mp);
        let trip = terms
            .iter()
            .enumerate()
            .flat_map(|(i, inst)| inst.terms.iter().map(move |&(k, v)| (i, v, k)))
            .map(|(i, v, k)| (rows[i], cols[v], k))
            .collect();
        let m = SparseMatrix::from_triplets(d1.rows(), d1.cols(), trip);
        assert_eq!(&m, d1, "{name}");
    }
}

#[test]
fn pentagonal_identities_cut_out_the_pentagonal_kernel() {
    for (name, mp) in fixtures::all().into_iter().take(4) {
        let e = build_complex(&mp, ComplexKind::PentagonalE, 2).unwrap();
        let d2 = e.differential(2).unwrap();
        let index = theta_index(&mp);
        let mut seen = vec![false; index.len()];
        assert!(index.iter().all(|&i| !std::mem::replace(&mut seen[i], true)), "{name}: not a bijection");
        let cons = relabel_columns(&constraint_matrix(&pentagonal_identities(&mp), index.len()), &index);
        assert!(same_kernel(&cons, d2), "{name}");
    }
}

#[test]
fn pentagonal_coboundaries_match_the_complex() {
    for (name, mp) in fixtures::all().into_iter().take(4) {
        let e = build_complex(&mp, ComplexKind::PentagonalE, 2).unwrap();
        let d1 = e.differential(1).unwrap();
        let n = mp.order();
        let one = pentagonal_one_index(&mp);
        for x in 0..n {
            let mut a = vec![BigRational::zero(); n];
            a[x] = BigRational::one();
            let theta = pentagonal_coboundary(&mp, Coefficients::Integers, &a).unwrap();
            let v = theta_to_cochain(&mp, &theta).unwrap();
            let mut basis = vec![0i64; n];
            basis[one[x]] = 1;
            let image = d1.apply_i64(&basis);
            let got: Vec<i64> = v.iter().map(|r| r.to_integer().try_into().unwrap()).collect();
            // the coboundary formula is the negative of the complex differential
            let neg: Vec<i64> = image.iter().map(|v| -v).collect();
            assert_eq!(got, neg, "{name} at {x}");
        }
    }
}

#[test]
fn zero_and_trivial_objects() {
    let mp = fixtures::z6();
    let t = Coefficients::Torus;
    assert!(check_pair_cocycle(&mp, &CocyclePair::zero(&mp, t)).unwrap().is_empty());
    let r = Table::zeros(&[2, 3]);
    assert_eq!(coboundary_pair(&mp, t, &r).unwrap(), CocyclePair::zero(&mp, t));
    assert!(check_one_cocycle(&mp, t, &r).unwrap());
    // constant R = c: U_R = −c, V_R = c
    let c = q(1, 5);
    let rc = Table::new(&[2, 3], vec![c.clone(); 6]).unwrap();
    let p = coboundary_pair(&mp, t, &rc).unwrap();
    assert!(p.u.values.iter().all(|x| *x == q(4, 5)));
    assert!(p.v.values.iter().all(|x| *x == c));
    assert!(check_pair_cocycle(&mp, &p).unwrap().is_empty());
    let theta = pentagonal_coboundary(&mp, t, &vec![c.clone(); 6]).unwrap();
    assert!(theta.theta.values.iter().all(Zero::is_zero));
}

#[test]
fn single_entry_u_breaks_the_first_identity() {
    let mp = fixtures::z6();
    let mut pair = CocyclePair::zero(&mp, Coefficients::Torus);
    pair.u.set(&[mp.pos2(3), mp.pos1(2), mp.pos1(2)], q(1, 3));
    let v = check_pair_cocycle(&mp, &pair).unwrap();
    assert!(v.iter().any(|x| x.identity == 1));
}

#[test]
fn bicharacter_one_cocycle() {
    let mp = fixtures::z2xz2();
    let mut r = Table::zeros(&[2, 2]);
    r.set(&[mp.pos2(2), mp.pos1(1)], q(1, 2));
    assert!(check_one_cocycle(&mp, Coefficients::Torus, &r).unwrap());
    let mp = fixtures::z6();
    let mut r = Table::zeros(&[2, 3]);
    r.set(&[mp.pos2(3), mp.pos1(2)], q(1, 2));
    assert!(!check_one_cocycle(&mp, Coefficients::Torus, &r).unwrap());
}

#[test]
fn kac_round_trips() {
    let mp = fixtures::s3();
    let t = Coefficients::Torus;
    let mut pair = CocyclePair::zero(&mp, t);
    for (i, x) in pair.u.values.iter_mut().enumerate() {
        *x = q(i as i64 % 7, 7);
    }
    for (i, x) in pair.v.values.iter_mut().enumerate() {
        *x = q(i as i64 % 5, 5);
    }
    let v = pair_to_kac_cochain(&mp, &pair).unwrap();
    assert_eq!(kac_cochain_to_pair(&mp, t, &v).unwrap(), pair);
    let r = Table::new(&[2, 3], (0..6).map(|i| q(i, 6)).collect()).unwrap();
    assert_eq!(kac_to_one_cochain(&mp, &one_cochain_to_kac(&mp, &r).unwrap()).unwrap(), r);
}

#[test]
fn thetatilde_examples() {
    let mp = fixtures::z6();
    let mut theta = PentagonalCocycle::zero(&mp, Coefficients::Torus);
    theta.theta.set(&[1, 5], q(1, 4));
    theta.theta.set(&[2, 3], q(1, 3));
    let tilde = theta_to_thetatilde(&mp, &theta).unwrap();
    assert_eq!(*tilde.at(1, 2), q(1, 4));
    // p2(2) = e
    assert_eq!(*tilde.at(2, 3), q(1, 3));
}

#[test]
fn pentagon_for_trivial_and_coboundary_phases() {
    for (name, mp) in fixtures::all().into_iter().take(4) {
        let t = Coefficients::Torus;
        let w = build_w(&mp, &PentagonalCocycle::zero(&mp, t)).unwrap();
        assert!(check_pentagon(&w).unwrap(), "{name}");
        let a: Vec<BigRational> = (0..mp.order()).map(|x| q((x * x) as i64 % 5, 5)).collect();
        let theta = pentagonal_coboundary(&mp, t, &a).unwrap();
        assert!(check_pentagonal_cocycle(&mp, &theta).unwrap().is_empty());
        assert!(check_pentagon(&build_w(&mp, &theta).unwrap()).unwrap(), "{name}");
    }
}

#[test]
fn w_examples() {
    let mp = fixtures::z6();
    let w = build_w(&mp, &PentagonalCocycle::zero(&mp, Coefficients::Torus)).unwrap();
    assert_eq!(w.perm[6 + 2], (3 * 6 + 5) as u32);
    for y in 0..6 {
        assert_eq!(w.perm[y] as usize, mp.p1(y) * 6 + y);
    }
}

#[test]
fn engine_generators_satisfy_both_pentagon_tests() {
    use crate::homology::{cohomology, Cochain};
    for (name, mp) in [("z2xz2", fixtures::z2xz2()), ("d4", fixtures::d4())] {
        let e = build_complex(&mp, ComplexKind::PentagonalE, 2).unwrap();
        let h = cohomology(&e, 2, Coefficients::Torus).unwrap();
        assert_eq!(h.info.torsion, vec![2], "{name}");
        for g in h.generators() {
            let Cochain::Torus(v) = g else { unreachable!() };
            let theta = cochain_to_theta(&mp, Coefficients::Torus, &v).unwrap();
            assert!(check_pentagonal_cocycle(&mp, &theta).unwrap().is_empty(), "{name}");
            assert!(check_pentagon(&build_w(&mp, &theta).unwrap()).unwrap(), "{name}");
            let mut bad = theta.clone();
            bad.theta.values[7] = frac(&(&bad.theta.values[7] + q(1, 3)));
            assert!(!check_pentagonal_cocycle(&mp, &bad).unwrap().is_empty(), "{name}");
            assert!(!check_pentagon(&build_w(&mp, &bad).unwrap()).unwrap(), "{name}");
        }
    }
}
