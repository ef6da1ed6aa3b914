use proptest::prelude::*;
use uniclass_core::coxeter::{CoxeterSystem, CoxeterType};

/// Length of a signed permutation in B_n, with the last node short:
/// positive roots `e_i - e_j`, `e_i + e_j` (i < j) and `e_i` sent to
/// negative ones under `e_i -> sign(p_i) e_|p_i|`.
fn b_length(perm: &[i8]) -> usize {
    let n = perm.len();
    let image = |coeffs: &[(usize, i32)]| {
        let mut v = vec![0i32; n];
        for &(i, c) in coeffs {
            let p = perm[i];
            v[p.unsigned_abs() as usize - 1] += c * p.signum() as i32;
        }
        // negative when the first nonzero coordinate is negative
        v.into_iter().find(|&x| x != 0).unwrap() < 0
    };
    let mut l = 0;
    for i in 0..n {
        l += image(&[(i, 1)]) as usize;
        for j in i + 1..n {
            l += image(&[(i, 1), (j, -1)]) as usize;
            l += image(&[(i, 1), (j, 1)]) as usize;
        }
    }
    l
}

#[test]
fn longest_elements() {
    for (ty, len) in [
        (CoxeterType::A(1), 1),
        (CoxeterType::A(3), 6),
        (CoxeterType::A(5), 15),
        (CoxeterType::B(3), 9),
        (CoxeterType::D(4), 12),
        (CoxeterType::D(5), 20),
        (CoxeterType::E6, 36),
        (CoxeterType::E7, 63),
    ] {
        let sys = CoxeterSystem::build(ty).unwrap();
        let w0 = sys.longest_element();
        assert_eq!(w0.length(), len, "{ty}");
        assert_eq!(sys.inversion_count(&w0), len);
        assert_eq!(ty.positive_root_count() as usize, len);
        // w0 is an involution with every generator a descent
        assert!(sys.multiply(&w0, &w0).unwrap().is_identity());
        assert!((0..sys.rank()).all(|i| sys.is_left_descent(&w0, i)));
    }
}

#[test]
fn e8_needs_the_opt_in() {
    assert!(CoxeterSystem::build(CoxeterType::E8).is_err());
    let sys = CoxeterSystem::build_with(CoxeterType::E8, true).unwrap();
    assert_eq!(sys.longest_element().length(), 120);
}

#[test]
fn group_orders_from_enumeration() {
    for (ty, order) in [
        (CoxeterType::A(3), 24u64),
        (CoxeterType::A(4), 120),
        (CoxeterType::B(3), 48),
        (CoxeterType::B(4), 384),
        (CoxeterType::D(4), 192),
    ] {
        let sys = CoxeterSystem::build(ty).unwrap();
        assert_eq!(ty.group_order(), order);
        assert_eq!(sys.enumerate(1_000_000).unwrap().len() as u64, order);
    }
    assert_eq!(CoxeterType::E6.group_order(), 51_840);
}

#[test]
fn signed_permutation_lengths() {
    let sys = CoxeterSystem::build(CoxeterType::B(3)).unwrap();
    let perms: [[i8; 3]; 6] = [[1, 2, 3], [-1, -2, -3], [2, 1, 3], [1, 2, -3], [-3, 1, 2], [3, -1, 2]];
    for p in perms {
        let w = sys.from_signed_permutation(&p).unwrap();
        assert_eq!(w.length(), b_length(&p), "{p:?}");
    }
}

#[test]
fn class_counts() {
    // ordinary classes of S_4, twisted classes of S_4 under the flip,
    // classes of W(D4)
    let a3 = CoxeterSystem::build(CoxeterType::A(3)).unwrap();
    let flip = a3.opposition_involution();
    let id = a3.diagram_automorphisms().iter().find(|d| d.is_identity()).unwrap().clone();
    assert_eq!(a3.sigma_conjugacy_classes(&id, 1_000).unwrap().len(), 5);
    let twisted = a3.sigma_conjugacy_classes(&flip, 1_000).unwrap();
    assert_eq!(twisted.class_sizes().iter().sum::<usize>(), 24);
    let d4 = CoxeterSystem::build(CoxeterType::D(4)).unwrap();
    let id = d4.diagram_automorphisms().iter().find(|d| d.is_identity()).unwrap().clone();
    assert_eq!(d4.sigma_conjugacy_classes(&id, 1_000).unwrap().len(), 13);
    assert_eq!(d4.diagram_automorphisms().len(), 6);
}

#[test]
fn words_serialise_as_text() {
    let sys = CoxeterSystem::build(CoxeterType::D(4)).unwrap();
    let w = sys.parse_word("s1 s3 s2").unwrap();
    assert_eq!(w.length(), 3);
    assert_eq!(sys.parse_word(&sys.format_word(&w)).unwrap(), w);
    assert_eq!(sys.format_word(&sys.identity()), "");
    assert!(sys.parse_word("s9").is_err());
}

fn word(rank: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..rank, 0..24)
}

proptest! {
    #[test]
    fn words_reduce_consistently(a in word(4), b in word(4)) {
        let sys = CoxeterSystem::build(CoxeterType::D(4)).unwrap();
        let x = sys.from_word(&a);
        let y = sys.from_word(&b);
        let xy = sys.multiply(&x, &y).unwrap();
        let mut ab = a.clone();
        ab.extend(&b);
        prop_assert_eq!(&xy, &sys.from_word(&ab));
        prop_assert!(xy.length() <= x.length() + y.length());
        prop_assert_eq!(x.length() % 2, a.len() % 2);
        prop_assert_eq!(sys.from_word(&sys.word(&x)), x);
        prop_assert_eq!(sys.word(&x).len(), x.length());
        prop_assert!(sys.multiply(&x, &sys.inverse(&x)).unwrap().is_identity());
        prop_assert_eq!(sys.inversion_count(&x), x.length());
    }

    #[test]
    fn twisting_is_a_length_preserving_homomorphism(a in word(4), b in word(4), k in 0usize..6) {
        let sys = CoxeterSystem::build(CoxeterType::D(4)).unwrap();
        let sigma = sys.diagram_automorphisms()[k].clone();
        let x = sys.from_word(&a);
        let y = sys.from_word(&b);
        let lhs = sys.twist(&sys.multiply(&x, &y).unwrap(), &sigma);
        let rhs = sys.multiply(&sys.twist(&x, &sigma), &sys.twist(&y, &sigma)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(sys.twist(&x, &sigma).length(), x.length());
    }

    #[test]
    fn twisted_conjugates_share_a_class(a in word(3), g in word(3)) {
        let sys = CoxeterSystem::build(CoxeterType::A(3)).unwrap();
        let sigma = sys.opposition_involution();
        let classes = sys.sigma_conjugacy_classes(&sigma, 1_000).unwrap();
        let w = sys.from_word(&a);
        let g = sys.from_word(&g);
        let v = sys.multiply(&sys.multiply(&sys.inverse(&g), &w).unwrap(), &sys.twist(&g, &sigma)).unwrap();
        prop_assert_eq!(classes.class_of(&w), classes.class_of(&v));
    }
}
