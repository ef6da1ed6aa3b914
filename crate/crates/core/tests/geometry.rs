use uniclass_core::geometry::Geometry;
use uniclass_core::linalg;
use uniclass_core::oracle::ChamberGraph;

/// Gaussian binomial [n choose k]_q by the product formula.
fn gauss(n: u32, k: u32, q: u64) -> u64 {
    let num: u64 = (0..k).map(|i| q.pow(n - i) - 1).product();
    let den: u64 = (0..k).map(|i| q.pow(i + 1) - 1).product();
    num / den
}

/// Poincare polynomial at q from the degrees: prod (q^d - 1)/(q - 1).
fn poincare(degrees: &[u32], q: u64) -> u64 {
    degrees.iter().map(|&d| (q.pow(d) - 1) / (q - 1)).product()
}

#[test]
fn projective_counts_follow_gaussian_binomials() {
    for (n, q) in [(2, 2), (3, 2), (2, 3), (3, 3), (3, 4), (4, 2), (5, 2)] {
        let g = Geometry::build_projective(n, q).unwrap();
        for k in 1..=n {
            assert_eq!(g.ids_of_dim(k).len() as u64, gauss(n as u32 + 1, k as u32, q as u64), "PG({n},{q}) dim {k}");
        }
        assert_eq!(g.ids_of_dim(1).len(), g.ids_of_dim(n).len());
    }
    assert_eq!(Geometry::build_projective(2, 2).unwrap().point_count(), 7);
    assert_eq!(Geometry::build_projective(3, 2).unwrap().ids_of_dim(2).len(), 35);
    assert_eq!(Geometry::build_projective(3, 4).unwrap().point_count(), 85);
}

/// Singular points by brute force over all vectors.
fn singular_point_count(g: &Geometry) -> usize {
    let f = g.field();
    let d = g.ambient_dim();
    let q = f.order() as usize;
    let mut count = 0;
    for code in 1..q.pow(d as u32) {
        let v: Vec<u8> = (0..d).map(|i| ((code / q.pow(i as u32)) % q) as u8).collect();
        // count each projective point once: its first nonzero entry is 1
        let lead = *v.iter().find(|&&x| x != 0).unwrap();
        if lead != 1 {
            continue;
        }
        if g.quadratic_form(&v) == 0 {
            count += 1;
        }
    }
    count
}

#[test]
fn quadric_points_match_closed_forms_and_brute_force() {
    for (n, q) in [(4usize, 2u32), (4, 3), (5, 2)] {
        let g = Geometry::build_hyperbolic_quadric(n, q).unwrap();
        let (qq, nn) = (q as usize, n as u32);
        let formula = (qq.pow(nn - 1) + 1) * (qq.pow(nn) - 1) / (qq - 1);
        assert_eq!(g.point_count(), formula);
        assert_eq!(singular_point_count(&g), formula);
    }
    // Q(6,q) has (q^6 - 1)/(q - 1) points
    for (q, expected) in [(2u32, 63usize), (3, 364)] {
        let g = Geometry::build_parabolic_quadric(3, q).unwrap();
        assert_eq!(g.point_count(), expected);
        assert_eq!(singular_point_count(&g), expected);
        // maximal singular subspaces are planes
        assert!(!g.ids_of_dim(3).is_empty());
        assert_eq!(g.ambient_dim(), 7);
    }
    assert_eq!(Geometry::build_hyperbolic_quadric(4, 2).unwrap().point_count(), 135);
}

#[test]
fn hyperbolic_maximal_classes_have_equal_size() {
    for n in [4usize, 5] {
        let g = Geometry::build_hyperbolic_quadric(n, 2).unwrap();
        let a = g.vertices_of_type(n - 2).len();
        let b = g.vertices_of_type(n - 1).len();
        assert_eq!(a, b);
        assert_eq!(a + b, g.ids_of_dim(n).len());
    }
}

#[test]
fn chamber_counts_are_poincare_values() {
    let cases: [(Geometry, &[u32], u64); 4] = [
        (Geometry::build_projective(3, 2).unwrap(), &[2, 3, 4], 315),
        (Geometry::build_projective(2, 2).unwrap(), &[2, 3], 21),
        (Geometry::build_hyperbolic_quadric(4, 2).unwrap(), &[2, 4, 4, 6], 42_525),
        (Geometry::build_parabolic_quadric(3, 3).unwrap(), &[2, 4, 6], 58_240),
    ];
    for (g, degrees, expected) in cases {
        let q = g.q() as u64;
        assert_eq!(poincare(degrees, q), expected);
        assert_eq!(g.chamber_count(), expected);
        let chambers = g.enumerate_chambers(100_000).unwrap();
        assert_eq!(chambers.len() as u64, expected, "{}", g.label());
        assert!(chambers.iter().all(|c| g.is_chamber(c)));
        let mut sorted = chambers.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), chambers.len());
    }
}

#[test]
fn chamber_budget_is_enforced() {
    let g = Geometry::build_hyperbolic_quadric(4, 2).unwrap();
    assert!(g.enumerate_chambers(1_000).is_err());
}

#[test]
fn one_or_all_axiom_on_quadrics() {
    for g in [
        Geometry::build_hyperbolic_quadric(4, 2).unwrap(),
        Geometry::build_parabolic_quadric(3, 2).unwrap(),
        Geometry::build_parabolic_quadric(3, 3).unwrap(),
    ] {
        let lines: Vec<u32> = g.ids_of_dim(2).collect();
        for p in g.ids_of_dim(1) {
            for &l in &lines {
                let on = g.points_of(l).iter().filter(|&x| g.collinear(p, x as u32)).count();
                let size = g.points_of(l).len();
                assert!(on == 1 || on == size, "{}: point {p} sees {on} of {size}", g.label());
            }
        }
    }
}

#[test]
fn collinearity_conventions() {
    let pg = Geometry::build_projective(3, 2).unwrap();
    assert!(pg.ids_of_dim(1).all(|p| pg.collinear(0, p)));
    let hq = Geometry::build_hyperbolic_quadric(4, 2).unwrap();
    let f = hq.field();
    for p in hq.ids_of_dim(1).take(20) {
        assert!(hq.collinear(p, p));
        for r in hq.ids_of_dim(1) {
            let b = hq.bilinear_form(hq.point_vector(p), hq.point_vector(r));
            assert_eq!(hq.collinear(p, r), b == 0, "{p} {r}");
        }
    }
    // a singular line is spanned by two collinear points
    let l = hq.ids_of_dim(2).next().unwrap();
    let pts: Vec<usize> = hq.points_of(l).iter().collect();
    let rows = vec![hq.point_vector(pts[0] as u32).clone(), hq.point_vector(pts[1] as u32).clone()];
    assert_eq!(linalg::rank(f, &rows), 2);
    assert_eq!(hq.span(pts[0] as u32, pts[1] as u32), Some(l));
}

#[test]
fn chamber_graphs_are_thick_regular_and_connected() {
    for (g, n) in [
        (Geometry::build_projective(2, 2).unwrap(), 2),
        (Geometry::build_projective(3, 2).unwrap(), 3),
        (Geometry::build_projective(2, 3).unwrap(), 2),
        (Geometry::build_parabolic_quadric(3, 2).unwrap(), 3),
        (Geometry::build_hyperbolic_quadric(4, 2).unwrap(), 4),
    ] {
        let graph = ChamberGraph::build(&g, 100_000).unwrap();
        assert!(graph.is_regular_and_connected(n, g.q() as usize), "{}", g.label());
    }
}

#[test]
fn out_of_range_parameters_are_rejected() {
    assert!(Geometry::build_projective(1, 2).is_err());
    assert!(Geometry::build_projective(6, 2).is_err());
    assert!(Geometry::build_projective(2, 6).is_err());
    assert!(Geometry::build_hyperbolic_quadric(3, 2).is_err());
    assert!(Geometry::build_parabolic_quadric(3, 5).is_err());
}
