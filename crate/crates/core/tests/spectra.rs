use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uniclass_core::autos::{
    quadric_root_elation, random_automorphism, spread_collineation, symplectic_polarity, Automorphism,
};
use uniclass_core::geometry::Geometry;
use uniclass_core::spectra::diagram::{orbit_by_vertices, DiagramKind};
use uniclass_core::spectra::{relative_position, vertex_opposite, SpectrumContext, SpectrumMode};

/// Vertices are opposite iff some chamber through `w` is opposite a fixed
/// chamber through `v`.
#[test]
fn vertex_opposition_matches_chamber_search() {
    for g in [Geometry::build_hyperbolic_quadric(4, 2).unwrap(), Geometry::build_projective(3, 2).unwrap()] {
        let ctx = SpectrumContext::with_cap(&g, 100_000).unwrap();
        let sys = ctx.system();
        let w0 = sys.longest_element();
        let chambers = ctx.chambers().unwrap();
        let sigma0 = sys.opposition_involution();
        for node in [0usize, 1] {
            let other = sigma0.apply(node);
            for v in g.vertices_of_type(node).into_iter().step_by(97).take(3) {
                let c = chambers.iter().find(|c| c.vertices()[node] == v).unwrap();
                for w in g.vertices_of_type(other) {
                    let by_chambers = chambers
                        .iter()
                        .filter(|d| d.vertices()[other] == w)
                        .any(|d| relative_position(&g, sys, c, d).unwrap() == w0);
                    assert_eq!(vertex_opposite(&g, sys, v, w).unwrap(), by_chambers, "{} {v} {w}", g.label());
                }
            }
        }
    }
}

#[test]
fn vertex_opposition_rejects_wrong_types() {
    let g = Geometry::build_projective(3, 2).unwrap();
    let ctx = SpectrumContext::with_cap(&g, 0).unwrap();
    let p = g.vertices_of_type(0)[0];
    let q = g.vertices_of_type(0)[1];
    assert!(vertex_opposite(&g, ctx.system(), p, q).is_err());
}

#[test]
fn diagrams_agree_with_vertex_route() {
    let cases: Vec<(Geometry, fn(&Geometry) -> uniclass_core::Result<Automorphism>)> = vec![
        (Geometry::build_projective(3, 2).unwrap(), symplectic_polarity),
        (Geometry::build_projective(3, 2).unwrap(), spread_collineation),
        (Geometry::build_hyperbolic_quadric(4, 2).unwrap(), spread_collineation),
        (Geometry::build_hyperbolic_quadric(4, 2).unwrap(), quadric_root_elation),
        (Geometry::build_projective(2, 2).unwrap(), |g| random_automorphism(g, 9)),
    ];
    let mut decided = 0;
    for (g, build) in &cases {
        let ctx = SpectrumContext::with_cap(g, 100_000).unwrap();
        let action = ctx.action(&build(g).unwrap()).unwrap();
        let r = ctx.analyse_action(&action, SpectrumMode::Exhaustive).unwrap();
        for (kind, d) in [(DiagramKind::Fix, &r.fix_diagram), (DiagramKind::Opposition, &r.opposition_diagram)] {
            for orbit in d.twist.orbits() {
                if let Some(v) = orbit_by_vertices(g, ctx.system(), &action, kind, &orbit) {
                    assert_eq!(d.encircled.contains(&orbit), v, "{} {kind:?} {orbit:?}", g.label());
                    decided += 1;
                }
            }
        }
    }
    assert!(decided > 20);
}

#[test]
fn spectra_are_deterministic_and_sampling_is_seeded() {
    let g = Geometry::build_hyperbolic_quadric(4, 2).unwrap();
    let ctx = SpectrumContext::with_cap(&g, 100_000).unwrap();
    let a = random_automorphism(&g, 21).unwrap();
    let one = ctx.analyse(&a, SpectrumMode::Exhaustive).unwrap();
    let two = ctx.analyse(&a, SpectrumMode::Exhaustive).unwrap();
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&two).unwrap());
    let total: u64 = one.spectrum.iter().map(|e| e.chambers).sum();
    assert_eq!(total, 42_525);

    let mode = SpectrumMode::Sampled { samples: 500, seed: 3 };
    let s1 = ctx.analyse(&a, mode).unwrap();
    let s2 = ctx.analyse(&a, mode).unwrap();
    assert_eq!(serde_json::to_string(&s1).unwrap(), serde_json::to_string(&s2).unwrap());
    assert_eq!(s1.chambers_examined, 500);
    // a sample never sees more than the full spectrum
    assert!(s1.elements.iter().all(|w| one.elements.contains(w)));
}

#[test]
fn identity_spectrum_is_trivial() {
    let g = Geometry::build_projective(3, 2).unwrap();
    let ctx = SpectrumContext::with_cap(&g, 1_000).unwrap();
    let r = ctx.analyse(&Automorphism::identity(&g), SpectrumMode::Exhaustive).unwrap();
    assert_eq!(r.spectrum.len(), 1);
    assert_eq!(r.spectrum[0].word, "");
    assert!(r.uniclass && r.domestic == Some(true) && r.anisotropic == Some(false));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relative_position_inverts(seed in any::<u64>()) {
        let g = Geometry::build_parabolic_quadric(3, 2).unwrap();
        let ctx = SpectrumContext::with_cap(&g, 0).unwrap();
        let sys = ctx.system();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = g.random_chamber(&mut rng);
        let d = g.random_chamber(&mut rng);
        let cd = relative_position(&g, sys, &c, &d).unwrap();
        prop_assert_eq!(relative_position(&g, sys, &d, &c).unwrap(), sys.inverse(&cd));
        prop_assert!(relative_position(&g, sys, &c, &c).unwrap().is_identity());
    }

    #[test]
    fn automorphisms_twist_relative_positions(seed in any::<u64>()) {
        let g = Geometry::build_projective(3, 2).unwrap();
        let ctx = SpectrumContext::with_cap(&g, 0).unwrap();
        let sys = ctx.system();
        let a = random_automorphism(&g, seed).unwrap();
        let action = ctx.action(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let c = g.random_chamber(&mut rng);
        let d = g.random_chamber(&mut rng);
        let before = relative_position(&g, sys, &c, &d).unwrap();
        let after = relative_position(&g, sys, &action.chamber_image(&g, &c), &action.chamber_image(&g, &d)).unwrap();
        prop_assert_eq!(after, sys.twist(&before, &action.sigma));
    }

    #[test]
    fn histograms_cover_every_root_point(seed in any::<u64>()) {
        let g = Geometry::build_projective(2, 3).unwrap();
        let ctx = SpectrumContext::with_cap(&g, 0).unwrap();
        let a = random_automorphism(&g, seed).unwrap();
        let h = ctx.roots().position_profile(&ctx.action(&a).unwrap()).unwrap();
        let back = ctx.roots().position_profile(&ctx.action(&a.inverse(g.field())).unwrap()).unwrap();
        prop_assert_eq!(h.total(), ctx.roots().len() as u64);
        prop_assert_eq!(h, back);
    }
}
