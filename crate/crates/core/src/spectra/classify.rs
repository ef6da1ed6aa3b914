//! Recognising {2,2'}-kangaroos.
//!
//! For projective collineations the kangaroo property is compared with the
//! fixed structure (central or Baer collineation). For dualities it is
//! compared with anisotropy, and for polar collineations (positions taken
//! on lines) with "anisotropic, or lines are the only singular subspaces
//! mapped to opposites".

use serde::Serialize;

use super::diagram::subspaces_opposite;
use super::substructure::fixed_points;
use crate::autos::Action;
use crate::error::Result;
use crate::geometry::{Geometry, GeometryKind};
use crate::rootgeom::{MutualPosition, PositionHistogram};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedShape {
    Trivial,
    /// Fixes a hyperplane pointwise and all hyperplanes through a point;
    /// `elation` when that point lies on the axis.
    Central { elation: bool },
    /// Fixes a subgeometry over the subfield of index 2 pointwise.
    Baer,
    Anisotropic,
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict22 {
    /// Never maps a root point to position 2 or 2'.
    pub kangaroo: bool,
    pub shape: FixedShape,
    /// The kangaroo property agrees with what the shape predicts.
    pub consistent: bool,
    /// Polar case: dimensions (vector) of singular subspaces mapped to an
    /// opposite.
    pub opposite_dims: Vec<usize>,
}

const TWO_TWO: [MutualPosition; 2] = [MutualPosition::D2, MutualPosition::D2P];

/// `anisotropic` is the chamber-level verdict (every chamber mapped to an
/// opposite), computed by the caller from the spectrum.
pub fn classify_22prime(geom: &Geometry, action: &Action, profile: &PositionHistogram, anisotropic: bool) -> Verdict22 {
    let kangaroo = profile.is_kangaroo(&TWO_TWO);
    let duality = geom.kind() == GeometryKind::Projective && geom.dim(action.image(0)) != 1;
    if duality {
        let shape = if anisotropic { FixedShape::Anisotropic } else { FixedShape::Other };
        return Verdict22 { kangaroo, shape, consistent: !kangaroo || anisotropic, opposite_dims: vec![] };
    }
    if geom.kind().is_polar() {
        let opposite_dims = opposite_dimensions(geom, action);
        let only_lines = opposite_dims == [2];
        let shape = if action.is_identity() {
            FixedShape::Trivial
        } else if anisotropic {
            FixedShape::Anisotropic
        } else {
            FixedShape::Other
        };
        // the trivial map is excluded from the equivalence
        let predicted = action.is_identity() || anisotropic || only_lines;
        return Verdict22 { kangaroo, shape, consistent: kangaroo == predicted, opposite_dims };
    }
    let shape = collineation_shape(geom, action);
    let consistent = !kangaroo || matches!(shape, FixedShape::Trivial | FixedShape::Central { .. } | FixedShape::Baer);
    Verdict22 { kangaroo, shape, consistent, opposite_dims: vec![] }
}

/// Vector dimensions `k` such that some singular `k`-space is mapped to an
/// opposite one.
pub fn opposite_dimensions(geom: &Geometry, action: &Action) -> Vec<usize> {
    (1..=geom.n())
        .filter(|&k| geom.ids_of_dim(k).any(|u| subspaces_opposite(geom, u, action.image(u))))
        .collect()
}

/// Shape of the fixed structure of a projective collineation.
pub fn collineation_shape(geom: &Geometry, action: &Action) -> FixedShape {
    if action.is_identity() {
        return FixedShape::Trivial;
    }
    let n = geom.n();
    let fixed = fixed_points(geom, action);
    let axes: Vec<u32> = geom.ids_of_dim(n).filter(|&h| geom.points_of(h).is_subset(&fixed)).collect();
    if let [axis] = axes[..] {
        // the centre: a point all of whose hyperplanes are fixed
        let centre = geom
            .ids_of_dim(1)
            .find(|&p| geom.ids_of_dim(n).filter(|&h| geom.points_of(h).contains(p as usize)).all(|h| action.fixes(h)));
        if let Some(c) = centre {
            return FixedShape::Central { elation: geom.points_of(axis).contains(c as usize) };
        }
    }
    if is_baer(geom, &fixed) {
        return FixedShape::Baer;
    }
    FixedShape::Other
}

/// A point set is a Baer subgeometry when `q = r^2`, it has as many points
/// as `PG(n, r)`, and every line meets it in 0, 1 or `r+1` points with at
/// least `n+1` independent ones (checked through the count and the line
/// condition).
fn is_baer(geom: &Geometry, fixed: &crate::bitset::PointSet) -> bool {
    let q = geom.q() as u64;
    let r = (q as f64).sqrt().round() as u64;
    if r * r != q || r < 2 {
        return false;
    }
    let n = geom.n() as u32;
    let expected = (r.pow(n + 1) - 1) / (r - 1);
    if fixed.len() as u64 != expected {
        return false;
    }
    geom.ids_of_dim(2).all(|l| {
        let m = geom.points_of(l).intersection_len(fixed) as u64;
        m <= 1 || m == r + 1
    })
}

/// Convenience wrapper returning the verdict together with the profile.
pub fn classify_with_profile(
    geom: &Geometry,
    action: &Action,
    roots: &crate::rootgeom::RootGeometry<'_>,
    anisotropic: bool,
) -> Result<(PositionHistogram, Verdict22)> {
    let profile = roots.position_profile(action)?;
    let v = classify_22prime(geom, action, &profile, anisotropic);
    Ok((profile, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::{baer_collineation, central_collineation};
    use crate::coxeter::CoxeterSystem;
    use crate::rootgeom::RootGeometry;

    #[test]
    fn baer_and_elation_shapes() {
        let g = Geometry::build_projective(2, 4).unwrap();
        let sys = CoxeterSystem::build(g.coxeter_type()).unwrap();
        let roots = RootGeometry::new(&g);
        let act = baer_collineation(&g).unwrap().action(&g, &sys).unwrap();
        let (_, v) = classify_with_profile(&g, &act, &roots, false).unwrap();
        assert!(v.kangaroo);
        assert_eq!(v.shape, FixedShape::Baer);
        let f = g.field();
        let (z, o) = (f.from_int(0), f.from_int(1));
        let (el, _) = central_collineation(&g, &[o, z, z], &[z, z, o], o).unwrap();
        let act = el.action(&g, &sys).unwrap();
        let (_, v) = classify_with_profile(&g, &act, &roots, false).unwrap();
        assert!(v.kangaroo && v.consistent);
        assert_eq!(v.shape, FixedShape::Central { elation: true });
    }
}
