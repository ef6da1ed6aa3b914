//! Recognising the fixed structures that characterise uniclass maps.

use serde::Serialize;

use crate::autos::Action;
use crate::bitset::PointSet;
use crate::geometry::{Geometry, GeometryKind};

/// How "submaximal" is read in the ideal-subspace test.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealReading {
    /// Submaximal among the singular subspaces inside the fixed point set.
    Relative,
    /// Submaximal in the ambient polar space.
    Ambient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Substructure {
    Identity,
    /// A duality of a projective space with every point absolute.
    SymplecticPolarity,
    /// The fixed lines partition the point set.
    ElementwiseFixedSpread,
    /// The fixed points form an ideal subspace; `rank` is the vector
    /// dimension of its maximal singular subspaces.
    IdealSubspace { rank: usize, reading: IdealReading },
    None,
}

impl Substructure {
    pub fn name(&self) -> String {
        match self {
            Substructure::Identity => "identity".into(),
            Substructure::SymplecticPolarity => "symplectic-polarity".into(),
            Substructure::ElementwiseFixedSpread => "fixed-spread".into(),
            Substructure::IdealSubspace { rank, reading } => {
                let r = match reading {
                    IdealReading::Relative => "relative",
                    IdealReading::Ambient => "ambient",
                };
                format!("ideal-subspace(rank {rank}, {r})")
            }
            Substructure::None => "none".into(),
        }
    }
}

/// Tries the known shapes in order. The ideal-subspace test uses the
/// relative reading; see [`ideal_subspace`] for the ambient one.
pub fn detect_weyl_substructure(geom: &Geometry, action: &Action) -> Substructure {
    if action.is_identity() {
        return Substructure::Identity;
    }
    if is_symplectic_polarity(geom, action) {
        return Substructure::SymplecticPolarity;
    }
    if is_fixed_spread(geom, action) {
        return Substructure::ElementwiseFixedSpread;
    }
    if let Some(rank) = ideal_subspace(geom, action, IdealReading::Relative) {
        return Substructure::IdealSubspace { rank, reading: IdealReading::Relative };
    }
    Substructure::None
}

fn is_duality(geom: &Geometry, action: &Action) -> bool {
    geom.kind() == GeometryKind::Projective && geom.dim(action.image(0)) == geom.n()
}

pub fn is_symplectic_polarity(geom: &Geometry, action: &Action) -> bool {
    is_duality(geom, action)
        && (0..geom.subspace_total() as u32).all(|id| action.image(action.image(id)) == id)
        && geom.ids_of_dim(1).all(|p| geom.points_of(action.image(p)).contains(p as usize))
}

pub fn is_fixed_spread(geom: &Geometry, action: &Action) -> bool {
    if is_duality(geom, action) || geom.ids_of_dim(1).any(|p| action.fixes(p)) {
        return false;
    }
    let mut covered = PointSet::empty(geom.point_count());
    let mut count = 0;
    for l in geom.ids_of_dim(2).filter(|&l| action.fixes(l)) {
        let pts = geom.points_of(l);
        if covered.intersection_len(pts) > 0 {
            return false;
        }
        covered.union_with(pts);
        count += pts.len();
    }
    count == geom.point_count()
}

/// Points fixed by a collineation.
pub fn fixed_points(geom: &Geometry, action: &Action) -> PointSet {
    PointSet::from_indices(geom.point_count(), geom.ids_of_dim(1).filter(|&p| action.fixes(p)).map(|p| p as usize))
}

/// `Some(rank)` when the fixed points of a polar collineation form an ideal
/// subspace: a nonempty subspace `F` such that for each submaximal singular
/// `U` inside `F` every maximal singular subspace `M` through `U` meets `F`
/// in exactly one subspace of dimension `dim U + 1`.
pub fn ideal_subspace(geom: &Geometry, action: &Action, reading: IdealReading) -> Option<usize> {
    if !geom.kind().is_polar() {
        return None;
    }
    let fixed = fixed_points(geom, action);
    if fixed.is_empty() {
        return None;
    }
    // closed under singular lines: a line with two fixed points is fixed pointwise
    for l in geom.ids_of_dim(2) {
        let m = geom.points_of(l).intersection_len(&fixed);
        if m >= 2 && m < geom.points_of(l).len() {
            return None;
        }
    }
    let inside = |id: u32| geom.points_of(id).is_subset(&fixed);
    let rank = (1..=geom.n()).rev().find(|&k| geom.ids_of_dim(k).any(inside))?;
    let n = geom.n();
    let sub_dim = match reading {
        IdealReading::Relative => rank - 1,
        IdealReading::Ambient => n - 1,
    };
    if sub_dim > rank {
        return None;
    }
    let q = geom.q() as usize;
    let dim_of_count = |c: usize| {
        let (mut d, mut size) = (0, 0usize);
        while size < c {
            size = size * q + 1;
            d += 1;
        }
        d
    };
    let maximals: Vec<u32> = geom.ids_of_dim(n).collect();
    let check = |u: Option<u32>| {
        maximals
            .iter()
            .filter(|&&m| u.is_none_or(|u| geom.points_of(u).is_subset(geom.points_of(m))))
            .all(|&m| dim_of_count(geom.points_of(m).intersection_len(&fixed)) == sub_dim + 1)
    };
    let ok = if sub_dim == 0 {
        check(None)
    } else {
        let subs: Vec<u32> = geom.ids_of_dim(sub_dim).filter(|&u| inside(u)).collect();
        !subs.is_empty() && subs.into_iter().all(|u| check(Some(u)))
    };
    ok.then_some(rank)
}

/// The common projective dimension of `M cap M^theta` over all maximal
/// singular subspaces `M` (`-1` for empty meets), if there is one.
pub fn check_int_k(geom: &Geometry, action: &Action) -> Option<i32> {
    if !geom.kind().is_polar() {
        return None;
    }
    let q = geom.q() as usize;
    let mut common: Option<i32> = None;
    for m in geom.ids_of_dim(geom.n()) {
        let c = geom.points_of(m).intersection_len(geom.points_of(action.image(m)));
        let (mut d, mut size) = (-1i32, 0usize);
        while size < c {
            size = size * q + 1;
            d += 1;
        }
        match common {
            None => common = Some(d),
            Some(k) if k != d => return None,
            _ => {}
        }
    }
    common
}
