//! Weyl distance of two chambers from their intersection-dimension table.
//!
//! Both chambers are extended to complete flags of the ambient space
//! (for quadrics by appending perps of the isotropic members). For each
//! member `V_i` of the first flag, `pi(i)` is the first member `W_j` of the
//! second flag with `dim(V_i cap W_j) > dim(V_{i-1} cap W_j)`. This is the
//! Jordan-Holder permutation; for quadrics its restriction to `i <= n`
//! becomes a signed permutation. Point counts stand in for dimensions since
//! they are monotone in the dimension.

use smallvec::SmallVec;

use crate::bitset::PointSet;
use crate::coxeter::{CoxeterSystem, WeylElement};
use crate::error::{Error, Result};
use crate::geometry::{Chamber, Geometry, GeometryKind};

/// Isotropic flag `U_1 < ... < U_n`. For hyperbolic quadrics `U_n` is the
/// maximal member of the class of node `n`; with that choice the
/// coordinate model's `s_n: e_{n-1} <-> -e_n` is exchange of the other
/// maximal, matching the chamber-graph oracle.
fn isotropic_flag(geom: &Geometry, c: &Chamber) -> SmallVec<[u32; 8]> {
    let v = c.vertices();
    match geom.kind() {
        GeometryKind::Hyperbolic => {
            let n = geom.n();
            let mut out: SmallVec<[u32; 8]> = SmallVec::from_slice(&v[..n - 2]);
            let sub = geom.meet(v[n - 2], v[n - 1]).expect("oriflamme maximals meet in a submaximal");
            out.push(sub);
            out.push(v[n - 1]);
            out
        }
        _ => SmallVec::from_slice(v),
    }
}

/// The signed permutation `perm` with `e_i -> sign * e_|perm[i]|` describing
/// `delta(c, d)` in the standard coordinate model of the Weyl group.
pub fn jordan_holder(geom: &Geometry, c: &Chamber, d: &Chamber) -> Result<SmallVec<[i8; 8]>> {
    let n = geom.n();
    let vf = isotropic_flag(geom, c);
    let wf = isotropic_flag(geom, d);
    let all = PointSet::full(geom.point_count());
    let total = geom.ambient_dim();
    let w_set = |j: usize| -> &PointSet {
        if j <= n {
            geom.points_of(wf[j - 1])
        } else if total - j == 0 {
            &all
        } else {
            geom.perp_points(wf[total - j - 1])
        }
    };
    let rows = if geom.kind() == GeometryKind::Projective { n + 1 } else { n };
    let mut perm: SmallVec<[i8; 8]> = SmallVec::new();
    for i in 1..=rows {
        let vi = if i <= n { geom.points_of(vf[i - 1]) } else { &all };
        let j = (1..=total)
            .find(|&j| {
                let ws = w_set(j);
                let prev = if i == 1 { 0 } else { geom.points_of(vf[i - 2]).intersection_len(ws) };
                vi.intersection_len(ws) > prev
            })
            .ok_or_else(|| Error::Internal("flags do not span the ambient space".into()))?;
        let signed = if geom.kind() == GeometryKind::Projective || j <= n {
            j as i8
        } else {
            -((total + 1 - j) as i8)
        };
        if signed.unsigned_abs() as usize > n + (geom.kind() == GeometryKind::Projective) as usize {
            return Err(Error::Internal(format!("isotropic flag member met the anisotropic middle at {j}")));
        }
        perm.push(signed);
    }
    Ok(perm)
}

/// `delta(c, d)`.
pub fn relative_position(geom: &Geometry, sys: &CoxeterSystem, c: &Chamber, d: &Chamber) -> Result<WeylElement> {
    if sys.coxeter_type() != geom.coxeter_type() {
        return Err(Error::MismatchedSystems { left: geom.coxeter_type().label(), right: sys.coxeter_type().label() });
    }
    let perm = jordan_holder(geom, c, d)?;
    let mut inv: SmallVec<[i8; 8]> = SmallVec::from_elem(0, perm.len());
    for (i, &p) in perm.iter().enumerate() {
        let j = p.unsigned_abs() as usize - 1;
        inv[j] = if p < 0 { -(i as i8 + 1) } else { i as i8 + 1 };
    }
    sys.from_signed_permutation(&inv)
}
