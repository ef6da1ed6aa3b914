//! Long root subgroup geometries: incident point-hyperplane pairs of a
//! projective space (type `A_{n,{1,n}}`) and singular lines of a quadric
//! (types `D_{n,2}` and, for the non-simply-laced checks, `B_{n,2}`).

use std::fmt;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::autos::Action;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, GeometryKind};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MutualPosition {
    /// equal
    D0,
    /// collinear
    D1,
    /// symplectic
    D2,
    /// special
    D2P,
    /// opposite
    D3,
}

impl MutualPosition {
    pub const ALL: [MutualPosition; 5] =
        [MutualPosition::D0, MutualPosition::D1, MutualPosition::D2, MutualPosition::D2P, MutualPosition::D3];

    pub fn label(self) -> &'static str {
        match self {
            MutualPosition::D0 => "0",
            MutualPosition::D1 => "1",
            MutualPosition::D2 => "2",
            MutualPosition::D2P => "2'",
            MutualPosition::D3 => "3",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            MutualPosition::D0 => "d0",
            MutualPosition::D1 => "d1",
            MutualPosition::D2 => "d2",
            MutualPosition::D2P => "d2p",
            MutualPosition::D3 => "d3",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(s: &str) -> Result<Self> {
        MutualPosition::ALL
            .into_iter()
            .find(|p| p.label() == s.trim() || p.key() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown position `{s}`")))
    }
}

impl fmt::Display for MutualPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Formats a position set as `{1,2'}`.
pub fn format_positions(set: &[MutualPosition]) -> String {
    format!("{{{}}}", set.iter().map(|p| p.label()).collect::<Vec<_>>().join(","))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootPoint {
    /// An incident point-hyperplane pair (subspace ids).
    Flag { point: u32, hyperplane: u32 },
    /// A singular line (subspace id).
    Line(u32),
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionHistogram {
    pub d0: u64,
    pub d1: u64,
    pub d2: u64,
    pub d2p: u64,
    pub d3: u64,
}

impl PositionHistogram {
    pub fn counts(&self) -> [u64; 5] {
        [self.d0, self.d1, self.d2, self.d2p, self.d3]
    }

    pub fn from_counts(c: [u64; 5]) -> Self {
        PositionHistogram { d0: c[0], d1: c[1], d2: c[2], d2p: c[3], d3: c[4] }
    }

    pub fn get(&self, p: MutualPosition) -> u64 {
        self.counts()[p.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts().iter().sum()
    }

    /// Positions with nonzero mass.
    pub fn support(&self) -> Vec<MutualPosition> {
        MutualPosition::ALL.into_iter().filter(|&p| self.get(p) > 0).collect()
    }

    /// No root point is mapped to a position in `d`.
    pub fn is_kangaroo(&self, d: &[MutualPosition]) -> bool {
        d.iter().all(|&p| self.get(p) == 0)
    }
}

impl fmt::Display for PositionHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d0={} d1={} d2={} d2p={} d3={}", self.d0, self.d1, self.d2, self.d2p, self.d3)
    }
}

pub struct RootGeometry<'g> {
    geom: &'g Geometry,
    points: Vec<RootPoint>,
    index: FxHashMap<RootPoint, u32>,
}

impl<'g> RootGeometry<'g> {
    pub fn new(geom: &'g Geometry) -> Self {
        let points: Vec<RootPoint> = match geom.kind() {
            GeometryKind::Projective => {
                let hyperplanes: Vec<u32> = geom.ids_of_dim(geom.n()).collect();
                geom.ids_of_dim(1)
                    .flat_map(|p| {
                        hyperplanes
                            .iter()
                            .filter(move |&&h| geom.points_of(h).contains(p as usize))
                            .map(move |&h| RootPoint::Flag { point: p, hyperplane: h })
                    })
                    .collect()
            }
            _ => geom.ids_of_dim(2).map(RootPoint::Line).collect(),
        };
        let index = points.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
        RootGeometry { geom, points, index }
    }

    pub fn geometry(&self) -> &Geometry {
        self.geom
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[RootPoint] {
        &self.points
    }

    pub fn index_of(&self, r: RootPoint) -> Option<u32> {
        self.index.get(&r).copied()
    }

    fn check(&self, r: RootPoint) -> Result<()> {
        if self.index.contains_key(&r) {
            Ok(())
        } else {
            Err(Error::Incompatible(format!("{r:?} is not a root point of {}", self.geom.label())))
        }
    }

    pub fn position(&self, a: RootPoint, b: RootPoint) -> Result<MutualPosition> {
        self.check(a)?;
        self.check(b)?;
        match (a, b) {
            (RootPoint::Flag { point: p, hyperplane: h }, RootPoint::Flag { point: p2, hyperplane: h2 }) => {
                Ok(position_a(self.geom, (p, h), (p2, h2)))
            }
            (RootPoint::Line(l), RootPoint::Line(m)) => position_d(self.geom, l, m),
            _ => Err(Error::Incompatible("root points of different kinds".into())),
        }
    }

    /// Root points at position 1.
    pub fn neighbours(&self, r: RootPoint) -> Vec<RootPoint> {
        let g = self.geom;
        match r {
            RootPoint::Flag { point, hyperplane } => {
                let mut out: Vec<RootPoint> = g
                    .ids_of_dim(g.n())
                    .filter(|&h| h != hyperplane && g.points_of(h).contains(point as usize))
                    .map(|h| RootPoint::Flag { point, hyperplane: h })
                    .collect();
                out.extend(
                    g.points_of(hyperplane)
                        .iter()
                        .filter(|&p| p != point as usize)
                        .map(|p| RootPoint::Flag { point: p as u32, hyperplane }),
                );
                out
            }
            RootPoint::Line(l) => {
                let mut out: Vec<RootPoint> = g
                    .up(l)
                    .iter()
                    .flat_map(|&pl| g.down(pl).iter().copied())
                    .filter(|&m| m != l)
                    .map(RootPoint::Line)
                    .collect();
                out.sort();
                out.dedup();
                out
            }
        }
    }

    /// Image of a root point; a duality sends `(p, H)` to `(H^theta, p^theta)`.
    pub fn image(&self, action: &Action, r: RootPoint) -> RootPoint {
        match r {
            RootPoint::Flag { point, hyperplane } => {
                let (p, h) = (action.image(point), action.image(hyperplane));
                if self.geom.dim(p) == 1 {
                    RootPoint::Flag { point: p, hyperplane: h }
                } else {
                    RootPoint::Flag { point: h, hyperplane: p }
                }
            }
            RootPoint::Line(l) => RootPoint::Line(action.image(l)),
        }
    }

    /// Histogram of `pos(x, x^theta)` over all root points.
    pub fn position_profile(&self, action: &Action) -> Result<PositionHistogram> {
        let counts = self
            .points
            .par_iter()
            .map(|&r| self.position(r, self.image(action, r)).map(|p| p.index()))
            .try_fold(
                || [0u64; 5],
                |mut acc, p| {
                    acc[p?] += 1;
                    Ok::<_, Error>(acc)
                },
            )
            .try_reduce(|| [0u64; 5], |a, b| Ok(std::array::from_fn(|i| a[i] + b[i])))?;
        Ok(PositionHistogram::from_counts(counts))
    }
}

fn position_a(g: &Geometry, (p, h): (u32, u32), (p2, h2): (u32, u32)) -> MutualPosition {
    if p == p2 && h == h2 {
        return MutualPosition::D0;
    }
    if p == p2 || h == h2 {
        return MutualPosition::D1;
    }
    let a = g.points_of(h2).contains(p as usize);
    let b = g.points_of(h).contains(p2 as usize);
    match (a, b) {
        (true, true) => MutualPosition::D2,
        (false, false) => MutualPosition::D3,
        _ => MutualPosition::D2P,
    }
}

fn position_d(g: &Geometry, l: u32, m: u32) -> Result<MutualPosition> {
    if l == m {
        return Ok(MutualPosition::D0);
    }
    let (pl, pm) = (g.points_of(l), g.points_of(m));
    let line_size = pl.len();
    // points of L collinear with every point of M
    let trace = pl.intersection_len(g.perp_points(m));
    match pl.intersection_len(pm) {
        1 if trace == line_size => Ok(MutualPosition::D1),
        1 => Ok(MutualPosition::D2),
        0 if trace == line_size => Ok(MutualPosition::D2),
        0 if trace == 1 => Ok(MutualPosition::D2P),
        0 if trace == 0 => Ok(MutualPosition::D3),
        shared => Err(Error::Internal(format!("lines {l}, {m}: {shared} common points, trace {trace}"))),
    }
}
