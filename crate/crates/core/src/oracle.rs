//! Chamber-graph oracle: Weyl distances read off minimal galleries.
//!
//! Independent of the dimension-table method in [`crate::spectra::relpos`];
//! it only uses the adjacency of chambers and the types of the panels they
//! share.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::coxeter::{CoxeterSystem, WeylElement};
use crate::error::Result;
use crate::geometry::{Chamber, Geometry};

pub struct ChamberGraph {
    chambers: Vec<Chamber>,
    index: FxHashMap<Chamber, u32>,
    /// `(neighbour, node)` pairs.
    adj: Vec<SmallVec<[(u32, u8); 16]>>,
}

impl ChamberGraph {
    pub fn build(geom: &Geometry, cap: u64) -> Result<Self> {
        let chambers = geom.enumerate_chambers(cap)?;
        let index: FxHashMap<Chamber, u32> =
            chambers.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let n = geom.n();
        let mut adj = vec![SmallVec::new(); chambers.len()];
        for node in 0..n {
            let mut panels: FxHashMap<SmallVec<[u32; 8]>, Vec<u32>> = FxHashMap::default();
            for (i, c) in chambers.iter().enumerate() {
                let mut key: SmallVec<[u32; 8]> = SmallVec::from_slice(c.vertices());
                key[node] = u32::MAX;
                panels.entry(key).or_default().push(i as u32);
            }
            for members in panels.values() {
                for &a in members {
                    for &b in members {
                        if a != b {
                            adj[a as usize].push((b, node as u8));
                        }
                    }
                }
            }
        }
        Ok(ChamberGraph { chambers, index, adj })
    }

    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn index_of(&self, c: &Chamber) -> Option<u32> {
        self.index.get(c).copied()
    }

    pub fn neighbours(&self, i: u32) -> &[(u32, u8)] {
        &self.adj[i as usize]
    }

    /// `delta(source, D)` for every chamber `D`, indexed like [`Self::chambers`].
    /// A minimal gallery of type `(i_1, ..., i_k)` gives `s_{i_1} ... s_{i_k}`.
    pub fn distances_from(&self, sys: &CoxeterSystem, source: u32) -> Vec<WeylElement> {
        let mut out: Vec<Option<WeylElement>> = vec![None; self.chambers.len()];
        out[source as usize] = Some(sys.identity());
        let mut queue = VecDeque::from([source]);
        while let Some(c) = queue.pop_front() {
            let w = out[c as usize].unwrap();
            for &(d, node) in &self.adj[c as usize] {
                if out[d as usize].is_none() {
                    out[d as usize] = Some(sys.mul(&w, &sys.generator(node as usize)));
                    queue.push_back(d);
                }
            }
        }
        out.into_iter().map(|w| w.expect("chamber graph is connected")).collect()
    }

    /// Whether the graph is connected, every panel has `q+1` chambers and
    /// every chamber has degree `n q`.
    pub fn is_regular_and_connected(&self, n: usize, q: usize) -> bool {
        if self.adj.iter().any(|a| a.len() != n * q) {
            return false;
        }
        let mut seen = vec![false; self.chambers.len()];
        seen[0] = true;
        let mut stack = vec![0u32];
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for &(d, _) in &self.adj[c as usize] {
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    count += 1;
                    stack.push(d);
                }
            }
        }
        count == self.chambers.len()
    }
}
