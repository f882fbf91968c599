//! Backtracking isomorphism search between incidence structures.
//!
//! Points of `d1` are assigned images in `d2` in index order. For every
//! block B of `d1` the search keeps the set of candidate target blocks:
//! those whose intersection with the already-assigned image points equals
//! the image of B's assigned members. A block losing all candidates prunes
//! the branch. Any full assignment is a genuine isomorphism: each block then
//! has its exact image among the target blocks, and distinctness plus equal
//! counts force the block correspondence to be a bijection.

use super::IncidenceStructure;
use crate::bits::BitSet;
use crate::permgrp::Permutation;

/// A bijection of points carrying blocks onto blocks, if one exists. The
/// returned permutation maps point indices of `d1` to point indices of `d2`
/// and is lexicographically least in image order.
pub fn find_isomorphism(d1: &IncidenceStructure, d2: &IncidenceStructure) -> Option<Permutation> {
    isomorphism_extending(d1, d2, &[])
}

/// Isomorphism search with the first assignments forced: `prefix[j]` must be
/// `(j, image_of_j)`, i.e. the forced points are exactly 0..prefix.len()-1
/// in order. Used to walk point stabilizer towers.
pub fn isomorphism_extending(
    d1: &IncidenceStructure,
    d2: &IncidenceStructure,
    prefix: &[(u32, u32)],
) -> Option<Permutation> {
    if d1.v() != d2.v() || d1.num_blocks() != d2.num_blocks() {
        return None;
    }
    if sorted_block_sizes(d1) != sorted_block_sizes(d2)
        || sorted_degrees(d1) != sorted_degrees(d2)
    {
        return None;
    }
    let mut st = SearchState::new(d1, d2);
    for (j, &(i, p)) in prefix.iter().enumerate() {
        assert_eq!(i as usize, j, "prefix must assign points 0,1,... in order");
        if !st.assign(p) {
            return None;
        }
    }
    st.search()
}

/// Check a claimed isomorphism: the multiset of mapped blocks of `d1` must
/// equal the multiset of blocks of `d2`.
pub fn is_isomorphism(
    d1: &IncidenceStructure,
    d2: &IncidenceStructure,
    p: &Permutation,
) -> bool {
    if p.degree() != d1.v() || d1.v() != d2.v() || d1.num_blocks() != d2.num_blocks() {
        return false;
    }
    let mut mapped: Vec<Vec<u64>> = d1
        .blocks()
        .iter()
        .map(|b| p.apply_to_set(&b.members).words().to_vec())
        .collect();
    let mut target: Vec<Vec<u64>> = d2
        .blocks()
        .iter()
        .map(|b| b.members.words().to_vec())
        .collect();
    mapped.sort();
    target.sort();
    mapped == target
}

fn sorted_block_sizes(d: &IncidenceStructure) -> Vec<usize> {
    let mut s: Vec<usize> = d.blocks().iter().map(|b| b.members.count()).collect();
    s.sort_unstable();
    s
}

fn sorted_degrees(d: &IncidenceStructure) -> Vec<u32> {
    let mut deg = vec![0u32; d.v()];
    for b in d.blocks() {
        for i in b.members.iter_ones() {
            deg[i] += 1;
        }
    }
    deg.sort_unstable();
    deg
}

struct SearchState<'a> {
    d2: &'a IncidenceStructure,
    v: usize,
    nb: usize,
    img: Vec<u32>,
    assigned: usize,
    used: BitSet,
    assigned_images: BitSet,
    /// blocks of d1 through each point of d1
    through: Vec<Vec<usize>>,
    /// per d1 block: images of its assigned members
    traces: Vec<BitSet>,
    /// per d1 block: candidate d2 block indices
    cands: Vec<BitSet>,
    /// snapshots of (traces, cands, assigned_images) per assignment depth
    trail: Vec<(Vec<BitSet>, Vec<BitSet>, BitSet)>,
}

impl<'a> SearchState<'a> {
    fn new(d1: &'a IncidenceStructure, d2: &'a IncidenceStructure) -> SearchState<'a> {
        let v = d1.v();
        let nb = d1.num_blocks();
        let mut through = vec![Vec::new(); v];
        for (bi, b) in d1.blocks().iter().enumerate() {
            for i in b.members.iter_ones() {
                through[i].push(bi);
            }
        }
        let mut full = BitSet::new(nb);
        for j in 0..nb {
            full.set(j);
        }
        SearchState {
            d2,
            v,
            nb,
            img: vec![0; v],
            assigned: 0,
            used: BitSet::new(v),
            assigned_images: BitSet::new(v),
            through,
            traces: vec![BitSet::new(v); nb],
            cands: vec![full; nb],
            trail: Vec::new(),
        }
    }

    /// Assign the next point (index `self.assigned`) the image `p`. Returns
    /// false (with state unchanged) when the assignment is inconsistent.
    fn assign(&mut self, p: u32) -> bool {
        if self.used.get(p as usize) {
            return false;
        }
        self.trail.push((
            self.traces.clone(),
            self.cands.clone(),
            self.assigned_images.clone(),
        ));
        let i = self.assigned;
        self.img[i] = p;
        self.used.set(p as usize);
        self.assigned_images.set(p as usize);
        for &bi in &self.through[i] {
            self.traces[bi].set(p as usize);
        }
        // re-filter all candidate sets against the grown image set
        for bi in 0..self.nb {
            let trace = &self.traces[bi];
            let mut kept = BitSet::new(self.nb);
            let mut any = false;
            for cj in self.cands[bi].iter_ones() {
                if self.d2.blocks()[cj]
                    .members
                    .masked_eq(&self.assigned_images, trace)
                {
                    kept.set(cj);
                    any = true;
                }
            }
            if !any {
                self.undo();
                return false;
            }
            self.cands[bi] = kept;
        }
        self.assigned += 1;
        true
    }

    fn undo(&mut self) {
        let (traces, cands, images) = self.trail.pop().expect("undo without assign");
        self.traces = traces;
        self.cands = cands;
        self.assigned_images = images;
        // `assigned` was only bumped on success; recover i from trail depth
        let i = self.trail.len();
        if self.assigned > i {
            self.assigned = i;
        }
        self.used.unset(self.img[i] as usize);
    }

    fn search(&mut self) -> Option<Permutation> {
        if self.assigned == self.v {
            return Some(
                Permutation::from_images(self.img.clone()).expect("images are a bijection"),
            );
        }
        for p in 0..self.v as u32 {
            if self.used.get(p as usize) {
                continue;
            }
            if self.assign(p) {
                if let Some(found) = self.search() {
                    return Some(found);
                }
                self.undo();
            }
        }
        None
    }
}
