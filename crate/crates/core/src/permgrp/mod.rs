//! Permutation groups on {0, ..., degree-1}.
//!
//! [`Permutation`] is an explicit image table. [`PermGroup`] is a generator
//! list plus a lazily built Schreier-Sims stabilizer chain, which supplies
//! order, membership, stabilizers and the backtrack searches in
//! [`search`]. Everything is deterministic: no randomized base selection,
//! orbit points are scanned in ascending order.

mod chain;
pub mod io;
mod search;

pub use chain::StabChain;
pub use search::{
    conjugacy_witnesses, conjugates_into, Ambient, ConjugacyBudget, ConjugacyOutcome,
    ConjugacyReport,
};

use num_bigint::BigUint;
use std::collections::HashMap;
use std::sync::OnceLock;
use thiserror::Error;

/// Exact subgroup intersection walks two stabilizer chains in lockstep; the
/// backtrack is exponential in the worst case, so cap the degree unless the
/// caller insists.
pub const INTERSECTION_MAX_DEGREE: usize = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("images are not a permutation of 0..{0}")]
    NotBijective(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {degree} exceeds the exact-intersection guard {guard}; use intersection_forced to override")]
    IntersectionGuard { degree: usize, guard: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// A permutation of {0, ..., degree-1} stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Permutation, PermError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &img in &images {
            if img as usize >= d || seen[img as usize] {
                return Err(PermError::NotBijective(d));
            }
            seen[img as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Permutation {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cyc in cycles {
            for w in 0..cyc.len() {
                images[cyc[w] as usize] = cyc[(w + 1) % cyc.len()];
            }
        }
        Permutation::from_images(images).expect("cycles must be disjoint and in range")
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Function composition: `(self.compose(other))(i) = self(other(i))`.
    /// The right factor acts first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.degree(),
            other.degree(),
            "composition requires equal degrees"
        );
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                len += 1;
                p = self.images[p] as usize;
            }
            out.push(len);
        }
        out
    }

    /// Even iff degree - #cycles is even.
    pub fn parity(&self) -> Parity {
        let cycles = self.cycle_lengths().len();
        if (self.degree() - cycles) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Multiplicative order: lcm of the cycle lengths, assembled from prime
    /// powers so it cannot overflow.
    pub fn order(&self) -> BigUint {
        let mut max_power: HashMap<u64, u32> = HashMap::new();
        for len in self.cycle_lengths() {
            let mut m = len as u64;
            let mut p = 2u64;
            while p * p <= m {
                if m % p == 0 {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    let entry = max_power.entry(p).or_insert(0);
                    *entry = (*entry).max(e);
                }
                p += 1;
            }
            if m > 1 {
                let entry = max_power.entry(m).or_insert(0);
                *entry = (*entry).max(1);
            }
        }
        let mut ord = BigUint::from(1u32);
        for (p, e) in max_power {
            ord *= BigUint::from(p).pow(e);
        }
        ord
    }

    /// Image of a point set under this permutation.
    pub fn apply_to_set(&self, s: &crate::bits::BitSet) -> crate::bits::BitSet {
        let mut out = crate::bits::BitSet::new(s.capacity());
        for i in s.iter_ones() {
            out.set(self.apply(i as u32) as usize);
        }
        out
    }
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Permutation[")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{img}")?;
        }
        write!(f, "]")
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{img}")?;
        }
        Ok(())
    }
}

/// A permutation group given by generators, with a cached stabilizer chain.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> PermGroup {
        let generators: Vec<Permutation> = generators
            .into_iter()
            .inspect(|g| assert_eq!(g.degree(), degree, "generator degree mismatch"))
            .filter(|g| !g.is_identity())
            .collect();
        PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The Schreier-Sims chain for this group (built once, on demand).
    pub fn stabilizer_chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.stabilizer_chain().order()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.stabilizer_chain().contains(p)
    }

    /// Orbit of a point under the generators, ascending.
    pub fn orbit(&self, point: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        seen[point as usize] = true;
        let mut queue = vec![point];
        let mut at = 0;
        while at < queue.len() {
            let p = queue[at];
            at += 1;
            for g in &self.generators {
                let img = g.apply(p);
                if !seen[img as usize] {
                    seen[img as usize] = true;
                    queue.push(img);
                }
            }
        }
        queue.sort_unstable();
        queue
    }

    /// All orbits, each ascending, ordered by smallest point.
    pub fn orbit_partition(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree as u32 {
            if seen[start as usize] {
                continue;
            }
            let orb = self.orbit(start);
            for &p in &orb {
                seen[p as usize] = true;
            }
            out.push(orb);
        }
        out
    }

    /// Multiset of orbit sizes, sorted ascending. A cheap conjugacy
    /// invariant: conjugate subgroups of Sym have equal multisets.
    pub fn orbit_size_multiset(&self) -> Vec<u64> {
        let mut sizes: Vec<u64> = self.orbit_partition().iter().map(|o| o.len() as u64).collect();
        sizes.sort_unstable();
        sizes
    }

    /// Pointwise stabilizer of one point, from a chain based at that point.
    pub fn point_stabilizer(&self, point: u32) -> PermGroup {
        let chain = StabChain::build(self.degree, &self.generators, &[point]);
        PermGroup::new(self.degree, chain.strong_generators_below(1))
    }

    /// Setwise stabilizer of a point set, by backtrack over a chain whose
    /// base starts with the set.
    pub fn setwise_stabilizer(&self, set: &[u32]) -> PermGroup {
        search::setwise_stabilizer_impl(self, set)
    }

    /// Exact intersection of two groups of the same degree.
    pub fn intersection(&self, other: &PermGroup) -> Result<PermGroup, PermError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch(self.degree, other.degree));
        }
        if self.degree > INTERSECTION_MAX_DEGREE {
            return Err(PermError::IntersectionGuard {
                degree: self.degree,
                guard: INTERSECTION_MAX_DEGREE,
            });
        }
        Ok(search::intersection_impl(self, other))
    }

    /// Intersection without the degree guard. May run a very long time.
    pub fn intersection_forced(&self, other: &PermGroup) -> Result<PermGroup, PermError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(search::intersection_impl(self, other))
    }

    /// True if every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Equality as subgroups of Sym (mutual containment, orders equal).
    pub fn set_equal(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.is_subgroup_of(other)
    }

    /// Visit every element once. Refuses groups larger than `cap`.
    pub fn for_each_element(&self, cap: u64, f: &mut dyn FnMut(&Permutation)) -> Result<(), PermError> {
        let chain = self.stabilizer_chain();
        assert!(
            chain.order() <= BigUint::from(cap),
            "group of order {} exceeds enumeration cap {cap}",
            chain.order()
        );
        chain.for_each_element(f);
        Ok(())
    }

    /// All elements, for groups known to be small.
    pub fn elements(&self, cap: u64) -> Vec<Permutation> {
        let mut out = Vec::new();
        self.for_each_element(cap, &mut |p| out.push(p.clone()))
            .expect("enumeration cap");
        out
    }

    /// True iff every generator is an even permutation, i.e. the group lies
    /// in the alternating group.
    pub fn is_subgroup_of_alternating(&self) -> bool {
        self.generators.iter().all(|g| g.parity() == Parity::Even)
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PermGroup(degree={}, {} generators)",
            self.degree,
            self.generators.len()
        )
    }
}
