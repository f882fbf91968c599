//! Deterministic Schreier-Sims stabilizer chains.
//!
//! A chain is a sequence of levels; level i stores a base point b_i, the
//! strong generators attached at that level, the orbit of b_i, and an
//! explicit transversal u_p with u_p(b_i) = p for every orbit point p. The
//! generating set effective at level i is the union of the generators
//! attached at levels i and deeper (every one of them fixes b_0..b_{i-1}),
//! and the orbit at level i is computed under that whole union.
//!
//! After construction the chain is verified in the classic way: walking from
//! the deepest level up, every Schreier generator u_{s(p)}^{-1} s u_p must
//! sift to the identity through the levels below; any non-trivial residue is
//! attached at the level whose base it is first to move, the affected orbits
//! are rebuilt, and verification resumes there. On exit the product of the
//! orbit lengths is the group order and sifting decides membership.
//!
//! `base_hint` forces the initial base points (in order, one level each,
//! even if some end up with singleton orbits); the setwise-stabilizer and
//! intersection backtracks rely on that alignment.

use super::Permutation;
use num_bigint::BigUint;

#[derive(Clone)]
pub(crate) struct ChainLevel {
    pub base: u32,
    /// Strong generators attached at this level: they fix the bases of all
    /// earlier levels. The level acts with these plus everything deeper.
    pub gens: Vec<Permutation>,
    /// transversal[p] = Some(u) with u(base) = p, for p in the orbit.
    pub transversal: Vec<Option<Permutation>>,
}

impl ChainLevel {
    fn new(degree: usize, base: u32) -> ChainLevel {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(Permutation::identity(degree));
        ChainLevel {
            base,
            gens: Vec::new(),
            transversal,
        }
    }

    pub fn orbit_len(&self) -> usize {
        self.transversal.iter().filter(|t| t.is_some()).count()
    }

    /// Orbit points in ascending order.
    pub fn orbit_points(&self) -> impl Iterator<Item = u32> + '_ {
        self.transversal
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .map(|(p, _)| p as u32)
    }
}

#[derive(Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<ChainLevel>,
}

impl StabChain {
    /// Build a verified chain for the group generated by `gens`, with the
    /// first base points forced to `base_hint` (one pre-created level per
    /// hint point).
    pub fn build(degree: usize, gens: &[Permutation], base_hint: &[u32]) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: base_hint
                .iter()
                .map(|&b| {
                    assert!((b as usize) < degree, "base point out of range");
                    ChainLevel::new(degree, b)
                })
                .collect(),
        };
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            if !g.is_identity() {
                chain.attach(g.clone());
            }
        }
        chain.verify();
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|lv| lv.base).collect()
    }

    pub(crate) fn levels(&self) -> &[ChainLevel] {
        &self.levels
    }

    pub fn order(&self) -> BigUint {
        let mut ord = BigUint::from(1u32);
        for lv in &self.levels {
            ord *= BigUint::from(lv.orbit_len());
        }
        ord
    }

    /// Sift: divide off a transversal element per level; membership means
    /// the residue reaches the end as the identity.
    pub fn contains(&self, p: &Permutation) -> bool {
        debug_assert_eq!(p.degree(), self.degree);
        let (residue, _) = self.strip(p.clone(), 0);
        residue.is_identity()
    }

    /// Strong generators fixing the first `level` base points: everything
    /// attached at the levels from `level` on.
    pub fn strong_generators_below(&self, level: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        for lv in self.levels.iter().skip(level) {
            for g in &lv.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Divide off transversal elements through levels `from`..; returns the
    /// residue together with the level at which sifting stopped (the level
    /// whose orbit missed the residue's base image, or one past the last
    /// level). The residue fixes the bases of all levels before the
    /// returned one.
    fn strip(&self, p: Permutation, from: usize) -> (Permutation, usize) {
        let mut residue = p;
        for (l, lv) in self.levels.iter().enumerate().skip(from) {
            let img = residue.apply(lv.base);
            match &lv.transversal[img as usize] {
                Some(u) => residue = u.inverse().compose(&residue),
                None => return (residue, l),
            }
        }
        (residue, self.levels.len())
    }

    /// Attach a non-identity element at the first level whose base it moves,
    /// appending a fresh level when it fixes every existing base. Returns
    /// the level index. Orbits are not touched here.
    fn attach(&mut self, g: Permutation) -> usize {
        debug_assert!(!g.is_identity());
        let mut l = 0;
        while l < self.levels.len() && g.apply(self.levels[l].base) == self.levels[l].base {
            l += 1;
        }
        if l == self.levels.len() {
            let base = (0..self.degree as u32)
                .find(|&p| g.apply(p) != p)
                .expect("non-identity permutation moves a point");
            self.levels.push(ChainLevel::new(self.degree, base));
        }
        self.levels[l].gens.push(g);
        l
    }

    /// Generators effective at `level`: attached there or deeper.
    fn effective_gens(&self, level: usize) -> Vec<Permutation> {
        self.levels
            .iter()
            .skip(level)
            .flat_map(|lv| lv.gens.iter().cloned())
            .collect()
    }

    /// Recompute the orbit/transversal of one level under its effective
    /// generators. Forward applications suffice: a finite set closed under
    /// every generator is closed under the generated group.
    fn rebuild_orbit(&mut self, level: usize) {
        let degree = self.degree;
        let gens = self.effective_gens(level);
        let base = self.levels[level].base;
        let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
        transversal[base as usize] = Some(Permutation::identity(degree));
        let mut queue = vec![base];
        let mut at = 0;
        while at < queue.len() {
            let p = queue[at];
            at += 1;
            let u_p = transversal[p as usize].clone().unwrap();
            for s in &gens {
                let img = s.apply(p);
                if transversal[img as usize].is_none() {
                    transversal[img as usize] = Some(s.compose(&u_p));
                    queue.push(img);
                }
            }
        }
        self.levels[level].transversal = transversal;
    }

    /// First Schreier generator of `level` whose sift through the deeper
    /// levels leaves a non-identity residue, as (residue, stop level).
    fn first_failure(&self, level: usize) -> Option<(Permutation, usize)> {
        let gens = self.effective_gens(level);
        let lv = &self.levels[level];
        for p in lv.orbit_points() {
            let u_p = lv.transversal[p as usize].as_ref().unwrap();
            for s in &gens {
                let img = s.apply(p);
                let u_img = lv.transversal[img as usize]
                    .as_ref()
                    .expect("orbit is closed under effective generators");
                let schreier = u_img.inverse().compose(&s.compose(u_p));
                if schreier.is_identity() {
                    continue;
                }
                let (residue, stop) = self.strip(schreier, level + 1);
                if !residue.is_identity() {
                    return Some((residue, stop));
                }
            }
        }
        None
    }

    /// Rebuild all orbits, then verify every level deepest-first. A failure
    /// at level i yields a residue fixing the bases of levels 0..stop-1; it
    /// is attached (at `stop`, by construction the first base it moves), the
    /// orbits whose effective generators grew and were below the verified
    /// region are rebuilt, and verification resumes at the attachment level.
    /// Progress: each failure either extends an orbit or appends a level.
    fn verify(&mut self) {
        for l in 0..self.levels.len() {
            self.rebuild_orbit(l);
        }
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() - 1;
        loop {
            if let Some((residue, stop)) = self.first_failure(i) {
                let at = self.attach(residue);
                debug_assert_eq!(at, stop);
                debug_assert!(at > i, "residue was sifted through the levels above");
                for m in (i + 1)..=at {
                    self.rebuild_orbit(m);
                }
                i = at;
                continue;
            }
            if i == 0 {
                return;
            }
            i -= 1;
        }
    }

    /// Insert one more generator into a verified chain, keeping it verified.
    /// Returns false when the element was already a member.
    pub fn insert_generator(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "generator degree mismatch");
        if g.is_identity() || self.contains(g) {
            return false;
        }
        let at = self.attach(g.clone());
        // effective generator sets grew at `at` and everywhere above
        for m in 0..=at {
            self.rebuild_orbit(m);
        }
        // deeper levels are untouched, so verifying from `at` upward
        // restores the invariant for the whole chain
        let mut i = at;
        loop {
            if let Some((residue, stop)) = self.first_failure(i) {
                let new_at = self.attach(residue);
                debug_assert_eq!(new_at, stop);
                for m in (i + 1)..=new_at {
                    self.rebuild_orbit(m);
                }
                i = new_at;
                continue;
            }
            if i == 0 {
                return true;
            }
            i -= 1;
        }
    }

    /// Visit every group element exactly once, as products of transversal
    /// elements, deepest level first.
    pub fn for_each_element(&self, f: &mut dyn FnMut(&Permutation)) {
        fn rec(
            chain: &StabChain,
            level: usize,
            acc: &Permutation,
            f: &mut dyn FnMut(&Permutation),
        ) {
            if level == chain.levels.len() {
                f(acc);
                return;
            }
            for p in chain.levels[level].orbit_points() {
                let u = chain.levels[level].transversal[p as usize].as_ref().unwrap();
                rec(chain, level + 1, &acc.compose(u), f);
            }
        }
        rec(self, 0, &Permutation::identity(self.degree), f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s_n_gens(n: usize) -> Vec<Permutation> {
        let cycle: Vec<u32> = (0..n as u32).collect();
        vec![
            Permutation::from_cycles(n, &[&cycle]),
            Permutation::from_cycles(n, &[&[0, 1]]),
        ]
    }

    #[test]
    fn symmetric_group_orders() {
        let mut fact = 1u64;
        for n in 2..=8usize {
            fact *= n as u64;
            let chain = StabChain::build(n, &s_n_gens(n), &[]);
            assert_eq!(chain.order(), BigUint::from(fact), "S_{n}");
        }
    }

    #[test]
    fn base_hint_forces_leading_base_points() {
        let chain = StabChain::build(5, &s_n_gens(5), &[3, 1]);
        let base = chain.base();
        assert_eq!(&base[..2], &[3, 1]);
        assert_eq!(chain.order(), BigUint::from(120u32));
        // hint points with trivial orbits are kept as levels
        let c2 = StabChain::build(5, &[Permutation::from_cycles(5, &[&[0, 1]])], &[4, 0]);
        assert_eq!(c2.base()[..2], [4, 0]);
        assert_eq!(c2.order(), BigUint::from(2u32));
    }

    #[test]
    fn membership_by_sifting() {
        let a4 = StabChain::build(
            4,
            &[
                Permutation::from_cycles(4, &[&[0, 1, 2]]),
                Permutation::from_cycles(4, &[&[1, 2, 3]]),
            ],
            &[],
        );
        assert_eq!(a4.order(), BigUint::from(12u32));
        assert!(a4.contains(&Permutation::from_cycles(4, &[&[0, 1], &[2, 3]])));
        assert!(!a4.contains(&Permutation::from_cycles(4, &[&[0, 1]])));
        assert!(a4.contains(&Permutation::identity(4)));
    }

    #[test]
    fn strong_generators_generate_stabilizer() {
        // in S_4 based at [0], levels >= 1 generate Stab(0) = S_3 on {1,2,3}
        let chain = StabChain::build(4, &s_n_gens(4), &[0]);
        let stab_gens = chain.strong_generators_below(1);
        let stab = StabChain::build(4, &stab_gens, &[]);
        assert_eq!(stab.order(), BigUint::from(6u32));
        for g in &stab_gens {
            assert_eq!(g.apply(0), 0);
        }
    }

    #[test]
    fn enumeration_matches_order() {
        let chain = StabChain::build(4, &s_n_gens(4), &[]);
        let mut seen = std::collections::HashSet::new();
        chain.for_each_element(&mut |p| {
            assert!(seen.insert(p.images().to_vec()), "duplicate element");
        });
        assert_eq!(BigUint::from(seen.len()), chain.order());
    }

    #[test]
    fn incremental_insertion_matches_batch_build() {
        let gens = s_n_gens(6);
        let batch = StabChain::build(6, &gens, &[]);
        let mut incr = StabChain::build(6, &[], &[]);
        assert!(incr.insert_generator(&gens[0]));
        assert!(incr.insert_generator(&gens[1]));
        assert!(!incr.insert_generator(&gens[1]), "member is rejected");
        assert_eq!(incr.order(), batch.order());
        batch.for_each_element(&mut |p| assert!(incr.contains(p)));
    }

    #[test]
    fn trivial_group_chain() {
        let chain = StabChain::build(6, &[], &[]);
        assert_eq!(chain.order(), BigUint::from(1u32));
        assert!(chain.contains(&Permutation::identity(6)));
        assert!(!chain.contains(&Permutation::from_cycles(6, &[&[0, 1]])));
    }
}
