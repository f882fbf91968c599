//! Backtrack searches over stabilizer chains: setwise stabilizers, exact
//! subgroup intersections, and conjugacy-witness searches.

use super::chain::StabChain;
use super::{Parity, PermGroup, Permutation};

/// Collects elements found by a backtrack into a minimal generator list,
/// skipping anything already generated.
struct SubgroupCollector {
    degree: usize,
    gens: Vec<Permutation>,
    chain: StabChain,
}

impl SubgroupCollector {
    fn new(degree: usize) -> SubgroupCollector {
        SubgroupCollector {
            degree,
            gens: Vec::new(),
            chain: StabChain::build(degree, &[], &[]),
        }
    }

    fn offer(&mut self, p: &Permutation) {
        if self.chain.insert_generator(p) {
            self.gens.push(p.clone());
        }
    }

    fn into_group(self) -> PermGroup {
        PermGroup::new(self.degree, self.gens)
    }
}

/// Setwise stabilizer of `set` in `g`: descend a chain whose base starts
/// with the set, keeping only branches where base points of the set map into
/// the set and base points outside map outside.
///
/// Every set point is a base point of one of the pre-created levels, and
/// later levels get bases disjoint from the earlier ones, so the polarity
/// prune at each level is exact: leaves are precisely the elements mapping
/// the set onto itself.
pub(crate) fn setwise_stabilizer_impl(g: &PermGroup, set: &[u32]) -> PermGroup {
    let degree = g.degree();
    let mut hint: Vec<u32> = set.to_vec();
    hint.sort_unstable();
    hint.dedup();
    let mut in_set = vec![false; degree];
    for &p in &hint {
        assert!((p as usize) < degree, "set point out of range");
        in_set[p as usize] = true;
    }
    let chain = StabChain::build(degree, g.generators(), &hint);
    let mut collector = SubgroupCollector::new(degree);

    fn dfs(
        chain: &StabChain,
        level: usize,
        acc: &Permutation,
        in_set: &[bool],
        collector: &mut SubgroupCollector,
    ) {
        if level == chain.levels().len() {
            debug_assert!(in_set
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .all(|(p, _)| in_set[acc.apply(p as u32) as usize]));
            collector.offer(acc);
            return;
        }
        let lv = &chain.levels()[level];
        let base_in = in_set[lv.base as usize];
        for p in lv.orbit_points() {
            // the final element maps this level's base to acc(p), whatever
            // is chosen deeper
            if in_set[acc.apply(p) as usize] != base_in {
                continue;
            }
            let u = lv.transversal[p as usize].as_ref().unwrap();
            dfs(chain, level + 1, &acc.compose(u), in_set, collector);
        }
    }

    dfs(
        &chain,
        0,
        &Permutation::identity(degree),
        &in_set,
        &mut collector,
    );
    collector.into_group()
}

/// Exact intersection: walk the chain of `g1` while tracking, level by
/// level, whether the chosen base images remain realizable in `g2` (whose
/// chain is rebuilt over the same base). Leaves are elements of `g1`; a full
/// sift through the `g2` chain decides final membership.
pub(crate) fn intersection_impl(g1: &PermGroup, g2: &PermGroup) -> PermGroup {
    let degree = g1.degree();
    let chain1 = g1.stabilizer_chain();
    let base1 = chain1.base();
    let chain2 = StabChain::build(degree, g2.generators(), &base1);
    let mut collector = SubgroupCollector::new(degree);

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        chain1: &StabChain,
        chain2: &StabChain,
        level: usize,
        acc1: &Permutation,
        acc2: &Permutation,
        acc2_inv: &Permutation,
        collector: &mut SubgroupCollector,
    ) {
        if level == chain1.levels().len() {
            if chain2.contains(acc1) {
                collector.offer(acc1);
            }
            return;
        }
        let lv1 = &chain1.levels()[level];
        let lv2 = &chain2.levels()[level];
        debug_assert_eq!(lv1.base, lv2.base);
        for p in lv1.orbit_points() {
            let target = acc1.apply(p);
            // an element of g2 with the base images chosen so far sends this
            // base to target iff acc2_inv(target) lies in the level orbit
            let t2 = acc2_inv.apply(target);
            let Some(u2) = lv2.transversal[t2 as usize].as_ref() else {
                continue;
            };
            let u1 = lv1.transversal[p as usize].as_ref().unwrap();
            dfs(
                chain1,
                chain2,
                level + 1,
                &acc1.compose(u1),
                &acc2.compose(u2),
                &u2.inverse().compose(acc2_inv),
                collector,
            );
        }
    }

    dfs(
        chain1,
        &chain2,
        0,
        &Permutation::identity(degree),
        &Permutation::identity(degree),
        &Permutation::identity(degree),
        &mut collector,
    );
    collector.into_group()
}

/// Where conjugating elements are searched for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ambient {
    Sym,
    Alt,
}

impl Ambient {
    pub fn as_str(self) -> &'static str {
        match self {
            Ambient::Sym => "Sym",
            Ambient::Alt => "Alt",
        }
    }

    fn admits(self, p: &Permutation) -> bool {
        match self {
            Ambient::Sym => true,
            Ambient::Alt => p.parity() == Parity::Even,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConjugacyBudget {
    /// Degrees up to this get a full census of the ambient group.
    pub exhaustive_max_degree: usize,
    /// How many witnesses to keep in the report.
    pub record_limit: usize,
}

impl Default for ConjugacyBudget {
    fn default() -> Self {
        // 7! = 5040 ambient elements is trivially enumerable; 8! and beyond
        // grow past the point where a census is worth it
        ConjugacyBudget {
            exhaustive_max_degree: 7,
            record_limit: 8,
        }
    }
}

/// Outcome vocabulary: a verified witness, a proof that none exists, or
/// neither.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConjugacyOutcome {
    Witness,
    Certificate,
    Inconclusive,
}

impl ConjugacyOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            ConjugacyOutcome::Witness => "witness",
            ConjugacyOutcome::Certificate => "certificate",
            ConjugacyOutcome::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyReport {
    pub ambient: Ambient,
    pub outcome: ConjugacyOutcome,
    /// True when the whole ambient group was enumerated, making the counts
    /// exact and a missing witness a proof.
    pub exhaustive: bool,
    pub witnesses: Vec<Permutation>,
    pub witness_count: u64,
    pub even_witness_count: u64,
    pub odd_witness_count: u64,
    pub certificate: Option<String>,
}

/// True iff conjugation by `t` carries `g1` into `g2`. Together with equal
/// orders this makes the image exactly `g2`.
pub fn conjugates_into(t: &Permutation, g1: &PermGroup, g2: &PermGroup) -> bool {
    let t_inv = t.inverse();
    g1.generators()
        .iter()
        .all(|g| g2.contains(&t.compose(g).compose(&t_inv)))
}

/// Search for elements t of the ambient group with t g1 t^-1 = g2.
///
/// Order: invariant certificates first (order, orbit-size multiset), then an
/// exhaustive census when the degree allows it, then the caller-supplied
/// seed candidates. Only the first two can prove absence.
pub fn conjugacy_witnesses(
    g1: &PermGroup,
    g2: &PermGroup,
    ambient: Ambient,
    budget: &ConjugacyBudget,
    seeds: &[Permutation],
) -> ConjugacyReport {
    assert_eq!(g1.degree(), g2.degree(), "conjugacy needs a common degree");
    let degree = g1.degree();
    let mut report = ConjugacyReport {
        ambient,
        outcome: ConjugacyOutcome::Inconclusive,
        exhaustive: false,
        witnesses: Vec::new(),
        witness_count: 0,
        even_witness_count: 0,
        odd_witness_count: 0,
        certificate: None,
    };

    if g1.order() != g2.order() {
        report.outcome = ConjugacyOutcome::Certificate;
        report.certificate = Some(format!(
            "orders differ: {} vs {}",
            g1.order(),
            g2.order()
        ));
        return report;
    }
    let (m1, m2) = (g1.orbit_size_multiset(), g2.orbit_size_multiset());
    if m1 != m2 {
        report.outcome = ConjugacyOutcome::Certificate;
        report.certificate = Some(format!(
            "orbit-size multisets differ: {m1:?} vs {m2:?}"
        ));
        return report;
    }

    if degree <= budget.exhaustive_max_degree {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        heap_permutations(&mut images, &mut |imgs| {
            let t = Permutation::from_images(imgs.to_vec()).unwrap();
            if !ambient.admits(&t) {
                return;
            }
            if conjugates_into(&t, g1, g2) {
                report.witness_count += 1;
                match t.parity() {
                    Parity::Even => report.even_witness_count += 1,
                    Parity::Odd => report.odd_witness_count += 1,
                }
                if report.witnesses.len() < budget.record_limit {
                    report.witnesses.push(t);
                }
            }
        });
        report.exhaustive = true;
        if report.witness_count > 0 {
            report.outcome = ConjugacyOutcome::Witness;
        } else {
            report.outcome = ConjugacyOutcome::Certificate;
            report.certificate = Some(format!(
                "no conjugating element in {} (census of all degree-{degree} permutations)",
                ambient.as_str()
            ));
        }
        return report;
    }

    for s in seeds {
        if s.degree() != degree || !ambient.admits(s) {
            continue;
        }
        if conjugates_into(s, g1, g2) {
            report.witness_count += 1;
            match s.parity() {
                Parity::Even => report.even_witness_count += 1,
                Parity::Odd => report.odd_witness_count += 1,
            }
            if report.witnesses.len() < budget.record_limit {
                report.witnesses.push(s.clone());
            }
        }
    }
    report.outcome = if report.witness_count > 0 {
        ConjugacyOutcome::Witness
    } else {
        ConjugacyOutcome::Inconclusive
    };
    report
}

/// Heap's algorithm: visit every arrangement of `items` exactly once.
fn heap_permutations(items: &mut [u32], f: &mut dyn FnMut(&[u32])) {
    fn rec(k: usize, items: &mut [u32], f: &mut dyn FnMut(&[u32])) {
        if k <= 1 {
            f(items);
            return;
        }
        for i in 0..k {
            rec(k - 1, items, f);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    rec(items.len(), items, f);
}
