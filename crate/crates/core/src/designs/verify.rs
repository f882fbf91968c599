//! Design-parameter verification from raw incidence data.
//!
//! The exhaustive route checks every block size, every point degree and
//! every point pair. The sampled route (for fields too large to hold all
//! pair counts) still enumerates every block from its defining formula and
//! checks k for all blocks and r for all points exactly; only the pair
//! count lambda is sampled, over a seeded set of pairs.

use super::{block_builder, DesignError, DesignKind, IncidenceStructure};
use crate::bits::BitSet;
use crate::gf2n::FieldCtx;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Parameters of a verified t-design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignParams {
    pub t: u32,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub b: u64,
    pub r: u64,
}

impl std::fmt::Display for DesignParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-({},{},{})", self.t, self.v, self.k, self.lambda)
    }
}

/// First counterexample found; points are reported by their value labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignViolation {
    NonUniformBlockSize {
        block_index: usize,
        size: u64,
        expected: u64,
    },
    NonConstantReplication {
        point_value: u32,
        count: u64,
        expected: u64,
    },
    NonConstantPairCount {
        point_values: (u32, u32),
        count: u64,
        expected: u64,
    },
}

impl std::fmt::Display for DesignViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DesignViolation::NonUniformBlockSize {
                block_index,
                size,
                expected,
            } => write!(
                f,
                "block {block_index} has {size} points, expected {expected}"
            ),
            DesignViolation::NonConstantReplication {
                point_value,
                count,
                expected,
            } => write!(
                f,
                "point {point_value:#x} lies in {count} blocks, expected {expected}"
            ),
            DesignViolation::NonConstantPairCount {
                point_values: (x, y),
                count,
                expected,
            } => write!(
                f,
                "pair ({x:#x}, {y:#x}) lies in {count} blocks, expected {expected}"
            ),
        }
    }
}

/// Exhaustive verification that the structure is a t-design, t in {1, 2}.
/// The expected k, r and lambda are read off the first block, point and
/// pair; the first deviation is reported.
pub fn verify_design(
    d: &IncidenceStructure,
    t: u32,
) -> Result<DesignParams, DesignViolation> {
    assert!(t == 1 || t == 2, "only 1- and 2-designs are checked");
    let v = d.v();
    let b = d.num_blocks();
    assert!(v >= 2 && b >= 1, "degenerate structure");

    let k = d.blocks()[0].members.count() as u64;
    for (i, blk) in d.blocks().iter().enumerate() {
        let size = blk.members.count() as u64;
        if size != k {
            return Err(DesignViolation::NonUniformBlockSize {
                block_index: i,
                size,
                expected: k,
            });
        }
    }

    // transpose once: per-point incidence over blocks
    let mut point_rows: Vec<BitSet> = vec![BitSet::new(b); v];
    for (j, blk) in d.blocks().iter().enumerate() {
        for i in blk.members.iter_ones() {
            point_rows[i].set(j);
        }
    }

    let r = point_rows[0].count() as u64;
    for (i, row) in point_rows.iter().enumerate() {
        let count = row.count() as u64;
        if count != r {
            return Err(DesignViolation::NonConstantReplication {
                point_value: d.point_value(i),
                count,
                expected: r,
            });
        }
    }

    if t == 1 {
        debug_assert_eq!(b as u64 * k, v as u64 * r);
        return Ok(DesignParams {
            t: 1,
            v: v as u64,
            k,
            lambda: r,
            b: b as u64,
            r,
        });
    }

    let lambda = point_rows[0].intersection_count(&point_rows[1]) as u64;
    for i in 0..v {
        for j in (i + 1)..v {
            let count = point_rows[i].intersection_count(&point_rows[j]) as u64;
            if count != lambda {
                return Err(DesignViolation::NonConstantPairCount {
                    point_values: (d.point_value(i), d.point_value(j)),
                    count,
                    expected: lambda,
                });
            }
        }
    }
    // double-count identity for 2-designs
    debug_assert_eq!(r * (k - 1), lambda * (v as u64 - 1));
    Ok(DesignParams {
        t: 2,
        v: v as u64,
        k,
        lambda,
        b: b as u64,
        r,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SampledVerification {
    pub params: DesignParams,
    pub pairs_sampled: u64,
    pub seed: u64,
}

/// Sampled 2-design verification for the large fields, without ever holding
/// the whole design in memory. Every block of the family is enumerated once
/// from its defining formula (one value-mask at a time), so block sizes and
/// point degrees are verified exactly for all blocks and points; the pair
/// count is checked on `pairs` seeded random point pairs.
pub fn verify_design_sampled(
    ctx: &FieldCtx,
    kind: DesignKind,
    pairs: usize,
    seed: u64,
) -> Result<Result<SampledVerification, DesignViolation>, DesignError> {
    let base = kind.base();
    // resolves the builder (errors on dual/custom)
    block_builder(base)?;
    let complemented = kind.is_complement();

    let q = ctx.q();
    let ord = q - 1;
    let v = ord as u64;
    let b = ord as u64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<u32> = Vec::with_capacity(pairs);
    let mut ys: Vec<u32> = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let x = rng.gen_range(1..q);
        let mut y = rng.gen_range(1..q);
        while y == x {
            y = rng.gen_range(1..q);
        }
        xs.push(x);
        ys.push(y);
    }
    // word index and shift of each sampled point inside the value mask, so
    // the per-block membership test is two loads and no branch
    let pair_pos: Vec<(u32, u32, u32, u32)> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (x >> 6, x & 63, y >> 6, y & 63))
        .collect();
    let mut pair_counts: Vec<u32> = vec![0; pairs];

    // occurrence counts over the value loop; each nonzero member of a base
    // block is produced exactly twice (the two preimages), so this is 2r
    let mut occurrences: Vec<u32> = vec![0; q as usize];
    let mut mask = BitSet::new(q as usize); // over values
    let mut k_expected: Option<u64> = None;

    for a in 1..q {
        let la = ctx.log_of(a);
        mask.clear_all();
        match base {
            DesignKind::Hyperbola => {
                for lx in 0..ord {
                    let x = ctx.exp_at(lx);
                    let val = x ^ ctx.exp_at(la + ord - lx);
                    occurrences[val as usize] += 1;
                    mask.set(val as usize);
                }
            }
            DesignKind::Parabola => {
                for lx in 0..ord {
                    let val = ctx.exp_at(2 * lx % (2 * ord)) ^ ctx.exp_at(la + lx);
                    occurrences[val as usize] += 1;
                    mask.set(val as usize);
                }
            }
            _ => unreachable!("builder resolution restricts the base kind"),
        }
        // the full value set contains 0; for the complement design the block
        // is everything outside it, and 0 drops back out of the point set
        mask.set(0);
        if complemented {
            mask.flip_all();
        }
        mask.unset(0);

        let k_a = mask.count() as u64;
        match k_expected {
            None => k_expected = Some(k_a),
            Some(k) if k != k_a => {
                return Ok(Err(DesignViolation::NonUniformBlockSize {
                    block_index: (a - 1) as usize,
                    size: k_a,
                    expected: k,
                }))
            }
            _ => {}
        }

        let words = mask.words();
        for (cnt, &(wx, sx, wy, sy)) in pair_counts.iter_mut().zip(&pair_pos) {
            let both = (words[wx as usize] >> sx) & (words[wy as usize] >> sy) & 1;
            *cnt += both as u32;
        }
    }

    let k = k_expected.unwrap();

    // exact r for every point from the occurrence counts
    let point_r = |occ: u32| {
        let base_r = u64::from(occ) / 2;
        if complemented {
            b - base_r
        } else {
            base_r
        }
    };
    let r = point_r(occurrences[1]);
    for val in 1..q {
        let occ = occurrences[val as usize];
        debug_assert_eq!(occ % 2, 0, "each member arises from a preimage pair");
        let count = point_r(occ);
        if count != r {
            return Ok(Err(DesignViolation::NonConstantReplication {
                point_value: val,
                count,
                expected: r,
            }));
        }
    }

    let lambda = u64::from(pair_counts[0]);
    for (i, &c) in pair_counts.iter().enumerate() {
        if u64::from(c) != lambda {
            return Ok(Err(DesignViolation::NonConstantPairCount {
                point_values: (xs[i], ys[i]),
                count: u64::from(c),
                expected: lambda,
            }));
        }
    }

    Ok(Ok(SampledVerification {
        params: DesignParams {
            t: 2,
            v,
            k,
            lambda,
            b,
            r,
        },
        pairs_sampled: pairs as u64,
        seed,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{build_design, build_design_any, complement};
    use crate::gf2n::FieldCtx;

    #[test]
    fn fano_scale_design_parameters() {
        let ctx = FieldCtx::new(3).unwrap();
        let d = build_design(&ctx, DesignKind::Parabola).unwrap();
        let p = verify_design(&d, 2).unwrap();
        assert_eq!(
            p,
            DesignParams {
                t: 2,
                v: 7,
                k: 3,
                lambda: 1,
                b: 7,
                r: 3
            }
        );
        assert_eq!(p.to_string(), "2-(7,3,1)");
        let p1 = verify_design(&d, 1).unwrap();
        assert_eq!((p1.t, p1.lambda), (1, 3));
    }

    #[test]
    fn degenerate_two_point_blocks_at_n2() {
        let ctx = FieldCtx::new(2).unwrap();
        let d = build_design(&ctx, DesignKind::Hyperbola).unwrap();
        let p = verify_design(&d, 2).unwrap();
        // 2-(3,1,0): blocks are single points, no pair is covered
        assert_eq!((p.v, p.k, p.lambda, p.r), (3, 1, 0, 1));
    }

    #[test]
    fn complement_parameters() {
        for n in [2u32, 3, 4, 5] {
            let ctx = FieldCtx::new(n).unwrap();
            let q = u64::from(ctx.q());
            let c = complement(&build_design(&ctx, DesignKind::Hyperbola).unwrap());
            let p = verify_design(&c, 2).unwrap();
            assert_eq!((p.v, p.k, p.lambda), (q - 1, q / 2, q / 4), "n={n}");
        }
    }

    #[test]
    fn violation_witnesses_are_first_deviations() {
        use crate::bits::BitSet;
        use crate::designs::{Block, IncidenceStructure};
        let ctx = FieldCtx::new(3).unwrap();
        let labels: Vec<_> = ctx.nonzero_elements().collect();

        // uneven block sizes
        let d = IncidenceStructure::new(
            labels.clone(),
            vec![
                Block { members: BitSet::from_indices(7, &[0, 1, 2]), label: None },
                Block { members: BitSet::from_indices(7, &[3, 4]), label: None },
            ],
            DesignKind::Custom,
        );
        assert_eq!(
            verify_design(&d, 2).unwrap_err(),
            DesignViolation::NonUniformBlockSize { block_index: 1, size: 2, expected: 3 }
        );

        // uniform k, unequal replication
        let d = IncidenceStructure::new(
            labels.clone(),
            vec![
                Block { members: BitSet::from_indices(7, &[0, 1]), label: None },
                Block { members: BitSet::from_indices(7, &[0, 2]), label: None },
            ],
            DesignKind::Custom,
        );
        let err = verify_design(&d, 2).unwrap_err();
        assert_eq!(
            err,
            DesignViolation::NonConstantReplication { point_value: 2, count: 1, expected: 2 }
        );

        // uniform k and r, unequal pair counts: points {0,1} of a 4-point
        // structure appear together twice, {0,3} never
        let labels4: Vec<_> = FieldCtx::new(4).unwrap().nonzero_elements().take(4).collect();
        let d = IncidenceStructure::new(
            labels4,
            vec![
                Block { members: BitSet::from_indices(4, &[0, 1]), label: None },
                Block { members: BitSet::from_indices(4, &[0, 1]), label: None },
                Block { members: BitSet::from_indices(4, &[2, 3]), label: None },
                Block { members: BitSet::from_indices(4, &[2, 3]), label: None },
            ],
            DesignKind::Custom,
        );
        assert!(matches!(
            verify_design(&d, 2).unwrap_err(),
            DesignViolation::NonConstantPairCount { .. }
        ));
    }

    #[test]
    fn sampled_agrees_with_exhaustive_on_overlap() {
        // n where both routes are cheap: sampled params must equal the
        // exhaustively verified ones for all four kinds
        for n in [4u32, 6, 8] {
            let ctx = FieldCtx::new(n).unwrap();
            for kind in [
                DesignKind::Hyperbola,
                DesignKind::Parabola,
                DesignKind::ComplementHyperbola,
                DesignKind::ComplementParabola,
            ] {
                let exact = verify_design(&build_design_any(&ctx, kind).unwrap(), 2).unwrap();
                let sampled = verify_design_sampled(&ctx, kind, 2000, 7)
                    .unwrap()
                    .unwrap();
                assert_eq!(sampled.params, exact, "n={n} kind={kind}");
                assert_eq!(sampled.pairs_sampled, 2000);
            }
        }
    }

    #[test]
    fn sampled_is_seed_deterministic() {
        let ctx = FieldCtx::new(6).unwrap();
        let a = verify_design_sampled(&ctx, DesignKind::Hyperbola, 500, 42)
            .unwrap()
            .unwrap();
        let b = verify_design_sampled(&ctx, DesignKind::Hyperbola, 500, 42)
            .unwrap()
            .unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.seed, 42);
        assert!(verify_design_sampled(&ctx, DesignKind::Dual, 10, 0).is_err());
    }
}
