//! Incidence structures cut out by conics over GF(2^n).
//!
//! Points are the q-1 nonzero field elements, listed in ascending value
//! order; point index i carries the value i+1. For every nonzero a there are
//! two blocks:
//!
//! * the hyperbola block: the nonzero elements of { x + a/x : x != 0 }
//!   (the full value set also contains 0, reached at the square root of a);
//! * the parabola block: the nonzero values of x^2 + ax (an F_2-hyperplane
//!   minus 0; the map has kernel {0, a}).
//!
//! Both families, indexed by a, are symmetric 2-(q-1, q/2-1, q/4-1) designs;
//! [`verify`] checks that from the incidence data alone and [`iso`] searches
//! for isomorphisms between structures.

mod io;
mod iso;
mod verify;

pub use io::{format_blockset, parse_blockset, write_blockset_streaming};
pub use iso::{find_isomorphism, is_isomorphism, isomorphism_extending};
pub use verify::{
    verify_design, verify_design_sampled, DesignParams, DesignViolation, SampledVerification,
};

use crate::bits::BitSet;
use crate::gf2n::{FieldCtx, FieldElement, FieldError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("block generator must be nonzero")]
    ZeroGenerator,
    #[error("blocks for generators {0:#x} and {1:#x} coincide; the field core is broken")]
    DuplicateBlocks(u32, u32),
    #[error("dual requires equally many points and blocks, got {points} and {blocks}")]
    NonSquare { points: usize, blocks: usize },
    #[error("dual requires every block to carry a label")]
    MissingLabels,
    #[error("{0} designs cannot be built directly; derive them via complement or dual")]
    UnsupportedKind(DesignKind),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// What family an incidence structure belongs to. `Dual` and `Custom` mark
/// derived or hand-built structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignKind {
    Hyperbola,
    Parabola,
    ComplementHyperbola,
    ComplementParabola,
    Dual,
    Custom,
}

impl DesignKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DesignKind::Hyperbola => "hyperbola",
            DesignKind::Parabola => "parabola",
            DesignKind::ComplementHyperbola => "complement-hyperbola",
            DesignKind::ComplementParabola => "complement-parabola",
            DesignKind::Dual => "dual",
            DesignKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<DesignKind> {
        match s {
            "hyperbola" => Some(DesignKind::Hyperbola),
            "parabola" => Some(DesignKind::Parabola),
            "complement-hyperbola" => Some(DesignKind::ComplementHyperbola),
            "complement-parabola" => Some(DesignKind::ComplementParabola),
            "dual" => Some(DesignKind::Dual),
            "custom" => Some(DesignKind::Custom),
            _ => None,
        }
    }

    pub fn complemented(self) -> DesignKind {
        match self {
            DesignKind::Hyperbola => DesignKind::ComplementHyperbola,
            DesignKind::ComplementHyperbola => DesignKind::Hyperbola,
            DesignKind::Parabola => DesignKind::ComplementParabola,
            DesignKind::ComplementParabola => DesignKind::Parabola,
            DesignKind::Dual | DesignKind::Custom => DesignKind::Custom,
        }
    }

    /// The base family a complement kind is derived from.
    pub fn base(self) -> DesignKind {
        match self {
            DesignKind::ComplementHyperbola => DesignKind::Hyperbola,
            DesignKind::ComplementParabola => DesignKind::Parabola,
            other => other,
        }
    }

    pub fn is_complement(self) -> bool {
        matches!(
            self,
            DesignKind::ComplementHyperbola | DesignKind::ComplementParabola
        )
    }
}

impl std::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    /// Membership over point indices.
    pub members: BitSet,
    /// The generator a for constructed blocks, the original point value for
    /// dual blocks, nothing for hand-built ones.
    pub label: Option<FieldElement>,
}

/// A finite incidence structure with labelled points.
#[derive(Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    point_labels: Vec<FieldElement>,
    blocks: Vec<Block>,
    kind: DesignKind,
}

impl IncidenceStructure {
    pub fn new(
        point_labels: Vec<FieldElement>,
        blocks: Vec<Block>,
        kind: DesignKind,
    ) -> IncidenceStructure {
        let v = point_labels.len();
        for b in &blocks {
            assert_eq!(b.members.capacity(), v, "block mask capacity mismatch");
        }
        IncidenceStructure {
            v,
            point_labels,
            blocks,
            kind,
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    pub fn point_labels(&self) -> &[FieldElement] {
        &self.point_labels
    }

    /// Value carried by a point index.
    pub fn point_value(&self, index: usize) -> u32 {
        self.point_labels[index].value()
    }

    pub fn index_of_value(&self, value: u32) -> Option<usize> {
        self.point_labels.iter().position(|l| l.value() == value)
    }

    pub fn block_index_of_label(&self, label: FieldElement) -> Option<usize> {
        self.blocks.iter().position(|b| b.label == Some(label))
    }
}

impl std::fmt::Debug for IncidenceStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "IncidenceStructure({}, v={}, b={})",
            self.kind,
            self.v,
            self.blocks.len()
        )
    }
}

/// The hyperbola block of a: nonzero values of x + a/x, as a mask over the
/// point indices (value - 1). Runs on the log/exp tables; tests pin it
/// against a pow/inv reconstruction.
pub fn hyperbola_block(ctx: &FieldCtx, a: FieldElement) -> Result<Block, DesignError> {
    if a.is_zero() {
        return Err(DesignError::ZeroGenerator);
    }
    let q = ctx.q();
    let ord = q - 1;
    let la = ctx.log_of(a.value());
    let mut members = BitSet::new(ord as usize);
    for lx in 0..ord {
        let x = ctx.exp_at(lx);
        let a_over_x = ctx.exp_at(la + ord - lx);
        let val = x ^ a_over_x;
        if val != 0 {
            members.set((val - 1) as usize);
        }
    }
    debug_assert_eq!(members.count() as u32, q / 2 - 1);
    Ok(Block {
        members,
        label: Some(a),
    })
}

/// The parabola block of a: nonzero values of x^2 + ax.
pub fn parabola_block(ctx: &FieldCtx, a: FieldElement) -> Result<Block, DesignError> {
    if a.is_zero() {
        return Err(DesignError::ZeroGenerator);
    }
    let q = ctx.q();
    let ord = q - 1;
    let la = ctx.log_of(a.value());
    let mut members = BitSet::new(ord as usize);
    // x = 0 contributes only the value 0; nonzero x by log
    for lx in 0..ord {
        let x_sq = ctx.exp_at(2 * lx % (2 * ord));
        let ax = ctx.exp_at(la + lx);
        let val = x_sq ^ ax;
        if val != 0 {
            members.set((val - 1) as usize);
        }
    }
    debug_assert_eq!(members.count() as u32, q / 2 - 1);
    Ok(Block {
        members,
        label: Some(a),
    })
}

/// True iff t^2 + bt + a has a root in the field. Exhaustive root scan: this
/// is the reference oracle other routes are compared against.
pub fn splits(ctx: &FieldCtx, b: FieldElement, a: FieldElement) -> bool {
    ctx.elements().any(|t| {
        let t2 = ctx.mul(t, t);
        ctx.add(ctx.add(t2, ctx.mul(b, t)), a).is_zero()
    })
}

/// Build the full design of one base family: one block per nonzero a, in
/// ascending generator order. Fails if two generators ever produce the same
/// block, which would contradict the regular group action underneath.
pub fn build_design(ctx: &FieldCtx, kind: DesignKind) -> Result<IncidenceStructure, DesignError> {
    let builder = block_builder(kind)?;
    let v = (ctx.q() - 1) as usize;
    let point_labels: Vec<FieldElement> = ctx.nonzero_elements().collect();
    let mut blocks: Vec<Block> = Vec::with_capacity(v);
    let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::new();
    for a in ctx.nonzero_elements() {
        let block = builder(ctx, a)?;
        let h = hash_words(block.members.words());
        let bucket = by_hash.entry(h).or_default();
        for &prev in bucket.iter() {
            if blocks[prev].members == block.members {
                return Err(DesignError::DuplicateBlocks(
                    blocks[prev].label.unwrap().value(),
                    a.value(),
                ));
            }
        }
        bucket.push(blocks.len());
        blocks.push(block);
    }
    Ok(IncidenceStructure::new(point_labels, blocks, kind))
}

/// Build any of the four families, deriving the complement kinds.
pub fn build_design_any(
    ctx: &FieldCtx,
    kind: DesignKind,
) -> Result<IncidenceStructure, DesignError> {
    if kind.is_complement() {
        Ok(complement(&build_design(ctx, kind.base())?))
    } else {
        build_design(ctx, kind)
    }
}

pub(crate) fn block_builder(
    kind: DesignKind,
) -> Result<fn(&FieldCtx, FieldElement) -> Result<Block, DesignError>, DesignError> {
    match kind {
        DesignKind::Hyperbola => Ok(hyperbola_block),
        DesignKind::Parabola => Ok(parabola_block),
        other => Err(DesignError::UnsupportedKind(other)),
    }
}

fn hash_words(words: &[u64]) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    words.hash(&mut h);
    h.finish()
}

/// Blockwise complement within the point set. Hyperbola and parabola blocks
/// always contain 0 in their full value sets, so for those kinds flipping
/// the nonzero-point mask is exactly the complement within the whole field;
/// for derived kinds it is the plain point-set complement.
pub fn complement(d: &IncidenceStructure) -> IncidenceStructure {
    let blocks = d
        .blocks
        .iter()
        .map(|b| Block {
            members: b.members.complement(),
            label: b.label,
        })
        .collect();
    IncidenceStructure::new(d.point_labels.clone(), blocks, d.kind.complemented())
}

/// Transpose points and blocks. Dual point j inherits the label of block j;
/// dual block i is labelled by original point i.
pub fn dual(d: &IncidenceStructure) -> Result<IncidenceStructure, DesignError> {
    if d.v != d.blocks.len() {
        return Err(DesignError::NonSquare {
            points: d.v,
            blocks: d.blocks.len(),
        });
    }
    let point_labels: Vec<FieldElement> = d
        .blocks
        .iter()
        .map(|b| b.label.ok_or(DesignError::MissingLabels))
        .collect::<Result<_, _>>()?;
    let blocks: Vec<Block> = (0..d.v)
        .map(|i| {
            let mut members = BitSet::new(d.v);
            for (j, b) in d.blocks.iter().enumerate() {
                if b.members.get(i) {
                    members.set(j);
                }
            }
            Block {
                members,
                label: Some(d.point_labels[i]),
            }
        })
        .collect();
    Ok(IncidenceStructure::new(
        point_labels,
        blocks,
        DesignKind::Dual,
    ))
}

/// Explicit duality between the two families: map each dual point of D^o
/// (labelled by a hyperbola generator a) to the point of D^u with value a,
/// and each dual block (labelled by an original point value) to the parabola
/// block generated by that value. True iff the map is a block-for-block
/// match.
pub fn gamma_dual_matches(
    d_hyper: &IncidenceStructure,
    d_para: &IncidenceStructure,
) -> Result<bool, DesignError> {
    let dual_o = dual(d_hyper)?;
    if dual_o.v != d_para.v {
        return Ok(false);
    }
    let mut gamma = vec![0usize; dual_o.v];
    for (i, lab) in dual_o.point_labels.iter().enumerate() {
        match d_para.index_of_value(lab.value()) {
            Some(k) => gamma[i] = k,
            None => return Ok(false),
        }
    }
    for blk in &dual_o.blocks {
        let label = blk.label.expect("dual blocks are labelled");
        let Some(target) = d_para.block_index_of_label(label) else {
            return Ok(false);
        };
        let mut mapped = BitSet::new(d_para.v);
        for i in blk.members.iter_ones() {
            mapped.set(gamma[i]);
        }
        if mapped != d_para.blocks[target].members {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Build both families over one field and test the duality map.
pub fn gamma_dual_check(ctx: &FieldCtx) -> Result<bool, DesignError> {
    let d_o = build_design(ctx, DesignKind::Hyperbola)?;
    let d_u = build_design(ctx, DesignKind::Parabola)?;
    gamma_dual_matches(&d_o, &d_u)
}

/// Relabel points by a permutation of indices: block masks map forward.
pub fn apply_point_permutation(
    d: &IncidenceStructure,
    p: &crate::permgrp::Permutation,
) -> IncidenceStructure {
    assert_eq!(p.degree(), d.v);
    let blocks = d
        .blocks
        .iter()
        .map(|b| Block {
            members: p.apply_to_set(&b.members),
            label: b.label,
        })
        .collect();
    IncidenceStructure::new(d.point_labels.clone(), blocks, DesignKind::Custom)
}

/// The 2-design parameters (v, k, lambda) a family has over F_{2^n}:
/// (q-1, q/2-1, q/4-1) for the base families, (q-1, q/2, q/4) for their
/// complements, `None` for derived or hand-built kinds.
pub fn expected_params(n: u32, kind: DesignKind) -> Option<(u64, u64, u64)> {
    let q = 1u64 << n;
    let v = q - 1;
    match kind {
        DesignKind::Hyperbola | DesignKind::Parabola => Some((v, q / 2 - 1, q / 4 - 1)),
        DesignKind::ComplementHyperbola | DesignKind::ComplementParabola => {
            Some((v, q / 2, q / 4))
        }
        DesignKind::Dual | DesignKind::Custom => None,
    }
}

/// The action a group of point permutations induces on the block list.
///
/// Each generator must map every block onto some block of `d`; returns
/// `None` otherwise (i.e. when the group is not a group of automorphisms).
pub fn induced_block_action(
    d: &IncidenceStructure,
    g: &crate::permgrp::PermGroup,
) -> Option<crate::permgrp::PermGroup> {
    let index_of: std::collections::HashMap<&BitSet, u32> = d
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (&b.members, i as u32))
        .collect();
    let mut gens = Vec::with_capacity(g.generators().len());
    for p in g.generators() {
        let mut images = Vec::with_capacity(d.blocks.len());
        for b in &d.blocks {
            images.push(*index_of.get(&p.apply_to_set(&b.members))?);
        }
        gens.push(
            crate::permgrp::Permutation::from_images(images)
                .expect("block images of a bijection form a permutation"),
        );
    }
    Some(crate::permgrp::PermGroup::new(d.blocks.len(), gens))
}

/// A reference Fano plane on point values {1..7}, fixed line list. Used as
/// an independent cross-check fixture for the isomorphism search.
pub fn fano_plane(ctx: &FieldCtx) -> IncidenceStructure {
    assert_eq!(ctx.n(), 3, "the Fano plane lives on 7 points");
    let lines: [[u32; 3]; 7] = [
        [1, 2, 3],
        [1, 4, 5],
        [1, 6, 7],
        [2, 4, 6],
        [2, 5, 7],
        [3, 4, 7],
        [3, 5, 6],
    ];
    let point_labels: Vec<FieldElement> = ctx.nonzero_elements().collect();
    let blocks = lines
        .iter()
        .map(|line| {
            let idx: Vec<usize> = line.iter().map(|&v| (v - 1) as usize).collect();
            Block {
                members: BitSet::from_indices(7, &idx),
                label: None,
            }
        })
        .collect();
    IncidenceStructure::new(point_labels, blocks, DesignKind::Custom)
}
