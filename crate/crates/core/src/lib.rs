//! Block designs from plane conics over binary fields.
//!
//! Over F_q with q = 2^n, every nonzero field element a cuts out two blocks
//! of nonzero points: a parabola block (the nonzero values of x^2 + ax) and a
//! hyperbola block (the nonzero values of x + a/x). Each family, indexed by a
//! running over the nonzero elements, is a symmetric 2-(q-1, q/2-1, q/4-1)
//! design. This crate constructs those designs together with their
//! complements and duals, verifies the design parameters exhaustively or by
//! seeded sampling, and analyses their automorphism groups as permutation
//! groups: orders, point/block stabilizers, alternating-group membership,
//! the Singer torus and Frobenius normalizer, the intersection of the two
//! automorphism groups, and conjugacy evidence in Sym and Alt.

pub mod bits;
pub mod gf2n;

pub mod designs;
pub mod permgrp;

pub mod autgroup;
pub mod report;

pub use bits::BitSet;
pub use designs::{DesignKind, IncidenceStructure};
pub use gf2n::{FieldCtx, FieldElement};
pub use permgrp::{PermGroup, Permutation};
