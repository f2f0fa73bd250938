//! Exhaustive ground truth over small prime fields: does a multiplicative
//! family of projections onto a given meet-closed subspace family exist?

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};
use crate::poset::{build_poset, SubspacePoset};
use crate::realize::projection_onto_along;

pub const MAX_ORACLE_AMBIENT: usize = 3;
pub const MAX_ORACLE_FAMILY: usize = 8;

#[derive(Clone, Debug)]
pub struct OracleInstance {
    poset: SubspacePoset,
}

impl OracleInstance {
    /// Validates bounds (`p ∈ {2, 3}`, ambient dimension ≤ 3, at most 8
    /// subspaces) and that the family is meet-closed with both bounds.
    pub fn new(family: impl IntoIterator<Item = Subspace>) -> Result<Self> {
        let family: BTreeSet<Subspace> = family.into_iter().collect();
        let first = family.iter().next().ok_or(Error::MissingBounds)?;
        let (field, n) = (first.field(), first.ambient());
        match field {
            Field::Prime { p } if p == 2 || p == 3 => {}
            other => return Err(Error::TooLarge(format!("field {other:?} is not GF(2) or GF(3)"))),
        }
        if n > MAX_ORACLE_AMBIENT {
            return Err(Error::TooLarge(format!("ambient dimension {n} exceeds {MAX_ORACLE_AMBIENT}")));
        }
        if family.len() > MAX_ORACLE_FAMILY {
            return Err(Error::TooLarge(format!("{} subspaces exceed {MAX_ORACLE_FAMILY}", family.len())));
        }
        Ok(OracleInstance { poset: build_poset(family)? })
    }

    pub fn poset(&self) -> &SubspacePoset {
        &self.poset
    }
}

/// Every subspace of `field^n`, in canonical order.
pub fn all_subspaces(field: Field, n: usize) -> Vec<Subspace> {
    let p = field.characteristic() as i64;
    assert!(p > 0, "enumeration needs a finite field");
    let mut out = BTreeSet::new();
    out.insert(Subspace::zero(field, n));
    // all nonzero vectors, then closure under sums of spans
    let total = (p as usize).pow(n as u32);
    let vectors: Vec<Vec<i64>> = (1..total)
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let d = (x % p as usize) as i64;
                    x /= p as usize;
                    d
                })
                .collect()
        })
        .collect();
    let mut frontier: Vec<Subspace> = out.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for v in &vectors {
                let line = Subspace::span_ints(field, n, &[v]);
                let t = s.sum(&line).expect("same ambient");
                if out.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    out.into_iter().collect()
}

/// Complements of `c` in `field^n`, drawn from `subspaces`.
fn complements<'a>(c: &Subspace, subspaces: &'a [Subspace]) -> impl Iterator<Item = &'a Subspace> + 'a {
    let (c, n) = (c.clone(), c.ambient());
    subspaces.iter().filter(move |k| k.dim() + c.dim() == n && k.intersect(&c).map(|m| m.is_zero()).unwrap_or(false))
}

/// A projection family `c ↦ π_c` with `π_b π_c = π_{b∩c}` for all pairs, if
/// one exists, found by backtracking over complements in the poset's order.
pub fn oracle_find_family(inst: &OracleInstance) -> Option<Vec<Matrix>> {
    let p = &inst.poset;
    let field = p.field();
    let n = p.ambient();
    let subspaces = all_subspaces(field, n);
    let candidates: Vec<Vec<Matrix>> = p
        .elements()
        .iter()
        .map(|c| {
            complements(c, &subspaces)
                .map(|k| {
                    projection_onto_along(field, n, &c.basis_vectors(), &k.basis_vectors())
                        .expect("complement gives a basis")
                })
                .collect()
        })
        .collect();
    let mut chosen: Vec<Matrix> = Vec::with_capacity(p.len());
    if search(p, &candidates, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn search(p: &SubspacePoset, candidates: &[Vec<Matrix>], chosen: &mut Vec<Matrix>) -> bool {
    let c = chosen.len();
    if c == p.len() {
        return true;
    }
    for pi in &candidates[c] {
        // the meet of b and c precedes both in the linear extension
        let ok = (0..c).all(|b| {
            let meet = &chosen[p.meet(b, c)];
            &chosen[b].mul(pi) == meet && &pi.mul(&chosen[b]) == meet
        });
        if ok {
            chosen.push(pi.clone());
            if search(p, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

pub fn oracle_exists_family(inst: &OracleInstance) -> bool {
    oracle_find_family(inst).is_some()
}
