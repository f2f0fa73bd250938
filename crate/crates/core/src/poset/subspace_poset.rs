use std::collections::BTreeSet;

use super::{FinitePoset, MobiusTable};
use crate::error::{Error, Result};
use crate::linalg::{Field, Subspace};

/// A meet-closed family of subspaces of one ambient space, containing the
/// zero and the full subspace, ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspacePoset {
    field: Field,
    ambient: usize,
    /// Sorted by (dimension, canonical basis): a linear extension.
    elements: Vec<Subspace>,
    order: FinitePoset,
}

/// Builds the inclusion poset of a family, rejecting families that are not
/// closed under intersection or lack `0` / the full space.
pub fn build_poset<I>(subspaces: I) -> Result<SubspacePoset>
where
    I: IntoIterator<Item = Subspace>,
{
    let set: BTreeSet<Subspace> = subspaces.into_iter().collect();
    let elements: Vec<Subspace> = set.into_iter().collect();
    let first = elements.first().ok_or(Error::MissingBounds)?;
    let (field, ambient) = (first.field(), first.ambient());
    for s in &elements {
        if s.field() != field || s.ambient() != ambient {
            return Err(Error::AmbientMismatch("poset elements live in different spaces".into()));
        }
    }
    if !elements[0].is_zero() || !elements.last().is_some_and(Subspace::is_full) {
        return Err(Error::MissingBounds);
    }
    let n = elements.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i..n {
            leq[i][j] = elements[j].contains(&elements[i])?;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let meet = elements[i].intersect(&elements[j])?;
            if elements.binary_search(&meet).is_err() {
                return Err(Error::NotMeetClosed);
            }
        }
    }
    let order = FinitePoset::from_relation(leq).expect("inclusion is a partial order");
    Ok(SubspacePoset { field, ambient, elements, order })
}

impl SubspacePoset {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Subspace {
        &self.elements[i]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.elements.binary_search(s).ok()
    }

    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.order.covers()
    }

    /// Index of `a ∩ b`; present because the family is meet-closed.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let m = self.elements[a].intersect(&self.elements[b]).expect("same ambient");
        self.index_of(&m).expect("meet-closed")
    }

    pub fn mobius(&self) -> MobiusTable {
        self.order.mobius().expect("zero subspace is the minimum")
    }

    pub fn mobius_invert(&self, table: &MobiusTable, phi_hat: &[i64]) -> Vec<i64> {
        self.order.mobius_invert(&table.two_var, phi_hat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn sp(vs: &[&[i64]]) -> Subspace {
        Subspace::span_ints(Q, 2, vs)
    }

    pub(crate) fn three_lines() -> Vec<Subspace> {
        vec![Subspace::zero(Q, 2), sp(&[&[1, 0]]), sp(&[&[0, 1]]), sp(&[&[1, 1]]), Subspace::full(Q, 2)]
    }

    #[test]
    fn three_lines_poset() {
        let p = build_poset(three_lines()).unwrap();
        assert_eq!(p.len(), 5);
        let atoms = (1..p.len()).filter(|&i| p.covers().contains(&(0, i))).count();
        assert_eq!(atoms, 3);
        let mu = p.mobius();
        assert_eq!(mu.two(0, p.top()), 2);
        for line in 1..4 {
            assert_eq!(mu.two(line, p.top()), -1);
        }
        assert_eq!(mu.two(p.top(), p.top()), 1);
    }

    #[test]
    fn two_chain() {
        let p = build_poset([Subspace::zero(Q, 3), Subspace::full(Q, 3)]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.covers(), vec![(0, 1)]);
    }

    #[test]
    fn diamond_mobius_values() {
        let p = build_poset([Subspace::zero(Q, 2), sp(&[&[1, 0]]), sp(&[&[0, 1]]), Subspace::full(Q, 2)]).unwrap();
        let mu = p.mobius();
        assert_eq!(mu.two(0, 3), 1);
        assert_eq!(mu.two(1, 3), -1);
        assert_eq!(mu.two(3, 3), 1);
        let dims: Vec<i64> = p.elements().iter().map(|s| s.dim() as i64).collect();
        assert_eq!(p.mobius_invert(&mu, &dims), vec![0, 1, 1, 0]);
    }

    #[test]
    fn missing_bounds_and_meets() {
        assert_eq!(build_poset([sp(&[&[1, 0]]), Subspace::full(Q, 2)]), Err(Error::MissingBounds));
        assert_eq!(build_poset([Subspace::zero(Q, 2), sp(&[&[1, 0]])]), Err(Error::MissingBounds));
        let planes = [
            Subspace::zero(Q, 3),
            Subspace::span_ints(Q, 3, &[&[1, 0, 0], &[0, 1, 0]]),
            Subspace::span_ints(Q, 3, &[&[0, 1, 0], &[0, 0, 1]]),
            Subspace::full(Q, 3),
        ];
        assert_eq!(build_poset(planes), Err(Error::NotMeetClosed));
    }

    #[test]
    fn meet_lookup() {
        let p = build_poset(three_lines()).unwrap();
        assert_eq!(p.meet(1, 2), 0);
        assert_eq!(p.meet(1, p.top()), 1);
    }
}
