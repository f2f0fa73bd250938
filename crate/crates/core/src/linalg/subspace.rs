//! Subspaces of `F^n` in canonical form and the subspace calculus.

use std::fmt;

use super::field::{Field, Scalar};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// A subspace of `F^n`, stored as the reduced row echelon basis of its row
/// space with zero rows dropped. Two values are equal iff they are the same
/// set. The derived order compares dimension first, then the basis entries,
/// so it is a linear extension of inclusion within one ambient space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace { basis: Matrix::zeros(field, 0, ambient) }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace { basis: Matrix::identity(field, ambient) }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let ech = m.echelon();
        Subspace { basis: ech.reduced.submatrix(0..ech.rank, 0..m.cols()) }
    }

    /// Span of the given vectors of length `ambient`.
    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        let m = Matrix::from_rows(field, ambient, vectors.to_vec()).expect("vectors of ambient length");
        Subspace::row_space(&m)
    }

    /// Convenience for tests and examples.
    pub fn span_ints(field: Field, ambient: usize, vectors: &[&[i64]]) -> Self {
        let vs: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Subspace::span(field, ambient, &vs)
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vectors()
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() || self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch(format!(
                "{}^{} vs {}^{}",
                self.field(),
                self.ambient(),
                other.field(),
                other.ambient()
            )));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        let row = Matrix::from_rows(self.field(), self.ambient(), vec![v.to_vec()]).expect("vector of ambient length");
        self.basis.vstack(&row).rank() == self.dim()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(self.basis.vstack(&other.basis).rank() == self.dim())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)))
    }

    /// Intersection by the Zassenhaus block elimination: reduce
    /// `[[A, A], [B, 0]]`; the rows whose left half vanishes span `A ∩ B`
    /// in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let n = self.ambient();
        let f = self.field();
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Matrix::zeros(f, other.dim(), n));
        let ech = top.vstack(&bottom).echelon();
        let first = ech.pivots.iter().position(|&p| p >= n).unwrap_or(ech.rank);
        Ok(Subspace::row_space(&ech.reduced.submatrix(first..ech.rank, n..2 * n)))
    }

    /// Rows span the annihilator: `self = {x : annihilator·x = 0}`.
    pub fn annihilator(&self) -> Matrix {
        let vs = self.basis.null_space();
        Matrix::from_rows(self.field(), self.ambient(), vs).expect("annihilator rows")
    }

    /// Extends a basis of `self` to a basis of `outer`, returning only the
    /// added vectors. Candidates are the canonical basis rows of `outer` in
    /// order, so the choice is deterministic.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Vec<Vec<Scalar>>> {
        self.same_ambient(outer)?;
        let mut current = self.basis.clone();
        let mut added = Vec::new();
        for v in outer.basis_vectors() {
            let row = Matrix::from_rows(self.field(), self.ambient(), vec![v.clone()]).expect("row");
            let next = current.vstack(&row);
            if next.rank() > current.rows() {
                current = next;
                added.push(v);
            }
        }
        Ok(added)
    }

    /// Short human-readable label, e.g. `<(1,0),(0,1)>`.
    pub fn label(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let vs: Vec<String> = self
            .basis_vectors()
            .iter()
            .map(|v| {
                let xs: Vec<String> = v.iter().map(|s| s.to_string()).collect();
                format!("({})", xs.join(","))
            })
            .collect();
        format!("<{}>", vs.join(","))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

pub fn kernel(m: &Matrix) -> Subspace {
    Subspace::span(m.field(), m.cols(), &m.null_space())
}

/// Column space of `m`, a subspace of `F^rows`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::row_space(&m.transpose())
}

pub fn sub_sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.sum(b)
}

pub fn sub_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

/// `b ⊆ a`.
pub fn sub_contains(a: &Subspace, b: &Subspace) -> Result<bool> {
    a.contains(b)
}

pub fn map_image(m: &Matrix, a: &Subspace) -> Result<Subspace> {
    if a.field() != m.field() || a.ambient() != m.cols() {
        return Err(Error::AmbientMismatch(format!(
            "subspace of dimension-{} space under a {}x{} map",
            a.ambient(),
            m.rows(),
            m.cols()
        )));
    }
    // rows of A·Mᵀ are the images of the basis vectors
    Ok(Subspace::row_space(&a.basis().mul(&m.transpose())))
}

pub fn map_preimage(m: &Matrix, b: &Subspace) -> Result<Subspace> {
    if b.field() != m.field() || b.ambient() != m.rows() {
        return Err(Error::AmbientMismatch(format!(
            "subspace of dimension-{} space pulled back along a {}x{} map",
            b.ambient(),
            m.rows(),
            m.cols()
        )));
    }
    let ann = b.annihilator();
    if ann.rows() == 0 {
        return Ok(Subspace::full(m.field(), m.cols()));
    }
    Ok(kernel(&ann.mul(m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn sp(n: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::span_ints(Q, n, vs)
    }

    #[test]
    fn nilpotent_kernel_and_image() {
        let m = Matrix::from_ints(Q, &[&[0, 1], &[0, 0]]);
        assert_eq!(kernel(&m), sp(2, &[&[1, 0]]));
        assert_eq!(image(&m), sp(2, &[&[1, 0]]));
        assert_eq!(map_image(&m, &Subspace::full(Q, 2)).unwrap(), sp(2, &[&[1, 0]]));
    }

    #[test]
    fn zero_and_identity_maps() {
        let z = Matrix::zeros(Q, 3, 2);
        assert_eq!(kernel(&z), Subspace::full(Q, 2));
        assert_eq!(image(&z), Subspace::zero(Q, 3));
        let id = Matrix::identity(Q, 3);
        assert_eq!(kernel(&id), Subspace::zero(Q, 3));
        assert_eq!(image(&id), Subspace::full(Q, 3));
    }

    #[test]
    fn coordinate_lines_meet_in_zero() {
        let a = sp(2, &[&[1, 0]]);
        let b = sp(2, &[&[0, 1]]);
        assert!(a.intersect(&b).unwrap().is_zero());
        assert!(a.sum(&b).unwrap().is_full());
    }

    #[test]
    fn coordinate_planes_meet_in_line() {
        let a = sp(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = sp(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), sp(3, &[&[0, 1, 0]]));
    }

    #[test]
    fn nested_sum_and_intersection() {
        let a = sp(3, &[&[1, 1, 0]]);
        let b = sp(3, &[&[1, 1, 0], &[0, 0, 1]]);
        assert!(b.contains(&a).unwrap());
        assert_eq!(a.sum(&b).unwrap(), b);
        assert_eq!(a.intersect(&b).unwrap(), a);
    }

    #[test]
    fn different_spanning_sets_compare_equal() {
        let a = sp(3, &[&[1, 2, 3], &[0, 1, 1]]);
        let b = sp(3, &[&[1, 3, 4], &[2, 5, 7]]);
        assert_eq!(a, b);
    }

    #[test]
    fn preimage_edge_cases() {
        let m = Matrix::from_ints(Q, &[&[0, 1], &[0, 0]]);
        assert_eq!(map_preimage(&m, &Subspace::zero(Q, 2)).unwrap(), kernel(&m));
        assert_eq!(map_preimage(&m, &Subspace::full(Q, 2)).unwrap(), Subspace::full(Q, 2));
        assert_eq!(map_preimage(&m, &sp(2, &[&[1, 0]])).unwrap(), Subspace::full(Q, 2));
        assert_eq!(map_preimage(&m, &sp(2, &[&[0, 1]])).unwrap(), sp(2, &[&[1, 0]]));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(Q, 2);
        let b = Subspace::full(Q, 3);
        assert!(matches!(a.sum(&b), Err(Error::AmbientMismatch(_))));
        assert!(matches!(a.intersect(&b), Err(Error::AmbientMismatch(_))));
        assert!(matches!(a.contains(&b), Err(Error::AmbientMismatch(_))));
        let m = Matrix::identity(Q, 3);
        assert!(map_image(&m, &a).is_err());
        assert!(map_preimage(&m, &a).is_err());
    }

    #[test]
    fn complement_extends_to_outer() {
        let inner = sp(3, &[&[1, 1, 0]]);
        let outer = Subspace::full(Q, 3);
        let added = inner.complement_in(&outer).unwrap();
        assert_eq!(added.len(), 2);
        let mut all = inner.basis_vectors();
        all.extend(added);
        assert!(Subspace::span(Q, 3, &all).is_full());
    }
}
