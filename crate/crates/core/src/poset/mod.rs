//! Finite posets, Möbius functions, and Möbius inversion.
//!
//! [`FinitePoset`] is the abstract order on `0..n`; [`SubspacePoset`] wraps
//! one whose elements are subspaces ordered by inclusion.

mod dot;
mod subspace_poset;

pub use dot::export_dot;
pub use subspace_poset::{build_poset, SubspacePoset};

use serde::Serialize;

/// A partial order on `0..n` given by its full relation matrix. Element
/// indices are required to be a linear extension: `leq(i, j)` implies `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    leq: Vec<Vec<bool>>,
}

/// Both Möbius functions of a poset with a minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MobiusTable {
    /// `one_var[y] = -Σ_{x<y} one_var[x]`, with 1 at the minimum.
    pub one_var: Vec<i64>,
    /// `two_var[a][b]`, meaningful when `a ≤ b` and zero otherwise.
    pub two_var: Vec<Vec<i64>>,
}

impl MobiusTable {
    pub fn two(&self, a: usize, b: usize) -> i64 {
        self.two_var[a][b]
    }
}

impl FinitePoset {
    /// Builds from a relation matrix; returns `None` unless it is reflexive,
    /// antisymmetric, transitive, and upper-triangular.
    pub fn from_relation(leq: Vec<Vec<bool>>) -> Option<Self> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return None;
        }
        for i in 0..n {
            if !leq[i][i] {
                return None;
            }
            for j in 0..n {
                if leq[i][j] && i > j {
                    return None;
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return None;
                    }
                }
            }
        }
        Some(FinitePoset { leq })
    }

    /// Transitive closure of the given strict relations `(lower, upper)`,
    /// each with `lower < upper` as indices.
    #[allow(clippy::needless_range_loop)]
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Option<Self> {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n || a > b {
                return None;
            }
            leq[a][b] = true;
        }
        // indices are a linear extension, so one ascending pass closes it
        for j in 0..n {
            for i in (0..j).rev() {
                if leq[i][j] {
                    for k in 0..i {
                        if leq[k][i] {
                            leq[k][j] = true;
                        }
                    }
                }
            }
        }
        FinitePoset::from_relation(leq)
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// The unique minimum, if any.
    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq[m][x]))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq[x][m]))
    }

    /// Cover relations `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.lt(a, b) && !(a + 1..b).any(|z| self.lt(a, z) && self.lt(z, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// `two_var[a][b]` for all pairs; zero where `a ≰ b`.
    #[allow(clippy::needless_range_loop)]
    pub fn mobius_two_var(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut mu = vec![vec![0i64; n]; n];
        for a in 0..n {
            mu[a][a] = 1;
            for b in a + 1..n {
                if !self.leq[a][b] {
                    continue;
                }
                let s: i64 = (a..b).filter(|&z| self.leq[a][z] && self.leq[z][b]).map(|z| mu[a][z]).sum();
                mu[a][b] = -s;
            }
        }
        mu
    }

    /// The one-variable recursion anchored at the minimum; `None` without one.
    pub fn mobius_one_var(&self) -> Option<Vec<i64>> {
        let min = self.minimum()?;
        let n = self.len();
        let mut mu = vec![0i64; n];
        for y in 0..n {
            mu[y] = if y == min { 1 } else { -(0..y).filter(|&x| self.lt(x, y)).map(|x| mu[x]).sum::<i64>() };
        }
        Some(mu)
    }

    /// Both tables; `None` when the poset has no minimum.
    pub fn mobius(&self) -> Option<MobiusTable> {
        Some(MobiusTable { one_var: self.mobius_one_var()?, two_var: self.mobius_two_var() })
    }

    /// Cumulative sums over principal down-sets: `ŷ(y) = Σ_{x≤y} φ(x)`.
    pub fn down_sums(&self, phi: &[i64]) -> Vec<i64> {
        (0..self.len()).map(|y| (0..=y).filter(|&x| self.leq[x][y]).map(|x| phi[x]).sum()).collect()
    }

    /// Recovers `φ` from `φ̂ = down_sums(φ)` via `φ(y) = Σ_{x≤y} μ(x,y)·φ̂(x)`.
    pub fn mobius_invert(&self, mu: &[Vec<i64>], phi_hat: &[i64]) -> Vec<i64> {
        (0..self.len()).map(|y| (0..=y).filter(|&x| self.leq[x][y]).map(|x| mu[x][y] * phi_hat[x]).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FinitePoset {
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::from_relations(n, &rel).unwrap()
    }

    fn diamond() -> FinitePoset {
        FinitePoset::from_relations(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn three_chain_mobius() {
        let mu = chain(3).mobius_two_var();
        assert_eq!(mu[0][0], 1);
        assert_eq!(mu[0][1], -1);
        assert_eq!(mu[0][2], 0);
        assert_eq!(mu[1][2], -1);
    }

    #[test]
    fn diamond_mobius() {
        let t = diamond().mobius().unwrap();
        assert_eq!(t.two_var[0][3], 1);
        assert_eq!(t.two_var[1][3], -1);
        assert_eq!(t.two_var[2][3], -1);
        assert_eq!(t.two_var[3][3], 1);
        assert_eq!(t.one_var, vec![1, -1, -1, 1]);
    }

    #[test]
    fn three_atoms_mobius() {
        let p = FinitePoset::from_relations(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        let t = p.mobius().unwrap();
        assert_eq!(t.two_var[0][4], 2);
        assert_eq!(t.two_var[1][4], -1);
        assert_eq!(t.one_var[4], 2);
    }

    #[test]
    fn inversion_of_constant_function() {
        let p = diamond();
        let mu = p.mobius_two_var();
        assert_eq!(p.mobius_invert(&mu, &[1, 1, 1, 1]), vec![1, 0, 0, 0]);
        // dimensions of 0, two lines, plane
        assert_eq!(p.mobius_invert(&mu, &[0, 1, 1, 2]), vec![0, 1, 1, 0]);
    }

    #[test]
    fn rejects_non_posets() {
        assert!(FinitePoset::from_relation(vec![vec![true, true], vec![true, true]]).is_none());
        assert!(FinitePoset::from_relation(vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true]
        ])
        .is_none());
        assert!(FinitePoset::from_relations(2, &[(1, 0)]).is_none());
    }

    #[test]
    fn covers_are_transitive_reduction() {
        assert_eq!(chain(4).covers(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(diamond().covers(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn no_minimum_means_no_one_var() {
        let p = FinitePoset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(p.mobius_one_var().is_none());
        assert_eq!(p.mobius_two_var()[0][2], -1);
    }
}
