#![allow(dead_code)]

use std::collections::BTreeSet;

use blockcode::linalg::{Field, Matrix, Scalar, Subspace};
use blockcode::poset::FinitePoset;
use blockcode::rep::{parse_representation, Representation};
use rand::Rng;

pub const TRISECTION: &str = include_str!("../data/trisection.json");
pub const BISECTION: &str = include_str!("../data/bisection.json");
pub const A2: &str = include_str!("../data/a2.json");
pub const A3_MIXED: &str = include_str!("../data/a3_mixed.json");

pub fn rep(text: &str) -> Representation {
    parse_representation(text.as_bytes()).expect("fixture parses")
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize, range: i64) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, field.from_i64(rng.gen_range(-range..=range)));
        }
    }
    m
}

pub fn random_invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, field, n, n, 3);
        if m.inverse().is_some() {
            return m;
        }
    }
}

pub fn random_subspace<R: Rng>(rng: &mut R, field: Field, n: usize) -> Subspace {
    let k = rng.gen_range(0..=n);
    Subspace::row_space(&random_matrix(rng, field, k, n, 2))
}

pub fn random_vector<R: Rng>(rng: &mut R, field: Field, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect()
}

/// Adds `0`, the full space, and all pairwise intersections until stable.
pub fn meet_closure(field: Field, n: usize, seeds: impl IntoIterator<Item = Subspace>) -> BTreeSet<Subspace> {
    let mut fam: BTreeSet<Subspace> = seeds.into_iter().collect();
    fam.insert(Subspace::zero(field, n));
    fam.insert(Subspace::full(field, n));
    loop {
        let v: Vec<Subspace> = fam.iter().cloned().collect();
        let mut added = false;
        for a in &v {
            for b in &v {
                if fam.insert(a.intersect(b).unwrap()) {
                    added = true;
                }
            }
        }
        if !added {
            return fam;
        }
    }
}

/// Calls `f` on every naturally labeled poset on `n` elements: each new
/// element sits on top of a down-set of the previous ones. Every finite
/// poset is isomorphic to at least one of them.
pub fn for_each_natural_poset(n: usize, f: &mut dyn FnMut(&FinitePoset)) {
    fn extend(leq: &mut Vec<Vec<bool>>, n: usize, f: &mut dyn FnMut(&FinitePoset)) {
        let k = leq.len();
        if k == n {
            f(&FinitePoset::from_relation(leq.clone()).expect("valid by construction"));
            return;
        }
        for mask in 0u32..(1 << k) {
            let in_set = |i: usize| mask & (1 << i) != 0;
            let down_closed = (0..k).filter(|&i| in_set(i)).all(|i| (0..k).all(|j| !leq[j][i] || in_set(j)));
            if !down_closed {
                continue;
            }
            for (i, row) in leq.iter_mut().enumerate() {
                row.push(in_set(i));
            }
            let mut last = vec![false; k + 1];
            last[k] = true;
            leq.push(last);
            extend(leq, n, f);
            leq.pop();
            for row in leq.iter_mut() {
                row.pop();
            }
        }
    }
    extend(&mut Vec::new(), n, f);
}

/// A random poset on `n` elements whose labels are a linear extension.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> FinitePoset {
    let mut rel = Vec::new();
    for b in 0..n {
        for a in 0..b {
            if rng.gen_bool(density) {
                rel.push((a, b));
            }
        }
    }
    FinitePoset::from_relations(n, &rel).expect("forward relations")
}

/// `μ` from the dual recursion `μ(a,b) = −Σ_{a<z≤b} μ(z,b)`, independent of
/// the library's forward recursion.
#[allow(clippy::needless_range_loop)]
pub fn mobius_dual(p: &FinitePoset) -> Vec<Vec<i64>> {
    let n = p.len();
    let mut mu = vec![vec![0i64; n]; n];
    for b in 0..n {
        mu[b][b] = 1;
        for a in (0..b).rev() {
            if p.leq(a, b) {
                mu[a][b] = -(a + 1..=b).filter(|&z| p.leq(a, z) && p.leq(z, b)).map(|z| mu[z][b]).sum::<i64>();
            }
        }
    }
    mu
}

/// A direct sum of interval blockcodes over a randomly oriented `A_n`,
/// disguised by a random change of basis at every vertex. Returns the
/// representation and the dimension vectors of its summands.
pub fn random_blockcode_sum<R: Rng>(rng: &mut R) -> (Representation, Vec<Vec<usize>>) {
    let field = Field::Rational;
    let n = rng.gen_range(1..=5);
    let mut dims = vec![0usize; n];
    let mut intervals: Vec<(usize, usize)> = Vec::new();
    for _ in 0..rng.gen_range(1..=6) {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(i..n);
        if (i..=j).all(|k| dims[k] < 4) {
            for d in &mut dims[i..=j] {
                *d += 1;
            }
            intervals.push((i, j));
        }
    }
    // coordinate of each interval at each vertex it covers
    let mut coord = vec![vec![None; n]; intervals.len()];
    let mut next = vec![0usize; n];
    for (s, &(i, j)) in intervals.iter().enumerate() {
        for k in i..=j {
            coord[s][k] = Some(next[k]);
            next[k] += 1;
        }
    }
    let change: Vec<Matrix> = dims.iter().map(|&d| random_invertible(rng, field, d)).collect();
    let objects: Vec<(String, usize)> = (0..n).map(|k| (format!("v{k}"), dims[k])).collect();
    let mut generators = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let forward = rng.gen_bool(0.5);
        let (x, y) = if forward { (k, k + 1) } else { (k + 1, k) };
        let mut m = Matrix::zeros(field, dims[y], dims[x]);
        for c in &coord {
            if let (Some(cx), Some(cy)) = (c[x], c[y]) {
                let mut s = 0;
                while s == 0 {
                    s = rng.gen_range(-3..=3);
                }
                m.set(cy, cx, field.from_i64(s));
            }
        }
        let disguised = change[y].mul(&m).mul(&change[x].inverse().unwrap());
        generators.push((format!("e{k}"), format!("v{x}"), format!("v{y}"), disguised));
    }
    let r = Representation::new(field, objects, generators).expect("consistent shapes");
    let expected = intervals.iter().map(|&(i, j)| (0..n).map(|k| usize::from(i <= k && k <= j)).collect()).collect();
    (r, expected)
}

/// Canonical relation matrix of a naturally labeled poset: the smallest
/// relabeling among orders sorted by a refined structural invariant that
/// starts with height, so every candidate is again a linear extension.
fn canonical_poset(leq: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = leq.len();
    let mut height = vec![0usize; n];
    for j in 0..n {
        for i in 0..j {
            if leq[i][j] {
                height[j] = height[j].max(height[i] + 1);
            }
        }
    }
    let base: Vec<(usize, usize, usize)> = (0..n)
        .map(|i| {
            let below = (0..n).filter(|&j| leq[j][i]).count();
            let above = (0..n).filter(|&j| leq[i][j]).count();
            (height[i], below, above)
        })
        .collect();
    type Key = ((usize, usize, usize), Vec<(usize, usize, usize)>, Vec<(usize, usize, usize)>);
    let key: Vec<Key> = (0..n)
        .map(|i| {
            let mut down: Vec<_> = (0..n).filter(|&j| j != i && leq[j][i]).map(|j| base[j]).collect();
            let mut up: Vec<_> = (0..n).filter(|&j| j != i && leq[i][j]).map(|j| base[j]).collect();
            down.sort();
            up.sort();
            (base[i], down, up)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key[a].cmp(&key[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if key[g[0]] == key[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }

    fn search(
        leq: &[Vec<bool>],
        groups: &[Vec<usize>],
        g: usize,
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        best: &mut Option<Vec<Vec<bool>>>,
    ) {
        if g == groups.len() {
            let n = perm.len();
            let m: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| leq[perm[a]][perm[b]]).collect()).collect();
            if best.as_ref().is_none_or(|b| m < *b) {
                *best = Some(m);
            }
            return;
        }
        let group = &groups[g];
        let placed = perm.len() - groups[..g].iter().map(Vec::len).sum::<usize>();
        if placed == group.len() {
            search(leq, groups, g + 1, used, perm, best);
            return;
        }
        for &i in group {
            if !used[i] {
                used[i] = true;
                perm.push(i);
                search(leq, groups, g, used, perm, best);
                perm.pop();
                used[i] = false;
            }
        }
    }
    let mut best = None;
    search(leq, &groups, 0, &mut vec![false; n], &mut Vec::new(), &mut best);
    best.expect("at least one ordering")
}

/// All posets with `1..=max_n` elements up to isomorphism, grouped by size.
/// Each poset of size `n` is a poset of size `n - 1` with a new maximal
/// element placed over one of its down-sets.
pub fn unlabeled_posets(max_n: usize) -> Vec<Vec<FinitePoset>> {
    let mut levels: Vec<Vec<Vec<Vec<bool>>>> = vec![vec![vec![vec![true]]]];
    while levels.len() < max_n {
        let mut next: BTreeSet<Vec<Vec<bool>>> = BTreeSet::new();
        for leq in levels.last().expect("nonempty") {
            let k = leq.len();
            for mask in 0u32..(1 << k) {
                let in_set = |i: usize| mask & (1 << i) != 0;
                if !(0..k).filter(|&i| in_set(i)).all(|i| (0..k).all(|j| !leq[j][i] || in_set(j))) {
                    continue;
                }
                let mut ext: Vec<Vec<bool>> = leq
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let mut r = row.clone();
                        r.push(in_set(i));
                        r
                    })
                    .collect();
                let mut last = vec![false; k + 1];
                last[k] = true;
                ext.push(last);
                next.insert(canonical_poset(&ext));
            }
        }
        levels.push(next.into_iter().collect());
    }
    levels
        .into_iter()
        .map(|l| l.into_iter().map(|m| FinitePoset::from_relation(m).expect("linear extension")).collect())
        .collect()
}
