//! Constructive side of the criterion: multiplicative commuting projection
//! families on each flag poset, pseudo-inverses of the generators, and
//! verification of the inverse-category axioms on the envelope they generate.

mod envelope;
mod pseudo;

pub use envelope::{verify_envelope, Envelope, EnvelopeLimits};
pub use pseudo::{kernel_decomposition_check, pseudo_inverse, pseudo_inverses};

use serde_json::{json, Value};

use crate::criterion::{MuMode, PairEvaluator};
use crate::error::{Error, Result};
use crate::flag::FlagAssignment;
use crate::linalg::{image, kernel, Matrix, Scalar, Subspace};
use crate::poset::{MobiusTable, SubspacePoset};
use crate::rep::Representation;

/// Projections `π_c` onto every element `c` of one object's flag poset,
/// indexed like the poset's elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionFamily {
    pub object: String,
    poset: SubspacePoset,
    projections: Vec<Matrix>,
}

impl ProjectionFamily {
    /// Wraps explicit projections after checking every family invariant.
    pub fn from_parts(object: &str, poset: SubspacePoset, projections: Vec<Matrix>) -> Result<Self> {
        verify_family(&poset, &projections)
            .map_err(|message| Error::ConstructionFailure { object: object.to_string(), message })?;
        Ok(ProjectionFamily { object: object.to_string(), poset, projections })
    }

    pub fn poset(&self) -> &SubspacePoset {
        &self.poset
    }

    pub fn projections(&self) -> &[Matrix] {
        &self.projections
    }

    /// `π_c`, if `c` belongs to the poset.
    pub fn projection(&self, c: &Subspace) -> Option<&Matrix> {
        self.poset.index_of(c).map(|i| &self.projections[i])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "object": self.object,
            "projections": self.poset.elements().iter().zip(&self.projections).map(|(c, m)| json!({
                "image_basis": c.basis().to_json(),
                "matrix": m.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks every family invariant by exact matrix identities: idempotence,
/// prescribed images, `π_0 = 0`, `π_full = 1`, pairwise commutation, and
/// `π_b π_c = π_{b∩c}`. Returns a description of the first failure.
pub fn verify_family(p: &SubspacePoset, projections: &[Matrix]) -> std::result::Result<(), String> {
    if projections.len() != p.len() {
        return Err(format!("{} projections for {} elements", projections.len(), p.len()));
    }
    for (c, pi) in p.elements().iter().zip(projections) {
        if !pi.is_idempotent() {
            return Err(format!("projection onto {} is not idempotent", c.label()));
        }
        if &image(pi) != c {
            return Err(format!("projection onto {} has image {}", c.label(), image(pi).label()));
        }
    }
    if !projections[p.bottom()].is_zero() || !projections[p.top()].is_identity() {
        return Err("bounds do not map to the zero and identity projections".into());
    }
    for b in 0..p.len() {
        for c in b + 1..p.len() {
            let (pb, pc) = (&projections[b], &projections[c]);
            let bc = pb.mul(pc);
            if bc != pc.mul(pb) {
                return Err(format!(
                    "projections onto {} and {} do not commute",
                    p.element(b).label(),
                    p.element(c).label()
                ));
            }
            if bc != projections[p.meet(b, c)] {
                return Err(format!(
                    "product of projections onto {} and {} is not the projection onto their meet",
                    p.element(b).label(),
                    p.element(c).label()
                ));
            }
        }
    }
    Ok(())
}

/// Projection with image spanned by `image_vectors` and kernel spanned by
/// `kernel_vectors`; `None` if together they are not a basis.
pub fn projection_onto_along(
    field: crate::linalg::Field,
    n: usize,
    image_vectors: &[Vec<Scalar>],
    kernel_vectors: &[Vec<Scalar>],
) -> Option<Matrix> {
    if image_vectors.len() + kernel_vectors.len() != n {
        return None;
    }
    let mut cols = image_vectors.to_vec();
    cols.extend(kernel_vectors.iter().cloned());
    let basis = Matrix::from_columns(field, n, &cols);
    let inv = basis.inverse()?;
    let mut diag = Matrix::zeros(field, n, n);
    for i in 0..image_vectors.len() {
        diag.set(i, i, field.one());
    }
    Some(basis.mul(&diag).mul(&inv))
}

/// Builds a multiplicative commuting projection family on `p`.
///
/// Elements `b` are taken in the poset's linear extension. For each one, a
/// complement `D_b` of `Σ_{a<b} a` inside `b` is chosen by extending with the
/// canonical basis rows of `b` in order. The kernel of `π_c` is then spanned
/// by all `D_b` with `b ⊄ c`; these vectors lie in `b`, avoid `c` and every
/// proper predecessor of `b`, and one `D_b` serves every `c`, which is what
/// makes the family commute. The union of all `D_b` is a basis exactly when
/// such a family exists. Every invariant is re-verified before returning.
pub fn realize_projections(object: &str, p: &SubspacePoset, mobius: &MobiusTable) -> Result<ProjectionFamily> {
    let eval = PairEvaluator::new(p, mobius);
    if !eval.negative_pairs(MuMode::Standard).is_empty() {
        return Err(Error::CriterionViolated { object: object.to_string() });
    }
    let field = p.field();
    let n = p.ambient();
    let fail = |message: String| Error::ConstructionFailure { object: object.to_string(), message };

    let mut deltas: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(p.len());
    for b in 0..p.len() {
        let below =
            (0..b).filter(|&a| p.leq(a, b)).try_fold(Subspace::zero(field, n), |acc, a| acc.sum(p.element(a)))?;
        deltas.push(below.complement_in(p.element(b))?);
    }

    let mut projections = Vec::with_capacity(p.len());
    for (ci, c) in p.elements().iter().enumerate() {
        let mut spanned = c.clone();
        let mut kernel_vectors = Vec::new();
        for b in (0..p.len()).filter(|&b| !p.leq(b, ci)) {
            for v in &deltas[b] {
                if spanned.contains_vector(v) {
                    return Err(fail(format!(
                        "complement vectors chosen in {} are dependent on {} and earlier choices for c = {}",
                        p.element(b).label(),
                        spanned.label(),
                        c.label()
                    )));
                }
                spanned = spanned.sum(&Subspace::span(field, n, std::slice::from_ref(v)))?;
                kernel_vectors.push(v.clone());
            }
        }
        let pi = projection_onto_along(field, n, &c.basis_vectors(), &kernel_vectors).ok_or_else(|| {
            fail(format!("kernel for c = {} has {} vectors but needs {}", c.label(), kernel_vectors.len(), n - c.dim()))
        })?;
        projections.push(pi);
    }
    verify_family(p, &projections).map_err(fail)?;
    Ok(ProjectionFamily { object: object.to_string(), poset: p.clone(), projections })
}

/// Projection families for every object; fails if any object violates the
/// criterion or its construction fails.
pub fn realize_all(r: &Representation, flag: &FlagAssignment) -> Result<Vec<ProjectionFamily>> {
    flag.posets().iter().enumerate().map(|(o, p)| realize_projections(&r.objects()[o].id, p, &p.mobius())).collect()
}

/// The four conditions of the commuting-projection characterization for an
/// ordered pair of projections, each checked in both orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommuteConditions {
    pub commute: bool,
    /// `im α = im α ∩ im β + im α ∩ ker β`
    pub image_split: bool,
    /// the same as a dimension count
    pub rank_split: bool,
    /// the split holds for both `im α` and `ker α`
    pub image_kernel_split: bool,
}

fn splits(s: &Subspace, im: &Subspace, ker: &Subspace) -> bool {
    let a = s.intersect(im).expect("same ambient");
    let b = s.intersect(ker).expect("same ambient");
    &a.sum(&b).expect("same ambient") == s
}

fn rank_splits(s: &Subspace, im: &Subspace, ker: &Subspace) -> bool {
    let a = s.intersect(im).expect("same ambient");
    let b = s.intersect(ker).expect("same ambient");
    s.dim() == a.dim() + b.dim()
}

pub fn commute_conditions(alpha: &Matrix, beta: &Matrix) -> CommuteConditions {
    let (ia, ka) = (image(alpha), kernel(alpha));
    let (ib, kb) = (image(beta), kernel(beta));
    CommuteConditions {
        commute: alpha.commutes_with(beta),
        image_split: splits(&ia, &ib, &kb) && splits(&ib, &ia, &ka),
        rank_split: rank_splits(&ia, &ib, &kb) && rank_splits(&ib, &ia, &ka),
        image_kernel_split: splits(&ia, &ib, &kb)
            && splits(&ka, &ib, &kb)
            && splits(&ib, &ia, &ka)
            && splits(&kb, &ia, &ka),
    }
}

/// The four conditions over every ordered pair of `monoid`, each true only
/// if it holds for all pairs.
pub fn monoid_conditions(monoid: &[Matrix]) -> CommuteConditions {
    let mut all = CommuteConditions { commute: true, image_split: true, rank_split: true, image_kernel_split: true };
    for a in monoid {
        for b in monoid {
            let c = commute_conditions(a, b);
            all.commute &= c.commute;
            all.image_split &= c.image_split;
            all.rank_split &= c.rank_split;
            all.image_kernel_split &= c.image_kernel_split;
        }
    }
    all
}
