//! Per-object subspace families closed under generator images, generator
//! preimages, and intersections, computed as a least fixpoint.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{map_image, map_preimage, Subspace};
use crate::poset::{build_poset, export_dot, SubspacePoset};
use crate::rep::Representation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlagLimits {
    pub max_rounds: usize,
    pub max_elements_per_object: usize,
}

impl Default for FlagLimits {
    fn default() -> Self {
        FlagLimits { max_rounds: 64, max_elements_per_object: 4096 }
    }
}

/// How a subspace first entered the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Seed,
    /// Image of `source` (at the generator's domain).
    Image {
        generator: usize,
        source: Subspace,
    },
    /// Preimage of `target` (at the generator's codomain).
    Preimage {
        generator: usize,
        target: Subspace,
    },
    Intersection {
        left: Subspace,
        right: Subspace,
    },
}

impl Provenance {
    fn rule(&self) -> &'static str {
        match self {
            Provenance::Seed => "seed",
            Provenance::Image { .. } => "image",
            Provenance::Preimage { .. } => "preimage",
            Provenance::Intersection { .. } => "intersection",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FlagAssignment {
    posets: Vec<SubspacePoset>,
    provenance: Vec<BTreeMap<Subspace, Provenance>>,
    rounds: usize,
}

impl FlagAssignment {
    pub fn poset(&self, object: usize) -> &SubspacePoset {
        &self.posets[object]
    }

    pub fn posets(&self) -> &[SubspacePoset] {
        &self.posets
    }

    pub fn provenance(&self, object: usize, s: &Subspace) -> Option<&Provenance> {
        self.provenance[object].get(s)
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn total_elements(&self) -> usize {
        self.posets.iter().map(SubspacePoset::len).sum()
    }

    pub fn to_json(&self, r: &Representation) -> Value {
        let objects: Vec<Value> = self
            .posets
            .iter()
            .enumerate()
            .map(|(o, p)| {
                let elements: Vec<Value> = p
                    .elements()
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        let prov = &self.provenance[o][s];
                        let mut pj = json!({"rule": prov.rule()});
                        match prov {
                            Provenance::Seed => {}
                            Provenance::Image { generator, source } => {
                                let g = &r.generators()[*generator];
                                pj["generator"] = g.id.clone().into();
                                pj["source"] = self.posets[g.dom].index_of(source).into();
                            }
                            Provenance::Preimage { generator, target } => {
                                let g = &r.generators()[*generator];
                                pj["generator"] = g.id.clone().into();
                                pj["target"] = self.posets[g.cod].index_of(target).into();
                            }
                            Provenance::Intersection { left, right } => {
                                pj["left"] = p.index_of(left).into();
                                pj["right"] = p.index_of(right).into();
                            }
                        }
                        json!({
                            "index": i,
                            "dim": s.dim(),
                            "basis": s.basis().to_json(),
                            "provenance": pj,
                        })
                    })
                    .collect();
                json!({
                    "object": r.objects()[o].id,
                    "dim": r.dim(o),
                    "elements": elements,
                    "covers": p.covers(),
                })
            })
            .collect();
        json!({
            "rounds": self.rounds,
            "total_elements": self.total_elements(),
            "objects": objects,
        })
    }

    /// DOT text of each object's Hasse diagram, in object order.
    pub fn dot(&self, r: &Representation) -> Vec<(String, String)> {
        self.posets.iter().enumerate().map(|(o, p)| (r.objects()[o].id.clone(), export_dot(p))).collect()
    }
}

/// Closes `{0, full}` at every object under the four rules, round by round.
///
/// Each round applies images and preimages along every generator to the
/// elements added in the previous round, and intersects every new element
/// with everything present. Candidates are merged in canonical order, so
/// the result and every provenance witness are deterministic.
pub fn compute_flag(r: &Representation, limits: FlagLimits) -> Result<FlagAssignment> {
    let n = r.objects().len();
    let field = r.field();
    let mut sets: Vec<BTreeMap<Subspace, Provenance>> = (0..n)
        .map(|o| {
            let d = r.dim(o);
            let mut m = BTreeMap::new();
            m.insert(Subspace::zero(field, d), Provenance::Seed);
            m.insert(Subspace::full(field, d), Provenance::Seed);
            m
        })
        .collect();
    let mut frontier: Vec<BTreeSet<Subspace>> = sets.iter().map(|m| m.keys().cloned().collect()).collect();
    let mut rounds = 0;

    while frontier.iter().any(|f| !f.is_empty()) {
        rounds += 1;
        if rounds > limits.max_rounds {
            let o = frontier.iter().position(|f| !f.is_empty()).unwrap_or(0);
            return Err(Error::ClosureDivergence {
                object: r.objects()[o].id.clone(),
                rule: "round".into(),
                size: sets[o].len(),
                rounds: limits.max_rounds,
            });
        }
        let mut candidates: Vec<BTreeMap<Subspace, Provenance>> = vec![BTreeMap::new(); n];
        let mut offer = |o: usize, s: Subspace, prov: Provenance, sets: &[BTreeMap<Subspace, Provenance>]| {
            if !sets[o].contains_key(&s) {
                candidates[o].entry(s).or_insert(prov);
            }
        };
        for (gi, g) in r.generators().iter().enumerate() {
            for s in &frontier[g.dom] {
                let img = map_image(&g.matrix, s)?;
                offer(g.cod, img, Provenance::Image { generator: gi, source: s.clone() }, &sets);
            }
            for t in &frontier[g.cod] {
                let pre = map_preimage(&g.matrix, t)?;
                offer(g.dom, pre, Provenance::Preimage { generator: gi, target: t.clone() }, &sets);
            }
        }
        for o in 0..n {
            for s in &frontier[o] {
                for t in sets[o].keys() {
                    if s == t {
                        continue;
                    }
                    let meet = s.intersect(t)?;
                    let (left, right) = if s < t { (s.clone(), t.clone()) } else { (t.clone(), s.clone()) };
                    offer(o, meet, Provenance::Intersection { left, right }, &sets);
                }
            }
        }
        for (o, cands) in candidates.into_iter().enumerate() {
            let mut next = BTreeSet::new();
            for (s, prov) in cands {
                if sets[o].len() >= limits.max_elements_per_object {
                    return Err(Error::ClosureDivergence {
                        object: r.objects()[o].id.clone(),
                        rule: prov.rule().into(),
                        size: sets[o].len(),
                        rounds,
                    });
                }
                next.insert(s.clone());
                sets[o].insert(s, prov);
            }
            frontier[o] = next;
        }
    }

    let posets = sets.iter().map(|m| build_poset(m.keys().cloned())).collect::<Result<Vec<_>>>()?;
    Ok(FlagAssignment { posets, provenance: sets, rounds })
}

/// Re-applies all four rules to `flag` and reports the first element that
/// would be added, if any.
pub fn find_unclosed(r: &Representation, flag: &FlagAssignment) -> Option<(usize, Subspace)> {
    for g in r.generators() {
        for s in flag.poset(g.dom).elements() {
            let img = map_image(&g.matrix, s).ok()?;
            if flag.poset(g.cod).index_of(&img).is_none() {
                return Some((g.cod, img));
            }
        }
        for t in flag.poset(g.cod).elements() {
            let pre = map_preimage(&g.matrix, t).ok()?;
            if flag.poset(g.dom).index_of(&pre).is_none() {
                return Some((g.dom, pre));
            }
        }
    }
    for (o, p) in flag.posets().iter().enumerate() {
        for a in p.elements() {
            for b in p.elements() {
                let m = a.intersect(b).ok()?;
                if p.index_of(&m).is_none() {
                    return Some((o, m));
                }
            }
        }
    }
    None
}
