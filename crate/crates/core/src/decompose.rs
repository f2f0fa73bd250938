//! Certified decomposition of cycle-free representations into blockcodes,
//! and an independent verifier for the resulting certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde_json::{json, Map, Value};

use crate::criterion::{check_representation, MuMode};
use crate::error::{Error, Result};
use crate::flag::{compute_flag, FlagAssignment, FlagLimits};
use crate::linalg::{image, Field, Matrix, Scalar, Subspace};
use crate::realize::{
    projection_onto_along, pseudo_inverses, realize_all, verify_envelope, EnvelopeLimits, ProjectionFamily,
};
use crate::rep::{field_json, parse_field, parse_scalar, Representation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub id: String,
    /// Basis vectors of the atom, in the object's ambient coordinates.
    pub basis: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectAtoms {
    pub object: String,
    pub atoms: Vec<Atom>,
}

/// Where a generator sends one atom of its domain. `to` and `block` are
/// `None` for the zero map; otherwise `block` is the matrix of the
/// restriction in the two atoms' bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomImage {
    pub from: String,
    pub to: Option<String>,
    pub block: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorAction {
    pub generator: String,
    pub images: Vec<AtomImage>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub atoms: Vec<String>,
    pub dimension_vector: BTreeMap<String, usize>,
}

/// A decomposition certificate: atoms per object, the action of every
/// generator on atoms, and the grouping of atoms into summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockcodeDecomposition {
    pub field: Field,
    pub objects: Vec<ObjectAtoms>,
    pub generators: Vec<GeneratorAction>,
    pub summands: Vec<Summand>,
}

fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

impl BlockcodeDecomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "field": field_json(self.field),
            "objects": self.objects.iter().map(|o| json!({
                "object": o.object,
                "atoms": o.atoms.iter().map(|a| json!({
                    "atom_id": a.id,
                    "basis": a.basis.iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "generators": self.generators.iter().map(|g| json!({
                "generator": g.generator,
                "images": g.images.iter().map(|im| {
                    let mut m = Map::new();
                    m.insert("from".into(), im.from.clone().into());
                    m.insert("to".into(), im.to.clone().unwrap_or_else(|| "zero".into()).into());
                    if let Some(b) = &im.block {
                        m.insert("block".into(), b.to_json());
                    }
                    Value::Object(m)
                }).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "summands": self.summands.iter().map(|s| json!({
                "atoms": s.atoms,
                "dimension_vector": s.dimension_vector,
            })).collect::<Vec<_>>(),
        })
    }

    /// Dimension vectors of all summands, each listed in object order of `r`.
    pub fn dimension_vectors(&self, r: &Representation) -> Vec<Vec<usize>> {
        self.summands
            .iter()
            .map(|s| r.objects().iter().map(|o| s.dimension_vector.get(&o.id).copied().unwrap_or(0)).collect())
            .collect()
    }

    /// Parses a certificate document. Shapes are not checked against any
    /// representation here; that is the verifier's job.
    pub fn from_json(doc: &Value) -> Result<Self> {
        let field = parse_field(doc.get("field").ok_or_else(|| Error::validation("field", "missing"))?)?;
        let arr = |v: &Value, path: &str| -> Result<Vec<Value>> {
            v.as_array().cloned().ok_or_else(|| Error::validation(path, "expected an array"))
        };
        let string = |v: &Value, key: &str, path: &str| -> Result<String> {
            v.get(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| Error::validation(format!("{path}.{key}"), "expected a string"))
        };
        let scalars = |v: &Value, path: &str| -> Result<Vec<Scalar>> {
            arr(v, path)?.iter().enumerate().map(|(i, e)| parse_scalar(field, e, &format!("{path}[{i}]"))).collect()
        };

        let mut objects = Vec::new();
        for (i, o) in arr(doc.get("objects").unwrap_or(&Value::Null), "objects")?.iter().enumerate() {
            let path = format!("objects[{i}]");
            let mut atoms = Vec::new();
            for (j, a) in arr(o.get("atoms").unwrap_or(&Value::Null), &format!("{path}.atoms"))?.iter().enumerate() {
                let apath = format!("{path}.atoms[{j}]");
                let basis = arr(a.get("basis").unwrap_or(&Value::Null), &format!("{apath}.basis"))?
                    .iter()
                    .enumerate()
                    .map(|(k, v)| scalars(v, &format!("{apath}.basis[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                atoms.push(Atom { id: string(a, "atom_id", &apath)?, basis });
            }
            objects.push(ObjectAtoms { object: string(o, "object", &path)?, atoms });
        }

        let mut generators = Vec::new();
        for (i, g) in arr(doc.get("generators").unwrap_or(&Value::Null), "generators")?.iter().enumerate() {
            let path = format!("generators[{i}]");
            let mut images = Vec::new();
            for (j, im) in arr(g.get("images").unwrap_or(&Value::Null), &format!("{path}.images"))?.iter().enumerate() {
                let ipath = format!("{path}.images[{j}]");
                let to = string(im, "to", &ipath)?;
                let block = match im.get("block") {
                    None | Some(Value::Null) => None,
                    Some(b) => {
                        let rows = arr(b, &format!("{ipath}.block"))?
                            .iter()
                            .enumerate()
                            .map(|(k, row)| scalars(row, &format!("{ipath}.block[{k}]")))
                            .collect::<Result<Vec<_>>>()?;
                        let cols = rows.first().map_or(0, Vec::len);
                        Some(
                            Matrix::from_rows(field, cols, rows)
                                .ok_or_else(|| Error::validation(format!("{ipath}.block"), "ragged matrix"))?,
                        )
                    }
                };
                images.push(AtomImage { from: string(im, "from", &ipath)?, to: (to != "zero").then_some(to), block });
            }
            generators.push(GeneratorAction { generator: string(g, "generator", &path)?, images });
        }

        let mut summands = Vec::new();
        for (i, s) in arr(doc.get("summands").unwrap_or(&Value::Null), "summands")?.iter().enumerate() {
            let path = format!("summands[{i}]");
            let atoms = arr(s.get("atoms").unwrap_or(&Value::Null), &format!("{path}.atoms"))?
                .iter()
                .map(|a| {
                    a.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::validation(format!("{path}.atoms"), "expected strings"))
                })
                .collect::<Result<Vec<_>>>()?;
            let dims = s
                .get("dimension_vector")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::validation(format!("{path}.dimension_vector"), "expected an object"))?;
            let mut dimension_vector = BTreeMap::new();
            for (k, v) in dims {
                let d = v.as_u64().ok_or_else(|| {
                    Error::validation(format!("{path}.dimension_vector.{k}"), "expected a non-negative integer")
                })?;
                dimension_vector.insert(k.clone(), d as usize);
            }
            summands.push(Summand { atoms, dimension_vector });
        }

        Ok(BlockcodeDecomposition { field, objects, generators, summands })
    }
}

/// Coordinates of each column of `targets` in the basis given by the
/// columns of `basis`; `None` if some column is outside their span.
fn coordinates(basis: &Matrix, targets: &Matrix) -> Option<Matrix> {
    let cols = targets
        .column_vectors()
        .iter()
        .map(|t| {
            let x = basis.solve_particular(t)?;
            (basis.apply(&x) == *t).then_some(x)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Matrix::from_columns(basis.field(), basis.cols(), &cols))
}

/// The neighbour whose atom lines are already fixed when an object is
/// reached: generator index, and whether the generator points away from it.
struct Anchor<'a> {
    generator: usize,
    forward: bool,
    lines: &'a [Vec<Scalar>],
}

/// How an object's lines are seeded: from its own projection family at the
/// root of a component, or from the neighbour it was reached from.
enum Seed<'a> {
    Root(&'a ProjectionFamily),
    Edge(Anchor<'a>),
}

/// Atom lines of object `o`. For each flag element `b`, in a linear
/// extension, a complement `D_b` of the sum of its predecessors is chosen:
/// from images of the anchor's lines when `b` lies in the anchor's image,
/// from lifts of the anchor's lines when `b` is not killed by the anchor
/// generator, from the image of `π_b Π_{a<b}(1 - π_a)` at a root, and from
/// the canonical basis of `b` otherwise. Each flag
/// element is then the sum of the `D_a` below it, and the anchor generator
/// sends lines to lines or to zero.
fn object_lines(r: &Representation, flag: &FlagAssignment, o: usize, seed: Seed) -> Result<Vec<Vec<Scalar>>> {
    let field = r.field();
    let n = r.dim(o);
    let poset = flag.poset(o);
    let oid = &r.objects()[o].id;
    let fail = |msg: String| Error::AlignmentFailure(format!("object `{oid}`: {msg}"));
    let mut lines: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for (bi, b) in poset.elements().iter().enumerate() {
        let below: Vec<Vec<Scalar>> = (0..poset.len())
            .filter(|&a| a != bi && poset.leq(a, bi))
            .flat_map(|a| poset.element(a).basis_vectors())
            .collect();
        let lower = Subspace::span(field, n, &below);
        let want = b.dim() - lower.dim();
        let candidates: Vec<Vec<Scalar>> = match &seed {
            Seed::Edge(a) if a.forward => {
                let z = &r.generators()[a.generator].matrix;
                let images: Vec<Vec<Scalar>> =
                    a.lines.iter().map(|v| z.apply(v)).filter(|w| !w.iter().all(Scalar::is_zero)).collect();
                if image(z).contains(b)? {
                    images.into_iter().filter(|w| b.contains_vector(w)).collect()
                } else {
                    lower.complement_in(b)?
                }
            }
            Seed::Edge(a) => {
                let z = &r.generators()[a.generator].matrix;
                let basis = b.basis().transpose();
                let zb = z.mul(&basis);
                if zb.rank() == 0 {
                    lower.complement_in(b)?
                } else {
                    a.lines
                        .iter()
                        .filter_map(|v| zb.solve_particular(v).filter(|x| zb.apply(x) == *v).map(|x| basis.apply(&x)))
                        .collect()
                }
            }
            Seed::Root(fam) => {
                let id = Matrix::identity(field, n);
                let pi = fam.projections();
                let e = (0..poset.len())
                    .filter(|&a| a != bi && poset.leq(a, bi))
                    .fold(pi[bi].clone(), |acc, a| acc.mul(&id.sub(&pi[a])));
                image(&e).basis_vectors()
            }
        };
        let mut span = below;
        let mut taken = 0;
        let mut rank = lower.dim();
        for v in candidates {
            if taken == want {
                break;
            }
            span.push(v.clone());
            let next = Subspace::span(field, n, &span).dim();
            if next > rank {
                rank = next;
                taken += 1;
                lines.push(v);
            } else {
                span.pop();
            }
        }
        if taken != want {
            return Err(fail(format!("no adapted complement inside {}", b.label())));
        }
    }
    if lines.len() != n || Subspace::span(field, n, &lines).dim() != n {
        return Err(fail("adapted complements do not form a basis".into()));
    }
    Ok(lines)
}

/// Decomposes `r` into summands whose dimension vectors are 0/1 and on
/// which every generator acts as zero or an isomorphism.
///
/// Each connected component of the underlying forest is walked from its
/// first object. The root's lines come from its projection family; every later
/// object gets one adapted to the neighbour it was reached from, so the
/// connecting generator maps lines onto lines or to zero. Lines linked by
/// generators form the summands, at most one line per object since the
/// quiver is a forest. The certificate is verified before it is returned.
pub fn decompose(
    r: &Representation,
    flag: &FlagAssignment,
    fams: &[ProjectionFamily],
) -> Result<BlockcodeDecomposition> {
    let shape = r.shape();
    if let Some(g) = shape.cycle_witness {
        return Err(Error::Cycle(r.generators()[g].id.clone()));
    }
    let report = check_representation(r, flag, MuMode::Standard);
    if let Some(w) = report.witnesses.first() {
        return Err(Error::CriterionViolated { object: w.object.clone() });
    }
    let field = r.field();
    let n_obj = r.objects().len();

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    for (gi, g) in r.generators().iter().enumerate() {
        incident[g.dom].push(gi);
        incident[g.cod].push(gi);
    }
    let mut lines: Vec<Option<Vec<Vec<Scalar>>>> = vec![None; n_obj];
    for root in 0..n_obj {
        if lines[root].is_some() {
            continue;
        }
        lines[root] = Some(object_lines(r, flag, root, Seed::Root(&fams[root]))?);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &gi in &incident[x] {
                let g = &r.generators()[gi];
                let (y, forward) = if g.dom == x { (g.cod, true) } else { (g.dom, false) };
                if lines[y].is_some() {
                    continue;
                }
                let fixed = lines[x].take().expect("visited");
                let result = object_lines(r, flag, y, Seed::Edge(Anchor { generator: gi, forward, lines: &fixed }));
                lines[x] = Some(fixed);
                lines[y] = Some(result?);
                queue.push_back(y);
            }
        }
    }
    let lines: Vec<Vec<Vec<Scalar>>> = lines.into_iter().map(|l| l.expect("every object visited")).collect();

    // where each generator sends each domain line
    let mut action: Vec<Vec<Option<(usize, Matrix)>>> = Vec::with_capacity(r.generators().len());
    for g in r.generators() {
        let mut row = Vec::with_capacity(lines[g.dom].len());
        for v in &lines[g.dom] {
            let w = g.matrix.apply(v);
            if w.iter().all(Scalar::is_zero) {
                row.push(None);
                continue;
            }
            let target = Matrix::from_columns(field, r.dim(g.cod), &[w]);
            let hit = lines[g.cod].iter().enumerate().find_map(|(k, u)| {
                let basis = Matrix::from_columns(field, r.dim(g.cod), std::slice::from_ref(u));
                coordinates(&basis, &target).map(|c| (k, c))
            });
            match hit {
                Some(h) => row.push(Some(h)),
                None => {
                    return Err(Error::AlignmentFailure(format!(
                        "generator `{}` does not send a line onto a line",
                        g.id
                    )))
                }
            }
        }
        action.push(row);
    }

    // summands are the connected components of the line graph
    let offsets: Vec<usize> = lines
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.len();
            Some(o)
        })
        .collect();
    let total: usize = lines.iter().map(Vec::len).sum();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (gi, g) in r.generators().iter().enumerate() {
        for (k, hit) in action[gi].iter().enumerate() {
            if let Some((t, _)) = hit {
                let (a, b) = (offsets[g.dom] + k, offsets[g.cod] + t);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut component = vec![usize::MAX; total];
    let mut summand_count = 0;
    for start in 0..total {
        if component[start] != usize::MAX {
            continue;
        }
        component[start] = summand_count;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if component[v] == usize::MAX {
                    component[v] = summand_count;
                    queue.push_back(v);
                }
            }
        }
        summand_count += 1;
    }

    let atom_id = |o: usize, k: usize| format!("{}#{k}", r.objects()[o].id);
    let mut summands: Vec<Summand> = (0..summand_count)
        .map(|_| Summand {
            atoms: Vec::new(),
            dimension_vector: r.objects().iter().map(|o| (o.id.clone(), 0)).collect(),
        })
        .collect();
    let mut objects = Vec::with_capacity(n_obj);
    for (o, ls) in lines.iter().enumerate() {
        let oid = &r.objects()[o].id;
        let mut atoms = Vec::with_capacity(ls.len());
        for (k, v) in ls.iter().enumerate() {
            let s = &mut summands[component[offsets[o] + k]];
            s.atoms.push(atom_id(o, k));
            *s.dimension_vector.get_mut(oid).expect("object listed") += 1;
            atoms.push(Atom { id: atom_id(o, k), basis: vec![v.clone()] });
        }
        objects.push(ObjectAtoms { object: oid.clone(), atoms });
    }
    let generators = r
        .generators()
        .iter()
        .zip(action)
        .map(|(g, row)| GeneratorAction {
            generator: g.id.clone(),
            images: row
                .into_iter()
                .enumerate()
                .map(|(k, hit)| match hit {
                    None => AtomImage { from: atom_id(g.dom, k), to: None, block: None },
                    Some((t, block)) => {
                        AtomImage { from: atom_id(g.dom, k), to: Some(atom_id(g.cod, t)), block: Some(block) }
                    }
                })
                .collect(),
        })
        .collect();

    let decomposition = BlockcodeDecomposition { field, objects, generators, summands };
    let check = verify_decomposition(r, &decomposition);
    if !check.ok {
        return Err(Error::AlignmentFailure(check.diagnostics.join("; ")));
    }
    Ok(decomposition)
}

/// Envelope report with a fallback. The per-object families are tried
/// first; if their closure violates an axiom on a forest, families aligned
/// to a decomposition are used instead. Returns the JSON report and whether
/// the axioms hold. `"families"` records which choice was reported.
pub fn envelope_report(r: &Representation, flag: &FlagAssignment, limits: EnvelopeLimits) -> Result<(Value, bool)> {
    let fams = realize_all(r, flag)?;
    let pinv = pseudo_inverses(r, &fams)?;
    let violation = match verify_envelope(r, &fams, &pinv, limits) {
        Ok(env) => {
            let mut v = env.to_json(r);
            v["families"] = json!("per_object");
            return Ok((v, true));
        }
        Err(e @ Error::AxiomViolation(_)) => e.to_string(),
        Err(e) => return Err(e),
    };
    let violated = |extra: Option<String>| {
        let mut v = json!({"axioms": "violated", "families": "per_object", "message": violation});
        if let Some(m) = extra {
            v["aligned_message"] = json!(m);
        }
        (v, false)
    };
    if r.shape().has_undirected_cycle {
        return Ok(violated(None));
    }
    let aligned = decompose(r, flag, &fams).and_then(|d| aligned_families(r, flag, &d));
    let aligned = match aligned {
        Ok(a) => a,
        Err(e) => return Ok(violated(Some(e.to_string()))),
    };
    let apinv = pseudo_inverses(r, &aligned)?;
    match verify_envelope(r, &aligned, &apinv, limits) {
        Ok(env) => {
            let mut v = env.to_json(r);
            v["families"] = json!("aligned");
            v["per_object_violation"] = json!(violation);
            Ok((v, true))
        }
        Err(e @ Error::AxiomViolation(_)) => Ok(violated(Some(e.to_string()))),
        Err(e) => Err(e),
    }
}

/// Full pipeline: cycle check, flag, projection families, decomposition.
/// Projection families adapted to a decomposition: `π_c` projects onto the
/// atoms inside `c` along all other atoms. Unlike the per-object families,
/// these are coherent across generators, so every pseudo-inverse and every
/// composite acts diagonally on atoms and all idempotents commute. Fails if
/// some flag element is not a sum of atoms.
pub fn aligned_families(
    r: &Representation,
    flag: &FlagAssignment,
    d: &BlockcodeDecomposition,
) -> Result<Vec<ProjectionFamily>> {
    let field = r.field();
    let mut fams = Vec::with_capacity(r.objects().len());
    for (o, obj) in r.objects().iter().enumerate() {
        let atoms = d
            .objects
            .iter()
            .find(|a| a.object == obj.id)
            .ok_or_else(|| Error::AlignmentFailure(format!("no atoms for `{}`", obj.id)))?;
        let vectors: Vec<Vec<Scalar>> = atoms.atoms.iter().flat_map(|a| a.basis.iter().cloned()).collect();
        let poset = flag.poset(o);
        let mut projections = Vec::with_capacity(poset.len());
        for c in poset.elements() {
            let (inside, outside): (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) =
                vectors.iter().cloned().partition(|v| c.contains_vector(v));
            if inside.len() != c.dim() {
                return Err(Error::AlignmentFailure(format!(
                    "flag element {} of `{}` is not a sum of atoms",
                    c.label(),
                    obj.id
                )));
            }
            let pi = projection_onto_along(field, obj.dim, &inside, &outside)
                .ok_or_else(|| Error::AlignmentFailure(format!("atoms of `{}` are not a basis", obj.id)))?;
            projections.push(pi);
        }
        fams.push(ProjectionFamily::from_parts(&obj.id, poset.clone(), projections)?);
    }
    Ok(fams)
}

pub fn decompose_representation(r: &Representation, limits: FlagLimits) -> Result<BlockcodeDecomposition> {
    if let Some(g) = r.shape().cycle_witness {
        return Err(Error::Cycle(r.generators()[g].id.clone()));
    }
    let flag = compute_flag(r, limits)?;
    let report = check_representation(r, &flag, MuMode::Standard);
    if let Some(w) = report.witnesses.first() {
        return Err(Error::CriterionViolated { object: w.object.clone() });
    }
    let fams = realize_all(r, &flag)?;
    decompose(r, &flag, &fams)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        json!({"verified": self.ok, "diagnostics": self.diagnostics})
    }
}

/// Re-checks a certificate against `r` from scratch: atom bases form a
/// basis per object, each generator is block-diagonal in those bases with
/// invertible blocks exactly where the certificate says, the assembled
/// change of basis reproduces every generator matrix, and every summand is
/// a blockcode.
pub fn verify_decomposition(r: &Representation, d: &BlockcodeDecomposition) -> VerificationReport {
    let mut diag = Vec::new();
    verify_into(r, d, &mut diag);
    VerificationReport { ok: diag.is_empty(), diagnostics: diag }
}

fn verify_into(r: &Representation, d: &BlockcodeDecomposition, diag: &mut Vec<String>) {
    let field = r.field();
    if d.field != field {
        diag.push("certificate field differs from the representation's".into());
        return;
    }
    let object_ids: BTreeSet<&str> = r.objects().iter().map(|o| o.id.as_str()).collect();
    let cert_ids: BTreeSet<&str> = d.objects.iter().map(|o| o.object.as_str()).collect();
    if object_ids != cert_ids || d.objects.len() != r.objects().len() {
        diag.push("certificate objects do not match the representation's".into());
        return;
    }

    // atom id -> (object index, position, offset, dim)
    let mut atoms: HashMap<&str, (usize, usize, usize, usize)> = HashMap::new();
    let mut change: Vec<Option<Matrix>> = vec![None; r.objects().len()];
    for oa in &d.objects {
        let o = r.object_index(&oa.object).expect("checked above");
        let n = r.dim(o);
        let mut cols = Vec::new();
        for (pos, a) in oa.atoms.iter().enumerate() {
            if a.basis.is_empty() {
                diag.push(format!("atom `{}` is empty", a.id));
            }
            if a.basis.iter().any(|v| v.len() != n || v.iter().any(|x| !field.contains(x))) {
                diag.push(format!("atom `{}` has vectors outside object `{}`", a.id, oa.object));
                return;
            }
            if atoms.insert(a.id.as_str(), (o, pos, cols.len(), a.basis.len())).is_some() {
                diag.push(format!("atom id `{}` is repeated", a.id));
            }
            cols.extend(a.basis.iter().cloned());
        }
        if cols.len() != n {
            diag.push(format!("object `{}`: atoms have {} vectors, dimension is {n}", oa.object, cols.len()));
            continue;
        }
        let p = Matrix::from_columns(field, n, &cols);
        if p.inverse().is_none() {
            diag.push(format!("object `{}`: atom bases are not a basis", oa.object));
            continue;
        }
        change[o] = Some(p);
    }
    if !diag.is_empty() {
        return;
    }

    let gen_ids: BTreeSet<&str> = r.generators().iter().map(|g| g.id.as_str()).collect();
    let cert_gens: BTreeSet<&str> = d.generators.iter().map(|g| g.generator.as_str()).collect();
    if gen_ids != cert_gens || d.generators.len() != r.generators().len() {
        diag.push("certificate generators do not match the representation's".into());
        return;
    }
    // generator index -> atom id -> target atom id
    let mut targets: Vec<HashMap<&str, Option<&str>>> = vec![HashMap::new(); r.generators().len()];
    for ga in &d.generators {
        let gi = r.generator_index(&ga.generator).expect("checked above");
        let g = &r.generators()[gi];
        let (px, py) = (change[g.dom].as_ref().unwrap(), change[g.cod].as_ref().unwrap());
        let mut assembled = Matrix::zeros(field, r.dim(g.cod), r.dim(g.dom));
        for im in &ga.images {
            let Some(&(o, _, off, k)) = atoms.get(im.from.as_str()) else {
                diag.push(format!("generator `{}`: unknown atom `{}`", g.id, im.from));
                continue;
            };
            if o != g.dom {
                diag.push(format!("generator `{}`: atom `{}` is not at its domain", g.id, im.from));
                continue;
            }
            if targets[gi].insert(im.from.as_str(), im.to.as_deref()).is_some() {
                diag.push(format!("generator `{}`: atom `{}` listed twice", g.id, im.from));
            }
            let Some(to) = &im.to else { continue };
            let Some(&(o2, _, off2, k2)) = atoms.get(to.as_str()) else {
                diag.push(format!("generator `{}`: unknown atom `{to}`", g.id));
                continue;
            };
            if o2 != g.cod {
                diag.push(format!("generator `{}`: atom `{to}` is not at its codomain", g.id));
                continue;
            }
            match &im.block {
                Some(b) if b.shape() == (k2, k) && b.inverse().is_some() => {
                    for i in 0..k2 {
                        for j in 0..k {
                            assembled.set(off2 + i, off + j, b.get(i, j).clone());
                        }
                    }
                }
                _ => diag.push(format!("generator `{}`: block for `{}` is not an invertible {k2}x{k}", g.id, im.from)),
            }
        }
        let expected: usize =
            d.objects.iter().find(|oa| oa.object == r.objects()[g.dom].id).map_or(0, |oa| oa.atoms.len());
        if targets[gi].len() != expected {
            diag.push(format!("generator `{}`: action on atoms is not total", g.id));
        }
        if py.mul(&assembled) != g.matrix.mul(px) {
            diag.push(format!("generator `{}`: block action does not reproduce its matrix", g.id));
        }
    }
    if !diag.is_empty() {
        return;
    }

    let mut owner: HashMap<&str, usize> = HashMap::new();
    for (si, s) in d.summands.iter().enumerate() {
        for a in &s.atoms {
            if !atoms.contains_key(a.as_str()) {
                diag.push(format!("summand {si}: unknown atom `{a}`"));
            } else if owner.insert(a.as_str(), si).is_some() {
                diag.push(format!("atom `{a}` belongs to two summands"));
            }
        }
    }
    if owner.len() != atoms.len() {
        diag.push("summands do not cover every atom".into());
    }
    if !diag.is_empty() {
        return;
    }
    for (si, s) in d.summands.iter().enumerate() {
        let mut dims: BTreeMap<String, usize> = r.objects().iter().map(|o| (o.id.clone(), 0)).collect();
        for a in &s.atoms {
            let (o, _, _, k) = atoms[a.as_str()];
            *dims.get_mut(&r.objects()[o].id).unwrap() += k;
        }
        let recorded: BTreeMap<String, usize> =
            r.objects().iter().map(|o| (o.id.clone(), s.dimension_vector.get(&o.id).copied().unwrap_or(0))).collect();
        if dims != recorded || s.dimension_vector.keys().any(|k| !object_ids.contains(k.as_str())) {
            diag.push(format!("summand {si}: recorded dimension vector is wrong"));
        }
        for (gi, g) in r.generators().iter().enumerate() {
            let at = |o: usize| -> BTreeSet<&str> {
                s.atoms.iter().map(String::as_str).filter(|a| atoms[a].0 == o).collect()
            };
            let (sx, sy) = (at(g.dom), at(g.cod));
            let mut hit = BTreeSet::new();
            let mut zero = 0;
            for a in &sx {
                match targets[gi][a] {
                    None => zero += 1,
                    Some(t) if owner[t] == si => {
                        hit.insert(t);
                    }
                    Some(_) => diag.push(format!("summand {si}: generator `{}` leaves the summand", g.id)),
                }
            }
            let is_zero = zero == sx.len();
            let is_iso = zero == 0 && hit == sy && dims_match(&sx, &sy, &atoms);
            if !is_zero && !is_iso {
                diag.push(format!("summand {si}: generator `{}` is neither zero nor an isomorphism", g.id));
            }
        }
    }
}

fn dims_match(sx: &BTreeSet<&str>, sy: &BTreeSet<&str>, atoms: &HashMap<&str, (usize, usize, usize, usize)>) -> bool {
    let total = |s: &BTreeSet<&str>| s.iter().map(|a| atoms[a].3).sum::<usize>();
    total(sx) == total(sy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::fixtures::{BISECTION, TRISECTION};
    use crate::rep::parse_representation;

    const Q: Field = Field::Rational;

    fn a2() -> Representation {
        Representation::new(
            Q,
            vec![("x".into(), 1), ("y".into(), 2)],
            vec![("f".into(), "x".into(), "y".into(), Matrix::from_ints(Q, &[&[1], &[0]]))],
        )
        .unwrap()
    }

    fn sorted_dims(r: &Representation, d: &BlockcodeDecomposition) -> Vec<Vec<usize>> {
        let mut v = d.dimension_vectors(r);
        v.sort();
        v
    }

    #[test]
    fn a2_splits_into_two_intervals() {
        let r = a2();
        let d = decompose_representation(&r, FlagLimits::default()).unwrap();
        assert_eq!(sorted_dims(&r, &d), vec![vec![0, 1], vec![1, 1]]);
        assert!(verify_decomposition(&r, &d).ok);
    }

    #[test]
    fn identity_is_one_summand() {
        let r = Representation::new(
            Q,
            vec![("x".into(), 1), ("y".into(), 1)],
            vec![("f".into(), "x".into(), "y".into(), Matrix::identity(Q, 1))],
        )
        .unwrap();
        let d = decompose_representation(&r, FlagLimits::default()).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.dimension_vectors(&r), vec![vec![1, 1]]);
    }

    #[test]
    fn bisection_has_a_cycle() {
        let r = parse_representation(BISECTION.as_bytes()).unwrap();
        assert!(matches!(decompose_representation(&r, FlagLimits::default()), Err(Error::Cycle(_))));
    }

    #[test]
    fn trisection_violates_the_criterion() {
        let r = parse_representation(TRISECTION.as_bytes()).unwrap();
        assert!(matches!(decompose_representation(&r, FlagLimits::default()), Err(Error::CriterionViolated { .. })));
    }

    #[test]
    fn hidden_direct_sum_of_a3_intervals() {
        // [1,1,0] ⊕ [0,1,1] ⊕ [0,1,0] at x → y ← z, with y in a mixed basis
        let r = Representation::new(
            Q,
            vec![("x".into(), 1), ("y".into(), 3), ("z".into(), 1)],
            vec![
                ("f".into(), "x".into(), "y".into(), Matrix::from_ints(Q, &[&[1], &[1], &[0]])),
                ("g".into(), "z".into(), "y".into(), Matrix::from_ints(Q, &[&[0], &[1], &[1]])),
            ],
        )
        .unwrap();
        let d = decompose_representation(&r, FlagLimits::default()).unwrap();
        assert_eq!(sorted_dims(&r, &d), vec![vec![0, 1, 0], vec![0, 1, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn zero_dimensional_objects() {
        let r = Representation::new(
            Q,
            vec![("x".into(), 0), ("y".into(), 2)],
            vec![("f".into(), "x".into(), "y".into(), Matrix::zeros(Q, 2, 0))],
        )
        .unwrap();
        let d = decompose_representation(&r, FlagLimits::default()).unwrap();
        assert_eq!(sorted_dims(&r, &d), vec![vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn certificate_json_round_trip() {
        let r = a2();
        let d = decompose_representation(&r, FlagLimits::default()).unwrap();
        let back = BlockcodeDecomposition::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let r = a2();
        let mut d = decompose_representation(&r, FlagLimits::default()).unwrap();
        // move the image line into the other atom's direction
        let y = &mut d.objects[1].atoms;
        let v = y[1].basis[0].clone();
        y[0].basis[0] = v.iter().map(|s| s + s).collect();
        let report = verify_decomposition(&r, &d);
        assert!(!report.ok);
        assert!(!report.diagnostics.is_empty());
    }

    #[test]
    fn certificate_for_another_representation_is_rejected() {
        let d = decompose_representation(&a2(), FlagLimits::default()).unwrap();
        let other = Representation::new(
            Q,
            vec![("x".into(), 1), ("y".into(), 2)],
            vec![("f".into(), "x".into(), "y".into(), Matrix::from_ints(Q, &[&[1], &[1]]))],
        )
        .unwrap();
        assert!(!verify_decomposition(&other, &d).ok);
    }

    #[test]
    fn wrong_dimension_vector_is_rejected() {
        let r = a2();
        let mut d = decompose_representation(&r, FlagLimits::default()).unwrap();
        *d.summands[0].dimension_vector.get_mut("y").unwrap() += 1;
        assert!(!verify_decomposition(&r, &d).ok);
    }
}
