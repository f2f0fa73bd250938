//! Representations of the free category on a finite quiver: objects with
//! dimensions, generators with matrices, and the JSON file format.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectSpec {
    pub id: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub dom: usize,
    pub cod: usize,
    /// `dim(cod) × dim(dom)`, acting on column vectors.
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: Field,
    objects: Vec<ObjectSpec>,
    generators: Vec<Generator>,
    object_index: HashMap<String, usize>,
    generator_index: HashMap<String, usize>,
}

/// Undirected view of the quiver underlying a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverShape {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub has_undirected_cycle: bool,
    /// First generator (declaration order) that closes an undirected cycle.
    pub cycle_witness: Option<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Returns `false` if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl Representation {
    /// Builds and validates a representation. Generators are given as
    /// `(id, dom id, cod id, matrix)`.
    pub fn new(
        field: Field,
        objects: Vec<(String, usize)>,
        generators: Vec<(String, String, String, Matrix)>,
    ) -> Result<Self> {
        let mut object_index = HashMap::new();
        let mut objs = Vec::with_capacity(objects.len());
        for (i, (id, dim)) in objects.into_iter().enumerate() {
            if object_index.insert(id.clone(), i).is_some() {
                return Err(Error::validation(format!("objects[{i}].id"), format!("duplicate object id `{id}`")));
            }
            objs.push(ObjectSpec { id, dim });
        }
        let mut generator_index = HashMap::new();
        let mut gens = Vec::with_capacity(generators.len());
        for (i, (id, dom, cod, matrix)) in generators.into_iter().enumerate() {
            let path = |field: &str| format!("generators[{i}].{field}");
            if generator_index.insert(id.clone(), i).is_some() {
                return Err(Error::validation(path("id"), format!("duplicate generator id `{id}`")));
            }
            let d = *object_index
                .get(&dom)
                .ok_or_else(|| Error::validation(path("dom"), format!("unknown object `{dom}`")))?;
            let c = *object_index
                .get(&cod)
                .ok_or_else(|| Error::validation(path("cod"), format!("unknown object `{cod}`")))?;
            if matrix.field() != field {
                return Err(Error::validation(path("matrix"), "entries outside the declared field"));
            }
            let expected = (objs[c].dim, objs[d].dim);
            if matrix.shape() != expected {
                return Err(Error::validation(
                    path("matrix"),
                    format!(
                        "shape {}x{} but dim(cod) x dim(dom) = {}x{}",
                        matrix.rows(),
                        matrix.cols(),
                        expected.0,
                        expected.1
                    ),
                ));
            }
            gens.push(Generator { id, dom: d, cod: c, matrix });
        }
        Ok(Representation { field, objects: objs, generators: gens, object_index, generator_index })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn objects(&self) -> &[ObjectSpec] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.object_index.get(id).copied()
    }

    pub fn generator_index(&self, id: &str) -> Option<usize> {
        self.generator_index.get(id).copied()
    }

    pub fn dim(&self, object: usize) -> usize {
        self.objects[object].dim
    }

    /// Composite along a path, in composition order: `[g, h]` is `g ∘ h`,
    /// so `h` is applied first and must start at `dom`. The empty word is
    /// the identity on `dom`.
    pub fn evaluate_word<S: AsRef<str>>(&self, dom: &str, word: &[S]) -> Result<Matrix> {
        let start = self.object_index(dom).ok_or_else(|| Error::Composition(format!("unknown object `{dom}`")))?;
        let mut at = start;
        let mut acc = Matrix::identity(self.field, self.dim(start));
        for g in word.iter().rev() {
            let g = g.as_ref();
            let gi = self.generator_index(g).ok_or_else(|| Error::Composition(format!("unknown generator `{g}`")))?;
            let gen = &self.generators[gi];
            if gen.dom != at {
                return Err(Error::Composition(format!(
                    "`{g}` starts at `{}` but the path is at `{}`",
                    self.objects[gen.dom].id, self.objects[at].id
                )));
            }
            acc = gen.matrix.mul(&acc);
            at = gen.cod;
        }
        Ok(acc)
    }

    pub fn shape(&self) -> QuiverShape {
        let mut uf = UnionFind::new(self.objects.len());
        let mut witness = None;
        for (i, g) in self.generators.iter().enumerate() {
            if !uf.union(g.dom, g.cod) && witness.is_none() {
                witness = Some(i);
            }
        }
        QuiverShape {
            vertices: self.objects.len(),
            edges: self.generators.iter().map(|g| (g.dom, g.cod)).collect(),
            has_undirected_cycle: witness.is_some(),
            cycle_witness: witness,
        }
    }

    pub fn to_json_value(&self) -> Value {
        let field = field_json(self.field);
        let objects: Vec<Value> = self.objects.iter().map(|o| json!({"id": o.id, "dim": o.dim})).collect();
        let generators: Vec<Value> = self
            .generators
            .iter()
            .map(|g| {
                let mut m = Map::new();
                m.insert("id".into(), g.id.clone().into());
                m.insert("dom".into(), self.objects[g.dom].id.clone().into());
                m.insert("cod".into(), self.objects[g.cod].id.clone().into());
                m.insert("matrix".into(), g.matrix.to_json());
                Value::Object(m)
            })
            .collect();
        json!({"field": field, "objects": objects, "generators": generators})
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }
}

pub(crate) fn field_json(field: Field) -> Value {
    match field {
        Field::Rational => json!({"kind": "rational"}),
        Field::Prime { p } => json!({"kind": "prime", "p": p}),
    }
}

pub(crate) fn parse_field(v: &Value) -> Result<Field> {
    let kind =
        v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::validation("field.kind", "expected a string"))?;
    match kind {
        "rational" => Ok(Field::Rational),
        "prime" => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::validation("field.p", "expected a positive integer"))?;
            Field::prime(p).ok_or_else(|| Error::validation("field.p", format!("{p} is not a supported prime")))
        }
        other => Err(Error::validation("field.kind", format!("unknown field kind `{other}`"))),
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    s.trim().parse::<BigInt>().ok()
}

pub(crate) fn parse_scalar(field: Field, v: &Value, path: &str) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(field.from_i64(i))
            } else if let Some(u) = n.as_u64() {
                Ok(field.from_bigint(&BigInt::from(u)))
            } else {
                Err(Error::validation(path, "non-integer number; write fractions as \"a/b\""))
            }
        }
        Value::String(s) => {
            let bad = || Error::validation(path, format!("cannot parse entry `{s}`"));
            match s.split_once('/') {
                Some((a, b)) => {
                    let (a, b) = (parse_int(a).ok_or_else(bad)?, parse_int(b).ok_or_else(bad)?);
                    field.ratio(&a, &b).ok_or_else(|| Error::validation(path, format!("zero denominator in `{s}`")))
                }
                None => Ok(field.from_bigint(&parse_int(s).ok_or_else(bad)?)),
            }
        }
        _ => Err(Error::validation(path, "expected an integer or a string \"a/b\"")),
    }
}

fn parse_matrix(field: Field, v: &Value, path: &str, rows: usize, cols: usize) -> Result<Matrix> {
    let arr = v.as_array().ok_or_else(|| Error::validation(path, "expected an array of rows"))?;
    // A 0-row matrix has no rows to carry its width; trust the declared dims.
    if arr.is_empty() {
        if rows == 0 {
            return Ok(Matrix::zeros(field, 0, cols));
        }
        return Err(Error::validation(path, format!("shape 0x? but dim(cod) x dim(dom) = {rows}x{cols}")));
    }
    let mut data = Vec::with_capacity(arr.len());
    let mut width = None;
    for (i, row) in arr.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::validation(format!("{path}[{i}]"), "expected an array"))?;
        if *width.get_or_insert(row.len()) != row.len() {
            return Err(Error::validation(format!("{path}[{i}]"), "ragged matrix"));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, e)| parse_scalar(field, e, &format!("{path}[{i}][{j}]")))
            .collect::<Result<Vec<_>>>()?;
        data.push(parsed);
    }
    Ok(Matrix::from_rows(field, width.unwrap_or(0), data).expect("validated rows"))
}

fn get_str<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a str> {
    v.get(key).and_then(Value::as_str).ok_or_else(|| Error::validation(format!("{path}.{key}"), "expected a string"))
}

/// Parses and validates the JSON representation format.
pub fn parse_representation(bytes: &[u8]) -> Result<Representation> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| Error::Syntax(e.to_string()))?;
    let field = parse_field(doc.get("field").ok_or_else(|| Error::validation("field", "missing"))?)?;
    let objects = doc
        .get("objects")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::validation("objects", "expected an array"))?;
    let mut objs = Vec::with_capacity(objects.len());
    let mut dims = HashMap::new();
    for (i, o) in objects.iter().enumerate() {
        let path = format!("objects[{i}]");
        let id = get_str(o, "id", &path)?.to_string();
        let dim = o
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::validation(format!("{path}.dim"), "expected a nonnegative integer"))?
            as usize;
        dims.insert(id.clone(), dim);
        objs.push((id, dim));
    }
    let generators = doc
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::validation("generators", "expected an array"))?;
    let mut gens = Vec::with_capacity(generators.len());
    for (i, g) in generators.iter().enumerate() {
        let path = format!("generators[{i}]");
        let id = get_str(g, "id", &path)?.to_string();
        let dom = get_str(g, "dom", &path)?.to_string();
        let cod = get_str(g, "cod", &path)?.to_string();
        let rows = dims.get(&cod).copied().unwrap_or(0);
        let cols = dims.get(&dom).copied().unwrap_or(0);
        let m = g.get("matrix").ok_or_else(|| Error::validation(format!("{path}.matrix"), "missing"))?;
        let matrix = parse_matrix(field, m, &format!("{path}.matrix"), rows, cols)?;
        gens.push((id, dom, cod, matrix));
    }
    Representation::new(field, objs, gens)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn parses_trisection() {
        let r = parse_representation(TRISECTION.as_bytes()).unwrap();
        assert_eq!(r.objects().len(), 4);
        assert_eq!(r.generators().len(), 3);
        assert_eq!(r.generators()[0].matrix, Matrix::from_ints(Field::Rational, &[&[1], &[1]]));
        assert!(!r.shape().has_undirected_cycle);
    }

    #[test]
    fn parses_bisection_loop_as_cycle() {
        let r = parse_representation(BISECTION.as_bytes()).unwrap();
        assert_eq!(r.objects().len(), 1);
        let shape = r.shape();
        assert!(shape.has_undirected_cycle);
        assert_eq!(shape.cycle_witness, Some(0));
    }

    #[test]
    fn parallel_edges_form_a_cycle() {
        let doc = r#"{"field": {"kind": "rational"},
            "objects": [{"id": "a", "dim": 1}, {"id": "b", "dim": 1}],
            "generators": [
                {"id": "f", "dom": "a", "cod": "b", "matrix": [[1]]},
                {"id": "g", "dom": "a", "cod": "b", "matrix": [[2]]}
            ]}"#;
        let r = parse_representation(doc.as_bytes()).unwrap();
        assert_eq!(r.shape().cycle_witness, Some(1));
    }

    #[test]
    fn shape_mismatch_is_a_validation_error() {
        let doc = r#"{"field": {"kind": "rational"},
            "objects": [{"id": "a", "dim": 2}, {"id": "b", "dim": 2}],
            "generators": [{"id": "f", "dom": "a", "cod": "b", "matrix": [[1, 0, 0], [0, 1, 0]]}]}"#;
        match parse_representation(doc.as_bytes()) {
            Err(Error::Validation { path, .. }) => assert_eq!(path, "generators[0].matrix"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_and_validation_errors() {
        assert!(matches!(parse_representation(b"{not json"), Err(Error::Syntax(_))));
        let bad_prime = r#"{"field": {"kind": "prime", "p": 4}, "objects": [], "generators": []}"#;
        assert!(matches!(parse_representation(bad_prime.as_bytes()), Err(Error::Validation { .. })));
        let dup = r#"{"field": {"kind": "rational"},
            "objects": [{"id": "a", "dim": 1}, {"id": "a", "dim": 1}], "generators": []}"#;
        assert!(matches!(parse_representation(dup.as_bytes()), Err(Error::Validation { .. })));
        let unknown = r#"{"field": {"kind": "rational"}, "objects": [{"id": "a", "dim": 1}],
            "generators": [{"id": "f", "dom": "a", "cod": "z", "matrix": [[1]]}]}"#;
        assert!(matches!(parse_representation(unknown.as_bytes()), Err(Error::Validation { .. })));
    }

    #[test]
    fn fractional_and_modular_entries() {
        let doc = r#"{"field": {"kind": "rational"}, "objects": [{"id": "a", "dim": 1}],
            "generators": [{"id": "f", "dom": "a", "cod": "a", "matrix": [["-3/6"]]}]}"#;
        let r = parse_representation(doc.as_bytes()).unwrap();
        assert_eq!(r.generators()[0].matrix.get(0, 0).to_string(), "-1/2");
        let doc = r#"{"field": {"kind": "prime", "p": 3}, "objects": [{"id": "a", "dim": 1}],
            "generators": [{"id": "f", "dom": "a", "cod": "a", "matrix": [[-1]]}]}"#;
        let r = parse_representation(doc.as_bytes()).unwrap();
        assert_eq!(r.generators()[0].matrix.get(0, 0).to_string(), "2");
    }

    #[test]
    fn zero_dimensional_objects() {
        let doc = r#"{"field": {"kind": "rational"},
            "objects": [{"id": "a", "dim": 0}, {"id": "b", "dim": 2}],
            "generators": [
                {"id": "in", "dom": "a", "cod": "b", "matrix": [[], []]},
                {"id": "out", "dom": "b", "cod": "a", "matrix": []}
            ]}"#;
        let r = parse_representation(doc.as_bytes()).unwrap();
        assert_eq!(r.generators()[0].matrix.shape(), (2, 0));
        assert_eq!(r.generators()[1].matrix.shape(), (0, 2));
        let back = parse_representation(r.to_json().as_bytes()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn word_evaluation() {
        let r = parse_representation(BISECTION.as_bytes()).unwrap();
        let empty: [&str; 0] = [];
        assert!(r.evaluate_word("plane", &empty).unwrap().is_identity());
        assert_eq!(r.evaluate_word("plane", &["shift"]).unwrap(), r.generators()[0].matrix);
        assert!(r.evaluate_word("plane", &["shift", "shift"]).unwrap().is_zero());

        let t = parse_representation(TRISECTION.as_bytes()).unwrap();
        assert!(matches!(t.evaluate_word("diag", &["l", "d"]), Err(Error::Composition(_))));
        assert!(matches!(t.evaluate_word("left", &["d"]), Err(Error::Composition(_))));
    }
}
