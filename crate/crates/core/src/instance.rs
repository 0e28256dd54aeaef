//! The JSON instance format.
//!
//! ```json
//! {
//!   "field": "Q",
//!   "poset": { "elements": ["a", "b"], "covers": [["a", "b"]] },
//!   "functor": { "dims": { "a": 1, "b": 1 }, "maps": { "a<b": [["1/2"]] } }
//! }
//! ```
//!
//! The matrix under `"p<q"` is `F(q) -> F(p)`, with `dim F(p)` rows of
//! `dim F(q)` entries. Rational entries are strings, prime-field entries are
//! integers; either kind is accepted for either field. Missing dimensions are
//! zero, and a map may be omitted only when it is empty. `field` and
//! `functor` are optional; without `functor` the file describes a poset only.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::diagram::ModuleDiagram;
use crate::error::{Error, Result};
use crate::exactla::{Field, FieldSpec, Matrix};
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    pub poset: PosetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<FunctorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<Value>>>,
}

fn map_key(poset: &Poset, (a, b): (usize, usize)) -> String {
    format!("{}<{}", poset.id(a), poset.id(b))
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Instance(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }

    /// The field, defaulting to ℚ.
    pub fn field_spec(&self) -> FieldSpec {
        self.field.unwrap_or(FieldSpec::Rationals)
    }

    pub fn poset(&self) -> Result<Poset> {
        Poset::new(&self.poset.elements, &self.poset.covers)
    }

    /// Parses the functor over `field`; a file without one yields the zero functor.
    pub fn diagram<F: Field>(&self, field: &F) -> Result<ModuleDiagram<F>> {
        let poset = self.poset()?;
        let empty = FunctorSpec { dims: BTreeMap::new(), maps: BTreeMap::new() };
        let spec = self.functor.as_ref().unwrap_or(&empty);

        let mut dims = vec![0; poset.len()];
        for (id, &d) in &spec.dims {
            dims[poset.index_of(id)?] = d;
        }
        let mut by_key: HashMap<String, usize> = HashMap::new();
        for (k, &c) in poset.covers().iter().enumerate() {
            if by_key.insert(map_key(&poset, c), k).is_some() {
                return Err(Error::Instance(format!("map key `{}` is ambiguous", map_key(&poset, c))));
            }
        }
        let mut maps: Vec<Option<Matrix<F>>> = vec![None; poset.covers().len()];
        for (key, rows) in &spec.maps {
            let &k = by_key
                .get(key)
                .ok_or_else(|| Error::Instance(format!("map `{key}` does not name a cover")))?;
            let (a, b) = poset.covers()[k];
            maps[k] = Some(parse_matrix(field, key, rows, dims[a], dims[b])?);
        }
        let maps = maps
            .into_iter()
            .zip(poset.covers())
            .map(|(m, &(a, b))| match m {
                Some(m) => Ok(m),
                None if dims[a] == 0 || dims[b] == 0 => Ok(Matrix::zeros(field, dims[a], dims[b])),
                None => Err(Error::Instance(format!("missing map `{}`", map_key(&poset, (a, b))))),
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleDiagram::new(poset, field, dims, maps)
    }

    /// Writes a diagram back out; all elements get explicit dimensions and
    /// all covers explicit maps.
    pub fn from_diagram<F: Field>(f: &ModuleDiagram<F>) -> Self {
        let poset = f.poset();
        let spec = f.field().spec();
        let entry = |x: &F::Elem| -> Value {
            let s = f.field().format(x);
            match spec {
                FieldSpec::Rationals => Value::String(s),
                FieldSpec::Prime(_) => Value::Number(s.parse::<u64>().expect("residues are integers").into()),
            }
        };
        let dims = (0..poset.len()).map(|p| (poset.id(p).to_string(), f.dim(p))).collect();
        let maps = poset
            .covers()
            .iter()
            .zip(f.maps())
            .map(|(&c, m)| {
                let rows = (0..m.rows()).map(|r| m.row(r).iter().map(entry).collect()).collect();
                (map_key(poset, c), rows)
            })
            .collect();
        InstanceFile {
            field: Some(spec),
            poset: PosetSpec {
                elements: poset.ids().to_vec(),
                covers: poset.covers().iter().map(|&(a, b)| (poset.id(a).to_string(), poset.id(b).to_string())).collect(),
            },
            functor: Some(FunctorSpec { dims, maps }),
        }
    }
}

fn parse_matrix<F: Field>(field: &F, key: &str, rows: &[Vec<Value>], r: usize, c: usize) -> Result<Matrix<F>> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::ShapeMismatch(format!("map `{key}` must be {r} x {c}")));
    }
    let mut data = Vec::with_capacity(r * c);
    for v in rows.iter().flatten() {
        let x = match v {
            Value::String(s) => field.parse(s)?,
            Value::Number(n) => field.parse(&n.to_string())?,
            other => return Err(Error::ParseScalar(other.to_string(), "expected a string or an integer".into())),
        };
        data.push(x);
    }
    Matrix::from_vec(field, r, c, data)
}
