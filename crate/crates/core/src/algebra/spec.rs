//! Declarations of W-algebras: generators, composite fields, the two-point
//! matrix `d` and the structure constants `C_ij^k`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::scalar::Poly;

/// Index of a field inside an [`AlgebraSpec`]. Generators come first, so the
/// ordering of ids is the declaration rank used for PBW tie breaking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldId(pub u16);

/// Field expressions built from declared fields.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldExpr {
    /// The identity field; its only nonzero mode is the zero mode.
    Identity,
    Field(FieldId),
    Derivative(Box<FieldExpr>, u32),
    /// `N^(order)(left, right)`.
    Nprod {
        order: i64,
        left: Box<FieldExpr>,
        right: Box<FieldExpr>,
    },
    /// Quasi-primary normal-ordered product `N(left, d^derivatives right)`.
    QPNop {
        left: FieldId,
        right: FieldId,
        derivatives: u32,
    },
    LinComb(Vec<(Poly, FieldExpr)>),
}

impl FieldExpr {
    pub fn field(id: FieldId) -> Self {
        FieldExpr::Field(id)
    }

    pub fn derivative(self, order: u32) -> Self {
        if order == 0 {
            self
        } else {
            FieldExpr::Derivative(Box::new(self), order)
        }
    }

    pub fn nprod(order: i64, left: FieldExpr, right: FieldExpr) -> Self {
        FieldExpr::Nprod {
            order,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn qp_nop(left: FieldId, right: FieldId, derivatives: u32) -> Self {
        FieldExpr::QPNop {
            left,
            right,
            derivatives,
        }
    }

    /// Conformal weight. Linear combinations must be homogeneous.
    pub fn weight(&self, spec: &AlgebraSpec) -> Result<i64, AlgebraError> {
        Ok(match self {
            FieldExpr::Identity => 0,
            FieldExpr::Field(id) => spec.weight(*id),
            FieldExpr::Derivative(f, k) => f.weight(spec)? + *k as i64,
            FieldExpr::Nprod { left, right, .. } => left.weight(spec)? + right.weight(spec)?,
            FieldExpr::QPNop {
                left,
                right,
                derivatives,
            } => spec.weight(*left) + spec.weight(*right) + *derivatives as i64,
            FieldExpr::LinComb(terms) => {
                let mut w = None;
                for (_, f) in terms {
                    let h = f.weight(spec)?;
                    match w {
                        None => w = Some(h),
                        Some(prev) if prev != h => return Err(AlgebraError::Inhomogeneous),
                        _ => {}
                    }
                }
                w.unwrap_or(0)
            }
        })
    }

    fn max_field(&self) -> Option<FieldId> {
        match self {
            FieldExpr::Identity => None,
            FieldExpr::Field(id) => Some(*id),
            FieldExpr::Derivative(f, _) => f.max_field(),
            FieldExpr::Nprod { left, right, .. } => left.max_field().max(right.max_field()),
            FieldExpr::QPNop { left, right, .. } => Some((*left).max(*right)),
            FieldExpr::LinComb(terms) => terms.iter().filter_map(|(_, f)| f.max_field()).max(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldInfo {
    pub name: String,
    pub weight: i64,
    /// `None` for generators.
    pub definition: Option<FieldExpr>,
}

/// A validated W-algebra declaration.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    central_charge: Poly,
    fields: Vec<FieldInfo>,
    generators: usize,
    names: HashMap<String, FieldId>,
    d: BTreeMap<(FieldId, FieldId), Poly>,
    channels: BTreeMap<(FieldId, FieldId), Vec<(FieldId, Poly)>>,
    lowered: Vec<(FieldId, FieldId, FieldId, Poly)>,
}

fn spec_err(location: impl Into<String>, msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Spec {
        location: location.into(),
        msg: msg.into(),
    }
}

impl AlgebraSpec {
    pub fn new(central_charge: Poly) -> Self {
        AlgebraSpec {
            central_charge,
            fields: Vec::new(),
            generators: 0,
            names: HashMap::new(),
            d: BTreeMap::new(),
            channels: BTreeMap::new(),
            lowered: Vec::new(),
        }
    }

    /// Virasoro algebra with `d_TT = c/2` and `C_TT^T = 2`.
    pub fn virasoro(central_charge: Poly) -> Self {
        let mut spec = AlgebraSpec::new(central_charge.clone());
        let t = spec.add_generator("T", 2).expect("fresh spec");
        spec.set_d(t, t, central_charge.scale(&crate::scalar::rat(1, 2)));
        spec.add_constant(t, t, t, Poly::from_int(2)).expect("valid channel");
        spec
    }

    pub fn central_charge(&self) -> &Poly {
        &self.central_charge
    }

    pub fn add_generator(&mut self, name: &str, weight: i64) -> Result<FieldId, AlgebraError> {
        let loc = format!("generator {name:?}");
        if weight <= 0 {
            return Err(spec_err(loc, format!("weight must be positive, got {weight}")));
        }
        if self.generators != self.fields.len() {
            return Err(spec_err(loc, "generators must be declared before composite fields"));
        }
        let id = self.push_field(&loc, name, weight, None)?;
        self.generators += 1;
        Ok(id)
    }

    pub fn add_composite(&mut self, name: &str, definition: FieldExpr) -> Result<FieldId, AlgebraError> {
        let loc = format!("composite {name:?}");
        if let Some(max) = definition.max_field() {
            if max.0 as usize >= self.fields.len() {
                return Err(spec_err(loc, "definition refers to a field that is not declared earlier"));
            }
        }
        let weight = definition.weight(self).map_err(|e| spec_err(&loc, e.to_string()))?;
        if weight <= 0 {
            return Err(spec_err(loc, format!("weight must be positive, got {weight}")));
        }
        self.push_field(&loc, name, weight, Some(definition))
    }

    fn push_field(
        &mut self,
        loc: &str,
        name: &str,
        weight: i64,
        definition: Option<FieldExpr>,
    ) -> Result<FieldId, AlgebraError> {
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
            return Err(spec_err(loc, "field names must be nonempty and free of whitespace and parentheses"));
        }
        if self.names.contains_key(name) {
            return Err(spec_err(loc, "duplicate field name"));
        }
        let id = FieldId(u16::try_from(self.fields.len()).map_err(|_| spec_err(loc, "too many fields"))?);
        self.fields.push(FieldInfo {
            name: name.to_string(),
            weight,
            definition,
        });
        self.names.insert(name.to_string(), id);
        Ok(id)
    }

    /// Sets the symmetric two-point constant `d_ij`.
    pub fn set_d(&mut self, i: FieldId, j: FieldId, value: Poly) {
        self.d.insert((i.min(j), i.max(j)), value);
    }

    /// Declares `C_ij^k`. Requires `h(ijk) >= 1`.
    pub fn add_constant(&mut self, i: FieldId, j: FieldId, k: FieldId, value: Poly) -> Result<(), AlgebraError> {
        let h = self.weight(i) + self.weight(j) - self.weight(k);
        if h < 1 {
            return Err(spec_err(
                format!("C_{{{},{}}}^{{{}}}", self.name(i), self.name(j), self.name(k)),
                format!("h(ijk) = {h} < 1"),
            ));
        }
        let list = self.channels.entry((i, j)).or_default();
        match list.iter_mut().find(|(kk, _)| *kk == k) {
            Some(entry) => entry.1 = value,
            None => list.push((k, value)),
        }
        Ok(())
    }

    /// Declares a lowered constant `C_ijk`, checked against `sum_l C_ij^l d_lk` by [`validate`].
    ///
    /// [`validate`]: AlgebraSpec::validate
    pub fn add_lowered_constant(&mut self, i: FieldId, j: FieldId, k: FieldId, value: Poly) {
        self.lowered.push((i, j, k, value));
    }

    /// Checks the lowered constants: `sum_l C_ij^l d_lk = C_ijk` whenever every
    /// term on the left is declared.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        for (idx, (i, j, k, value)) in self.lowered.iter().enumerate() {
            let Some(list) = self.channels.get(&(*i, *j)) else {
                continue;
            };
            let mut sum = Poly::zero();
            let mut complete = true;
            for (l, c) in list {
                match self.d(*l, *k) {
                    Some(d) => sum += &(c * d),
                    None => complete = false,
                }
            }
            if complete && &sum != value {
                return Err(spec_err(
                    format!("lowered_constants[{idx}]"),
                    format!("sum_l C_ij^l d_lk = {sum} but C_ijk = {value}"),
                ));
            }
        }
        Ok(())
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn generators(&self) -> impl Iterator<Item = FieldId> {
        (0..self.generators as u16).map(FieldId)
    }

    pub fn field_ids(&self) -> impl Iterator<Item = FieldId> {
        (0..self.fields.len() as u16).map(FieldId)
    }

    pub fn is_generator(&self, id: FieldId) -> bool {
        (id.0 as usize) < self.generators
    }

    pub fn info(&self, id: FieldId) -> &FieldInfo {
        &self.fields[id.0 as usize]
    }

    pub fn weight(&self, id: FieldId) -> i64 {
        self.fields[id.0 as usize].weight
    }

    pub fn name(&self, id: FieldId) -> &str {
        &self.fields[id.0 as usize].name
    }

    pub fn definition(&self, id: FieldId) -> Option<&FieldExpr> {
        self.fields[id.0 as usize].definition.as_ref()
    }

    pub fn lookup(&self, name: &str) -> Result<FieldId, AlgebraError> {
        self.names
            .get(name)
            .copied()
            .ok_or_else(|| AlgebraError::UnknownField(name.to_string()))
    }

    pub fn d(&self, i: FieldId, j: FieldId) -> Option<&Poly> {
        self.d.get(&(i.min(j), i.max(j)))
    }

    /// Declared channels `(k, C_ij^k)` for the ordered pair, if any.
    pub fn declared_channels(&self, i: FieldId, j: FieldId) -> Option<&[(FieldId, Poly)]> {
        self.channels.get(&(i, j)).map(|v| v.as_slice())
    }

    /// Channels of the ordered pair, falling back on `C_ij^k = (-1)^h(ijk) C_ji^k`
    /// when only the reversed pair is declared. `None` when neither order is declared.
    pub fn channels(&self, i: FieldId, j: FieldId) -> Option<Vec<(FieldId, Poly)>> {
        if let Some(list) = self.channels.get(&(i, j)) {
            return Some(list.clone());
        }
        let list = self.channels.get(&(j, i))?;
        Some(
            list.iter()
                .map(|(k, c)| {
                    let h = self.weight(i) + self.weight(j) - self.weight(*k);
                    (*k, if h % 2 == 0 { c.clone() } else { -c })
                })
                .collect(),
        )
    }

    /// True when any bracket data exists for the unordered pair.
    pub fn has_bracket(&self, i: FieldId, j: FieldId) -> bool {
        self.d(i, j).is_some() || self.channels.contains_key(&(i, j)) || self.channels.contains_key(&(j, i))
    }

    /// Replaces every occurrence of the symbols in `assignment` inside `d` and the constants.
    pub fn substitute(&self, assignment: &BTreeMap<crate::scalar::Sym, Poly>) -> AlgebraSpec {
        let mut out = self.clone();
        out.central_charge = out.central_charge.substitute_all(assignment);
        for v in out.d.values_mut() {
            *v = v.substitute_all(assignment);
        }
        for list in out.channels.values_mut() {
            for (_, c) in list.iter_mut() {
                *c = c.substitute_all(assignment);
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let doc: SpecDoc = serde_json::from_str(text).map_err(|e| spec_err("document", e.to_string()))?;
        doc.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpecDoc::from_spec(self)).expect("spec documents serialize")
    }
}

/// Parses and validates an algebra-spec document.
pub fn load_spec(text: &str) -> Result<AlgebraSpec, AlgebraError> {
    AlgebraSpec::from_json(text)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    central_charge: Poly,
    generators: Vec<GeneratorDoc>,
    #[serde(default)]
    composite_fields: Vec<CompositeDoc>,
    #[serde(default)]
    d: Vec<ValueDoc>,
    #[serde(default)]
    structure_constants: Vec<ConstantDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    lowered_constants: Vec<ConstantDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    symbol: String,
    weight: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompositeDoc {
    symbol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<i64>,
    definition: ExprDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueDoc {
    i: String,
    j: String,
    value: Poly,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantDoc {
    i: String,
    j: String,
    k: String,
    value: Poly,
}

/// JSON form of [`FieldExpr`], referring to fields by name.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ExprDoc {
    Identity,
    Field(String),
    Derivative {
        of: Box<ExprDoc>,
        order: u32,
    },
    Nprod {
        order: i64,
        left: Box<ExprDoc>,
        right: Box<ExprDoc>,
    },
    Qpnop {
        left: String,
        right: String,
        #[serde(default)]
        derivatives: u32,
    },
    Lincomb(Vec<(Poly, ExprDoc)>),
}

impl ExprDoc {
    fn resolve(&self, spec: &AlgebraSpec, loc: &str) -> Result<FieldExpr, AlgebraError> {
        let look = |name: &str| spec.lookup(name).map_err(|e| spec_err(loc, e.to_string()));
        Ok(match self {
            ExprDoc::Identity => FieldExpr::Identity,
            ExprDoc::Field(name) => FieldExpr::Field(look(name)?),
            ExprDoc::Derivative { of, order } => of.resolve(spec, loc)?.derivative(*order),
            ExprDoc::Nprod { order, left, right } => {
                FieldExpr::nprod(*order, left.resolve(spec, loc)?, right.resolve(spec, loc)?)
            }
            ExprDoc::Qpnop {
                left,
                right,
                derivatives,
            } => FieldExpr::qp_nop(look(left)?, look(right)?, *derivatives),
            ExprDoc::Lincomb(terms) => FieldExpr::LinComb(
                terms
                    .iter()
                    .map(|(c, f)| Ok((c.clone(), f.resolve(spec, loc)?)))
                    .collect::<Result<_, AlgebraError>>()?,
            ),
        })
    }

    fn from_expr(spec: &AlgebraSpec, f: &FieldExpr) -> ExprDoc {
        match f {
            FieldExpr::Identity => ExprDoc::Identity,
            FieldExpr::Field(id) => ExprDoc::Field(spec.name(*id).to_string()),
            FieldExpr::Derivative(g, k) => ExprDoc::Derivative {
                of: Box::new(Self::from_expr(spec, g)),
                order: *k,
            },
            FieldExpr::Nprod { order, left, right } => ExprDoc::Nprod {
                order: *order,
                left: Box::new(Self::from_expr(spec, left)),
                right: Box::new(Self::from_expr(spec, right)),
            },
            FieldExpr::QPNop {
                left,
                right,
                derivatives,
            } => ExprDoc::Qpnop {
                left: spec.name(*left).to_string(),
                right: spec.name(*right).to_string(),
                derivatives: *derivatives,
            },
            FieldExpr::LinComb(terms) => {
                ExprDoc::Lincomb(terms.iter().map(|(c, g)| (c.clone(), Self::from_expr(spec, g))).collect())
            }
        }
    }
}

impl SpecDoc {
    fn build(&self) -> Result<AlgebraSpec, AlgebraError> {
        let mut spec = AlgebraSpec::new(self.central_charge.clone());
        for (idx, g) in self.generators.iter().enumerate() {
            spec.add_generator(&g.symbol, g.weight).map_err(|e| relocate(e, format!("generators[{idx}]")))?;
        }
        for (idx, c) in self.composite_fields.iter().enumerate() {
            let loc = format!("composite_fields[{idx}]");
            let def = c.definition.resolve(&spec, &loc)?;
            let id = spec.add_composite(&c.symbol, def).map_err(|e| relocate(e, loc.clone()))?;
            if let Some(w) = c.weight {
                if w != spec.weight(id) {
                    return Err(spec_err(loc, format!("declared weight {w} but definition has weight {}", spec.weight(id))));
                }
            }
        }
        for (idx, v) in self.d.iter().enumerate() {
            let loc = format!("d[{idx}]");
            let i = spec.lookup(&v.i).map_err(|e| spec_err(&loc, e.to_string()))?;
            let j = spec.lookup(&v.j).map_err(|e| spec_err(&loc, e.to_string()))?;
            if let Some(prev) = spec.d(i, j) {
                if prev != &v.value {
                    return Err(spec_err(loc, "d must be symmetric"));
                }
            }
            spec.set_d(i, j, v.value.clone());
        }
        for (idx, c) in self.structure_constants.iter().enumerate() {
            let loc = format!("structure_constants[{idx}]");
            let (i, j, k) = resolve3(&spec, c, &loc)?;
            spec.add_constant(i, j, k, c.value.clone()).map_err(|e| relocate(e, loc))?;
        }
        for (idx, c) in self.lowered_constants.iter().enumerate() {
            let (i, j, k) = resolve3(&spec, c, &format!("lowered_constants[{idx}]"))?;
            spec.add_lowered_constant(i, j, k, c.value.clone());
        }
        spec.validate()?;
        Ok(spec)
    }

    fn from_spec(spec: &AlgebraSpec) -> SpecDoc {
        let name = |id: &FieldId| spec.name(*id).to_string();
        SpecDoc {
            central_charge: spec.central_charge.clone(),
            generators: spec
                .generators()
                .map(|id| GeneratorDoc {
                    symbol: name(&id),
                    weight: spec.weight(id),
                })
                .collect(),
            composite_fields: spec
                .field_ids()
                .filter_map(|id| {
                    spec.definition(id).map(|def| CompositeDoc {
                        symbol: name(&id),
                        weight: Some(spec.weight(id)),
                        definition: ExprDoc::from_expr(spec, def),
                    })
                })
                .collect(),
            d: spec
                .d
                .iter()
                .map(|((i, j), v)| ValueDoc {
                    i: name(i),
                    j: name(j),
                    value: v.clone(),
                })
                .collect(),
            structure_constants: spec
                .channels
                .iter()
                .flat_map(|((i, j), list)| {
                    list.iter().map(move |(k, v)| ConstantDoc {
                        i: name(i),
                        j: name(j),
                        k: name(k),
                        value: v.clone(),
                    })
                })
                .collect(),
            lowered_constants: spec
                .lowered
                .iter()
                .map(|(i, j, k, v)| ConstantDoc {
                    i: name(i),
                    j: name(j),
                    k: name(k),
                    value: v.clone(),
                })
                .collect(),
        }
    }
}

fn resolve3(spec: &AlgebraSpec, c: &ConstantDoc, loc: &str) -> Result<(FieldId, FieldId, FieldId), AlgebraError> {
    let look = |name: &str| spec.lookup(name).map_err(|e| spec_err(loc, e.to_string()));
    Ok((look(&c.i)?, look(&c.j)?, look(&c.k)?))
}

fn relocate(e: AlgebraError, location: String) -> AlgebraError {
    match e {
        AlgebraError::Spec { msg, .. } => AlgebraError::Spec { location, msg },
        other => spec_err(location, other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VIRASORO: &str = r#"{
        "central_charge": "c",
        "generators": [{"symbol": "T", "weight": 2}],
        "d": [{"i": "T", "j": "T", "value": "c/2"}],
        "structure_constants": [{"i": "T", "j": "T", "k": "T", "value": "2"}]
    }"#;

    #[test]
    fn loads_virasoro() {
        let spec = load_spec(VIRASORO).unwrap();
        assert_eq!(spec, AlgebraSpec::virasoro(Poly::var("c")));
    }

    #[test]
    fn rejects_low_channel_weight() {
        let doc = r#"{
            "central_charge": "-2",
            "generators": [{"symbol": "T", "weight": 2}, {"symbol": "W", "weight": 4}],
            "structure_constants": [{"i": "T", "j": "T", "k": "W", "value": "1"}]
        }"#;
        let err = load_spec(doc).unwrap_err();
        assert!(matches!(err, AlgebraError::Spec { ref location, .. } if location == "structure_constants[0]"));
    }

    #[test]
    fn rejects_nonpositive_weight() {
        let doc = r#"{"central_charge": "1", "generators": [{"symbol": "X", "weight": 0}]}"#;
        assert!(matches!(load_spec(doc), Err(AlgebraError::Spec { .. })));
    }

    #[test]
    fn rejects_unknown_keys() {
        let doc = r#"{"central_charge": "1", "generators": [], "extra": 1}"#;
        assert!(load_spec(doc).is_err());
    }

    #[test]
    fn lowered_relation_checked() {
        let good = r#"{
            "central_charge": "c",
            "generators": [{"symbol": "T", "weight": 2}],
            "d": [{"i": "T", "j": "T", "value": "c/2"}],
            "structure_constants": [{"i": "T", "j": "T", "k": "T", "value": "2"}],
            "lowered_constants": [{"i": "T", "j": "T", "k": "T", "value": "c"}]
        }"#;
        assert!(load_spec(good).is_ok());
        let bad = good.replace(r#""value": "c"}]"#, r#""value": "2*c"}]"#);
        let err = load_spec(&bad).unwrap_err();
        assert!(matches!(err, AlgebraError::Spec { ref location, .. } if location == "lowered_constants[0]"));
    }

    #[test]
    fn composites_and_round_trip() {
        let doc = r#"{
            "central_charge": "c",
            "generators": [{"symbol": "T", "weight": 2}],
            "composite_fields": [{"symbol": "Lambda", "weight": 4, "definition": {"qpnop": {"left": "T", "right": "T"}}}],
            "d": [{"i": "T", "j": "T", "value": "c/2"}],
            "structure_constants": [{"i": "T", "j": "T", "k": "T", "value": "2"}]
        }"#;
        let spec = load_spec(doc).unwrap();
        let lam = spec.lookup("Lambda").unwrap();
        assert_eq!(spec.weight(lam), 4);
        assert!(!spec.is_generator(lam));
        let again = load_spec(&spec.to_json()).unwrap();
        assert_eq!(again, spec);
        let wrong = doc.replace(r#""weight": 4"#, r#""weight": 5"#);
        assert!(load_spec(&wrong).is_err());
    }

    #[test]
    fn reversed_channels_pick_up_sign() {
        let mut spec = AlgebraSpec::new(Poly::from_int(-2));
        let t = spec.add_generator("T", 2).unwrap();
        let w = spec.add_generator("W", 3).unwrap();
        let v = spec.add_generator("V", 3).unwrap();
        spec.add_constant(t, w, w, Poly::from_int(3)).unwrap();
        spec.add_constant(w, v, w, Poly::var("k")).unwrap();
        assert_eq!(spec.channels(w, t).unwrap(), vec![(w, Poly::from_int(3))]);
        assert_eq!(spec.channels(v, w).unwrap(), vec![(w, -Poly::var("k"))]);
        assert!(spec.channels(t, v).is_none());
    }
}
