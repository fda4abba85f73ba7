//! Scenario files: a representation `ρ_n` described by its images on labeled
//! elements, together with character values and local data at each place.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::localdef::PlaceTag;
use crate::mat::{Mat2, Mat2Json};
use crate::ring::{is_prime, ElemJson, GaloisRing, RingElem, RingJson};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    A,
    B,
}

/// The residue characteristic, the infinite place, or a finite prime `q ≠ p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Prime {
    P,
    Infinity,
    Finite(u64),
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::P => f.write_str("p"),
            Prime::Infinity => f.write_str("infinity"),
            Prime::Finite(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PrimeRepr {
    Int(u64),
    Name(String),
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Prime::Finite(q) => PrimeRepr::Int(*q),
            other => PrimeRepr::Name(other.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PrimeRepr::deserialize(d)? {
            PrimeRepr::Int(q) => Ok(Prime::Finite(q)),
            PrimeRepr::Name(s) if s == "p" => Ok(Prime::P),
            PrimeRepr::Name(s) if s == "infinity" => Ok(Prime::Infinity),
            PrimeRepr::Name(s) => Err(serde::de::Error::custom(format!(
                "prime must be \"p\", \"infinity\" or an integer, got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub label: String,
    pub matrix: Mat2Json,
    pub chi: ElemJson,
    /// Defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<ElemJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceJson {
    pub label: String,
    pub prime: Prime,
    #[serde(default)]
    pub inertia: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<String>,
    /// Diagonal characters at `p`, by element label; missing labels mean 1.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub psi1: BTreeMap<String, ElemJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub psi2: BTreeMap<String, ElemJson>,
    /// The unramified twist at a ramified `q`, by element label.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub delta: BTreeMap<String, ElemJson>,
    /// Declared ramification; checked against the inertia images when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramified: Option<bool>,
    /// Overrides the derived local condition, e.g. `RamakrishnaAux`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<PlaceTag>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioJson {
    pub schema_version: u32,
    pub name: String,
    pub target: Target,
    pub ring: RingJson,
    pub weight: u64,
    pub elements: Vec<ElementJson>,
    pub places: Vec<PlaceJson>,
    pub global_generators: Vec<String>,
}

impl ScenarioJson {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        match v.get("schema_version").and_then(|x| x.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => return Err(Error::Schema(format!("unsupported schema_version {v}"))),
            None => return Err(Error::Schema("missing schema_version".into())),
        }
        serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub label: String,
    pub matrix: Mat2,
    pub chi: RingElem,
    pub psi: RingElem,
}

#[derive(Clone, Debug)]
pub struct Place {
    pub label: String,
    pub prime: Prime,
    pub inertia: Vec<usize>,
    pub frobenius: Option<usize>,
    pub psi1: HashMap<usize, RingElem>,
    pub psi2: HashMap<usize, RingElem>,
    pub delta: HashMap<usize, RingElem>,
    pub ramified: Option<bool>,
    pub tag: Option<PlaceTag>,
}

impl Place {
    /// Inertia generators followed by the Frobenius, if any.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = self.inertia.clone();
        out.extend(self.frobenius);
        out
    }
}

/// A validated scenario with parsed ring data.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub target: Target,
    pub ring: GaloisRing,
    pub weight: u64,
    pub elements: Vec<Element>,
    pub places: Vec<Place>,
    pub global_generators: Vec<usize>,
}

fn schema<E: fmt::Display>(e: E) -> Error {
    Error::Schema(e.to_string())
}

impl Scenario {
    pub fn from_json(j: &ScenarioJson) -> Result<Self> {
        if j.schema_version != SCHEMA_VERSION {
            return Err(schema(format!("unsupported schema_version {}", j.schema_version)));
        }
        if j.ring.p == 2 {
            return Err(schema("p = 2 is not supported"));
        }
        let ring = GaloisRing::from_json(&j.ring).map_err(schema)?;
        if j.weight < 2 {
            return Err(schema(format!("weight {} must be at least 2", j.weight)));
        }
        let mut index = HashMap::new();
        let mut elements = Vec::with_capacity(j.elements.len());
        for e in &j.elements {
            if index.insert(e.label.clone(), elements.len()).is_some() {
                return Err(schema(format!("duplicate element label {:?}", e.label)));
            }
            let matrix = ring.mat_from_json(&e.matrix).map_err(schema)?;
            if !ring.mat_is_invertible(&matrix) {
                return Err(schema(format!("image of {:?} is not invertible", e.label)));
            }
            let chi = ring.elem_from_json(&e.chi).map_err(schema)?;
            if !ring.is_unit(&chi) {
                return Err(schema(format!("chi({}) is not a unit", e.label)));
            }
            let psi = match &e.psi {
                Some(x) => ring.elem_from_json(x).map_err(schema)?,
                None => ring.one(),
            };
            if !ring.is_unit(&psi) {
                return Err(schema(format!("psi({}) is not a unit", e.label)));
            }
            elements.push(Element { label: e.label.clone(), matrix, chi, psi });
        }
        let lookup = |l: &str| {
            index.get(l).copied().ok_or_else(|| schema(format!("unknown element label {l:?}")))
        };
        let char_map = |m: &BTreeMap<String, ElemJson>| -> Result<HashMap<usize, RingElem>> {
            m.iter()
                .map(|(l, v)| {
                    let x = ring.elem_from_json(v).map_err(schema)?;
                    if !ring.is_unit(&x) {
                        return Err(schema(format!("character value at {l:?} is not a unit")));
                    }
                    Ok((lookup(l)?, x))
                })
                .collect()
        };
        let mut places = Vec::with_capacity(j.places.len());
        let mut seen = HashMap::new();
        for pl in &j.places {
            if seen.insert(pl.label.clone(), ()).is_some() {
                return Err(schema(format!("duplicate place label {:?}", pl.label)));
            }
            match pl.prime {
                Prime::Finite(q) if !is_prime(q) || q == ring.p() => {
                    return Err(schema(format!("place {:?}: {q} is not a prime other than p", pl.label)))
                }
                Prime::P | Prime::Infinity
                    if places.iter().any(|x: &Place| x.prime == pl.prime) =>
                {
                    return Err(schema(format!("more than one place at {}", pl.prime)))
                }
                Prime::Infinity if !pl.inertia.is_empty() => {
                    return Err(schema("the infinite place takes no inertia generators"))
                }
                _ => {}
            }
            if pl.prime != Prime::Infinity && pl.frobenius.is_none() {
                return Err(schema(format!("place {:?} needs a frobenius label", pl.label)));
            }
            if pl.prime == Prime::Infinity && pl.frobenius.is_none() {
                return Err(schema("the infinite place needs its complex conjugation label"));
            }
            places.push(Place {
                label: pl.label.clone(),
                prime: pl.prime,
                inertia: pl.inertia.iter().map(|l| lookup(l)).collect::<Result<_>>()?,
                frobenius: pl.frobenius.as_deref().map(lookup).transpose()?,
                psi1: char_map(&pl.psi1)?,
                psi2: char_map(&pl.psi2)?,
                delta: char_map(&pl.delta)?,
                ramified: pl.ramified,
                tag: pl.tag,
            });
        }
        let global_generators =
            j.global_generators.iter().map(|l| lookup(l)).collect::<Result<Vec<_>>>()?;
        if global_generators.is_empty() {
            return Err(schema("global_generators is empty"));
        }
        Ok(Scenario {
            name: j.name.clone(),
            target: j.target,
            ring,
            weight: j.weight,
            elements,
            places,
            global_generators,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&ScenarioJson::from_json_str(s)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn place_at(&self, prime: Prime) -> Option<&Place> {
        self.places.iter().find(|x| x.prime == prime)
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    /// `ψ(g)·χ(g)^{k-1}`, the determinant the representation must have.
    pub fn epsilon(&self, i: usize) -> RingElem {
        let e = &self.elements[i];
        self.ring.mul(&e.psi, &self.ring.pow(&e.chi, self.weight - 1))
    }
}
