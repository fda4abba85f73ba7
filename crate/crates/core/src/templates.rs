//! Bundled scenarios: passing templates for targets A and B at `p = 5`,
//! `n = 2`, and single-clause mutations of them.

use std::collections::BTreeMap;

use crate::hyp::FailedCondition;
use crate::localdef::PlaceTag;
use crate::ring::{ElemJson, GaloisRing, RingJson};
use crate::scenario::{ElementJson, PlaceJson, Prime, ScenarioJson, Target, SCHEMA_VERSION};

struct Builder {
    ring: GaloisRing,
    json: ScenarioJson,
}

impl Builder {
    fn new(name: &str, target: Target, p: u64, n: u32, weight: u64) -> Self {
        let ring = GaloisRing::integers(p, n).expect("valid ring");
        let json = ScenarioJson {
            schema_version: SCHEMA_VERSION,
            name: name.to_string(),
            target,
            ring: RingJson { p, n, m: 1 },
            weight,
            elements: Vec::new(),
            places: Vec::new(),
            global_generators: Vec::new(),
        };
        Builder { ring, json }
    }

    fn int(&self, x: i64) -> ElemJson {
        self.ring.elem_to_json(&self.ring.from_int(x))
    }

    fn element(&mut self, label: &str, m: [i64; 4], chi: i64, psi: i64) -> &mut Self {
        let matrix = self.ring.mat_to_json(&self.ring.mat(m[0], m[1], m[2], m[3]));
        let psi = (psi != 1).then(|| self.int(psi));
        let chi = self.int(chi);
        self.json.elements.push(ElementJson { label: label.into(), matrix, chi, psi });
        self
    }

    fn chars(&self, xs: &[(&str, i64)]) -> BTreeMap<String, ElemJson> {
        xs.iter().map(|(l, v)| (l.to_string(), self.int(*v))).collect()
    }

    fn place(&mut self, label: &str, prime: Prime, inertia: &[&str], frobenius: &str) -> &mut PlaceJson {
        self.json.places.push(PlaceJson {
            label: label.into(),
            prime,
            inertia: inertia.iter().map(|s| s.to_string()).collect(),
            frobenius: Some(frobenius.into()),
            psi1: BTreeMap::new(),
            psi2: BTreeMap::new(),
            delta: BTreeMap::new(),
            ramified: None,
            tag: None,
        });
        self.json.places.last_mut().expect("just pushed")
    }

    fn globals(&mut self, labels: &[&str]) -> ScenarioJson {
        self.json.global_generators = labels.iter().map(|s| s.to_string()).collect();
        self.json.clone()
    }
}

const GLOBALS: [&str; 9] = ["I_p", "Frob_p", "tau11", "sigma11", "tau7", "sigma7", "Frob31", "g_lower", "c"];

/// Weight 2 over `Z/25`: ordinary at 5, Steinberg-type at 11, a split tame
/// place at 7, and an unramified place 31 ≡ 1 mod 5.
pub fn theorem_a_p5() -> ScenarioJson {
    let mut b = Builder::new("theorem_a_p5", Target::A, 5, 2, 2);
    b.element("I_p", [2, 1, 0, 1], 2, 1)
        .element("Frob_p", [2, 0, 0, 13], 1, 1)
        .element("tau11", [1, 1, 0, 1], 1, 1)
        .element("sigma11", [11, 0, 0, 1], 11, 1)
        .element("tau7", [-1, 0, 0, 1], 1, -1)
        .element("sigma7", [7, 0, 0, 1], 7, 1)
        .element("Frob31", [6, 1, 0, 1], 6, 1)
        .element("g_lower", [1, 0, 1, 1], 1, 1)
        .element("c", [-1, 0, 0, 1], -1, 1);
    let (psi1, psi2) = (b.chars(&[("Frob_p", 2)]), b.chars(&[("Frob_p", 13)]));
    let at_p = b.place("p", Prime::P, &["I_p"], "Frob_p");
    at_p.psi1 = psi1;
    at_p.psi2 = psi2;
    b.place("11", Prime::Finite(11), &["tau11"], "sigma11").ramified = Some(true);
    b.place("7", Prime::Finite(7), &["tau7"], "sigma7").ramified = Some(true);
    b.place("31", Prime::Finite(31), &[], "Frob31").ramified = Some(false);
    b.place("infinity", Prime::Infinity, &[], "c");
    b.globals(&GLOBALS)
}

/// Weight `p^n(p-1)+1 = 101` over `Z/25`, unramified and split at 5, with
/// `ψ = det` so that `ψχ^{k-1}` is the determinant.
pub fn theorem_b_p5() -> ScenarioJson {
    let mut b = Builder::new("theorem_b_p5", Target::B, 5, 2, 101);
    b.element("I_p", [1, 0, 0, 1], 2, 1)
        .element("Frob_p", [2, 0, 0, 13], 1, 1)
        .element("tau101", [1, 1, 0, 1], 1, 1)
        .element("sigma101", [1, 0, 0, 1], 101, 1)
        .element("tau7", [-1, 0, 0, 1], 1, -1)
        .element("sigma7", [1, 0, 0, 1], 7, 1)
        .element("Frob31", [1, 1, 0, 1], 31, 1)
        .element("g_lower", [1, 0, 1, 1], 1, 1)
        .element("c", [-1, 0, 0, 1], -1, -1);
    let (psi1, psi2) = (b.chars(&[("Frob_p", 2)]), b.chars(&[("Frob_p", 13)]));
    let at_p = b.place("p", Prime::P, &["I_p"], "Frob_p");
    at_p.psi1 = psi1;
    at_p.psi2 = psi2;
    b.place("101", Prime::Finite(101), &["tau101"], "sigma101").ramified = Some(true);
    b.place("7", Prime::Finite(7), &["tau7"], "sigma7").ramified = Some(true);
    b.place("31", Prime::Finite(31), &[], "Frob31").ramified = Some(false);
    b.place("infinity", Prime::Infinity, &[], "c");
    b.globals(&["I_p", "Frob_p", "tau101", "sigma101", "tau7", "sigma7", "Frob31", "g_lower", "c"])
}

/// At `p = 3`: a subgroup of `SL₂(Z/9)` of order 24 mapping onto `SL₂(F₃)`
/// but containing no transvection. With `with_transvection` the element
/// `[[1, 1], [0, 1]]` is added to the generators.
pub fn transvection_p3(with_transvection: bool) -> ScenarioJson {
    let name = if with_transvection { "transvection_p3" } else { "c2_no_transvection_p3" };
    let mut b = Builder::new(name, Target::A, 3, 2, 2);
    b.element("g1", [1, 1, 6, 7], 1, 1).element("g2", [1, 6, 4, 7], 1, 1);
    if with_transvection {
        b.element("t", [1, 1, 0, 1], 1, 1);
        b.globals(&["g1", "g2", "t"])
    } else {
        b.globals(&["g1", "g2"])
    }
}

fn set_matrix(s: &mut ScenarioJson, label: &str, m: [i64; 4]) {
    let ring = GaloisRing::from_json(&s.ring).expect("valid ring");
    let e = s.elements.iter_mut().find(|e| e.label == label).expect("label exists");
    e.matrix = ring.mat_to_json(&ring.mat(m[0], m[1], m[2], m[3]));
}

fn int(s: &ScenarioJson, x: i64) -> ElemJson {
    let ring = GaloisRing::from_json(&s.ring).expect("valid ring");
    ring.elem_to_json(&ring.from_int(x))
}

fn element<'a>(s: &'a mut ScenarioJson, label: &str) -> &'a mut ElementJson {
    s.elements.iter_mut().find(|e| e.label == label).expect("label exists")
}

fn place<'a>(s: &'a mut ScenarioJson, label: &str) -> &'a mut PlaceJson {
    s.places.iter_mut().find(|p| p.label == label).expect("place exists")
}

/// A negative fixture and the one verdict it is meant to flip.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub name: &'static str,
    pub clause: &'static str,
    pub flips: FailedCondition,
    pub scenario: ScenarioJson,
}

pub fn mutations() -> Vec<Mutation> {
    let a = theorem_a_p5;
    let mut out = Vec::new();
    let mut push = |name: &'static str, clause, flips, mut s: ScenarioJson| {
        s.name = name.to_string();
        out.push(Mutation { name, clause, flips, scenario: s });
    };

    let mut s = a();
    let two = int(&s, 2);
    element(&mut s, "g_lower").chi = two;
    push("c1_determinant", "det = psi chi^(k-1)", FailedCondition::C1, s);

    let mut s = a();
    let v = int(&s, 24);
    element(&mut s, "I_p").psi = Some(v);
    push("c1_psi_ramified", "psi unramified at p", FailedCondition::C1, s);

    let mut s = a();
    s.global_generators.retain(|l| l != "g_lower");
    push("c2_reducible", "image contains SL2(k)", FailedCondition::C2, s);

    push(
        "c2_no_transvection_p3",
        "transvection in the image (p = 3)",
        FailedCondition::C2,
        transvection_p3(false),
    );

    let mut s = a();
    set_matrix(&mut s, "I_p", [6, 1, 0, 1]);
    let six = int(&s, 6);
    element(&mut s, "I_p").chi = six;
    set_matrix(&mut s, "Frob_p", [8, 0, 0, 13]);
    let four = int(&s, 4);
    element(&mut s, "Frob_p").chi = four;
    push("c3_first_noncongruence", "psi1 chi^(k-1) != psi2 mod p", FailedCondition::C3, s);

    let mut s = a();
    set_matrix(&mut s, "Frob_p", [1, 0, 0, 1]);
    let pl = place(&mut s, "p");
    pl.psi1.clear();
    pl.psi2.clear();
    push("c3_violation", "psi1 chi^(k-2) != psi2 mod p", FailedCondition::C3, s);

    let mut s = a();
    set_matrix(&mut s, "Frob_p", [0, 1, -1, 0]);
    push("c3_non_ordinary", "ordinary at p", FailedCondition::C3, s);

    let mut s = a();
    set_matrix(&mut s, "sigma11", [1, 0, 0, 11]);
    push("c4_steinberg_shape", "shape (chi^(k-1), *; 0, 1) delta", FailedCondition::C4, s);

    let mut s = a();
    let m1 = int(&s, -1);
    place(&mut s, "7").delta.insert("tau7".into(), m1);
    push("c4_delta_ramified", "split shape with delta unramified", FailedCondition::C4, s);

    let mut s = a();
    set_matrix(&mut s, "Frob31", [-1, 0, 0, 19]);
    push("c4_frobenius_order", "p | #rho(Frob_q) for q = 1 mod p", FailedCondition::C4, s);

    let mut s = theorem_b_p5();
    set_matrix(&mut s, "I_p", [1, 5, 0, 1]);
    push("b_shape_ramified", "unramified at p", FailedCondition::BShape, s);

    let mut s = a();
    set_matrix(&mut s, "c", [1, 0, 0, 1]);
    let m1 = int(&s, -1);
    element(&mut s, "c").psi = Some(m1);
    push("odd_conjugation", "complex conjugation ~ diag(-1, 1)", FailedCondition::Odd, s);

    out
}

/// A Ramakrishna-type auxiliary place: unramified at `q ≡ 1 mod p^n`, tagged
/// for the ledger.
pub fn with_ramakrishna_place(mut s: ScenarioJson, q: u64, frob: [i64; 4], chi: i64) -> ScenarioJson {
    let ring = GaloisRing::from_json(&s.ring).expect("valid ring");
    let label = format!("Frob{q}");
    s.elements.push(ElementJson {
        label: label.clone(),
        matrix: ring.mat_to_json(&ring.mat(frob[0], frob[1], frob[2], frob[3])),
        chi: ring.elem_to_json(&ring.from_int(chi)),
        psi: None,
    });
    s.places.push(PlaceJson {
        label: q.to_string(),
        prime: Prime::Finite(q),
        inertia: Vec::new(),
        frobenius: Some(label),
        psi1: BTreeMap::new(),
        psi2: BTreeMap::new(),
        delta: BTreeMap::new(),
        ramified: Some(false),
        tag: Some(PlaceTag::RamakrishnaAux),
    });
    s
}

/// Every bundled fixture, by file stem.
pub fn fixtures() -> Vec<(String, ScenarioJson)> {
    let mut out = vec![
        ("theorem_a_p5".to_string(), theorem_a_p5()),
        ("theorem_b_p5".to_string(), theorem_b_p5()),
        ("transvection_p3".to_string(), transvection_p3(true)),
    ];
    for m in mutations() {
        if !out.iter().any(|(n, _)| n == m.name) {
            out.push((m.name.to_string(), m.scenario));
        }
    }
    out
}
