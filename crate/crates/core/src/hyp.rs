//! Checks of the global hypotheses C1–C4 and the target-B shape at `p` on a
//! [`Scenario`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grp::{check_r2_element, close, contains_sl2, elementary_generators, is_transvection, FiniteMatrixGroup};
use crate::linalg::FieldMatrix;
use crate::localdef::{distinguishedness, CharPoint};
use crate::mat::{ordinary_form, split_form, Mat2, Mat2Json, OrdinaryForm, TriangularTarget};
use crate::ring::{GaloisRing, RingElem};
use crate::scenario::{Place, Prime, Scenario, Target, SCHEMA_VERSION};

/// Concrete evidence attached to a failed verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub matrix: Mat2Json,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { witness: Witness },
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn short(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail { .. } => "fail",
            Verdict::NotApplicable { .. } => "n/a",
        }
    }
}

fn fail(s: &Scenario, label: &str, m: &Mat2, reason: impl Into<String>) -> Verdict {
    Verdict::Fail {
        witness: Witness {
            label: label.to_string(),
            matrix: s.ring.mat_to_json(m),
            reason: reason.into(),
        },
    }
}

fn fail_at(s: &Scenario, i: usize, reason: impl Into<String>) -> Verdict {
    let e = s.element(i);
    fail(s, &e.label, &e.matrix, reason)
}

fn show(ring: &GaloisRing, x: &RingElem) -> String {
    let v = ring.coeff_vec(x);
    if v.len() == 1 {
        v[0].to_string()
    } else {
        format!("{v:?}")
    }
}

/// Determinant condition: `det ρ_n(g) = ψ(g)χ(g)^{k-1}` on every labeled
/// element, and `ψ` trivial on inertia at `p`.
pub fn check_c1(s: &Scenario) -> Verdict {
    let r = &s.ring;
    if let Some(pl) = s.place_at(Prime::P) {
        for &i in &pl.inertia {
            if s.element(i).psi != r.one() {
                return fail_at(s, i, "psi is ramified at p");
            }
        }
    }
    for (i, e) in s.elements.iter().enumerate() {
        let det = r.mat_det(&e.matrix);
        let eps = s.epsilon(i);
        if det != eps {
            return fail_at(
                s,
                i,
                format!("det = {}, psi chi^(k-1) = {}", show(r, &det), show(r, &eps)),
            );
        }
    }
    Verdict::Pass
}

/// Large image: `ρ̄(G) ⊇ SL₂(k)`, and for `p = 3` a transvection in the image
/// of `ρ_n`.
pub fn check_c2(s: &Scenario, cap: usize) -> Result<Verdict> {
    let r = &s.ring;
    let k = r.residue_field();
    let gens: Vec<Mat2> = s.global_generators.iter().map(|&i| s.element(i).matrix).collect();
    let residual: Vec<Mat2> = gens.iter().map(|g| k.mat_reduce_from(g)).collect();
    let mut g = FiniteMatrixGroup::closure(&k, residual, cap)?;
    if !contains_sl2(&mut g, cap)? {
        let missing = elementary_generators(&k)
            .into_iter()
            .find(|t| !g.contains(t))
            .expect("some elementary generator is missing");
        return Ok(fail(
            s,
            "residual image",
            &Mat2::new(r.lift(&k, &missing.a), r.lift(&k, &missing.b), r.lift(&k, &missing.c), r.lift(&k, &missing.d)),
            format!("residual image of order {} misses this element of SL2(k)", g.order().unwrap_or(0)),
        ));
    }
    if r.p() == 3 {
        let image = close(&gens, r.mat_identity(), |x, y| r.mat_mul(x, y), cap)?;
        if !image.iter().any(|x| is_transvection(r, x)) {
            return Ok(fail(
                s,
                "transvection",
                &r.mat(1, 1, 0, 1),
                format!("transvection not found among the {} elements of the image", image.len()),
            ));
        }
    }
    Ok(Verdict::Pass)
}

fn psi_at(s: &Scenario, map: &std::collections::HashMap<usize, RingElem>, i: usize) -> RingElem {
    map.get(&i).copied().unwrap_or_else(|| s.ring.one())
}

/// First generator on which an unramified character is nontrivial.
fn ramified_char(s: &Scenario, pl: &Place, map: &std::collections::HashMap<usize, RingElem>) -> Option<usize> {
    pl.inertia.iter().copied().find(|&i| psi_at(s, map, i) != s.ring.one())
}

fn ordinary_targets(s: &Scenario, pl: &Place) -> Vec<TriangularTarget> {
    let r = &s.ring;
    pl.generators()
        .into_iter()
        .map(|i| {
            let e = s.element(i);
            TriangularTarget {
                label: e.label.clone(),
                matrix: e.matrix,
                upper: r.mul(&psi_at(s, &pl.psi1, i), &r.pow(&e.chi, s.weight - 1)),
                lower: psi_at(s, &pl.psi2, i),
            }
        })
        .collect()
}

/// The characters at the generators of the place at `p`, as used by the
/// non-congruence conditions.
pub fn char_points(s: &Scenario, pl: &Place) -> Vec<CharPoint> {
    pl.generators()
        .into_iter()
        .map(|i| {
            let e = s.element(i);
            CharPoint {
                label: e.label.clone(),
                chi: e.chi,
                psi1: psi_at(s, &pl.psi1, i),
                psi2: psi_at(s, &pl.psi2, i),
            }
        })
        .collect()
}

/// Ordinary and `p`-distinguished at `p`.
pub fn check_c3(s: &Scenario) -> Result<Verdict> {
    let Some(pl) = s.place_at(Prime::P) else {
        return Ok(Verdict::NotApplicable { reason: "no place at p".into() });
    };
    let r = &s.ring;
    for map in [&pl.psi1, &pl.psi2] {
        if let Some(i) = ramified_char(s, pl, map) {
            return Ok(fail_at(s, i, "diagonal character is ramified at p"));
        }
    }
    let gens = pl.generators();
    if let OrdinaryForm::Failure { reason } = ordinary_form(r, &ordinary_targets(s, pl))? {
        return Ok(fail_at(s, gens[0], format!("not ordinary: {reason}")));
    }
    if let Some(f) = pl.frobenius {
        let prod = r.mul(&psi_at(s, &pl.psi1, f), &psi_at(s, &pl.psi2, f));
        if prod != s.element(f).psi {
            return Ok(fail_at(s, f, "psi1 psi2 differs from psi"));
        }
    }
    match distinguishedness(r, s.weight, &char_points(s, pl)) {
        Ok(()) => Ok(Verdict::Pass),
        Err(Error::DistinguishednessViolated(msg)) => Ok(fail_at(s, gens[0], msg)),
        Err(e) => Err(e),
    }
}

/// Multiplicative order of a matrix over a finite ring.
fn mat_order(ring: &GaloisRing, x: &Mat2) -> u64 {
    let id = ring.mat_identity();
    let mut y = *x;
    let mut n = 1;
    while y != id {
        y = ring.mat_mul(&y, x);
        n += 1;
    }
    n
}

/// Order of the group generated by the residual inertia images.
fn residual_inertia_order(s: &Scenario, pl: &Place, cap: usize) -> Result<usize> {
    let k = s.ring.residue_field();
    let gens: Vec<Mat2> = pl.inertia.iter().map(|&i| k.mat_reduce_from(&s.element(i).matrix)).collect();
    Ok(close(&gens, k.mat_identity(), |x, y| k.mat_mul(x, y), cap)?.len())
}

pub fn is_ramified(s: &Scenario, pl: &Place) -> bool {
    let id = s.ring.mat_identity();
    pl.inertia.iter().any(|&i| s.element(i).matrix != id)
}

/// Local shape at the primes `q ≠ p`.
pub fn check_c4(s: &Scenario, cap: usize) -> Result<Verdict> {
    let r = &s.ring;
    let p = r.p();
    for pl in &s.places {
        let Prime::Finite(q) = pl.prime else { continue };
        let frob = pl.frobenius.expect("validated at load");
        let ramified = is_ramified(s, pl);
        if let Some(declared) = pl.ramified {
            if declared != ramified {
                let i = pl.inertia.first().copied().unwrap_or(frob);
                return Ok(fail_at(
                    s,
                    i,
                    format!("{}: declared ramified = {declared}, images say {ramified}", pl.label),
                ));
            }
        }
        if !ramified {
            if q % p == 1 {
                let k = r.residue_field();
                let ord = mat_order(&k, &k.mat_reduce_from(&s.element(frob).matrix));
                if !ord.is_multiple_of(p) {
                    return Ok(fail_at(
                        s,
                        frob,
                        format!("{}: q = 1 mod p, unramified, residual Frobenius of order {ord}", pl.label),
                    ));
                }
            }
            continue;
        }
        if let Some(i) = ramified_char(s, pl, &pl.delta) {
            return Ok(fail_at(s, i, format!("{}: delta is ramified", pl.label)));
        }
        let wild = (residual_inertia_order(s, pl, cap)? as u64).is_multiple_of(p);
        let targets: Vec<TriangularTarget> = pl
            .generators()
            .into_iter()
            .map(|i| {
                let e = s.element(i);
                let delta = psi_at(s, &pl.delta, i);
                let chik = r.pow(&e.chi, s.weight - 1);
                let upper = if wild {
                    r.mul(&chik, &delta)
                } else {
                    r.mul(&r.mul(&chik, &e.psi), &r.invert(&delta).expect("validated unit"))
                };
                TriangularTarget { label: e.label.clone(), matrix: e.matrix, upper, lower: delta }
            })
            .collect();
        let form = if wild { ordinary_form(r, &targets)? } else { split_form(r, &targets)? };
        if let OrdinaryForm::Failure { reason } = form {
            let shape = if wild { "(chi^(k-1), *; 0, 1) delta" } else { "split" };
            return Ok(fail_at(s, pl.inertia[0], format!("{}: not of shape {shape}: {reason}", pl.label)));
        }
    }
    Ok(Verdict::Pass)
}

/// The congruence `χ^{k-1} ≡ 1` on inertia at `p` for one candidate weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCheck {
    pub weight: u64,
    pub formula: String,
    pub declared: bool,
    pub holds: bool,
}

/// Both weights `p^n(p-1)+1` and `p^{n-1}(p-1)+1`.
pub fn theorem_b_weights(s: &Scenario) -> Vec<WeightCheck> {
    let r = &s.ring;
    let p = r.p();
    let n = r.n();
    let inertia = s.place_at(Prime::P).map(|pl| pl.inertia.clone()).unwrap_or_default();
    [(n, "p^n(p-1)+1"), (n - 1, "p^(n-1)(p-1)+1")]
        .into_iter()
        .map(|(e, formula)| {
            let weight = p.pow(e) * (p - 1) + 1;
            let holds = inertia.iter().all(|&i| r.pow(&s.element(i).chi, weight - 1) == r.one());
            WeightCheck { weight, formula: formula.to_string(), declared: weight == s.weight, holds }
        })
        .collect()
}

/// Unramified and split at `p` with unramified diagonal characters, at a
/// weight killing `χ^{k-1}` on inertia.
pub fn check_theorem_b_shape(s: &Scenario) -> Result<Verdict> {
    if s.target != Target::B {
        return Ok(Verdict::NotApplicable { reason: "scenario has target A".into() });
    }
    let Some(pl) = s.place_at(Prime::P) else {
        return Ok(Verdict::NotApplicable { reason: "no place at p".into() });
    };
    let r = &s.ring;
    let id = r.mat_identity();
    if let Some(&i) = pl.inertia.iter().find(|&&i| s.element(i).matrix != id) {
        return Ok(fail_at(s, i, "ramified at p"));
    }
    for map in [&pl.psi1, &pl.psi2] {
        if let Some(i) = ramified_char(s, pl, map) {
            return Ok(fail_at(s, i, "diagonal character is ramified at p"));
        }
    }
    let targets: Vec<TriangularTarget> = pl
        .frobenius
        .into_iter()
        .map(|i| TriangularTarget {
            label: s.element(i).label.clone(),
            matrix: s.element(i).matrix,
            upper: psi_at(s, &pl.psi1, i),
            lower: psi_at(s, &pl.psi2, i),
        })
        .collect();
    if let OrdinaryForm::Failure { reason } = split_form(r, &targets)? {
        return Ok(fail_at(s, pl.frobenius.expect("validated"), format!("not split diagonal: {reason}")));
    }
    let weights = theorem_b_weights(s);
    let witness = pl.inertia.first().or(pl.frobenius.as_ref()).copied().expect("validated");
    match weights.iter().find(|w| w.declared) {
        None => Ok(fail_at(s, witness, format!("weight {} is neither p^n(p-1)+1 nor p^(n-1)(p-1)+1", s.weight))),
        Some(w) if !w.holds => Ok(fail_at(s, witness, format!("chi^{} is not 1 on inertia", w.weight - 1))),
        Some(_) => Ok(Verdict::Pass),
    }
}

/// The declared complex conjugation has `ρ_n(c) ~ diag(-1, 1)` and `χ(c) = -1`.
pub fn check_odd(s: &Scenario) -> Verdict {
    let Some(pl) = s.place_at(Prime::Infinity) else {
        return Verdict::NotApplicable { reason: "no infinite place declared".into() };
    };
    let c = pl.frobenius.expect("validated at load");
    let e = s.element(c);
    if check_r2_element(&s.ring, &e.matrix, &e.chi) {
        Verdict::Pass
    } else {
        fail_at(s, c, "not conjugate to diag(-1, 1) with chi = -1")
    }
}

/// Tame Artin conductor of `ρ̄` away from `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conductor {
    /// Decimal.
    pub value: String,
    /// Exponent `2 - dim V^{I_q}` per prime.
    pub exponents: BTreeMap<u64, u32>,
    pub squarefree: bool,
}

pub fn artin_conductor(s: &Scenario) -> Conductor {
    let k = s.ring.residue_field();
    let mut exponents = BTreeMap::new();
    for pl in &s.places {
        let Prime::Finite(q) = pl.prime else { continue };
        let mut rows = Vec::new();
        for &i in &pl.inertia {
            let m = k.mat_sub(&k.mat_reduce_from(&s.element(i).matrix), &k.mat_identity());
            rows.push(vec![m.a, m.b]);
            rows.push(vec![m.c, m.d]);
        }
        let fixed = if rows.is_empty() { 2 } else { FieldMatrix::from_rows(&rows).kernel(&k).len() };
        let e = (2 - fixed) as u32;
        if e > 0 {
            *exponents.entry(q).or_insert(0) += e;
        }
    }
    let value: BigUint = exponents.iter().map(|(&q, &e)| BigUint::from(q).pow(e)).product();
    Conductor {
        value: value.to_string(),
        squarefree: exponents.values().all(|&e| e <= 1),
        exponents,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub schema_version: u32,
    pub scenario: String,
    pub target: Target,
    pub c1: Verdict,
    pub c2: Verdict,
    pub c3: Verdict,
    pub c4: Verdict,
    pub b_shape: Verdict,
    pub odd: Verdict,
    /// Read off the C2 residual check: `SL₂(k) ⊆ ρ̄(G)`.
    pub absolutely_irreducible: bool,
    pub conductor: Conductor,
    pub theorem_b_weights: Vec<WeightCheck>,
}

/// Which verdict failed, in reporting order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailedCondition {
    C1,
    C2,
    C3,
    C4,
    BShape,
    Odd,
}

impl HypothesisReport {
    pub fn verdicts(&self) -> [(&'static str, &Verdict); 6] {
        [
            ("C1", &self.c1),
            ("C2", &self.c2),
            ("C3", &self.c3),
            ("C4", &self.c4),
            ("B-shape", &self.b_shape),
            ("odd", &self.odd),
        ]
    }

    pub fn first_failure(&self) -> Option<FailedCondition> {
        use FailedCondition::*;
        [C1, C2, C3, C4, BShape, Odd]
            .into_iter()
            .zip(self.verdicts())
            .find(|(_, (_, v))| v.is_fail())
            .map(|(c, _)| c)
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {} (target {:?})\n", self.scenario, self.target);
        for (name, v) in self.verdicts() {
            let _ = write!(out, "{name:<8} {}", v.short());
            match v {
                Verdict::Fail { witness } => {
                    let _ = write!(out, "  [{}] {}", witness.label, witness.reason);
                }
                Verdict::NotApplicable { reason } => {
                    let _ = write!(out, "  ({reason})");
                }
                Verdict::Pass => {}
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "conductor {} ({})",
            self.conductor.value,
            if self.conductor.squarefree { "squarefree" } else { "not squarefree" }
        );
        for w in &self.theorem_b_weights {
            let _ = writeln!(
                out,
                "weight {} = {}: chi^(k-1) = 1 on inertia: {}{}",
                w.weight,
                w.formula,
                w.holds,
                if w.declared { " (declared)" } else { "" }
            );
        }
        out
    }
}

pub fn check_hypotheses(s: &Scenario, cap: usize) -> Result<HypothesisReport> {
    let c2 = check_c2(s, cap)?;
    let absolutely_irreducible = match &c2 {
        Verdict::Pass => true,
        Verdict::Fail { witness } => witness.label != "residual image",
        Verdict::NotApplicable { .. } => false,
    };
    Ok(HypothesisReport {
        schema_version: SCHEMA_VERSION,
        scenario: s.name.clone(),
        target: s.target,
        c1: check_c1(s),
        c2,
        c3: check_c3(s)?,
        c4: check_c4(s, cap)?,
        b_shape: check_theorem_b_shape(s)?,
        odd: check_odd(s),
        absolutely_irreducible,
        conductor: artin_conductor(s),
        theorem_b_weights: theorem_b_weights(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::templates::{self, mutations, theorem_a_p5, theorem_b_p5, transvection_p3};

    const CAP: usize = 1_000_000;

    fn report(j: &crate::scenario::ScenarioJson) -> HypothesisReport {
        check_hypotheses(&Scenario::from_json(j).unwrap(), CAP).unwrap()
    }

    fn statuses(r: &HypothesisReport) -> Vec<&'static str> {
        r.verdicts().iter().map(|(_, v)| v.short()).collect()
    }

    #[test]
    fn theorem_a_template_passes() {
        let r = report(&theorem_a_p5());
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(statuses(&r), ["pass", "pass", "pass", "pass", "n/a", "pass"]);
        assert!(r.absolutely_irreducible);
        assert_eq!(r.conductor.value, "77");
        assert!(r.conductor.squarefree);
    }

    #[test]
    fn theorem_b_template_passes_at_both_weights() {
        let r = report(&theorem_b_p5());
        assert_eq!(statuses(&r), ["pass"; 6], "{}", r.to_text());
        let w: Vec<_> = r.theorem_b_weights.iter().map(|w| (w.weight, w.holds, w.declared)).collect();
        assert_eq!(w, [(101, true, true), (21, true, false)]);

        let mut j = theorem_b_p5();
        j.weight = 21;
        let s = Scenario::from_json(&j).unwrap();
        assert!(check_theorem_b_shape(&s).unwrap().is_pass());
    }

    #[test]
    fn each_mutation_flips_exactly_its_verdict() {
        let a = statuses(&report(&theorem_a_p5()));
        let b = statuses(&report(&theorem_b_p5()));
        for m in mutations() {
            let r = report(&m.scenario);
            assert_eq!(r.first_failure(), Some(m.flips), "{}: {}", m.name, r.to_text());
            let base = match m.scenario.target {
                Target::A if m.scenario.ring.p == 3 => continue,
                Target::A => &a,
                Target::B => &b,
            };
            let diff = statuses(&r).iter().zip(base).filter(|(x, y)| x != y).count();
            assert_eq!(diff, 1, "{}: {}", m.name, r.to_text());
        }
    }

    #[test]
    fn failures_carry_witnesses() {
        for m in mutations() {
            let r = report(&m.scenario);
            for (_, v) in r.verdicts() {
                if let Verdict::Fail { witness } = v {
                    assert!(!witness.label.is_empty() && !witness.reason.is_empty(), "{}", m.name);
                }
            }
        }
    }

    #[test]
    fn transvection_clause_at_three() {
        let s = Scenario::from_json(&transvection_p3(false)).unwrap();
        let Verdict::Fail { witness } = check_c2(&s, CAP).unwrap() else { panic!() };
        assert!(witness.reason.contains("transvection not found"), "{}", witness.reason);
        let s = Scenario::from_json(&transvection_p3(true)).unwrap();
        assert!(check_c2(&s, CAP).unwrap().is_pass());
    }

    #[test]
    fn c3_weight_three_passes_and_weight_two_fails_second_congruence() {
        let mut j = theorem_a_p5();
        for pl in &mut j.places {
            pl.psi1.clear();
            pl.psi2.clear();
        }
        let ring = GaloisRing::integers(5, 2).unwrap();
        // generic ordinary shape diag(chi^(k-1), 1) at inertia, trivial Frobenius
        let set = |j: &mut crate::scenario::ScenarioJson, l: &str, m: Mat2| {
            j.elements.iter_mut().find(|e| e.label == l).unwrap().matrix = ring.mat_to_json(&m);
        };
        set(&mut j, "Frob_p", ring.mat_identity());
        set(&mut j, "I_p", ring.mat(2, 1, 0, 1));
        let s = Scenario::from_json(&j).unwrap();
        let Verdict::Fail { witness } = check_c3(&s).unwrap() else { panic!() };
        assert!(witness.reason.contains("k-2"), "{}", witness.reason);

        j.weight = 3;
        set(&mut j, "I_p", ring.mat(4, 1, 0, 1));
        let s = Scenario::from_json(&j).unwrap();
        assert!(check_c3(&s).unwrap().is_pass());
    }

    #[test]
    fn c3_agrees_with_tangent_dims_on_distinguishedness() {
        use crate::localdef::{tangent_dims, LocalRep, PlaceTag};
        for m in mutations().into_iter().filter(|m| m.name.contains("noncongruence") || m.name == "c3_violation") {
            let s = Scenario::from_json(&m.scenario).unwrap();
            let pl = s.place_at(Prime::P).unwrap();
            let rep = LocalRep {
                ring: s.ring.clone(),
                images: pl.generators().iter().map(|&i| s.element(i).matrix).collect(),
                weight: Some(s.weight),
                characters: char_points(&s, pl),
                semisimple_trivial_chi: false,
            };
            assert!(check_c3(&s).unwrap().is_fail());
            assert!(matches!(
                tangent_dims("p", PlaceTag::AtP, &rep),
                Err(Error::DistinguishednessViolated(_))
            ));
        }
    }

    #[test]
    fn conductor_counts_unipotent_and_split_inertia_once() {
        let r = report(&theorem_a_p5());
        assert_eq!(r.conductor.exponents, BTreeMap::from([(7, 1), (11, 1)]));
        let mut j = theorem_a_p5();
        let ring = GaloisRing::integers(5, 2).unwrap();
        j.elements.iter_mut().find(|e| e.label == "tau7").unwrap().matrix = ring.mat_to_json(&ring.mat(-1, 0, 0, -1));
        let s = Scenario::from_json(&j).unwrap();
        let c = artin_conductor(&s);
        assert_eq!(c.value, "539");
        assert!(!c.squarefree);
    }

    #[test]
    fn fixtures_have_distinct_names() {
        let f = templates::fixtures();
        let mut names: Vec<_> = f.iter().map(|(n, _)| n.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), f.len());
    }
}
