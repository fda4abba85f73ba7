//! Local deformation conditions: tangent-space bookkeeping at `p` and at
//! ramified or auxiliary primes, the tame case classification, and an
//! exhaustive lift enumerator that checks the versal presentations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coh::{h0, AdjointModule};
use crate::error::{Error, Result};
use crate::mat::{h_eval, Mat2};
use crate::ring::{GaloisRing, RingElem};

/// Default cap on the number of candidate lift pairs.
pub const LIFT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    I,
    II,
    III,
    NonSplitOther,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseLabel::I => "I",
            CaseLabel::II => "II",
            CaseLabel::III => "III",
            CaseLabel::NonSplitOther => "NonSplit-other",
        };
        f.write_str(s)
    }
}

/// A tame place `q ≠ p` with unramified residual image
/// `σ̄ = diag(qα, α⁻¹)`, `τ̄ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameCase {
    pub p: u64,
    pub q: u64,
    /// Index of `α` in the residue field.
    pub alpha: u64,
    pub case: CaseLabel,
    pub q_one_mod_p: bool,
    pub q_minus_one_mod_p: bool,
    pub alpha_sq_one: bool,
    pub q_sq_alpha_sq_one: bool,
}

/// Classifies `(q, α)`; fails when `qα = α⁻¹` in the residue field.
pub fn classify_tame_case(ring: &GaloisRing, q: u64, alpha: &RingElem) -> Result<TameCase> {
    let k = ring.residue_field();
    let p = k.p();
    if q.is_multiple_of(p) || !crate::ring::is_prime(q) {
        return Err(Error::HypothesisViolated(format!("q = {q} must be a prime different from p")));
    }
    let alpha = k.reduce_from(alpha);
    let ainv = k.invert(&alpha).map_err(|_| Error::HypothesisViolated("alpha = 0".into()))?;
    let qk = k.from_int(q as i64);
    if k.mul(&qk, &alpha) == ainv {
        return Err(Error::HypothesisViolated(format!(
            "q alpha = alpha^-1 for q = {q}, alpha = {}",
            k.index_of(&alpha)
        )));
    }
    let one = k.one();
    let a2 = k.square(&alpha);
    let alpha_sq_one = a2 == one;
    let q_sq_alpha_sq_one = k.mul(&k.square(&qk), &a2) == one;
    let q_one_mod_p = q % p == 1;
    let q_minus_one_mod_p = q % p == p - 1;
    let case = if !alpha_sq_one && !q_sq_alpha_sq_one {
        CaseLabel::I
    } else if alpha_sq_one && (q * q) % p != 1 {
        CaseLabel::II
    } else if alpha_sq_one && q_minus_one_mod_p {
        CaseLabel::III
    } else {
        CaseLabel::NonSplitOther
    };
    Ok(TameCase {
        p,
        q,
        alpha: k.index_of(&alpha),
        case,
        q_one_mod_p,
        q_minus_one_mod_p,
        alpha_sq_one,
        q_sq_alpha_sq_one,
    })
}

/// A relation of a versal presentation, in the variables `(S, T)` or
/// `(S, T₁, T₂)` of the presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `(1+T)^q - (1+T)`.
    TorsionT { q: u64 },
    /// `S T`.
    ProductST,
    /// `T₁ (q (1+S)² - h_q(2√(1+T₁T₂)))`.
    Case3First { q: u64 },
    /// `T₂ (1 - q (1+S)² h_q(2√(1+T₁T₂)))`.
    Case3Second { q: u64 },
    /// A relation plus one of the variables; used as a negative control.
    Shifted { base: Box<Relation>, var: usize },
}

impl Relation {
    pub fn eval(&self, ring: &GaloisRing, v: &[RingElem]) -> RingElem {
        let one = ring.one();
        match self {
            Relation::TorsionT { q } => {
                let u = ring.add(&one, &v[1]);
                ring.sub(&ring.pow(&u, *q), &u)
            }
            Relation::ProductST => ring.mul(&v[0], &v[1]),
            Relation::Case3First { q } => {
                let s2 = ring.square(&ring.add(&one, &v[0]));
                let h = h_eval(ring, *q as usize, &case3_trace(ring, &v[1], &v[2]));
                ring.mul(&v[1], &ring.sub(&ring.mul_int(&s2, *q as i64), &h))
            }
            Relation::Case3Second { q } => {
                let s2 = ring.square(&ring.add(&one, &v[0]));
                let h = h_eval(ring, *q as usize, &case3_trace(ring, &v[1], &v[2]));
                ring.mul(&v[2], &ring.sub(&one, &ring.mul_int(&ring.mul(&s2, &h), *q as i64)))
            }
            Relation::Shifted { base, var } => ring.add(&base.eval(ring, v), &v[*var]),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Relation::TorsionT { q } => format!("(1+T)^{q} - (1+T)"),
            Relation::ProductST => "S*T".into(),
            Relation::Case3First { q } => format!("T1*({q}*(1+S)^2 - h_{q}(2*sqrt(1+T1*T2)))"),
            Relation::Case3Second { q } => format!("T2*(1 - {q}*(1+S)^2*h_{q}(2*sqrt(1+T1*T2)))"),
            Relation::Shifted { base, var } => format!("{} + x{var}", base.describe()),
        }
    }
}

/// `2√(1+T₁T₂)` with the square root congruent to 1.
fn case3_trace(ring: &GaloisRing, t1: &RingElem, t2: &RingElem) -> RingElem {
    let u = ring.add(&ring.one(), &ring.mul(t1, t2));
    let r = ring.sqrt_lifting(&u, &ring.residue_field().one()).expect("1 + m is a square");
    ring.mul_int(&r, 2)
}

/// Shape of the versal images `ρ(σ)`, `ρ(τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VersalImages {
    /// `σ = diag(qα̂(1+S), (α̂(1+S))⁻¹)`, `τ = diag(1+T, (1+T)⁻¹)` (or `1`
    /// without a `T` variable).
    Torus { with_t: bool },
    /// `σ = α̂ diag(q(1+S), (1+S)⁻¹)`, `τ = [[1, T], [0, 1]]`.
    Unipotent,
    /// `σ = α̂ diag(q(1+S), (1+S)⁻¹)`, `τ = [[√(1+T₁T₂), T₁], [T₂, √(1+T₁T₂)]]`.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VersalPresentation {
    pub case: TameCase,
    pub variables: Vec<String>,
    pub relations: Vec<Relation>,
    pub images: VersalImages,
    /// Notes on deviations from the printed form.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub case: TameCase,
    pub variables: Vec<String>,
    pub relations: Vec<String>,
    pub sigma: String,
    pub tau: String,
    pub notes: Vec<String>,
}

impl VersalPresentation {
    pub fn for_case(case: &TameCase) -> Option<Self> {
        let q = case.q;
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let (variables, relations, images, notes) = match case.case {
            CaseLabel::I if case.q_one_mod_p => (
                names(&["S", "T"]),
                vec![Relation::TorsionT { q }],
                VersalImages::Torus { with_t: true },
                vec![],
            ),
            CaseLabel::I => (names(&["S"]), vec![], VersalImages::Torus { with_t: false }, vec![]),
            CaseLabel::II => (
                names(&["S", "T"]),
                vec![Relation::ProductST],
                VersalImages::Unipotent,
                vec![format!("the upper-left entry of rho(sigma) uses q = {q} for the printed 'l'")],
            ),
            CaseLabel::III => (
                names(&["S", "T1", "T2"]),
                vec![Relation::Case3First { q }, Relation::Case3Second { q }],
                VersalImages::General,
                vec!["sqrt(1+T1*T2) is the root congruent to 1".into()],
            ),
            CaseLabel::NonSplitOther => return None,
        };
        Some(VersalPresentation { case: case.clone(), variables, relations, images, notes })
    }

    /// The same presentation with the first relation shifted by its first
    /// variable (or a relation `S` added when there is none).
    pub fn corrupted(&self) -> Self {
        let mut out = self.clone();
        match out.relations.first_mut() {
            Some(r) => *r = Relation::Shifted { base: Box::new(r.clone()), var: 1.min(self.variables.len() - 1) },
            None => out.relations.push(Relation::Shifted { base: Box::new(Relation::ProductST), var: 0 }),
        }
        out
    }

    /// Images of `σ` and `τ` at a point of the maximal ideal.
    pub fn images_at(&self, ring: &GaloisRing, v: &[RingElem]) -> Result<(Mat2, Mat2)> {
        let one = ring.one();
        let alpha = ring.teichmuller(&ring.residue_field().element_at(self.case.alpha));
        let q = ring.from_int(self.case.q as i64);
        let u = ring.add(&one, &v[0]);
        match self.images {
            VersalImages::Torus { with_t } => {
                let x = ring.mul(&alpha, &u);
                let sigma = ring.mat_diag(&ring.mul(&q, &x), &ring.invert(&x)?);
                let tau = if with_t {
                    let w = ring.add(&one, &v[1]);
                    ring.mat_diag(&w, &ring.invert(&w)?)
                } else {
                    ring.mat_identity()
                };
                Ok((sigma, tau))
            }
            VersalImages::Unipotent | VersalImages::General => {
                let sigma = ring.mat_scale(&alpha, &ring.mat_diag(&ring.mul(&q, &u), &ring.invert(&u)?));
                let tau = if self.images == VersalImages::Unipotent {
                    Mat2::new(one, v[1], ring.zero(), one)
                } else {
                    let a = ring.sqrt_lifting(
                        &ring.add(&one, &ring.mul(&v[1], &v[2])),
                        &ring.residue_field().one(),
                    )?;
                    Mat2::new(a, v[1], v[2], a)
                };
                Ok((sigma, tau))
            }
        }
    }

    /// Every point of `m^r` at which all relations vanish.
    pub fn points(&self, ring: &GaloisRing) -> Vec<Vec<RingElem>> {
        let ideal: Vec<RingElem> = ring.maximal_ideal().collect();
        let r = self.variables.len();
        let total = ideal.len().pow(r as u32);
        (0..total)
            .map(|mut i| {
                (0..r)
                    .map(|_| {
                        let x = ideal[i % ideal.len()];
                        i /= ideal.len();
                        x
                    })
                    .collect::<Vec<_>>()
            })
            .filter(|v| self.relations.iter().all(|rel| ring.is_zero(&rel.eval(ring, v))))
            .collect()
    }

    pub fn to_json(&self) -> PresentationJson {
        let (sigma, tau) = match self.images {
            VersalImages::Torus { with_t: true } => (
                "[[q*a*(1+S), 0], [0, (a*(1+S))^-1]]",
                "[[1+T, 0], [0, (1+T)^-1]]",
            ),
            VersalImages::Torus { with_t: false } => ("[[q*a*(1+S), 0], [0, (a*(1+S))^-1]]", "[[1, 0], [0, 1]]"),
            VersalImages::Unipotent => ("a*[[q*(1+S), 0], [0, (1+S)^-1]]", "[[1, T], [0, 1]]"),
            VersalImages::General => (
                "a*[[q*(1+S), 0], [0, (1+S)^-1]]",
                "[[sqrt(1+T1*T2), T1], [T2, sqrt(1+T1*T2)]]",
            ),
        };
        PresentationJson {
            case: self.case.clone(),
            variables: self.variables.clone(),
            relations: self.relations.iter().map(|r| r.describe()).collect(),
            sigma: sigma.replace('q', &self.case.q.to_string()).replace("a*", &format!("teich({})*", self.case.alpha)),
            tau: tau.to_string(),
            notes: self.notes.clone(),
        }
    }
}

/// A strict-equivalence class of lifts `(ρ(σ), ρ(τ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftClass {
    /// Lexicographically least member.
    pub rep: (Mat2, Mat2),
    /// Least member with `ρ(σ)` diagonal, when one exists.
    pub diagonal_rep: Option<(Mat2, Mat2)>,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct LiftEnumeration {
    pub ring: GaloisRing,
    pub q: u64,
    /// Number of pairs with the prescribed determinants.
    pub candidates: usize,
    /// Pairs that also satisfy `σ τ σ⁻¹ = τ^q`.
    pub solutions: usize,
    pub classes: Vec<LiftClass>,
    class_of: HashMap<(Mat2, Mat2), usize>,
}

impl LiftEnumeration {
    pub fn class_of(&self, pair: &(Mat2, Mat2)) -> Option<usize> {
        self.class_of.get(pair).copied()
    }
}

/// All lifts of `(σ̄, τ̄)` to `ring` with `det ρ(σ) = χ_σ`, `det ρ(τ) = χ_τ`
/// and `ρ(σ) ρ(τ) ρ(σ)⁻¹ = ρ(τ)^q`, grouped into classes under conjugation
/// by matrices congruent to `1` mod `p`.
pub fn enumerate_lifts(
    ring: &GaloisRing,
    sigma_bar: &Mat2,
    tau_bar: &Mat2,
    q: u64,
    chi_sigma: &RingElem,
    chi_tau: &RingElem,
    cap: usize,
) -> Result<LiftEnumeration> {
    let k = ring.residue_field();
    let (sb, tb) = (k.mat_reduce_from(sigma_bar), k.mat_reduce_from(tau_bar));
    if !k.mat_is_invertible(&sb) || !k.mat_is_invertible(&tb) {
        return Err(Error::InvalidResidual("residual images must be invertible".into()));
    }
    let lhs = k.mat_mul(&k.mat_mul(&sb, &tb), &k.mat_inv(&sb)?);
    if lhs != k.mat_pow(&tb, q) {
        return Err(Error::InvalidResidual("sigma tau sigma^-1 != tau^q mod p".into()));
    }
    if k.mat_det(&sb) != k.reduce_from(chi_sigma) || k.mat_det(&tb) != k.reduce_from(chi_tau) {
        return Err(Error::InvalidResidual("residual determinants differ from the character".into()));
    }
    let per = ring.p().pow(4 * (ring.n() - 1) * ring.m() as u32) as usize;
    if per > cap {
        return Err(Error::CapExceeded { cap });
    }
    let sigmas: Vec<Mat2> = ring.mat_lifts(&sb).into_iter().filter(|a| ring.mat_det(a) == *chi_sigma).collect();
    let taus: Vec<(Mat2, Mat2)> = ring
        .mat_lifts(&tb)
        .into_iter()
        .filter(|b| ring.mat_det(b) == *chi_tau)
        .map(|b| (b, ring.mat_pow(&b, q)))
        .collect();
    if sigmas.len().saturating_mul(taus.len()) > cap {
        return Err(Error::CapExceeded { cap });
    }
    let mut pairs = Vec::new();
    for a in &sigmas {
        for (b, bq) in &taus {
            // σ τ = τ^q σ avoids inverting σ
            if ring.mat_mul(a, b) == ring.mat_mul(bq, a) {
                pairs.push((*a, *b));
            }
        }
    }
    pairs.sort();
    let kernel: Vec<(Mat2, Mat2)> = ring
        .mat_lifts(&k.mat_identity())
        .into_iter()
        .map(|x| {
            let inv = ring.mat_inv(&x).expect("congruent to 1");
            (x, inv)
        })
        .collect();
    let mut class_of: HashMap<(Mat2, Mat2), usize> = HashMap::with_capacity(pairs.len());
    let mut classes = Vec::new();
    for pair in &pairs {
        if class_of.contains_key(pair) {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for (x, xinv) in &kernel {
            let c = (
                ring.mat_mul(&ring.mat_mul(xinv, &pair.0), x),
                ring.mat_mul(&ring.mat_mul(xinv, &pair.1), x),
            );
            if class_of.insert(c, id).is_none() {
                members.push(c);
            }
        }
        members.sort();
        let diagonal_rep = members.iter().find(|(s, _)| ring.is_zero(&s.b) && ring.is_zero(&s.c)).copied();
        classes.push(LiftClass { rep: members[0], diagonal_rep, size: members.len() });
    }
    Ok(LiftEnumeration {
        ring: ring.clone(),
        q,
        candidates: sigmas.len() * taus.len(),
        solutions: pairs.len(),
        classes,
        class_of,
    })
}

/// The residual pair `(diag(qα, α⁻¹), 1)` of a tame case, over the residue field.
pub fn residual_pair(ring: &GaloisRing, case: &TameCase) -> (Mat2, Mat2) {
    let k = ring.residue_field();
    let a = k.element_at(case.alpha);
    let q = k.from_int(case.q as i64);
    (k.mat_diag(&k.mul(&q, &a), &k.invert(&a).expect("unit")), k.mat_identity())
}

/// Enumerates the lifts of a tame case's residual pair with determinant
/// `χ` (`χ(σ) = q`, `χ(τ) = 1`).
pub fn enumerate_case(ring: &GaloisRing, case: &TameCase, cap: usize) -> Result<LiftEnumeration> {
    let (s, t) = residual_pair(ring, case);
    enumerate_lifts(ring, &s, &t, case.q, &ring.from_int(case.q as i64), &ring.one(), cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub points: usize,
    pub classes: usize,
    /// Number of points landing in each class, keyed by multiplicity.
    pub multiplicities: BTreeMap<usize, usize>,
    /// Points whose images are not lifts with the right determinant and relation.
    pub invalid_points: Vec<String>,
    /// Classes not reached by any point.
    pub unmatched_classes: Vec<String>,
    pub bijective: bool,
}

/// Compares the points of a presentation with the enumerated classes.
pub fn compare_presentation(pres: &VersalPresentation, lifts: &LiftEnumeration) -> Result<PresentationReport> {
    let ring = &lifts.ring;
    let pts = pres.points(ring);
    let mut hits = vec![0usize; lifts.classes.len()];
    let mut invalid = Vec::new();
    let show = |v: &[RingElem]| format!("{:?}", v.iter().map(|x| ring.index_of(x)).collect::<Vec<_>>());
    for v in &pts {
        let pair = pres.images_at(ring, v)?;
        match lifts.class_of(&pair) {
            Some(c) => hits[c] += 1,
            None => invalid.push(show(v)),
        }
    }
    let mut multiplicities = BTreeMap::new();
    for &h in hits.iter().filter(|&&h| h > 0) {
        *multiplicities.entry(h).or_insert(0) += 1;
    }
    let unmatched: Vec<String> = hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h == 0)
        .map(|(i, _)| {
            let (s, t) = lifts.classes[i].rep;
            format!("sigma = {}, tau = {}", ring.mat_display(&s), ring.mat_display(&t))
        })
        .collect();
    let bijective = invalid.is_empty() && unmatched.is_empty() && hits.iter().all(|&h| h == 1);
    Ok(PresentationReport {
        points: pts.len(),
        classes: lifts.classes.len(),
        multiplicities,
        invalid_points: invalid,
        unmatched_classes: unmatched,
        bijective,
    })
}

/// Like [`compare_presentation`] but fails with the witnesses unless the
/// points and classes correspond one to one.
pub fn verify_presentation(pres: &VersalPresentation, lifts: &LiftEnumeration) -> Result<PresentationReport> {
    let r = compare_presentation(pres, lifts)?;
    if r.bijective {
        return Ok(r);
    }
    let mut w: Vec<String> = r.invalid_points.iter().take(3).map(|p| format!("point {p} is not a lift")).collect();
    w.extend(r.unmatched_classes.iter().take(3).map(|c| format!("class {c} unmatched")));
    if let Some((&m, _)) = r.multiplicities.iter().find(|(&m, _)| m > 1) {
        w.push(format!("some class is hit {m} times"));
    }
    Err(Error::MismatchFound(format!("{} points vs {} classes: {}", r.points, r.classes, w.join("; "))))
}

/// Coordinates `(s, t₁, t₂, a, d)` of a class in the normalized form where
/// `ρ(σ) = α̂ diag(q(1+s), ...)` and `ρ(τ) = [[a, t₁], [t₂, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub s: RingElem,
    pub t1: RingElem,
    pub t2: RingElem,
    pub a: RingElem,
    pub d: RingElem,
}

pub fn class_coordinates(ring: &GaloisRing, case: &TameCase, class: &LiftClass) -> Option<ClassCoordinates> {
    let (sigma, tau) = class.diagonal_rep?;
    let alpha = ring.teichmuller(&ring.residue_field().element_at(case.alpha));
    let lead = ring.mul(&alpha, &ring.from_int(case.q as i64));
    let s = ring.sub(&ring.mul(&sigma.a, &ring.invert(&lead).ok()?), &ring.one());
    Some(ClassCoordinates { s, t1: tau.b, t2: tau.c, a: tau.a, d: tau.d })
}

/// Property checks on the enumerated classes of each case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCheck {
    pub case: CaseLabel,
    pub classes: usize,
    pub all_normalizable: bool,
    /// Case I: both matrices diagonal and `u^q = u` for `u = ρ(τ)₁₁`.
    pub diagonal_and_torsion: Option<bool>,
    /// Case I: classes with `ρ(τ) = 1`.
    pub tau_trivial: usize,
    /// Case II: `t₂ = 0` and `s t₁ = 0`.
    pub t2_zero_and_st1_zero: Option<bool>,
    /// Case III: both ideal relations hold, using the trace `a + d` in place
    /// of `2√(1+t₁t₂)`.
    pub ideal_relations_hold: Option<bool>,
    /// Case III: classes with `t₁t₂ ≠ 0`.
    pub t1t2_nonzero: usize,
    /// Case III: classes with `t₁t₂ ≠ 0` and `(s, t₂) ≠ 0`.
    pub t1t2_nonzero_with_s_or_t2: usize,
}

pub fn check_case(ring: &GaloisRing, case: &TameCase, lifts: &LiftEnumeration) -> CaseCheck {
    let coords: Vec<Option<ClassCoordinates>> =
        lifts.classes.iter().map(|c| class_coordinates(ring, case, c)).collect();
    let all_normalizable = coords.iter().all(|c| c.is_some());
    let cs: Vec<ClassCoordinates> = coords.into_iter().flatten().collect();
    let z = |x: &RingElem| ring.is_zero(x);
    let q = case.q;
    let mut out = CaseCheck {
        case: case.case,
        classes: lifts.classes.len(),
        all_normalizable,
        diagonal_and_torsion: None,
        tau_trivial: lifts.classes.iter().filter(|c| c.rep.1 == ring.mat_identity()).count(),
        t2_zero_and_st1_zero: None,
        ideal_relations_hold: None,
        t1t2_nonzero: 0,
        t1t2_nonzero_with_s_or_t2: 0,
    };
    match case.case {
        CaseLabel::I => {
            out.diagonal_and_torsion = Some(
                all_normalizable
                    && cs.iter().all(|c| z(&c.t1) && z(&c.t2) && ring.pow(&c.a, q) == c.a),
            );
        }
        CaseLabel::II => {
            out.t2_zero_and_st1_zero =
                Some(all_normalizable && cs.iter().all(|c| z(&c.t2) && z(&ring.mul(&c.s, &c.t1))));
        }
        CaseLabel::III => {
            let one = ring.one();
            out.ideal_relations_hold = Some(
                all_normalizable
                    && cs.iter().all(|c| {
                        let t = ring.add(&c.a, &c.d);
                        let h = h_eval(ring, q as usize, &t);
                        let s2 = ring.square(&ring.add(&one, &c.s));
                        let r1 = ring.mul(&c.t1, &ring.sub(&ring.mul_int(&s2, q as i64), &h));
                        let r2 = ring.mul(&c.t2, &ring.sub(&one, &ring.mul_int(&ring.mul(&s2, &h), q as i64)));
                        z(&r1) && z(&r2)
                    }),
            );
            let nz: Vec<_> = cs.iter().filter(|c| !z(&ring.mul(&c.t1, &c.t2))).collect();
            out.t1t2_nonzero = nz.len();
            out.t1t2_nonzero_with_s_or_t2 = nz.iter().filter(|c| !z(&c.s) || !z(&c.t2)).count();
        }
        CaseLabel::NonSplitOther => {}
    }
    out
}

/// Which local condition a place carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlaceTag {
    AtP,
    /// Ramified at `q ∤ p` with `p | #ρ̄(I_q)`.
    #[serde(rename = "RamifiedPrimeToP_WildPart")]
    RamifiedPrimeToPWild,
    /// Ramified at `q ∤ p` with `p ∤ #ρ̄(I_q)`.
    #[serde(rename = "RamifiedPrimeToP_TamePart")]
    RamifiedPrimeToPTame,
    UnramifiedAux,
    RamakrishnaAux,
}

impl fmt::Display for PlaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PlaceTag::AtP => "AtP",
            PlaceTag::RamifiedPrimeToPWild => "RamifiedPrimeToP_WildPart",
            PlaceTag::RamifiedPrimeToPTame => "RamifiedPrimeToP_TamePart",
            PlaceTag::UnramifiedAux => "UnramifiedAux",
            PlaceTag::RamakrishnaAux => "RamakrishnaAux",
        };
        f.write_str(s)
    }
}

/// Character values at one generator of the decomposition group at `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoint {
    pub label: String,
    pub chi: RingElem,
    pub psi1: RingElem,
    pub psi2: RingElem,
}

/// Local data needed for the tangent dimension at a place.
#[derive(Clone, Debug)]
pub struct LocalRep {
    pub ring: GaloisRing,
    /// Images of generators of the decomposition group.
    pub images: Vec<Mat2>,
    /// Weight and diagonal characters; required at `p`.
    pub weight: Option<u64>,
    pub characters: Vec<CharPoint>,
    /// For the wild case: `ρ̄` semi-simple with `χ̄` trivial on the place.
    pub semisimple_trivial_chi: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCondition {
    pub label: String,
    pub tag: PlaceTag,
    pub tangent_dim: i64,
    pub h0_dim: i64,
}

/// `dim H⁰(G_v, Ad⁰ρ̄)` from the generator images.
pub fn local_h0(ring: &GaloisRing, images: &[Mat2]) -> Result<usize> {
    let m = AdjointModule::new(ring, 0);
    let acts = images.iter().map(|g| m.action(ring, g)).collect::<Result<Vec<_>>>()?;
    Ok(h0(m.field(), 3, &acts).0)
}

/// Checks both non-congruences `ψ₁χ^{k-1} ≢ ψ₂` and `ψ₁χ^{k-2} ≢ ψ₂` mod
/// `p`: each must fail at some generator.
pub fn distinguishedness(ring: &GaloisRing, k: u64, points: &[CharPoint]) -> Result<()> {
    let f = ring.residue_field();
    for (shift, name) in [(1u64, "psi1 chi^(k-1) = psi2"), (2, "psi1 chi^(k-2) = psi2")] {
        if k < shift {
            return Err(Error::DistinguishednessViolated(format!("weight {k} too small")));
        }
        let differs = points.iter().any(|c| {
            let lhs = f.mul(&f.reduce_from(&c.psi1), &f.pow(&f.reduce_from(&c.chi), k - shift));
            lhs != f.reduce_from(&c.psi2)
        });
        if !differs {
            return Err(Error::DistinguishednessViolated(format!("{name} mod p on every generator")));
        }
    }
    Ok(())
}

pub fn tangent_dims(label: &str, tag: PlaceTag, rep: &LocalRep) -> Result<LocalCondition> {
    let h = local_h0(&rep.ring, &rep.images)? as i64;
    let tangent = match tag {
        PlaceTag::AtP => {
            let k = rep
                .weight
                .ok_or_else(|| Error::HypothesisViolated("weight required at p".into()))?;
            distinguishedness(&rep.ring, k, &rep.characters)?;
            h + 1
        }
        PlaceTag::RamifiedPrimeToPWild => {
            if rep.semisimple_trivial_chi {
                return Err(Error::HypothesisViolated(format!(
                    "{label}: semi-simple with trivial chi"
                )));
            }
            h
        }
        _ => h,
    };
    Ok(LocalCondition { label: label.to_string(), tag, tangent_dim: tangent, h0_dim: h })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substantiality {
    /// `dim t ≥ dim H⁰ + 1`.
    pub by_inequality: bool,
    /// The dimension matches the one attached to a condition named substantial
    /// for this kind of place.
    pub designated: bool,
}

pub fn check_substantial(cond: &LocalCondition) -> Substantiality {
    let expected = match cond.tag {
        PlaceTag::AtP => cond.h0_dim + 1,
        _ => cond.h0_dim,
    };
    Substantiality {
        by_inequality: cond.tangent_dim > cond.h0_dim,
        designated: cond.tangent_dim == expected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z25() -> GaloisRing {
        GaloisRing::integers(5, 2).unwrap()
    }

    fn case(q: u64, a: i64) -> TameCase {
        let r = z25();
        classify_tame_case(&r, q, &r.from_int(a)).unwrap()
    }

    #[test]
    fn classification_examples() {
        let c = case(11, 2);
        assert_eq!(c.case, CaseLabel::I);
        assert!(c.q_one_mod_p);
        assert_eq!(case(2, 1).case, CaseLabel::II);
        assert_eq!(case(19, 1).case, CaseLabel::III);
        assert_eq!(case(2, 2).case, CaseLabel::NonSplitOther);
        let r = z25();
        // α² = -1 here, so case I with q ≢ 1 mod 5 always has qα = α⁻¹
        assert!(classify_tame_case(&r, 19, &r.from_int(2)).is_err());
        // 11 * 1 = 1 = 1^-1
        assert!(matches!(classify_tame_case(&r, 11, &r.one()), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn classification_is_total() {
        for p in [3u64, 5] {
            let r = GaloisRing::integers(p, 1).unwrap();
            for q in (2..50).filter(|&q| crate::ring::is_prime(q) && q != p) {
                for a in 1..p as i64 {
                    let alpha = r.from_int(a);
                    let qa = r.mul(&r.from_int(q as i64), &alpha);
                    match classify_tame_case(&r, q, &alpha) {
                        Ok(_) => assert_ne!(qa, r.invert(&alpha).unwrap()),
                        Err(Error::HypothesisViolated(_)) => assert_eq!(qa, r.invert(&alpha).unwrap()),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn case_one_q_one_mod_p() {
        let r = z25();
        let c = case(11, 2);
        let lifts = enumerate_case(&r, &c, LIFT_CAP).unwrap();
        let chk = check_case(&r, &c, &lifts);
        assert_eq!(chk.diagonal_and_torsion, Some(true));
        let pres = VersalPresentation::for_case(&c).unwrap();
        let rep = verify_presentation(&pres, &lifts).unwrap();
        assert_eq!((rep.points, rep.classes), (25, 25));
    }

    #[test]
    fn case_one_q_not_one_mod_p_forces_t_zero() {
        let r = GaloisRing::integers(7, 2).unwrap();
        let c = classify_tame_case(&r, 3, &r.from_int(3)).unwrap();
        assert_eq!(c.case, CaseLabel::I);
        let lifts = enumerate_case(&r, &c, LIFT_CAP).unwrap();
        assert_eq!(lifts.classes.len(), 7);
        assert_eq!(check_case(&r, &c, &lifts).tau_trivial, 7);
        verify_presentation(&VersalPresentation::for_case(&c).unwrap(), &lifts).unwrap();
    }

    #[test]
    fn case_two() {
        let r = z25();
        let c = case(2, 1);
        let lifts = enumerate_case(&r, &c, LIFT_CAP).unwrap();
        assert_eq!(check_case(&r, &c, &lifts).t2_zero_and_st1_zero, Some(true));
        verify_presentation(&VersalPresentation::for_case(&c).unwrap(), &lifts).unwrap();
    }

    #[test]
    fn case_three() {
        let r = z25();
        let c = case(19, 1);
        let lifts = enumerate_case(&r, &c, LIFT_CAP).unwrap();
        let chk = check_case(&r, &c, &lifts);
        assert_eq!(chk.ideal_relations_hold, Some(true));
        assert_eq!(chk.t1t2_nonzero_with_s_or_t2, 0);
        verify_presentation(&VersalPresentation::for_case(&c).unwrap(), &lifts).unwrap();
    }

    #[test]
    fn corrupted_presentation_mismatches() {
        let r = z25();
        let c = case(11, 2);
        let lifts = enumerate_case(&r, &c, LIFT_CAP).unwrap();
        let bad = VersalPresentation::for_case(&c).unwrap().corrupted();
        assert!(matches!(verify_presentation(&bad, &lifts), Err(Error::MismatchFound(_))));
    }

    #[test]
    fn lifts_satisfy_relation() {
        let r = z25();
        let c = case(2, 1);
        let lifts = enumerate_case(&r, &c, LIFT_CAP).unwrap();
        for cl in &lifts.classes {
            let (a, b) = cl.rep;
            let lhs = r.mat_mul(&r.mat_mul(&a, &b), &r.mat_inv(&a).unwrap());
            assert_eq!(lhs, r.mat_pow(&b, 2));
            assert_eq!(r.mat_det(&a), r.from_int(2));
        }
    }

    #[test]
    fn invalid_residual_rejected() {
        let r = z25();
        let k = r.residue_field();
        let err = enumerate_lifts(&r, &k.mat(2, 0, 0, 1), &k.mat(1, 1, 0, 1), 3, &r.from_int(2), &r.one(), LIFT_CAP);
        assert!(matches!(err, Err(Error::InvalidResidual(_))));
    }

    #[test]
    fn tangent_dims_examples() {
        let r = z25();
        let pts = |psi1: i64, psi2: i64| {
            vec![CharPoint { label: "I_p".into(), chi: r.from_int(2), psi1: r.from_int(psi1), psi2: r.from_int(psi2) }]
        };
        let rep = LocalRep {
            ring: r.clone(),
            images: vec![r.mat(2, 1, 0, 1), r.mat(2, 0, 0, 13)],
            weight: Some(3),
            characters: pts(1, 1),
            semisimple_trivial_chi: false,
        };
        let c = tangent_dims("p", PlaceTag::AtP, &rep).unwrap();
        assert_eq!((c.tangent_dim, c.h0_dim), (1, 0));
        let generic = LocalRep { images: vec![r.mat(2, 0, 0, 13)], ..rep.clone() };
        let c = tangent_dims("p", PlaceTag::AtP, &generic).unwrap();
        assert_eq!((c.tangent_dim, c.h0_dim), (2, 1));
        let tame = LocalRep { images: vec![r.mat(24, 0, 0, 1), r.mat(7, 0, 0, 1)], weight: None, ..rep.clone() };
        let c = tangent_dims("q", PlaceTag::RamifiedPrimeToPTame, &tame).unwrap();
        assert_eq!((c.tangent_dim, c.h0_dim), (1, 1));
        let bad = LocalRep { weight: Some(2), ..rep };
        assert!(matches!(tangent_dims("p", PlaceTag::AtP, &bad), Err(Error::DistinguishednessViolated(_))));
    }

    #[test]
    fn substantiality_verdicts() {
        let mk = |tag, t, h| LocalCondition { label: "x".into(), tag, tangent_dim: t, h0_dim: h };
        assert_eq!(check_substantial(&mk(PlaceTag::AtP, 2, 1)), Substantiality { by_inequality: true, designated: true });
        assert_eq!(
            check_substantial(&mk(PlaceTag::RamifiedPrimeToPTame, 1, 1)),
            Substantiality { by_inequality: false, designated: true }
        );
        assert_eq!(
            check_substantial(&mk(PlaceTag::RamifiedPrimeToPTame, 0, 1)),
            Substantiality { by_inequality: false, designated: false }
        );
    }
}
