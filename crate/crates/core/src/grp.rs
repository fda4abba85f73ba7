//! Explicit subgroups of `GL₂` over Galois rings: closure enumeration,
//! `SL₂`-containment, conjugacy tests, and the special-element searches.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::{Mat2, Mat2Json};
use crate::ring::{GaloisRing, RingElem, RingJson};

pub const DEFAULT_CAP: usize = 1_000_000;

/// Breadth-first closure of `gens` under right multiplication, starting at
/// `identity`. Elements appear in discovery order, which is deterministic for a
/// fixed generator order.
pub fn close<T, F>(gens: &[T], identity: T, mul: F, cap: usize) -> Result<Vec<T>>
where
    T: Copy + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut elements = vec![identity];
    let mut seen: HashMap<T, usize> = HashMap::new();
    seen.insert(identity, 0);
    let mut i = 0;
    while i < elements.len() {
        let e = elements[i];
        for s in gens {
            let x = mul(&e, s);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(x) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                e.insert(elements.len());
                elements.push(x);
            }
        }
        i += 1;
    }
    Ok(elements)
}

/// A subgroup of `GL₂(R)` given by generators, optionally enumerated.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    ring: GaloisRing,
    generators: Vec<Mat2>,
    elements: Option<Vec<Mat2>>,
    index: Option<HashMap<Mat2, usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub ring: RingJson,
    pub generators: Vec<Mat2Json>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<usize>,
}

impl FiniteMatrixGroup {
    /// A generator-described group; nothing is enumerated yet.
    pub fn from_generators(ring: &GaloisRing, generators: Vec<Mat2>) -> Result<Self> {
        for g in &generators {
            if !ring.mat_is_invertible(g) {
                return Err(Error::InvalidRepresentation(format!(
                    "generator {} is not invertible",
                    ring.mat_display(g)
                )));
            }
        }
        Ok(FiniteMatrixGroup { ring: ring.clone(), generators, elements: None, index: None })
    }

    /// Enumerates the group generated by `generators`.
    pub fn closure(ring: &GaloisRing, generators: Vec<Mat2>, cap: usize) -> Result<Self> {
        let mut g = Self::from_generators(ring, generators)?;
        g.enumerate(cap)?;
        Ok(g)
    }

    pub fn enumerate(&mut self, cap: usize) -> Result<()> {
        if self.elements.is_some() {
            return Ok(());
        }
        let r = &self.ring;
        let elems = close(&self.generators, r.mat_identity(), |x, y| r.mat_mul(x, y), cap)?;
        self.index = Some(elems.iter().enumerate().map(|(i, e)| (*e, i)).collect());
        self.elements = Some(elems);
        Ok(())
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn elements(&self) -> Option<&[Mat2]> {
        self.elements.as_deref()
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(|e| e.len())
    }

    /// Membership; only meaningful for enumerated groups.
    pub fn contains(&self, x: &Mat2) -> bool {
        self.index.as_ref().is_some_and(|idx| idx.contains_key(x))
    }

    pub fn index_of(&self, x: &Mat2) -> Option<usize> {
        self.index.as_ref().and_then(|idx| idx.get(x).copied())
    }

    /// The generator-described image modulo `p`.
    pub fn reduce_mod_p(&self) -> FiniteMatrixGroup {
        let k = self.ring.residue_field();
        let gens = self.generators.iter().map(|g| k.mat_reduce_from(g)).collect();
        FiniteMatrixGroup { ring: k, generators: gens, elements: None, index: None }
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            ring: self.ring.to_json(),
            generators: self.generators.iter().map(|g| self.ring.mat_to_json(g)).collect(),
            order: self.order(),
        }
    }

    pub fn from_json(j: &GroupJson) -> Result<Self> {
        let ring = GaloisRing::from_json(&j.ring)?;
        let gens = j.generators.iter().map(|g| ring.mat_from_json(g)).collect::<Result<_>>()?;
        Self::from_generators(&ring, gens)
    }
}

/// `|GL₂(GR(p^n, m))| = p^{4(n-1)m} (p^{2m} - 1)(p^{2m} - p^m)`.
pub fn gl2_order(ring: &GaloisRing) -> u64 {
    let q = ring.residue_size();
    ring.p().pow(4 * (ring.n() - 1) * ring.m() as u32) * (q * q - 1) * (q * q - q)
}

/// `|SL₂(GR(p^n, m))| = p^{3(n-1)m} q (q² - 1)` with `q = p^m`.
pub fn sl2_order(ring: &GaloisRing) -> u64 {
    let q = ring.residue_size();
    ring.p().pow(3 * (ring.n() - 1) * ring.m() as u32) * q * (q * q - 1)
}

/// Additive generators `1, x, ..., x^{m-1}` of the ring.
fn additive_basis(ring: &GaloisRing) -> Vec<RingElem> {
    (0..ring.m())
        .map(|j| {
            let mut c = vec![0i64; ring.m()];
            c[j] = 1;
            ring.from_coeffs(&c).unwrap()
        })
        .collect()
}

/// Elementary transvections `[[1, b], [0, 1]]`, `[[1, 0], [b, 1]]` over an
/// additive basis; they generate `SL₂` of the (local) ring.
pub fn elementary_generators(ring: &GaloisRing) -> Vec<Mat2> {
    let (o, z) = (ring.one(), ring.zero());
    let basis = additive_basis(ring);
    let mut out: Vec<Mat2> = basis.iter().map(|b| Mat2::new(o, *b, z, o)).collect();
    out.extend(basis.iter().map(|b| Mat2::new(o, z, *b, o)));
    out
}

fn primitive_lift(ring: &GaloisRing) -> RingElem {
    ring.teichmuller(&ring.primitive_residue())
}

pub fn sl2_generators(ring: &GaloisRing) -> Vec<Mat2> {
    elementary_generators(ring)
}

pub fn gl2_generators(ring: &GaloisRing) -> Vec<Mat2> {
    let mut g = elementary_generators(ring);
    g.push(ring.mat_diag(&primitive_lift(ring), &ring.one()));
    for u in principal_unit_generators(ring) {
        g.push(ring.mat_diag(&u, &ring.one()));
    }
    g
}

/// `1 + p b` over an additive basis `b`; together with the Teichmüller lift of
/// a primitive residue they generate the unit group.
fn principal_unit_generators(ring: &GaloisRing) -> Vec<RingElem> {
    if ring.n() == 1 {
        return Vec::new();
    }
    additive_basis(ring)
        .iter()
        .map(|b| ring.add(&ring.one(), &ring.mul_int(b, ring.p() as i64)))
        .collect()
}

/// Generators of the Borel subgroup `{[[*, *], [0, 1]]}` of `GL₂` over a field.
pub fn borel_generators(field: &GaloisRing) -> Vec<Mat2> {
    let (o, z) = (field.one(), field.zero());
    let mut g: Vec<Mat2> = additive_basis(field).iter().map(|b| Mat2::new(o, *b, z, o)).collect();
    g.push(field.mat_diag(&primitive_lift(field), &o));
    g
}

/// Generators of the upper unipotent subgroup over a field.
pub fn unipotent_generators(field: &GaloisRing) -> Vec<Mat2> {
    let (o, z) = (field.one(), field.zero());
    additive_basis(field).iter().map(|b| Mat2::new(o, *b, z, o)).collect()
}

pub fn diagonal_generators(ring: &GaloisRing) -> Vec<Mat2> {
    let g = primitive_lift(ring);
    let mut out = vec![ring.mat_diag(&g, &ring.one()), ring.mat_diag(&ring.one(), &g)];
    for u in principal_unit_generators(ring) {
        out.push(ring.mat_diag(&u, &ring.one()));
        out.push(ring.mat_diag(&ring.one(), &u));
    }
    out
}

/// Whether `G ⊇ SL₂(R)`. Enumerates `G` under `cap` if needed and tests the
/// elementary transvections, which generate `SL₂(R)`.
pub fn contains_sl2(g: &mut FiniteMatrixGroup, cap: usize) -> Result<bool> {
    g.enumerate(cap)?;
    let ring = g.ring().clone();
    Ok(elementary_generators(&ring).iter().all(|t| g.contains(t)))
}

/// `x ~ [[1, 1], [0, 1]]`: trace 2, determinant 1, non-scalar mod `p`.
pub fn is_transvection(ring: &GaloisRing, x: &Mat2) -> bool {
    ring.mat_trace(x) == ring.from_int(2)
        && ring.mat_det(x) == ring.one()
        && !ring.mat_is_scalar_mod_p(x)
}

/// If `x = a · t` with `t ~ [[1, 1], [0, 1]]` and `a` a unit scalar, returns `a`.
pub fn transvection_scalar(ring: &GaloisRing, x: &Mat2) -> Option<RingElem> {
    let half = ring.invert(&ring.from_int(2)).ok()?;
    let a = ring.mul(&ring.mat_trace(x), &half);
    if !ring.is_unit(&a) || ring.square(&a) != ring.mat_det(x) || ring.mat_is_scalar_mod_p(x) {
        return None;
    }
    Some(a)
}

/// Conjugacy in `GL₂(R)`. Matrices that are non-scalar mod `p` are cyclic, so
/// they are conjugate exactly when trace and determinant agree; the remaining
/// case falls back to a search over all of `GL₂(R)` under `cap`.
pub fn is_conjugate(ring: &GaloisRing, x: &Mat2, y: &Mat2, cap: usize) -> Result<bool> {
    let (sx, sy) = (ring.mat_is_scalar_mod_p(x), ring.mat_is_scalar_mod_p(y));
    if sx != sy {
        return Ok(false);
    }
    if ring.mat_trace(x) != ring.mat_trace(y) || ring.mat_det(x) != ring.mat_det(y) {
        return Ok(false);
    }
    if !sx {
        return Ok(true);
    }
    Ok(find_conjugator(ring, x, y, cap)?.is_some())
}

/// Exhaustive search for an invertible `c` with `c⁻¹ x c = y`.
pub fn find_conjugator(ring: &GaloisRing, x: &Mat2, y: &Mat2, cap: usize) -> Result<Option<Mat2>> {
    let size = ring.size();
    if size.saturating_pow(4) > cap as u64 {
        return Err(Error::CapExceeded { cap });
    }
    for i in 0..size.pow(4) {
        let c = Mat2::new(
            ring.element_at(i % size),
            ring.element_at((i / size) % size),
            ring.element_at((i / size / size) % size),
            ring.element_at(i / size / size / size),
        );
        // x c = c y avoids inverting
        if ring.mat_is_invertible(&c) && ring.mat_mul(x, &c) == ring.mat_mul(&c, y) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// An element of the image of `Gal(K/Q)` in `GL₂(R) × R^×`: its matrix and
/// its cyclotomic character value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharElem {
    pub matrix: Mat2,
    pub chi: RingElem,
}

/// The enumerated group of `(ρ_n(g), χ(g))` pairs.
#[derive(Clone, Debug)]
pub struct CharacterImage {
    pub ring: GaloisRing,
    pub generators: Vec<CharElem>,
    pub elements: Vec<CharElem>,
}

impl CharacterImage {
    pub fn closure(ring: &GaloisRing, generators: Vec<CharElem>, cap: usize) -> Result<Self> {
        let id = CharElem { matrix: ring.mat_identity(), chi: ring.one() };
        let mul = |x: &CharElem, y: &CharElem| CharElem {
            matrix: ring.mat_mul(&x.matrix, &y.matrix),
            chi: ring.mul(&x.chi, &y.chi),
        };
        let elements = close(&generators, id, mul, cap)?;
        Ok(CharacterImage { ring: ring.clone(), generators, elements })
    }

    pub fn pow(&self, x: &CharElem, e: u64) -> CharElem {
        CharElem { matrix: self.ring.mat_pow(&x.matrix, e), chi: self.ring.pow(&x.chi, e) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum R1Route {
    /// A listed generator already satisfies the condition.
    Generator,
    /// `h = h₁^{|k| - 1}` for an element `h₁` with scalar-times-unipotent image.
    Power,
    /// Direct search over the enumerated image.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R1Witness {
    pub element: CharElem,
    pub scalar: RingElem,
    pub route: R1Route,
}

fn satisfies_r1(ring: &GaloisRing, x: &CharElem) -> Option<RingElem> {
    if x.chi != ring.one() {
        return None;
    }
    transvection_scalar(ring, &x.matrix)
}

/// Finds `h` with `ρ_n(h) ~ a·[[1, 1], [0, 1]]` and `χ(h) = 1`. Generators are
/// tried first, then the power recipe `h₁^{|k|-1}` over the enumerated image,
/// then a direct search.
pub fn find_r1_element(image: &CharacterImage) -> Result<R1Witness> {
    let ring = &image.ring;
    for g in &image.generators {
        if let Some(a) = satisfies_r1(ring, g) {
            return Ok(R1Witness { element: *g, scalar: a, route: R1Route::Generator });
        }
    }
    let exponent = ring.residue_size() - 1;
    for h1 in &image.elements {
        if transvection_scalar(ring, &h1.matrix).is_none() {
            continue;
        }
        let h = image.pow(h1, exponent);
        if let Some(a) = satisfies_r1(ring, &h) {
            return Ok(R1Witness { element: h, scalar: a, route: R1Route::Power });
        }
    }
    for h in &image.elements {
        if let Some(a) = satisfies_r1(ring, h) {
            return Ok(R1Witness { element: *h, scalar: a, route: R1Route::Search });
        }
    }
    Err(Error::NotFound("no element conjugate to a scalar times a transvection with χ = 1".into()))
}

/// `ρ_n(g) ~ diag(-1, 1)` and `χ(g) = -1`.
pub fn check_r2_element(ring: &GaloisRing, matrix: &Mat2, chi: &RingElem) -> bool {
    let target = ring.mat_diag(&ring.from_int(-1), &ring.one());
    // diag(-1, 1) is non-scalar mod p, so no exhaustive search is needed
    *chi == ring.from_int(-1) && is_conjugate(ring, matrix, &target, 0).unwrap_or(false)
}

/// Outcome of the search for a subgroup of `SL₂(W/p^n)` that maps onto
/// `SL₂(F_p)` but contains no transvection.
#[derive(Clone, Debug)]
pub struct TransvectionFreeSearch {
    pub pairs_examined: usize,
    /// The first transvection-free example, in enumeration order.
    pub example: Option<FiniteMatrixGroup>,
}

/// Runs over all determinant-one lifts of `[[1, 1], [0, 1]]` and
/// `[[1, 0], [1, 1]]` (which generate `SL₂(F_p)`) and looks for a generated
/// group containing no transvection.
pub fn search_transvection_free_lift(ring: &GaloisRing, cap: usize) -> Result<TransvectionFreeSearch> {
    let k = ring.residue_field();
    let lift_set = |r: Mat2| -> Vec<Mat2> {
        ring.mat_lifts(&r).into_iter().filter(|m| ring.mat_det(m) == ring.one()).collect()
    };
    let xs = lift_set(k.mat(1, 1, 0, 1));
    let ys = lift_set(k.mat(1, 0, 1, 1));
    let mut out = TransvectionFreeSearch { pairs_examined: 0, example: None };
    for x in &xs {
        if is_transvection(ring, x) {
            continue;
        }
        for y in &ys {
            if is_transvection(ring, y) {
                continue;
            }
            out.pairs_examined += 1;
            let g = FiniteMatrixGroup::closure(ring, vec![*x, *y], cap)?;
            if g.elements().unwrap().iter().all(|e| !is_transvection(ring, e)) {
                out.example = Some(g);
                return Ok(out);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_examples() {
        let f3 = GaloisRing::integers(3, 1).unwrap();
        let trivial = FiniteMatrixGroup::closure(&f3, vec![f3.mat_identity()], 10).unwrap();
        assert_eq!(trivial.order(), Some(1));
        let g = FiniteMatrixGroup::closure(&f3, vec![f3.mat(1, 1, 0, 1), f3.mat(1, 0, 1, 1)], 100).unwrap();
        assert_eq!(g.order(), Some(24));
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let g9 = FiniteMatrixGroup::closure(&r9, vec![r9.mat(1, 1, 0, 1), r9.mat(1, 0, 1, 1)], 1000).unwrap();
        assert_eq!(g9.order(), Some(648));
        assert!(matches!(
            FiniteMatrixGroup::closure(&r9, vec![r9.mat(1, 1, 0, 1), r9.mat(1, 0, 1, 1)], 100),
            Err(Error::CapExceeded { cap: 100 })
        ));
    }

    #[test]
    fn closure_is_generator_order_independent() {
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let gens = vec![r9.mat(1, 1, 0, 1), r9.mat(2, 0, 0, 5), r9.mat(1, 0, 3, 1)];
        let mut rev = gens.clone();
        rev.reverse();
        let mut a = FiniteMatrixGroup::closure(&r9, gens, 10_000).unwrap().elements().unwrap().to_vec();
        let mut b = FiniteMatrixGroup::closure(&r9, rev, 10_000).unwrap().elements().unwrap().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn standard_group_orders() {
        for (p, n) in [(3, 1), (3, 2), (5, 1)] {
            let r = GaloisRing::integers(p, n).unwrap();
            let gl = FiniteMatrixGroup::closure(&r, gl2_generators(&r), 100_000).unwrap();
            assert_eq!(gl.order().unwrap() as u64, gl2_order(&r));
            let sl = FiniteMatrixGroup::closure(&r, sl2_generators(&r), 100_000).unwrap();
            assert_eq!(sl.order().unwrap() as u64, sl2_order(&r));
        }
        let f9 = GaloisRing::new(3, 1, 2).unwrap();
        let sl = FiniteMatrixGroup::closure(&f9, sl2_generators(&f9), 100_000).unwrap();
        assert_eq!(sl.order(), Some(720));
        let f5 = GaloisRing::integers(5, 1).unwrap();
        assert_eq!(FiniteMatrixGroup::closure(&f5, borel_generators(&f5), 100).unwrap().order(), Some(20));
        assert_eq!(FiniteMatrixGroup::closure(&f5, unipotent_generators(&f5), 100).unwrap().order(), Some(5));
    }

    #[test]
    fn reduction_kernel_has_order_p4() {
        for (p, n) in [(3u64, 2u32), (5, 2)] {
            let r = GaloisRing::integers(p, n).unwrap();
            let lower = r.with_precision(n - 1).unwrap();
            let id = lower.mat_identity();
            let kernel = r
                .mat_lifts(&r.mat_identity())
                .into_iter()
                .filter(|x| r.mat_is_invertible(x) && lower.mat_reduce_from(x) == id)
                .count();
            assert_eq!(kernel as u64, p.pow(4));
        }
    }

    #[test]
    fn contains_sl2_examples() {
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let mut gl = FiniteMatrixGroup::from_generators(&r9, gl2_generators(&r9)).unwrap();
        assert!(contains_sl2(&mut gl, 10_000).unwrap());
        let mut diag = FiniteMatrixGroup::from_generators(&r9, diagonal_generators(&r9)).unwrap();
        assert!(!contains_sl2(&mut diag, 10_000).unwrap());
        let mut g = FiniteMatrixGroup::from_generators(
            &r9,
            vec![r9.mat(1, 3, 0, 1), r9.mat(4, 0, 1, 7), r9.mat(1, 1, 0, 1)],
        )
        .unwrap();
        assert!(contains_sl2(&mut g, 10_000).unwrap());
    }

    #[test]
    fn conjugacy_matches_exhaustive_search() {
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let e = r9.mat(1, 1, 0, 1);
        let samples = [
            r9.mat(1, 1, 0, 1),
            r9.mat(1, 0, 1, 1),
            r9.mat(1, 3, 0, 1),
            r9.mat(4, 3, 0, 7),
            r9.mat(0, 1, 1, 0),
            r9.mat(2, 1, 1, 1),
            r9.mat(1, 2, 0, 1),
            r9.mat(4, 0, 0, 7),
        ];
        for x in &samples {
            for y in &samples {
                let brute = r9.mat_is_invertible(x)
                    && find_conjugator(&r9, x, y, 10_000).unwrap().is_some();
                assert_eq!(is_conjugate(&r9, x, y, 10_000).unwrap(), brute, "{x:?} {y:?}");
            }
            assert_eq!(is_transvection(&r9, x), is_conjugate(&r9, x, &e, 10_000).unwrap());
        }
    }

    #[test]
    fn r2_examples() {
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let m1 = r9.from_int(-1);
        assert!(check_r2_element(&r9, &r9.mat(8, 0, 0, 1), &m1));
        assert!(!check_r2_element(&r9, &r9.mat_identity(), &r9.one()));
        let swap = r9.mat(0, 1, 1, 0);
        assert!(check_r2_element(&r9, &swap, &m1));
        assert!(find_conjugator(&r9, &swap, &r9.mat(8, 0, 0, 1), 10_000).unwrap().is_some());
        assert!(!check_r2_element(&r9, &swap, &r9.one()));
    }

    #[test]
    fn r1_generator_route() {
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let gens: Vec<CharElem> = sl2_generators(&r9)
            .into_iter()
            .map(|m| CharElem { matrix: m, chi: r9.one() })
            .collect();
        let img = CharacterImage::closure(&r9, gens.clone(), 10_000).unwrap();
        let w = find_r1_element(&img).unwrap();
        assert_eq!(w.route, R1Route::Generator);
        assert_eq!(w.element, gens[0]);
    }

    #[test]
    fn r1_not_found_in_diagonal_group() {
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let gens = diagonal_generators(&r9)
            .into_iter()
            .map(|m| CharElem { chi: r9.mat_det(&m), matrix: m })
            .collect();
        let img = CharacterImage::closure(&r9, gens, 10_000).unwrap();
        assert!(matches!(find_r1_element(&img), Err(Error::NotFound(_))));
    }

    #[test]
    fn group_json_round_trip() {
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let g = FiniteMatrixGroup::closure(&r9, sl2_generators(&r9), 10_000).unwrap();
        let j = g.to_json();
        assert_eq!(j.order, Some(648));
        let back = FiniteMatrixGroup::from_json(&j).unwrap();
        assert_eq!(back.generators(), g.generators());
    }

    #[test]
    fn transvection_free_lift_exists_at_three() {
        let r9 = GaloisRing::integers(3, 2).unwrap();
        let found = search_transvection_free_lift(&r9, 10_000).unwrap();
        let mut g = found.example.expect("a transvection-free lift");
        assert_eq!(g.order(), Some(24));
        assert_eq!(g.generators(), &[r9.mat(1, 1, 6, 7), r9.mat(1, 6, 4, 7)]);
        assert!(!contains_sl2(&mut g, 10_000).unwrap());
        let mut red = g.reduce_mod_p();
        assert!(contains_sl2(&mut red, 10_000).unwrap());
    }
}