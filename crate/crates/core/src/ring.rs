//! Galois rings `GR(p^n, m) = W(F_{p^m}) / p^n`.
//!
//! Elements are stored as coefficient vectors over `Z/p^n` in the power basis
//! of a fixed monic modulus of degree `m`. The modulus is the smallest monic
//! polynomial of degree `m` that is irreducible mod `p`, ordering candidates by
//! their coefficients read from `x^{m-1}` down to the constant term. Its
//! coefficients lie in `[0, p)` and are reused verbatim at every precision, so
//! reduction down the precision tower is coefficientwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported residue degree.
pub const MAX_DEGREE: usize = 8;

/// An element of some [`GaloisRing`]. The ring is carried separately as the
/// arithmetic context; the derived ordering is lexicographic on the
/// coefficient vector starting from the constant term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem(pub(crate) [u32; MAX_DEGREE]);

impl RingElem {
    pub fn coeffs(&self) -> &[u32; MAX_DEGREE] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisRing {
    p: u64,
    n: u32,
    m: usize,
    /// `p^n`
    q: u64,
    /// Low coefficients `c_0..c_{m-1}` of the monic modulus.
    modulus: [u64; MAX_DEGREE],
}

/// Wire form of a ring element: `{"p", "n", "m", "coeffs"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub p: u64,
    pub n: u32,
    pub m: usize,
    pub coeffs: Vec<u64>,
}

/// Wire form of a ring: `{"p", "n", "m"}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub p: u64,
    pub n: u32,
    pub m: usize,
}

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GaloisRing {
    pub fn new(p: u64, n: u32, m: usize) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidRing(format!("p = {p} must be an odd prime")));
        }
        if n == 0 {
            return Err(Error::InvalidRing("precision n must be >= 1".into()));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidRing(format!(
                "residue degree m = {m} must lie in 1..={MAX_DEGREE}"
            )));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q < (1 << 31))
            .ok_or_else(|| Error::InvalidRing(format!("{p}^{n} too large")))?;
        q.checked_pow(m as u32)
            .filter(|&s| s < (1 << 62))
            .ok_or_else(|| Error::InvalidRing("ring too large".into()))?;
        let modulus = smallest_irreducible(p, m);
        Ok(GaloisRing { p, n, m, q, modulus })
    }

    /// The integers mod `p^n`.
    pub fn integers(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn m(&self) -> usize {
        self.m
    }
    /// `p^n`, the characteristic.
    pub fn modulus_int(&self) -> u64 {
        self.q
    }
    /// Coefficients `c_0..c_{m-1}` of the monic modulus `x^m + ... + c_0`.
    pub fn modulus_coeffs(&self) -> &[u64] {
        &self.modulus[..self.m]
    }
    /// Size `p^m` of the residue field.
    pub fn residue_size(&self) -> u64 {
        self.p.pow(self.m as u32)
    }
    /// Number of elements, `p^(nm)`.
    pub fn size(&self) -> u64 {
        self.q.pow(self.m as u32)
    }
    /// Number of units, `p^((n-1)m) (p^m - 1)`.
    pub fn unit_count(&self) -> u64 {
        self.p.pow((self.n - 1) * self.m as u32) * (self.residue_size() - 1)
    }

    pub fn to_json(&self) -> RingJson {
        RingJson { p: self.p, n: self.n, m: self.m }
    }

    pub fn from_json(j: &RingJson) -> Result<Self> {
        Self::new(j.p, j.n, j.m)
    }

    /// Same residue field, precision `n'`.
    pub fn with_precision(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::PrecisionOutOfRange { requested: n, max: self.n.max(n) });
        }
        Self::new(self.p, n, self.m)
    }

    pub fn residue_field(&self) -> Self {
        self.with_precision(1).expect("precision 1 is always valid")
    }

    pub fn is_field(&self) -> bool {
        self.n == 1
    }

    pub fn zero(&self) -> RingElem {
        RingElem::default()
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> RingElem {
        let mut c = [0u32; MAX_DEGREE];
        c[0] = v.rem_euclid(self.q as i64) as u32;
        RingElem(c)
    }

    /// The image of the generator `x` of the power basis.
    pub fn generator(&self) -> RingElem {
        if self.m == 1 {
            // x ≡ -c_0 when the modulus is linear
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut c = [0u32; MAX_DEGREE];
        c[1] = 1;
        RingElem(c)
    }

    /// Builds an element from (possibly non-canonical) integer coefficients.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<RingElem> {
        if coeffs.len() > self.m {
            return Err(Error::ForeignElement(format!(
                "{} coefficients for residue degree {}",
                coeffs.len(),
                self.m
            )));
        }
        let mut c = [0u32; MAX_DEGREE];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v.rem_euclid(self.q as i64) as u32;
        }
        Ok(RingElem(c))
    }

    pub fn coeff_vec(&self, x: &RingElem) -> Vec<u64> {
        x.0[..self.m].iter().map(|&c| c as u64).collect()
    }

    pub fn elem_to_json(&self, x: &RingElem) -> ElemJson {
        ElemJson { p: self.p, n: self.n, m: self.m, coeffs: self.coeff_vec(x) }
    }

    /// Parses a serialized element, requiring matching ring parameters and
    /// canonical coefficients.
    pub fn elem_from_json(&self, j: &ElemJson) -> Result<RingElem> {
        if j.p != self.p || j.n != self.n || j.m != self.m {
            return Err(Error::ForeignElement(format!(
                "element of GR({}^{}, {}) given for GR({}^{}, {})",
                j.p, j.n, j.m, self.p, self.n, self.m
            )));
        }
        if j.coeffs.len() != self.m {
            return Err(Error::ForeignElement(format!(
                "expected {} coefficients, got {}",
                self.m,
                j.coeffs.len()
            )));
        }
        let mut c = [0u32; MAX_DEGREE];
        for (i, &v) in j.coeffs.iter().enumerate() {
            if v >= self.q {
                return Err(Error::ForeignElement(format!(
                    "coefficient {v} not in [0, {})",
                    self.q
                )));
            }
            c[i] = v as u32;
        }
        Ok(RingElem(c))
    }

    /// The element with index `idx` in the canonical enumeration (base-`p^n`
    /// digits are the coefficients, constant term least significant).
    pub fn element_at(&self, mut idx: u64) -> RingElem {
        let mut c = [0u32; MAX_DEGREE];
        for ci in c.iter_mut().take(self.m) {
            *ci = (idx % self.q) as u32;
            idx /= self.q;
        }
        RingElem(c)
    }

    /// Inverse of [`GaloisRing::element_at`].
    pub fn index_of(&self, x: &RingElem) -> u64 {
        x.0[..self.m].iter().rev().fold(0, |acc, &c| acc * self.q + c as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.size()).map(move |i| self.element_at(i))
    }

    pub fn units(&self) -> impl Iterator<Item = RingElem> + '_ {
        self.elements().filter(move |x| self.is_unit(x))
    }

    /// Elements of the maximal ideal `pR`.
    pub fn maximal_ideal(&self) -> impl Iterator<Item = RingElem> + '_ {
        let small = self.p.pow((self.n - 1) * self.m as u32);
        let sub = if self.n > 1 { Some(self.with_precision(self.n - 1).unwrap()) } else { None };
        (0..small).map(move |i| match &sub {
            Some(s) => self.mul_int(&self.lift(s, &s.element_at(i)), self.p as i64),
            None => self.zero(),
        })
    }

    pub fn is_zero(&self, x: &RingElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &RingElem, y: &RingElem) -> RingElem {
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.m {
            c[i] = ((x.0[i] as u64 + y.0[i] as u64) % self.q) as u32;
        }
        RingElem(c)
    }

    pub fn neg(&self, x: &RingElem) -> RingElem {
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.m {
            c[i] = ((self.q - x.0[i] as u64) % self.q) as u32;
        }
        RingElem(c)
    }

    pub fn sub(&self, x: &RingElem, y: &RingElem) -> RingElem {
        self.add(x, &self.neg(y))
    }

    pub fn mul_int(&self, x: &RingElem, k: i64) -> RingElem {
        let k = k.rem_euclid(self.q as i64) as u64;
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.m {
            c[i] = ((x.0[i] as u64 * k) % self.q) as u32;
        }
        RingElem(c)
    }

    pub fn mul(&self, x: &RingElem, y: &RingElem) -> RingElem {
        let q = self.q;
        if self.m == 1 {
            let mut c = [0u32; MAX_DEGREE];
            c[0] = ((x.0[0] as u64 * y.0[0] as u64) % q) as u32;
            return RingElem(c);
        }
        let m = self.m;
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        // below 2^30 the m ≤ 8 partial products fit in u64 without reduction
        let lazy = q < 1 << 30;
        for i in 0..m {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..m {
                let t = x.0[i] as u64 * y.0[j] as u64;
                prod[i + j] = if lazy { prod[i + j] + t } else { (prod[i + j] + t % q) % q };
            }
        }
        // x^m = -(c_{m-1} x^{m-1} + ... + c_0)
        for d in (m..2 * m - 1).rev() {
            let top = prod[d] % q;
            if top == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..m {
                let t = (top * self.modulus[i]) % q;
                prod[d - m + i] = prod[d - m + i] % q + q - t;
            }
        }
        for v in prod.iter_mut().take(m) {
            *v %= q;
        }
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..m {
            c[i] = prod[i] as u32;
        }
        RingElem(c)
    }

    pub fn square(&self, x: &RingElem) -> RingElem {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &RingElem, mut e: u64) -> RingElem {
        let mut base = *x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Integer power, allowing negative exponents for units.
    pub fn pow_signed(&self, x: &RingElem, e: i64) -> Result<RingElem> {
        if e >= 0 {
            Ok(self.pow(x, e as u64))
        } else {
            Ok(self.pow(&self.invert(x)?, e.unsigned_abs()))
        }
    }

    /// Units are exactly the elements with nonzero reduction mod `p`.
    pub fn is_unit(&self, x: &RingElem) -> bool {
        x.0[..self.m].iter().any(|&c| !(c as u64).is_multiple_of(self.p))
    }

    pub fn invert(&self, u: &RingElem) -> Result<RingElem> {
        if !self.is_unit(u) {
            return Err(Error::NotAUnit);
        }
        // inverse mod p, then Newton v <- v(2 - uv) doubles the precision
        let mut v = self.pow(u, self.residue_size() - 2);
        let two = self.from_int(2);
        let mut prec = 1;
        while prec < self.n {
            v = self.mul(&v, &self.sub(&two, &self.mul(u, &v)));
            prec *= 2;
        }
        debug_assert_eq!(self.mul(u, &v), self.one());
        Ok(v)
    }

    /// Coefficientwise reduction to precision `n'`; returns the target ring
    /// alongside the image.
    pub fn reduce_precision(&self, x: &RingElem, n: u32) -> Result<(GaloisRing, RingElem)> {
        if n < 1 || n > self.n {
            return Err(Error::PrecisionOutOfRange { requested: n, max: self.n });
        }
        let target = self.with_precision(n)?;
        Ok((target.clone(), target.reduce_from(x)))
    }

    /// Reduces an element of a higher-precision ring with the same residue
    /// field into this ring.
    pub fn reduce_from(&self, x: &RingElem) -> RingElem {
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.m {
            c[i] = (x.0[i] as u64 % self.q) as u32;
        }
        RingElem(c)
    }

    pub fn residue(&self, x: &RingElem) -> RingElem {
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.m {
            c[i] = (x.0[i] as u64 % self.p) as u32;
        }
        RingElem(c)
    }

    /// Canonical (coefficientwise) lift of an element of a lower-precision
    /// ring `from` into this ring.
    pub fn lift(&self, from: &GaloisRing, x: &RingElem) -> RingElem {
        debug_assert_eq!(from.p, self.p);
        debug_assert_eq!(from.m, self.m);
        *x
    }

    /// Whether `x ≡ y mod p`.
    pub fn congruent_mod_p(&self, x: &RingElem, y: &RingElem) -> bool {
        self.residue(x) == self.residue(y)
    }

    /// The Teichmüller lift of a residue-field element: the unique `t ≡ x mod p`
    /// with `t^(p^m) = t`.
    pub fn teichmuller(&self, x: &RingElem) -> RingElem {
        let size = self.residue_size();
        let mut y = self.residue(x);
        if self.n == 1 {
            return y;
        }
        for _ in 0..=self.n {
            let next = self.pow(&y, size);
            if next == y {
                return y;
            }
            y = next;
        }
        unreachable!("Teichmüller iteration stabilizes within n steps")
    }

    /// Square roots of `r` in the residue field, by exhaustive search.
    pub fn residue_sqrts(&self, r: &RingElem) -> Vec<RingElem> {
        let k = self.residue_field();
        let r = k.reduce_from(r);
        k.elements().filter(|s| k.square(s) == r).collect()
    }

    /// The square root of `u` that reduces to `root` mod `p`, by Newton
    /// iteration. `root` must be a residue square root of `u`.
    pub fn sqrt_lifting(&self, u: &RingElem, root: &RingElem) -> Result<RingElem> {
        if !self.is_unit(u) {
            return Err(Error::NotAUnit);
        }
        let mut s = self.lift(&self.residue_field(), &self.residue(root));
        if self.residue(&self.square(&s)) != self.residue(u) {
            return Err(Error::NotASquare);
        }
        let two = self.from_int(2);
        for _ in 0..self.n {
            let err = self.sub(&self.square(&s), u);
            if self.is_zero(&err) {
                break;
            }
            let step = self.mul(&err, &self.invert(&self.mul(&two, &s))?);
            s = self.sub(&s, &step);
        }
        debug_assert_eq!(self.square(&s), *u);
        Ok(s)
    }

    /// A square root of the unit `u`. Of the two roots, the one with the
    /// lexicographically smallest coefficient vector is returned.
    pub fn sqrt_unit(&self, u: &RingElem) -> Result<RingElem> {
        if !self.is_unit(u) {
            return Err(Error::NotAUnit);
        }
        let roots = self.residue_sqrts(u);
        let r0 = roots.first().ok_or(Error::NotASquare)?;
        let s = self.sqrt_lifting(u, r0)?;
        Ok(s.min(self.neg(&s)))
    }

    /// Multiplicative order of a unit.
    pub fn unit_order(&self, u: &RingElem) -> Result<u64> {
        if !self.is_unit(u) {
            return Err(Error::NotAUnit);
        }
        let group = self.unit_count();
        let mut order = group;
        for f in prime_factors(group) {
            while order.is_multiple_of(f) && self.pow(u, order / f) == self.one() {
                order /= f;
            }
        }
        Ok(order)
    }

    /// The smallest residue-field element generating the multiplicative group.
    pub fn primitive_residue(&self) -> RingElem {
        let k = self.residue_field();
        let target = k.residue_size() - 1;
        let found = k
            .elements()
            .filter(|x| k.is_unit(x))
            .find(|x| k.unit_order(x).unwrap() == target);
        found.expect("finite field has a primitive element")
    }
}

pub fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            out.push(d);
            while x.is_multiple_of(d) {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// Remainder of `a` modulo the monic `b` over `F_p`; coefficient vectors are
/// low-degree first.
fn poly_rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - (lead * bc) % p) % p;
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn is_irreducible_mod_p(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        for idx in 0..p.pow(d as u32) {
            let mut f = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                f.push(t % p);
                t /= p;
            }
            f.push(1);
            if poly_rem_mod_p(poly, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u64, m: usize) -> [u64; MAX_DEGREE] {
    for idx in 0..p.pow(m as u32) {
        // c_{m-1} is the most significant digit
        let mut low = vec![0u64; m];
        let mut t = idx;
        for i in 0..m {
            low[i] = t % p;
            t /= p;
        }
        let mut poly = low.clone();
        poly.push(1);
        if is_irreducible_mod_p(&poly, p) {
            let mut out = [0u64; MAX_DEGREE];
            out[..m].copy_from_slice(&low);
            return out;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, n: u32) -> GaloisRing {
        GaloisRing::integers(p, n).unwrap()
    }

    #[test]
    fn teichmuller_examples() {
        let r9 = z(3, 2);
        assert_eq!(r9.teichmuller(&r9.one()), r9.one());
        assert_eq!(r9.teichmuller(&r9.from_int(2)), r9.from_int(8));
        let r25 = z(5, 2);
        assert_eq!(r25.teichmuller(&r25.from_int(2)), r25.from_int(7));
        assert_eq!(r25.teichmuller(&r25.zero()), r25.zero());
    }

    #[test]
    fn sqrt_examples() {
        let r = z(5, 2);
        assert_eq!(r.sqrt_unit(&r.one()).unwrap(), r.one());
        assert_eq!(r.sqrt_unit(&r.from_int(6)).unwrap(), r.from_int(9));
        assert_eq!(r.sqrt_unit(&r.from_int(2)), Err(Error::NotASquare));
        assert_eq!(r.sqrt_unit(&r.from_int(10)), Err(Error::NotAUnit));
    }

    #[test]
    fn reduce_examples() {
        let r9 = z(3, 2);
        let (f3, x) = r9.reduce_precision(&r9.from_int(8), 1).unwrap();
        assert_eq!(f3.n(), 1);
        assert_eq!(x, f3.from_int(2));
        let r25 = z(5, 2);
        assert_eq!(r25.reduce_precision(&r25.from_int(7), 1).unwrap().1, r25.from_int(2));
        assert_eq!(r25.reduce_precision(&r25.from_int(7), 2).unwrap().1, r25.from_int(7));
        let gr = GaloisRing::new(5, 2, 2).unwrap();
        let x = gr.from_coeffs(&[7, 13]).unwrap();
        let (f25, y) = gr.reduce_precision(&x, 1).unwrap();
        assert_eq!(f25.coeff_vec(&y), vec![2, 3]);
        assert!(matches!(
            r25.reduce_precision(&x, 3),
            Err(Error::PrecisionOutOfRange { requested: 3, max: 2 })
        ));
        assert!(r25.reduce_precision(&x, 0).is_err());
    }

    #[test]
    fn invert_examples() {
        let r9 = z(3, 2);
        assert_eq!(r9.invert(&r9.one()).unwrap(), r9.one());
        assert_eq!(r9.invert(&r9.from_int(2)).unwrap(), r9.from_int(5));
        assert_eq!(r9.invert(&r9.from_int(3)), Err(Error::NotAUnit));
    }

    #[test]
    fn modulus_choice() {
        assert_eq!(GaloisRing::new(3, 1, 2).unwrap().modulus_coeffs(), &[1, 0]);
        assert_eq!(GaloisRing::new(5, 1, 2).unwrap().modulus_coeffs(), &[2, 0]);
        assert_eq!(GaloisRing::new(7, 1, 1).unwrap().modulus_coeffs(), &[0]);
        let f8 = GaloisRing::new(3, 1, 3).unwrap();
        // x^3 + 2x + 1 is the first irreducible cubic over F_3 in this ordering
        assert_eq!(f8.modulus_coeffs(), &[1, 2, 0]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GaloisRing::new(2, 2, 1).is_err());
        assert!(GaloisRing::new(9, 1, 1).is_err());
        assert!(GaloisRing::new(5, 0, 1).is_err());
        assert!(GaloisRing::new(5, 1, 9).is_err());
    }

    #[test]
    fn counts_in_gr_9_2() {
        let r = GaloisRing::new(3, 2, 2).unwrap();
        assert_eq!(r.elements().count(), 81);
        assert_eq!(r.units().count() as u64, r.unit_count());
        assert_eq!(r.unit_count(), 9 * 8);
        assert_eq!(r.maximal_ideal().count(), 9);
        assert!(r.maximal_ideal().all(|x| !r.is_unit(&x)));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let r = GaloisRing::new(5, 2, 2).unwrap();
        let x = r.from_coeffs(&[7, 13]).unwrap();
        let j = r.elem_to_json(&x);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"p":5,"n":2,"m":2,"coeffs":[7,13]}"#);
        assert_eq!(r.elem_from_json(&j).unwrap(), x);
        let bad = ElemJson { coeffs: vec![25, 0], ..j.clone() };
        assert!(r.elem_from_json(&bad).is_err());
        let other = ElemJson { n: 1, ..j };
        assert!(r.elem_from_json(&other).is_err());
    }

    #[test]
    fn unit_orders() {
        let r = z(5, 2);
        assert_eq!(r.unit_order(&r.from_int(2)).unwrap(), 20);
        assert_eq!(r.unit_order(&r.from_int(7)).unwrap(), 4);
        assert_eq!(r.unit_order(&r.from_int(6)).unwrap(), 5);
        assert_eq!(r.primitive_residue(), r.residue_field().from_int(2));
    }
}
