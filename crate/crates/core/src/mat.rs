//! 2×2 matrices over Galois rings, the trace polynomials `h_n`, and the
//! triangularization search used for ordinarity checks.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{ElemJson, GaloisRing, RingElem};

/// A 2×2 matrix `[[a, b], [c, d]]`. Ordering is lexicographic in row-major
/// entry order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: RingElem,
    pub b: RingElem,
    pub c: RingElem,
    pub d: RingElem,
}

/// Row-major 4-vector of serialized entries.
pub type Mat2Json = [ElemJson; 4];

impl Mat2 {
    pub fn new(a: RingElem, b: RingElem, c: RingElem, d: RingElem) -> Self {
        Mat2 { a, b, c, d }
    }
}

impl GaloisRing {
    pub fn mat(&self, a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::new(self.from_int(a), self.from_int(b), self.from_int(c), self.from_int(d))
    }

    pub fn mat_identity(&self) -> Mat2 {
        self.mat(1, 0, 0, 1)
    }

    pub fn mat_scalar(&self, s: &RingElem) -> Mat2 {
        Mat2::new(*s, self.zero(), self.zero(), *s)
    }

    pub fn mat_diag(&self, x: &RingElem, y: &RingElem) -> Mat2 {
        Mat2::new(*x, self.zero(), self.zero(), *y)
    }

    pub fn mat_mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let e = |p: &RingElem, q: &RingElem, r: &RingElem, s: &RingElem| {
            self.add(&self.mul(p, q), &self.mul(r, s))
        };
        Mat2 {
            a: e(&x.a, &y.a, &x.b, &y.c),
            b: e(&x.a, &y.b, &x.b, &y.d),
            c: e(&x.c, &y.a, &x.d, &y.c),
            d: e(&x.c, &y.b, &x.d, &y.d),
        }
    }

    pub fn mat_add(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.add(&x.a, &y.a),
            b: self.add(&x.b, &y.b),
            c: self.add(&x.c, &y.c),
            d: self.add(&x.d, &y.d),
        }
    }

    pub fn mat_sub(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.sub(&x.a, &y.a),
            b: self.sub(&x.b, &y.b),
            c: self.sub(&x.c, &y.c),
            d: self.sub(&x.d, &y.d),
        }
    }

    pub fn mat_scale(&self, s: &RingElem, x: &Mat2) -> Mat2 {
        Mat2 {
            a: self.mul(s, &x.a),
            b: self.mul(s, &x.b),
            c: self.mul(s, &x.c),
            d: self.mul(s, &x.d),
        }
    }

    pub fn mat_det(&self, x: &Mat2) -> RingElem {
        self.sub(&self.mul(&x.a, &x.d), &self.mul(&x.b, &x.c))
    }

    pub fn mat_trace(&self, x: &Mat2) -> RingElem {
        self.add(&x.a, &x.d)
    }

    pub fn mat_is_invertible(&self, x: &Mat2) -> bool {
        self.is_unit(&self.mat_det(x))
    }

    pub fn mat_inv(&self, x: &Mat2) -> Result<Mat2> {
        let di = self.invert(&self.mat_det(x))?;
        Ok(Mat2 {
            a: self.mul(&di, &x.d),
            b: self.mul(&di, &self.neg(&x.b)),
            c: self.mul(&di, &self.neg(&x.c)),
            d: self.mul(&di, &x.a),
        })
    }

    pub fn mat_pow(&self, x: &Mat2, mut e: u64) -> Mat2 {
        let mut base = *x;
        let mut acc = self.mat_identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &base);
            }
            base = self.mat_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `c⁻¹ x c`.
    pub fn mat_conjugate(&self, x: &Mat2, c: &Mat2) -> Result<Mat2> {
        Ok(self.mat_mul(&self.mat_mul(&self.mat_inv(c)?, x), c))
    }

    pub fn mat_apply(&self, x: &Mat2, v: &(RingElem, RingElem)) -> (RingElem, RingElem) {
        (
            self.add(&self.mul(&x.a, &v.0), &self.mul(&x.b, &v.1)),
            self.add(&self.mul(&x.c, &v.0), &self.mul(&x.d, &v.1)),
        )
    }

    /// Coefficientwise image in this ring of a matrix over a ring with the
    /// same residue field and at least this precision.
    pub fn mat_reduce_from(&self, x: &Mat2) -> Mat2 {
        Mat2 {
            a: self.reduce_from(&x.a),
            b: self.reduce_from(&x.b),
            c: self.reduce_from(&x.c),
            d: self.reduce_from(&x.d),
        }
    }

    pub fn mat_residue(&self, x: &Mat2) -> Mat2 {
        self.residue_field().mat_reduce_from(x)
    }

    /// Whether `x` is scalar modulo `p`.
    pub fn mat_is_scalar_mod_p(&self, x: &Mat2) -> bool {
        let r = self.mat_residue(x);
        r.b == r.c && self.is_zero(&r.b) && r.a == r.d
    }

    pub fn mat_to_json(&self, x: &Mat2) -> Mat2Json {
        [
            self.elem_to_json(&x.a),
            self.elem_to_json(&x.b),
            self.elem_to_json(&x.c),
            self.elem_to_json(&x.d),
        ]
    }

    pub fn mat_from_json(&self, j: &Mat2Json) -> Result<Mat2> {
        Ok(Mat2 {
            a: self.elem_from_json(&j[0])?,
            b: self.elem_from_json(&j[1])?,
            c: self.elem_from_json(&j[2])?,
            d: self.elem_from_json(&j[3])?,
        })
    }

    pub fn mat_display(&self, x: &Mat2) -> String {
        let f = |e: &RingElem| {
            let v = self.coeff_vec(e);
            if v.len() == 1 {
                v[0].to_string()
            } else {
                format!("{v:?}")
            }
        };
        format!("[[{}, {}], [{}, {}]]", f(&x.a), f(&x.b), f(&x.c), f(&x.d))
    }

    /// Every matrix over this ring reducing to `residual` mod `p`.
    pub fn mat_lifts(&self, residual: &Mat2) -> Vec<Mat2> {
        let ideal: Vec<RingElem> = self.maximal_ideal().collect();
        let base = *residual;
        let mut out = Vec::with_capacity(ideal.len().pow(4));
        for da in &ideal {
            for db in &ideal {
                for dc in &ideal {
                    for dd in &ideal {
                        out.push(Mat2 {
                            a: self.add(&base.a, da),
                            b: self.add(&base.b, db),
                            c: self.add(&base.c, dc),
                            d: self.add(&base.d, dd),
                        });
                    }
                }
            }
        }
        out
    }
}

/// The trace polynomial `h_n(T) ∈ Z[T]`, defined by `h_1 = 1`, `h_2 = T`,
/// `h_{n+2} = T h_{n+1} - h_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly {
    index: usize,
    coeffs: Vec<BigInt>,
}

impl HPoly {
    pub fn index(&self) -> usize {
        self.index
    }

    /// Coefficients, constant term first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_ring(&self, ring: &GaloisRing, t: &RingElem) -> RingElem {
        let q = BigInt::from(ring.modulus_int());
        self.coeffs.iter().rev().fold(ring.zero(), |acc, c| {
            let c = ((c % &q) + &q) % &q;
            let c: i64 = c.try_into().expect("reduced coefficient fits");
            ring.add(&ring.mul(&acc, t), &ring.from_int(c))
        })
    }
}

/// `[h_0, h_1, ..., h_n]` with `h_0 = 0` (the value forced by running the
/// recursion backwards).
pub fn h_sequence(n: usize) -> Vec<Vec<BigInt>> {
    let mut seq: Vec<Vec<BigInt>> = vec![vec![], vec![BigInt::one()]];
    while seq.len() <= n {
        let k = seq.len();
        let prev = &seq[k - 1];
        let prev2 = &seq[k - 2];
        let mut next = vec![BigInt::zero(); prev.len() + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev2.iter().enumerate() {
            next[i] -= c;
        }
        while next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        seq.push(next);
    }
    seq.truncate(n + 1);
    seq
}

pub fn h_poly(n: usize) -> Result<HPoly> {
    if n < 1 {
        return Err(Error::IndexOutOfRange(n));
    }
    let coeffs = h_sequence(n).pop().unwrap();
    Ok(HPoly { index: n, coeffs })
}

/// `h_n(T)` evaluated in the ring, with `h_0 = 0`.
pub fn h_eval(ring: &GaloisRing, n: usize, t: &RingElem) -> RingElem {
    if n == 0 {
        return ring.zero();
    }
    h_poly(n).unwrap().eval_ring(ring, t)
}

/// `M^n` computed as `h_n(t) M - h_{n-1}(t) I` for `det M = 1`.
pub fn mat_pow_via_trace(ring: &GaloisRing, m: &Mat2, n: usize) -> Result<Mat2> {
    if ring.mat_det(m) != ring.one() {
        return Err(Error::DeterminantNotOne);
    }
    if n < 1 {
        return Err(Error::IndexOutOfRange(n));
    }
    let t = ring.mat_trace(m);
    let hn = h_eval(ring, n, &t);
    let hn1 = h_eval(ring, n - 1, &t);
    Ok(ring.mat_sub(&ring.mat_scale(&hn, m), &ring.mat_scalar(&hn1)))
}

/// One generator of a local image together with the characters that should
/// appear on the diagonal after triangularization.
#[derive(Clone, Debug)]
pub struct TriangularTarget {
    pub label: String,
    pub matrix: Mat2,
    pub upper: RingElem,
    pub lower: RingElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrdinaryForm {
    /// `C⁻¹ ρ(g) C` is upper triangular with the prescribed diagonal for every
    /// generator.
    Found { conjugator: Mat2, diagonals: Vec<(RingElem, RingElem)> },
    Failure { reason: String },
}

impl OrdinaryForm {
    pub fn is_found(&self) -> bool {
        matches!(self, OrdinaryForm::Found { .. })
    }
}

/// Representatives of the free rank-one direct summands of `R²`: `(1, y)` for
/// every `y`, and `(x, 1)` for `x` in the maximal ideal.
pub fn projective_line(ring: &GaloisRing) -> Vec<(RingElem, RingElem)> {
    let mut out: Vec<_> = ring.elements().map(|y| (ring.one(), y)).collect();
    out.extend(ring.maximal_ideal().map(|x| (x, ring.one())));
    out
}

/// A second basis vector completing a line representative.
fn complement(ring: &GaloisRing, v: &(RingElem, RingElem)) -> (RingElem, RingElem) {
    if v.0 == ring.one() {
        (ring.zero(), ring.one())
    } else {
        (ring.one(), ring.zero())
    }
}

fn columns(v: &(RingElem, RingElem), w: &(RingElem, RingElem)) -> Mat2 {
    Mat2::new(v.0, w.0, v.1, w.1)
}

fn is_eigenline(ring: &GaloisRing, m: &Mat2, v: &(RingElem, RingElem), lambda: &RingElem) -> bool {
    let image = ring.mat_apply(m, v);
    image.0 == ring.mul(lambda, &v.0) && image.1 == ring.mul(lambda, &v.1)
}

fn check_invertible(ring: &GaloisRing, gens: &[TriangularTarget]) -> Result<()> {
    for g in gens {
        if !ring.mat_is_invertible(&g.matrix) {
            return Err(Error::InvalidRepresentation(format!(
                "image of {} is not invertible",
                g.label
            )));
        }
    }
    Ok(())
}

/// Searches for a basis in which every generator is upper triangular with the
/// prescribed diagonal. Conjugation is by arbitrary invertible matrices.
pub fn ordinary_form(ring: &GaloisRing, gens: &[TriangularTarget]) -> Result<OrdinaryForm> {
    check_invertible(ring, gens)?;
    let mut closest: Option<String> = None;
    for v in projective_line(ring) {
        if !gens.iter().all(|g| is_eigenline(ring, &g.matrix, &v, &g.upper)) {
            continue;
        }
        let c = columns(&v, &complement(ring, &v));
        let conj: Vec<Mat2> =
            gens.iter().map(|g| ring.mat_conjugate(&g.matrix, &c)).collect::<Result<_>>()?;
        if let Some((g, _)) = gens.iter().zip(&conj).find(|(g, x)| x.d != g.lower) {
            closest.get_or_insert_with(|| format!("lower diagonal entry of {} does not match", g.label));
            continue;
        }
        debug_assert!(conj.iter().all(|x| ring.is_zero(&x.c)));
        return Ok(OrdinaryForm::Found {
            conjugator: c,
            diagonals: conj.iter().map(|x| (x.a, x.d)).collect(),
        });
    }
    Ok(OrdinaryForm::Failure {
        reason: closest
            .unwrap_or_else(|| "no common eigenline carrying the upper character".to_string()),
    })
}

/// Searches for a basis in which every generator is diagonal with the
/// prescribed entries.
pub fn split_form(ring: &GaloisRing, gens: &[TriangularTarget]) -> Result<OrdinaryForm> {
    check_invertible(ring, gens)?;
    let line = projective_line(ring);
    let firsts: Vec<_> = line
        .iter()
        .filter(|v| gens.iter().all(|g| is_eigenline(ring, &g.matrix, v, &g.upper)))
        .collect();
    let seconds: Vec<_> = line
        .iter()
        .filter(|v| gens.iter().all(|g| is_eigenline(ring, &g.matrix, v, &g.lower)))
        .collect();
    for v in &firsts {
        for w in &seconds {
            let c = columns(v, w);
            if ring.mat_is_invertible(&c) {
                let diagonals = gens.iter().map(|g| (g.upper, g.lower)).collect();
                return Ok(OrdinaryForm::Found { conjugator: c, diagonals });
            }
        }
    }
    Ok(OrdinaryForm::Failure {
        reason: format!(
            "no splitting: {} candidate lines for the first character, {} for the second",
            firsts.len(),
            seconds.len()
        ),
    })
}
