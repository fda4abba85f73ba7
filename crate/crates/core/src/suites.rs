//! Verification suites reproducing the computable claims: trace polynomials,
//! the large-image and cohomology lemma, the tame versal rings, the local
//! Euler characteristic and Teichmüller lifts.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coh::{
    h1_enumerated, h1_tame, h1_tame_via_quotient, quotient_invariants, solve_matrix_group, star_value,
    AdjointModule, TameAction, COCYCLE_CAP,
};
use crate::error::Result;
use crate::grp::{contains_sl2, gl2_generators, sl2_generators, unipotent_generators, FiniteMatrixGroup};
use crate::localdef::{check_case, classify_tame_case, enumerate_case, verify_presentation, VersalPresentation, LIFT_CAP};
use crate::mat::{h_poly, h_sequence, mat_pow_via_trace, Mat2};
use crate::ring::{is_prime, GaloisRing, RingElem};

/// `dim H¹(SL₂(F₅), Ad⁰)` as computed by the cocycle solver.
pub const H1_SL2_F5: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Hpoly,
    Lemma25,
    Prop23,
    Euler,
    Teich,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Euler, Suite::Hpoly, Suite::Lemma25, Suite::Prop23, Suite::Teich];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Hpoly => "hpoly",
            Suite::Lemma25 => "lemma25",
            Suite::Prop23 => "prop23",
            Suite::Euler => "euler",
            Suite::Teich => "teich",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn run(&self) -> SuiteResult {
        let start = Instant::now();
        let mut checks = Checks::default();
        match self {
            Suite::Hpoly => hpoly(&mut checks),
            Suite::Lemma25 => lemma25(&mut checks),
            Suite::Prop23 => prop23(&mut checks),
            Suite::Euler => euler(&mut checks),
            Suite::Teich => teich(&mut checks),
        }
        let passed = checks.0.iter().all(|c| c.passed);
        SuiteResult { suite: self.name().to_string(), checks: checks.0, passed, wall_time: start.elapsed() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Kept out of the JSON so that reports are byte-stable.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteResult {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(out, "{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
            if !c.passed {
                let _ = write!(out, ": expected {}, got {}", c.expected, c.actual);
            }
            out.push('\n');
        }
        let n = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(
            out,
            "suite {}: {} ({}/{} checks, {:.2}s)",
            self.suite,
            if self.passed { "PASS" } else { "FAIL" },
            n,
            self.checks.len(),
            self.wall_time.as_secs_f64()
        );
        out
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, expected: T, actual: T) {
        self.0.push(Check {
            name: name.into(),
            passed: expected == actual,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        });
    }

    fn ok<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, expected: T, actual: Result<T>) {
        match actual {
            Ok(v) => self.eq(name, expected, v),
            Err(e) => self.0.push(Check {
                name: name.into(),
                expected: format!("{expected:?}"),
                actual: format!("error: {e}"),
                passed: false,
            }),
        }
    }
}

/// A deterministic spread of `count` determinant-one matrices: the top row is
/// walked with two coprime strides and the bottom row solved for `det = 1`.
pub fn spread_sl2(ring: &GaloisRing, count: usize) -> Vec<Mat2> {
    let size = ring.size();
    let mut out = Vec::with_capacity(count);
    let mut i: u64 = 0;
    while out.len() < count {
        let a = ring.element_at((i * 7919 + 1) % size);
        let b = ring.element_at((i * 104_729 + 3) % size);
        let c = ring.element_at((i * 1_299_709 + 5) % size);
        i += 1;
        if let Ok(ainv) = ring.invert(&a) {
            let d = ring.mul(&ring.add(&ring.one(), &ring.mul(&b, &c)), &ainv);
            out.push(Mat2::new(a, b, c, d));
        }
    }
    out
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[BigInt], b: &[BigInt], sign: i32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        if sign < 0 {
            out[i] -= y;
        } else {
            out[i] += y;
        }
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

pub const HPOLY_MAX: usize = 50;

fn hpoly(c: &mut Checks) {
    let seq = h_sequence(HPOLY_MAX);
    let two = BigInt::from(2);
    for n in 1..=HPOLY_MAX {
        c.ok(format!("h_{n}(2) = {n}"), BigInt::from(n), h_poly(n).map(|h| h.eval_int(&two)));
    }
    let t = [BigInt::zero(), BigInt::one()];
    for n in 1..=HPOLY_MAX {
        let (h, h1) = (&seq[n], &seq[n - 1]);
        let lhs = poly_add(
            &poly_add(&poly_mul(h, h), &poly_mul(&poly_mul(&t, h), h1), -1),
            &poly_mul(h1, h1),
            1,
        );
        c.eq(format!("h_{n}^2 - T h_{n} h_{} + h_{}^2 = 1", n - 1, n - 1), vec![BigInt::one()], lhs);
    }
    let rings = [GaloisRing::integers(5, 2), GaloisRing::integers(3, 3), GaloisRing::new(3, 2, 2)];
    for ring in rings.into_iter().map(|r| r.expect("valid ring")) {
        for (j, m) in spread_sl2(&ring, 34).into_iter().enumerate() {
            let mut direct = ring.mat_identity();
            let mut bad = None;
            for n in 1..=HPOLY_MAX {
                direct = ring.mat_mul(&direct, &m);
                match mat_pow_via_trace(&ring, &m, n) {
                    Ok(x) if x == direct => {}
                    _ => {
                        bad = Some(n);
                        break;
                    }
                }
            }
            c.eq(
                format!("M^n = h_n(t)M - h_(n-1)(t)I, n <= {HPOLY_MAX}, matrix {j} over GR({}^{}, {})", ring.p(), ring.n(), ring.m()),
                None,
                bad,
            );
        }
    }
}

fn field(p: u64) -> GaloisRing {
    GaloisRing::integers(p, 1).expect("valid field")
}

/// Deterministic determinant-one lifts of the standard generators of
/// `SL₂(F_p)` to `Z/p²`, indexed by `seed`.
pub fn lifted_generators(ring: &GaloisRing, seed: u64) -> Vec<Mat2> {
    let p = ring.p() as i64;
    let base = [ring.mat(1, 1, 0, 1), ring.mat(1, 0, 1, 1)];
    base.iter()
        .enumerate()
        .map(|(j, g)| {
            let x = ((seed * 31 + j as u64 * 17) % ring.p()) as i64;
            let y = ((seed * 7 + j as u64 * 5 + 1) % ring.p()) as i64;
            // g · (I + p·[[x, y], [0, -x]]) has determinant 1 mod p²
            let e = ring.mat(1 + p * x, p * y, 0, 1 - p * x);
            ring.mat_mul(g, &e)
        })
        .collect()
}

fn lemma25(c: &mut Checks) {
    let f3 = field(3);
    let f5 = field(5);
    c.ok(
        "dim H1(SL2(F3), Ad0) = 0",
        0,
        h1_enumerated(&f3, &sl2_generators(&f3), &AdjointModule::new(&f3, 0), "SL2(F3)", COCYCLE_CAP).map(|s| s.h1),
    );
    c.ok(
        "dim H1(SL2(F5), Ad0) (solver value)",
        H1_SL2_F5,
        h1_enumerated(&f5, &sl2_generators(&f5), &AdjointModule::new(&f5, 0), "SL2(F5)", COCYCLE_CAP).map(|s| s.h1),
    );
    for i in 0..2 {
        c.ok(
            format!("dim H1(GL2(F5), Ad0({i})) = 0"),
            0,
            h1_enumerated(&f5, &gl2_generators(&f5), &AdjointModule::new(&f5, i), "GL2(F5)", COCYCLE_CAP).map(|s| s.h1),
        );
    }
    let u = unipotent_generators(&f5);
    let tau = f5.mat(3, 0, 0, 1);
    for i in 0..8 {
        let m = AdjointModule::new(&f5, i);
        let inv = solve_matrix_group(&f5, &u, &m, COCYCLE_CAP).and_then(|sol| quotient_invariants(&f5, &sol, &[tau], &m));
        let one_plus = f5.add(&f5.one(), &f5.pow(&f5.from_int(3), i as u64));
        c.ok(
            format!("dim H1(U, Ad0({i}))^(B/U) nonzero iff 1 + 3^{i} = 0"),
            f5.is_zero(&one_plus),
            inv.map(|d| d > 0),
        );
    }
    for i in 0..4 {
        let m = AdjointModule::new(&f5, i);
        let v = solve_matrix_group(&f5, &u, &m, COCYCLE_CAP).and_then(|sol| {
            let xi = m.coords(&f5.mat(0, 0, 1, 0))?;
            star_value(&f5, &sol, &xi, &tau, &u[0], &m)
        });
        let s = f5.pow(&f5.from_int(3), i as u64);
        let expected = f5.mat_scale(&s, &f5.mat(1, 2, -1, -1));
        c.ok(format!("(tau*xi)(sigma) = 3^{i} [[1, 2], [-1, -1]]"), expected, v);
    }
    for p in [3u64, 5] {
        let ring = GaloisRing::integers(p, 2).expect("valid ring");
        for seed in 0..4 {
            let mut gens = lifted_generators(&ring, seed);
            if p == 3 {
                gens.push(ring.mat(1, 1, 0, 1));
            }
            let r = FiniteMatrixGroup::closure(&ring, gens, 1_000_000).and_then(|mut g| contains_sl2(&mut g, 1_000_000));
            c.ok(format!("lifted generators {seed} generate a group containing SL2(Z/{})", p * p), true, r);
        }
    }
}

fn prop23(c: &mut Checks) {
    let ring = GaloisRing::integers(5, 2).expect("valid ring");
    for (q, alpha) in [(11u64, 2i64), (2, 1), (19, 1)] {
        let run = || -> Result<(String, bool, usize)> {
            let case = classify_tame_case(&ring, q, &ring.from_int(alpha))?;
            let lifts = enumerate_case(&ring, &case, LIFT_CAP)?;
            let chk = check_case(&ring, &case, &lifts);
            let pres = VersalPresentation::for_case(&case).expect("split case");
            let rep = verify_presentation(&pres, &lifts)?;
            let property = chk.diagonal_and_torsion.unwrap_or(true)
                && chk.t2_zero_and_st1_zero.unwrap_or(true)
                && chk.ideal_relations_hold.unwrap_or(true)
                && chk.t1t2_nonzero_with_s_or_t2 == 0;
            Ok((case.case.to_string(), property && rep.bijective, rep.classes))
        };
        let expected_case = match q {
            11 => "I",
            2 => "II",
            _ => "III",
        };
        match run() {
            Ok((case, ok, classes)) => {
                c.eq(format!("(q, alpha) = ({q}, {alpha}) classified"), expected_case.to_string(), case);
                c.eq(
                    format!("(q, alpha) = ({q}, {alpha}): class properties and presentation bijection ({classes} classes)"),
                    true,
                    ok,
                );
            }
            Err(e) => c.0.push(Check {
                name: format!("(q, alpha) = ({q}, {alpha})"),
                expected: "completed".into(),
                actual: format!("error: {e}"),
                passed: false,
            }),
        }
    }
}

/// Deterministic tame local actions on `Ad⁰(i)` over `F_p`: trivial inertia
/// with assorted Frobenius, unipotent inertia normalized by a Borel Frobenius,
/// and split semisimple inertia.
pub fn euler_instances(p: u64) -> Vec<TameAction> {
    let k = field(p);
    let mut out = Vec::new();
    let qs: Vec<u64> = (2..60).filter(|&q| is_prime(q) && q != p).collect();
    for (j, &q) in qs.iter().enumerate() {
        let i = (j as i64) % (p as i64 - 1);
        let x = 1 + (j as i64 % (p as i64 - 1));
        let y = j as i64 % p as i64;
        let qq = (q % p) as i64;
        let candidates = [
            (k.mat(x, y, 0, 1), k.mat_identity()),
            (k.mat(qq * x, y, 0, x), k.mat(1, 1, 0, 1)),
            (k.mat(x, 0, 0, 1), k.mat(x, 0, 0, 1)),
            (k.mat(0, 1, 1, 0), k.mat(x, 0, 0, 1)),
        ];
        for (sigma, tau) in candidates {
            if let Ok(a) = TameAction::adjoint(&k, q, &sigma, &tau, i) {
                out.push(a);
            }
        }
    }
    out
}

fn euler(c: &mut Checks) {
    for p in [3u64, 5] {
        for (j, a) in euler_instances(p).into_iter().enumerate() {
            let h1 = h1_tame(&a).h1;
            let dual = a.dual().map(|d| d.h0());
            c.ok(format!("p = {p}, q = {}, instance {j}: h1 = h0(M) + h0(M*(1))", a.q), h1, dual.map(|d| a.h0() + d));
            if j % 4 == 0 {
                c.ok(
                    format!("p = {p}, q = {}, instance {j}: finite quotient agrees", a.q),
                    h1,
                    h1_tame_via_quotient(&a, 200_000).map(|s| s.h1),
                );
            }
        }
    }
}

/// Rings `GR(p^n, m)` with `p^{nm} ≤ 10⁴`.
pub fn small_rings() -> Vec<GaloisRing> {
    let mut out = Vec::new();
    for p in (3..=10_000u64).filter(|&p| is_prime(p)) {
        for m in 1..=crate::ring::MAX_DEGREE {
            for n in 1..=13u32 {
                if (p as f64).powi((n as i32) * (m as i32)) > 1e4 {
                    break;
                }
                if let Ok(r) = GaloisRing::new(p, n, m) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Residue fields up to this size are checked on every pair.
pub const PAIRWISE_LIMIT: u64 = 400;

/// `T(xy) = T(x)T(y)` for all residues, given the table of lifts in residue
/// index order. Large fields use cyclicity: if the powers of a primitive `g`
/// run through every unit once and `T(g^a) = T(g)^a` for all `a`, then
/// `T(g^a g^b) = T(g)^{a+b} = T(g^a)T(g^b)`.
pub fn teichmuller_multiplicative(ring: &GaloisRing, lifts: &[RingElem]) -> bool {
    let k = ring.residue_field();
    let size = k.residue_size();
    if lifts[0] != ring.zero() {
        return false;
    }
    if size <= PAIRWISE_LIMIT {
        let residues: Vec<_> = k.elements().collect();
        return lifts.iter().zip(&residues).enumerate().all(|(i, (x, xr))| {
            lifts.iter().zip(&residues).skip(i).all(|(y, yr)| lifts[k.index_of(&k.mul(xr, yr)) as usize] == ring.mul(x, y))
        });
    }
    let g = k.primitive_residue();
    let tg = lifts[k.index_of(&g) as usize];
    let mut seen = vec![false; size as usize];
    let (mut x, mut tx) = (k.one(), ring.one());
    for _ in 0..size - 1 {
        let i = k.index_of(&x) as usize;
        if seen[i] || lifts[i] != tx {
            return false;
        }
        seen[i] = true;
        x = k.mul(&x, &g);
        tx = ring.mul(&tx, &tg);
    }
    x == k.one() && seen.iter().skip(1).all(|&b| b)
}

fn teich(c: &mut Checks) {
    for ring in small_rings() {
        let k = ring.residue_field();
        let name = format!("GR({}^{}, {})", ring.p(), ring.n(), ring.m());
        let lifts: Vec<_> = k.elements().map(|x| ring.teichmuller(&ring.lift(&k, &x))).collect();
        let size = ring.residue_size();
        let is_fixed: Vec<bool> = ring.elements().map(|x| ring.pow(&x, size) == x).collect();
        let fixed = lifts
            .iter()
            .zip(k.elements())
            .all(|(t, x)| is_fixed[ring.index_of(t) as usize] && ring.residue(t) == ring.residue(&ring.lift(&k, &x)));
        c.eq(format!("{name}: Teichmuller lifts are fixed by x -> x^(p^m) and reduce correctly"), true, fixed);
        c.eq(format!("{name}: Teichmuller lift is multiplicative"), true, teichmuller_multiplicative(&ring, &lifts));
        let fixed_points = is_fixed.iter().filter(|&&b| b).count() as u64;
        c.eq(format!("{name}: x^(p^m) = x has exactly p^m solutions"), size, fixed_points);
    }
    let z25 = GaloisRing::integers(5, 2).expect("valid ring");
    c.eq("T(2) in Z/25".to_string(), z25.from_int(7), z25.teichmuller(&z25.from_int(2)));
    c.ok("sqrt(6) in Z/25".to_string(), z25.from_int(9), z25.sqrt_unit(&z25.from_int(6)));
    for (p, n) in [(5u64, 2u32), (3, 3)] {
        let ring = GaloisRing::integers(p, n).expect("valid ring");
        let ok = ring.units().all(|u| {
            let sq = ring.square(&u);
            ring.sqrt_unit(&sq).map(|s| ring.square(&s) == sq && (s == u || s == ring.neg(&u))).unwrap_or(false)
        });
        c.eq(format!("sqrt on every unit square of Z/{}", p.pow(n)), true, ok);
    }
}
