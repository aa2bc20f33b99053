//! Short Weierstrass curves `y² = x³ + ax + b`: group law, j-invariants,
//! division polynomials and Frobenius-trace classification over `F_{p²}`.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ff::{Field, Fp2, QuadraticField};
use crate::poly::{Poly, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("singular curve: 4a³ + 27b² = 0")]
    Singular,
    #[error("Frobenius trace ambiguous after {samples} sample points (candidates {candidates:?})")]
    AmbiguousTrace { samples: usize, candidates: Vec<i64> },
}

/// `y² = x³ + ax + b` over a field context.
#[derive(Debug, Clone)]
pub struct Curve<F: Field> {
    field: F,
    a: F::Elem,
    b: F::Elem,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point<E> {
    Infinity,
    Affine(E, E),
}

impl<E> Point<E> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl<F: Field> Curve<F> {
    pub fn new(field: F, a: F::Elem, b: F::Elem) -> Result<Self, EcError> {
        let c = Curve { field, a, b };
        if c.field.is_zero(&c.discriminant_core()) {
            return Err(EcError::Singular);
        }
        Ok(c)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn a(&self) -> &F::Elem {
        &self.a
    }

    pub fn b(&self) -> &F::Elem {
        &self.b
    }

    // 4a³ + 27b²
    fn discriminant_core(&self) -> F::Elem {
        let f = &self.field;
        let a3 = f.mul(&f.square(&self.a), &self.a);
        f.add(
            &f.mul(&f.from_i64(4), &a3),
            &f.mul(&f.from_i64(27), &f.square(&self.b)),
        )
    }

    /// `j = 1728 · 4a³ / (4a³ + 27b²)`.
    pub fn j_invariant(&self) -> F::Elem {
        let f = &self.field;
        let a3 = f.mul(&f.square(&self.a), &self.a);
        let num = f.mul(&f.from_i64(1728 * 4), &a3);
        f.div(&num, &self.discriminant_core())
            .expect("curve is nonsingular")
    }

    /// `x³ + ax + b`.
    pub fn rhs(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let x2 = f.square(x);
        f.add(&f.mul(&f.add(&x2, &self.a), x), &self.b)
    }

    pub fn rhs_poly(&self) -> Poly<F::Elem> {
        let f = &self.field;
        PolyRing::new(f).from_coeffs(vec![self.b.clone(), self.a.clone(), f.zero(), f.one()])
    }

    pub fn contains(&self, p: &Point<F::Elem>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.field.square(y) == self.rhs(x),
        }
    }

    /// The same equation over a larger field.
    pub fn base_change<G: Field>(&self, field: G, map: impl Fn(&F::Elem) -> G::Elem) -> Curve<G> {
        Curve {
            a: map(&self.a),
            b: map(&self.b),
            field,
        }
    }

    pub fn neg(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), self.field.neg(y)),
        }
    }

    pub fn add(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Point<F::Elem> {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return Point::Infinity;
            }
            let num = f.add(&f.mul(&f.from_i64(3), &f.square(x1)), &self.a);
            f.div(&num, &f.add(y1, y1)).unwrap()
        } else {
            f.div(&f.sub(y2, y1), &f.sub(x2, x1)).unwrap()
        };
        let x3 = f.sub(&f.sub(&f.square(&lambda), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn double(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        self.add(p, p)
    }

    pub fn scalar_mul(&self, k: &BigInt, p: &Point<F::Elem>) -> Point<F::Elem> {
        let base = if k.is_negative() { self.neg(p) } else { p.clone() };
        let k = k.magnitude();
        let mut acc = Point::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.double(&acc);
            if k.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    /// A uniformly chosen x with a random choice of `±y`; retries until
    /// `x³ + ax + b` is a square.
    pub fn random_point(&self, rng: &mut dyn RngCore) -> Point<F::Elem> {
        let f = &self.field;
        loop {
            let x = f.random(rng);
            if let Some(y) = f.sqrt(&self.rhs(&x)) {
                let y = if rng.gen::<bool>() { f.neg(&y) } else { y };
                return Point::Affine(x, y);
            }
        }
    }

    /// The division polynomial `ψ_n` as a polynomial in `x`: for odd `n`
    /// its roots are the x-coordinates of `E[n] \ {O}`; for even `n` the
    /// factor `2y` is replaced by `2(x³ + ax + b)`, so `n = 2` gives the cubic.
    pub fn division_polynomial(&self, n: usize) -> Poly<F::Elem> {
        assert!(n >= 1);
        let ring = PolyRing::new(&self.field);
        let rr = PolyOps(ring);
        let fs = normalized_division_values(
            &rr,
            &ring.x(),
            &ring.constant(self.a.clone()),
            &ring.constant(self.b.clone()),
            n,
        );
        if n % 2 == 1 {
            fs[n].clone()
        } else {
            ring.mul(&fs[n], &self.rhs_poly())
        }
    }

    /// `x([k]P)` for `k = 1..=kmax`, given only `x = x(P)` with `P` of order
    /// greater than `kmax`.
    pub fn multiples_x(&self, x: &F::Elem, kmax: usize) -> Vec<F::Elem> {
        let f = &self.field;
        let fs = normalized_division_values(&FieldOps(f), x, &self.a, &self.b, kmax + 1);
        let four_rhs = f.mul(&f.from_i64(4), &self.rhs(x));
        (1..=kmax)
            .map(|k| {
                let num = f.mul(&fs[k - 1], &fs[k + 1]);
                let den = f.square(&fs[k]);
                let ratio = if k % 2 == 1 {
                    f.div(&f.mul(&four_rhs, &num), &den)
                } else {
                    f.div(&num, &f.mul(&four_rhs, &den))
                }
                .expect("point order exceeds kmax");
                f.sub(x, &ratio)
            })
            .collect()
    }
}

/// `j = 0 → y² = x³ + 1`, `j = 1728 → y² = x³ + x`, otherwise
/// `a = 3j(1728 − j)`, `b = 2j(1728 − j)²`.
pub fn curve_from_j<F: Field>(field: &F, j: &F::Elem) -> Curve<F> {
    let f = field;
    let (a, b) = if f.is_zero(j) {
        (f.zero(), f.one())
    } else if *j == f.from_i64(1728) {
        (f.one(), f.zero())
    } else {
        let c = f.sub(&f.from_i64(1728), j);
        let jc = f.mul(j, &c);
        (f.mul(&f.from_i64(3), &jc), f.mul(&f.from_i64(2), &f.mul(&jc, &c)))
    };
    Curve::new(field.clone(), a, b).expect("j-model is nonsingular")
}

/// Minimal commutative-ring interface so the division-polynomial recurrence
/// can run on polynomials and on field elements alike.
trait RingOps {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn int(&self, n: i64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

struct FieldOps<'a, F: Field>(&'a F);
struct PolyOps<'a, F: Field>(PolyRing<'a, F>);

impl<F: Field> RingOps for FieldOps<'_, F> {
    type E = F::Elem;
    fn zero(&self) -> F::Elem {
        self.0.zero()
    }
    fn one(&self) -> F::Elem {
        self.0.one()
    }
    fn int(&self, n: i64) -> F::Elem {
        self.0.from_i64(n)
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.add(a, b)
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.mul(a, b)
    }
}

impl<F: Field> RingOps for PolyOps<'_, F> {
    type E = Poly<F::Elem>;
    fn zero(&self) -> Self::E {
        self.0.zero()
    }
    fn one(&self) -> Self::E {
        self.0.one()
    }
    fn int(&self, n: i64) -> Self::E {
        self.0.constant(self.0.field().from_i64(n))
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.0.add(a, b)
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.0.mul(a, b)
    }
}

/// `f_0..=f_n` where `f_n = ψ_n` for odd `n` and `f_n = ψ_n / 2y` for even `n`,
/// so every `f_n` is a polynomial in `x` alone.
fn normalized_division_values<R: RingOps>(
    r: &R,
    x: &R::E,
    a: &R::E,
    b: &R::E,
    n: usize,
) -> Vec<R::E> {
    let x2 = r.mul(x, x);
    let x3 = r.mul(&x2, x);
    let a2 = r.mul(a, a);
    let big_f = r.add(&r.add(&x3, &r.mul(a, x)), b);
    let sixteen_f2 = r.mul(&r.int(16), &r.mul(&big_f, &big_f));

    let mut f = vec![r.zero(), r.one(), r.one()];
    // 3x⁴ + 6ax² + 12bx − a²
    let f3 = {
        let t = r.mul(&r.int(3), &r.mul(&x2, &x2));
        let t = r.add(&t, &r.mul(&r.int(6), &r.mul(a, &x2)));
        let t = r.add(&t, &r.mul(&r.int(12), &r.mul(b, x)));
        r.sub(&t, &a2)
    };
    f.push(f3);
    // 2(x⁶ + 5ax⁴ + 20bx³ − 5a²x² − 4abx − 8b² − a³)
    let f4 = {
        let x4 = r.mul(&x2, &x2);
        let t = r.mul(&x3, &x3);
        let t = r.add(&t, &r.mul(&r.int(5), &r.mul(a, &x4)));
        let t = r.add(&t, &r.mul(&r.int(20), &r.mul(b, &x3)));
        let t = r.sub(&t, &r.mul(&r.int(5), &r.mul(&a2, &x2)));
        let t = r.sub(&t, &r.mul(&r.int(4), &r.mul(&r.mul(a, b), x)));
        let t = r.sub(&t, &r.mul(&r.int(8), &r.mul(b, b)));
        let t = r.sub(&t, &r.mul(&a2, a));
        r.mul(&r.int(2), &t)
    };
    f.push(f4);
    let cube = |e: &R::E| r.mul(&r.mul(e, e), e);
    for k in 5..=n.max(4) {
        let m = k / 2;
        let next = if k % 2 == 1 {
            let lhs = r.mul(&f[m + 2], &cube(&f[m]));
            let rhs = r.mul(&f[m - 1], &cube(&f[m + 1]));
            if m % 2 == 0 {
                r.sub(&r.mul(&sixteen_f2, &lhs), &rhs)
            } else {
                r.sub(&lhs, &r.mul(&sixteen_f2, &rhs))
            }
        } else {
            let s1 = r.mul(&f[m + 2], &r.mul(&f[m - 1], &f[m - 1]));
            let s2 = r.mul(&f[m - 2], &r.mul(&f[m + 1], &f[m + 1]));
            r.mul(&f[m], &r.sub(&s1, &s2))
        };
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// Frobenius trace class over `F_{p²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceClass {
    Zero,
    PlusP,
    MinusP,
    Plus2P,
    Minus2P,
    Ordinary(i64),
}

impl TraceClass {
    pub fn is_supersingular(&self) -> bool {
        !matches!(self, TraceClass::Ordinary(_))
    }

    pub fn trace(&self, p: u64) -> i64 {
        let p = p as i64;
        match *self {
            TraceClass::Zero => 0,
            TraceClass::PlusP => p,
            TraceClass::MinusP => -p,
            TraceClass::Plus2P => 2 * p,
            TraceClass::Minus2P => -2 * p,
            TraceClass::Ordinary(t) => t,
        }
    }

    fn from_trace(t: i64, p: u64) -> Self {
        let p = p as i64;
        match t {
            0 => TraceClass::Zero,
            _ if t == p => TraceClass::PlusP,
            _ if t == -p => TraceClass::MinusP,
            _ if t == 2 * p => TraceClass::Plus2P,
            _ if t == -2 * p => TraceClass::Minus2P,
            _ => TraceClass::Ordinary(t),
        }
    }
}

/// Fields up to this size are point-counted exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Number of random points tested before the probabilistic branch gives up.
pub const TRACE_SAMPLES: usize = 20;

impl Curve<QuadraticField> {
    /// `#E(F_{p²})` by summing the quadratic character over all x.
    pub fn count_points(&self) -> u64 {
        let f = &self.field;
        let p = f.p();
        let mut is_sq = vec![false; p as usize];
        for y in 1..p {
            is_sq[((y * y) % p) as usize] = true;
        }
        let mut n: u64 = 1;
        for c1 in 0..p {
            for c0 in 0..p {
                let z = self.rhs(&Fp2 { c0, c1 });
                if f.is_zero(&z) {
                    n += 1;
                } else if is_sq[f.norm(&z) as usize] {
                    n += 2;
                }
            }
        }
        n
    }

    /// Exhaustive below [`EXHAUSTIVE_LIMIT`], probabilistic above it.
    pub fn trace_classify(&self, seed: u64) -> Result<TraceClass, EcError> {
        let p = self.field.p();
        if p.saturating_mul(p) <= EXHAUSTIVE_LIMIT {
            let t = (p * p + 1) as i64 - self.count_points() as i64;
            Ok(TraceClass::from_trace(t, p))
        } else {
            self.trace_classify_sampled(seed)
        }
    }

    /// Tests `[p² + 1 − t]P = O` for each supersingular `t` on random
    /// points; a unique survivor is returned, no survivor means ordinary.
    pub fn trace_classify_sampled(&self, seed: u64) -> Result<TraceClass, EcError> {
        let p = self.field.p();
        let pi = p as i64;
        let q1 = BigInt::from(p) * BigInt::from(p) + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ crate::poly::fnv_hash(
                self.field
                    .coeff_key(&self.a)
                    .into_iter()
                    .chain(self.field.coeff_key(&self.b)),
            ),
        );
        let mut alive: Vec<i64> = vec![0, pi, -pi, 2 * pi, -2 * pi];
        for _ in 0..TRACE_SAMPLES {
            let pt = self.random_point(&mut rng);
            alive.retain(|&t| self.scalar_mul(&(&q1 - t), &pt).is_infinity());
            if alive.is_empty() {
                return Ok(TraceClass::Ordinary(0));
            }
        }
        match alive.as_slice() {
            [t] => Ok(TraceClass::from_trace(*t, p)),
            _ => Err(EcError::AmbiguousTrace {
                samples: TRACE_SAMPLES,
                candidates: alive,
            }),
        }
    }

    pub fn is_supersingular(&self, seed: u64) -> Result<bool, EcError> {
        Ok(self.trace_classify(seed)?.is_supersingular())
    }
}
