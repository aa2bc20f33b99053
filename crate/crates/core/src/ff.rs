//! Finite fields of odd characteristic: `F_p`, the fixed quadratic extension
//! `F_{p²} = F_p[t]/(t² − ns)`, and extensions of any field by an
//! irreducible polynomial.
//!
//! Elements are plain values; every operation goes through the field
//! context, which is immutable once built.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer as _;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{is_prime_u64, jacobi};
use crate::poly::{Poly, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("extension modulus must be monic of degree >= 1")]
    BadModulus,
    #[error("extension modulus is reducible")]
    Reducible,
    #[error("operation requires a quadratic field context")]
    WrongContext,
}

/// A finite field context. Elements are values of [`Field::Elem`].
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn prime_degree(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// Flattened coefficients over `F_p`, lowest first. Used for canonical
    /// ordering and hashing.
    fn coeff_key(&self, a: &Self::Elem) -> Vec<u64>;
    fn format(&self, a: &Self::Elem) -> String;

    /// Number of elements.
    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.prime_degree())
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        self.pow(a, &BigUint::from(e))
    }

    /// Quadratic character: 0, 1 or −1.
    fn legendre(&self, a: &Self::Elem) -> i8 {
        if self.is_zero(a) {
            return 0;
        }
        let e = (self.order() - 1u32) >> 1;
        if self.is_one(&self.pow(a, &e)) {
            1
        } else {
            -1
        }
    }

    /// Square root by Tonelli–Shanks; the smaller of `±s` under
    /// [`Field::coeff_key`], or `None` for non-squares.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let q_minus_1 = self.order() - 1u32;
        let s = q_minus_1.trailing_zeros().unwrap_or(0);
        let m = &q_minus_1 >> s;
        // deterministic non-residue
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let z = loop {
            let c = self.random(&mut rng);
            if self.legendre(&c) == -1 {
                break c;
            }
        };
        let mut c = self.pow(&z, &m);
        let mut t = self.pow(a, &m);
        let mut r = self.pow(a, &((&m + 1u32) >> 1));
        let mut bits = s;
        while !self.is_one(&t) {
            let mut i = 0;
            let mut t2 = t.clone();
            while !self.is_one(&t2) {
                t2 = self.square(&t2);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(bits - i - 1) {
                b = self.square(&b);
            }
            bits = i;
            c = self.square(&b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        let neg = self.neg(&r);
        Some(if self.coeff_key(&neg) < self.coeff_key(&r) {
            neg
        } else {
            r
        })
    }

    /// Compare two elements canonically.
    fn cmp_elems(&self, a: &Self::Elem, b: &Self::Elem) -> std::cmp::Ordering {
        self.coeff_key(a).cmp(&self.coeff_key(b))
    }

    /// Every element, in index order. Only sensible for tiny fields.
    fn elements(&self) -> Vec<Self::Elem> {
        let q = self.order().to_u64().expect("field too large to enumerate");
        let p = self.characteristic() as i64;
        let d = self.prime_degree();
        let mut out = Vec::with_capacity(q as usize);
        let basis = self.prime_basis();
        for idx in 0..q {
            let mut rem = idx;
            let mut acc = self.zero();
            for k in 0..d as usize {
                let c = (rem % p as u64) as i64;
                rem /= p as u64;
                let term = self.mul(&self.from_i64(c), &basis[k]);
                acc = self.add(&acc, &term);
            }
            out.push(acc);
        }
        out
    }

    /// An `F_p`-basis matching the layout of [`Field::coeff_key`].
    fn prime_basis(&self) -> Vec<Self::Elem>;
}

fn reduce_i64(n: i64, p: u64) -> u64 {
    n.rem_euclid(p as i64) as u64
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        a * b % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    let g = (a as i128).extended_gcd(&(p as i128));
    Some(g.x.rem_euclid(p as i128) as u64)
}

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p % 2 == 0 || p >= 1 << 63 || !is_prime_u64(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn prime_degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        reduce_i64(n, self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        sub_mod(0, *a, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        inv_mod(*a, self.p).ok_or(FieldError::DivisionByZero)
    }
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn coeff_key(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn legendre(&self, a: &u64) -> i8 {
        jacobi(*a as i64, self.p)
    }
    fn prime_basis(&self) -> Vec<u64> {
        vec![1]
    }
}

/// Element `c0 + c1·t` of `F_{p²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2 {
    pub c0: u64,
    pub c1: u64,
}

/// `F_{p²} = F_p[t]/(t² − ns)` with `ns` the least quadratic non-residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    p: u64,
    ns: u64,
}

/// Build `F_{p²}` for an odd prime `p`.
pub fn make_quadratic_context(p: u64) -> Result<QuadraticField, FieldError> {
    QuadraticField::new(p)
}

impl QuadraticField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        let fp = PrimeField::new(p)?;
        let ns = (2..p)
            .find(|&n| fp.legendre(&n) == -1)
            .expect("odd prime has a non-residue");
        Ok(QuadraticField { p, ns })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The non-residue `ns = t²`.
    pub fn non_residue(&self) -> u64 {
        self.ns
    }

    pub fn prime_field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn elem(&self, c0: i64, c1: i64) -> Fp2 {
        Fp2 {
            c0: reduce_i64(c0, self.p),
            c1: reduce_i64(c1, self.p),
        }
    }

    /// The generator `t`.
    pub fn t(&self) -> Fp2 {
        Fp2 { c0: 0, c1: 1 }
    }

    /// `a^p`, computed as conjugation `c0 + c1 t ↦ c0 − c1 t`.
    pub fn frobenius_p(&self, a: &Fp2) -> Fp2 {
        Fp2 {
            c0: a.c0,
            c1: sub_mod(0, a.c1, self.p),
        }
    }

    pub fn is_in_prime_field(&self, a: &Fp2) -> bool {
        self.frobenius_p(a) == *a
    }

    /// `N(a) = a · a^p ∈ F_p`.
    pub fn norm(&self, a: &Fp2) -> u64 {
        let p = self.p;
        sub_mod(
            mul_mod(a.c0, a.c0, p),
            mul_mod(self.ns, mul_mod(a.c1, a.c1, p), p),
            p,
        )
    }

    /// Parse `"a"` or `"a+b*t"`.
    pub fn parse(&self, s: &str) -> Option<Fp2> {
        let s = s.trim();
        let (a, b) = match s.split_once('+') {
            Some((a, rest)) => (a, rest.strip_suffix("*t")?),
            None => (s, "0"),
        };
        let a: u64 = a.trim().parse().ok()?;
        let b: u64 = b.trim().parse().ok()?;
        (a < self.p && b < self.p).then_some(Fp2 { c0: a, c1: b })
    }
}

impl Field for QuadraticField {
    type Elem = Fp2;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn prime_degree(&self) -> u32 {
        2
    }
    fn zero(&self) -> Fp2 {
        Fp2 { c0: 0, c1: 0 }
    }
    fn one(&self) -> Fp2 {
        Fp2 { c0: 1, c1: 0 }
    }
    fn from_i64(&self, n: i64) -> Fp2 {
        Fp2 {
            c0: reduce_i64(n, self.p),
            c1: 0,
        }
    }
    fn is_zero(&self, a: &Fp2) -> bool {
        a.c0 == 0 && a.c1 == 0
    }
    fn add(&self, a: &Fp2, b: &Fp2) -> Fp2 {
        Fp2 {
            c0: add_mod(a.c0, b.c0, self.p),
            c1: add_mod(a.c1, b.c1, self.p),
        }
    }
    fn sub(&self, a: &Fp2, b: &Fp2) -> Fp2 {
        Fp2 {
            c0: sub_mod(a.c0, b.c0, self.p),
            c1: sub_mod(a.c1, b.c1, self.p),
        }
    }
    fn neg(&self, a: &Fp2) -> Fp2 {
        Fp2 {
            c0: sub_mod(0, a.c0, self.p),
            c1: sub_mod(0, a.c1, self.p),
        }
    }
    fn mul(&self, a: &Fp2, b: &Fp2) -> Fp2 {
        let p = self.p;
        let ac = mul_mod(a.c0, b.c0, p);
        let bd = mul_mod(a.c1, b.c1, p);
        let ad = mul_mod(a.c0, b.c1, p);
        let bc = mul_mod(a.c1, b.c0, p);
        Fp2 {
            c0: add_mod(ac, mul_mod(bd, self.ns, p), p),
            c1: add_mod(ad, bc, p),
        }
    }
    fn inv(&self, a: &Fp2) -> Result<Fp2, FieldError> {
        let n_inv = inv_mod(self.norm(a), self.p).ok_or(FieldError::DivisionByZero)?;
        let conj = self.frobenius_p(a);
        Ok(Fp2 {
            c0: mul_mod(conj.c0, n_inv, self.p),
            c1: mul_mod(conj.c1, n_inv, self.p),
        })
    }
    fn random(&self, rng: &mut dyn RngCore) -> Fp2 {
        Fp2 {
            c0: rng.gen_range(0..self.p),
            c1: rng.gen_range(0..self.p),
        }
    }
    fn coeff_key(&self, a: &Fp2) -> Vec<u64> {
        vec![a.c0, a.c1]
    }
    fn format(&self, a: &Fp2) -> String {
        if a.c1 == 0 {
            a.c0.to_string()
        } else {
            format!("{}+{}*t", a.c0, a.c1)
        }
    }
    // χ(a) = χ_p(N(a)) for the quadratic extension.
    fn legendre(&self, a: &Fp2) -> i8 {
        jacobi(self.norm(a) as i64, self.p)
    }
    fn prime_basis(&self) -> Vec<Fp2> {
        vec![self.one(), self.t()]
    }
}

/// `base[x]/(modulus)` for a monic irreducible `modulus`.
#[derive(Debug, Clone)]
pub struct ExtensionField<F: Field> {
    base: F,
    modulus: Arc<Poly<F::Elem>>,
}

impl<F: Field> PartialEq for ExtensionField<F>
where
    F: PartialEq,
{
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus
    }
}

impl<F: Field> ExtensionField<F> {
    /// Checks that `modulus` is monic and irreducible over `base`.
    pub fn new(base: F, modulus: Poly<F::Elem>) -> Result<Self, FieldError> {
        let ring = PolyRing::new(&base);
        match modulus.degree() {
            Some(d) if d >= 1 && base.is_one(modulus.leading().unwrap()) => {}
            _ => return Err(FieldError::BadModulus),
        }
        if !ring.is_irreducible(&modulus) {
            return Err(FieldError::Reducible);
        }
        Ok(Self::new_unchecked(base, modulus))
    }

    /// Skips the irreducibility test; the caller vouches for `modulus`.
    pub fn new_unchecked(base: F, modulus: Poly<F::Elem>) -> Self {
        ExtensionField {
            base,
            modulus: Arc::new(modulus),
        }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn modulus(&self) -> &Poly<F::Elem> {
        &self.modulus
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    /// The class of `x`.
    pub fn generator(&self) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.degree()];
        if self.degree() == 1 {
            // x ≡ −c0 when the modulus is linear
            v[0] = self.base.neg(&self.modulus.coeffs()[0]);
        } else {
            v[1] = self.base.one();
        }
        v
    }

    pub fn embed(&self, a: &F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.degree()];
        v[0] = a.clone();
        v
    }

    /// The base-field value of `a`, if `a` lies in the base field.
    pub fn to_base(&self, a: &[F::Elem]) -> Option<F::Elem> {
        a[1..]
            .iter()
            .all(|c| self.base.is_zero(c))
            .then(|| a[0].clone())
    }

    /// Reduce a base polynomial into the field (evaluation at the generator).
    pub fn from_poly(&self, f: &Poly<F::Elem>) -> Vec<F::Elem> {
        let ring = PolyRing::new(&self.base);
        let r = ring.rem(f, &self.modulus).expect("modulus nonzero");
        self.pad(r.into_coeffs())
    }

    pub fn to_poly(&self, a: &[F::Elem]) -> Poly<F::Elem> {
        PolyRing::new(&self.base).from_coeffs(a.to_vec())
    }

    /// The relative Frobenius `a ↦ a^{|base|}`.
    pub fn frobenius(&self, a: &[F::Elem]) -> Vec<F::Elem> {
        self.pow(&a.to_vec(), &self.base.order())
    }

    fn pad(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        v.resize(self.degree(), self.base.zero());
        v
    }
}

impl<F: Field> Field for ExtensionField<F> {
    type Elem = Vec<F::Elem>;

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn prime_degree(&self) -> u32 {
        self.base.prime_degree() * self.degree() as u32
    }
    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_i64(n))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.degree();
        let f = &self.base;
        let mut prod = vec![f.zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = f.mul(x, y);
                prod[i + j] = f.add(&prod[i + j], &t);
            }
        }
        // reduce by the monic modulus from the top
        let m = self.modulus.coeffs();
        for top in (n..prod.len()).rev() {
            let c = prod[top].clone();
            if f.is_zero(&c) {
                continue;
            }
            for k in 0..n {
                let t = f.mul(&c, &m[k]);
                prod[top - n + k] = f.sub(&prod[top - n + k], &t);
            }
        }
        prod.truncate(n);
        prod
    }
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        let ring = PolyRing::new(&self.base);
        let (g, s, _) = ring.ext_gcd(&self.to_poly(a), &self.modulus);
        // g is a nonzero constant since the modulus is irreducible
        let g0 = self.base.inv(&g.coeffs()[0])?;
        let s = ring.scale(&s, &g0);
        Ok(self.from_poly(&s))
    }
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem {
        (0..self.degree()).map(|_| self.base.random(rng)).collect()
    }
    fn coeff_key(&self, a: &Self::Elem) -> Vec<u64> {
        a.iter().flat_map(|c| self.base.coeff_key(c)).collect()
    }
    fn format(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(|(i, c)| match i {
                0 => format!("({})", self.base.format(c)),
                1 => format!("({})*x", self.base.format(c)),
                _ => format!("({})*x^{i}", self.base.format(c)),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
    fn prime_basis(&self) -> Vec<Self::Elem> {
        let base_basis = self.base.prime_basis();
        let mut out = Vec::new();
        for i in 0..self.degree() {
            for b in &base_basis {
                let mut v = self.zero();
                v[i] = b.clone();
                out.push(v);
            }
        }
        out
    }
}
