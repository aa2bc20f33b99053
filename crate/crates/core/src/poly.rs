//! Dense univariate polynomials over a [`Field`], with factorization
//! (squarefree, distinct-degree, Cantor–Zassenhaus equal-degree splitting)
//! and root finding.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ff::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Coefficients in ascending degree; the zero polynomial is empty and the
/// leading coefficient is never zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// Polynomial arithmetic over a borrowed field context.
#[derive(Debug)]
pub struct PolyRing<'a, F: Field> {
    field: &'a F,
}

impl<F: Field> Clone for PolyRing<'_, F> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<F: Field> Copy for PolyRing<'_, F> {}

// FNV-1a over coefficient keys; stable across runs and toolchains.
pub fn fnv_hash(words: impl Iterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl<'a, F: Field> PolyRing<'a, F> {
    pub fn new(field: &'a F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &'a F {
        self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(&self, coeffs: &[i64]) -> Poly<F::Elem> {
        self.from_coeffs(coeffs.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn x(&self) -> Poly<F::Elem> {
        Poly {
            coeffs: vec![self.field.zero(), self.field.one()],
        }
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `x − r`.
    pub fn linear(&self, root: &F::Elem) -> Poly<F::Elem> {
        Poly {
            coeffs: vec![self.field.neg(root), self.field.one()],
        }
    }

    pub fn is_one(&self, f: &Poly<F::Elem>) -> bool {
        f.coeffs.len() == 1 && self.field.is_one(&f.coeffs[0])
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = f.zero();
        let v = (0..n)
            .map(|i| {
                f.add(
                    a.coeffs.get(i).unwrap_or(&zero),
                    b.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        self.from_coeffs(v)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let f = self.field;
        let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = f.mul(x, y);
                out[i + j] = f.add(&out[i + j], &t);
            }
        }
        self.from_coeffs(out)
    }

    pub fn pow(&self, a: &Poly<F::Elem>, e: u32) -> Poly<F::Elem> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn divrem(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> Result<(Poly<F::Elem>, Poly<F::Elem>), PolyError> {
        let db = b.degree().ok_or(PolyError::DivisionByZero)?;
        let f = self.field;
        let Some(da) = a.degree() else {
            return Ok((self.zero(), self.zero()));
        };
        if da < db {
            return Ok((self.zero(), a.clone()));
        }
        let lead_inv = f.inv(b.leading().unwrap()).expect("nonzero leading coefficient");
        let mut rem = a.coeffs.clone();
        let mut quot = vec![f.zero(); da - db + 1];
        for top in (db..=da).rev() {
            let c = f.mul(&rem[top], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (k, bk) in b.coeffs.iter().enumerate() {
                let t = f.mul(&c, bk);
                rem[top - db + k] = f.sub(&rem[top - db + k], &t);
            }
            quot[top - db] = c;
        }
        rem.truncate(db);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>, PolyError> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Exact quotient; panics if `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (q, r) = self.divrem(a, b).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, b: &Poly<F::Elem>, a: &Poly<F::Elem>) -> bool {
        self.rem(a, b).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading() {
            None => self.zero(),
            Some(l) => self.scale(a, &self.field.inv(l).unwrap()),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).unwrap();
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `g = s·a + t·b` monic.
    pub fn ext_gcd(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).unwrap();
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = self.field.inv(l).unwrap();
                (self.scale(&r0, &li), self.scale(&s0, &li), self.scale(&t0, &li))
            }
        }
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = self.field;
        self.from_coeffs(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let f = self.field;
        a.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `base^e mod m`.
    pub fn powmod(
        &self,
        base: &Poly<F::Elem>,
        e: &BigUint,
        m: &Poly<F::Elem>,
    ) -> Result<Poly<F::Elem>, PolyError> {
        let base = self.rem(base, m)?;
        let mut acc = self.rem(&self.one(), m)?;
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m)?;
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), m)?;
            }
        }
        Ok(acc)
    }

    /// `g(h) mod m`, by Horner.
    pub fn compose_mod(
        &self,
        g: &Poly<F::Elem>,
        h: &Poly<F::Elem>,
        m: &Poly<F::Elem>,
    ) -> Poly<F::Elem> {
        let mut acc = self.zero();
        for c in g.coeffs.iter().rev() {
            acc = self.rem(&self.mul(&acc, h), m).unwrap();
            acc = self.add(&acc, &self.constant(c.clone()));
        }
        self.rem(&acc, m).unwrap()
    }

    fn key(&self, a: &Poly<F::Elem>) -> (usize, Vec<Vec<u64>>) {
        (
            a.coeffs.len(),
            a.coeffs.iter().map(|c| self.field.coeff_key(c)).collect(),
        )
    }

    /// Canonical ordering: by degree, then coefficient keys from the constant term up.
    pub fn cmp_polys(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> std::cmp::Ordering {
        self.key(a).cmp(&self.key(b))
    }

    fn rng_for(&self, f: &Poly<F::Elem>, seed: u64) -> ChaCha8Rng {
        let h = fnv_hash(f.coeffs.iter().flat_map(|c| self.field.coeff_key(c)));
        ChaCha8Rng::seed_from_u64(seed ^ h)
    }

    /// `p`-th root of a polynomial all of whose exponents are multiples of `p`.
    fn pth_root(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = self.field;
        let p = f.characteristic() as usize;
        // c^(q/p) is the inverse of the p-power Frobenius on coefficients
        let e = f.order() / BigUint::from(p as u64);
        self.from_coeffs(
            a.coeffs
                .iter()
                .step_by(p)
                .map(|c| f.pow(c, &e))
                .collect(),
        )
    }

    /// Squarefree decomposition: monic squarefree `(g, m)` with `a = lc·∏ g^m`.
    pub fn squarefree(&self, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
        let a = self.monic(a);
        if a.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut c = self.gcd(&a, &self.derivative(&a));
        let mut w = self.div_exact(&a, &c);
        let mut i = 1;
        while !self.is_one(&w) {
            let y = self.gcd(&w, &c);
            let fac = self.div_exact(&w, &y);
            if !self.is_one(&fac) {
                out.push((fac, i));
            }
            w = y;
            c = self.div_exact(&c, &w);
            i += 1;
        }
        if !self.is_one(&c) {
            let p = self.field.characteristic() as usize;
            for (g, m) in self.squarefree(&self.pth_root(&c)) {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// `(g_d, d)` where `g_d` is the product of all degree-`d` irreducible factors.
    pub fn distinct_degree(&self, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
        let q = self.field.order();
        let mut rest = self.monic(a);
        let mut out = Vec::new();
        let x = self.x();
        let mut h = x.clone();
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 2 * d {
            h = self.powmod(&h, &q, &rest).unwrap();
            let g = self.gcd(&rest, &self.sub(&h, &x));
            if !self.is_one(&g) {
                rest = self.div_exact(&rest, &g);
                h = self.rem(&h, &rest).unwrap();
                out.push((g, d));
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) > 0 {
            let dd = rest.degree().unwrap();
            out.push((rest, dd));
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a monic squarefree product of degree-`d` irreducibles.
    pub fn equal_degree(&self, a: &Poly<F::Elem>, d: usize, seed: u64) -> Vec<Poly<F::Elem>> {
        let n = a.degree().unwrap_or(0);
        if n == d {
            return vec![self.monic(a)];
        }
        if n == 0 {
            return Vec::new();
        }
        let mut rng = self.rng_for(a, seed);
        let e = (self.field.order().pow(d as u32) - 1u32) >> 1;
        let one = self.one();
        loop {
            let r = self.from_coeffs((0..n).map(|_| self.field.random(&mut rng)).collect());
            if r.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = self.sub(&self.powmod(&r, &e, a).unwrap(), &one);
            let g = self.gcd(&b, a);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let other = self.div_exact(a, &g);
                let mut out = self.equal_degree(&g, d, seed);
                out.extend(self.equal_degree(&other, d, seed));
                return out;
            }
        }
    }

    /// Full factorization into monic irreducibles with multiplicities, in
    /// canonical order. Deterministic for a fixed `seed`.
    pub fn factor(&self, a: &Poly<F::Elem>, seed: u64) -> Vec<(Poly<F::Elem>, usize)> {
        let mut out = Vec::new();
        for (g, m) in self.squarefree(a) {
            for (gd, d) in self.distinct_degree(&g) {
                for h in self.equal_degree(&gd, d, seed) {
                    out.push((h, m));
                }
            }
        }
        out.sort_by(|x, y| self.cmp_polys(&x.0, &y.0).then(x.1.cmp(&y.1)));
        out
    }

    /// Roots lying in the coefficient field, with multiplicities, sorted.
    pub fn roots(&self, a: &Poly<F::Elem>) -> Vec<(F::Elem, usize)> {
        let f = self.field;
        let q = f.order();
        let mut out = Vec::new();
        for (g, m) in self.squarefree(a) {
            let x = self.x();
            let xq = self.powmod(&x, &q, &g).unwrap();
            let lin = self.gcd(&g, &self.sub(&xq, &x));
            for h in self.equal_degree(&lin, 1, 0) {
                out.push((f.neg(&h.coeffs[0]), m));
            }
        }
        out.sort_by(|x, y| f.cmp_elems(&x.0, &y.0));
        out
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, a: &Poly<F::Elem>) -> bool {
        let Some(n) = a.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let a = self.monic(a);
        let q = self.field.order();
        let x = self.x();
        // x^(q^k) mod a for k = 1..n
        let mut powers = Vec::with_capacity(n);
        let mut h = x.clone();
        for _ in 0..n {
            h = self.powmod(&h, &q, &a).unwrap();
            powers.push(h.clone());
        }
        if !self.sub(&powers[n - 1], &x).is_zero() {
            return false;
        }
        for r in prime_divisors(n) {
            let hk = &powers[n / r - 1];
            if !self.is_one(&self.gcd(&a, &self.sub(hk, &x))) {
                return false;
            }
        }
        true
    }

    /// A monic irreducible polynomial of degree `d`; `x` for `d = 1`.
    pub fn find_irreducible(&self, d: usize, seed: u64) -> Poly<F::Elem> {
        assert!(d >= 1);
        if d == 1 {
            return self.x();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (d as u64).wrapping_mul(0x9e37_79b9));
        loop {
            let mut c: Vec<F::Elem> = (0..d).map(|_| self.field.random(&mut rng)).collect();
            c.push(self.field.one());
            let cand = self.from_coeffs(c);
            if self.is_irreducible(&cand) {
                return cand;
            }
        }
    }

    pub fn format(&self, a: &Poly<F::Elem>) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in a.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.format(c);
            parts.push(match i {
                0 => cs,
                1 => format!("({cs})*X"),
                _ => format!("({cs})*X^{i}"),
            });
        }
        parts.join(" + ")
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
