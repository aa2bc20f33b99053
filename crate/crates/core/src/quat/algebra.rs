//! Exact arithmetic in the definite quaternion algebra `(−q, −p)`:
//! `i² = −q`, `j² = −p`, `k = ij = −ji`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::QuatError;

/// The algebra's structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuatAlgebra {
    q: i64,
    p: i64,
}

impl QuatAlgebra {
    /// `q ∈ {1, 3}`; `p` is not checked here (orders check their own
    /// congruence conditions).
    pub fn new(q: i64, p: i64) -> Result<Self, QuatError> {
        if q != 1 && q != 3 {
            return Err(QuatError::UnsupportedQ(q));
        }
        Ok(QuatAlgebra { q, p })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    /// Weights of the diagonal norm form on `(1, i, j, k)`.
    pub fn norm_weights(&self) -> [i64; 4] {
        [1, self.q, self.p, self.q * self.p]
    }

    pub fn mul(&self, a: &Quaternion, b: &Quaternion) -> Quaternion {
        let q = BigRational::from_integer(self.q.into());
        let p = BigRational::from_integer(self.p.into());
        let pq = &p * &q;
        let [a1, a2, a3, a4] = &a.c;
        let [b1, b2, b3, b4] = &b.c;
        Quaternion {
            c: [
                a1 * b1 - &q * (a2 * b2) - &p * (a3 * b3) - &pq * (a4 * b4),
                a1 * b2 + a2 * b1 + &p * (a3 * b4 - a4 * b3),
                a1 * b3 + a3 * b1 + &q * (a4 * b2 - a2 * b4),
                a1 * b4 + a4 * b1 + a2 * b3 - a3 * b2,
            ],
        }
    }

    pub fn nrd(&self, a: &Quaternion) -> BigRational {
        let w = self.norm_weights();
        a.c.iter()
            .zip(w)
            .map(|(x, wt)| x * x * BigRational::from_integer(wt.into()))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    pub fn inverse(&self, a: &Quaternion) -> Result<Quaternion, QuatError> {
        let n = self.nrd(a);
        if n.is_zero() {
            return Err(QuatError::NotInvertible);
        }
        Ok(a.conj().scale(&n.recip()))
    }

    pub fn i(&self) -> Quaternion {
        Quaternion::from_ints([0, 1, 0, 0])
    }

    pub fn j(&self) -> Quaternion {
        Quaternion::from_ints([0, 0, 1, 0])
    }

    pub fn k(&self) -> Quaternion {
        Quaternion::from_ints([0, 0, 0, 1])
    }
}

/// `a₁ + a₂i + a₃j + a₄k` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub c: [BigRational; 4],
}

impl Quaternion {
    pub fn new(c: [BigRational; 4]) -> Self {
        Quaternion { c }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Quaternion {
            c: c.map(|x| BigRational::from_integer(x.into())),
        }
    }

    /// `(c₀ + c₁i + c₂j + c₃k) / den`.
    pub fn from_frac(c: [i64; 4], den: i64) -> Self {
        Quaternion {
            c: c.map(|x| BigRational::new(x.into(), den.into())),
        }
    }

    pub fn zero() -> Self {
        Quaternion::from_ints([0; 4])
    }

    pub fn one() -> Self {
        Quaternion::from_ints([1, 0, 0, 0])
    }

    pub fn scalar(r: BigRational) -> Self {
        let z = BigRational::zero();
        Quaternion {
            c: [r, z.clone(), z.clone(), z],
        }
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = &self.c;
        Quaternion {
            c: [a.clone(), -b, -c, -d],
        }
    }

    pub fn trd(&self) -> BigRational {
        &self.c[0] * BigRational::from_integer(2.into())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Quaternion {
            c: self.c.clone().map(|x| x * r),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Whether every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.c
            .iter()
            .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()))
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|t| &self.c[t] + &o.c[t]),
        }
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|t| &self.c[t] - &o.c[t]),
        }
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|t| -&self.c[t]),
        }
    }
}

impl Mul<&Quaternion> for i64 {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        o.scale(&BigRational::from_integer(self.into()))
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut first = true;
        for (x, name) in self.c.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            let sign = if x.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = x.abs();
            let body = match (mag.is_one(), name.is_empty()) {
                (true, false) => name.to_string(),
                _ => format!("{mag}{name}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
