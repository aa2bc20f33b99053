//! Full-rank lattices in the quaternion algebra, stored as a positive
//! denominator together with a lower-triangular integer Hermite normal form
//! on the coordinates `(1, i, j, k)`. The stored form is canonical, so two
//! lattices are equal exactly when their representations are.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use super::algebra::{QuatAlgebra, Quaternion};
use super::QuatError;
use crate::arith::isqrt_i64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    den: BigInt,
    /// Row `r` is nonzero only in columns `0..=r`; diagonal positive;
    /// entries left of the diagonal reduced modulo that column's pivot.
    rows: [[BigInt; 4]; 4],
}

type Row = [BigInt; 4];

fn hnf(mut vecs: Vec<Row>) -> Option<[Row; 4]> {
    let mut pivots: [Option<Row>; 4] = Default::default();
    for col in (0..4).rev() {
        loop {
            // row with the smallest nonzero entry in this column
            let Some(best) = (0..vecs.len())
                .filter(|&r| !vecs[r][col].is_zero())
                .min_by_key(|&r| vecs[r][col].abs())
            else {
                return None;
            };
            let piv = vecs[best].clone();
            let mut done = true;
            for (r, v) in vecs.iter_mut().enumerate() {
                if r == best || v[col].is_zero() {
                    continue;
                }
                let m = v[col].div_floor(&piv[col]);
                for c in 0..=col {
                    v[c] -= &m * &piv[c];
                }
                if !v[col].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut p = vecs.swap_remove(best);
                if p[col].is_negative() {
                    for x in p.iter_mut() {
                        *x = -&*x;
                    }
                }
                pivots[col] = Some(p);
                break;
            }
        }
    }
    let mut rows: [Row; 4] = pivots.map(|p| p.unwrap());
    // reduce below-diagonal entries (columns < r) modulo the column pivot
    for r in 1..4 {
        for c in (0..r).rev() {
            let m = rows[r][c].div_floor(&rows[c][c]);
            if !m.is_zero() {
                let pc = rows[c].clone();
                for t in 0..=c {
                    rows[r][t] -= &m * &pc[t];
                }
            }
        }
    }
    Some(rows)
}

impl Lattice {
    /// The lattice spanned by `gens`, which must have rank 4.
    pub fn from_generators(gens: &[Quaternion]) -> Result<Self, QuatError> {
        let den = gens
            .iter()
            .fold(BigInt::one(), |acc, g| num_integer::lcm(acc, g.denominator()));
        let vecs: Vec<Row> = gens
            .iter()
            .map(|g| {
                std::array::from_fn(|t| {
                    let x = &g.c[t] * BigRational::from_integer(den.clone());
                    x.to_integer()
                })
            })
            .collect();
        let rows = hnf(vecs).ok_or(QuatError::NotFullRank)?;
        Ok(Self::normalized(den, rows))
    }

    fn normalized(den: BigInt, rows: [Row; 4]) -> Self {
        let g = rows
            .iter()
            .flatten()
            .fold(den.clone(), |acc, x| acc.gcd(x));
        if g.is_one() {
            Lattice { den, rows }
        } else {
            Lattice {
                den: &den / &g,
                rows: rows.map(|r| r.map(|x| &x / &g)),
            }
        }
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn hnf_rows(&self) -> &[[BigInt; 4]; 4] {
        &self.rows
    }

    pub fn basis(&self) -> [Quaternion; 4] {
        std::array::from_fn(|r| {
            Quaternion::new(std::array::from_fn(|t| {
                BigRational::new(self.rows[r][t].clone(), self.den.clone())
            }))
        })
    }

    /// Integer coordinates of `x` in the stored basis, if `x` lies in the lattice.
    pub fn coordinates(&self, x: &Quaternion) -> Option<[BigInt; 4]> {
        let d = BigRational::from_integer(self.den.clone());
        let mut v: Vec<BigInt> = Vec::with_capacity(4);
        for t in 0..4 {
            let y = &x.c[t] * &d;
            if !y.is_integer() {
                return None;
            }
            v.push(y.to_integer());
        }
        let mut n: [BigInt; 4] = Default::default();
        for col in (0..4).rev() {
            let (qt, rm) = v[col].div_rem(&self.rows[col][col]);
            if !rm.is_zero() {
                return None;
            }
            for t in 0..=col {
                v[t] -= &qt * &self.rows[col][t];
            }
            n[col] = qt;
        }
        Some(n)
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    /// Covolume relative to `Z⟨1, i, j, k⟩`.
    pub fn covolume(&self) -> BigRational {
        let det: BigInt = (0..4).map(|r| self.rows[r][r].clone()).product();
        BigRational::new(det, self.den.pow(4))
    }

    /// `[self : sub]`; `sub` must be contained in `self`.
    pub fn index_of(&self, sub: &Lattice) -> Result<BigInt, QuatError> {
        if !self.contains_lattice(sub) {
            return Err(QuatError::NotContained);
        }
        let r = sub.covolume() / self.covolume();
        debug_assert!(r.is_integer());
        Ok(r.to_integer())
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let gens: Vec<Quaternion> = self.basis().into_iter().chain(other.basis()).collect();
        Lattice::from_generators(&gens).expect("sum of full lattices is full")
    }

    /// The lattice spanned by all products `a·b`.
    pub fn product(&self, alg: &QuatAlgebra, other: &Lattice) -> Lattice {
        let (ba, bb) = (self.basis(), other.basis());
        let gens: Vec<Quaternion> = ba
            .iter()
            .flat_map(|x| bb.iter().map(move |y| alg.mul(x, y)))
            .collect();
        Lattice::from_generators(&gens).expect("product of full lattices is full")
    }

    /// `self · x`.
    pub fn right_mul(&self, alg: &QuatAlgebra, x: &Quaternion) -> Result<Lattice, QuatError> {
        let gens: Vec<Quaternion> = self.basis().iter().map(|b| alg.mul(b, x)).collect();
        Lattice::from_generators(&gens)
    }

    /// `x · self`.
    pub fn left_mul(&self, alg: &QuatAlgebra, x: &Quaternion) -> Result<Lattice, QuatError> {
        let gens: Vec<Quaternion> = self.basis().iter().map(|b| alg.mul(x, b)).collect();
        Lattice::from_generators(&gens)
    }

    pub fn scale(&self, r: &BigRational) -> Lattice {
        let gens: Vec<Quaternion> = self.basis().iter().map(|b| b.scale(r)).collect();
        Lattice::from_generators(&gens).expect("nonzero scalar")
    }

    /// Dual under the coordinate dot product on `(1, i, j, k)`.
    pub fn dual(&self) -> Lattice {
        // rows of (B⁻¹)ᵀ for the rational basis matrix B
        let b: Vec<Vec<BigRational>> = self
            .basis()
            .iter()
            .map(|q| q.c.to_vec())
            .collect();
        let inv = invert4(&b);
        let gens: Vec<Quaternion> = (0..4)
            .map(|c| Quaternion::new(std::array::from_fn(|r| inv[r][c].clone())))
            .collect();
        Lattice::from_generators(&gens).expect("dual of a full lattice is full")
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        self.dual().sum(&other.dual()).dual()
    }

    /// Every nonzero `x` in the lattice with `Nrd(x) ≤ bound`, with its
    /// norm, found by exhaustive enumeration of the diagonal norm form. With
    /// `trace_zero` only elements of reduced trace zero are returned.
    pub fn short_vectors(
        &self,
        alg: &QuatAlgebra,
        bound: i64,
        trace_zero: bool,
    ) -> Vec<(Quaternion, BigRational)> {
        let w = alg.norm_weights().map(i128::from);
        let h: [[i128; 4]; 4] = std::array::from_fn(|r| {
            std::array::from_fn(|c| self.rows[r][c].to_i128().expect("small lattice entries"))
        });
        let d = self.den.to_i128().expect("small denominator");
        let target = bound as i128 * d * d;
        let mut out = Vec::new();
        let mut n = [0i128; 4];
        let mut coords = [0i128; 4];
        enumerate_level(&h, &w, 3, target, trace_zero, &mut n, &mut coords, &mut |x| {
            let val: i128 = (0..4).map(|t| w[t] * x[t] * x[t]).sum();
            if val == 0 {
                return;
            }
            let q = Quaternion::new(std::array::from_fn(|t| {
                BigRational::new(BigInt::from(x[t]), BigInt::from(d))
            }));
            out.push((q, BigRational::new(BigInt::from(val), BigInt::from(d * d))));
        });
        out
    }

    /// Debug serialization: denominator and HNF rows as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "denominator": self.den.to_string(),
            "rows": self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

fn isqrt_i128(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    if n <= i64::MAX as i128 {
        return isqrt_i64(n as i64) as i128;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

// Choose n[level] so that coordinate `level` satisfies the remaining budget;
// coordinate `level` depends only on n[level..].
#[allow(clippy::too_many_arguments)]
fn enumerate_level(
    h: &[[i128; 4]; 4],
    w: &[i128; 4],
    level: usize,
    remaining: i128,
    trace_zero: bool,
    n: &mut [i128; 4],
    coords: &mut [i128; 4],
    emit: &mut dyn FnMut(&[i128; 4]),
) {
    // contribution of already-chosen rows to this coordinate
    let c: i128 = (level + 1..4).map(|r| n[r] * h[r][level]).sum();
    let piv = h[level][level];
    let (lo, hi) = if level == 0 && trace_zero {
        if c % piv != 0 {
            return;
        }
        (-c / piv, -c / piv)
    } else {
        let m = isqrt_i128(remaining / w[level]);
        (div_ceil(-m - c, piv), (m - c).div_euclid(piv))
    };
    for v in lo..=hi {
        n[level] = v;
        let x = v * piv + c;
        let rest = remaining - w[level] * x * x;
        if rest < 0 {
            continue;
        }
        coords[level] = x;
        if level == 0 {
            emit(coords);
        } else {
            enumerate_level(h, w, level - 1, rest, trace_zero, n, coords, emit);
        }
    }
}

fn invert4(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v = row.clone();
            v.extend((0..n).map(|c| {
                if c == r {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible basis");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pr = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pr.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn std_lattice() -> Lattice {
        Lattice::from_generators(&[
            Quaternion::from_ints([1, 0, 0, 0]),
            Quaternion::from_ints([0, 1, 0, 0]),
            Quaternion::from_ints([0, 0, 1, 0]),
            Quaternion::from_ints([0, 0, 0, 1]),
        ])
        .unwrap()
    }

    fn random_lattice(rng: &mut ChaCha8Rng) -> Lattice {
        loop {
            let gens: Vec<Quaternion> = (0..rng.gen_range(4..7))
                .map(|_| {
                    Quaternion::from_frac(std::array::from_fn(|_| rng.gen_range(-9..10)), rng.gen_range(1..5))
                })
                .collect();
            if let Ok(l) = Lattice::from_generators(&gens) {
                return l;
            }
        }
    }

    #[test]
    fn hnf_shape_and_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let l = random_lattice(&mut rng);
            let rows = l.hnf_rows();
            for r in 0..4 {
                assert!(rows[r][r].is_positive());
                for c in r + 1..4 {
                    assert!(rows[r][c].is_zero());
                }
                for s in r + 1..4 {
                    assert!(!rows[s][r].is_negative() && rows[s][r] < rows[r][r]);
                }
            }
            let again = Lattice::from_generators(&l.basis()).unwrap();
            assert_eq!(again, l);
            // a shuffled, sheared basis gives the same canonical form
            let b = l.basis();
            let sheared = vec![
                &b[3] + &b[0],
                b[2].clone(),
                &(&b[1] + &b[1]) + &b[2],
                &b[0] - &b[1],
                b[1].clone(),
            ];
            assert_eq!(Lattice::from_generators(&sheared).unwrap(), l);
        }
    }

    #[test]
    fn examples() {
        let z = std_lattice();
        assert!(z.contains(&Quaternion::one()));
        let l5 = z.scale(&BigRational::from_integer(5.into()));
        assert_eq!(z.index_of(&l5).unwrap(), BigInt::from(625));
        assert_eq!(l5.index_of(&z), Err(QuatError::NotContained));
        assert!(Lattice::from_generators(&[Quaternion::one(), Quaternion::from_ints([0, 1, 0, 0])]).is_err());
    }

    #[test]
    fn dual_and_intersection() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = random_lattice(&mut rng);
            let b = random_lattice(&mut rng);
            assert_eq!(a.dual().dual(), a);
            let c = a.intersect(&b);
            assert!(a.contains_lattice(&c) && b.contains_lattice(&c));
            // every element of a ∩ b found by a direct check of a small box
            for v in c.basis() {
                assert!(a.contains(&v) && b.contains(&v));
            }
            let s = a.sum(&b);
            assert!(s.contains_lattice(&a) && s.contains_lattice(&b));
            // [a+b : a] = [b : a∩b]
            assert_eq!(s.index_of(&a).unwrap(), b.index_of(&c).unwrap());
        }
    }

    #[test]
    fn short_vectors_complete() {
        let alg = QuatAlgebra::new(3, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let l = random_lattice(&mut rng);
            let bound = 40;
            let found = l.short_vectors(&alg, bound, false);
            for (q, v) in &found {
                assert!(l.contains(q));
                assert_eq!(*v, alg.nrd(q));
            }
            // brute force over a box of small basis combinations is a subset
            let b = l.basis();
            let mut count = 0;
            for n0 in -4i64..=4 {
                for n1 in -4i64..=4 {
                    for n2 in -4i64..=4 {
                        for n3 in -4i64..=4 {
                            let x = &(&(n0 * &b[0]) + &(n1 * &b[1])) + &(&(n2 * &b[2]) + &(n3 * &b[3]));
                            let nx = alg.nrd(&x);
                            if !x.is_zero() && nx <= BigRational::from_integer(bound.into()) {
                                assert!(found.iter().any(|(q, _)| *q == x));
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert!(count <= found.len());
            let tz = l.short_vectors(&alg, bound, true);
            let want: Vec<_> = found.iter().filter(|(q, _)| q.c[0].is_zero()).cloned().collect();
            assert_eq!(tz, want);
        }
    }

    #[test]
    fn json_debug_form() {
        let v = std_lattice().to_json();
        assert_eq!(v["denominator"], "1");
        assert_eq!(v["rows"][2][2], "1");
    }
}
