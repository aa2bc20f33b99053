//! The explicit isomorphism `θ: O/ℓO → M₂(F_ℓ)`.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::algebra::Quaternion;
use super::order::{Order, OrderKind};
use super::QuatError;
use crate::arith::{inv_mod, is_prime_u64};

/// A 2×2 matrix over `F_ℓ`, entries in `0..ℓ`.
pub type Mat2 = [[i64; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2, ell: i64) -> Mat2 {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| (a[r][0] * b[0][c] + a[r][1] * b[1][c]).rem_euclid(ell))
    })
}

pub fn mat_add(a: &Mat2, b: &Mat2, ell: i64) -> Mat2 {
    std::array::from_fn(|r| std::array::from_fn(|c| (a[r][c] + b[r][c]).rem_euclid(ell)))
}

fn mat_scale(a: &Mat2, s: i64, ell: i64) -> Mat2 {
    std::array::from_fn(|r| std::array::from_fn(|c| (a[r][c] * s).rem_euclid(ell)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theta {
    pub ell: i64,
    pub q: i64,
    pub p: i64,
    /// `u² + qv² ≡ −p (mod ℓ)`.
    pub u: i64,
    pub v: i64,
    pub ti: Mat2,
    pub tj: Mat2,
    pub tk: Mat2,
}

/// `(u, v)` with `u² + qv² ≡ −p (mod ℓ)`: `(t, 0)` with the least such `t`
/// when `−p` is a square mod ℓ, otherwise the lexicographically least pair.
pub fn choose_uv(q: i64, p: i64, ell: i64) -> (i64, i64) {
    let target = (-p).rem_euclid(ell);
    if let Some(t) = (0..ell).find(|t| t * t % ell == target) {
        return (t, 0);
    }
    for u in 0..ell {
        for v in 0..ell {
            if (u * u + q * v * v) % ell == target {
                return (u, v);
            }
        }
    }
    unreachable!("u² + qv² represents every class mod an odd prime")
}

impl Theta {
    /// Requires `ℓ` prime with `ℓ ∤ 2pq·[O : Z⟨i, j⟩]`. The engine also
    /// refuses `ℓ = 3` outright, so the condition is `ℓ > 3`, `ℓ ≠ p`.
    pub fn new(order: &Order, kind: OrderKind, ell: u64) -> Result<Self, QuatError> {
        let q = order.algebra().q();
        let p = order.algebra().p();
        let bad = 2 * p * q * kind.standard_index();
        if ell <= 3 || !is_prime_u64(ell) || bad % ell as i64 == 0 {
            return Err(QuatError::ThetaHypothesis { ell, p: p as u64 });
        }
        let ell = ell as i64;
        let (u, v) = choose_uv(q, p, ell);
        let m = |x: i64| x.rem_euclid(ell);
        let ti = [[0, m(-q)], [1, 0]];
        let tj = [[u, m(q * v)], [v, m(-u)]];
        let tk = mat_mul(&ti, &tj, ell);
        Ok(Theta {
            ell,
            q,
            p,
            u,
            v,
            ti,
            tj,
            tk,
        })
    }

    fn reduce(&self, x: &BigRational) -> i64 {
        let n = x.numer().to_i64().expect("small coordinates").rem_euclid(self.ell);
        let d = x.denom().to_i64().expect("small coordinates");
        let dinv = inv_mod(d, self.ell).expect("denominator prime to ℓ");
        (n * dinv).rem_euclid(self.ell)
    }

    /// Image of an element whose denominators are prime to ℓ.
    pub fn apply(&self, x: &Quaternion) -> Mat2 {
        let ell = self.ell;
        let [a, b, c, d] = &x.c;
        let mut out = [[self.reduce(a), 0], [0, self.reduce(a)]];
        out = mat_add(&out, &mat_scale(&self.ti, self.reduce(b), ell), ell);
        out = mat_add(&out, &mat_scale(&self.tj, self.reduce(c), ell), ell);
        mat_add(&out, &mat_scale(&self.tk, self.reduce(d), ell), ell)
    }

    /// Coefficients `c` in `0..ℓ` with `Σ c_r θ(b_r) = m` for the basis `b` of `order`.
    pub fn preimage(&self, order: &Order, m: &Mat2) -> Quaternion {
        let ell = self.ell;
        let basis = order.basis();
        let imgs: Vec<Mat2> = basis.iter().map(|b| self.apply(b)).collect();
        // solve the 4×4 system over F_ℓ
        let mut a: Vec<[i64; 5]> = (0..4)
            .map(|e| {
                let (r, c) = (e / 2, e % 2);
                [imgs[0][r][c], imgs[1][r][c], imgs[2][r][c], imgs[3][r][c], m[r][c]]
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4)
                .find(|&r| a[r][col] != 0)
                .expect("θ is bijective on O/ℓO");
            a.swap(col, piv);
            let inv = inv_mod(a[col][col], ell).unwrap();
            for x in a[col].iter_mut() {
                *x = (*x * inv).rem_euclid(ell);
            }
            for r in 0..4 {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    let pr = a[col];
                    for (x, y) in a[r].iter_mut().zip(pr) {
                        *x = (*x - f * y).rem_euclid(ell);
                    }
                }
            }
        }
        basis
            .iter()
            .zip(&a)
            .fold(Quaternion::zero(), |acc, (b, row)| &acc + &(row[4] * b))
    }

    /// `θ(xy) = θ(x)θ(y)` on every pair of basis elements of `order`.
    pub fn is_homomorphism(&self, order: &Order) -> bool {
        let alg = order.algebra();
        let b = order.basis();
        b.iter().all(|x| {
            b.iter().all(|y| {
                self.apply(&alg.mul(x, y)) == mat_mul(&self.apply(x), &self.apply(y), self.ell)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::order::standard_order;

    #[test]
    fn uv_examples() {
        // −83 ≡ 2 mod 5 is a non-residue
        assert_eq!(choose_uv(1, 83, 5), (1, 1));
        // −103 ≡ 2 mod 5
        assert_eq!(choose_uv(1, 103, 5), (1, 1));
        // −11 ≡ 1 mod 3... and mod 5: −11 ≡ 4 = 2²
        assert_eq!(choose_uv(3, 11, 5), (2, 0));
        for ell in [5i64, 7, 11, 13] {
            for p in [7i64, 11, 19, 23, 83, 103] {
                for q in [1i64, 3] {
                    let (u, v) = choose_uv(q, p, ell);
                    assert_eq!((u * u + q * v * v + p) % ell, 0);
                }
            }
        }
    }

    #[test]
    fn matrix_identities() {
        for (kind, p) in [(OrderKind::E1728, 83u64), (OrderKind::E0, 71)] {
            let o = standard_order(kind, p).unwrap();
            for ell in [5u64, 7, 11, 13] {
                let t = Theta::new(&o, kind, ell).unwrap();
                let e = ell as i64;
                let minus_q = [[(-t.q).rem_euclid(e), 0], [0, (-t.q).rem_euclid(e)]];
                assert_eq!(mat_mul(&t.ti, &t.ti, e), minus_q);
                let ij = mat_mul(&t.ti, &t.tj, e);
                let ji = mat_mul(&t.tj, &t.ti, e);
                assert_eq!(mat_add(&ij, &ji, e), [[0, 0], [0, 0]]);
                assert!(t.is_homomorphism(&o));
            }
        }
    }

    #[test]
    fn hypothesis_enforced() {
        let o = standard_order(OrderKind::E1728, 103).unwrap();
        for ell in [2u64, 3, 103, 9] {
            assert!(Theta::new(&o, OrderKind::E1728, ell).is_err());
        }
    }

    #[test]
    fn preimage_round_trips() {
        let o = standard_order(OrderKind::E0, 101).unwrap();
        let t = Theta::new(&o, OrderKind::E0, 7).unwrap();
        for m in [[[0, 0], [0, 1]], [[1, 2], [3, 4]], [[6, 0], [5, 5]]] {
            let x = t.preimage(&o, &m);
            assert!(o.contains(&x));
            assert_eq!(t.apply(&x), m);
        }
    }
}
