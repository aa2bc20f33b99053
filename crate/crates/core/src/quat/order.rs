//! Orders: the two explicit maximal orders, their invariants, and the
//! right-order and `√−p` tests used to read off neighbor data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::algebra::{QuatAlgebra, Quaternion};
use super::lattice::Lattice;
use super::QuatError;
use crate::arith::is_prime_u64;

/// Which vertex the order belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    /// `y² = x³ + 1`, order in `(−3, −p)`.
    E0,
    /// `y² = x³ + x`, order in `(−1, −p)`.
    E1728,
}

impl OrderKind {
    pub fn q(self) -> i64 {
        match self {
            OrderKind::E0 => 3,
            OrderKind::E1728 => 1,
        }
    }

    pub fn vertex_label(self) -> &'static str {
        match self {
            OrderKind::E0 => "0",
            OrderKind::E1728 => "1728",
        }
    }

    /// Whether the corresponding curve is supersingular in characteristic `p`.
    pub fn admits(self, p: u64) -> bool {
        match self {
            OrderKind::E0 => p % 3 == 2,
            OrderKind::E1728 => p % 4 == 3,
        }
    }

    /// `[O : Z⟨1, i, j, k⟩]` for the standard order.
    pub fn standard_index(self) -> i64 {
        match self {
            OrderKind::E0 => 12,
            OrderKind::E1728 => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Order {
    alg: QuatAlgebra,
    lattice: Lattice,
}

impl Order {
    /// Checks that `lattice` contains 1, is closed under multiplication and
    /// has integral reduced traces and norms.
    pub fn new(alg: QuatAlgebra, lattice: Lattice) -> Result<Self, QuatError> {
        if !lattice.contains(&Quaternion::one()) {
            return Err(QuatError::NotAnOrder("does not contain 1"));
        }
        let b = lattice.basis();
        for x in &b {
            for y in &b {
                if !lattice.contains(&alg.mul(x, y)) {
                    return Err(QuatError::NotAnOrder("not closed under multiplication"));
                }
            }
            if !x.trd().is_integer() || !alg.nrd(x).is_integer() {
                return Err(QuatError::NotAnOrder("non-integral trace or norm"));
            }
        }
        Ok(Order { alg, lattice })
    }

    pub fn algebra(&self) -> &QuatAlgebra {
        &self.alg
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn basis(&self) -> [Quaternion; 4] {
        self.lattice.basis()
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        self.lattice.contains(x)
    }

    /// `|det(trd(b_r b_s))|`; equal to `p²` exactly for maximal orders.
    pub fn discriminant(&self) -> BigInt {
        gram_discriminant(&self.alg, &self.lattice.basis())
    }

    pub fn is_maximal(&self) -> bool {
        let p = BigInt::from(self.alg.p());
        self.discriminant() == &p * &p
    }

    /// Whether some `s` in the order has `trd(s) = 0` and `Nrd(s) = p`.
    pub fn has_sqrt_minus_p(&self) -> bool {
        let p = self.alg.p();
        let target = BigRational::from_integer(p.into());
        self.lattice
            .short_vectors(&self.alg, p, true)
            .iter()
            .any(|(_, n)| *n == target)
    }
}

fn gram_discriminant(alg: &QuatAlgebra, b: &[Quaternion; 4]) -> BigInt {
    let g: Vec<Vec<BigRational>> = b
        .iter()
        .map(|x| b.iter().map(|y| alg.mul(x, y).trd()).collect())
        .collect();
    let d = det(g);
    debug_assert!(d.is_integer());
    d.to_integer().abs()
}

fn det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut d = BigRational::from_integer(1.into());
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d *= a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            let pr = a[col].clone();
            for (x, y) in a[r].iter_mut().zip(pr.iter()) {
                *x = &*x - &f * y;
            }
        }
    }
    d
}

fn check_p(kind: OrderKind, p: u64) -> Result<(), QuatError> {
    if p <= 3 || !is_prime_u64(p) {
        return Err(QuatError::BadPrime(p));
    }
    if !kind.admits(p) {
        return Err(QuatError::Congruence { kind, p });
    }
    Ok(())
}

/// Maximal order of the endomorphism ring of `E0` or `E1728`:
/// `E1728`: `Z + Zi + Z(1+j)/2 + Z(i+k)/2` in `(−1, −p)`;
/// `E0`: `Z + Z(1+i)/2 + Z(i+k)/3 + Z(j+k)/2` in `(−3, −p)`.
pub fn standard_order(kind: OrderKind, p: u64) -> Result<Order, QuatError> {
    check_p(kind, p)?;
    let alg = QuatAlgebra::new(kind.q(), p as i64)?;
    let gens = match kind {
        OrderKind::E1728 => [
            Quaternion::from_ints([1, 0, 0, 0]),
            Quaternion::from_ints([0, 1, 0, 0]),
            Quaternion::from_frac([1, 0, 1, 0], 2),
            Quaternion::from_frac([0, 1, 0, 1], 2),
        ],
        OrderKind::E0 => [
            Quaternion::from_ints([1, 0, 0, 0]),
            Quaternion::from_frac([1, 1, 0, 0], 2),
            Quaternion::from_frac([0, 1, 0, 1], 3),
            Quaternion::from_frac([0, 0, 1, 1], 2),
        ],
    };
    let order = Order::new(alg, Lattice::from_generators(&gens)?)?;
    if !order.is_maximal() {
        return Err(QuatError::NotAnOrder("discriminant differs from p²"));
    }
    Ok(order)
}

/// How the alternative presentation `Z + Z(1+i)/2 + Zj + Z(3+i+3j+k)/6` of
/// `End(E0)` relates to [`standard_order`]'s basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct E0BasisComparison {
    pub p: u64,
    pub lattices_equal: bool,
    pub alternative_in_standard: bool,
    pub standard_in_alternative: bool,
    pub alternative_is_order: bool,
    pub alternative_discriminant: String,
    pub standard_hnf: serde_json::Value,
    pub alternative_hnf: serde_json::Value,
}

pub fn compare_e0_bases(p: u64) -> Result<E0BasisComparison, QuatError> {
    let std = standard_order(OrderKind::E0, p)?;
    let alg = *std.algebra();
    let alt_gens = [
        Quaternion::from_ints([1, 0, 0, 0]),
        Quaternion::from_frac([1, 1, 0, 0], 2),
        Quaternion::from_ints([0, 0, 1, 0]),
        Quaternion::from_frac([3, 1, 3, 1], 6),
    ];
    let alt = Lattice::from_generators(&alt_gens)?;
    Ok(E0BasisComparison {
        p,
        lattices_equal: alt == *std.lattice(),
        alternative_in_standard: std.lattice().contains_lattice(&alt),
        standard_in_alternative: alt.contains_lattice(std.lattice()),
        alternative_is_order: Order::new(alg, alt.clone()).is_ok(),
        alternative_discriminant: gram_discriminant(&alg, &alt.basis()).to_string(),
        standard_hnf: std.lattice().to_json(),
        alternative_hnf: alt.to_json(),
    })
}

/// `{x : I·x ⊆ I}` for a lattice `I`, as `⋂ b⁻¹·I` over a basis `b` of `I`.
pub fn right_order(alg: &QuatAlgebra, ideal: &Lattice) -> Result<Order, QuatError> {
    let mut acc: Option<Lattice> = None;
    for b in ideal.basis() {
        let inv = alg.inverse(&b)?;
        let l = ideal.left_mul(alg, &inv)?;
        acc = Some(match acc {
            None => l,
            Some(a) => a.intersect(&l),
        });
    }
    Order::new(*alg, acc.expect("four basis vectors"))
}

/// `{x : x·I ⊆ I}`.
pub fn left_order(alg: &QuatAlgebra, ideal: &Lattice) -> Result<Order, QuatError> {
    let mut acc: Option<Lattice> = None;
    for b in ideal.basis() {
        let inv = alg.inverse(&b)?;
        let l = ideal.right_mul(alg, &inv)?;
        acc = Some(match acc {
            None => l,
            Some(a) => a.intersect(&l),
        });
    }
    Order::new(*alg, acc.expect("four basis vectors"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_between;

    #[test]
    fn standard_order_examples() {
        let o = standard_order(OrderKind::E1728, 7).unwrap();
        assert!(o.contains(&Quaternion::from_frac([1, 0, 1, 0], 2)));
        assert_eq!(o.discriminant(), BigInt::from(49));
        let o = standard_order(OrderKind::E0, 5).unwrap();
        assert!(o.contains(&Quaternion::from_frac([0, 1, 0, 1], 3)));
        assert_eq!(o.discriminant(), BigInt::from(25));
        assert_eq!(
            standard_order(OrderKind::E1728, 13).unwrap_err(),
            QuatError::Congruence { kind: OrderKind::E1728, p: 13 }
        );
        assert!(standard_order(OrderKind::E0, 7).is_err());
        assert!(standard_order(OrderKind::E0, 9).is_err());
    }

    #[test]
    fn standard_orders_maximal_for_all_small_p() {
        for p in primes_between(5, 1000) {
            for kind in [OrderKind::E0, OrderKind::E1728] {
                if !kind.admits(p) {
                    continue;
                }
                let o = standard_order(kind, p).unwrap();
                let pp = BigInt::from(p * p);
                assert_eq!(o.discriminant(), pp);
                // Z⟨1,i,j,k⟩ sits inside with the expected index
                let z = Lattice::from_generators(&[
                    Quaternion::from_ints([1, 0, 0, 0]),
                    Quaternion::from_ints([0, 1, 0, 0]),
                    Quaternion::from_ints([0, 0, 1, 0]),
                    Quaternion::from_ints([0, 0, 0, 1]),
                ])
                .unwrap();
                assert_eq!(o.lattice().index_of(&z).unwrap(), BigInt::from(kind.standard_index()));
            }
        }
    }

    #[test]
    fn non_maximal_order_detected() {
        let alg = QuatAlgebra::new(1, 7).unwrap();
        let z = Lattice::from_generators(&[
            Quaternion::from_ints([1, 0, 0, 0]),
            Quaternion::from_ints([0, 1, 0, 0]),
            Quaternion::from_ints([0, 0, 1, 0]),
            Quaternion::from_ints([0, 0, 0, 1]),
        ])
        .unwrap();
        let o = Order::new(alg, z).unwrap();
        assert_eq!(o.discriminant(), BigInt::from(16 * 49));
        assert!(!o.is_maximal());
        let half = Lattice::from_generators(&[
            Quaternion::from_ints([1, 0, 0, 0]),
            Quaternion::from_frac([0, 1, 0, 0], 2),
            Quaternion::from_ints([0, 0, 1, 0]),
            Quaternion::from_ints([0, 0, 0, 1]),
        ])
        .unwrap();
        assert!(Order::new(alg, half).is_err());
    }

    #[test]
    fn right_order_of_order_is_itself() {
        for (kind, p) in [(OrderKind::E1728, 103), (OrderKind::E0, 47)] {
            let o = standard_order(kind, p).unwrap();
            let r = right_order(o.algebra(), o.lattice()).unwrap();
            assert_eq!(r, o);
            assert_eq!(left_order(o.algebra(), o.lattice()).unwrap(), o);
        }
    }

    #[test]
    fn sqrt_minus_p_in_standard_orders() {
        for p in [7u64, 11, 19, 23, 103] {
            assert!(standard_order(OrderKind::E1728, p).unwrap().has_sqrt_minus_p());
        }
        for p in [5u64, 11, 17, 23, 47] {
            assert!(standard_order(OrderKind::E0, p).unwrap().has_sqrt_minus_p());
        }
    }

    #[test]
    fn alternative_e0_basis() {
        for p in [5u64, 11, 17, 47, 101] {
            let c = compare_e0_bases(p).unwrap();
            assert!(c.alternative_in_standard, "p={p}");
            assert!(c.lattices_equal, "p={p}: {c:?}");
        }
    }
}
