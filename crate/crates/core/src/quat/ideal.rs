//! Left ideals of reduced norm ℓ: the set `X_ℓ`, the unit action on it,
//! equivalence testing and the class partition.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::algebra::{QuatAlgebra, Quaternion};
use super::lattice::Lattice;
use super::order::{right_order, Order, OrderKind};
use super::theta::{Mat2, Theta};
use super::QuatError;
use crate::arith::exact_sqrt;

/// Position of an ideal in `X_ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdealLabel {
    Infinity,
    Finite(i64),
}

impl fmt::Display for IdealLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealLabel::Infinity => write!(f, "I_inf"),
            IdealLabel::Finite(a) => write!(f, "I_{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftIdeal {
    pub label: IdealLabel,
    pub lattice: Lattice,
}

/// `√[O : I]`; errors when the index is not a perfect square.
pub fn ideal_norm(order: &Order, ideal: &Lattice) -> Result<BigInt, QuatError> {
    let idx = order.lattice().index_of(ideal)?;
    exact_sqrt(&idx).ok_or(QuatError::NonSquareIndex(idx.to_string()))
}

/// `ε = i` in `(−1, −p)` and `ε = (1+i)/2` in `(−3, −p)`, so `Z[ε]` is the
/// maximal order of the quadratic subfield.
pub fn epsilon(kind: OrderKind) -> Quaternion {
    match kind {
        OrderKind::E1728 => Quaternion::from_ints([0, 1, 0, 0]),
        OrderKind::E0 => Quaternion::from_frac([1, 1, 0, 0], 2),
    }
}

/// The `ℓ + 1` left ideals of norm ℓ in a standard order, labelled through θ.
#[derive(Debug, Clone)]
pub struct XEll {
    pub kind: OrderKind,
    pub ell: u64,
    pub order: Order,
    pub theta: Theta,
    pub ideals: Vec<LeftIdeal>,
}

impl XEll {
    /// `I_∞ = ℓO + Oα` for a preimage α of `[[0,0],[0,1]]`, and
    /// `I_a = ℓO + I_∞(a + ε)` for `a = 0..ℓ−1`.
    pub fn build(order: Order, kind: OrderKind, ell: u64) -> Result<Self, QuatError> {
        let theta = Theta::new(&order, kind, ell)?;
        let alg = *order.algebra();
        let omega: Mat2 = [[0, 0], [0, 1]];
        let alpha = theta.preimage(&order, &omega);
        let ell_o = order
            .lattice()
            .scale(&BigRational::from_integer(BigInt::from(ell)));
        let i_inf = ell_o.sum(&order.lattice().right_mul(&alg, &alpha)?);
        let eps = epsilon(kind);
        let mut ideals = vec![LeftIdeal {
            label: IdealLabel::Infinity,
            lattice: i_inf.clone(),
        }];
        for a in 0..ell as i64 {
            let r = &Quaternion::from_ints([a, 0, 0, 0]) + &eps;
            ideals.push(LeftIdeal {
                label: IdealLabel::Finite(a),
                lattice: ell_o.sum(&i_inf.right_mul(&alg, &r)?),
            });
        }
        Ok(XEll {
            kind,
            ell,
            order,
            theta,
            ideals,
        })
    }

    pub fn algebra(&self) -> &QuatAlgebra {
        self.order.algebra()
    }

    pub fn get(&self, label: IdealLabel) -> &LeftIdeal {
        self.ideals
            .iter()
            .find(|i| i.label == label)
            .expect("label in X_ℓ")
    }

    /// Index of the ideal equal to `lattice`, if it is a member.
    pub fn position(&self, lattice: &Lattice) -> Option<usize> {
        self.ideals.iter().position(|i| i.lattice == *lattice)
    }

    fn ell_o(&self) -> Lattice {
        self.order
            .lattice()
            .scale(&BigRational::from_integer(BigInt::from(self.ell)))
    }

    /// `ℓO + I·r` for `r` in the order with `Nrd(r)` prime to ℓ.
    pub fn act(&self, ideal: &Lattice, r: &Quaternion) -> Result<Lattice, QuatError> {
        let n = self.algebra().nrd(r);
        let ell = BigInt::from(self.ell);
        if !self.order.contains(r) || (n.to_integer() % &ell) == BigInt::from(0) {
            return Err(QuatError::NotAUnit);
        }
        Ok(self.ell_o().sum(&ideal.right_mul(self.algebra(), r)?))
    }

    /// Representatives `x + yε` of `(Z[ε]/ℓ)^×`.
    pub fn units(&self) -> Vec<Quaternion> {
        let eps = epsilon(self.kind);
        let alg = self.algebra();
        let ell = self.ell as i64;
        let mut out = Vec::new();
        for x in 0..ell {
            for y in 0..ell {
                let r = &Quaternion::from_ints([x, 0, 0, 0]) + &(y * &eps);
                let n = alg.nrd(&r).to_integer();
                if n % ell != BigInt::from(0) {
                    out.push(r);
                }
            }
        }
        out
    }

    /// Orbits of the unit action, as sets of indices into `ideals`.
    pub fn orbits(&self) -> Result<Vec<BTreeSet<usize>>, QuatError> {
        let units = self.units();
        let mut seen = vec![false; self.ideals.len()];
        let mut out = Vec::new();
        for start in 0..self.ideals.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for r in &units {
                let image = self.act(&self.ideals[start].lattice, r)?;
                let pos = self.position(&image).ok_or(QuatError::NotInXEll)?;
                orbit.insert(pos);
            }
            for &i in &orbit {
                seen[i] = true;
            }
            out.push(orbit);
        }
        Ok(out)
    }

    /// `μ` with `I = Jμ` and `Nrd(μ) = 1`, when `I` and `J` are equivalent.
    pub fn equivalence_witness(&self, i: &Lattice, j: &Lattice) -> Option<Quaternion> {
        equivalence_witness(self.algebra(), i, j, self.ell as i64)
    }

    /// A generator α of norm ℓ with `I = Oα`, when `I` is principal.
    pub fn principal_generator(&self, ideal: &Lattice) -> Option<Quaternion> {
        let alg = self.algebra();
        let ell = self.ell as i64;
        let target = BigRational::from_integer(ell.into());
        ideal
            .short_vectors(alg, ell, false)
            .into_iter()
            .filter(|(_, n)| *n == target)
            .map(|(a, _)| a)
            .find(|a| {
                self.order
                    .lattice()
                    .right_mul(alg, a)
                    .is_ok_and(|l| l == *ideal)
            })
    }

    /// Partition of `X_ℓ` into equivalence classes, in order of first member.
    pub fn classes(&self) -> Vec<IdealClass> {
        let mut out: Vec<IdealClass> = Vec::new();
        for (idx, ideal) in self.ideals.iter().enumerate() {
            let home = out.iter_mut().find(|c| {
                self.equivalence_witness(&ideal.lattice, &self.ideals[c.members[0]].lattice)
                    .is_some()
            });
            match home {
                Some(c) => c.members.push(idx),
                None => out.push(IdealClass {
                    members: vec![idx],
                    principal: self.principal_generator(&ideal.lattice).is_some(),
                }),
            }
        }
        out
    }

    pub fn right_order(&self, ideal: &Lattice) -> Result<Order, QuatError> {
        right_order(self.algebra(), ideal)
    }
}

/// Search for `β ∈ J̄·I` with `Nrd(β) = ℓ²`; the witness `μ = β/ℓ` is
/// returned only after checking `I = Jμ`.
pub fn equivalence_witness(
    alg: &QuatAlgebra,
    i: &Lattice,
    j: &Lattice,
    ell: i64,
) -> Option<Quaternion> {
    let jbar = Lattice::from_generators(&j.basis().map(|b| b.conj())).ok()?;
    let prod = jbar.product(alg, i);
    let inv_ell = BigRational::new(1.into(), ell.into());
    let target = BigRational::from_integer((ell * ell).into());
    prod.short_vectors(alg, ell * ell, false)
        .into_iter()
        .filter(|(_, n)| *n == target)
        .map(|(b, _)| b.scale(&inv_ell))
        .find(|mu| j.right_mul(alg, mu).is_ok_and(|l| l == *i))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealClass {
    /// Indices into [`XEll::ideals`].
    pub members: Vec<usize>,
    /// Whether the class is that of the order itself.
    pub principal: bool,
}
