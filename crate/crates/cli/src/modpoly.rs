//! Classical modular polynomials `Φ_ℓ(X, Y)` read from plain-text tables.
//!
//! The format is a line `ell <ℓ>` followed by one `i j c` line per nonzero
//! coefficient `c` of `X^i Y^j`. Blank lines and `#` comments are ignored.
//! A triple given on one side of the diagonal only is mirrored on load; a
//! pair given on both sides must agree.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use ssnbhd::ff::{Field, Fp2, QuadraticField};
use ssnbhd::poly::{Poly, PolyRing};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModPolyError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("coefficients of X^{i}Y^{j} and X^{j}Y^{i} differ")]
    Asymmetric { i: usize, j: usize },
    #[error("expected degree {expected} in X with leading coefficient 1, found degree {found}")]
    Degree { expected: usize, found: usize },
    #[error("no coefficient table for ℓ = {0}; pass --modpoly-file")]
    Missing(u64),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

const BUILTIN: [(u64, &str); 4] = [
    (2, include_str!("../data/modpoly/phi_2.txt")),
    (3, include_str!("../data/modpoly/phi_3.txt")),
    (5, include_str!("../data/modpoly/phi_5.txt")),
    (7, include_str!("../data/modpoly/phi_7.txt")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    ell: u64,
    coeffs: BTreeMap<(usize, usize), BigInt>,
}

impl ModPoly {
    pub fn parse(text: &str) -> Result<Self, ModPolyError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let bad = |line: usize, msg: &str| ModPolyError::Parse {
            line,
            msg: msg.to_string(),
        };
        let (n, head) = lines.next().ok_or_else(|| bad(0, "empty file"))?;
        let ell: u64 = head
            .strip_prefix("ell")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| bad(n, "expected `ell <prime>`"))?;
        let mut coeffs: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (n, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [i, j, c] = parts[..] else {
                return Err(bad(n, "expected `i j c`"));
            };
            let i: usize = i.parse().map_err(|_| bad(n, "bad exponent"))?;
            let j: usize = j.parse().map_err(|_| bad(n, "bad exponent"))?;
            let c: BigInt = c.parse().map_err(|_| bad(n, "bad coefficient"))?;
            if coeffs.insert((i, j), c).is_some() {
                return Err(bad(n, "repeated monomial"));
            }
        }
        let mirrored: Vec<_> = coeffs
            .iter()
            .filter(|((i, j), _)| !coeffs.contains_key(&(*j, *i)))
            .map(|((i, j), c)| ((*j, *i), c.clone()))
            .collect();
        coeffs.extend(mirrored);
        for ((i, j), c) in &coeffs {
            if coeffs[&(*j, *i)] != *c {
                return Err(ModPolyError::Asymmetric { i: *i, j: *j });
            }
        }
        let expected = ell as usize + 1;
        let found = coeffs.keys().map(|(i, _)| *i).max().unwrap_or(0);
        if found != expected || coeffs.get(&(expected, 0)) != Some(&BigInt::one()) {
            return Err(ModPolyError::Degree { expected, found });
        }
        Ok(ModPoly { ell, coeffs })
    }

    pub fn load(path: &Path) -> Result<Self, ModPolyError> {
        let text = std::fs::read_to_string(path).map_err(|source| ModPolyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The bundled table for `ℓ ∈ {2, 3, 5, 7}`.
    pub fn builtin(ell: u64) -> Result<Self, ModPolyError> {
        let (_, text) = BUILTIN
            .iter()
            .find(|(l, _)| *l == ell)
            .ok_or(ModPolyError::Missing(ell))?;
        Self::parse(text)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn coefficient(&self, i: usize, j: usize) -> BigInt {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `Φ_ℓ(X, y)` as a polynomial in `X` over `F_{p²}`.
    pub fn specialize(&self, field: &QuadraticField, y: &Fp2) -> Poly<Fp2> {
        let deg = self.ell as usize + 1;
        let p = BigInt::from(field.p());
        let mut y_pow = vec![field.one()];
        for k in 1..=deg {
            y_pow.push(field.mul(&y_pow[k - 1], y));
        }
        let mut out = vec![field.zero(); deg + 1];
        for ((i, j), c) in &self.coeffs {
            let r = ((c % &p) + &p) % &p;
            let c = field.from_i64(r.to_i64().expect("reduced below p"));
            out[*i] = field.add(&out[*i], &field.mul(&c, &y_pow[*j]));
        }
        PolyRing::new(field).from_coeffs(out)
    }

    /// Roots of `Φ_ℓ(X, y)` in `F_{p²}` with multiplicity, sorted.
    pub fn roots_at(&self, field: &QuadraticField, y: &Fp2) -> Vec<(Fp2, usize)> {
        let mut r = PolyRing::new(field).roots(&self.specialize(field, y));
        r.sort();
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tables_load() {
        for ell in [2, 3, 5, 7] {
            let m = ModPoly::builtin(ell).unwrap();
            assert_eq!(m.ell(), ell);
            assert_eq!(m.coefficient(ell as usize + 1, 0), BigInt::one());
        }
        assert!(matches!(ModPoly::builtin(11), Err(ModPolyError::Missing(11))));
    }

    #[test]
    fn phi2_known_coefficients() {
        let m = ModPoly::builtin(2).unwrap();
        assert_eq!(m.coefficient(1, 1), BigInt::from(40773375));
        assert_eq!(m.coefficient(2, 2), BigInt::from(-1));
        assert_eq!(m.coefficient(0, 0), "-157464000000000".parse::<BigInt>().unwrap());
        assert_eq!(m.coefficient(2, 1), BigInt::from(1488));
    }

    #[test]
    fn one_sided_tables_are_mirrored() {
        let half = "ell 2\n3 0 1\n2 2 -1\n2 1 1488\n1 1 40773375\n";
        let m = ModPoly::parse(half).unwrap();
        assert_eq!(m.coefficient(0, 3), BigInt::one());
        assert_eq!(m.coefficient(1, 2), BigInt::from(1488));
    }

    #[test]
    fn malformed_tables_rejected() {
        assert!(matches!(
            ModPoly::parse("ell 2\n3 0 1\n0 3 1\n1 0 5\n0 1 6\n"),
            Err(ModPolyError::Asymmetric { .. })
        ));
        assert!(matches!(
            ModPoly::parse("ell 3\n3 0 1\n0 3 1\n"),
            Err(ModPolyError::Degree { expected: 4, found: 3 })
        ));
        assert!(matches!(ModPoly::parse("ell x\n"), Err(ModPolyError::Parse { line: 1, .. })));
        assert!(matches!(
            ModPoly::parse("ell 2\n3 0\n"),
            Err(ModPolyError::Parse { line: 2, .. })
        ));
        assert!(matches!(ModPoly::parse("# only a comment\n"), Err(ModPolyError::Parse { .. })));
    }

    #[test]
    fn small_characteristic_factorizations() {
        // Φ₂(X, 1728) ≡ (X − 1728)³ mod 7
        let f = QuadraticField::new(7).unwrap();
        let j = f.from_i64(1728);
        assert_eq!(ModPoly::builtin(2).unwrap().roots_at(&f, &j), vec![(j, 3)]);
        // Φ₃(X, 0) ≡ X⁴ mod 5
        let f = QuadraticField::new(5).unwrap();
        assert_eq!(ModPoly::builtin(3).unwrap().roots_at(&f, &f.zero()), vec![(f.zero(), 4)]);
    }
}
