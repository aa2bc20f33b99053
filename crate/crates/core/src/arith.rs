//! Exact integer helpers: primality, quadratic symbols and the small
//! binary-form norm equations that show up when classifying ideals of
//! norm `ℓ` in `Z[i]` and `Z[(1+√-3)/2]`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(String),
    #[error("{n} has no representation by {form}: {reason}")]
    NoSolution {
        n: i64,
        form: &'static str,
        reason: &'static str,
    },
}

/// Binary quadratic forms used by the norm equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormForm {
    /// `x² + y²`, the norm form of `Z[i]`.
    SumSquares,
    /// `x² + xy + y²`, the norm form of `Z[(1+√-3)/2]`.
    Hermite,
}

impl NormForm {
    pub fn eval(self, x: i64, y: i64) -> i64 {
        match self {
            NormForm::SumSquares => x * x + y * y,
            NormForm::Hermite => x * x + x * y + y * y,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NormForm::SumSquares => "x^2+y^2",
            NormForm::Hermite => "x^2+xy+y^2",
        }
    }
}

// Deterministic Miller-Rabin witnesses for every n < 2^64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for machine-word integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n == w {
            return true;
        }
        if n % w == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of an arbitrary non-negative integer.
///
/// Exact below 2⁶⁴. Above that, 64 Miller-Rabin rounds with witnesses drawn
/// from a generator seeded by `n` itself, so the answer is reproducible and
/// wrong with probability below 4⁻⁶⁴.
pub fn is_prime(n: &Integer) -> bool {
    if n.sign() == Sign::Minus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let seed = n.iter_u64_digits().fold(0u64, |h, w| h.rotate_left(13) ^ w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    'rounds: for _ in 0..64 {
        let a = two.clone() + rng.gen::<u64>() % (n - 4u32).to_u64().unwrap_or(u64::MAX);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &Integer, p: &Integer) -> Result<i8, ArithError> {
    let p_small = p
        .to_u64()
        .filter(|&p| p % 2 == 1 && is_prime_u64(p))
        .ok_or_else(|| ArithError::NotOddPrime(p.to_string()))?;
    let r = a.mod_floor(p).to_i64().expect("reduced below a u64 prime");
    Ok(jacobi(r, p_small))
}

/// Legendre symbol for machine-word arguments.
pub fn legendre_i64(a: i64, p: u64) -> Result<i8, ArithError> {
    if p % 2 == 0 || !is_prime_u64(p) {
        return Err(ArithError::NotOddPrime(p.to_string()));
    }
    Ok(jacobi(a, p))
}

/// `m² + n² = ℓ` with `0 < m < n`.
pub fn solve_sum_of_squares(ell: i64) -> Result<(i64, i64), ArithError> {
    if ell.rem_euclid(4) != 1 {
        return Err(ArithError::NoSolution {
            n: ell,
            form: NormForm::SumSquares.name(),
            reason: "requires ell = 1 mod 4",
        });
    }
    let mut m = 1;
    while 2 * m * m < ell {
        let rest = ell - m * m;
        let n = isqrt_i64(rest);
        if n * n == rest {
            return Ok((m, n));
        }
        m += 1;
    }
    Err(ArithError::NoSolution {
        n: ell,
        form: NormForm::SumSquares.name(),
        reason: "not prime",
    })
}

/// `m² + mn + n² = ℓ` with `0 < m ≤ n`.
pub fn solve_hermite_norm(ell: i64) -> Result<(i64, i64), ArithError> {
    if ell.rem_euclid(3) != 1 {
        return Err(ArithError::NoSolution {
            n: ell,
            form: NormForm::Hermite.name(),
            reason: "requires ell = 1 mod 3",
        });
    }
    let mut m = 1;
    while 3 * m * m <= ell {
        let mut n = m;
        while m * m + m * n + n * n <= ell {
            if m * m + m * n + n * n == ell {
                return Ok((m, n));
            }
            n += 1;
        }
        m += 1;
    }
    Err(ArithError::NoSolution {
        n: ell,
        form: NormForm::Hermite.name(),
        reason: "not prime",
    })
}

/// Every `(x, y)` with `form(x, y) = n` and `exclude_divisor ∤ x`, sorted.
///
/// Exhaustive over the box `|x|, |y| ≤ ⌈√(4n/3)⌉`, which contains every
/// solution of both forms.
pub fn norm_equation_solutions(form: NormForm, n: i64, exclude_divisor: i64) -> Vec<(i64, i64)> {
    if n < 1 {
        return Vec::new();
    }
    let bound = isqrt_i64((4 * n + 2) / 3) + 1;
    let mut out = Vec::new();
    for x in -bound..=bound {
        if exclude_divisor != 0 && x % exclude_divisor == 0 {
            continue;
        }
        for y in -bound..=bound {
            if form.eval(x, y) == n {
                out.push((x, y));
            }
        }
    }
    out
}

pub fn isqrt_i64(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `⌊√n⌋` for a non-negative big integer; negative input yields `None`.
pub fn isqrt(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        None
    } else {
        Some(n.sqrt())
    }
}

/// Exact square root when `n` is a perfect square.
pub fn exact_sqrt(n: &Integer) -> Option<Integer> {
    let r = isqrt(n)?;
    (&r * &r == *n).then_some(r)
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let g = (a.rem_euclid(m) as i128).extended_gcd(&(m as i128));
    (g.gcd == 1).then(|| (g.x.rem_euclid(m as i128)) as i64)
}

/// The symbol `(ℓ/3)`.
pub fn legendre_mod3(ell: i64) -> i8 {
    match ell.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Primes in `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime_u64(n)).collect()
}
