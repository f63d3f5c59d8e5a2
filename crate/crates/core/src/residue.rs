//! Construction of test instances M = A*p^n + w_n^(k), where the w_n^(k) are the
//! p-1 solutions of x^(p-1) = 1 in Z/p^n, indexed by discrete log base the
//! canonical primitive root.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("A = {a} out of range [0, p^n)")]
    AOutOfRange { a: BigUint },
    #[error("residue index k = {k} out of range [0, p-2]")]
    KOutOfRange { k: u32 },
    #[error("{0} is not an odd prime <= 19")]
    UnsupportedP(u32),
    #[error("M is not of the form A*p^n + w_n: {reason}")]
    NotOfForm { reason: String },
}

pub const SUPPORTED_P: [u32; 7] = [3, 5, 7, 11, 13, 17, 19];

pub fn check_p(p: u32) -> Result<(), InstanceError> {
    if SUPPORTED_P.contains(&p) {
        Ok(())
    } else {
        Err(InstanceError::UnsupportedP(p))
    }
}

/// Smallest primitive root mod p that is also a primitive root mod p^2
/// (and hence mod every p^m). Works for any odd prime p < 100.
pub fn primitive_root(p: u32) -> u32 {
    let factors = prime_factors(p - 1);
    let mut g = 2u32;
    loop {
        if is_primitive_root(g, p, &factors) {
            // g generates (Z/p^2)^* unless g^(p-1) = 1 mod p^2; then g+p works.
            let p2 = (p as u64) * (p as u64);
            if pow_mod_u64(g as u64, (p - 1) as u64, p2) == 1 {
                return g + p;
            }
            return g;
        }
        g += 1;
    }
}

fn is_primitive_root(g: u32, p: u32, factors: &[u32]) -> bool {
    if g % p == 0 {
        return false;
    }
    factors
        .iter()
        .all(|&q| pow_mod_u64(g as u64, ((p - 1) / q) as u64, p as u64) != 1)
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut fs = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            fs.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

pub fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// The p-1 solutions of x^(p-1) = 1 in Z/p^n, ordered as w^(k) = g^(k*p^(n-1)),
/// k = 0..p-2, for the canonical primitive root g. w^(0) = 1 always.
pub fn w_values(p: u32, n: u32) -> Vec<BigUint> {
    (0..p - 1).map(|k| w_value(p, n, k)).collect()
}

pub fn w_value(p: u32, n: u32, k: u32) -> BigUint {
    let pn = BigUint::from(p).pow(n);
    let g = BigUint::from(primitive_root(p));
    let e = BigUint::from(k) * BigUint::from(p).pow(n - 1);
    g.modpow(&e, &pn)
}

/// Multiplicative order of a mod p (a not divisible by p).
pub fn multiplicative_order(a: u32, p: u32) -> u32 {
    let a = a % p;
    assert!(a != 0);
    let mut x = a as u64;
    let mut ord = 1;
    while x != 1 {
        x = x * a as u64 % p as u64;
        ord += 1;
    }
    ord
}

/// A fully specified test instance.
#[derive(Debug, Clone)]
pub struct TestInstance {
    pub p: u32,
    pub n: u32,
    pub a: BigUint,
    /// Residue-class index of w, in [0, p-2].
    pub k: u32,
    pub w: BigUint,
    pub m: BigUint,
    /// Multiplicative order f of M mod p.
    pub f: u32,
    /// Degree r = (p-1)/2 of the real subfield; number of symmetric functions tracked.
    pub r: u32,
}

pub fn build_instance(p: u32, n: u32, a: BigUint, k: u32) -> Result<TestInstance, InstanceError> {
    check_p(p)?;
    assert!(n >= 1);
    if k > p - 2 {
        return Err(InstanceError::KOutOfRange { k });
    }
    let pn = BigUint::from(p).pow(n);
    if a >= pn {
        return Err(InstanceError::AOutOfRange { a });
    }
    let w = w_value(p, n, k);
    let m = &a * &pn + &w;
    let m_mod_p = (&m % p).to_u32_digits().first().copied().unwrap_or(0);
    let f = if m_mod_p == 0 { 0 } else { multiplicative_order(m_mod_p, p) };
    debug_assert!(f != 0, "w is coprime to p, so M is too");
    Ok(TestInstance { p, n, a, k, w, m, f, r: (p - 1) / 2 })
}

/// Decompose M as A*p^n + w_n, accepting iff p^n | M^(p-1) - 1 and p^(2n) > M
/// (the two clauses of the form criterion). Returns (A, w).
pub fn validate_form(m: &BigUint, p: u32, n: u32) -> Result<(BigUint, BigUint), InstanceError> {
    check_p(p)?;
    if *m <= BigUint::one() {
        return Err(InstanceError::NotOfForm { reason: "M must exceed 1".into() });
    }
    let pn = BigUint::from(p).pow(n);
    if &pn * &pn <= *m {
        return Err(InstanceError::NotOfForm { reason: format!("p^2n = {p}^{} <= M", 2 * n) });
    }
    if (m % p).is_zero() {
        return Err(InstanceError::NotOfForm { reason: format!("M ≡ 0 mod {p}") });
    }
    if m.modpow(&BigUint::from(p - 1), &pn) != BigUint::one() {
        return Err(InstanceError::NotOfForm {
            reason: "p^n does not divide M^(p-1) - 1".into(),
        });
    }
    Ok((m / &pn, m % &pn))
}

/// Index k with w_values(p, n)[k] == w.
pub fn w_index(w: &BigUint, p: u32, n: u32) -> Option<u32> {
    w_values(p, n).iter().position(|x| x == w).map(|i| i as u32)
}
