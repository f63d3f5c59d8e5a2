//! Arithmetic in Z[zeta_p] and Z[zeta_p]/M on the power basis 1, zeta, ..., zeta^(p-2),
//! plus the group ring Z[Gal(Q(zeta_p)/Q)] acting on it.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    /// The norm of the element shares a factor with the modulus, so no inverse
    /// exists; the factor is a divisor of the modulus (composite evidence).
    #[error("element not invertible mod M; gcd(norm, M) = {factor}")]
    NonInvertible { factor: BigUint },
    /// Element has nonzero coefficients beyond the rational one.
    #[error("element is not rational mod M")]
    NotRational,
    #[error("mismatched p: {0} vs {1}")]
    MixedP(u32, u32),
}

/// Element of Z[zeta_p] (or its reduction mod M) with coefficients on the power
/// basis zeta^0..zeta^(p-3+1); `coeffs.len() == p-1` always.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycElement {
    pub p: u32,
    pub coeffs: Vec<BigInt>,
}

impl CycElement {
    pub fn new(p: u32, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), (p - 1) as usize);
        CycElement { p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        CycElement { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn one(p: u32) -> Self {
        let mut e = Self::zero(p);
        e.coeffs[0] = BigInt::one();
        e
    }

    pub fn from_int(p: u32, v: BigInt) -> Self {
        let mut e = Self::zero(p);
        e.coeffs[0] = v;
        e
    }

    /// zeta^k as a basis element (k reduced mod p; zeta^(p-1) uses the relation).
    pub fn zeta_pow(p: u32, k: u32) -> Self {
        let mut raw = vec![BigInt::zero(); p as usize];
        raw[(k % p) as usize] = BigInt::one();
        Self::from_power_expansion(p, &raw)
    }

    /// Rewrite sum raw[k]*zeta^k (any number of terms, exponents by index) on the
    /// power basis using zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)).
    pub fn from_power_expansion(p: u32, raw: &[BigInt]) -> Self {
        let mut folded = vec![BigInt::zero(); p as usize];
        for (k, c) in raw.iter().enumerate() {
            folded[k % p as usize] += c;
        }
        let top = folded.pop().unwrap();
        let coeffs: Vec<BigInt> = folded.into_iter().map(|c| c - &top).collect();
        CycElement { p, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Canonicalize all coefficients into [0, M).
    pub fn reduce_mod(&self, m: &BigUint) -> Self {
        let mi = BigInt::from(m.clone());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&mi);
                r
            })
            .collect();
        CycElement { p: self.p, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycElement { p: self.p, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycElement { p: self.p, coeffs }
    }

    pub fn add_mod(&self, other: &Self, m: &BigUint) -> Self {
        self.add(other).reduce_mod(m)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycElement { p: self.p, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Exact product in Z[zeta_p].
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let d = (self.p - 1) as usize;
        let mut raw = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        Self::from_power_expansion(self.p, &raw)
    }

    /// Product with canonical reduction mod M.
    pub fn mul_mod(&self, other: &Self, m: &BigUint) -> Self {
        self.mul(other).reduce_mod(m)
    }

    /// Galois action sigma_c: zeta -> zeta^c, for gcd(c, p) = 1.
    pub fn galois(&self, c: u32) -> Self {
        let p = self.p;
        let c = c % p;
        assert!(c != 0, "sigma_c needs gcd(c, p) = 1");
        let mut raw = vec![BigInt::zero(); p as usize];
        for (j, a) in self.coeffs.iter().enumerate() {
            raw[((j as u32 * c) % p) as usize] += a;
        }
        Self::from_power_expansion(p, &raw)
    }

    /// Complex conjugation sigma_{-1}.
    pub fn conj(&self) -> Self {
        self.galois(self.p - 1)
    }

    /// Square-and-multiply exponentiation mod M.
    pub fn pow_mod(&self, e: &BigUint, m: &BigUint) -> Self {
        if e.is_zero() {
            return Self::one(self.p).reduce_mod(m);
        }
        let base = self.reduce_mod(m);
        let mut acc = base.clone();
        let bits = e.bits();
        for i in (0..bits - 1).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Field norm N(a) = prod_{c=1}^{p-1} sigma_c(a), exact in Z.
    pub fn norm(&self) -> BigInt {
        let mut prod = self.clone();
        for c in 2..self.p {
            prod = prod.mul(&self.galois(c));
        }
        for c in prod.coeffs.iter().skip(1) {
            debug_assert!(c.is_zero(), "norm must be rational");
        }
        prod.coeffs[0].clone()
    }

    /// Inverse mod M via b = prod_{c != 1} sigma_c(a), so a*b = N(a) in Z.
    /// A shared factor of N(a) and M is returned as composite evidence.
    pub fn invert_mod(&self, m: &BigUint) -> Result<Self, CycloError> {
        let a = self.reduce_mod(m);
        let mut b = Self::one(self.p).reduce_mod(m);
        for c in 2..self.p {
            b = b.mul_mod(&a.galois(c), m);
        }
        let n = a.mul_mod(&b, m);
        for c in n.coeffs.iter().skip(1) {
            if !c.is_zero() {
                return Err(CycloError::NotRational);
            }
        }
        let n0 = n.coeffs[0].to_biguint().expect("canonical coeff is nonnegative");
        let inv = mod_inverse(&n0, m).ok_or_else(|| CycloError::NonInvertible {
            factor: n0.gcd(m),
        })?;
        Ok(b.scale(&BigInt::from(inv)).reduce_mod(m))
    }

    /// Extract the rational value of an element that reduces to Z/M.
    pub fn as_rational_mod(&self, m: &BigUint) -> Result<BigUint, CycloError> {
        let a = self.reduce_mod(m);
        for c in a.coeffs.iter().skip(1) {
            if !c.is_zero() {
                return Err(CycloError::NotRational);
            }
        }
        Ok(a.coeffs[0].to_biguint().unwrap())
    }
}

/// Inverse of a mod m, if gcd(a, m) = 1.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let eg = a.extended_gcd(&m);
    if !eg.gcd.is_one() {
        return None;
    }
    Some(eg.x.mod_floor(&m).to_biguint().unwrap())
}

/// Element of the integral group ring Z[G], G = (Z/p)^* acting by sigma_c.
/// Keys are c in [1, p-1]; zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElem {
    pub p: u32,
    pub coeffs: BTreeMap<u32, i64>,
}

impl GroupRingElem {
    pub fn zero(p: u32) -> Self {
        GroupRingElem { p, coeffs: BTreeMap::new() }
    }

    pub fn identity(p: u32) -> Self {
        Self::sigma(p, 1)
    }

    pub fn sigma(p: u32, c: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(c % p, 1);
        GroupRingElem { p, coeffs }
    }

    pub fn add_term(&mut self, c: u32, k: i64) {
        let c = c % self.p;
        assert!(c != 0);
        let e = self.coeffs.entry(c).or_insert(0);
        *e += k;
        if *e == 0 {
            self.coeffs.remove(&c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let mut out = self.clone();
        for (&c, &k) in &other.coeffs {
            out.add_term(c, k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let mut out = Self::zero(self.p);
        for (&c1, &k1) in &self.coeffs {
            for (&c2, &k2) in &other.coeffs {
                out.add_term(c1 * c2 % self.p, k1 * k2);
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(self.p);
        }
        GroupRingElem {
            p: self.p,
            coeffs: self.coeffs.iter().map(|(&c, &v)| (c, v * k)).collect(),
        }
    }
}

/// Apply alpha^(delta * scale) for alpha in (Z[zeta]/M)^*, delta in Z[G]:
/// (prod_c sigma_c(alpha)^(k_c))^scale. Negative k_c require inverting, which
/// can fail with composite evidence.
pub fn group_ring_apply(
    alpha: &CycElement,
    delta: &GroupRingElem,
    scale: &BigUint,
    m: &BigUint,
) -> Result<CycElement, CycloError> {
    assert_eq!(alpha.p, delta.p);
    let mut pos = CycElement::one(alpha.p).reduce_mod(m);
    let mut neg = CycElement::one(alpha.p).reduce_mod(m);
    for (&c, &k) in &delta.coeffs {
        let s = alpha.galois(c).reduce_mod(m);
        let pw = s.pow_mod(&BigUint::from(k.unsigned_abs()), m);
        if k > 0 {
            pos = pos.mul_mod(&pw, m);
        } else {
            neg = neg.mul_mod(&pw, m);
        }
    }
    let base = pos.mul_mod(&neg.invert_mod(m)?, m);
    Ok(base.pow_mod(scale, m))
}
