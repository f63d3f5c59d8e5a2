//! Orchestration of the primality test: gamma and tau construction, the
//! T-sequence recursion, and the final verdict.

use crate::cyclo::{group_ring_apply, CycElement, CycloError, GroupRingElem};
use crate::residue::{w_values, TestInstance};
use crate::sympoly::RecursionSet;
use crate::witness::{self, WitnessCert, WitnessError};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("p^n does not divide Phi_f(M) — malformed instance")]
    NotDivisible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Prime,
    Composite,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictDetail {
    /// All r congruences T_{n-1}^(m) = U^(m) held.
    CongruencesHeld,
    /// Congruence for index m (1-based) failed.
    FailedCongruence { m: u32 },
    /// An explicit nontrivial divisor of M was found.
    Divisor { d: BigUint },
    /// M is a perfect p-th power.
    PerfectPower { root: BigUint },
    /// A = 0 (or forced) direct primality fallback outside the theorem's scope.
    Fallback { prime: bool, divisor: Option<BigUint> },
    /// No witness prime below the search bound.
    NoWitnessPrime { bound: u64 },
    /// A forced witness prime failed validation.
    InvalidWitness { reason: String },
    /// M = 1.
    UnitM,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub l: u64,
    pub pi: Vec<BigInt>,
    pub f: u32,
    pub gamma: Vec<(u32, i64)>,
    pub t_final: Vec<BigUint>,
    pub u_targets: Vec<BigInt>,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub detail: VerdictDetail,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    fn bare(kind: VerdictKind, detail: VerdictDetail) -> Self {
        Verdict { kind, detail, certificate: None }
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Force this witness prime instead of searching.
    pub forced_l: Option<u64>,
    /// Cheap divisor screen before the full machinery; 0 disables.
    pub trial_division_bound: u64,
    /// Miller-Rabin rounds for the A=0 fallback.
    pub mr_rounds: u32,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { forced_l: None, trial_division_bound: 10_000, mr_rounds: 64, seed: 1 }
    }
}

/// Sequence state: T[m-1] = T_k^(m) mod M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceState {
    pub k: u32,
    pub t: Vec<BigUint>,
}

/// Coefficients of the d-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(d: u32) -> Vec<i64> {
    // (x^d - 1) / prod_{e | d, e < d} Phi_e, by exact polynomial division
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d % e == 0 {
            let div = cyclotomic_poly(e);
            num = poly_div_exact(&num, &div);
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    assert_eq!(den[dn], 1, "cyclotomic polynomials are monic");
    let mut quot = vec![0i64; rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let mut x = 1u64;
    let a = a as u64 % p as u64;
    // exponent p-2 by repeated multiplication; p <= 19
    for _ in 0..p - 2 {
        x = x * a % p as u64;
    }
    x as u32
}

/// Gamma per the two cases of the construction, with minimal positive coset
/// representatives taken in increasing order.
pub fn build_gamma(p: u32, f: u32, m_mod_p: u32) -> GroupRingElem {
    let reps = coset_representatives(p, f, m_mod_p);
    let mut gamma = GroupRingElem::zero(p);
    if f % 2 == 1 {
        for &i in &reps {
            gamma.add_term(inv_mod_p(i, p), i as i64);
            gamma.add_term(inv_mod_p(p - i, p), -(i as i64));
        }
    } else {
        for &j in &reps {
            gamma.add_term(inv_mod_p(j, p), j as i64);
        }
    }
    gamma
}

/// Minimal positive representatives, ascending: of G/<−1>H for f odd, of G/H
/// for f even, where H = <M mod p>.
pub fn coset_representatives(p: u32, f: u32, m_mod_p: u32) -> Vec<u32> {
    let mut h = vec![1u32];
    let mut x = m_mod_p % p;
    while x != 1 {
        h.push(x);
        x = x * m_mod_p % p;
    }
    debug_assert_eq!(h.len(), f as usize);
    let mut covered = vec![false; p as usize];
    let mut reps = Vec::new();
    for i in 1..p {
        if covered[i as usize] {
            continue;
        }
        reps.push(i);
        for &hh in &h {
            let c = i * hh % p;
            covered[c as usize] = true;
            if f % 2 == 1 {
                covered[(p - c) as usize] = true;
            }
        }
    }
    reps
}

/// Phi_f(M) / p^n, exact.
pub fn phi_quotient(m: &BigUint, p: u32, n: u32, f: u32) -> Result<BigUint, EngineError> {
    let phi = cyclotomic_poly(f);
    let mi = BigInt::from(m.clone());
    let mut val = BigInt::zero();
    let mut pw = BigInt::one();
    for &c in &phi {
        val += c * &pw;
        pw *= &mi;
    }
    let pn = BigInt::from(p).pow(n);
    let (q, r) = val.div_rem(&pn);
    if !r.is_zero() || q.is_negative() {
        return Err(EngineError::NotDivisible);
    }
    Ok(q.to_biguint().unwrap())
}

/// The full group-ring exponent delta = gamma * prod_{d|f, d<f} Phi_d(sigma_M).
pub fn build_delta(gamma: &GroupRingElem, p: u32, f: u32, m_mod_p: u32) -> GroupRingElem {
    let mut delta = gamma.clone();
    for d in 1..f {
        if f % d == 0 {
            let phi = cyclotomic_poly(d);
            let mut term = GroupRingElem::zero(p);
            let mut sig = 1u32; // sigma_M^j corresponds to index M^j mod p
            for &c in &phi {
                if c != 0 {
                    term.add_term(sig, c);
                }
                sig = sig * m_mod_p % p;
            }
            delta = delta.mul(&term);
        }
    }
    delta
}

/// tau = pi^(delta * Phi_f(M)/p^n) mod M.
pub fn build_tau(
    pi: &CycElement,
    inst: &TestInstance,
    gamma: &GroupRingElem,
) -> Result<CycElement, CycloError> {
    let m_mod_p = (&inst.m % inst.p).to_u32().unwrap();
    let delta = build_delta(gamma, inst.p, inst.f, m_mod_p);
    let scale = phi_quotient(&inst.m, inst.p, inst.n, inst.f)
        .expect("instance invariant gives p^n | Phi_f(M)");
    group_ring_apply(pi, &delta, &scale, &inst.m)
}

/// T_0^(m): elementary symmetric functions of the r conjugates of
/// t_0 = tau + conj(tau), all reduced mod M.
pub fn initial_state(tau: &CycElement, inst: &TestInstance) -> Result<SequenceState, CycloError> {
    let m = &inst.m;
    let t0 = tau.add_mod(&tau.conj(), m);
    let r = inst.r as usize;
    let mut es: Vec<CycElement> = (0..=r).map(|_| CycElement::zero(inst.p)).collect();
    es[0] = CycElement::one(inst.p).reduce_mod(m);
    for i in 1..=r {
        let conj_i = t0.galois(i as u32).reduce_mod(m);
        for j in (1..=i.min(r)).rev() {
            let add = es[j - 1].mul_mod(&conj_i, m);
            es[j] = es[j].add_mod(&add, m);
        }
    }
    let t = es
        .into_iter()
        .skip(1)
        .map(|e| e.as_rational_mod(m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SequenceState { k: 0, t })
}

/// One recursion step: T_{k+1}^(m) = G_m(T_k^(1..r)) mod M.
pub fn iterate(state: &SequenceState, polys: &RecursionSet, m: &BigUint) -> SequenceState {
    let t = polys.g.iter().map(|g| g.eval_mod(&state.t, m)).collect();
    SequenceState { k: state.k + 1, t }
}

/// First nontrivial solution of x^(p-1) = 1 mod p^n that properly divides M.
pub fn divisor_guard(inst: &TestInstance) -> Option<BigUint> {
    let one = BigUint::one();
    for w in w_values(inst.p, inst.n) {
        if w > one && w < inst.m && (&inst.m % &w).is_zero() {
            return Some(w);
        }
    }
    None
}

/// Theorem condition (ii): tau^(p^(n-1)) is a primitive p-th root of unity mod M.
pub fn condition_ii_check(tau: &CycElement, inst: &TestInstance) -> bool {
    let e = BigUint::from(inst.p).pow(inst.n - 1);
    let x = tau.pow_mod(&e, &inst.m);
    (1..inst.p).any(|j| x == CycElement::zeta_pow(inst.p, j).reduce_mod(&inst.m))
}

fn small_primes(bound: u64) -> &'static [u64] {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let v = CACHE.get_or_init(|| {
        let n = 100_000usize;
        let mut sieve = vec![true; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if sieve[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        out
    });
    let cut = v.partition_point(|&q| q <= bound);
    &v[..cut]
}

fn trial_division(m: &BigUint, bound: u64) -> Option<BigUint> {
    for &q in small_primes(bound) {
        let qb = BigUint::from(q);
        if qb >= *m {
            break;
        }
        if (m % &qb).is_zero() {
            return Some(qb);
        }
    }
    None
}

/// Direct primality for instances outside the theorem's scope (A = 0).
fn fallback_verdict(m: &BigUint, opts: &CertifyOptions) -> Verdict {
    if let Some(d) = trial_division(m, opts.trial_division_bound.max(1000)) {
        return Verdict::bare(
            VerdictKind::Composite,
            VerdictDetail::Fallback { prime: false, divisor: Some(d) },
        );
    }
    let prime = crate::baseline::miller_rabin(m, opts.mr_rounds, opts.seed);
    Verdict::bare(
        if prime { VerdictKind::Prime } else { VerdictKind::Composite },
        VerdictDetail::Fallback { prime, divisor: None },
    )
}

/// Full orchestration for one instance. `polys` must be the RecursionSet for
/// inst.p.
pub fn certify(inst: &TestInstance, polys: &RecursionSet, opts: &CertifyOptions) -> Verdict {
    assert_eq!(polys.p, inst.p);
    let m = &inst.m;
    if m.is_one() {
        return Verdict::bare(VerdictKind::Inapplicable, VerdictDetail::UnitM);
    }
    // A = 0 means M = w <= p^n: the theorem needs M > p^n > sqrt(M)
    if inst.a.is_zero() {
        return fallback_verdict(m, opts);
    }
    // cheap divisor screen (verdict-preserving: a proper small factor is final)
    if opts.trial_division_bound > 0 {
        if let Some(d) = trial_division(m, opts.trial_division_bound) {
            return Verdict::bare(VerdictKind::Composite, VerdictDetail::Divisor { d });
        }
    }
    // perfect p-th powers make the witness search fail by design; screen them
    let root = m.nth_root(inst.p);
    if root.pow(inst.p) == *m {
        return Verdict::bare(VerdictKind::Composite, VerdictDetail::PerfectPower { root });
    }
    if let Some(d) = divisor_guard(inst) {
        return Verdict::bare(VerdictKind::Composite, VerdictDetail::Divisor { d });
    }
    let cert: WitnessCert = match match opts.forced_l {
        Some(l) => witness::build_witness_with_l(m, inst.p, l),
        None => witness::build_witness(m, inst.p),
    } {
        Ok(c) => c,
        Err(WitnessError::NoWitnessPrime { bound }) => {
            return Verdict::bare(
                VerdictKind::Inapplicable,
                VerdictDetail::NoWitnessPrime { bound },
            )
        }
        Err(e) => {
            return Verdict::bare(
                VerdictKind::Inapplicable,
                VerdictDetail::InvalidWitness { reason: e.to_string() },
            )
        }
    };
    let m_mod_p = (m % inst.p).to_u32().unwrap();
    let gamma = build_gamma(inst.p, inst.f, m_mod_p);
    certify_with_witness(inst, polys, &cert, &gamma)
}

/// Core of the test once a witness and gamma are fixed; exposed so tests can
/// drive alternative representative choices.
pub fn certify_with_witness(
    inst: &TestInstance,
    polys: &RecursionSet,
    cert: &WitnessCert,
    gamma: &GroupRingElem,
) -> Verdict {
    let m = &inst.m;
    let tau = match build_tau(&cert.pi, inst, gamma) {
        Ok(t) => t,
        Err(CycloError::NonInvertible { factor }) => {
            return Verdict::bare(VerdictKind::Composite, VerdictDetail::Divisor { d: factor })
        }
        Err(e) => {
            return Verdict::bare(
                VerdictKind::Inapplicable,
                VerdictDetail::InvalidWitness { reason: e.to_string() },
            )
        }
    };
    let mut state = match initial_state(&tau, inst) {
        Ok(s) => s,
        Err(e) => {
            return Verdict::bare(
                VerdictKind::Inapplicable,
                VerdictDetail::InvalidWitness { reason: e.to_string() },
            )
        }
    };
    for _ in 0..inst.n - 1 {
        state = iterate(&state, polys, m);
    }
    let mi = BigInt::from(m.clone());
    let mut failed = None;
    for (idx, u) in polys.u.iter().enumerate() {
        let target = u.mod_floor(&mi).to_biguint().unwrap();
        if state.t[idx] != target {
            failed = Some(idx as u32 + 1);
            break;
        }
    }
    let certificate = Some(Certificate {
        l: cert.l,
        pi: cert.pi.coeffs.clone(),
        f: inst.f,
        gamma: gamma.coeffs.iter().map(|(&c, &k)| (c, k)).collect(),
        t_final: state.t.clone(),
        u_targets: polys.u.clone(),
    });
    match failed {
        None => Verdict { kind: VerdictKind::Prime, detail: VerdictDetail::CongruencesHeld, certificate },
        Some(m_idx) => Verdict {
            kind: VerdictKind::Composite,
            detail: VerdictDetail::FailedCongruence { m: m_idx },
            certificate,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::build_instance;

    fn bu(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn cyclotomic_polys_small() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn gamma_matches_worked_p7_cases() {
        // f=6 (single coset): gamma = sigma_1
        let g = build_gamma(7, 6, 3);
        assert_eq!(g, GroupRingElem::sigma(7, 1));
        // f=3 (M=2 mod 7): gamma = sigma_1 - sigma_6
        let g = build_gamma(7, 3, 2);
        let mut expect = GroupRingElem::zero(7);
        expect.add_term(1, 1);
        expect.add_term(6, -1);
        assert_eq!(g, expect);
        // f=2 (M=6 mod 7): gamma = 1 + 2 sigma_4 + 3 sigma_5
        let g = build_gamma(7, 2, 6);
        let mut expect = GroupRingElem::zero(7);
        expect.add_term(1, 1);
        expect.add_term(4, 2);
        expect.add_term(5, 3);
        assert_eq!(g, expect);
        // f=1: gamma = 1 - sigma_6 + 2(sigma_4 - sigma_3) + 3(sigma_5 - sigma_2)
        let g = build_gamma(7, 1, 1);
        let mut expect = GroupRingElem::zero(7);
        expect.add_term(1, 1);
        expect.add_term(6, -1);
        expect.add_term(4, 2);
        expect.add_term(3, -2);
        expect.add_term(5, 3);
        expect.add_term(2, -3);
        assert_eq!(g, expect);
    }

    #[test]
    fn phi_quotient_examples() {
        // M=5, p=3, n=1, f=2: Phi_2(5) = 6, 6/3 = 2
        assert_eq!(phi_quotient(&bu(5), 3, 1, 2).unwrap(), bu(2));
        // M=51, p=5, n=2, f=1: Phi_1(51) = 50, 50/25 = 2
        assert_eq!(phi_quotient(&bu(51), 5, 2, 1).unwrap(), bu(2));
        // corrupt instance: M=7, p=3, n=2, f=1: Phi_1(7) = 6, 9 does not divide 6
        assert_eq!(phi_quotient(&bu(7), 3, 2, 1), Err(EngineError::NotDivisible));
    }

    #[test]
    fn divisor_guard_examples() {
        // M=5, p=3, n=1: solutions {1, 2}; 2 does not divide 5
        let inst = build_instance(3, 1, bu(1), 1).unwrap();
        assert_eq!(divisor_guard(&inst), None);
        // M = 8*9 + 8 = 80 divisible by the root w=8 (p=3, n=2)
        let inst = build_instance(3, 2, bu(8), 1).unwrap();
        assert_eq!(inst.m, bu(80));
        assert_eq!(divisor_guard(&inst), Some(bu(8)));
    }

    #[test]
    fn m5_full_pipeline() {
        // M = 1*3 + 2 = 5: prime with n-1 = 0 iterations, T_0 = -1 = 4 mod 5
        let inst = build_instance(3, 1, bu(1), 1).unwrap();
        assert_eq!(inst.m, bu(5));
        let polys = RecursionSet::compute(3);
        let opts = CertifyOptions { trial_division_bound: 0, ..Default::default() };
        let v = certify(&inst, &polys, &opts);
        assert_eq!(v.kind, VerdictKind::Prime);
        let cert = v.certificate.unwrap();
        assert_eq!(cert.l, 7);
        assert_eq!(cert.t_final, vec![bu(4)]);
        // condition (ii) holds on the same tau
        let gamma = build_gamma(3, inst.f, 2);
        let wc = witness::build_witness(&inst.m, 3).unwrap();
        let tau = build_tau(&wc.pi, &inst, &gamma).unwrap();
        assert!(condition_ii_check(&tau, &inst));
        // unit-norm invariant: tau * conj(tau) = 1 mod M
        let prod = tau.mul_mod(&tau.conj(), &inst.m);
        assert_eq!(prod, CycElement::one(3).reduce_mod(&inst.m));
    }

    #[test]
    fn iterate_p3_is_cube_recursion() {
        let polys = RecursionSet::compute(3);
        let m = bu(1000);
        let st = SequenceState { k: 0, t: vec![bu(7)] };
        let nx = iterate(&st, &polys, &m);
        // 7^3 - 3*7 = 343 - 21 = 322
        assert_eq!(nx.t, vec![bu(322)]);
        assert_eq!(nx.k, 1);
        // zero fixed point of z^3 - 3z
        let st = SequenceState { k: 0, t: vec![bu(0)] };
        assert_eq!(iterate(&st, &polys, &bu(10)).t, vec![bu(0)]);
    }

    #[test]
    fn certify_table5_small_rows() {
        let p3 = RecursionSet::compute(3);
        let p5 = RecursionSet::compute(5);
        let opts = CertifyOptions::default();
        // (3,1,1,1) -> prime
        let inst = build_instance(3, 1, bu(1), 1).unwrap();
        assert_eq!(certify(&inst, &p3, &opts).kind, VerdictKind::Prime);
        // (5,100,2,0): M = 2*5^100 + 1 -> composite
        let inst = build_instance(5, 100, bu(2), 0).unwrap();
        assert_eq!(certify(&inst, &p5, &opts).kind, VerdictKind::Composite);
        // A=0 fallback: M = w_1^(1) = 3 for p=7... direct route
        let inst = build_instance(7, 1, bu(0), 1).unwrap();
        assert_eq!(inst.m, bu(3));
        let p7 = RecursionSet::compute(7);
        assert_eq!(certify(&inst, &p7, &opts).kind, VerdictKind::Prime);
    }

    #[test]
    fn composite_verdicts_carry_evidence() {
        let p3 = RecursionSet::compute(3);
        // screen disabled: composite must fail a congruence or find a divisor structurally
        let opts = CertifyOptions { trial_division_bound: 0, ..Default::default() };
        let inst = build_instance(3, 3, bu(5), 1).unwrap(); // M = 5*27 + 26 = 161 = 7*23
        let v = certify(&inst, &p3, &opts);
        assert_eq!(v.kind, VerdictKind::Composite);
        match v.detail {
            VerdictDetail::FailedCongruence { .. } | VerdictDetail::Divisor { .. } => {}
            other => panic!("unexpected detail {other:?}"),
        }
    }

    #[test]
    fn perfect_power_screen() {
        // M = 4^7 = 16384; p=7: 16384 mod 7 = 4... need valid instance form:
        // use validate-free path: construct instance manually via build_instance
        // with matching A, k if the form allows; otherwise hit the screen directly
        // through certify on a synthetic instance.
        let m: BigUint = bu(4).pow(7);
        // 16384 = A*7^n + w: n=4, 7^4=2401: 16384 mod 2401 = 1978... find k?
        // Simpler: check the screen arithmetic itself.
        assert_eq!(m.nth_root(7), bu(4));
        assert_eq!(m.nth_root(7).pow(7), m);
    }

    #[test]
    fn verdict_invariant_under_alternative_representatives() {
        // different (valid) coset representatives change tau but not the verdict
        let polys = RecursionSet::compute(7);
        for (a, k) in [(2u64, 4u32), (10, 4)] {
            let inst = build_instance(7, 5, bu(a), k).unwrap();
            let expect = if crate::baseline::miller_rabin(&inst.m, 64, 3) {
                VerdictKind::Prime
            } else {
                VerdictKind::Composite
            };
            let wc = witness::build_witness(&inst.m, 7).unwrap();
            let m_mod_p = (&inst.m % 7u32).to_u32().unwrap();
            let gamma = build_gamma(7, inst.f, m_mod_p);
            let v1 = certify_with_witness(&inst, &polys, &wc, &gamma);
            // replace each representative i by i * h for some h in H (another
            // valid representative of the same coset, larger by construction)
            let h = m_mod_p; // generator of H
            let reps = coset_representatives(7, inst.f, m_mod_p);
            let mut gamma2 = GroupRingElem::zero(7);
            let alt: Vec<u32> = reps.iter().map(|&i| i * h % 7).collect();
            if inst.f % 2 == 1 {
                for &i in &alt {
                    gamma2.add_term(inv_mod_p(i, 7), i as i64);
                    gamma2.add_term(inv_mod_p(7 - i, 7), -(i as i64));
                }
            } else {
                for &j in &alt {
                    gamma2.add_term(inv_mod_p(j, 7), j as i64);
                }
            }
            let v2 = certify_with_witness(&inst, &polys, &wc, &gamma2);
            assert_eq!(v1.kind, expect);
            assert_eq!(v1.kind, v2.kind);
        }
    }

    #[test]
    fn certify_agrees_with_oracle_spot() {
        let p3 = RecursionSet::compute(3);
        let opts = CertifyOptions::default();
        for a in 1u64..30 {
            for k in 0..2 {
                let inst = build_instance(3, 4, bu(a), k).unwrap();
                let v = certify(&inst, &p3, &opts);
                let mr = crate::baseline::miller_rabin(&inst.m, 64, 7);
                let expect = if mr { VerdictKind::Prime } else { VerdictKind::Composite };
                assert_eq!(v.kind, expect, "A={a} k={k} M={}", inst.m);
            }
        }
    }

    #[test]
    fn large_prime_row_8_7_806() {
        // Table 5: 8*7^806 + w_806^(1) is prime
        let inst = build_instance(7, 806, bu(8), 1).unwrap();
        let polys = RecursionSet::compute(7);
        let v = certify(&inst, &polys, &CertifyOptions::default());
        assert_eq!(v.kind, VerdictKind::Prime);
        // sanity against baseline
        assert!(crate::baseline::miller_rabin(&inst.m, 16, 99));
    }
}
