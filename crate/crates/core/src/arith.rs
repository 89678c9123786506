//! Integer recursions for the lens space family, continued fractions and
//! the Bredon-Wood minimal crosscap number.
//!
//! The family is `p_0 = 0`, `q_0 = 1`,
//! `p_k = (kappa+1) p_{k-1} + kappa q_{k-1}`, `q_k = p_{k-1} + q_{k-1}`.
//! `kappa = 2` gives (2,1), (8,3), (30,11), (112,41), ...
//!
//! The crosscap recipe is sometimes written `x_max(p,q)` and sometimes
//! `x_min(p,q)`; both mean the minimal crosscap number, exposed here as
//! [`bredon_wood_crosscap`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{LensError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaSequence {
    pub kappa: u64,
    /// `(p_k, q_k)` for `k = 0..=n`.
    pub terms: Vec<(BigInt, BigInt)>,
}

impl KappaSequence {
    pub fn p(&self, k: usize) -> &BigInt {
        &self.terms[k].0
    }

    pub fn q(&self, k: usize) -> &BigInt {
        &self.terms[k].1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `q_from + .. + q_to`, zero when the range is empty.
    pub fn q_sum(&self, from: usize, to: usize) -> BigInt {
        if from > to {
            return BigInt::zero();
        }
        (from..=to).map(|k| self.q(k)).sum()
    }

    /// Terms as machine integers, for the surface construction.
    pub fn to_u64_terms(&self) -> Result<Vec<(u64, u64)>> {
        self.terms
            .iter()
            .map(|(p, q)| match (p.to_u64(), q.to_u64()) {
                (Some(p), Some(q)) => Ok((p, q)),
                _ => Err(LensError::Overflow(format!("({p}, {q})"))),
            })
            .collect()
    }
}

impl Serialize for KappaSequence {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            kappa: u64,
            terms: Vec<[serde_json::Value; 2]>,
        }
        let terms = self
            .terms
            .iter()
            .map(|(p, q)| [big_to_json(p), big_to_json(q)])
            .collect();
        Out {
            kappa: self.kappa,
            terms,
        }
        .serialize(serializer)
    }
}

/// JSON number when it fits, decimal string otherwise.
pub fn big_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

pub fn lens_sequence(kappa: u64, n: usize) -> Result<KappaSequence> {
    if kappa == 0 {
        return Err(LensError::OutOfRange("kappa must be at least 1".into()));
    }
    let k = BigInt::from(kappa);
    let mut terms = Vec::with_capacity(n + 1);
    terms.push((BigInt::zero(), BigInt::one()));
    for _ in 0..n {
        let (p, q) = terms.last().unwrap();
        let next = ((&k + 1u32) * p + &k * q, p + q);
        terms.push(next);
    }
    Ok(KappaSequence { kappa, terms })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    /// Which of the six identities, 1 through 6.
    pub formula: u8,
    /// The indices the instance was taken at, e.g. `n=3` or `l=2,n=3`.
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaReport {
    pub kappa: u64,
    pub n: usize,
    pub checks: Vec<FormulaCheck>,
}

impl FormulaReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FormulaCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn passes(&self, formula: u8) -> bool {
        self.checks
            .iter()
            .filter(|c| c.formula == formula)
            .all(|c| c.pass)
    }
}

/// Checks the six identities at index `n`; identities quantified over a
/// second index `l` or `m` are checked for every admissible value up to
/// `n + 1`.
pub fn check_formulae(kappa: u64, n: usize) -> Result<FormulaReport> {
    if n == 0 {
        return Err(LensError::OutOfRange("n must be at least 1".into()));
    }
    let seq = lens_sequence(kappa, n + 1)?;
    let k = BigInt::from(kappa);
    let (p, q) = (|i: usize| seq.p(i).clone(), |i: usize| seq.q(i).clone());
    let mut checks = Vec::new();
    let mut push = |formula: u8, instance: String, lhs: BigInt, rhs: BigInt| {
        checks.push(FormulaCheck {
            formula,
            instance,
            pass: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    };

    // (1) p_n = kappa q_n + p_{n-1}
    push(1, format!("n={n}"), p(n), &k * q(n) + p(n - 1));

    // (2) kappa (q_1 + .. + q_l) = p_l
    for l in 1..=n {
        push(2, format!("l={l}"), &k * seq.q_sum(1, l), p(l));
    }

    // (3) -(q_1+..+q_{l-1}) p_n + q_l q_n = -(q_1+..+q_{l-2}) p_{n-1} + q_{l-1} q_{n-1}
    for l in 2..=n + 1 {
        let lhs = -seq.q_sum(1, l - 1) * p(n) + q(l) * q(n);
        let rhs = -seq.q_sum(1, l - 2) * p(n - 1) + q(l - 1) * q(n - 1);
        push(3, format!("l={l},n={n}"), lhs, rhs);
    }

    // (4) -(q_1+..+q_{m-1}) p_n + q_m q_n = q_{n-(m-1)}, hence the congruence
    for m in 1..=n + 1 {
        let target = q(n + 1 - m);
        let lhs = -seq.q_sum(1, m - 1) * p(n) + q(m) * q(n);
        push(4, format!("m={m},n={n}"), lhs, target.clone());
        let modulus = p(n);
        push(
            4,
            format!("m={m},n={n} mod p_n"),
            (q(m) * q(n)).mod_floor(&modulus),
            target.mod_floor(&modulus),
        );
    }

    // (5) (kappa+1) q_n - p_n = q_{n-1}
    push(5, format!("n={n}"), (&k + 1u32) * q(n) - p(n), q(n - 1));

    // (6) (2 kappa + 1) q_n - 2 p_n = -p_{n-1} + q_{n-1}
    push(
        6,
        format!("n={n}"),
        (&k * 2u32 + 1u32) * q(n) - p(n) * 2u32,
        -p(n - 1) + q(n - 1),
    );

    Ok(FormulaReport { kappa, n, checks })
}

/// `[a_0; a_1, .., a_m]` with `a_0 >= 0`, `a_i > 0` and `a_m > 1` unless
/// `m = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub terms: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn evaluate(&self) -> BigRational {
        let mut iter = self.terms.iter().rev();
        let last = iter.next().expect("non-empty expansion");
        let mut value = BigRational::from_integer(last.clone());
        for a in iter {
            value = BigRational::from_integer(a.clone()) + value.recip();
        }
        value
    }

    pub fn is_canonical(&self) -> bool {
        let Some((first, rest)) = self.terms.split_first() else {
            return false;
        };
        !first.is_negative()
            && rest.iter().all(|a| a.is_positive())
            && (rest.is_empty() || *rest.last().unwrap() > BigInt::one())
    }
}

pub fn continued_fraction(p: &BigInt, q: &BigInt) -> Result<ContinuedFraction> {
    if !q.is_positive() || p <= q {
        return Err(LensError::InvalidFraction(format!(
            "need p > q >= 1, got p = {p}, q = {q}"
        )));
    }
    if !p.gcd(q).is_one() {
        return Err(LensError::InvalidFraction(format!(
            "{p} and {q} are not coprime"
        )));
    }
    let mut terms = Vec::new();
    let (mut num, mut den) = (p.clone(), q.clone());
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        terms.push(a);
        num = den;
        den = r;
    }
    Ok(ContinuedFraction { terms })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscapReport {
    pub cf: Vec<BigInt>,
    pub b: Vec<BigInt>,
    pub crosscap: BigInt,
}

impl Serialize for CrosscapReport {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            cf: Vec<serde_json::Value>,
            b: Vec<serde_json::Value>,
            crosscap: serde_json::Value,
        }
        Out {
            cf: self.cf.iter().map(big_to_json).collect(),
            b: self.b.iter().map(big_to_json).collect(),
            crosscap: big_to_json(&self.crosscap),
        }
        .serialize(serializer)
    }
}

/// The `b_i` sequence: `b_0 = a_0`; `b_i = a_i` when `b_{i-1} != a_{i-1}`
/// or `b_0 + .. + b_{i-1}` is odd, else `0`.
pub fn bredon_wood_b(cf: &ContinuedFraction) -> Vec<BigInt> {
    let a = &cf.terms;
    let mut b: Vec<BigInt> = Vec::with_capacity(a.len());
    let mut sum = BigInt::zero();
    for (i, ai) in a.iter().enumerate() {
        let bi = if i == 0 || b[i - 1] != a[i - 1] || sum.is_odd() {
            ai.clone()
        } else {
            BigInt::zero()
        };
        sum += &bi;
        b.push(bi);
    }
    b
}

/// Minimal crosscap number of L(p,q) for even p: half the sum of the `b_i`.
pub fn bredon_wood_crosscap(p: &BigInt, q: &BigInt) -> Result<CrosscapReport> {
    if p.is_odd() {
        return Err(LensError::OddP(p.to_string()));
    }
    let reduced = q.mod_floor(p);
    let cf = continued_fraction(p, &reduced)?;
    let b = bredon_wood_b(&cf);
    let total: BigInt = b.iter().sum();
    if total.is_odd() {
        return Err(LensError::InvalidFraction(format!(
            "b-sequence of {p}/{reduced} has odd sum {total}"
        )));
    }
    Ok(CrosscapReport {
        cf: cf.terms,
        b,
        crosscap: total / 2u32,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn pair(p: i64, q: i64) -> (BigInt, BigInt) {
        (BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn kappa_two_sequence() {
        let seq = lens_sequence(2, 6).unwrap();
        let expected = [
            (0, 1),
            (2, 1),
            (8, 3),
            (30, 11),
            (112, 41),
            (418, 153),
            (1560, 571),
        ];
        let expected: Vec<_> = expected.iter().map(|&(p, q)| pair(p, q)).collect();
        assert_eq!(seq.terms, expected);
        assert_eq!(lens_sequence(2, 0).unwrap().terms, vec![pair(0, 1)]);
    }

    #[test]
    fn kappa_one_sequence() {
        let seq = lens_sequence(1, 2).unwrap();
        assert_eq!(seq.terms[1..], [pair(1, 1), pair(3, 2)]);
        assert!(lens_sequence(0, 2).is_err());
    }

    #[test]
    fn sequence_terms_are_coprime_and_even_for_kappa_two() {
        let seq = lens_sequence(2, 40).unwrap();
        for k in 1..=40 {
            assert!(seq.p(k).gcd(seq.q(k)).is_one());
            assert!(seq.p(k).is_even());
        }
    }

    #[test]
    fn formula_instances_from_small_cases() {
        let r = check_formulae(2, 2).unwrap();
        let one = r.checks.iter().find(|c| c.formula == 1).unwrap();
        assert_eq!((one.lhs.as_str(), one.rhs.as_str()), ("8", "8"));
        let two = r.checks.iter().find(|c| c.instance == "l=2").unwrap();
        assert_eq!(two.lhs, "8");
        let four = r
            .checks
            .iter()
            .find(|c| c.instance == "m=2,n=2 mod p_n")
            .unwrap();
        assert_eq!((four.lhs.as_str(), four.rhs.as_str()), ("1", "1"));
        assert!(r.all_pass());
        assert!(check_formulae(2, 0).is_err());
    }

    #[test]
    fn continued_fractions() {
        let cf = |p: i64, q: i64| continued_fraction(&p.into(), &q.into()).unwrap().terms;
        assert_eq!(cf(8, 3), big(&[2, 1, 2]));
        assert_eq!(cf(30, 11), big(&[2, 1, 2, 1, 2]));
        assert_eq!(cf(2, 1), big(&[2]));
        assert_eq!(cf(3, 2), big(&[1, 2]));
        assert!(continued_fraction(&8.into(), &6.into()).is_err());
        assert!(continued_fraction(&3.into(), &5.into()).is_err());
        assert!(continued_fraction(&3.into(), &0.into()).is_err());
    }

    #[test]
    fn evaluation_is_exact() {
        let cf = continued_fraction(&8.into(), &3.into()).unwrap();
        assert_eq!(cf.evaluate(), BigRational::new(8.into(), 3.into()));
        assert!(cf.is_canonical());
    }

    #[test]
    fn crosscaps_on_the_family() {
        let cc = |p: i64, q: i64| bredon_wood_crosscap(&p.into(), &q.into()).unwrap();
        let r = cc(8, 3);
        assert_eq!(r.b, big(&[2, 0, 2]));
        assert_eq!(r.crosscap, 2.into());
        let r = cc(30, 11);
        assert_eq!(r.b, big(&[2, 0, 2, 0, 2]));
        assert_eq!(r.crosscap, 3.into());
        assert_eq!(cc(2, 1).b, big(&[2]));
        assert_eq!(cc(2, 1).crosscap, 1.into());
        assert!(matches!(
            bredon_wood_crosscap(&7.into(), &3.into()),
            Err(LensError::OddP(_))
        ));
    }

    #[test]
    fn crosscap_json_shape() {
        let r = bredon_wood_crosscap(&8.into(), &3.into()).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"cf":[2,1,2],"b":[2,0,2],"crosscap":2}"#
        );
        let seq = lens_sequence(2, 2).unwrap();
        assert_eq!(
            serde_json::to_string(&seq).unwrap(),
            r#"{"kappa":2,"terms":[[0,1],[2,1],[8,3]]}"#
        );
    }
}
