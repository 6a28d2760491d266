//! Exact Laurent polynomials.
//!
//! `HalfLaurent` lives in Z[z^{±1/2}] and stores exponents as half-steps
//! (the key `k` stands for z^{k/2}). `MultiLaurent` lives in
//! Z[a^{±1}, z^{±1}, A, B].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HalfLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff * z^{half_exp/2}`
    pub fn monomial(half_exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(half_exp, coeff.into());
        p
    }

    /// `z^k` for an integer `k`.
    pub fn z_pow(k: i64) -> Self {
        Self::monomial(2 * k, 1)
    }

    pub fn from_pairs<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, half_exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(half_exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&half_exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, half_exp: i64) -> BigInt {
        self.terms.get(&half_exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by z^{half_shift/2}.
    pub fn shift(&self, half_shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + half_shift, v.clone())).collect(),
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(*e, c.clone());
        }
    }

    /// True when every exponent is an integer power of z.
    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// `[[half_exp, coeff], ...]` ascending.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!([e, json_int(c)]))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let mut p = Self::zero();
        for item in v.as_array()? {
            let pair = item.as_array()?;
            if pair.len() != 2 {
                return None;
            }
            let e = pair[0].as_i64()?;
            let c: BigInt = match &pair[1] {
                serde_json::Value::Number(n) => BigInt::from(n.as_i64()?),
                serde_json::Value::String(s) => s.parse().ok()?,
                _ => return None,
            };
            p.add_term(e, c);
        }
        Some(p)
    }
}

fn json_int(c: &BigInt) -> serde_json::Value {
    match i64::try_from(c) {
        Ok(v) => serde_json::json!(v),
        Err(_) => serde_json::json!(c.to_string()),
    }
}

fn z_factor(half_exp: i64) -> String {
    match half_exp {
        0 => String::new(),
        2 => "z".to_string(),
        e if e % 2 == 0 => format!("z^{}", e / 2),
        e => format!("z^{}/2", e),
    }
}

fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (String, &'a BigInt)>,
{
    let mut first = true;
    for (mono, c) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        let body = if mono.is_empty() {
            abs.to_string()
        } else if abs.is_one() {
            mono
        } else {
            format!("{}{}", abs, mono)
        };
        match (first, neg) {
            (true, false) => write!(f, "{}", body)?,
            (true, true) => write!(f, "-{}", body)?,
            (false, false) => write!(f, " + {}", body)?,
            (false, true) => write!(f, " - {}", body)?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(e, c)| (z_factor(*e), c)))
    }
}

impl Add for &HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for HalfLaurent {
    type Output = HalfLaurent;
    fn add(mut self, rhs: HalfLaurent) -> HalfLaurent {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        HalfLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        -&self
    }
}

impl Sub for &HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: &HalfLaurent) -> HalfLaurent {
        self + &(-rhs)
    }
}

impl Sub for HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: HalfLaurent) -> HalfLaurent {
        &self - &rhs
    }
}

impl Mul for &HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = HalfLaurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: HalfLaurent) -> HalfLaurent {
        &self * &rhs
    }
}

pub fn hl_add(p: &HalfLaurent, q: &HalfLaurent) -> HalfLaurent {
    p + q
}

pub fn hl_mul(p: &HalfLaurent, q: &HalfLaurent) -> HalfLaurent {
    p * q
}

pub fn hl_scale(p: &HalfLaurent, c: &BigInt) -> HalfLaurent {
    p.scale(c)
}

/// Exponent of a monomial a^{e_a} z^{e_z} A^{e_A} B^{e_B}.
pub type MultiExp = [i64; 4];

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiLaurent {
    terms: BTreeMap<MultiExp, BigInt>,
}

impl MultiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial([0, 0, 0, 0], 1)
    }

    pub fn monomial(exp: MultiExp, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    pub fn a_pow(k: i64) -> Self {
        Self::monomial([k, 0, 0, 0], 1)
    }

    pub fn z_pow(k: i64) -> Self {
        Self::monomial([0, k, 0, 0], 1)
    }

    pub fn var_a_big() -> Self {
        Self::monomial([0, 0, 1, 0], 1)
    }

    pub fn var_b_big() -> Self {
        Self::monomial([0, 0, 0, 1], 1)
    }

    pub fn add_term(&mut self, exp: MultiExp, coeff: BigInt) {
        assert!(exp[2] >= 0 && exp[3] >= 0, "A and B exponents must be nonnegative");
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiExp, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: MultiExp) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by a^{da} z^{dz}.
    pub fn shift(&self, da: i64, dz: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| ([e[0] + da, e[1] + dz, e[2], e[3]], v.clone()))
                .collect(),
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(*e, c.clone());
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn has_ab(&self) -> bool {
        self.terms.keys().any(|e| e[2] != 0 || e[3] != 0)
    }

    /// Largest power of `a`, or `None` for the zero polynomial.
    pub fn degree_a(&self) -> Option<i64> {
        self.terms.keys().map(|e| e[0]).max()
    }

    /// Replace A by z - 1 and B by -1.
    pub fn substitute_ab(&self) -> Self {
        let a_sub = &Self::z_pow(1) - &Self::one();
        let b_sub = -&Self::one();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mono = Self::monomial([e[0], e[1], 0, 0], c.clone());
            let term = &(&mono * &a_sub.pow(e[2] as u32)) * &b_sub.pow(e[3] as u32);
            out.add_assign_ref(&term);
        }
        out
    }

    /// The z-polynomial multiplying a^{e}; A and B must already be eliminated.
    pub fn coefficient_of_a(&self, e: i64) -> HalfLaurent {
        assert!(!self.has_ab(), "substitute A and B first");
        let mut out = HalfLaurent::zero();
        for (exp, c) in &self.terms {
            if exp[0] == e {
                out.add_term(2 * exp[1], c.clone());
            }
        }
        out
    }

    /// Render grouped by powers of `a`, e.g. `(z^-1 - 1)a^-4 + z^-1a^-2`.
    pub fn render_by_a(&self) -> String {
        if self.has_ab() {
            return self.to_string();
        }
        let mut powers: Vec<i64> = self.terms.keys().map(|e| e[0]).collect();
        powers.dedup();
        if powers.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, k) in powers.iter().enumerate() {
            let c = self.coefficient_of_a(*k);
            let a = match *k {
                0 => String::new(),
                1 => "a".to_string(),
                k => format!("a^{}", k),
            };
            let body = if c.len() == 1 {
                let (e, v) = c.terms().next().unwrap();
                let s = HalfLaurent::monomial(e, v.clone()).to_string();
                if a.is_empty() {
                    s
                } else if s == "1" {
                    a.clone()
                } else if s == "-1" {
                    format!("-{}", a)
                } else {
                    format!("{}{}", s, a)
                }
            } else {
                format!("({}){}", c, a)
            };
            if i == 0 {
                out.push_str(&body);
            } else if let Some(rest) = body.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!([e[0], e[1], e[2], e[3], json_int(c)]))
                .collect(),
        )
    }
}

fn multi_factor(e: &MultiExp) -> String {
    let mut s = String::new();
    for (name, k) in ["a", "z", "A", "B"].iter().zip(e.iter()) {
        match *k {
            0 => {}
            1 => s.push_str(name),
            k => s.push_str(&format!("{}^{}", name, k)),
        }
    }
    s
}

impl fmt::Display for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(e, c)| (multi_factor(e), c)))
    }
}

impl Add for &MultiLaurent {
    type Output = MultiLaurent;
    fn add(self, rhs: &MultiLaurent) -> MultiLaurent {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Neg for &MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        MultiLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &MultiLaurent {
    type Output = MultiLaurent;
    fn sub(self, rhs: &MultiLaurent) -> MultiLaurent {
        self + &(-rhs)
    }
}

impl Mul for &MultiLaurent {
    type Output = MultiLaurent;
    fn mul(self, rhs: &MultiLaurent) -> MultiLaurent {
        let mut out = MultiLaurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

pub fn ml_substitute_ab(p: &MultiLaurent) -> MultiLaurent {
    p.substitute_ab()
}

pub fn ml_coefficient_of_a(p: &MultiLaurent, e: i64) -> HalfLaurent {
    p.coefficient_of_a(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_exponents_cancel() {
        assert_eq!(&HalfLaurent::z_pow(-1) * &HalfLaurent::z_pow(1), HalfLaurent::one());
    }

    #[test]
    fn sum_of_resolution_values() {
        let p = &HalfLaurent::z_pow(-2) + &HalfLaurent::one();
        let s = &p + &HalfLaurent::z_pow(-1);
        assert_eq!(s.to_string(), "z^-2 + z^-1 + 1");
        assert_eq!(&HalfLaurent::zero() + &s, s);
    }

    #[test]
    fn rendering() {
        let p = HalfLaurent::from_pairs([(-1, -2), (0, 1), (4, 3)]);
        assert_eq!(p.to_string(), "-2z^-1/2 + 1 + 3z^2");
        assert_eq!(HalfLaurent::zero().to_string(), "0");
        assert_eq!(p.to_json().to_string(), "[[-1,-2],[0,1],[4,3]]");
        assert_eq!(HalfLaurent::from_json(&p.to_json()), Some(p));
    }

    #[test]
    fn substitute_examples() {
        let a_big = MultiLaurent::var_a_big().substitute_ab();
        assert_eq!(a_big, &MultiLaurent::z_pow(1) - &MultiLaurent::one());
        let b2 = MultiLaurent::var_b_big().pow(2).substitute_ab();
        assert_eq!(b2, MultiLaurent::one());
        let mono = MultiLaurent::monomial([1, 0, 1, 1], 1).substitute_ab();
        let expect = &MultiLaurent::monomial([1, 0, 0, 0], 1) - &MultiLaurent::monomial([1, 1, 0, 0], 1);
        assert_eq!(mono, expect);
    }

    #[test]
    fn coefficient_extraction() {
        let mut p = MultiLaurent::zero();
        for (ea, ez, c) in [(-4, -1, 1), (-4, 0, -1), (-3, -2, -1), (-3, -1, -1), (-2, -1, 1), (-1, -2, 1), (-1, -1, 1), (-1, 0, 1)] {
            p.add_term([ea, ez, 0, 0], BigInt::from(c));
        }
        assert_eq!(p.coefficient_of_a(-1).to_string(), "z^-2 + z^-1 + 1");
        assert!(p.coefficient_of_a(5).is_zero());
        assert_eq!(MultiLaurent::one().coefficient_of_a(0), HalfLaurent::one());
        assert_eq!(
            p.render_by_a(),
            "(z^-1 - 1)a^-4 + (-z^-2 - z^-1)a^-3 + z^-1a^-2 + (z^-2 + z^-1 + 1)a^-1"
        );
    }
}
