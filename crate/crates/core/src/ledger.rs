//! Exact bookkeeping of N-exponents that are affine in δ.
//!
//! An [`ExponentExpr`] `a + b·δ` stands for the power `N^{a + bδ}`. Balance
//! tables are stored as data ([`catalog`]) and recomputed exactly.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

/// `p/q` as a normalized big rational.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn fmt_pq(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a terminating decimal such as `0.51`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let digits: BigInt = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp)
            .parse()
            .map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(digits, den);
        return Ok(if neg { -r } else { r });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

mod pq {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_pq(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// The exponent `const_part + delta_coeff·δ` of a power of N.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentExpr {
    #[serde(rename = "const", with = "pq")]
    pub const_part: BigRational,
    #[serde(rename = "delta", with = "pq")]
    pub delta_coeff: BigRational,
}

impl ExponentExpr {
    pub fn new(const_part: BigRational, delta_coeff: BigRational) -> Self {
        ExponentExpr { const_part, delta_coeff }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    /// `p/q` with no δ dependence.
    pub fn c(p: i64, q: i64) -> Self {
        Self::new(rat(p, q), BigRational::zero())
    }

    /// `p/q + (r/s)·δ`.
    pub fn affine(p: i64, q: i64, r: i64, s: i64) -> Self {
        Self::new(rat(p, q), rat(r, s))
    }

    /// Exact value at δ.
    pub fn eval(&self, delta: &DeltaParam) -> BigRational {
        self.eval_at(delta.value())
    }

    pub fn eval_at(&self, delta: &BigRational) -> BigRational {
        &self.const_part + &self.delta_coeff * delta
    }

    pub fn eval_f64(&self, delta: f64) -> f64 {
        to_f64(&self.const_part) + to_f64(&self.delta_coeff) * delta
    }

    pub fn depends_on_delta(&self) -> bool {
        !self.delta_coeff.is_zero()
    }
}

impl fmt::Display for ExponentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.delta_coeff;
        if b.is_zero() {
            return write!(f, "{}", self.const_part);
        }
        let coef = if b.abs().is_one() { String::new() } else { format!("{}·", b.abs()) };
        if self.const_part.is_zero() {
            let sign = if b.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{coef}δ");
        }
        let sign = if b.is_negative() { '-' } else { '+' };
        write!(f, "{} {sign} {coef}δ", self.const_part)
    }
}

impl Add for ExponentExpr {
    type Output = ExponentExpr;
    fn add(self, o: ExponentExpr) -> ExponentExpr {
        ExponentExpr::new(self.const_part + o.const_part, self.delta_coeff + o.delta_coeff)
    }
}

impl<'a> Add<&'a ExponentExpr> for ExponentExpr {
    type Output = ExponentExpr;
    fn add(self, o: &'a ExponentExpr) -> ExponentExpr {
        ExponentExpr::new(self.const_part + &o.const_part, self.delta_coeff + &o.delta_coeff)
    }
}

impl Sub for ExponentExpr {
    type Output = ExponentExpr;
    fn sub(self, o: ExponentExpr) -> ExponentExpr {
        self + (-o)
    }
}

impl Neg for ExponentExpr {
    type Output = ExponentExpr;
    fn neg(self) -> ExponentExpr {
        ExponentExpr::new(-self.const_part, -self.delta_coeff)
    }
}

impl Sum for ExponentExpr {
    fn sum<I: Iterator<Item = ExponentExpr>>(iter: I) -> Self {
        iter.fold(ExponentExpr::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a ExponentExpr> for ExponentExpr {
    fn sum<I: Iterator<Item = &'a ExponentExpr>>(iter: I) -> Self {
        iter.fold(ExponentExpr::zero(), |a, b| a + b)
    }
}

/// The frequency-balance parameter δ, restricted to (1/3, 5/8].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DeltaParam(BigRational);

impl DeltaParam {
    pub fn new(value: BigRational) -> Result<Self> {
        if value > rat(1, 3) && value <= rat(5, 8) {
            Ok(DeltaParam(value))
        } else {
            Err(Error::DeltaOutOfRange(fmt_pq(&value)))
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        Self::new(rat(p, q))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }

    /// The upper endpoint 5/8.
    pub fn max() -> Self {
        DeltaParam(rat(5, 8))
    }

    pub fn half() -> Self {
        DeltaParam(rat(1, 2))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn as_f64(&self) -> f64 {
        to_f64(&self.0)
    }
}

impl fmt::Display for DeltaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_pq(&self.0))
    }
}

impl TryFrom<String> for DeltaParam {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        DeltaParam::parse(&s)
    }
}

impl From<DeltaParam> for String {
    fn from(d: DeltaParam) -> String {
        fmt_pq(&d.0)
    }
}

/// Exact componentwise sum.
pub fn combine_exponents(terms: &[ExponentExpr]) -> ExponentExpr {
    terms.iter().sum()
}

/// Summability margin `-expr(δ) - 1`; positive means log-free dyadic summation.
pub fn logfree_margin(expr: &ExponentExpr, delta: &DeltaParam) -> BigRational {
    -expr.eval(delta) - BigRational::one()
}

/// A named list of exponent contributions and the total it must produce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceTable {
    pub name: String,
    pub terms: Vec<(String, ExponentExpr)>,
    pub expected_total: ExponentExpr,
    /// Coronal tables only make sense for δ > 1/2.
    pub coronal: bool,
}

impl BalanceTable {
    fn new(name: &str, coronal: bool, terms: Vec<(&str, ExponentExpr)>, expected: ExponentExpr) -> Self {
        BalanceTable {
            name: name.to_string(),
            terms: terms.into_iter().map(|(l, e)| (l.to_string(), e)).collect(),
            expected_total: expected,
            coronal,
        }
    }

    pub fn total(&self) -> ExponentExpr {
        self.terms.iter().map(|(_, e)| e).sum()
    }

    pub fn is_active(&self, delta: &DeltaParam) -> bool {
        !self.coronal || *delta.value() > rat(1, 2)
    }

    /// Replaces the term labelled `label`; returns false if absent.
    pub fn substitute(&mut self, label: &str, expr: ExponentExpr) -> bool {
        match self.terms.iter_mut().find(|(l, _)| l == label) {
            Some(t) => {
                t.1 = expr;
                true
            }
            None => false,
        }
    }
}

/// Every balance table of the analysis, as shipped data.
pub fn catalog() -> Vec<BalanceTable> {
    use ExponentExpr as E;
    let local = E::c(-21, 4);
    let coronal_local = E::affine(-19, 4, -1, 1);
    let heat_local = E::c(-19, 6);
    vec![
        BalanceTable::new(
            "local-balance",
            false,
            vec![
                ("phase reserve", E::c(-3, 1)),
                ("H^-1 from output frequency", E::c(-1, 1)),
                ("window length", E::c(-1, 2)),
                ("local Strichartz hypothesis", E::c(-1, 2)),
                ("bilinear decoupling", E::c(-1, 4)),
            ],
            local.clone(),
        ),
        BalanceTable::new(
            "coronal-local",
            true,
            vec![("local balance unit", local.clone()), ("null-form symbol", E::affine(1, 2, -1, 1))],
            coronal_local.clone(),
        ),
        BalanceTable::new(
            "coronal-global",
            true,
            vec![
                ("coronal local unit", coronal_local),
                ("tile pairs", E::c(2, 1)),
                ("time windows", E::c(1, 2)),
                ("commutators", E::c(1, 2)),
            ],
            E::affine(-7, 4, -1, 1),
        ),
        BalanceTable::new(
            "offdiag-global",
            false,
            vec![
                ("local balance unit", local.clone()),
                ("angular tiles", E::c(1, 1)),
                ("time windows", E::c(1, 2)),
            ],
            E::c(-15, 4),
        ),
        BalanceTable::new(
            "heat-local",
            false,
            vec![
                ("phase reserve", E::c(-3, 1)),
                ("heat L6 on cylinder", E::c(1, 12)),
                ("static decoupling", E::c(-1, 4)),
            ],
            heat_local.clone(),
        ),
        BalanceTable::new(
            "heat-global",
            false,
            vec![
                ("heat local unit", heat_local.clone()),
                ("global time accounting", E::c(1, 12)),
                ("angular tiles", E::c(1, 1)),
            ],
            E::c(-25, 12),
        ),
        BalanceTable::new(
            "local-A",
            false,
            vec![
                ("phase reserve", E::c(-3, 1)),
                ("H^-1 from output frequency", E::c(-1, 1)),
                ("window length", E::c(-1, 2)),
                ("Strichartz hypothesis and decoupling", E::c(-3, 4)),
            ],
            local.clone(),
        ),
        BalanceTable::new(
            "local-B",
            false,
            vec![
                ("phase reserve", E::c(-3, 1)),
                ("heat L6 on cylinder", E::c(1, 12)),
                ("static decoupling", E::c(-1, 4)),
            ],
            heat_local.clone(),
        ),
        BalanceTable::new(
            "global-A",
            false,
            vec![
                ("local unit A", local),
                ("angular tiles", E::c(1, 1)),
                ("time windows", E::c(1, 2)),
            ],
            E::c(-15, 4),
        ),
        BalanceTable::new(
            "global-B",
            false,
            vec![
                ("local unit B", heat_local),
                ("angular tiles", E::c(1, 1)),
                ("global time accounting", E::c(1, 12)),
            ],
            E::c(-25, 12),
        ),
    ]
}

/// One row of [`verify_tables`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCheck {
    pub name: String,
    pub computed: ExponentExpr,
    pub expected: ExponentExpr,
    pub exact: bool,
    /// `Some(margin)` when the table is active at the probe δ, else `None`.
    #[serde(with = "opt_pq")]
    pub margin: Option<BigRational>,
    pub pass: bool,
}

mod opt_pq {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_pq(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

/// Recomputes each table and its log-free margin at `delta`.
pub fn verify_tables(tables: &[BalanceTable], delta: &DeltaParam) -> Vec<TableCheck> {
    tables
        .iter()
        .map(|t| {
            let computed = t.total();
            let exact = computed == t.expected_total;
            let margin = t.is_active(delta).then(|| logfree_margin(&computed, delta));
            let pass = exact && margin.as_ref().map_or(true, |m| m.is_positive());
            TableCheck { name: t.name.clone(), computed, expected: t.expected_total.clone(), exact, margin, pass }
        })
        .collect()
}

/// [`verify_tables`] on the shipped catalog at δ = 5/8.
pub fn verify_catalog() -> Vec<TableCheck> {
    verify_tables(&catalog(), &DeltaParam::max())
}

/// Partial sum and closed-form full tail of `Σ_{k ≥ k0} 2^{-αk}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSum {
    pub partial: f64,
    pub tail_bound: f64,
}

pub fn dyadic_tail_sum(alpha: &BigRational, k0: i64, k_max: i64) -> Result<TailSum> {
    if !alpha.is_positive() {
        return Err(Error::Divergent(fmt_pq(alpha)));
    }
    let a = to_f64(alpha);
    let r = 2f64.powf(-a);
    let partial = (k0..=k_max).map(|k| 2f64.powf(-a * k as f64)).sum();
    let tail_bound = 2f64.powf(-a * k0 as f64) / (1.0 - r);
    Ok(TailSum { partial, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(ExponentExpr::affine(-19, 4, -1, 1).to_string(), "-19/4 - δ");
        assert_eq!(ExponentExpr::affine(-6, 1, 4, 1).to_string(), "-6 + 4·δ");
        assert_eq!(ExponentExpr::c(-21, 4).to_string(), "-21/4");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("5/8").unwrap(), rat(5, 8));
        assert_eq!(parse_rational("0.51").unwrap(), rat(51, 100));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn substitution_changes_total() {
        let mut t = catalog().into_iter().find(|t| t.name == "local-balance").unwrap();
        assert!(t.substitute("bilinear decoupling", ExponentExpr::c(-1, 6)));
        assert_eq!(t.total(), ExponentExpr::c(-31, 6));
        assert!(!t.substitute("missing", ExponentExpr::zero()));
    }
}
