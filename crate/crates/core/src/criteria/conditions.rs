//! The existence inequalities as registered strategies, each decided exactly
//! by clearing fractional exponents, plus the table thresholds built on them.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::constants::CConstant;
use crate::cache::Cache;
use crate::cyclo::factor_count_cached;
use crate::error::{Error, Result};
use crate::integer::modular::prime_power;
use crate::integer::{log2_gap, power_inequality, Factorizer, PowerTerm};
use crate::registry::Registry;

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Big-integer comparison after clearing denominators.
    Exact,
    /// Sign of the log gap, trusted only when `|gap| > FLOAT_GUARD`;
    /// otherwise the report falls back to `Exact`.
    FloatWithGuard,
}

/// Smallest log2 gap for which a float verdict is accepted.
pub const FLOAT_GUARD: f64 = 1e-6;

/// Everything needed to recompute a verdict offline.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub nu: Option<u32>,
    /// `W(q^n - 1)`, exact mode of the main condition only.
    #[serde(with = "crate::serde_big::option", default)]
    pub w_group: Option<BigUint>,
    /// Number of distinct primes of `q^n - 1`.
    pub omega: Option<u64>,
    /// Irreducible factor count `k` of `x^{n2} - 1`; `W = 2^k`.
    pub cyclo_factors: Option<u64>,
    /// Primes entering the `𝒞` constant.
    pub primes: Vec<u64>,
    pub excluded_prime: Option<u64>,
    pub ab: Option<(u64, u64)>,
    pub lhs: Vec<PowerTerm>,
    pub rhs: Vec<PowerTerm>,
    pub clearing: u64,
    pub log2_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub q: u64,
    pub n1: u64,
    pub n2: u64,
    pub condition_id: String,
    pub holds: bool,
    pub mode: Mode,
    pub provenance: Provenance,
}

impl ConditionReport {
    /// Re-decides the verdict from the recorded terms alone.
    pub fn recompute(&self) -> Result<bool> {
        let p = &self.provenance;
        power_inequality(&p.lhs, &p.rhs, p.clearing)
    }
}

/// Shared resources for condition checks.
#[derive(Clone, Default)]
pub struct CheckEnv {
    pub factorizer: Factorizer,
}

impl CheckEnv {
    pub fn cache(&self) -> Option<&Cache> {
        self.factorizer.cache.as_deref()
    }

    fn cyclo_count(&self, q: u64, n: u64) -> Result<u64> {
        factor_count_cached(q, n, self.cache())
    }
}

/// One inequality `Π lhs > Π rhs` in `(q, n1, n2)`.
pub trait Condition: Send + Sync {
    fn id(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    /// Terms of both sides; `provenance.log2_gap` is left at zero.
    fn terms(&self, env: &CheckEnv, q: u64, n1: u64, n2: u64) -> Result<Provenance>;

    fn check(&self, env: &CheckEnv, q: u64, n1: u64, n2: u64, mode: Mode) -> Result<ConditionReport> {
        validate(q, n1, n2)?;
        let mut prov = self.terms(env, q, n1, n2)?;
        prov.log2_gap = log2_gap(&prov.lhs, &prov.rhs);
        let (holds, mode) = if mode == Mode::FloatWithGuard && prov.log2_gap.abs() > FLOAT_GUARD {
            (prov.log2_gap > 0.0, Mode::FloatWithGuard)
        } else {
            (power_inequality(&prov.lhs, &prov.rhs, prov.clearing)?, Mode::Exact)
        };
        Ok(ConditionReport { q, n1, n2, condition_id: self.id().into(), holds, mode, provenance: prov })
    }
}

fn validate(q: u64, n1: u64, n2: u64) -> Result<u64> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter("n1 and n2 must be positive".into()));
    }
    Ok(p)
}

fn nu_for(n1: u64) -> Result<u32> {
    u32::try_from(4 * n1)
        .ok()
        .filter(|&nu| nu <= super::MAX_NU)
        .ok_or_else(|| Error::InvalidParameter(format!("n1 = {n1} gives nu beyond {}", super::MAX_NU)))
}

/// `(a, b)` with `W(x^n - 1) ≤ 2^((n + a)/b)` for every `n`.
pub fn small_q_ab(q: u64) -> Result<(u64, u64)> {
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    Ok(match q {
        2 => (14, 5),
        3 => (20, 4),
        4 => (12, 3),
        5 => (18, 3),
        7..=27 => (q - 1, 2),
        _ => (0, 1),
    })
}

/// `q^{n2/2} > n1·W(q^n - 1)·W(x^{n2} - 1)`, with `q^n - 1` factored.
struct MainExact;

impl Condition for MainExact {
    fn id(&self) -> &'static str {
        "thm-main-exact"
    }
    fn describe(&self) -> &'static str {
        "q^(n2/2) > n1 W(q^n - 1) W(x^n2 - 1), exact factorization"
    }
    fn terms(&self, env: &CheckEnv, q: u64, n1: u64, n2: u64) -> Result<Provenance> {
        let n = u32::try_from(n1 * n2).map_err(|_| Error::InvalidParameter("n too large".into()))?;
        let f = env.factorizer.factorize(&(BigUint::from(q).pow(n) - 1u32))?;
        f.require_complete()?;
        let omega = f.primes.len() as u64;
        let k = env.cyclo_count(q, n2)?;
        Ok(Provenance {
            w_group: Some(BigUint::one() << omega),
            omega: Some(omega),
            cyclo_factors: Some(k),
            primes: f.primes.iter().filter_map(|(p, _)| p.to_u64()).collect(),
            lhs: vec![PowerTerm::new(q, n2, 2)],
            rhs: vec![PowerTerm::int(n1), PowerTerm::new(2u32, omega + k, 1)],
            clearing: 2,
            ..Provenance::default()
        })
    }
}

/// `q^{n2/4}·P^{1/ν} > n1·2^{π + n2}`: the main condition with `W(q^n-1)`
/// bounded by `𝒞_ν q^{n/ν}` and `W(x^{n2}-1) ≤ 2^{n2}`.
struct Eq71;

impl Condition for Eq71 {
    fn id(&self) -> &'static str {
        "eq-7.1"
    }
    fn describe(&self) -> &'static str {
        "n2 (log q / 4 - log 2) > log n1 + log C_nu, nu = 4 n1"
    }
    fn terms(&self, _env: &CheckEnv, q: u64, n1: u64, n2: u64) -> Result<Provenance> {
        let nu = nu_for(n1)?;
        let c = CConstant::full(nu)?;
        Ok(Provenance {
            nu: Some(nu),
            primes: Vec::new(),
            lhs: vec![PowerTerm::new(q, n2, 4), PowerTerm::new(c.prime_product, 1, nu as u64)],
            rhs: vec![PowerTerm::int(n1), PowerTerm::new(2u32, c.prime_count + n2, 1)],
            clearing: nu as u64,
            ..Provenance::default()
        })
    }
}

/// `q^{n2/4}·P_α^{1/ν} > n1·2^{r_α + k}` with `α = q^{n1 n2} - 1`.
struct Eq72;

impl Condition for Eq72 {
    fn id(&self) -> &'static str {
        "eq-7.2"
    }
    fn describe(&self) -> &'static str {
        "q^(n2/4) > n1 C_nu^(q^n - 1) W(x^n2 - 1), nu = 4 n1"
    }
    fn terms(&self, env: &CheckEnv, q: u64, n1: u64, n2: u64) -> Result<Provenance> {
        let nu = nu_for(n1)?;
        let (c, primes) = CConstant::for_pow_minus_one(nu, q, n1 * n2)?;
        let k = env.cyclo_count(q, n2)?;
        Ok(Provenance {
            nu: Some(nu),
            cyclo_factors: Some(k),
            primes,
            lhs: vec![PowerTerm::new(q, n2, 4), PowerTerm::new(c.prime_product, 1, nu as u64)],
            rhs: vec![PowerTerm::int(n1), PowerTerm::new(2u32, c.prime_count + k, 1)],
            clearing: nu as u64,
            ..Provenance::default()
        })
    }
}

/// `q^{n2/4}·P'^{1/ν} > n1·2^{r'}·2^{(a + n2)/b}`: the characteristic
/// dropped from `𝒞` and `W(x^{n2}-1) ≤ 2^{(n2+a)/b}`.
struct Eq73;

impl Condition for Eq73 {
    fn id(&self) -> &'static str {
        "eq-7.3"
    }
    fn describe(&self) -> &'static str {
        "n2 (log q / 4 - log 2 / b) > log n1 + log C'_nu + (a / b) log 2"
    }
    fn terms(&self, _env: &CheckEnv, q: u64, n1: u64, n2: u64) -> Result<Provenance> {
        let nu = nu_for(n1)?;
        let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let (a, b) = small_q_ab(q)?;
        let c = CConstant::without_prime(nu, p)?;
        Ok(Provenance {
            nu: Some(nu),
            excluded_prime: Some(p),
            ab: Some((a, b)),
            lhs: vec![PowerTerm::new(q, n2, 4), PowerTerm::new(c.prime_product, 1, nu as u64)],
            rhs: vec![
                PowerTerm::int(n1),
                PowerTerm::new(2u32, c.prime_count, 1),
                PowerTerm::new(2u32, a + n2, b),
            ],
            clearing: num_integer::lcm(num_integer::lcm(4, b), nu as u64),
            ..Provenance::default()
        })
    }
}

pub fn condition_registry() -> Registry<dyn Condition> {
    let mut reg: Registry<dyn Condition> = Registry::new("condition");
    reg.register("thm-main-exact", Box::new(MainExact))
        .register("eq-7.1", Box::new(Eq71))
        .register("eq-7.2", Box::new(Eq72))
        .register("eq-7.3", Box::new(Eq73));
    reg
}

/// Which side of the main inequality to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MainMode {
    /// Factor `q^n - 1` and use `W` itself.
    Exact,
    /// Replace `W(q^n - 1)` by `𝒞_ν^{(α)} q^{n/ν}`.
    Bound,
}

pub fn check_main_condition(env: &CheckEnv, q: u64, n1: u64, n2: u64, mode: MainMode) -> Result<ConditionReport> {
    match mode {
        MainMode::Exact => MainExact.check(env, q, n1, n2, Mode::Exact),
        MainMode::Bound => Eq72.check(env, q, n1, n2, Mode::Exact),
    }
}

pub fn eq72_check(env: &CheckEnv, q: u64, n1: u64, n2: u64) -> Result<ConditionReport> {
    Eq72.check(env, q, n1, n2, Mode::Exact)
}

/// A table entry: the least `n2` for which the condition holds, so that
/// every failing `n2` lies below it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub q: u64,
    pub n1: u64,
    pub variant: String,
    /// `RHS / coefficient` in double precision.
    pub threshold: f64,
    pub n2: u64,
    /// The `𝒞` constant used, at the printed precision.
    pub constant: String,
    pub constant_excludes: Option<u64>,
}

/// A condition linear in `n2` on the log scale: `n2·coef > rhs`.
pub trait ThresholdVariant: Send + Sync {
    fn id(&self) -> &'static str;
    fn condition(&self) -> &dyn Condition;
    /// `(coef, rhs)` in natural logs.
    fn linear_form(&self, q: u64, n1: u64) -> Result<(f64, f64)>;
    fn constant(&self, q: u64, n1: u64) -> Result<CConstant>;

    fn largest_failing_n2(&self, q: u64, n1: u64) -> Result<ThresholdReport> {
        validate(q, n1, 1)?;
        let (coef, rhs) = self.linear_form(q, n1)?;
        if coef <= 0.0 {
            return Err(Error::NonPositiveCoefficient { q });
        }
        let threshold = rhs / coef;
        let env = CheckEnv::default();
        let holds = |n2: u64| -> Result<bool> {
            Ok(n2 > 0 && self.condition().check(&env, q, n1, n2, Mode::Exact)?.holds)
        };
        // The float estimate is within one of the answer; walk to it exactly.
        let mut n2 = threshold.ceil().max(1.0) as u64;
        while n2 > 1 && holds(n2 - 1)? {
            n2 -= 1;
        }
        while !holds(n2)? {
            n2 += 1;
        }
        let c = self.constant(q, n1)?;
        Ok(ThresholdReport {
            q,
            n1,
            variant: self.id().into(),
            threshold,
            n2,
            constant: c.display(),
            constant_excludes: c.excluded,
        })
    }
}

struct Eq71Threshold;

impl ThresholdVariant for Eq71Threshold {
    fn id(&self) -> &'static str {
        "eq-7.1"
    }
    fn condition(&self) -> &dyn Condition {
        &Eq71
    }
    fn linear_form(&self, q: u64, n1: u64) -> Result<(f64, f64)> {
        let ln2 = std::f64::consts::LN_2;
        let c = self.constant(q, n1)?;
        Ok(((q as f64).ln() / 4.0 - ln2, (n1 as f64).ln() + c.log2() * ln2))
    }
    fn constant(&self, _q: u64, n1: u64) -> Result<CConstant> {
        CConstant::full(nu_for(n1)?)
    }
}

struct Eq73Threshold;

impl ThresholdVariant for Eq73Threshold {
    fn id(&self) -> &'static str {
        "eq-7.3"
    }
    fn condition(&self) -> &dyn Condition {
        &Eq73
    }
    fn linear_form(&self, q: u64, n1: u64) -> Result<(f64, f64)> {
        let ln2 = std::f64::consts::LN_2;
        let (a, b) = small_q_ab(q)?;
        let c = self.constant(q, n1)?;
        let coef = (q as f64).ln() / 4.0 - ln2 / b as f64;
        Ok((coef, (n1 as f64).ln() + c.log2() * ln2 + a as f64 / b as f64 * ln2))
    }
    fn constant(&self, q: u64, n1: u64) -> Result<CConstant> {
        let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        CConstant::without_prime(nu_for(n1)?, p)
    }
}

pub fn threshold_registry() -> Registry<dyn ThresholdVariant> {
    let mut reg: Registry<dyn ThresholdVariant> = Registry::new("threshold variant");
    reg.register("eq-7.1", Box::new(Eq71Threshold)).register("eq-7.3", Box::new(Eq73Threshold));
    reg
}

pub fn largest_failing_n2(q: u64, n1: u64, variant: &str) -> Result<ThresholdReport> {
    threshold_registry().get(variant)?.largest_failing_n2(q, n1)
}
